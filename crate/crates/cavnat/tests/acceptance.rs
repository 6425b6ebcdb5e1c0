//! End-to-end acceptance suite. Each test prints one `criterion N: PASS/FAIL`
//! line (run with `--nocapture` to see them all) and then asserts.

use approx::assert_relative_eq;

use cavnat::fock::{self, FockBasis};
use cavnat::moments;
use cavnat::network::{four_site_preset, FourSiteConfig, Interference};
use cavnat::optics::FourSiteOpticalConfig;
use cavnat::sweep::{
    bell_shape_test, find_peak, linear_grid, log_grid, sweep_dephasing, sweep_static_disorder,
    ModelKind, SimConfig,
};

fn report(n: usize, what: &str, pass: bool) {
    println!("criterion {n}: {} - {what}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {what}");
}

fn mz_lossless() -> SimConfig {
    SimConfig {
        model: ModelKind::ClassicalMz,
        optical: FourSiteOpticalConfig::default().lossless_symmetric(),
        ..SimConfig::default()
    }
}

#[test]
fn criterion_1_mach_zehnder_limits() {
    let cfg = mz_lossless();
    let grid = linear_grid(0.0, 10.0, 41).unwrap();
    let sweep = sweep_static_disorder(&cfg, &grid).unwrap();
    let null_ok = sweep.normalized[0] <= 1e-10;
    let quarter_ok = (sweep.normalized[40] - 0.25).abs() <= 0.01;
    let monotone = sweep.normalized.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    report(
        1,
        "Mach-Zehnder null at zero disorder, 1/4 saturation, monotone rise",
        null_ok && quarter_ok && monotone,
    );
}

#[test]
fn criterion_2_mach_zehnder_dephasing_decrease() {
    let cfg = SimConfig { model: ModelKind::ClassicalMz, ..SimConfig::default() };
    let grid = linear_grid(0.0, 4.0, 5).unwrap();
    let sweep = sweep_dephasing(&cfg, 2.0, &grid, false).unwrap();
    let strictly_decreasing = sweep.normalized.windows(2).all(|w| w[1] < w[0]);
    report(2, "window averaging strictly reduces Mach-Zehnder output", strictly_decreasing);
}

#[test]
fn criterion_3_classical_nat_peak() {
    let cfg = SimConfig { model: ModelKind::ClassicalFull, ..SimConfig::default() };
    let grid = linear_grid(0.0, 6.0, 25).unwrap();
    let sweep = sweep_dephasing(&cfg, 2.0, &grid, false).unwrap();
    let bell = bell_shape_test(&sweep, 0.05, 0.05).unwrap();
    let (x, _, interior) = find_peak(&sweep).unwrap();
    report(
        3,
        "full-setup dephasing sweep is bell-shaped with an interior peak in [1.5, 3.5]",
        bell && interior && (1.5..=3.5).contains(&x),
    );
}

#[test]
fn criterion_4_quantum_nat_bell() {
    let cfg = SimConfig { model: ModelKind::Moment, ..SimConfig::default() };
    let grid = log_grid(0.01, 100.0, 25).unwrap();
    let sweep = sweep_dephasing(&cfg, 5.0, &grid, true).unwrap();
    let bell = bell_shape_test(&sweep, 0.10, 0.10).unwrap();
    report(4, "moment-backend dephasing sweep at strong disorder is bell-shaped", bell);
}

#[test]
fn criterion_5_nonmonotonic_disorder() {
    let cfg = SimConfig { model: ModelKind::ClassicalFull, ..SimConfig::default() };
    let grid = linear_grid(0.0, 10.0, 41).unwrap();
    let sweep = sweep_static_disorder(&cfg, &grid).unwrap();
    let (_, _, interior) = find_peak(&sweep).unwrap();
    report(5, "mirror-recycled disorder sweep has an interior maximum", interior);
}

#[test]
fn criterion_6_backend_equivalence() {
    let mut worst: f64 = 0.0;
    for interference in [Interference::Destructive, Interference::Constructive] {
        for disorder in [0.0, 1.0, 3.0, 5.0, 8.0] {
            for dephasing in [0.0, 1.0] {
                let mut cfg = SimConfig {
                    model: ModelKind::Moment,
                    n_max: 2,
                    disorder,
                    dephasing,
                    ..SimConfig::default()
                };
                cfg.quantum.interference = interference;
                cfg.quantum.n_th = 0.01;
                let t_moment = cfg.transmission().unwrap();
                cfg.model = ModelKind::Fock;
                let t_fock = cfg.transmission().unwrap();
                worst = worst.max((t_fock - t_moment).abs() / t_moment);
            }
        }
    }
    report(
        6,
        &format!("Fock and moment backends agree to 2e-3 over 20 points (worst {worst:.3e})"),
        worst <= 2e-3,
    );
}

/// Deterministic xorshift generator so the "random" specs are reproducible.
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[test]
fn criterion_7_conservation_suite() {
    let mut rng = Rng(0x5eed_cafe_f00d_1234);
    let mut pass = true;
    let mut detail = String::new();
    for case in 0..10 {
        let cfg = FourSiteConfig {
            g01: rng.range(0.1, 1.5),
            g02: rng.range(0.1, 1.5),
            g13: rng.range(0.1, 1.5),
            g23: rng.range(0.1, 1.5),
            delta: rng.range(0.0, 5.0),
            gamma1: rng.range(0.0, 2.0),
            gamma2: rng.range(0.0, 2.0),
            gamma0: rng.range(0.05, 0.5),
            n_th: rng.range(0.001, 0.02),
            gamma_det: rng.range(0.2, 1.0),
            interference: if rng.next_f64() < 0.5 {
                Interference::Destructive
            } else {
                Interference::Constructive
            },
        };
        let spec = four_site_preset(&cfg).unwrap();

        // Exact second-moment steady state: flux balance and positivity.
        let sys = moments::build_moment_system(&spec);
        let c = moments::steady_moments(&sys).unwrap();
        let influx = cfg.gamma0 * (cfg.n_th - c.occupation(0));
        let outflux = 2.0 * cfg.gamma_det * c.occupation(3);
        let flux_rel = (influx - outflux).abs() / outflux.abs().max(f64::MIN_POSITIVE);
        let hermitian = c.hermiticity_error() <= 1e-12;
        let psd = c.min_eigenvalue() >= -1e-12;

        // Fock generator: trace annihilation and trace drift under evolution.
        let basis = FockBasis::new(spec.n_modes(), 2);
        let liouv = fock::build_liouvillian(&spec, &basis, fock::DEFAULT_DIM_LIMIT).unwrap();
        let trace_defect = liouv.trace_defect();
        let rho0 = fock::DensityOperator::vacuum(&basis);
        let states = fock::evolve(&liouv, &rho0, &[1.0]).unwrap();
        let drift = (states[0].trace().re - 1.0).abs();

        let ok = flux_rel <= 1e-10 && hermitian && psd && trace_defect <= 1e-12 && drift <= 1e-8;
        if !ok {
            pass = false;
            detail = format!(
                "case {case}: flux_rel = {flux_rel:.2e}, hermitian = {hermitian}, psd = {psd}, \
                 trace_defect = {trace_defect:.2e}, drift = {drift:.2e}"
            );
        }
    }
    report(
        7,
        if pass { "flux balance, positivity, and trace conservation on 10 random specs" } else { &detail },
        pass,
    );
}

#[test]
fn criterion_8_scale_invariance() {
    let base = SimConfig { model: ModelKind::Moment, ..SimConfig::default() };
    let dx_grid = linear_grid(0.0, 10.0, 21).unwrap();
    let deph_grid = log_grid(0.01, 100.0, 21).unwrap();
    let ref_static = sweep_static_disorder(&base, &dx_grid).unwrap();
    let ref_deph = sweep_dephasing(&base, 5.0, &deph_grid, true).unwrap();
    let mut pass = true;
    for s in [0.1, 10.0] {
        let mut cfg = base;
        cfg.quantum.g01 *= s;
        cfg.quantum.g02 *= s;
        cfg.quantum.g13 *= s;
        cfg.quantum.g23 *= s;
        cfg.quantum.gamma0 *= s;
        cfg.quantum.gamma1 *= s;
        cfg.quantum.gamma2 *= s;
        cfg.quantum.gamma_det *= s;
        let st = sweep_static_disorder(&cfg, &dx_grid).unwrap();
        let de = sweep_dephasing(&cfg, 5.0, &deph_grid, true).unwrap();
        for i in 0..dx_grid.len() {
            if (st.normalized[i] - ref_static.normalized[i]).abs() > 1e-9 {
                pass = false;
            }
        }
        for i in 0..deph_grid.len() {
            if (de.normalized[i] - ref_deph.normalized[i]).abs() > 1e-9 {
                pass = false;
            }
        }
        let (x0, _, _) = find_peak(&ref_deph).unwrap();
        let (x1, _, _) = find_peak(&de).unwrap();
        if x0 != x1 {
            pass = false;
        }
    }
    report(8, "uniform rate scaling leaves normalized sweeps and peak location unchanged", pass);
}

#[test]
fn criterion_9_reproduce_determinism() {
    let bin = env!("CARGO_BIN_EXE_cavnat");
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for dir in [&dir_a, &dir_b] {
        let status = std::process::Command::new(bin)
            .args(["reproduce", "fig3", "--classical"])
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(status.status.success(), "reproduce failed: {status:?}");
        let csv = std::fs::read(dir.path().join("fig3-classical.csv")).unwrap();
        let svg = std::fs::read(dir.path().join("fig3-classical.svg")).unwrap();
        outputs.push((csv, svg));
    }
    let pass = outputs[0] == outputs[1];
    report(9, "repeated `reproduce fig3 --classical` runs are byte-identical", pass);
}

#[test]
fn normalization_reference_is_unity_in_every_model() {
    // Cross-cutting invariant backing the criteria above: the constructive,
    // zero-disorder, zero-dephasing point normalizes to exactly 1.
    for model in [ModelKind::Fock, ModelKind::Moment, ModelKind::ClassicalMz, ModelKind::ClassicalFull] {
        let mut cfg = SimConfig { model, ..SimConfig::default() };
        cfg.quantum.interference = Interference::Constructive;
        cfg.optical.interference = Interference::Constructive;
        let raw = cfg.transmission().unwrap();
        let reference = cfg.reference().unwrap();
        assert_relative_eq!(raw / reference, 1.0, epsilon = 1e-12);
    }
}
