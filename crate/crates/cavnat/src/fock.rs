//! Oracle backend on a truncated multimode Fock space: Liouvillian assembly,
//! master-equation time evolution, steady state, and steady transmission.
//!
//! The generators are the network Hamiltonian, pure dephasing with jump
//! operator n_i = a_i†a_i, thermal injection into the source site, and an
//! absorbing sink decay at rate Γ_Det. All dissipators use the
//! `2 JρJ† − {J†J, ρ}` normalization, so the steady photon absorption rate at
//! the sink is 2 Γ_Det ⟨n_k⟩.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{CavnatError, Result};
use crate::linalg::{self, C64, SpMat};
use crate::network::NetworkSpec;

/// Default guard on the superoperator dimension d².
pub const DEFAULT_DIM_LIMIT: usize = 250_000;

/// Truncated Fock basis with a global excitation cutoff: all occupation
/// tuples (n_1..n_N) with Σ n_i ≤ N_max, ordered by total occupation and
/// then lexicographically.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_modes: usize,
    n_max: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockBasis {
    pub fn new(n_modes: usize, n_max: usize) -> Self {
        assert!(n_modes > 0);
        let mut states = Vec::new();
        for total in 0..=n_max {
            let mut occ = vec![0u8; n_modes];
            enumerate_fixed_total(&mut occ, 0, total as u8, &mut states);
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self { n_modes, n_max, states, index }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn state_index(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Annihilation operator a_i as a dense d×d matrix (creation out of the
    /// top excitation shell is truncated away).
    pub fn annihilation(&self, mode: usize) -> DMatrix<C64> {
        assert!(mode < self.n_modes);
        let d = self.dim();
        let mut a = DMatrix::<C64>::zeros(d, d);
        for (col, occ) in self.states.iter().enumerate() {
            let n = occ[mode];
            if n == 0 {
                continue;
            }
            let mut lower = occ.clone();
            lower[mode] -= 1;
            let row = self.index[&lower];
            a[(row, col)] = C64::from((n as f64).sqrt());
        }
        a
    }

    pub fn creation(&self, mode: usize) -> DMatrix<C64> {
        self.annihilation(mode).adjoint()
    }

    pub fn number(&self, mode: usize) -> DMatrix<C64> {
        let d = self.dim();
        let mut n = DMatrix::<C64>::zeros(d, d);
        for (i, occ) in self.states.iter().enumerate() {
            n[(i, i)] = C64::from(occ[mode] as f64);
        }
        n
    }
}

fn enumerate_fixed_total(occ: &mut Vec<u8>, mode: usize, remaining: u8, out: &mut Vec<Vec<u8>>) {
    if mode + 1 == occ.len() {
        occ[mode] = remaining;
        out.push(occ.clone());
        occ[mode] = 0;
        return;
    }
    for n in 0..=remaining {
        occ[mode] = n;
        enumerate_fixed_total(occ, mode + 1, remaining - n, out);
    }
    occ[mode] = 0;
}

/// Density operator on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    pub matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn vacuum(basis: &FockBasis) -> Self {
        let d = basis.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        m[(0, 0)] = Complex::ONE;
        Self { matrix: m }
    }

    /// Pure state |occ⟩⟨occ|.
    pub fn number_state(basis: &FockBasis, occ: &[u8]) -> Option<Self> {
        let d = basis.dim();
        let idx = basis.state_index(occ)?;
        let mut m = DMatrix::<C64>::zeros(d, d);
        m[(idx, idx)] = Complex::ONE;
        Some(Self { matrix: m })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn expect(&self, op: &DMatrix<C64>) -> C64 {
        (op * &self.matrix).trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.matrix)
    }
}

/// Superoperator d²×d² matrix acting on column-stacked vec(ρ).
#[derive(Debug)]
pub struct Liouvillian {
    pub dim: usize,
    sp: SpMat,
    gamma_det: f64,
    sink_site: usize,
}

impl Liouvillian {
    pub fn apply_vec(&self, x: &DVector<C64>) -> DVector<C64> {
        self.sp.matvec(x)
    }

    pub fn apply(&self, rho: &DensityOperator) -> DensityOperator {
        let v = mat_to_vec(&rho.matrix);
        DensityOperator { matrix: vec_to_mat(&self.sp.matvec(&v), self.dim) }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.sp.to_dense()
    }

    /// Elementwise maximum of |vec(I)† L|, the trace-annihilation defect.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let mut tr = DVector::<C64>::zeros(d * d);
        for i in 0..d {
            tr[i * d + i] = Complex::ONE;
        }
        self.sp
            .adjoint_matvec(&tr)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

pub fn mat_to_vec(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn vec_to_mat(v: &DVector<C64>, d: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

/// Network Hamiltonian H = Σ ω_i n_i + Σ g_ij (a_i†a_j + a_i a_j†) on the
/// truncated basis (ħ = 1).
pub fn build_hamiltonian(spec: &NetworkSpec, basis: &FockBasis) -> DMatrix<C64> {
    assert_eq!(spec.n_modes(), basis.n_modes(), "spec/basis mode count mismatch");
    let d = basis.dim();
    let mut h = DMatrix::<C64>::zeros(d, d);
    for m in &spec.modes {
        h += basis.number(m.index) * C64::from(m.detuning);
    }
    for c in &spec.couplings {
        let hop = basis.creation(c.i) * basis.annihilation(c.j);
        let hop = &hop + hop.adjoint();
        h += hop * C64::from(c.g);
    }
    h
}

/// Accumulate the dissipator `rate · (2 JρJ† − {J†J, ρ})` in vectorized form.
fn add_dissipator(sp: &mut SpMat, rate: f64, jump: &DMatrix<C64>, id: &DMatrix<C64>) {
    if rate == 0.0 {
        return;
    }
    let r = C64::from(rate);
    let jj = jump.adjoint() * jump;
    sp.add_scaled_kron(2.0 * r, &jump.conjugate(), jump);
    sp.add_scaled_kron(-r, id, &jj);
    sp.add_scaled_kron(-r, &jj.transpose(), id);
}

/// Assemble the full Liouvillian L with
/// L·vec(ρ) = vec(−i[H,ρ] + L_deph(ρ) + L_inj(ρ) + L_det(ρ)).
pub fn build_liouvillian(
    spec: &NetworkSpec,
    basis: &FockBasis,
    dim_limit: usize,
) -> Result<Liouvillian> {
    let d = basis.dim();
    if d * d > dim_limit {
        return Err(CavnatError::DimensionGuard { actual: d * d, limit: dim_limit });
    }
    let id = DMatrix::<C64>::identity(d, d);
    let h = build_hamiltonian(spec, basis);
    let mut sp = SpMat::zeros(d * d, d * d);
    // −i(I⊗H − Hᵀ⊗I) vec(ρ) = vec(−i[H, ρ])
    sp.add_scaled_kron(-linalg::I, &id, &h);
    sp.add_scaled_kron(linalg::I, &h.transpose(), &id);

    for dep in &spec.dephasing {
        add_dissipator(&mut sp, dep.gamma, &basis.number(dep.i), &id);
    }
    let inj = &spec.injection;
    add_dissipator(&mut sp, inj.n_th * inj.gamma0 / 2.0, &basis.creation(inj.site), &id);
    add_dissipator(
        &mut sp,
        (inj.n_th + 1.0) * inj.gamma0 / 2.0,
        &basis.annihilation(inj.site),
        &id,
    );
    add_dissipator(&mut sp, spec.sink.gamma_det, &basis.annihilation(spec.sink.site), &id);

    Ok(Liouvillian { dim: d, sp, gamma_det: spec.sink.gamma_det, sink_site: spec.sink.site })
}

/// Integrate dρ/dt = L(ρ) from ρ0 at t = 0, sampling at `t_grid`.
pub fn evolve(
    liouv: &Liouvillian,
    rho0: &DensityOperator,
    t_grid: &[f64],
) -> Result<Vec<DensityOperator>> {
    let v0 = mat_to_vec(&rho0.matrix);
    let sols = linalg::integrate_adaptive(|v| liouv.apply_vec(v), v0, t_grid, 1e-9, 1e-12)?;
    Ok(sols
        .into_iter()
        .map(|v| DensityOperator { matrix: vec_to_mat(&v, liouv.dim) })
        .collect())
}

/// Steady state as the kernel of L, with the trace condition imposed by
/// replacing one scalar equation with vec(I)† vec(ρ) = 1.
pub fn steady_state(liouv: &Liouvillian) -> Result<DensityOperator> {
    let d = liouv.dim;
    let n = d * d;
    let mut m = liouv.to_dense();
    let mut rhs = DVector::<C64>::zeros(n);
    for j in 0..n {
        m[(0, j)] = Complex::ZERO;
    }
    for i in 0..d {
        m[(0, i * d + i)] = Complex::ONE;
    }
    rhs[0] = Complex::ONE;
    let sol = linalg::solve_dense(&m, &rhs).ok_or_else(|| {
        CavnatError::Solver("degenerate Liouvillian kernel (non-ergodic network)".into())
    })?;
    let residual = liouv.apply_vec(&sol).norm();
    if residual > 1e-10 {
        return Err(CavnatError::Solver(format!(
            "steady-state residual {residual:.3e} above 1e-10 (non-ergodic network?)"
        )));
    }
    Ok(DensityOperator { matrix: vec_to_mat(&sol, d) })
}

/// Steady photon absorption rate at the sink: 2 Γ_Det ⟨n_k⟩ (1/µs).
pub fn transmission(rho_ss: &DensityOperator, spec: &NetworkSpec, basis: &FockBasis) -> f64 {
    let n_k = rho_ss.expect(&basis.number(spec.sink.site)).re;
    2.0 * spec.sink.gamma_det * n_k
}

/// Convenience path: build, solve, and read out the transmission.
pub fn fock_transmission(spec: &NetworkSpec, n_max: usize, dim_limit: usize) -> Result<f64> {
    let basis = FockBasis::new(spec.n_modes(), n_max);
    let liouv = build_liouvillian(spec, &basis, dim_limit)?;
    let rho = steady_state(&liouv)?;
    Ok(transmission(&rho, spec, &basis))
}

impl Liouvillian {
    /// Transmission read directly from a vectorized state.
    pub fn transmission_of(&self, rho: &DensityOperator, basis: &FockBasis) -> f64 {
        let n_k = rho.expect(&basis.number(self.sink_site)).re;
        2.0 * self.gamma_det * n_k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{four_site_preset, FourSiteConfig, NetworkSpec};
    use approx::assert_relative_eq;

    fn single_mode_spec(omega: f64, gamma0: f64, n_th: f64, gamma_det: f64) -> NetworkSpec {
        NetworkSpec::parse(&format!(
            r#"{{
                "modes": [{{"index": 0, "detuning": {omega}}}],
                "couplings": [],
                "dephasing": [],
                "injection": {{"site": 0, "gamma0": {gamma0}, "n_th": {n_th}}},
                "sink": {{"site": 0, "gamma_det": {gamma_det}}}
            }}"#
        ))
        .unwrap()
    }

    fn two_mode_spec(g: f64) -> NetworkSpec {
        NetworkSpec::parse(&format!(
            r#"{{
                "modes": [{{"index": 0, "detuning": 0.0}}, {{"index": 1, "detuning": 0.0}}],
                "couplings": [{{"i": 0, "j": 1, "g": {g}}}],
                "dephasing": [],
                "injection": {{"site": 0, "gamma0": 0.0, "n_th": 0.0}},
                "sink": {{"site": 1, "gamma_det": 0.0}}
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn basis_dimension_is_binomial() {
        // d = C(N + N_max, N)
        assert_eq!(FockBasis::new(2, 1).dim(), 3);
        assert_eq!(FockBasis::new(4, 2).dim(), 15);
        assert_eq!(FockBasis::new(3, 3).dim(), 20);
    }

    #[test]
    fn basis_order_total_then_lex() {
        let b = FockBasis::new(2, 2);
        let expected: Vec<Vec<u8>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
        ];
        for (i, s) in expected.iter().enumerate() {
            assert_eq!(b.state(i), s.as_slice());
        }
    }

    #[test]
    fn single_mode_number_operator() {
        let spec = single_mode_spec(1.0, 0.0, 0.0, 0.0);
        let basis = FockBasis::new(1, 1);
        let h = build_hamiltonian(&spec, &basis);
        assert_relative_eq!(h[(0, 0)].re, 0.0);
        assert_relative_eq!(h[(1, 1)].re, 1.0);
        assert_relative_eq!(h[(0, 1)].norm(), 0.0);
    }

    #[test]
    fn two_mode_single_excitation_hopping() {
        let spec = two_mode_spec(0.5);
        let basis = FockBasis::new(2, 1);
        let h = build_hamiltonian(&spec, &basis);
        let i10 = basis.state_index(&[1, 0]).unwrap();
        let i01 = basis.state_index(&[0, 1]).unwrap();
        assert_relative_eq!(h[(i10, i01)].re, 0.5);
        assert_relative_eq!(h[(i01, i10)].re, 0.5);
        assert_relative_eq!(h.norm(), (2.0f64 * 0.25).sqrt());
    }

    #[test]
    fn hamiltonian_hermitian() {
        let spec = four_site_preset(&FourSiteConfig { delta: 1.3, ..Default::default() }).unwrap();
        let basis = FockBasis::new(4, 2);
        let h = build_hamiltonian(&spec, &basis);
        assert!((h.clone() - h.adjoint()).norm() == 0.0);
    }

    #[test]
    fn closed_system_spectrum_imaginary() {
        let spec = two_mode_spec(0.7);
        let basis = FockBasis::new(2, 1);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        for ev in linalg::complex_eigenvalues(&l.to_dense()) {
            assert!(ev.re.abs() < 1e-12, "eigenvalue {ev} not purely imaginary");
        }
    }

    #[test]
    fn trace_annihilation() {
        let spec = four_site_preset(&FourSiteConfig {
            delta: 2.0,
            gamma2: 0.4,
            ..Default::default()
        })
        .unwrap();
        let basis = FockBasis::new(4, 2);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        assert!(l.trace_defect() <= 1e-12);
    }

    #[test]
    fn hermiticity_preserved_on_random_hermitian() {
        let spec = four_site_preset(&FourSiteConfig { gamma2: 0.3, ..Default::default() }).unwrap();
        let basis = FockBasis::new(4, 2);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        let d = basis.dim();
        // Deterministic pseudo-random Hermitian matrix.
        let mut m = DMatrix::<C64>::zeros(d, d);
        let mut x = 0.5f64;
        for i in 0..d {
            for j in i..d {
                x = (x * 16807.0) % 1.0 + 0.0123;
                let re = x - 0.5;
                x = (x * 16807.0) % 1.0 + 0.0123;
                let im = if i == j { 0.0 } else { x - 0.5 };
                m[(i, j)] = C64::new(re, im);
                m[(j, i)] = C64::new(re, -im);
            }
        }
        let rho = DensityOperator { matrix: m };
        let out = l.apply(&rho);
        assert!(out.hermiticity_error() < 1e-12);
        assert!(out.trace().norm() < 1e-12, "trace not annihilated: {}", out.trace());
    }

    #[test]
    fn injection_detailed_balance_two_level() {
        // Single mode, injection only, N_max = 1: p1/p0 = n_th/(n_th + 1),
        // hence ⟨n⟩ = n_th/(2 n_th + 1). Hand detailed-balance on the 0/1 ladder.
        let n_th = 0.3;
        let spec = single_mode_spec(0.0, 0.8, n_th, 0.0);
        let basis = FockBasis::new(1, 1);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        // Γ_Det = 0 here, so solve via long-time evolution instead of the
        // kernel shortcut precondition.
        let rho0 = DensityOperator::vacuum(&basis);
        let rho = evolve(&l, &rho0, &[200.0]).unwrap().pop().unwrap();
        let p0 = rho.matrix[(0, 0)].re;
        let p1 = rho.matrix[(1, 1)].re;
        assert_relative_eq!(p1 / p0, n_th / (n_th + 1.0), max_relative = 1e-6);
        let n_mean = rho.expect(&basis.number(0)).re;
        assert_relative_eq!(n_mean, n_th / (2.0 * n_th + 1.0), max_relative = 1e-6);
    }

    #[test]
    fn evolve_identity_when_l_zero() {
        let spec = single_mode_spec(0.0, 0.0, 0.0, 0.0);
        let basis = FockBasis::new(1, 1);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        let rho0 = DensityOperator::vacuum(&basis);
        let out = evolve(&l, &rho0, &[1.0, 5.0]).unwrap();
        for r in &out {
            assert!((&r.matrix - &rho0.matrix).norm() < 1e-12);
        }
    }

    #[test]
    fn rabi_flopping_single_excitation() {
        let g = 0.8;
        let spec = two_mode_spec(g);
        let basis = FockBasis::new(2, 1);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        let rho0 = DensityOperator::number_state(&basis, &[1, 0]).unwrap();
        let ts = [0.3, 0.9, 1.7];
        let sols = evolve(&l, &rho0, &ts).unwrap();
        for (t, rho) in ts.iter().zip(&sols) {
            let n1 = rho.expect(&basis.number(0)).re;
            assert_relative_eq!(n1, (g * t).cos().powi(2), epsilon = 1e-7);
            assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn dim_guard_triggers() {
        let spec = four_site_preset(&FourSiteConfig::default()).unwrap();
        let basis = FockBasis::new(4, 2);
        let err = build_liouvillian(&spec, &basis, 10).unwrap_err();
        assert!(matches!(err, CavnatError::DimensionGuard { .. }));
    }

    #[test]
    fn steady_state_matches_long_time_evolution() {
        let spec = four_site_preset(&FourSiteConfig {
            delta: 1.0,
            gamma2: 0.2,
            ..Default::default()
        })
        .unwrap();
        let basis = FockBasis::new(4, 2);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        let rho_ss = steady_state(&l).unwrap();
        let rho0 = DensityOperator::vacuum(&basis);
        let rho_t = evolve(&l, &rho0, &[400.0]).unwrap().pop().unwrap();
        let max_diff = (&rho_ss.matrix - &rho_t.matrix)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-8, "elementwise difference {max_diff}");
        assert_relative_eq!(rho_ss.trace().re, 1.0, epsilon = 1e-10);
        assert!(rho_ss.hermiticity_error() < 1e-10);
        assert!(rho_ss.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn transmission_zero_cases() {
        let spec = single_mode_spec(0.0, 0.5, 0.2, 0.0);
        let basis = FockBasis::new(1, 2);
        let rho = DensityOperator::vacuum(&basis);
        // Γ_Det = 0 → 0 even with occupation.
        assert_eq!(transmission(&rho, &spec, &basis), 0.0);
        // ⟨n_k⟩ = 0 → 0 even with Γ_Det > 0.
        let spec2 = single_mode_spec(0.0, 0.5, 0.2, 0.7);
        assert_eq!(transmission(&rho, &spec2, &basis), 0.0);
    }

    #[test]
    fn disconnected_sink_component_stays_empty() {
        // Two uncoupled modes; injection on 0, sink on 1.
        let spec = NetworkSpec::parse(
            r#"{
                "modes": [{"index": 0, "detuning": 0.0}, {"index": 1, "detuning": 0.0}],
                "couplings": [],
                "dephasing": [],
                "injection": {"site": 0, "gamma0": 0.4, "n_th": 0.1},
                "sink": {"site": 1, "gamma_det": 0.5}
            }"#,
        )
        .unwrap();
        let basis = FockBasis::new(2, 2);
        let l = build_liouvillian(&spec, &basis, DEFAULT_DIM_LIMIT).unwrap();
        let rho = steady_state(&l).unwrap();
        let n1 = rho.expect(&basis.number(1)).re;
        assert!(n1.abs() < 1e-12);
        assert_eq!(transmission(&rho, &spec, &basis).max(0.0), 0.0);
    }
}
