//! Deterministic flat-file output: CSV with metadata comment lines and a
//! self-contained SVG line plot. Repeated exports of the same sweep are
//! byte-identical, so run timestamps never enter the files.

use std::io::Write as _;
use std::path::Path;

use crate::error::{CavnatError, Result};
use crate::sweep::SweepResult;

fn check_exportable(sweep: &SweepResult) -> Result<()> {
    if sweep.grid.is_empty() {
        return Err(CavnatError::Validation("nothing to export".into()));
    }
    if sweep.grid.len() != sweep.raw.len() || sweep.grid.len() != sweep.normalized.len() {
        return Err(CavnatError::Validation(format!(
            "sweep length mismatch: {} grid, {} raw, {} normalized",
            sweep.grid.len(),
            sweep.raw.len(),
            sweep.normalized.len()
        )));
    }
    Ok(())
}

/// Render the sweep as CSV text: `#`-prefixed metadata, a header row, one
/// data row per grid point. Floats use shortest round-trip formatting.
pub fn csv_string(sweep: &SweepResult) -> Result<String> {
    check_exportable(sweep)?;
    let mut out = String::new();
    out.push_str(&format!("# model: {}\n", sweep.model));
    out.push_str(&format!("# parameter: {}\n", sweep.parameter));
    out.push_str(&format!("# reference: {}\n", sweep.reference));
    out.push_str(&format!("# config_hash: {}\n", sweep.config_hash));
    out.push_str("parameter,raw,normalized\n");
    for i in 0..sweep.grid.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            sweep.grid[i], sweep.raw[i], sweep.normalized[i]
        ));
    }
    Ok(out)
}

pub fn export_csv(sweep: &SweepResult, path: &Path) -> Result<()> {
    let text = csv_string(sweep)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;
const N_TICKS: usize = 5;

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Render the sweep's normalized transmission as a fixed-size SVG line plot.
/// Log-spaced sweeps are drawn on a log x-axis.
pub fn svg_string(sweep: &SweepResult) -> Result<String> {
    check_exportable(sweep)?;
    let xs: Vec<f64> = if sweep.log_x {
        sweep.grid.iter().map(|x| x.ln()).collect()
    } else {
        sweep.grid.clone()
    };
    let (x_min, x_max) = (xs[0], *xs.last().expect("nonempty"));
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_max = sweep.normalized.iter().cloned().fold(f64::MIN, f64::max).max(1e-300);
    let y_min = 0.0;
    let y_span = y_max - y_min;

    let px = |x: f64| MARGIN_L + (x - x_min) / x_span * (PLOT_W - MARGIN_L - MARGIN_R);
    let py = |y: f64| PLOT_H - MARGIN_B - (y - y_min) / y_span * (PLOT_H - MARGIN_T - MARGIN_B);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" \
         viewBox=\"0 0 {PLOT_W} {PLOT_H}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes.
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_L,
        PLOT_H - MARGIN_B,
        PLOT_W - MARGIN_R,
        PLOT_H - MARGIN_B
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_L, MARGIN_T, MARGIN_L,
        PLOT_H - MARGIN_B
    ));
    // Ticks and labels.
    for k in 0..N_TICKS {
        let f = k as f64 / (N_TICKS - 1) as f64;
        let xv = x_min + f * x_span;
        let xp = px(xv);
        let label = if sweep.log_x { fmt_tick(xv.exp()) } else { fmt_tick(xv) };
        s.push_str(&format!(
            "<line x1=\"{xp:.2}\" y1=\"{}\" x2=\"{xp:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            PLOT_H - MARGIN_B,
            PLOT_H - MARGIN_B + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{xp:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
            PLOT_H - MARGIN_B + 20.0
        ));
        let yv = y_min + f * y_span;
        let yp = py(yv);
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{yp:.2}\" x2=\"{}\" y2=\"{yp:.2}\" stroke=\"black\"/>\n",
            MARGIN_L - 5.0,
            MARGIN_L
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 8.0,
            yp + 4.0,
            fmt_tick(yv)
        ));
    }
    // Axis titles.
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + PLOT_W - MARGIN_R) / 2.0,
        PLOT_H - 10.0,
        sweep.parameter
    ));
    s.push_str(&format!(
        "<text x=\"15\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 15 {:.2})\">normalized transmission ({})</text>\n",
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        sweep.model
    ));
    // Data polyline.
    let points: Vec<String> = xs
        .iter()
        .zip(&sweep.normalized)
        .map(|(&x, &y)| format!("{:.3},{:.3}", px(x), py(y)))
        .collect();
    s.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        points.join(" ")
    ));
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_plot(sweep: &SweepResult, path: &Path) -> Result<()> {
    let text = svg_string(sweep)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::ModelKind;

    fn sample() -> SweepResult {
        SweepResult {
            model: ModelKind::ClassicalFull,
            parameter: "dx".into(),
            grid: vec![0.0, 1.0, 2.0],
            raw: vec![0.001, 0.003, 0.002],
            normalized: vec![0.01, 0.03, 0.02],
            reference: 0.1,
            config_hash: "abc123".into(),
            timestamp: Some("ignored".into()),
            log_x: false,
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let text = csv_string(&sample()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.iter().filter(|l| l.starts_with('#')).count(), 4);
        assert!(lines.contains(&"parameter,raw,normalized"));
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 4);
        assert!(text.contains("0,0.001,0.01"));
    }

    #[test]
    fn empty_sweep_rejected() {
        let mut s = sample();
        s.grid.clear();
        s.raw.clear();
        s.normalized.clear();
        let err = csv_string(&s).unwrap_err();
        assert!(err.to_string().contains("nothing to export"));
        assert!(svg_string(&s).is_err());
    }

    #[test]
    fn length_mismatch_rejected() {
        let mut s = sample();
        s.raw.pop();
        assert!(csv_string(&s).is_err());
    }

    #[test]
    fn exports_are_deterministic() {
        let s = sample();
        assert_eq!(csv_string(&s).unwrap(), csv_string(&s).unwrap());
        assert_eq!(svg_string(&s).unwrap(), svg_string(&s).unwrap());
        // The timestamp never reaches the files.
        let mut s2 = sample();
        s2.timestamp = Some("different".into());
        assert_eq!(csv_string(&s).unwrap(), csv_string(&s2).unwrap());
        assert_eq!(svg_string(&s).unwrap(), svg_string(&s2).unwrap());
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let text = svg_string(&sample()).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert!(text.contains("polyline"));
        assert!(text.contains("normalized transmission"));
        assert!(text.contains(">dx</text>"));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = sample();
        let csv_path = dir.path().join("out.csv");
        let svg_path = dir.path().join("out.svg");
        export_csv(&s, &csv_path).unwrap();
        render_plot(&s, &svg_path).unwrap();
        assert_eq!(std::fs::read_to_string(&csv_path).unwrap(), csv_string(&s).unwrap());
        assert_eq!(std::fs::read_to_string(&svg_path).unwrap(), svg_string(&s).unwrap());
    }
}
