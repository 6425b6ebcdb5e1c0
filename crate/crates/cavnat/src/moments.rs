//! Fast backend on second moments C_ij = ⟨a_i†a_j⟩.
//!
//! Every generator in the model is quadratic in the mode operators or
//! number-conserving dephasing, so the moment dynamics close exactly:
//!
//!   dC/dt = i[h, C] − Γ∘C + Q
//!
//! with h the single-particle matrix, the elementwise damping mask
//! Γ_ij = (γ_i + γ_j)(1 − δ_ij) + (Γ0/2)(δ_i0 + δ_j0) + Γ_Det(δ_ik + δ_jk)
//! (0 = injection site, k = sink site), and the pump Q = Γ0·n_th at the
//! injection diagonal. No truncation is involved; the steady state is one
//! dense linear solve of size N².

use nalgebra::{DMatrix, DVector};

use crate::error::{CavnatError, Result};
use crate::linalg::{self, C64};
use crate::network::NetworkSpec;

/// Closed linear dynamics d vec(C)/dt = A vec(C) + b (column stacking).
pub struct MomentSystem {
    pub n: usize,
    pub a: DMatrix<C64>,
    pub b: DVector<C64>,
    gamma_det: f64,
    sink_site: usize,
}

/// Second-moment matrix C_ij = ⟨a_i†a_j⟩.
#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub matrix: DMatrix<C64>,
}

impl MomentMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { matrix: DMatrix::zeros(n, n) }
    }

    pub fn occupation(&self, i: usize) -> f64 {
        self.matrix[(i, i)].re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.matrix)
    }
}

pub fn build_moment_system(spec: &NetworkSpec) -> MomentSystem {
    let n = spec.n_modes();
    let h = spec.single_particle_matrix();
    let id = DMatrix::<C64>::identity(n, n);
    // i[h, C] → i(I⊗h − hᵀ⊗I) under column stacking.
    let mut a = linalg::kron(&id, &h) * linalg::I;
    a -= linalg::kron(&h.transpose(), &id) * linalg::I;

    let inj = spec.injection.site;
    let sink = spec.sink.site;
    for col in 0..n {
        for row in 0..n {
            let mut damp = 0.0;
            if row != col {
                damp += spec.gamma(row) + spec.gamma(col);
            }
            damp += spec.injection.gamma0 / 2.0
                * ((row == inj) as u8 as f64 + (col == inj) as u8 as f64);
            damp += spec.sink.gamma_det
                * ((row == sink) as u8 as f64 + (col == sink) as u8 as f64);
            let idx = col * n + row;
            a[(idx, idx)] -= C64::from(damp);
        }
    }

    let mut b = DVector::<C64>::zeros(n * n);
    b[inj * n + inj] = C64::from(spec.injection.gamma0 * spec.injection.n_th);

    MomentSystem { n, a, b, gamma_det: spec.sink.gamma_det, sink_site: sink }
}

/// Steady state vec(C) = −A⁻¹ b.
pub fn steady_moments(sys: &MomentSystem) -> Result<MomentMatrix> {
    let rhs = -&sys.b;
    let sol = linalg::solve_dense(&sys.a, &rhs)
        .ok_or_else(|| CavnatError::Solver("singular moment system (non-dissipative network)".into()))?;
    let residual = (&sys.a * &sol + &sys.b).norm();
    let scale = sys.b.norm().max(f64::MIN_POSITIVE);
    if residual > 1e-12 * scale.max(1e-30) && sys.b.norm() > 0.0 {
        return Err(CavnatError::Solver(format!(
            "moment steady-state residual {residual:.3e} above tolerance"
        )));
    }
    Ok(MomentMatrix { matrix: DMatrix::from_column_slice(sys.n, sys.n, sol.as_slice()) })
}

/// Steady photon absorption rate at the sink: 2 Γ_Det C_kk (1/µs).
pub fn transmission_from_moments(c: &MomentMatrix, spec: &NetworkSpec) -> f64 {
    2.0 * spec.sink.gamma_det * c.matrix[(spec.sink.site, spec.sink.site)].re
}

impl MomentSystem {
    pub fn transmission_of(&self, c: &MomentMatrix) -> f64 {
        2.0 * self.gamma_det * c.matrix[(self.sink_site, self.sink_site)].re
    }
}

/// Integrate the linear moment ODE from C0 at t = 0, sampling at `t_grid`.
pub fn evolve_moments(
    sys: &MomentSystem,
    c0: &MomentMatrix,
    t_grid: &[f64],
) -> Result<Vec<MomentMatrix>> {
    let v0 = DVector::from_column_slice(c0.matrix.as_slice());
    let sols = linalg::integrate_adaptive(|v| &sys.a * v + &sys.b, v0, t_grid, 1e-9, 1e-12)?;
    Ok(sols
        .into_iter()
        .map(|v| MomentMatrix { matrix: DMatrix::from_column_slice(sys.n, sys.n, v.as_slice()) })
        .collect())
}

/// Convenience path: build, solve, read out the transmission.
pub fn moment_transmission(spec: &NetworkSpec) -> Result<f64> {
    let sys = build_moment_system(spec);
    let c = steady_moments(&sys)?;
    Ok(transmission_from_moments(&c, spec))
}
