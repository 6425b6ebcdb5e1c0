//! Dense/sparse complex linear algebra helpers shared by the quantum backends
//! and the scattering-matrix solver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::CavnatError;

pub type C64 = Complex<f64>;

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

/// Kronecker product `a ⊗ b` (column-stacking convention throughout the crate:
/// `vec(A X B) = (Bᵀ ⊗ A) vec(X)`).
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::<C64>::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    let bkl = b[(k, l)];
                    if bkl != Complex::ZERO {
                        out[(i * br + k, j * bc + l)] = aij * bkl;
                    }
                }
            }
        }
    }
    out
}

/// Row-major sparse accumulator for superoperator assembly.
#[derive(Debug, Clone)]
pub struct SpMat {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

impl SpMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        if v == Complex::ZERO {
            return;
        }
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(c, _)| *c == j) {
            Some((_, x)) => *x += v,
            None => row.push((j, v)),
        }
    }

    /// Accumulate `alpha · (a ⊗ b)`, skipping structural zeros.
    pub fn add_scaled_kron(&mut self, alpha: C64, a: &DMatrix<C64>, b: &DMatrix<C64>) {
        if alpha == Complex::ZERO {
            return;
        }
        let (ar, ac) = a.shape();
        let (br, bc) = b.shape();
        assert_eq!(self.nrows, ar * br);
        assert_eq!(self.ncols, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                let aij = a[(i, j)];
                if aij == Complex::ZERO {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let bkl = b[(k, l)];
                        if bkl != Complex::ZERO {
                            self.add(i * br + k, j * bc + l, alpha * aij * bkl);
                        }
                    }
                }
            }
        }
    }

    pub fn matvec(&self, x: &DVector<C64>) -> DVector<C64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = DVector::<C64>::zeros(self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Complex::ZERO;
            for &(j, v) in row {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Apply the adjoint (conjugate transpose) from the left: returns `M† x`.
    pub fn adjoint_matvec(&self, x: &DVector<C64>) -> DVector<C64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = DVector::<C64>::zeros(self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            let xi = x[i];
            for &(j, v) in row {
                y[j] += v.conj() * xi;
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut out = DMatrix::<C64>::zeros(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[(i, j)] += v;
            }
        }
        out
    }
}

/// Eigenvalues of a Hermitian matrix (ascending order not guaranteed).
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    // Symmetrize first so tiny numerical skew does not trip the solver.
    let h = (m + m.adjoint()) * Complex::new(0.5, 0.0);
    nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

pub fn min_hermitian_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of a general complex matrix via complex Schur decomposition.
pub fn complex_eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    let (_, t) = m.clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Direct dense solve `A x = b`; `None` when the factorization is singular.
pub fn solve_dense(a: &DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    a.clone().lu().solve(b)
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive RK45 (Dormand-Prince) for `dy/dt = f(y)` with time-independent
/// right-hand side, sampled exactly at the requested times.
///
/// Integration starts at t = 0 with state `y0`.
pub fn integrate_adaptive<F>(
    f: F,
    y0: DVector<C64>,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<DVector<C64>>, CavnatError>
where
    F: Fn(&DVector<C64>) -> DVector<C64>,
{
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = f(&y);
    let t_end = *t_grid.last().unwrap_or(&0.0);
    let mut h = (t_end / 100.0).max(1e-6);

    for &t_target in t_grid {
        if t_target < t {
            return Err(CavnatError::Solver("time grid must be increasing".into()));
        }
        while t < t_target {
            let h_step = h.min(t_target - t);
            if h_step < 1e-14 * t_target.max(1.0) {
                return Err(CavnatError::Solver(
                    "step size underflow (stiff system?)".into(),
                ));
            }
            let mut k = Vec::with_capacity(7);
            k.push(k1.clone());
            for stage in 0..6 {
                let mut ys = y.clone();
                for (ki, &aij) in k.iter().zip(DP_A[stage]) {
                    if aij != 0.0 {
                        ys += ki * C64::from(aij * h_step);
                    }
                }
                let _ = DP_C[stage];
                k.push(f(&ys));
            }
            // 5th-order solution uses the last A row as weights (FSAL).
            let mut y5 = y.clone();
            for (ki, &bi) in k.iter().zip(DP_A[5]) {
                if bi != 0.0 {
                    y5 += ki * C64::from(bi * h_step);
                }
            }
            let mut y4 = y.clone();
            for (ki, &bi) in k.iter().zip(&DP_B4) {
                if bi != 0.0 {
                    y4 += ki * C64::from(bi * h_step);
                }
            }
            let err = (&y5 - &y4).norm();
            let scale = atol + rtol * y5.norm().max(y.norm());
            let err_norm = err / scale;
            if err_norm <= 1.0 {
                t += h_step;
                y = y5;
                k1 = k.pop().unwrap();
            }
            let factor = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h = h_step * factor;
        }
        out.push(y.clone());
    }
    Ok(out)
}
