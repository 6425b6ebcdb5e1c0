//! Directed-port scattering network with feedback, solved as one linear
//! system: incoming = P·(S·incoming + e), with S the block-diagonal component
//! scattering matrix, P the port-connection permutation, and e the source
//! emission vector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::cavity::CavityParams;
use crate::error::{CavnatError, Result};
use crate::linalg::{self, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentKind {
    /// 2×2 fiber coupler with power ratio T; ports [a1, a2, b1, b2],
    /// S = [[√T, i√(1−T)], [i√(1−T), √T]] in both directions.
    Coupler { t: f64 },
    /// FBG resonator; ports [left, right].
    Cavity {
        #[serde(flatten)]
        params: CavityParams,
    },
    /// Retro-reflector with amplitude reflectivity r and phase φ; one port.
    Mirror {
        r: f64,
        #[serde(default)]
        phi: f64,
    },
    /// Attenuator with power transmission α; ports [left, right].
    Loss { alpha: f64 },
    /// Phase shifter; ports [left, right].
    Phase { phi: f64 },
    /// Emitter; one port, absorbs anything returning (isolator).
    Source {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    /// Absorbing photodiode; one port.
    Detector,
}

fn default_amplitude() -> f64 {
    1.0
}

impl ComponentKind {
    pub fn port_count(&self) -> usize {
        match self {
            ComponentKind::Coupler { .. } => 4,
            ComponentKind::Cavity { .. } | ComponentKind::Loss { .. } | ComponentKind::Phase { .. } => 2,
            ComponentKind::Mirror { .. } | ComponentKind::Source { .. } | ComponentKind::Detector => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ComponentKind::Coupler { t } if !(0.0..=1.0).contains(t) => {
                Err(CavnatError::Validation(format!("coupler ratio {t} outside [0, 1]")))
            }
            ComponentKind::Cavity { params } => params.validate(),
            ComponentKind::Mirror { r, .. } if !(0.0..=1.0).contains(r) => {
                Err(CavnatError::Validation(format!("mirror reflectivity {r} outside [0, 1]")))
            }
            ComponentKind::Loss { alpha } if !(0.0..=1.0).contains(alpha) => {
                Err(CavnatError::Validation(format!("loss transmission {alpha} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

pub struct ScatteringNetworkBuilder {
    components: Vec<(String, ComponentKind)>,
    connections: Vec<((usize, usize), (usize, usize))>,
}

impl Default for ScatteringNetworkBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ScatteringNetworkBuilder {
    pub fn new() -> Self {
        Self { components: Vec::new(), connections: Vec::new() }
    }

    pub fn add(&mut self, name: &str, kind: ComponentKind) -> usize {
        self.components.push((name.to_string(), kind));
        self.components.len() - 1
    }

    pub fn connect(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.connections.push((a, b));
    }

    pub fn build(self) -> Result<ScatteringNetwork> {
        let mut port_offset = Vec::with_capacity(self.components.len());
        let mut n_ports = 0;
        for (name, kind) in &self.components {
            kind.validate()
                .map_err(|e| CavnatError::Validation(format!("component \"{name}\": {e}")))?;
            port_offset.push(n_ports);
            n_ports += kind.port_count();
        }
        let mut peer = vec![None; n_ports];
        for &((ca, pa), (cb, pb)) in &self.connections {
            let ga = global_port(&self.components, &port_offset, ca, pa)?;
            let gb = global_port(&self.components, &port_offset, cb, pb)?;
            if peer[ga].is_some() || peer[gb].is_some() {
                return Err(CavnatError::Validation(format!(
                    "port connected twice (components {ca} and {cb})"
                )));
            }
            peer[ga] = Some(gb);
            peer[gb] = Some(ga);
        }
        Ok(ScatteringNetwork {
            components: self.components,
            port_offset,
            peer,
            n_ports,
        })
    }
}

fn global_port(
    components: &[(String, ComponentKind)],
    offsets: &[usize],
    comp: usize,
    port: usize,
) -> Result<usize> {
    let (name, kind) = components
        .get(comp)
        .ok_or_else(|| CavnatError::Validation(format!("unknown component index {comp}")))?;
    if port >= kind.port_count() {
        return Err(CavnatError::Validation(format!(
            "component \"{name}\" has no port {port}"
        )));
    }
    Ok(offsets[comp] + port)
}

/// Immutable port-connected network; cavities take their detunings per solve.
#[derive(Debug)]
pub struct ScatteringNetwork {
    components: Vec<(String, ComponentKind)>,
    port_offset: Vec<usize>,
    peer: Vec<Option<usize>>,
    n_ports: usize,
}

/// Solved steady field amplitudes at every port.
pub struct FieldSolution {
    pub incoming: DVector<C64>,
    pub outgoing: DVector<C64>,
    port_offset: Vec<usize>,
    detectors: Vec<(String, usize)>,
    open_ports: Vec<usize>,
    source_ports: Vec<usize>,
    source_power: f64,
}

impl FieldSolution {
    /// Power absorbed by the named detector.
    pub fn detector_power(&self, name: &str) -> Option<f64> {
        self.detectors
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, p)| self.incoming[p].norm_sqr())
    }

    /// Total power leaving through detectors, unconnected ports, and the
    /// isolators guarding the sources.
    pub fn total_outgoing_power(&self) -> f64 {
        let detected: f64 = self.detectors.iter().map(|&(_, p)| self.incoming[p].norm_sqr()).sum();
        let open: f64 = self.open_ports.iter().map(|&p| self.outgoing[p].norm_sqr()).sum();
        let returned: f64 = self.source_ports.iter().map(|&p| self.incoming[p].norm_sqr()).sum();
        detected + open + returned
    }

    pub fn source_power(&self) -> f64 {
        self.source_power
    }

    pub fn port_amplitude(&self, component: usize, port: usize) -> C64 {
        self.outgoing[self.port_offset[component] + port]
    }
}

impl ScatteringNetwork {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> (&str, &ComponentKind) {
        let (n, k) = &self.components[i];
        (n, k)
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|(n, _)| n == name)
    }

    fn block_s(&self, kind: &ComponentKind, detuning: Option<f64>) -> DMatrix<C64> {
        match kind {
            ComponentKind::Coupler { t } => {
                let c = C64::from(t.sqrt());
                let s = linalg::I * C64::from((1.0 - t).sqrt());
                let z = Complex::ZERO;
                DMatrix::from_row_slice(4, 4, &[
                    z, z, c, s,
                    z, z, s, c,
                    c, s, z, z,
                    s, c, z, z,
                ])
            }
            ComponentKind::Cavity { params } => {
                let (t, r) = params.response(detuning.unwrap_or(0.0));
                DMatrix::from_row_slice(2, 2, &[r, t, t, r])
            }
            ComponentKind::Mirror { r, phi } => {
                DMatrix::from_element(1, 1, C64::from_polar(*r, *phi))
            }
            ComponentKind::Loss { alpha } => {
                let a = C64::from(alpha.sqrt());
                let z = Complex::ZERO;
                DMatrix::from_row_slice(2, 2, &[z, a, a, z])
            }
            ComponentKind::Phase { phi } => {
                let p = C64::from_polar(1.0, *phi);
                let z = Complex::ZERO;
                DMatrix::from_row_slice(2, 2, &[z, p, p, z])
            }
            ComponentKind::Source { .. } | ComponentKind::Detector => {
                DMatrix::zeros(kind.port_count(), kind.port_count())
            }
        }
    }

    /// Solve the self-consistent field equations. `detunings` supplies one
    /// value (in FWHM units) per cavity component, in declaration order.
    pub fn solve_fields(&self, detunings: &[f64]) -> Result<FieldSolution> {
        let n = self.n_ports;
        let mut s = DMatrix::<C64>::zeros(n, n);
        let mut emission = DVector::<C64>::zeros(n);
        let mut cavity_idx = 0;
        let mut source_power = 0.0;
        let mut detectors = Vec::new();
        let mut source_ports = Vec::new();
        for (ci, (name, kind)) in self.components.iter().enumerate() {
            let off = self.port_offset[ci];
            let det = match kind {
                ComponentKind::Cavity { .. } => {
                    let x = *detunings.get(cavity_idx).ok_or_else(|| {
                        CavnatError::Validation(format!(
                            "missing detuning for cavity \"{name}\" (got {} values)",
                            detunings.len()
                        ))
                    })?;
                    cavity_idx += 1;
                    Some(x)
                }
                ComponentKind::Source { amplitude } => {
                    emission[off] = C64::from(*amplitude);
                    source_power += amplitude * amplitude;
                    source_ports.push(off);
                    None
                }
                ComponentKind::Detector => {
                    detectors.push((name.clone(), off));
                    None
                }
                _ => None,
            };
            let block = self.block_s(kind, det);
            let m = kind.port_count();
            s.view_mut((off, off), (m, m)).copy_from(&block);
        }
        if cavity_idx < detunings.len() {
            return Err(CavnatError::Validation(format!(
                "{} detunings supplied but network has {} cavities",
                detunings.len(),
                cavity_idx
            )));
        }

        // incoming = P (S incoming + e)
        let mut m = DMatrix::<C64>::identity(n, n);
        let mut rhs = DVector::<C64>::zeros(n);
        for p in 0..n {
            if let Some(q) = self.peer[p] {
                // incoming[p] = outgoing[q] = (S incoming)[q] + e[q]
                for j in 0..n {
                    m[(p, j)] -= s[(q, j)];
                }
                rhs[p] = emission[q];
            }
        }
        let incoming = linalg::solve_dense(&m, &rhs).ok_or_else(|| {
            CavnatError::Solver("singular field equations (lossless closed resonant loop)".into())
        })?;
        let residual = (&m * &incoming - &rhs).norm();
        if residual > 1e-9 * rhs.norm().max(1.0) {
            return Err(CavnatError::Solver(format!(
                "field solution residual {residual:.3e} (near-singular loop)"
            )));
        }
        let outgoing = &s * &incoming + emission;
        let open_ports =
            (0..n).filter(|&p| self.peer[p].is_none()).collect();
        Ok(FieldSolution {
            incoming,
            outgoing,
            port_offset: self.port_offset.clone(),
            detectors,
            open_ports,
            source_ports,
            source_power,
        })
    }

    /// Spectral radius of the loop operator P·S at the given detunings.
    pub fn loop_spectral_radius(&self, detunings: &[f64]) -> Result<f64> {
        let n = self.n_ports;
        let mut s = DMatrix::<C64>::zeros(n, n);
        let mut cavity_idx = 0;
        for (ci, (_, kind)) in self.components.iter().enumerate() {
            let det = if matches!(kind, ComponentKind::Cavity { .. }) {
                let x = detunings.get(cavity_idx).copied().unwrap_or(0.0);
                cavity_idx += 1;
                Some(x)
            } else {
                None
            };
            let off = self.port_offset[ci];
            let m = kind.port_count();
            s.view_mut((off, off), (m, m)).copy_from(&self.block_s(kind, det));
        }
        let mut ps = DMatrix::<C64>::zeros(n, n);
        for p in 0..n {
            if let Some(q) = self.peer[p] {
                for j in 0..n {
                    ps[(p, j)] = s[(q, j)];
                }
            }
        }
        Ok(linalg::complex_eigenvalues(&ps)
            .into_iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max))
    }
}
