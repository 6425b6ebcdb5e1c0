//! Simulator of noise-assisted transport (NAT) in coupled optical-cavity
//! networks: a Lindblad master-equation backend on a truncated Fock space, an
//! exact second-moment backend, and a classical scattering-matrix model of the
//! fiber-optic Mach-Zehnder / mirror-recycled apparatus.

pub mod error;
pub mod export;
pub mod fock;
pub mod linalg;
pub mod moments;
pub mod network;
pub mod optics;
pub mod sweep;

pub use error::{CavnatError, Result};
