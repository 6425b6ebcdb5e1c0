//! Classical scattering-matrix model of the fiber-optic apparatus: couplers,
//! FBG Fabry-Perot resonators, recycling mirrors, losses, and the
//! dephasing-by-window-averaging data processing.

mod cavity;
mod foursite;
mod netlist;
mod network;

pub use cavity::CavityParams;
pub use foursite::{
    dephased_transmission, interferometer_transmission, normalize, FourSiteOpticalConfig,
    DEFAULT_DEPHASING_SAMPLES,
};
pub use netlist::parse_netlist;
pub use network::{ComponentKind, FieldSolution, ScatteringNetwork, ScatteringNetworkBuilder};
