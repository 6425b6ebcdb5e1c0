//! JSON netlist format for custom optical topologies: a list of named
//! components plus port-to-port connections given as
//! `[["name", port], ["name", port]]` pairs.

use serde::Deserialize;

use super::network::{ComponentKind, ScatteringNetwork, ScatteringNetworkBuilder};
use crate::error::{CavnatError, Result};

#[derive(Deserialize)]
struct RawNetlist {
    components: Vec<RawComponent>,
    #[serde(default)]
    connections: Vec<[(String, usize); 2]>,
}

#[derive(Deserialize)]
struct RawComponent {
    name: String,
    #[serde(flatten)]
    kind: ComponentKind,
}

/// Parse a netlist document into a solvable network.
pub fn parse_netlist(json: &str) -> Result<ScatteringNetwork> {
    let raw: RawNetlist =
        serde_json::from_str(json).map_err(|e| CavnatError::Parse(format!("netlist: {e}")))?;
    let mut b = ScatteringNetworkBuilder::new();
    let mut indices = std::collections::HashMap::new();
    for comp in &raw.components {
        let idx = b.add(&comp.name, comp.kind.clone());
        if indices.insert(comp.name.clone(), idx).is_some() {
            return Err(CavnatError::Validation(format!(
                "duplicate component name \"{}\"",
                comp.name
            )));
        }
    }
    for [(na, pa), (nb, pb)] in &raw.connections {
        let a = *indices.get(na).ok_or_else(|| {
            CavnatError::Validation(format!("connection references unknown component \"{na}\""))
        })?;
        let b_idx = *indices.get(nb).ok_or_else(|| {
            CavnatError::Validation(format!("connection references unknown component \"{nb}\""))
        })?;
        b.connect((a, *pa), (b_idx, *pb));
    }
    b.build()
}
