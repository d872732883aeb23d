//! JSON documents holding initial data.
//!
//! ```json
//! { "u_nodes": [[x, u], ...], "atoms": [[x, mass], ...], "meta": { "name": "..." } }
//! ```
//!
//! The absolutely continuous part of the energy measure is always derived
//! from the slopes. Older documents may still carry a `densities` array (one
//! value per interval); it is checked against the squared slopes and then
//! discarded.

use std::fs;
use std::path::Path;

use hsx_core::{InitialData, VelocityProfile};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Relative tolerance for legacy densities.
pub const DENSITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataDocument {
    pub u_nodes: Vec<[f64; 2]>,
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Meta::is_empty")]
    pub meta: Meta,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Meta {
    fn is_empty(&self) -> bool {
        self.name.is_none()
    }
}

impl DataDocument {
    pub fn from_data(d: &InitialData, name: Option<&str>) -> Self {
        DataDocument {
            u_nodes: d.profile().nodes().map(|(x, u)| [x, u]).collect(),
            atoms: d.measure().atoms().iter().map(|&(x, m)| [x, m]).collect(),
            densities: None,
            meta: Meta {
                name: name.map(str::to_owned),
            },
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("malformed document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Validates the document and builds the data it describes.
    pub fn build(&self) -> CliResult<InitialData> {
        let nodes: Vec<(f64, f64)> = self.u_nodes.iter().map(|p| (p[0], p[1])).collect();
        let u = VelocityProfile::new(&nodes).map_err(|e| CliError::Invalid(e.to_string()))?;
        if let Some(rho) = &self.densities {
            check_densities(&u, rho)?;
        }
        let atoms: Vec<(f64, f64)> = self.atoms.iter().map(|p| (p[0], p[1])).collect();
        InitialData::build(u, &atoms).map_err(|e| CliError::Invalid(e.to_string()))
    }
}

fn check_densities(u: &VelocityProfile, rho: &[f64]) -> CliResult<()> {
    let slopes = u.slopes();
    if rho.len() != slopes.len() {
        return Err(CliError::Invalid(format!(
            "{} densities for {} intervals",
            rho.len(),
            slopes.len()
        )));
    }
    for (k, (&r, &s)) in rho.iter().zip(slopes).enumerate() {
        let s2 = s * s;
        if !r.is_finite() || (r - s2).abs() > DENSITY_TOL * r.abs().max(s2) {
            return Err(CliError::Invalid(format!(
                "compatibility (density = slope²) violated at segment {k}: density {r}, slope² {s2}"
            )));
        }
    }
    Ok(())
}

pub fn load(path: &Path) -> CliResult<(InitialData, Option<String>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let doc = DataDocument::parse(&text)?;
    Ok((doc.build()?, doc.meta.name))
}

pub fn save(path: &Path, d: &InitialData, name: Option<&str>) -> CliResult<()> {
    fs::write(path, DataDocument::from_data(d, name).to_json()).map_err(|e| CliError::io(path, e))
}
