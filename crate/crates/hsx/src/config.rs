//! Resolved run configuration shared by every command.

use std::path::PathBuf;

use hsx_core::asymptotics::Region;
use hsx_core::{EquationForm, InitialData};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::builtin;
use crate::document;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Input(PathBuf),
    Example(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Times {
    Single(f64),
    Geometric { min: f64, max: f64, count: usize },
    Linear { min: f64, max: f64, count: usize },
}

impl Times {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Times::Single(t) => vec![t],
            Times::Geometric { min, max, count } => {
                let r = (max / min).ln() / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            max
                        } else {
                            min * (r * i as f64).exp()
                        }
                    })
                    .collect()
            }
            Times::Linear { min, max, count } => (0..count)
                .map(|i| {
                    if i + 1 == count {
                        max
                    } else {
                        min + (max - min) * i as f64 / (count - 1) as f64
                    }
                })
                .collect(),
        }
    }

    /// Parses `MIN:MAX:N`.
    pub fn parse_grid(s: &str, geometric: bool) -> Result<Times, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected MIN:MAX:N, got {s:?}"));
        };
        let min: f64 = a.parse().map_err(|_| format!("bad MIN {a:?}"))?;
        let max: f64 = b.parse().map_err(|_| format!("bad MAX {b:?}"))?;
        let count: usize = n.parse().map_err(|_| format!("bad N {n:?}"))?;
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err("grid needs finite MIN < MAX".into());
        }
        if geometric {
            if min <= 0.0 || count < 3 {
                return Err("geometric grid needs MIN > 0 and N >= 3".into());
            }
            Ok(Times::Geometric { min, max, count })
        } else {
            if count < 2 {
                return Err("linear grid needs N >= 2".into());
            }
            Ok(Times::Linear { min, max, count })
        }
    }
}

/// Equation form as spelled on the command line.
pub fn form_name(form: EquationForm) -> &'static str {
    match form {
        EquationForm::OneSided => "A",
        EquationForm::Symmetric => "B",
    }
}

pub fn region_name(r: Region) -> &'static str {
    match r {
        Region::Left => "left",
        Region::Middle => "middle",
        Region::Right => "right",
        Region::All => "all",
    }
}

/// Deliberate defect applied by `verify` to check that the suite notices it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Halves the energy carried by atom label segments.
    AtomWeight,
    /// Perturbs every slice density by one part in a million.
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub source: Option<Source>,
    #[serde(serialize_with = "ser_form")]
    pub form: EquationForm,
    pub times: Option<Times>,
    pub xs: Vec<f64>,
    #[serde(serialize_with = "ser_region")]
    pub region: Region,
    pub theta: Option<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub quad: usize,
    pub seed: u64,
    pub cases: usize,
    pub characteristics: bool,
    pub alphas: Vec<f64>,
    pub fault: Option<Fault>,
}

fn ser_form<S: serde::Serializer>(f: &EquationForm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(form_name(*f))
}

fn ser_region<S: serde::Serializer>(r: &Region, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(region_name(*r))
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            source: None,
            form: EquationForm::OneSided,
            times: None,
            xs: Vec::new(),
            region: Region::All,
            theta: None,
            out: None,
            report: None,
            quad: 64,
            seed: 0,
            cases: 200,
            characteristics: false,
            alphas: Vec::new(),
            fault: None,
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        hex::encode(&digest[..8])
    }

    /// Loads the configured data and its display name.
    pub fn load(&self) -> CliResult<(InitialData, String)> {
        match &self.source {
            Some(Source::Example(name)) => Ok((builtin::resolve(name)?, name.clone())),
            Some(Source::Input(path)) => {
                let (d, name) = document::load(path)?;
                Ok((d, name.unwrap_or_else(|| path.display().to_string())))
            }
            None => Err(CliError::Usage("one of --input or --example is required".into())),
        }
    }

    pub fn times(&self) -> CliResult<Vec<f64>> {
        self.times
            .map(|t| t.values())
            .ok_or_else(|| CliError::Usage("a time (--t, --t-geom or --t-lin) is required".into()))
    }
}
