//! Built-in example data sets, addressed by name.

use hsx_core::InitialData;

use crate::error::{CliError, CliResult};

pub const NAMES: &str = "dirac:k,l,x0 | compact | sine:a,R,n | kink:m";

/// Builds `dirac:k,l,x0`, `compact`, `sine:a,R,n` or `kink:m`.
pub fn resolve(name: &str) -> CliResult<InitialData> {
    let (head, args) = name.split_once(':').unwrap_or((name, ""));
    let nums = || -> CliResult<Vec<f64>> {
        args.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad number {s:?} in example {name:?}")))
            })
            .collect()
    };
    let arity = |v: &[f64], n: usize| {
        if v.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "example {head:?} takes {n} parameters, got {}",
                v.len()
            )))
        }
    };
    let d = match head {
        "compact" if args.is_empty() => InitialData::example_compact(),
        "dirac" => {
            let v = nums()?;
            arity(&v, 3)?;
            InitialData::example_dirac(v[0], v[1], v[2])?
        }
        "kink" => {
            let v = nums()?;
            arity(&v, 1)?;
            InitialData::example_kink(v[0])?
        }
        "sine" => {
            let v = nums()?;
            arity(&v, 3)?;
            if v[2] < 1.0 || v[2].fract() != 0.0 {
                return Err(CliError::Usage(format!(
                    "sine: n must be a positive integer, got {}",
                    v[2]
                )));
            }
            InitialData::example_sine_tail(v[0], v[1], v[2] as usize)?
        }
        _ => return Err(CliError::Usage(format!("unknown example {name:?}; expected {NAMES}"))),
    };
    Ok(d)
}
