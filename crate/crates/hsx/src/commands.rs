//! The five subcommands. Each returns its output as data so that callers
//! other than the binary can use it.

use hsx_core::asymptotics::{
    h1_error, linf_error, pointwise_prediction, rate_fit, tail_stats, Case, Outcome, RateReport, TailHypothesis,
};
use hsx_core::{EquationForm, InitialData, Side};
use serde::Serialize;

use crate::config::{form_name, region_name, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::verify;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub name: String,
    pub nodes: usize,
    pub atoms: usize,
    pub total_mass: f64,
    pub ac_mass: f64,
    pub atom_mass: f64,
    /// Support `[ℓ, r]` of the measure, absent when it is zero.
    pub support: Option<(f64, f64)>,
    pub u_minus_inf: f64,
    pub u_plus_inf: f64,
    pub blowup_times: Vec<f64>,
    pub truncated_at: Option<f64>,
}

pub fn validate(cfg: &RunConfig) -> CliResult<Validation> {
    let (d, name) = cfg.load()?;
    let mu = d.measure();
    Ok(Validation {
        name,
        nodes: d.profile().len(),
        atoms: mu.atoms().len(),
        total_mass: d.total_mass(),
        ac_mass: mu.ac_mass(),
        atom_mass: mu.atom_mass_total(),
        support: mu.support(),
        u_minus_inf: d.profile().left_value(),
        u_plus_inf: d.profile().right_value(),
        blowup_times: d.blowup_times(),
        truncated_at: d.truncated_at(),
    })
}

impl Validation {
    pub fn render(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("none".to_string(), num);
        let support = self
            .support
            .map_or("empty".to_string(), |(l, r)| format!("[{}, {}]", num(l), num(r)));
        let blowups: Vec<String> = self.blowup_times.iter().map(|&t| num(t)).collect();
        format!(
            "name: {}\nnodes: {}\natoms: {}\ntotal_mass: {}\nac_mass: {}\natom_mass: {}\nsupport: {}\n\
             u(-inf): {}\nu(+inf): {}\nblowup_times: [{}]\ntruncated_at: {}\n",
            self.name,
            self.nodes,
            self.atoms,
            num(self.total_mass),
            num(self.ac_mass),
            num(self.atom_mass),
            support,
            num(self.u_minus_inf),
            num(self.u_plus_inf),
            blowups.join(", "),
            opt(self.truncated_at),
        )
    }
}

/// `x,u,density,atom_mass` rows of the slice at a single time, or
/// `alpha,t,y,speed` rows when characteristics are requested.
pub fn slice(cfg: &RunConfig) -> CliResult<Table> {
    let (d, _) = cfg.load()?;
    let times = cfg.times()?;
    if cfg.characteristics {
        return Ok(characteristics(&d, cfg, &times));
    }
    let [t] = times.as_slice() else {
        return Err(CliError::Usage(
            "slice takes a single --t (use --characteristics for a grid)".into(),
        ));
    };
    Ok(slice_table(&d, *t, cfg.form))
}

pub fn slice_table(d: &InitialData, t: f64, form: EquationForm) -> Table {
    let s = d.slice(t, form);
    let mut rows: Vec<(f64, u8, Vec<String>)> = Vec::new();
    let rho = s.mu.densities();
    for (i, &x) in s.u.xs().iter().enumerate() {
        let density = rho.get(i).copied().unwrap_or(0.0);
        rows.push((x, 0, vec![num(x), num(s.u.eval(x)), num(density), String::new()]));
    }
    for &(x, m) in s.mu.atoms() {
        rows.push((x, 1, vec![num(x), num(s.u.eval(x)), String::new(), num(m)]));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut table = Table::new(&["x", "u", "density", "atom_mass"]);
    table.rows = rows.into_iter().map(|r| r.2).collect();
    table.trailer.push(format!("t={}", num(t)));
    table.trailer.push(format!("singular_mass={}", num(s.singular_mass())));
    table
}

fn characteristics(d: &InitialData, cfg: &RunConfig, times: &[f64]) -> Table {
    let mut table = Table::new(&["alpha", "t", "y", "speed"]);
    let alphas = if cfg.alphas.is_empty() {
        default_alphas(d)
    } else {
        cfg.alphas.clone()
    };
    for &a in &alphas {
        for &t in times {
            let p = d.char_point(a, t, cfg.form);
            table.push(vec![num(a), num(t), num(p.x), num(p.speed)]);
        }
    }
    table
}

/// Eleven labels spread over the finite label breakpoints.
fn default_alphas(d: &InitialData) -> Vec<f64> {
    let segs = d.segments();
    let lo = segs.first().map_or(0.0, |s| s.hi);
    let hi = segs.last().map_or(0.0, |s| s.lo);
    let (lo, hi) = if lo.is_finite() && hi.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, lo + 1.0)
    };
    (0..=10).map(|i| lo + (hi - lo) * i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub samples: usize,
    pub discarded: usize,
}

impl From<RateReport> for Fit {
    fn from(r: RateReport) -> Self {
        Fit {
            slope: r.slope,
            intercept: r.intercept,
            r2: r.r2,
            samples: r.samples.len(),
            discarded: r.discarded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatesReport {
    pub config: String,
    pub form: &'static str,
    pub region: &'static str,
    pub linf: Option<Fit>,
    pub h1: Option<Fit>,
    pub notes: Vec<String>,
}

/// Error norms per time, with power-law fits of each against `t`.
pub fn rates(cfg: &RunConfig) -> CliResult<(Table, RatesReport)> {
    let (d, _) = cfg.load()?;
    let times = cfg.times()?;
    if times.iter().any(|&t| t.is_nan() || t <= 0.0) {
        return Err(CliError::Usage("rates needs positive times".into()));
    }
    let mut table = Table::new(&["t", "region", "linf", "h1", "singular_mass"]);
    let (mut linf, mut h1) = (Vec::new(), Vec::new());
    for &t in &times {
        let l = linf_error(&d, t, cfg.region, cfg.form)?;
        let h = h1_error(&d, t, cfg.region, cfg.form)?;
        table.push(vec![
            num(t),
            region_name(cfg.region).into(),
            num(l),
            num(h),
            num(d.singular_mass(t)?),
        ]);
        linf.push((t, l));
        h1.push((t, h));
    }
    let mut notes = Vec::new();
    let mut fit = |label: &str, samples: &[(f64, f64)]| -> CliResult<Option<Fit>> {
        match rate_fit(samples) {
            Ok(r) => Ok(Some(r.into())),
            Err(hsx_core::Error::TooFewSamples { got, .. }) => {
                notes.push(format!(
                    "{label}: only {got} values above {:e}; the leading term is exact here, fit skipped",
                    hsx_core::asymptotics::RATE_FLOOR
                ));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    };
    let linf = fit("linf", &linf)?;
    let h1 = fit("h1", &h1)?;
    let report = RatesReport {
        config: cfg.hash(),
        form: form_name(cfg.form),
        region: region_name(cfg.region),
        linf,
        h1,
        notes,
    };
    Ok((table, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionJson {
    pub case: &'static str,
    pub limit: Option<f64>,
    pub growth_exponent: Option<f64>,
    pub growth_coefficient: Option<f64>,
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub theta: f64,
    /// Tail constant estimated from the data.
    pub a: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub x: f64,
    /// `(t, u(x, t))`
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub config: String,
    pub form: &'static str,
    pub prediction: PredictionJson,
    pub hypothesis: Option<Hypothesis>,
    pub trajectories: Vec<Trajectory>,
    /// Largest distance to the predicted limit (or rescaled growth) at the last time.
    pub final_gap: Option<f64>,
    /// Spread of `u(·, T)` across the requested points at the last time.
    pub spread: f64,
    pub warnings: Vec<String>,
}

/// Sampling grid for tail statistics: `T = 10^{k/8}`, `k = 0..=96`.
fn tail_grid() -> Vec<f64> {
    (0..=96).map(|k| 10f64.powf(k as f64 / 8.0)).collect()
}

pub fn case_name(c: Case) -> &'static str {
    match c {
        Case::CompactLeft => "compact-left",
        Case::HeavyTail => "heavy-tail",
        Case::CriticalTail => "critical-tail",
        Case::SubcriticalTail => "subcritical-tail",
        Case::LightTail => "light-tail",
        Case::Symmetric => "symmetric",
        Case::Trivial => "trivial",
        Case::Inconclusive => "inconclusive",
    }
}

/// Large-time behaviour of `u(x, t)` at each requested `x`.
pub fn pointwise(cfg: &RunConfig) -> CliResult<PointwiseReport> {
    let (d, _) = cfg.load()?;
    let times = cfg.times()?;
    if cfg.xs.is_empty() {
        return Err(CliError::Usage("pointwise needs --x".into()));
    }
    let mut warnings = Vec::new();
    let hypothesis = match cfg.theta {
        Some(theta) => {
            let ts = tail_stats(&d, Side::Left, theta, &tail_grid())?;
            if ts.approximate {
                warnings.push(format!(
                    "tail constant estimated from {} samples of truncated data (trend {:?})",
                    ts.values.len(),
                    ts.trend
                ));
            }
            Some(Hypothesis {
                theta,
                a: ts.estimate_a,
                samples: ts.values.len(),
            })
        }
        None => None,
    };
    let pred = pointwise_prediction(
        &d,
        cfg.form,
        hypothesis.as_ref().map(|h| TailHypothesis { theta: h.theta, a: h.a }),
    );
    if pred.case == Case::Inconclusive {
        warnings.push("data is truncated and no --theta was given; prediction is inconclusive".into());
    }
    let (limit, growth) = match pred.outcome {
        Outcome::Limit(v) => (Some(v), None),
        Outcome::Growth { exponent, coefficient } => (None, Some((exponent, coefficient))),
        Outcome::Unknown => (None, None),
    };
    let trajectories: Vec<Trajectory> = cfg
        .xs
        .iter()
        .map(|&x| Trajectory {
            x,
            samples: times.iter().map(|&t| (t, d.evaluate_u(x, t, cfg.form))).collect(),
        })
        .collect();
    let last_t = *times.last().expect("grids are nonempty");
    let finals: Vec<f64> = trajectories
        .iter()
        .map(|tr| tr.samples.last().expect("nonempty").1)
        .collect();
    let gap_of = |u: f64| match (limit, growth) {
        (Some(v), _) => Some((u - v).abs()),
        (None, Some((e, c))) => Some((u / last_t.powf(e) - c).abs()),
        _ => None,
    };
    let final_gap = finals
        .iter()
        .map(|&u| gap_of(u))
        .try_fold(0.0f64, |acc, g| g.map(|g| acc.max(g)));
    let spread =
        finals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - finals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PointwiseReport {
        config: cfg.hash(),
        form: form_name(cfg.form),
        prediction: PredictionJson {
            case: case_name(pred.case),
            limit,
            growth_exponent: growth.map(|g| g.0),
            growth_coefficient: growth.map(|g| g.1),
            approximate: pred.approximate,
        },
        hypothesis,
        trajectories,
        final_gap,
        spread,
        warnings,
    })
}

pub fn verify(cfg: &RunConfig) -> verify::Summary {
    verify::run(&verify::Options {
        seed: cfg.seed,
        cases: cfg.cases,
        quad: cfg.quad,
        fault: cfg.fault,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Source, Times};

    fn cfg(cmd: &str, example: &str) -> RunConfig {
        let mut c = RunConfig::new(cmd);
        c.source = Some(Source::Example(example.into()));
        c
    }

    #[test]
    fn validate_compact() {
        let v = validate(&cfg("validate", "compact")).unwrap();
        assert_eq!(v.total_mass, 1.0);
        assert_eq!(v.support, Some((0.0, 1.0)));
        assert_eq!(v.blowup_times, vec![2.0]);
        assert!(v.render().contains("total_mass: 1\n"));
    }

    #[test]
    fn slice_at_blowup_has_atom_row() {
        let mut c = cfg("slice", "compact");
        c.times = Some(Times::Single(2.0));
        let t = slice(&c).unwrap();
        let atom: Vec<_> = t.rows.iter().filter(|r| r[2].is_empty()).collect();
        assert_eq!(atom.len(), 1);
        assert_eq!(atom[0][0], "0");
        assert_eq!(atom[0][3], "1");
        assert!(t.trailer.contains(&"singular_mass=1".to_string()));
    }

    #[test]
    fn slice_rejects_grids() {
        let mut c = cfg("slice", "compact");
        c.times = Some(Times::Linear {
            min: 0.0,
            max: 1.0,
            count: 3,
        });
        assert!(matches!(slice(&c), Err(CliError::Usage(_))));
        c.characteristics = true;
        c.alphas = vec![0.5];
        assert_eq!(slice(&c).unwrap().rows.len(), 3);
    }

    #[test]
    fn rates_compact_and_kink() {
        let mut c = cfg("rates", "compact");
        c.times = Some(Times::Geometric {
            min: 4.0,
            max: 4096.0,
            count: 6,
        });
        let (_, r) = rates(&c).unwrap();
        assert!((r.h1.unwrap().slope + 0.5).abs() < 1e-9);
        assert!(r.linf.unwrap().slope.abs() < 1e-9);

        let mut k = cfg("rates", "kink:4");
        k.times = c.times;
        let (table, r) = rates(&k).unwrap();
        assert!(r.linf.is_none() && r.h1.is_none());
        assert_eq!(r.notes.len(), 2);
        assert_eq!(table.rows.len(), 6);
    }

    #[test]
    fn pointwise_cases() {
        let mut c = cfg("pointwise", "dirac:-1,4,0");
        c.times = Some(Times::Geometric {
            min: 10.0,
            max: 1e4,
            count: 4,
        });
        c.xs = vec![-1.0, 0.0, 3.0];
        let r = pointwise(&c).unwrap();
        assert_eq!(r.prediction.case, "compact-left");
        assert!(r.final_gap.unwrap() < 1e-2);

        let mut s = cfg("pointwise", "sine:0.75,200,2");
        s.times = c.times;
        s.xs = vec![0.0];
        let r = pointwise(&s).unwrap();
        assert_eq!(r.prediction.case, "inconclusive");
        assert!(r.final_gap.is_none());
        assert_eq!(r.warnings.len(), 1);
        s.theta = Some(0.0);
        let r = pointwise(&s).unwrap();
        assert!(r.hypothesis.unwrap().a > 0.0);
    }
}
