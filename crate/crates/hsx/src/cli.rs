//! Command-line surface.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsx_core::asymptotics::Region;
use hsx_core::EquationForm;

use crate::builtin::NAMES;
use crate::commands;
use crate::config::{Fault, RunConfig, Source, Times};
use crate::error::{CliError, CliResult};
use crate::output::{emit, provenance};

#[derive(Debug, Parser)]
#[command(
    name = "hsx",
    version,
    about = "Exact conservative solutions of the Hunter–Saxton equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check initial data and print its mass, support and limits.
    Validate(DataArgs),
    /// Write the solution at one time as CSV.
    Slice(SliceArgs),
    /// Error norms against the leading term over a time grid, with fitted rates.
    Rates(RatesArgs),
    /// Large-time behaviour of u(x, t) at fixed points.
    Pointwise(PointwiseArgs),
    /// Run the invariant suite on examples and seeded random data.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormArg {
    /// Right-hand side integrated from −∞.
    #[value(name = "A")]
    A,
    /// Right-hand side symmetrised about the total mass.
    #[value(name = "B")]
    B,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegionArg {
    Left,
    Middle,
    Right,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    AtomWeight,
    Density,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// JSON data file.
    #[arg(long, conflicts_with = "example")]
    pub input: Option<PathBuf>,
    #[arg(long, help = format!("Built-in data: {NAMES}"), allow_hyphen_values = true)]
    pub example: Option<String>,
    #[arg(long, value_enum, default_value = "A")]
    pub form: FormArg,
}

#[derive(Debug, Args)]
#[group(id = "time", multiple = false)]
pub struct TimeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Geometric grid MIN:MAX:N.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub t_geom: Option<String>,
    /// Linear grid MIN:MAX:N.
    #[arg(long, value_name = "MIN:MAX:N", allow_hyphen_values = true)]
    pub t_lin: Option<String>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Emit alpha,t,y,speed rows instead of the slice.
    #[arg(long)]
    pub characteristics: bool,
    /// Labels for --characteristics, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub region: RegionArg,
    /// CSV destination; the JSON fit then goes to stdout unless --report is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON fit destination.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointwiseArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Points, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Tail exponent θ in [0, 1); the tail constant is estimated from the data.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random data sets.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    /// Gauss nodes per piece and direction for weak residuals.
    #[arg(long, default_value_t = 64)]
    pub quad: usize,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

impl DataArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.source = match (&self.input, &self.example) {
            (Some(p), _) => Some(Source::Input(p.clone())),
            (None, Some(e)) => Some(Source::Example(e.clone())),
            (None, None) => None,
        };
        cfg.form = match self.form {
            FormArg::A => EquationForm::OneSided,
            FormArg::B => EquationForm::Symmetric,
        };
    }
}

impl TimeArgs {
    fn resolve(&self) -> CliResult<Option<Times>> {
        let usage = CliError::Usage;
        Ok(match (&self.t, &self.t_geom, &self.t_lin) {
            (Some(t), _, _) if !t.is_finite() => return Err(usage(format!("--t must be finite, got {t}"))),
            (Some(t), _, _) => Some(Times::Single(*t)),
            (_, Some(g), _) => Some(Times::parse_grid(g, true).map_err(|e| usage(format!("--t-geom: {e}")))?),
            (_, _, Some(l)) => Some(Times::parse_grid(l, false).map_err(|e| usage(format!("--t-lin: {e}")))?),
            _ => None,
        })
    }
}

fn region(r: RegionArg) -> Region {
    match r {
        RegionArg::Left => Region::Left,
        RegionArg::Middle => Region::Middle,
        RegionArg::Right => Region::Right,
        RegionArg::All => Region::All,
    }
}

fn json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate(a) => {
            let mut cfg = RunConfig::new("validate");
            a.apply(&mut cfg);
            let v = commands::validate(&cfg)?;
            emit(None, &format!("{}\n{}", provenance(&cfg), v.render()))
        }
        Command::Slice(a) => {
            let mut cfg = RunConfig::new("slice");
            a.data.apply(&mut cfg);
            cfg.times = a.time.resolve()?;
            cfg.characteristics = a.characteristics;
            cfg.alphas = a.alphas;
            cfg.out = a.out;
            let table = commands::slice(&cfg)?;
            emit(cfg.out.as_deref(), &table.render(&cfg))
        }
        Command::Rates(a) => {
            let mut cfg = RunConfig::new("rates");
            a.data.apply(&mut cfg);
            cfg.times = a.time.resolve()?;
            cfg.region = region(a.region);
            cfg.out = a.out;
            cfg.report = a.report;
            let (table, report) = commands::rates(&cfg)?;
            emit(cfg.out.as_deref(), &table.render(&cfg))?;
            let text = json(&report);
            match (&cfg.report, &cfg.out) {
                (Some(p), _) => emit(Some(p), &text),
                (None, Some(_)) => emit(None, &text),
                (None, None) => {
                    eprint!("{text}");
                    Ok(())
                }
            }
        }
        Command::Pointwise(a) => {
            let mut cfg = RunConfig::new("pointwise");
            a.data.apply(&mut cfg);
            cfg.times = a.time.resolve()?;
            cfg.xs = a.x;
            cfg.theta = a.theta;
            cfg.out = a.out;
            let report = commands::pointwise(&cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(cfg.out.as_deref(), &json(&report))
        }
        Command::Verify(a) => {
            let mut cfg = RunConfig::new("verify");
            cfg.seed = a.seed;
            cfg.cases = a.cases;
            cfg.quad = a.quad;
            cfg.fault = a.inject_fault.map(|f| match f {
                FaultArg::AtomWeight => Fault::AtomWeight,
                FaultArg::Density => Fault::Density,
            });
            if cfg.quad == 0 {
                return Err(CliError::Usage("--quad must be positive".into()));
            }
            let summary = commands::verify(&cfg);
            let mut err = std::io::stderr().lock();
            for f in &summary.failures {
                let _ = writeln!(err, "{f}");
            }
            emit(
                None,
                &format!(
                    "{}\ncases={} checks={} failures={} elapsed={:.2}s\n",
                    provenance(&cfg),
                    summary.cases,
                    summary.checks,
                    summary.failures.len(),
                    summary.elapsed.as_secs_f64()
                ),
            )?;
            if summary.passed() {
                Ok(())
            } else {
                let first = &summary.failures[0];
                Err(CliError::Invariant(format!(
                    "{} failure(s); first: {} ({})",
                    summary.failures.len(),
                    first.invariant.name(),
                    first.seed.map_or(first.case.clone(), |s| format!("seed {s}"))
                )))
            }
        }
    }
}

/// Parses arguments, runs, and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hsx: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
