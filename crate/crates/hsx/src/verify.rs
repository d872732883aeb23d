//! Invariant suite run by `hsx verify`.

use std::fmt;
use std::time::{Duration, Instant};

use hsx_core::initial::SegmentKind;
use hsx_core::solution::{reinitialize, Bump, Quadrature, Rect};
use hsx_core::{EquationForm, HybridMeasure, InitialData, SolutionSlice, VelocityProfile};
use rand::Rng;
use rayon::prelude::*;

use crate::builtin;
use crate::config::{form_name, Fault};
use crate::fuzz;

pub const MASS_TOL: f64 = 1e-12;
pub const DENSITY_TOL: f64 = 1e-10;
pub const SEMIGROUP_TOL: f64 = 1e-9;
pub const REFLECTION_TOL: f64 = 1e-12;
pub const WEAK_TOL: f64 = 1e-6;
pub const GRID_POINTS: usize = 200;
pub const T_RANGE: f64 = 100.0;

const FORMS: [EquationForm; 2] = [EquationForm::OneSided, EquationForm::Symmetric];
const WEAK_EXAMPLES: [&str; 2] = ["compact", "dirac:1,1,0"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Conservation,
    Compatibility,
    Semigroup,
    TimeReflection,
    WeakMomentum,
    WeakEnergy,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Conservation => "energy-conservation",
            Invariant::Compatibility => "compatibility",
            Invariant::Semigroup => "semigroup",
            Invariant::TimeReflection => "time-reflection",
            Invariant::WeakMomentum => "weak-momentum",
            Invariant::WeakEnergy => "weak-energy",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub invariant: Invariant,
    /// Example name or `fuzz`.
    pub case: String,
    pub seed: Option<u64>,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FAIL {} case={}", self.invariant.name(), self.case)?;
        if let Some(s) = self.seed {
            write!(f, " seed={s}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub cases: usize,
    pub quad: usize,
    pub fault: Option<Fault>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            cases: 200,
            quad: 64,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects check outcomes for one case.
struct Checker<'a> {
    case: &'a str,
    seed: Option<u64>,
    checks: usize,
    failures: Vec<Failure>,
}

impl Checker<'_> {
    fn check(&mut self, invariant: Invariant, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                invariant,
                case: self.case.into(),
                seed: self.seed,
                detail: detail(),
            });
        }
    }
}

/// Thread count from `HSX_THREADS`, or rayon's default.
pub fn thread_count() -> Option<usize> {
    std::env::var("HSX_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

pub fn run(opts: &Options) -> Summary {
    let start = Instant::now();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().expect("thread pool");
    let results: Vec<(usize, Vec<Failure>)> = pool.install(|| {
        let examples = builtin_cases().into_par_iter().map(|name| {
            let d = builtin::resolve(name).expect("builtin resolves");
            let mut c = Checker {
                case: name,
                seed: None,
                checks: 0,
                failures: Vec::new(),
            };
            for &t in &[-3.0, -0.5, 0.5, 1.0, 2.0, 4.0, 50.0] {
                check_slices(&mut c, &d, t, 1.5, opts.fault);
            }
            if WEAK_EXAMPLES.contains(&name) {
                for (bump, _) in standard_bumps() {
                    check_weak(&mut c, &d, &bump, opts.quad);
                }
            }
            (c.checks, c.failures)
        });
        let fuzz = (0..opts.cases).into_par_iter().map(|i| {
            let seed = opts.seed.wrapping_add(i as u64);
            let mut c = Checker {
                case: "fuzz",
                seed: Some(seed),
                checks: 0,
                failures: Vec::new(),
            };
            fuzz_case(&mut c, seed, opts);
            (c.checks, c.failures)
        });
        examples.chain(fuzz).collect()
    });
    let checks = results.iter().map(|r| r.0).sum();
    let mut failures: Vec<Failure> = results.into_iter().flat_map(|r| r.1).collect();
    failures.sort_by_key(|f| f.seed);
    Summary {
        cases: builtin_cases().len() + opts.cases,
        checks,
        failures,
        elapsed: start.elapsed(),
    }
}

fn builtin_cases() -> Vec<&'static str> {
    vec![
        "compact",
        "dirac:1,1,0",
        "dirac:-1,4,0",
        "dirac:0.5,2,-1",
        "kink:4",
        "sine:0.75,20,2",
    ]
}

/// Bumps used on examples: one clear of the blow-up at `t = 2`, one across
/// it, one across `t = 0`.
pub fn standard_bumps() -> [(Bump, &'static str); 3] {
    [
        (
            Bump {
                x0: 1.0,
                t0: 1.0,
                rx: 2.0,
                rt: 0.5,
            },
            "t in (0.5, 1.5)",
        ),
        (
            Bump {
                x0: 0.5,
                t0: 2.0,
                rx: 2.0,
                rt: 1.0,
            },
            "t in (1, 3)",
        ),
        (
            Bump {
                x0: 0.0,
                t0: 0.0,
                rx: 2.0,
                rt: 1.0,
            },
            "t in (-1, 1)",
        ),
    ]
}

fn fuzz_case(c: &mut Checker<'_>, seed: u64, opts: &Options) {
    let mut rng = fuzz::rng_for(seed);
    let d = fuzz::random_data(&mut rng);
    let t1 = rng.random_range(-T_RANGE..T_RANGE);
    let t2 = rng.random_range(-T_RANGE..T_RANGE);
    check_slices(c, &d, t1, t2, opts.fault);
    // time window on the scale where slopes of size sqrt(M) blow up
    let tau = 1.0 / (1.0 + d.total_mass().sqrt());
    let bump = Bump {
        x0: rng.random_range(-10.0..10.0),
        t0: tau * rng.random_range(-5.0..5.0),
        rx: rng.random_range(0.5..3.0),
        rt: tau * rng.random_range(0.5..3.0),
    };
    check_weak(c, &d, &bump, opts.quad);
}

/// Conservation and compatibility at `t1` and `t1 + t2`, the semigroup
/// identity through `t1`, and time reflection at `t1`.
fn check_slices(c: &mut Checker<'_>, d: &InitialData, t1: f64, t2: f64, fault: Option<Fault>) {
    let m = d.total_mass();
    for form in FORMS {
        let tag = form_name(form);
        let first = apply_fault(d, d.slice(t1, form), fault);
        let direct = apply_fault(d, d.slice(t1 + t2, form), fault);
        for s in [&first, &direct] {
            let got = s.mu.total_mass();
            c.check(Invariant::Conservation, (got - m).abs() <= MASS_TOL * m, || {
                format!("form {tag} t={}: mass {got} vs {m}", s.t)
            });
            let worst =
                s.mu.densities()
                    .iter()
                    .zip(s.u.slopes())
                    .map(|(rho, sl)| (rho - sl * sl).abs() / rho.max(1.0))
                    .fold(0.0, f64::max);
            c.check(Invariant::Compatibility, worst <= DENSITY_TOL, || {
                format!("form {tag} t={}: relative density error {worst:e}", s.t)
            });
        }

        let composed = match reinitialize(&first) {
            Ok(re) => re.slice(t2, form),
            Err(e) => {
                c.check(Invariant::Semigroup, false, || {
                    format!("form {tag}: slice at t={t1} rejected: {e}")
                });
                continue;
            }
        };
        let err = grid(&direct)
            .map(|x| {
                let a = direct.u.eval(x);
                (a - composed.u.eval(x)).abs() / (1.0 + a.abs())
            })
            .fold(0.0, f64::max);
        c.check(Invariant::Semigroup, err <= SEMIGROUP_TOL, || {
            format!("form {tag} t1={t1} t2={t2}: relative error {err:e}")
        });

        let reflected = reflect(d);
        let err = grid(&first)
            .map(|x| {
                let b = d.evaluate_u(x, t1, form);
                (reflected.evaluate_u(x, -t1, form) + b).abs() / ((1.0 + b.abs()) * (1.0 + t1.abs()))
            })
            .fold(0.0, f64::max);
        c.check(Invariant::TimeReflection, err <= REFLECTION_TOL, || {
            format!("form {tag} t={t1}: scaled error {err:e}")
        });
    }
}

fn check_weak(c: &mut Checker<'_>, d: &InitialData, bump: &Bump, quad: usize) {
    let bx: Rect = bump.support();
    for form in FORMS {
        let tag = form_name(form);
        match d.weak_residual(bump, &bx, Quadrature { nx: quad, nt: quad }, form) {
            Ok(r) => {
                c.check(Invariant::WeakMomentum, r.momentum.abs() <= WEAK_TOL, || {
                    format!("form {tag} {bump:?}: residual {:e}", r.momentum)
                });
                c.check(Invariant::WeakEnergy, r.energy.abs() <= WEAK_TOL, || {
                    format!("form {tag} {bump:?}: residual {:e}", r.energy)
                });
            }
            Err(e) => c.check(Invariant::WeakMomentum, false, || format!("form {tag}: {e}")),
        }
    }
}

/// `GRID_POINTS` points spanning the slice nodes with a margin on each side.
fn grid(s: &SolutionSlice) -> impl Iterator<Item = f64> {
    let xs = s.u.xs();
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let pad = 0.1 * (hi - lo) + 1.0;
    let (a, b) = (lo - pad, hi + pad);
    (0..GRID_POINTS).map(move |i| a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64)
}

/// Same measure, velocity `−ū`.
fn reflect(d: &InitialData) -> InitialData {
    let nodes: Vec<(f64, f64)> = d.profile().nodes().map(|(x, u)| (x, -u)).collect();
    let u = VelocityProfile::new(&nodes).expect("same nodes");
    InitialData::build(u, d.measure().atoms()).expect("same atoms")
}

/// Applies an injected defect to a slice.
fn apply_fault(d: &InitialData, s: SolutionSlice, fault: Option<Fault>) -> SolutionSlice {
    let Some(fault) = fault else { return s };
    let mu = &s.mu;
    let mut rho = mu.densities().to_vec();
    let mut masses = mu.segment_masses().to_vec();
    let mut atoms = mu.atoms().to_vec();
    match fault {
        Fault::AtomWeight => {
            for (m, &k) in masses.iter_mut().zip(&s.provenance) {
                if matches!(d.segments()[k].kind, SegmentKind::Atom { .. }) {
                    *m *= 0.5;
                }
            }
            for a in &mut atoms {
                a.1 *= 0.5;
            }
        }
        Fault::Density => rho.iter_mut().for_each(|r| *r *= 1.0 + 1e-6),
    }
    let mu =
        HybridMeasure::with_segment_masses(mu.breakpoints().to_vec(), rho, masses, atoms).expect("still a measure");
    SolutionSlice { mu, ..s }
}
