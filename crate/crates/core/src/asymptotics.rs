//! Large-time behaviour: kink-wave leading terms, exact error norms, tail
//! statistics, power-law fits and pointwise limits.

use alloc::vec::Vec;

use crate::initial::{EquationForm, InitialData, SegmentKind};
use crate::math::{ln, powf, sqrt};
use crate::measure::Side;
use crate::{Error, Result};

/// Part of the line relative to the kink-wave support `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `(−∞, a]`
    Left,
    /// `[a, b]`
    Middle,
    /// `[b, +∞)`
    Right,
    All,
}

/// `v(ξ)`: 0 for `ξ < 0`, `ξ` on `[0, M]`, `M` beyond.
pub fn kink_v(d: &InitialData, xi: f64) -> f64 {
    xi.clamp(0.0, d.total_mass())
}

/// `v₁(ξ) = clamp(ξ, −M/2, M/2)`.
pub fn kink_v1(d: &InitialData, xi: f64) -> f64 {
    let h = 0.5 * d.total_mass();
    xi.clamp(-h, h)
}

/// `(t/2) v(4x/t²)`, or with `v₁` for the symmetric form.
pub fn leading_term(d: &InitialData, x: f64, t: f64, form: EquationForm) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let xi = 4.0 * x / (t * t);
    let v = match form {
        EquationForm::OneSided => kink_v(d, xi),
        EquationForm::Symmetric => kink_v1(d, xi),
    };
    Ok(0.5 * t * v)
}

fn region_bounds(d: &InitialData, t: f64, region: Region, form: EquationForm) -> (f64, f64) {
    let (a, b) = d.kink_support(t, form);
    match region {
        Region::Left => (f64::NEG_INFINITY, a),
        Region::Middle => (a, b),
        Region::Right => (b, f64::INFINITY),
        Region::All => (f64::NEG_INFINITY, f64::INFINITY),
    }
}

/// `sup |u(·, t) − leading term|` over the closure of `region`.
///
/// Both functions are piecewise linear with constant tails, so the supremum
/// is attained at a breakpoint of `u(·, t)` or an edge of the kink support.
pub fn linf_error(d: &InitialData, t: f64, region: Region, form: EquationForm) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let s = d.slice(t, form);
    let (lo, hi) = region_bounds(d, t, region, form);
    let (a, b) = d.kink_support(t, form);
    let mut worst: f64 = 0.0;
    for x in s.u.xs().iter().copied().chain([a, b]) {
        if x >= lo && x <= hi {
            let e = (s.u.eval(x) - leading_term(d, x, t, form)?).abs();
            worst = worst.max(e);
        }
    }
    Ok(worst)
}

/// The three pieces of `‖u_x − ∂_x(leading term)‖²_{L²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Parts {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    /// `t` is a blow-up time; only the absolutely continuous part is counted.
    pub at_blowup: bool,
}

impl H1Parts {
    pub fn total(&self) -> f64 {
        self.left + self.middle + self.right
    }

    pub fn get(&self, region: Region) -> f64 {
        match region {
            Region::Left => self.left,
            Region::Middle => self.middle,
            Region::Right => self.right,
            Region::All => self.total(),
        }
    }
}

/// Exact squared `Ḣ¹` error split by region; the integrand is piecewise constant.
pub fn h1_parts(d: &InitialData, t: f64, form: EquationForm) -> Result<H1Parts> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let s = d.slice(t, form);
    let (a, b) = d.kink_support(t, form);
    let lead = 2.0 / t;
    let mut pts: Vec<f64> = s.u.xs().to_vec();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup();
    let mut parts = H1Parts {
        left: 0.0,
        middle: 0.0,
        right: 0.0,
        at_blowup: !s.collapsed.is_empty(),
    };
    for w in pts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let lx = if mid > a && mid < b { lead } else { 0.0 };
        let diff = s.u.slope_at(mid) - lx;
        let v = diff * diff * (w[1] - w[0]);
        if mid < a {
            parts.left += v;
        } else if mid < b {
            parts.middle += v;
        } else {
            parts.right += v;
        }
    }
    Ok(parts)
}

/// `‖u_x(·, t) − ∂_x(leading term)‖_{L²(region)}` (the norm, not its square).
pub fn h1_error(d: &InitialData, t: f64, region: Region, form: EquationForm) -> Result<f64> {
    Ok(sqrt(h1_parts(d, t, form)?.get(region)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
    /// Fewer than two values.
    TooShort,
}

fn trend(values: &[(f64, f64)]) -> Trend {
    if values.len() < 2 {
        return Trend::TooShort;
    }
    let (mut up, mut down) = (false, false);
    for w in values.windows(2) {
        let (p, q) = (w[0].1, w[1].1);
        let tol = 1e-12 * p.abs().max(q.abs());
        if q > p + tol {
            up = true;
        } else if q < p - tol {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Trend::Constant,
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (true, true) => Trend::Mixed,
    }
}

/// Samples of `T^{1−θ} μ̄(tail beyond T^{1+θ})` on one side.
#[derive(Debug, Clone, PartialEq)]
pub struct TailStats {
    pub side: Side,
    pub theta: f64,
    pub values: Vec<(f64, f64)>,
    /// Last sampled value (0 for a compactly supported side).
    pub estimate_a: f64,
    pub trend: Trend,
    /// The side is bounded; holds the support endpoint when `μ̄ ≠ 0`.
    pub compact: bool,
    pub endpoint: Option<f64>,
    /// Data is a truncation, so only `T^{1+θ} < R` was sampled.
    pub approximate: bool,
}

pub fn tail_stats(d: &InitialData, side: Side, theta: f64, grid: &[f64]) -> Result<TailStats> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: "must lie in [0, 1)",
        });
    }
    if grid.iter().any(|&t| !t.is_finite() || t <= 0.0) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "T grid",
            reason: "must be positive and strictly increasing",
        });
    }
    let mu = d.measure();
    let radius = d.truncated_at();
    let values: Vec<(f64, f64)> = grid
        .iter()
        .map(|&t| (t, powf(t, 1.0 + theta)))
        .filter(|&(_, x)| radius.is_none_or(|r| x < r))
        .map(|(t, x)| (t, powf(t, 1.0 - theta) * mu.tail_mass(side, x)))
        .collect();
    let endpoint = mu.support().map(|(lo, hi)| match side {
        Side::Left => lo,
        Side::Right => hi,
    });
    let compact = radius.is_none();
    let estimate_a = if compact {
        0.0
    } else {
        values.last().map_or(0.0, |v| v.1)
    };
    Ok(TailStats {
        side,
        theta,
        trend: trend(&values),
        values,
        estimate_a,
        compact,
        endpoint: if compact { endpoint } else { None },
        approximate: !compact,
    })
}

/// Least-squares fit of `log value = intercept + slope · log t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Samples dropped for lying below [`RATE_FLOOR`].
    pub discarded: usize,
}

/// Values below this are rounding noise and are left out of rate fits.
pub const RATE_FLOOR: f64 = 1e-13;

pub fn rate_fit(samples: &[(f64, f64)]) -> Result<RateReport> {
    for &(t, v) in samples {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: "rate fits need positive times",
            });
        }
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter {
                name: "value",
                reason: "rate fits need nonnegative finite values",
            });
        }
    }
    let kept: Vec<(f64, f64)> = samples.iter().copied().filter(|&(_, v)| v >= RATE_FLOOR).collect();
    if kept.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: kept.len(),
        });
    }
    let n = kept.len() as f64;
    let pts: Vec<(f64, f64)> = kept.iter().map(|&(t, v)| (ln(t), ln(v))).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "rate fits need distinct times",
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(RateReport {
        discarded: samples.len() - kept.len(),
        samples: kept,
        slope,
        intercept,
        r2,
    })
}

/// A solution `α*` of `α − x̄(α) = μ̄(ℝ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStar {
    pub alpha: f64,
    /// `μ̄ = 0`: every label solves the equation and `u ≡ ū` for all time.
    pub degenerate: bool,
}

/// Smallest solution of `α − x̄(α) = μ̄(ℝ)/2`; `α − x̄(α)` is continuous and
/// nondecreasing, so this is one segment lookup and one linear solve.
pub fn alpha_star(d: &InitialData) -> AlphaStar {
    let target = 0.5 * d.total_mass();
    if target == 0.0 {
        return AlphaStar {
            alpha: 0.0,
            degenerate: true,
        };
    }
    let segs = d.segments();
    let k = segs.partition_point(|s| s.hi.is_finite() && s.excess(s.hi) < target);
    let seg = &segs[k.min(segs.len() - 1)];
    let alpha = match seg.kind {
        SegmentKind::Shift { .. } => seg.lo,
        SegmentKind::Atom { x, .. } => x + target,
        SegmentKind::Smooth {
            alpha0,
            weight,
            offset0,
            ..
        } => alpha0 + (target - offset0) / weight,
    };
    AlphaStar {
        alpha: alpha.clamp(seg.lo, seg.hi),
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Left support bounded: limit `|ū(−∞)|`.
    CompactLeft,
    /// `A > 0, θ > 0`: growth `2 (A/4)^{(1+θ)/2} t^θ`.
    HeavyTail,
    /// `A > 0, θ = 0`: limit `sqrt(ū(−∞)² + A)`.
    CriticalTail,
    /// `A = 0, θ > 0`: `u / t^θ → 0`.
    SubcriticalTail,
    /// `A = 0, θ = 0`: limit `|ū(−∞)|`.
    LightTail,
    /// Symmetric form: limit `−ū(x̄(α*))`.
    Symmetric,
    /// `μ̄ = 0`: `u ≡ ū`, a constant.
    Trivial,
    /// Truncated data without a tail hypothesis.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Limit(f64),
    /// `u(x, t) ~ coefficient · t^exponent`.
    Growth {
        exponent: f64,
        coefficient: f64,
    },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub case: Case,
    pub outcome: Outcome,
    /// Based on truncated data and a supplied or estimated tail hypothesis.
    pub approximate: bool,
}

/// Left-tail hypothesis `|x|^{1−θ} μ̄((−∞, −|x|^{1+θ})) → A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailHypothesis {
    pub theta: f64,
    pub a: f64,
}

/// Predicted behaviour of `u(x, t)` as `t → +∞` at any fixed `x`.
pub fn pointwise_prediction(d: &InitialData, form: EquationForm, hyp: Option<TailHypothesis>) -> Prediction {
    let u = d.profile();
    if d.total_mass() == 0.0 {
        return Prediction {
            case: Case::Trivial,
            outcome: Outcome::Limit(u.left_value()),
            approximate: false,
        };
    }
    if form == EquationForm::Symmetric {
        let star = alpha_star(d);
        let value = -u.eval(d.xbar(star.alpha));
        return Prediction {
            case: Case::Symmetric,
            outcome: Outcome::Limit(value),
            approximate: d.truncated_at().is_some(),
        };
    }
    let left = u.left_value();
    if d.truncated_at().is_none() {
        return Prediction {
            case: Case::CompactLeft,
            outcome: Outcome::Limit(left.abs()),
            approximate: false,
        };
    }
    let Some(TailHypothesis { theta, a }) = hyp else {
        return Prediction {
            case: Case::Inconclusive,
            outcome: Outcome::Unknown,
            approximate: true,
        };
    };
    let (case, outcome) = match (a > 0.0, theta > 0.0) {
        (true, true) => (
            Case::HeavyTail,
            Outcome::Growth {
                exponent: theta,
                coefficient: 2.0 * powf(0.25 * a, 0.5 * (1.0 + theta)),
            },
        ),
        (true, false) => (Case::CriticalTail, Outcome::Limit(sqrt(left * left + a))),
        (false, true) => (
            Case::SubcriticalTail,
            Outcome::Growth {
                exponent: theta,
                coefficient: 0.0,
            },
        ),
        (false, false) => (Case::LightTail, Outcome::Limit(left.abs())),
    };
    Prediction {
        case,
        outcome,
        approximate: true,
    }
}

/// One row of [`scaling_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub t: f64,
    /// `α_x(t)`, the label whose characteristic is at `x` at time `t`.
    pub alpha: f64,
    pub xbar: f64,
    /// `x̄(α_x(t)) / t^{1+θ}`
    pub xbar_scaled: f64,
    /// `t^{1−θ} (α_x(t) − x̄(α_x(t)))`
    pub excess_scaled: f64,
}

pub fn scaling_diagnostics(d: &InitialData, x: f64, grid: &[f64], theta: f64, form: EquationForm) -> Vec<ScalingRow> {
    grid.iter()
        .map(|&t| {
            let alpha = d.alpha_of(x, t, form);
            let xbar = d.xbar(alpha);
            ScalingRow {
                t,
                alpha,
                xbar,
                xbar_scaled: xbar / powf(t, 1.0 + theta),
                excess_scaled: powf(t, 1.0 - theta) * (alpha - xbar),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::arb_data;
    use crate::VelocityProfile;
    use proptest::prelude::*;

    const A: EquationForm = EquationForm::OneSided;
    const B: EquationForm = EquationForm::Symmetric;

    #[test]
    fn kink_profiles() {
        let d = InitialData::example_kink(4.0).unwrap();
        assert_eq!(kink_v(&d, -0.5), 0.0);
        assert_eq!(kink_v(&d, 1.0), 1.0);
        assert_eq!(kink_v(&d, 9.0), 4.0);
        assert_eq!(kink_v1(&d, 0.0), 0.0);
        assert_eq!(kink_v1(&d, -4.0), -2.0);
        assert_eq!(kink_v1(&d, 4.0), 2.0);
        assert_eq!(leading_term(&d, 1.0, 2.0, A).unwrap(), 1.0);
        assert!(leading_term(&d, 1.0, 0.0, A).is_err());
        let z = InitialData::build(VelocityProfile::constant(1.0).unwrap(), &[]).unwrap();
        assert_eq!(kink_v(&z, 3.0), 0.0);
        assert_eq!(kink_v1(&z, -3.0), 0.0);
    }

    #[test]
    fn compact_golden_values() {
        let c = InitialData::example_compact();
        for t in [3.0, 4.0, 10.0, 100.0] {
            assert!((linf_error(&c, t, Region::All, A).unwrap() - 1.0).abs() < 1e-9, "t={t}");
        }
        for t in [4.0, 16.0, 256.0] {
            let h = h1_error(&c, t, Region::All, A).unwrap();
            assert!((h * h - 4.0 / t).abs() < 1e-9, "t={t}");
        }
        let h = h1_error(&c, 100.0, Region::All, A).unwrap();
        assert!((h - 0.2).abs() < 1e-12);
        // at x = 0.5, t = 4: u = 0.5, leading term 0.25
        let diff = c.evaluate_u(0.5, 4.0, A) - leading_term(&c, 0.5, 4.0, A).unwrap();
        assert!((diff - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kink_wave_has_no_error() {
        let d = InitialData::example_kink(4.0).unwrap();
        for t in [-50.0, -2.0, 0.5, 3.0] {
            for form in [A, B] {
                assert!(linf_error(&d, t, Region::All, form).unwrap() < 1e-12);
                assert!(h1_error(&d, t, Region::All, form).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn tails_of_compact_data() {
        let c = InitialData::example_compact();
        let s = tail_stats(&c, Side::Left, 0.0, &[1.0, 2.0, 4.0]).unwrap();
        assert!(s.compact && s.estimate_a == 0.0 && s.endpoint == Some(0.0));
        let d = InitialData::example_dirac(2.0, 1.0, 3.0).unwrap();
        let s = tail_stats(&d, Side::Right, 0.0, &[1.0, 10.0]).unwrap();
        assert_eq!(s.endpoint, Some(3.0));
        assert_eq!(s.estimate_a, 0.0);
        assert!(tail_stats(&d, Side::Right, 1.0, &[1.0]).is_err());
        assert!(tail_stats(&d, Side::Right, 0.0, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn sine_tail_estimate_is_positive() {
        let d = InitialData::example_sine_tail(1.0, 2000.0, 8).unwrap();
        let grid: Vec<f64> = (0..6).map(|k| 10.0 * powf(2.0, k as f64)).collect();
        let s = tail_stats(&d, Side::Left, 0.0, &grid).unwrap();
        assert!(s.approximate && !s.compact);
        // T · ∫_T^R sin²y / y² dy ≈ (1 − T/R)/2
        let (t, v) = *s.values.last().unwrap();
        let oracle = 0.5 * (1.0 - t / 2000.0);
        assert!((v - oracle).abs() < 0.02, "{v} vs {oracle}");
    }

    #[test]
    fn exact_power_law_fit() {
        let samples: Vec<(f64, f64)> = (2..10)
            .map(|k| {
                let t = powf(2.0, k as f64);
                (t, 4.0 / t)
            })
            .collect();
        let r = rate_fit(&samples).unwrap();
        assert!((r.slope + 1.0).abs() < 1e-12);
        assert!((r.r2 - 1.0).abs() < 1e-12);
        assert!(rate_fit(&samples[..2]).is_err());
        assert!(rate_fit(&[(1.0, -1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        let with_zero = [(1.0, 0.0), (2.0, 1.0), (4.0, 2.0), (8.0, 4.0)];
        assert_eq!(rate_fit(&with_zero).unwrap().discarded, 1);
    }

    #[test]
    fn compact_h1_rate() {
        let c = InitialData::example_compact();
        let samples: Vec<(f64, f64)> = (2..=10)
            .map(|k| {
                let t = powf(2.0, k as f64);
                let h = h1_error(&c, t, Region::All, A).unwrap();
                (t, h * h)
            })
            .collect();
        let r = rate_fit(&samples).unwrap();
        assert!((r.slope + 1.0).abs() < 0.01);
    }

    #[test]
    fn alpha_star_examples() {
        let d = InitialData::example_dirac(1.0, 4.0, 0.0).unwrap();
        let s = alpha_star(&d);
        assert_eq!(s.alpha, 2.0);
        assert_eq!(d.xbar(s.alpha), 0.0);
        let z = InitialData::build(VelocityProfile::constant(3.0).unwrap(), &[]).unwrap();
        assert!(alpha_star(&z).degenerate);
        let c = InitialData::example_compact();
        let s = alpha_star(&c);
        assert!((c.excess(s.alpha) - 0.5).abs() < 1e-15);
        let x = c.xbar(s.alpha);
        assert!(x > 0.0 && x < 1.0);
        assert!(x + c.measure().cdf(x, false) <= s.alpha + 1e-15);
    }

    #[test]
    fn predictions() {
        let d = InitialData::example_dirac(-1.0, 4.0, 0.0).unwrap();
        let p = pointwise_prediction(&d, A, None);
        assert_eq!(p.case, Case::CompactLeft);
        assert_eq!(p.outcome, Outcome::Limit(1.0));
        let p = pointwise_prediction(&InitialData::example_dirac(2.5, 4.0, 1.0).unwrap(), B, None);
        assert_eq!(p.outcome, Outcome::Limit(-2.5));
        let s = InitialData::example_sine_tail(2.0 / 3.0, 50.0, 4).unwrap();
        assert_eq!(pointwise_prediction(&s, A, None).case, Case::Inconclusive);
        let p = pointwise_prediction(&s, A, Some(TailHypothesis { theta: 0.5, a: 1.5 }));
        assert_eq!(p.case, Case::HeavyTail);
        match p.outcome {
            Outcome::Growth { exponent, coefficient } => {
                assert_eq!(exponent, 0.5);
                assert!((coefficient - 2.0 * powf(0.375, 0.75)).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let p = pointwise_prediction(&s, A, Some(TailHypothesis { theta: 0.0, a: 0.5 }));
        let left = s.profile().left_value();
        assert_eq!(p.outcome, Outcome::Limit(sqrt(left * left + 0.5)));
    }

    #[test]
    fn scaling_examples() {
        let d = InitialData::example_dirac(1.0, 1.0, 0.0).unwrap();
        for r in scaling_diagnostics(&d, 0.0, &[10.0, 100.0], 0.0, A) {
            assert_eq!(r.alpha, -r.t);
            assert_eq!(r.xbar_scaled, -1.0);
        }
        let d = InitialData::example_dirac(-1.0, 4.0, 0.0).unwrap();
        for r in scaling_diagnostics(&d, 0.0, &[10.0, 1000.0], 0.0, A) {
            assert!((r.excess_scaled - 4.0).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn region_decomposition(d in arb_data(), t in 0.5f64..200.0, neg in any::<bool>()) {
            let t = if neg { -t } else { t };
            for form in [A, B] {
                let parts = h1_parts(&d, t, form).unwrap();
                let all = h1_error(&d, t, Region::All, form).unwrap();
                prop_assert!((all * all - parts.total()).abs() <= 1e-12 * (1.0 + parts.total()));
                let l = linf_error(&d, t, Region::All, form).unwrap();
                let m = [Region::Left, Region::Middle, Region::Right]
                    .iter()
                    .map(|&r| linf_error(&d, t, r, form).unwrap())
                    .fold(0.0, f64::max);
                prop_assert_eq!(l, m);
            }
        }

        #[test]
        fn energy_balance(d in arb_data(), t in -100.0f64..100.0) {
            prop_assume!(t != 0.0);
            let s = d.slice(t, A);
            let m = d.total_mass();
            let lhs = s.u.slope_energy() + s.singular_mass();
            prop_assert!((lhs - m).abs() <= 1e-9 * m.max(1.0), "{} vs {}", lhs, m);
        }

        #[test]
        fn alpha_star_value_is_unique(d in arb_data(), frac in 0.0f64..1.0) {
            let s = alpha_star(&d);
            prop_assume!(!s.degenerate);
            let target = 0.5 * d.total_mass();
            // the solution set is an interval [s.alpha, sup]
            let mut hi = s.alpha;
            for seg in d.segments() {
                if seg.lo >= s.alpha && seg.hi.is_finite() && (seg.excess(seg.hi) - target).abs() <= 1e-12 * target {
                    hi = seg.hi;
                }
            }
            let other = s.alpha + frac * (hi - s.alpha);
            let u = d.profile();
            let a = u.eval(d.xbar(s.alpha));
            let b = u.eval(d.xbar(other));
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
