//! Generalized characteristics and their pseudo-inverses.
//!
//! For a label `α` and time `t`,
//!
//! ```text
//! y(α, t) = x̄(α) + ū(x̄(α)) t + (t²/4) (α − x̄(α) − σ)
//! ```
//!
//! with `σ = 0` for the one-sided form and `σ = μ̄(ℝ)/2` for the symmetric
//! form. On each label segment `y(·, t)` is linear, so every inversion below is
//! a binary search over segments followed by one linear solve.

use alloc::vec::Vec;

use crate::initial::{EquationForm, InitialData, Segment, SegmentKind};
use crate::{Error, Result};

/// Relative tolerance on `1 + st/2` below which an interval of slope `s` is
/// treated as collapsed at time `t`.
pub const COLLAPSE_TOL: f64 = 1e-12;

/// Whether slope `s` equals `−2/t` up to [`COLLAPSE_TOL`].
pub fn is_blowup(s: f64, t: f64) -> bool {
    let h = 0.5 * s * t;
    s != 0.0 && (1.0 + h).abs() <= COLLAPSE_TOL * (1.0 + h.abs())
}

/// A characteristic sampled at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoint {
    pub alpha: f64,
    pub x: f64,
    /// `∂_t y(α, t)`, the velocity carried by the characteristic.
    pub speed: f64,
    /// Right derivative `∂_α y(α, t)`; never negative.
    pub y_alpha: f64,
}

/// `y(α, t) = value + slope · (α − anchor)` on one segment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LinearY {
    pub anchor: f64,
    pub value: f64,
    pub slope: f64,
    pub collapsed: bool,
}

impl LinearY {
    pub(crate) fn solve(&self, x: f64, seg: &Segment) -> f64 {
        let a = self.anchor + (x - self.value) / self.slope;
        a.clamp(seg.lo, seg.hi)
    }
}

pub(crate) fn y_on(seg: &Segment, alpha: f64, t: f64, shift: f64) -> f64 {
    seg.xbar(alpha) + seg.ubar(alpha) * t + 0.25 * t * t * (seg.excess(alpha) - shift)
}

pub(crate) fn speed_on(seg: &Segment, alpha: f64, t: f64, shift: f64) -> f64 {
    seg.ubar(alpha) + 0.5 * t * (seg.excess(alpha) - shift)
}

pub(crate) fn linear_y(seg: &Segment, t: f64, shift: f64) -> LinearY {
    let anchor = seg.anchor();
    let c = 0.25 * t * t;
    let value = y_on(seg, anchor, t, shift);
    let (slope, collapsed) = match seg.kind {
        SegmentKind::Shift { .. } => (1.0, false),
        SegmentKind::Atom { .. } => (c, t == 0.0),
        SegmentKind::Smooth {
            slope: s, rate, weight, ..
        } => {
            // rate·(1 + st/2)² plus the part of the weight not explained by s²
            let q = 1.0 + 0.5 * s * t;
            if is_blowup(s, t) {
                (0.0, true)
            } else {
                (rate * q * q + c * (weight - s * s * rate).max(0.0), false)
            }
        }
    };
    LinearY {
        anchor,
        value,
        slope,
        collapsed,
    }
}

impl InitialData {
    /// `x̄(α)`: the unique value with
    /// `x̄ + μ̄((−∞, x̄)) ≤ α ≤ x̄ + μ̄((−∞, x̄])`.
    pub fn xbar(&self, alpha: f64) -> f64 {
        self.segment_at(alpha).xbar(alpha)
    }

    /// `α − x̄(α)`, which ranges in `[0, μ̄(ℝ)]`.
    pub fn excess(&self, alpha: f64) -> f64 {
        self.segment_at(alpha).excess(alpha)
    }

    pub fn y(&self, alpha: f64, t: f64, form: EquationForm) -> f64 {
        let shift = form.shift(self.total_mass());
        y_on(self.segment_at(alpha), alpha, t, shift)
    }

    /// `∂_t y(α, t)`.
    pub fn speed(&self, alpha: f64, t: f64, form: EquationForm) -> f64 {
        let shift = form.shift(self.total_mass());
        speed_on(self.segment_at(alpha), alpha, t, shift)
    }

    /// Right slope `∂_α y(α, t)`; `(1 + ts/2)²/(1 + s²)` on a segment where `ū`
    /// has slope `s`, `t²/4` on an atom segment. The same for both forms.
    pub fn y_alpha_slope(&self, alpha: f64, t: f64) -> f64 {
        linear_y(self.segment_at(alpha), t, 0.0).slope
    }

    pub fn char_point(&self, alpha: f64, t: f64, form: EquationForm) -> CharPoint {
        CharPoint {
            alpha,
            x: self.y(alpha, t, form),
            speed: self.speed(alpha, t, form),
            y_alpha: self.y_alpha_slope(alpha, t),
        }
    }

    /// Smallest `α` with `y(α, t) = x`.
    ///
    /// At `t = 0` this is `inf {α : x̄(α) = x}`. `y(·, t)` is onto for every
    /// `t`, so the result always exists.
    pub fn alpha_of(&self, x: f64, t: f64, form: EquationForm) -> f64 {
        let shift = form.shift(self.total_mass());
        let segs = self.segments();
        let k = segs.partition_point(|s| s.hi.is_finite() && y_on(s, s.hi, t, shift) < x);
        let seg = &segs[k.min(segs.len() - 1)];
        let lin = linear_y(seg, t, shift);
        if lin.collapsed || lin.slope <= 0.0 {
            return seg.lo;
        }
        lin.solve(x, seg)
    }

    /// Largest `α` with `y(α, t) = x`. Differs from [`InitialData::alpha_of`]
    /// only where `y(·, t)` is flat.
    pub fn alpha_of_sup(&self, x: f64, t: f64, form: EquationForm) -> f64 {
        let shift = form.shift(self.total_mass());
        let segs = self.segments();
        let k = segs.partition_point(|s| !s.lo.is_finite() || y_on(s, s.lo, t, shift) <= x);
        let seg = &segs[k.saturating_sub(1)];
        let lin = linear_y(seg, t, shift);
        if lin.collapsed || lin.slope <= 0.0 {
            return seg.hi;
        }
        lin.solve(x, seg)
    }

    /// Pseudo-inverse in self-similar coordinates: `alpha_of((t²/4) ξ, t)`.
    pub fn alpha_scaled(&self, xi: f64, t: f64, form: EquationForm) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::ZeroTime);
        }
        Ok(self.alpha_of(0.25 * t * t * xi, t, form))
    }

    /// Edges of the kink-wave support at time `t`: `(0, t²μ̄(ℝ)/4)` for the
    /// one-sided form and `∓ t²μ̄(ℝ)/8` for the symmetric form.
    pub fn kink_support(&self, t: f64, form: EquationForm) -> (f64, f64) {
        let c = 0.25 * t * t;
        let m = self.total_mass();
        match form {
            EquationForm::OneSided => (0.0, c * m),
            EquationForm::Symmetric => (-0.5 * c * m, 0.5 * c * m),
        }
    }

    /// `α_l(t) = sup {α : y(α, t) < left edge}`.
    pub fn alpha_l(&self, t: f64, form: EquationForm) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::ZeroTime);
        }
        let (left, _) = self.kink_support(t, form);
        Ok(self.alpha_of(left, t, form))
    }

    /// `α_r(t) = inf {α : y(α, t) > right edge}`.
    pub fn alpha_r(&self, t: f64, form: EquationForm) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::ZeroTime);
        }
        let (_, right) = self.kink_support(t, form);
        Ok(self.alpha_of_sup(right, t, form))
    }

    /// Times `t = −2/s` at which an interval where `ū` has slope `s` collapses
    /// to a point; sorted, without duplicates.
    pub fn blowup_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .segments()
            .iter()
            .filter_map(|s| match s.kind {
                SegmentKind::Smooth { slope, weight, .. } if slope != 0.0 && weight > 0.0 => Some(-2.0 / slope),
                _ => None,
            })
            .collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        times
    }
}
