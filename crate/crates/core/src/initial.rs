//! Admissible initial data `(ū, μ̄)` and its decomposition into label segments.
//!
//! Labels `α` parametrize the graph of `x ↦ x + μ̄((−∞, x))` filled in
//! vertically at atoms. Its generalized inverse `x̄(α)` is linear on each
//! label segment:
//!
//!  - [`SegmentKind::Shift`]: no energy, `x̄(α) = α − offset`, `ū` constant.
//!  - [`SegmentKind::Smooth`]: an interval where `ū` has slope `s ≠ 0`;
//!    `x̄′ = 1/(1 + s²)` and the energy weight `f = 1 − x̄′ = s²/(1 + s²)`.
//!  - [`SegmentKind::Atom`]: a flat piece of `x̄` of length equal to the atom mass, `f = 1`.
//!
//! The decomposition is computed once at construction; every later query is a
//! binary search over it.

use alloc::vec::Vec;

use crate::math::{powf, sin};
use crate::measure::HybridMeasure;
use crate::profile::VelocityProfile;
use crate::quadrature::Rule;
use crate::{Error, Result};

/// Which antiderivative convention the right-hand side uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EquationForm {
    /// `u_t + u u_x = ½ ∫_{−∞}^x u_x² dy`.
    #[default]
    OneSided,
    /// `u_t + u u_x = ¼ (∫_{−∞}^x − ∫_x^{+∞}) u_x² dy`.
    Symmetric,
}

impl EquationForm {
    /// Constant subtracted from `α − x̄(α)` inside the characteristics.
    pub fn shift(self, total_mass: f64) -> f64 {
        match self {
            EquationForm::OneSided => 0.0,
            EquationForm::Symmetric => 0.5 * total_mass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Shift {
        offset: f64,
        u: f64,
    },
    Smooth {
        alpha0: f64,
        x0: f64,
        u0: f64,
        slope: f64,
        /// `dx / (dx + m)`, the slope of `x̄`.
        rate: f64,
        /// `m / (dx + m)`, the energy weight `f`.
        weight: f64,
        /// `α − x̄(α)` at `alpha0`.
        offset0: f64,
    },
    Atom {
        x: f64,
        u: f64,
        mass: f64,
    },
}

/// A label interval `[lo, hi]` on which `x̄` is linear. Only the two outermost
/// segments have infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn xbar(&self, alpha: f64) -> f64 {
        match self.kind {
            SegmentKind::Shift { offset, .. } => alpha - offset,
            SegmentKind::Smooth { alpha0, x0, rate, .. } => x0 + (alpha - alpha0) * rate,
            SegmentKind::Atom { x, .. } => x,
        }
    }

    /// `α − x̄(α)`.
    pub fn excess(&self, alpha: f64) -> f64 {
        match self.kind {
            SegmentKind::Shift { offset, .. } => offset,
            SegmentKind::Smooth {
                alpha0,
                weight,
                offset0,
                ..
            } => offset0 + (alpha - alpha0) * weight,
            SegmentKind::Atom { x, .. } => alpha - x,
        }
    }

    /// `ū(x̄(α))`.
    pub fn ubar(&self, alpha: f64) -> f64 {
        match self.kind {
            SegmentKind::Shift { u, .. } | SegmentKind::Atom { u, .. } => u,
            SegmentKind::Smooth {
                alpha0,
                u0,
                slope,
                rate,
                ..
            } => u0 + slope * (alpha - alpha0) * rate,
        }
    }

    /// `f(α) = 1 − x̄′(α)`.
    pub fn weight(&self) -> f64 {
        match self.kind {
            SegmentKind::Shift { .. } => 0.0,
            SegmentKind::Smooth { weight, .. } => weight,
            SegmentKind::Atom { .. } => 1.0,
        }
    }

    /// `x̄′(α)`.
    pub fn xbar_rate(&self) -> f64 {
        match self.kind {
            SegmentKind::Shift { .. } => 1.0,
            SegmentKind::Smooth { rate, .. } => rate,
            SegmentKind::Atom { .. } => 0.0,
        }
    }

    /// Slope of `ū` on the image `x̄([lo, hi])` (0 for shifts and atoms).
    pub fn ubar_slope(&self) -> f64 {
        match self.kind {
            SegmentKind::Smooth { slope, .. } => slope,
            _ => 0.0,
        }
    }

    /// Energy carried by the segment, `∫ f dα`.
    pub fn mass(&self) -> f64 {
        match self.kind {
            SegmentKind::Shift { .. } => 0.0,
            SegmentKind::Atom { mass, .. } => mass,
            SegmentKind::Smooth { weight, .. } => weight * (self.hi - self.lo),
        }
    }

    /// A finite label inside the segment where all linear forms are anchored.
    pub fn anchor(&self) -> f64 {
        match self.kind {
            SegmentKind::Smooth { alpha0, .. } => alpha0,
            _ if self.lo.is_finite() => self.lo,
            _ if self.hi.is_finite() => self.hi,
            _ => 0.0,
        }
    }
}

/// A compatible pair `(ū, μ̄)` with its label decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    u: VelocityProfile,
    mu: HybridMeasure,
    segments: Vec<Segment>,
    truncated_at: Option<f64>,
}

/// Relative tolerance for compatibility of externally supplied measures.
pub const COMPAT_TOL: f64 = 1e-12;

impl InitialData {
    /// `μ̄ := ū_x² dx + Σ atoms`.
    ///
    /// Atoms must have strictly increasing positions and positive masses.
    pub fn build(u: VelocityProfile, atoms: &[(f64, f64)]) -> Result<Self> {
        for (i, &(x, m)) in atoms.iter().enumerate() {
            if !x.is_finite() || !m.is_finite() {
                return Err(Error::NonFinite { what: "atom", index: i });
            }
            if m <= 0.0 {
                return Err(Error::NonPositiveAtomMass { index: i, mass: m });
            }
        }
        if let Some(i) = atoms.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(Error::NotIncreasing {
                what: "atom positions",
                index: i + 1,
            });
        }
        let (bp, rho) = if u.len() >= 2 {
            (u.xs().to_vec(), u.slopes().iter().map(|s| s * s).collect())
        } else {
            (Vec::new(), Vec::new())
        };
        let mu = HybridMeasure::new(bp, rho, atoms.to_vec())?;
        Ok(Self::assemble(u, mu))
    }

    /// Pairs a profile with an externally supplied energy measure.
    ///
    /// The measure's density breakpoints must coincide with the profile nodes
    /// (or be absent when the profile is constant), and each density must equal
    /// the squared slope to relative tolerance `rel_tol`.
    pub fn from_parts(u: VelocityProfile, mu: HybridMeasure, rel_tol: f64) -> Result<Self> {
        let bp = mu.breakpoints();
        if bp.is_empty() {
            if let Some(i) = u.slopes().iter().position(|&s| s != 0.0) {
                return Err(Error::Incompatible {
                    segment: i,
                    density: 0.0,
                    slope_sq: u.slopes()[i] * u.slopes()[i],
                });
            }
        } else {
            if bp != u.xs() {
                return Err(Error::LayoutMismatch(
                    "density breakpoints differ from profile nodes".into(),
                ));
            }
            for (i, (&rho, &s)) in mu.densities().iter().zip(u.slopes()).enumerate() {
                let s2 = s * s;
                if (rho - s2).abs() > rel_tol * rho.max(s2) {
                    return Err(Error::Incompatible {
                        segment: i,
                        density: rho,
                        slope_sq: s2,
                    });
                }
            }
        }
        Ok(Self::assemble(u, mu))
    }

    fn assemble(u: VelocityProfile, mu: HybridMeasure) -> Self {
        let segments = decompose(&u, &mu);
        InitialData {
            u,
            mu,
            segments,
            truncated_at: None,
        }
    }

    /// Marks the data as a truncation of data with unbounded support at `radius`.
    pub fn with_truncation(mut self, radius: f64) -> Self {
        self.truncated_at = Some(radius);
        self
    }

    pub fn truncated_at(&self) -> Option<f64> {
        self.truncated_at
    }

    /// `(k, ℓ δ_{x₀})`.
    pub fn example_dirac(k: f64, mass: f64, x0: f64) -> Result<Self> {
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "atom mass",
                reason: "must be positive",
            });
        }
        Self::build(VelocityProfile::new(&[(x0, k)])?, &[(x0, mass)])
    }

    /// Kink-wave data `(0, m δ₀)`.
    pub fn example_kink(mass: f64) -> Result<Self> {
        Self::example_dirac(0.0, mass, 0.0)
    }

    /// `ū = 0` for `x ≤ 0`, `−x` on `(0, 1)`, `−1` for `x ≥ 1`, `μ̄ = ū_x² dx`.
    pub fn example_compact() -> Self {
        let u = VelocityProfile::new(&[(0.0, 0.0), (1.0, -1.0)]).expect("static profile");
        Self::build(u, &[]).expect("static data")
    }

    /// Piecewise-linear interpolant of `ū(x) = ∫₀ˣ sin y / |y|^a dy` on
    /// `[−R, R]` with `n` cells per unit length and constant tails beyond.
    ///
    /// This approximates data whose energy has heavy tails; the result is
    /// marked as truncated at `R`.
    pub fn example_sine_tail(a: f64, radius: f64, per_unit: usize) -> Result<Self> {
        if !(a > 0.5 && a <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: "must lie in (1/2, 1]",
            });
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "R",
                reason: "must be positive and finite",
            });
        }
        if per_unit < 1 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "need at least one node per unit",
            });
        }
        let cells = libm::ceil(radius * per_unit as f64) as usize;
        let h = radius / cells as f64;
        let rule = Rule::new(8);
        let integrand = |y: f64| sin(y) / powf(y, a);
        let mut right = Vec::with_capacity(cells + 1);
        right.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            acc += if i == 0 {
                sine_head(a, x1)
            } else {
                rule.integrate(x0, x1, integrand)
            };
            right.push(acc);
        }
        // ū is even
        let mut nodes = Vec::with_capacity(2 * cells + 1);
        for i in (1..=cells).rev() {
            nodes.push((-(i as f64) * h, right[i]));
        }
        for (i, &v) in right.iter().enumerate() {
            nodes.push((i as f64 * h, v));
        }
        Ok(Self::build(VelocityProfile::new(&nodes)?, &[])?.with_truncation(radius))
    }

    pub fn profile(&self) -> &VelocityProfile {
        &self.u
    }

    pub fn measure(&self) -> &HybridMeasure {
        &self.mu
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `μ̄(ℝ)`.
    pub fn total_mass(&self) -> f64 {
        self.mu.total_mass()
    }

    /// Index of the segment with `lo ≤ α < hi`.
    pub fn segment_index(&self, alpha: f64) -> usize {
        let i = self.segments.partition_point(|s| s.hi <= alpha);
        i.min(self.segments.len() - 1)
    }

    pub fn segment_at(&self, alpha: f64) -> &Segment {
        &self.segments[self.segment_index(alpha)]
    }

    /// Energy weight `f(α)` (right-continuous at segment ends).
    pub fn weight(&self, alpha: f64) -> f64 {
        self.segment_at(alpha).weight()
    }
}

// ∫₀ʰ sin y / y^a dy via the alternating series of sin.
fn sine_head(a: f64, h: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0; // (2k+1)!
    for k in 0..30 {
        let p = (2 * k + 2) as f64 - a;
        let term = powf(h, p) / (fact * p);
        sum += if k % 2 == 0 { term } else { -term };
        if term < 1e-18 * sum.abs() {
            break;
        }
        fact *= ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

fn decompose(u: &VelocityProfile, mu: &HybridMeasure) -> Vec<Segment> {
    let atoms = mu.atoms();
    let mut events: Vec<f64> = Vec::with_capacity(u.len() + atoms.len());
    if u.len() >= 2 {
        events.extend_from_slice(u.xs());
    }
    events.extend(atoms.iter().map(|a| a.0));
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup();

    let mut segs = Vec::with_capacity(2 * events.len() + 1);
    if events.is_empty() {
        segs.push(Segment {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            kind: SegmentKind::Shift {
                offset: 0.0,
                u: u.left_value(),
            },
        });
        return segs;
    }

    let masses = mu.segment_masses();
    let mut cum = 0.0;
    let mut atom_idx = 0;
    segs.push(Segment {
        lo: f64::NEG_INFINITY,
        hi: events[0],
        kind: SegmentKind::Shift {
            offset: 0.0,
            u: u.left_value(),
        },
    });
    for (j, &x) in events.iter().enumerate() {
        let ux = u.eval(x);
        if atom_idx < atoms.len() && atoms[atom_idx].0 == x {
            let m = atoms[atom_idx].1;
            let lo = x + cum;
            segs.push(Segment {
                lo,
                hi: lo + m,
                kind: SegmentKind::Atom { x, u: ux, mass: m },
            });
            cum += m;
            atom_idx += 1;
        }
        let lo = x + cum;
        let Some(&next) = events.get(j + 1) else {
            segs.push(Segment {
                lo,
                hi: f64::INFINITY,
                kind: SegmentKind::Shift {
                    offset: cum,
                    u: u.right_value(),
                },
            });
            break;
        };
        let dx = next - x;
        let (slope, m) = match u.interval_of(x) {
            Some(i) if !masses.is_empty() => {
                let full = u.xs()[i + 1] - u.xs()[i];
                let m = if dx == full { masses[i] } else { masses[i] * (dx / full) };
                (u.slopes()[i], m)
            }
            Some(i) => (u.slopes()[i], 0.0),
            None => (0.0, 0.0),
        };
        if m == 0.0 {
            segs.push(Segment {
                lo,
                hi: next + cum,
                kind: SegmentKind::Shift { offset: cum, u: ux },
            });
        } else {
            let len = dx + m;
            segs.push(Segment {
                lo,
                hi: next + cum + m,
                kind: SegmentKind::Smooth {
                    alpha0: lo,
                    x0: x,
                    u0: ux,
                    slope,
                    rate: dx / len,
                    weight: m / len,
                    offset0: cum,
                },
            });
            cum += m;
        }
    }
    // consecutive segments share their boundary value exactly
    for i in 1..segs.len() {
        segs[i].lo = segs[i - 1].hi;
    }
    segs
}
