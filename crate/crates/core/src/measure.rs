//! Finite nonnegative measures on the line: a piecewise-constant density plus
//! finitely many atoms.
//!
//! The CDF convention is `F(x) = μ((−∞, x))`; the closed variant
//! `μ((−∞, x])` is available through [`HybridMeasure::cdf`] with
//! `closed = true`. Every integral is a finite sum.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// First violated invariant of a [`HybridMeasure`] candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NonFinite,
    BreakpointsNotIncreasing { index: usize },
    DensityCountMismatch { breakpoints: usize, values: usize },
    NegativeDensity { index: usize },
    NegativeSegmentMass { index: usize },
    AtomsNotIncreasing { index: usize },
    NonPositiveAtomMass { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite => f.write_str("non-finite value"),
            Violation::BreakpointsNotIncreasing { index } => {
                write!(f, "breakpoints not strictly increasing (index {index})")
            }
            Violation::DensityCountMismatch { breakpoints, values } => {
                write!(f, "{values} density values for {breakpoints} breakpoints")
            }
            Violation::NegativeDensity { index } => write!(f, "negative density (segment {index})"),
            Violation::NegativeSegmentMass { index } => {
                write!(f, "negative segment mass (segment {index})")
            }
            Violation::AtomsNotIncreasing { index } => {
                write!(f, "atoms not strictly increasing (index {index})")
            }
            Violation::NonPositiveAtomMass { index } => {
                write!(f, "zero or negative atom mass (index {index})")
            }
        }
    }
}

/// Density `ρ_i` on `(x_{i-1}, x_i)` plus atoms.
///
/// Each density segment also carries its mass. For measures built from
/// densities the mass is `ρ_i (x_i − x_{i−1})`; measures produced by the
/// solution map store the exact pushed-forward mass instead, so that the total
/// is conserved to rounding even when an image segment is very short. The CDF
/// is linear inside a segment and interpolates the stored mass.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridMeasure {
    breakpoints: Vec<f64>,
    densities: Vec<f64>,
    masses: Vec<f64>,
    atoms: Vec<(f64, f64)>,
    // prefix sums, len = segments + 1 and atoms + 1
    seg_prefix: Vec<f64>,
    atom_prefix: Vec<f64>,
    total: f64,
}

impl Default for HybridMeasure {
    fn default() -> Self {
        Self::empty()
    }
}

impl HybridMeasure {
    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// Builds a measure from breakpoints, per-segment densities and atoms.
    ///
    /// `densities.len()` must be `breakpoints.len() − 1` (or both empty).
    pub fn new(breakpoints: Vec<f64>, densities: Vec<f64>, atoms: Vec<(f64, f64)>) -> Result<Self> {
        let masses = breakpoints
            .windows(2)
            .zip(&densities)
            .map(|(w, rho)| rho * (w[1] - w[0]))
            .collect();
        Self::with_segment_masses(breakpoints, densities, masses, atoms)
    }

    /// Like [`HybridMeasure::new`] but with explicitly supplied segment masses.
    pub fn with_segment_masses(
        breakpoints: Vec<f64>,
        densities: Vec<f64>,
        masses: Vec<f64>,
        atoms: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if let Err(v) = check(&breakpoints, &densities, Some(&masses), &atoms) {
            return Err(Error::InvalidMeasure(v));
        }
        if masses.len() != densities.len() {
            return Err(Error::LayoutMismatch(alloc::format!(
                "{} masses for {} density segments",
                masses.len(),
                densities.len()
            )));
        }
        Ok(Self::assemble(breakpoints, densities, masses, atoms))
    }

    pub fn dirac(position: f64, mass: f64) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), alloc::vec![(position, mass)])
    }

    fn assemble(breakpoints: Vec<f64>, densities: Vec<f64>, masses: Vec<f64>, atoms: Vec<(f64, f64)>) -> Self {
        let mut seg_prefix = Vec::with_capacity(masses.len() + 1);
        let mut acc = 0.0;
        seg_prefix.push(acc);
        for m in &masses {
            acc += m;
            seg_prefix.push(acc);
        }
        let mut atom_prefix = Vec::with_capacity(atoms.len() + 1);
        let mut acc_a = 0.0;
        atom_prefix.push(acc_a);
        for (_, m) in &atoms {
            acc_a += m;
            atom_prefix.push(acc_a);
        }
        HybridMeasure {
            breakpoints,
            densities,
            masses,
            atoms,
            seg_prefix,
            atom_prefix,
            total: acc + acc_a,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn segment_masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Mass of the absolutely continuous part.
    pub fn ac_mass(&self) -> f64 {
        *self.seg_prefix.last().unwrap()
    }

    pub fn atom_mass_total(&self) -> f64 {
        *self.atom_prefix.last().unwrap()
    }

    /// `μ((−∞, x))`, or `μ((−∞, x])` when `closed`.
    pub fn cdf(&self, x: f64, closed: bool) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return self.total;
        }
        self.ac_cdf(x) + self.atom_cdf(x, closed)
    }

    fn ac_cdf(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.len() < 2 || x <= bp[0] {
            return 0.0;
        }
        let n = bp.len();
        if x >= bp[n - 1] {
            return self.seg_prefix[n - 1];
        }
        // segment i spans (bp[i], bp[i+1])
        let i = bp.partition_point(|&b| b <= x) - 1;
        let frac = (x - bp[i]) / (bp[i + 1] - bp[i]);
        self.seg_prefix[i] + self.masses[i] * frac
    }

    fn atom_cdf(&self, x: f64, closed: bool) -> f64 {
        let k = if closed {
            self.atoms.partition_point(|&(p, _)| p <= x)
        } else {
            self.atoms.partition_point(|&(p, _)| p < x)
        };
        self.atom_prefix[k]
    }

    /// Mass of the atom located exactly at `x` (0 if none).
    pub fn atom_at(&self, x: f64) -> f64 {
        match self.atoms.binary_search_by(|(p, _)| p.partial_cmp(&x).unwrap()) {
            Ok(i) => self.atoms[i].1,
            Err(_) => 0.0,
        }
    }

    /// Density on the open segment containing `x`; 0 outside the breakpoints
    /// and at breakpoints themselves.
    pub fn density_at(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.len() < 2 || x <= bp[0] || x >= bp[bp.len() - 1] {
            return 0.0;
        }
        let i = bp.partition_point(|&b| b <= x) - 1;
        if bp[i] == x {
            return 0.0;
        }
        self.densities[i]
    }

    /// `μ((−∞, −threshold))` for the left side, `μ((threshold, +∞))` for the right.
    pub fn tail_mass(&self, side: Side, threshold: f64) -> f64 {
        let v = match side {
            Side::Left => self.cdf(-threshold, false),
            Side::Right => self.total - self.cdf(threshold, true),
        };
        v.max(0.0)
    }

    /// Closed convex hull of the support, `None` for the zero measure.
    pub fn support(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &m) in self.masses.iter().enumerate() {
            if m > 0.0 {
                lo = lo.min(self.breakpoints[i]);
                hi = hi.max(self.breakpoints[i + 1]);
            }
        }
        for &(p, _) in &self.atoms {
            lo = lo.min(p);
            hi = hi.max(p);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Re-checks every invariant; constructors already enforce them, so this is
    /// mostly useful for measures assembled from untrusted parts.
    pub fn validate(&self) -> core::result::Result<(), Violation> {
        check(&self.breakpoints, &self.densities, Some(&self.masses), &self.atoms)
    }
}

/// Checks raw parts of a measure and reports the first violated invariant.
pub fn validate_parts(
    breakpoints: &[f64],
    densities: &[f64],
    atoms: &[(f64, f64)],
) -> core::result::Result<(), Violation> {
    check(breakpoints, densities, None, atoms)
}

fn check(
    breakpoints: &[f64],
    densities: &[f64],
    masses: Option<&[f64]>,
    atoms: &[(f64, f64)],
) -> core::result::Result<(), Violation> {
    let expected = breakpoints.len().saturating_sub(1);
    if densities.len() != expected {
        return Err(Violation::DensityCountMismatch {
            breakpoints: breakpoints.len(),
            values: densities.len(),
        });
    }
    if breakpoints.iter().chain(densities).any(|v| !v.is_finite())
        || atoms.iter().any(|(p, m)| !p.is_finite() || !m.is_finite())
    {
        return Err(Violation::NonFinite);
    }
    if let Some(i) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Violation::BreakpointsNotIncreasing { index: i + 1 });
    }
    if let Some(i) = densities.iter().position(|&r| r < 0.0) {
        return Err(Violation::NegativeDensity { index: i });
    }
    if let Some(ms) = masses {
        if ms.iter().any(|m| !m.is_finite()) {
            return Err(Violation::NonFinite);
        }
        if let Some(i) = ms.iter().position(|&m| m < 0.0) {
            return Err(Violation::NegativeSegmentMass { index: i });
        }
    }
    if let Some(i) = atoms.windows(2).position(|w| w[0].0 >= w[1].0) {
        return Err(Violation::AtomsNotIncreasing { index: i + 1 });
    }
    if let Some(i) = atoms.iter().position(|&(_, m)| m <= 0.0) {
        return Err(Violation::NonPositiveAtomMass { index: i });
    }
    Ok(())
}
