//! Exact Lagrangian solution engine for energy-conservative solutions of the
//! Hunter–Saxton equation with measure-valued initial data.
//!
//! Initial data is a pair `(ū, μ̄)`: a bounded, continuous, piecewise-linear
//! velocity profile with constant tails, and a finite energy measure made of
//! a piecewise-constant density (equal to `ū_x²`) plus finitely many atoms.
//! The solution at any time is obtained in closed form from generalized
//! characteristics that are quadratic in `t`, and the representation is closed
//! under the evolution: `u(·, t)` is again piecewise linear and `μ(t)` is again
//! a density plus atoms, so every quantity below is a finite sum.
//!
//! Modules:
//!
//!  - [`measure`]: [`HybridMeasure`], CDF and tail queries.
//!  - [`profile`]: [`VelocityProfile`], piecewise-linear functions with constant tails.
//!  - [`initial`]: admissible pairs [`InitialData`] and the label-space segment
//!    decomposition, plus the worked examples.
//!  - [`characteristics`]: `x̄(α)`, `y(α, t)`, pseudo-inverses and blow-up times.
//!  - [`solution`]: point evaluation, exact slices, singular mass, weak residuals.
//!  - [`asymptotics`]: kink-wave leading terms, exact error norms, tail
//!    statistics, rate fits and pointwise-limit predictions.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod characteristics;
mod error;
pub mod initial;
pub mod measure;
pub mod profile;
pub mod quadrature;
pub mod solution;

pub(crate) mod math;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};
pub use initial::{EquationForm, InitialData, Segment, SegmentKind};
pub use measure::{HybridMeasure, Side};
pub use profile::VelocityProfile;
pub use solution::SolutionSlice;
