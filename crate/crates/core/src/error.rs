use alloc::string::String;
use core::fmt;

use crate::measure::Violation;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A node, position or mass was NaN or infinite.
    NonFinite {
        what: &'static str,
        index: usize,
    },
    /// Positions that must be strictly increasing are not.
    NotIncreasing {
        what: &'static str,
        index: usize,
    },
    /// A profile needs at least one node.
    EmptyProfile,
    NonPositiveAtomMass {
        index: usize,
        mass: f64,
    },
    InvalidMeasure(Violation),
    /// The a.c. density disagrees with the squared slope of the profile.
    Incompatible {
        segment: usize,
        density: f64,
        slope_sq: f64,
    },
    /// Breakpoint layout of the measure does not match the profile nodes.
    LayoutMismatch(String),
    /// A scaled quantity was requested at `t = 0`.
    ZeroTime,
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A test function reaches outside its integration box.
    SupportOutsideBox,
    TooFewSamples {
        needed: usize,
        got: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what, index } => write!(f, "non-finite {what} at index {index}"),
            Error::NotIncreasing { what, index } => {
                write!(f, "{what} not strictly increasing at index {index}")
            }
            Error::EmptyProfile => f.write_str("velocity profile has no nodes"),
            Error::NonPositiveAtomMass { index, mass } => {
                write!(f, "atom {index} has non-positive mass {mass}")
            }
            Error::InvalidMeasure(v) => write!(f, "invalid measure: {v}"),
            Error::Incompatible {
                segment,
                density,
                slope_sq,
            } => write!(
                f,
                "density differs from squared slope at segment {segment}: {density} vs {slope_sq}"
            ),
            Error::LayoutMismatch(msg) => write!(f, "measure layout mismatch: {msg}"),
            Error::ZeroTime => f.write_str("scaled quantity undefined at t = 0"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::SupportOutsideBox => f.write_str("test function support exceeds the box"),
            Error::TooFewSamples { needed, got } => {
                write!(f, "need at least {needed} samples, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}
