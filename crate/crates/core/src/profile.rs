//! Bounded continuous piecewise-linear functions with constant tails.

use alloc::vec::Vec;

use crate::{Error, Result};

/// `u` is linear between consecutive nodes, equal to the first node value to
/// the left of the first node and to the last node value to the right of the
/// last node.
///
/// Slopes are stored per interval. Profiles built from nodes alone use the
/// difference quotients; profiles produced by the solution map carry slopes
/// computed in closed form, which stay accurate on very short intervals where
/// difference quotients lose digits.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    xs: Vec<f64>,
    us: Vec<f64>,
    slopes: Vec<f64>,
}

impl VelocityProfile {
    pub fn new(nodes: &[(f64, f64)]) -> Result<Self> {
        let (xs, us) = split_nodes(nodes)?;
        let slopes = xs
            .windows(2)
            .zip(us.windows(2))
            .map(|(x, u)| (u[1] - u[0]) / (x[1] - x[0]))
            .collect();
        Ok(VelocityProfile { xs, us, slopes })
    }

    /// Profile with explicitly known interval slopes (`slopes.len() == nodes.len() − 1`).
    pub fn with_slopes(nodes: &[(f64, f64)], slopes: Vec<f64>) -> Result<Self> {
        let (xs, us) = split_nodes(nodes)?;
        if slopes.len() + 1 != xs.len() {
            return Err(Error::LayoutMismatch(alloc::format!(
                "{} slopes for {} nodes",
                slopes.len(),
                xs.len()
            )));
        }
        if let Some(i) = slopes.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite {
                what: "slope",
                index: i,
            });
        }
        Ok(VelocityProfile { xs, us, slopes })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(&[(0.0, value)])
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.us.iter().copied())
    }

    /// `ū(−∞)`.
    pub fn left_value(&self) -> f64 {
        self.us[0]
    }

    /// `ū(+∞)`.
    pub fn right_value(&self) -> f64 {
        *self.us.last().unwrap()
    }

    pub fn sup_norm(&self) -> f64 {
        self.us.iter().fold(0.0, |m, u| m.max(u.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.us[0];
        }
        if x >= self.xs[n - 1] {
            return self.us[n - 1];
        }
        let i = self.xs.partition_point(|&b| b <= x) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (u0, u1) = (self.us[i], self.us[i + 1]);
        let w = (x - x0) / (x1 - x0);
        u0 + (u1 - u0) * w
    }

    /// Index of the interval `(x_i, x_{i+1})` containing `x`, with nodes
    /// assigned to the interval on their right. `None` in the constant tails.
    pub fn interval_of(&self, x: f64) -> Option<usize> {
        let n = self.xs.len();
        if n < 2 || x < self.xs[0] || x >= self.xs[n - 1] {
            return None;
        }
        Some(self.xs.partition_point(|&b| b <= x) - 1)
    }

    /// Right slope at `x` (0 in the tails).
    pub fn slope_at(&self, x: f64) -> f64 {
        self.interval_of(x).map_or(0.0, |i| self.slopes[i])
    }

    /// `∫ u_x² dx`, summed interval by interval.
    pub fn slope_energy(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(&self.slopes)
            .map(|(w, s)| s * s * (w[1] - w[0]))
            .fold(0.0, |acc, e| acc + e)
    }
}

fn split_nodes(nodes: &[(f64, f64)]) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes.is_empty() {
        return Err(Error::EmptyProfile);
    }
    for (i, (x, u)) in nodes.iter().enumerate() {
        if !x.is_finite() || !u.is_finite() {
            return Err(Error::NonFinite {
                what: "profile node",
                index: i,
            });
        }
    }
    if let Some(i) = nodes.windows(2).position(|w| w[0].0 >= w[1].0) {
        return Err(Error::NotIncreasing {
            what: "profile nodes",
            index: i + 1,
        });
    }
    Ok(nodes.iter().copied().unzip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tails_are_constant() {
        let p = VelocityProfile::new(&[(0.0, 0.0), (1.0, -1.0)]).unwrap();
        assert_eq!(p.eval(-5.0), 0.0);
        assert_eq!(p.eval(3.0), -1.0);
        assert_eq!(p.eval(0.25), -0.25);
        assert_eq!(p.slope_at(0.5), -1.0);
        assert_eq!(p.slope_at(2.0), 0.0);
        assert_eq!(p.sup_norm(), 1.0);
        assert_eq!(p.slope_energy(), 1.0);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert_eq!(VelocityProfile::new(&[]), Err(Error::EmptyProfile));
        assert!(matches!(
            VelocityProfile::new(&[(0.0, 1.0), (0.0, 2.0)]),
            Err(Error::NotIncreasing { .. })
        ));
        assert!(matches!(
            VelocityProfile::new(&[(0.0, f64::NAN)]),
            Err(Error::NonFinite { .. })
        ));
        assert!(VelocityProfile::with_slopes(&[(0.0, 0.0), (1.0, 1.0)], alloc::vec![]).is_err());
    }

    #[test]
    fn single_node_is_constant() {
        let p = VelocityProfile::constant(2.5).unwrap();
        assert_eq!(p.eval(-1e9), 2.5);
        assert_eq!(p.eval(1e9), 2.5);
        assert_eq!(p.interval_of(0.0), None);
    }
}
