//! Quadrature rules shared by the field and flux integrals.
//!
//! Everything here integrates smooth integrands: periodic ones with the
//! composite trapezoid rule (spectrally accurate), bounded intervals with
//! Gauss-Legendre or double-exponential adaptive quadrature.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes of the composite trapezoid rule on `[-pi, pi)`.
pub fn periodic_nodes(n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = std::f64::consts::TAU / n as f64;
    (0..n).map(move |k| -std::f64::consts::PI + step * k as f64)
}

/// Trapezoid rule for a `2*pi`-periodic integrand over one period.
pub fn periodic_trapezoid(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let step = std::f64::consts::TAU / n as f64;
    periodic_nodes(n).map(f).sum::<f64>() * step
}

/// Trapezoid rule over `[a, a + period)` for an integrand with that period.
pub fn periodic_trapezoid_on(a: f64, period: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let step = period / n as f64;
    (0..n).map(|k| f(a + step * k as f64)).sum::<f64>() * step
}

/// Adaptive double-exponential quadrature with an absolute error target.
///
/// Fails with [`Error::Tolerance`] when the estimate stays above `tol`, and
/// with [`Error::InputDomain`] when the integrand returns a non-finite value.
pub fn adaptive(a: f64, b: f64, tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    // the underlying rule silently skips non-finite samples
    let bad = std::cell::Cell::new(false);
    let guarded = |x: f64| {
        let v = f(x);
        if !v.is_finite() {
            bad.set(true);
        }
        v
    };
    let out = quadrature::double_exponential::integrate(guarded, a, b, tol);
    if bad.get() || !out.integral.is_finite() {
        return Err(Error::InputDomain("integrand produced a non-finite value".into()));
    }
    if out.error_estimate > tol {
        return Err(Error::Tolerance {
            estimate: out.error_estimate,
            tolerance: tol,
        });
    }
    Ok(out.integral)
}

/// Gauss-Legendre rule mapped onto an interval.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point rule on `[a, b]`.
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        let degree = NonZeroUsize::new(n)
            .ok_or_else(|| Error::InputDomain("Gauss-Legendre rule needs at least one node".into()))?;
        let rule = GaussLegendre::new(degree);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (mid + half * x, half * w))
            .unzip();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Fourth-order central difference with step `h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Default step for finite-difference derivatives.
pub const FD_STEP: f64 = 1e-4;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trapezoid_is_exact_for_low_trig_polynomials() {
        let v = periodic_trapezoid(64, |x| (3.0 * x).cos().powi(2));
        assert!((v - PI).abs() < 1e-14);
        let v = periodic_trapezoid(64, |x| x.sin() * (2.0 * x).cos());
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn gauss_rule_maps_interval() {
        let rule = GaussRule::new(16, 0.0, PI).unwrap();
        assert_eq!(rule.len(), 16);
        let v = rule.integrate(f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
        assert!(GaussRule::new(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn adaptive_reports_non_finite_integrands() {
        assert!(adaptive(0.0, 1.0, 1e-12, |_| f64::NAN).is_err());
        let v = adaptive(0.0, 1.0, 1e-12, |x| x * x).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn central_difference_is_fourth_order() {
        let d = central_difference(f64::sin, 0.3, FD_STEP);
        assert!((d - 0.3f64.cos()).abs() < 1e-12);
    }
}
