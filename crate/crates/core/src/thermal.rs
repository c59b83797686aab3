//! The ratio `|J| / |rho|` on the ring, read as a temperature, and a check
//! that it is constant.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::source::RingSource;

/// Densities smaller than this are treated as zero.
pub const ZERO_DENSITY: f64 = 1e-12;

/// Samples with `|rho|` below this are skipped by [`equilibrium_check`]:
/// the ratio is ill-conditioned there.
pub const NEAR_ZERO_DENSITY: f64 = 1e-6;

/// Spread `max - min` below which the temperature counts as constant.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-9;

/// `|J(theta, t)| / |rho(theta, t)|`.
///
/// Where the density vanishes the limit along the ring is used: it exists
/// when the current vanishes too and the density has a simple zero.
pub fn temperature(src: &(impl RingSource + ?Sized), theta: f64, t: f64) -> Result<f64> {
    let rho = src.density(theta, t);
    let j = src.current(theta, t);
    if rho.abs() > ZERO_DENSITY {
        return Ok(j.abs() / rho.abs());
    }
    if j.abs() > ZERO_DENSITY {
        return Err(Error::Degenerate(format!(
            "charge vanishes but current {j:e} does not at theta = {theta}, t = {t}"
        )));
    }
    let drho = src.density_slope(theta, t);
    if drho.abs() <= ZERO_DENSITY {
        return Err(Error::Degenerate(format!(
            "charge and current vanish to higher order at theta = {theta}, t = {t}"
        )));
    }
    Ok(src.current_slope(theta, t).abs() / drho.abs())
}

/// Temperature as a field on the ring.
pub struct TemperatureField<S> {
    pub source: S,
}

impl<S: RingSource> TemperatureField<S> {
    pub fn new(source: S) -> Self {
        Self { source }
    }

    pub fn value(&self, theta: f64, t: f64) -> Result<f64> {
        temperature(&self.source, theta, t)
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while k > 0 {
        x += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    x
}

/// Points `(theta, t)` of the base-(2, 3) Halton sequence over
/// `[-pi, pi) x [0, span)`.
pub fn halton_points(n: usize, span: f64) -> impl Iterator<Item = (f64, f64)> {
    (1..=n as u64).map(move |k| (-PI + 2.0 * PI * radical_inverse(k, 2), span * radical_inverse(k, 3)))
}

/// Range of the temperature over the non-degenerate samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport {
    pub min: f64,
    pub max: f64,
    pub used: usize,
    pub degenerate: usize,
}

impl EquilibriumReport {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }

    pub fn is_equilibrium(&self) -> bool {
        self.spread() < EQUILIBRIUM_TOLERANCE
    }
}

/// Sample the temperature at `samples` quasi-random points. Samples where
/// the density is nearly zero are skipped; more than half skipped is
/// inconclusive.
pub fn equilibrium_report(src: &(impl RingSource + ?Sized), samples: usize) -> Result<EquilibriumReport> {
    if samples < 10 {
        return Err(Error::InputDomain(format!("need at least 10 samples, got {samples}")));
    }
    let span = src.period().map(|p| 2.0 * p).unwrap_or(2.0 * PI);
    let mut report = EquilibriumReport {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        used: 0,
        degenerate: 0,
    };
    for (theta, t) in halton_points(samples, span) {
        if src.density(theta, t).abs() < NEAR_ZERO_DENSITY {
            report.degenerate += 1;
            continue;
        }
        let v = temperature(src, theta, t)?;
        report.min = report.min.min(v);
        report.max = report.max.max(v);
        report.used += 1;
    }
    if 2 * report.degenerate > samples {
        return Err(Error::Inconclusive {
            degenerate: report.degenerate,
            total: samples,
        });
    }
    Ok(report)
}

/// True when the temperature is constant over the sample set.
pub fn equilibrium_check(src: &(impl RingSource + ?Sized), samples: usize) -> Result<bool> {
    Ok(equilibrium_report(src, samples)?.is_equilibrium())
}
