//! Charge and current carried by the unit circle `S^1` in the plane `z = 0`.
//!
//! A ring source is a pair of scalar functions of `(theta, t)`: the line
//! charge density and the scalar current along the tangent
//! `(-sin theta, cos theta, 0)`. Field evaluation needs the time derivatives
//! at retarded times, so implementors with closed forms should override the
//! rate methods; the defaults fall back to finite differences.

use std::sync::Arc;

use crate::quadrature::{central_difference, FD_STEP};

pub trait RingSource: Send + Sync {
    fn density(&self, theta: f64, t: f64) -> f64;

    fn current(&self, theta: f64, t: f64) -> f64;

    /// `d rho / dt`.
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        central_difference(|s| self.density(theta, s), t, FD_STEP)
    }

    /// `d J / dt`.
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        central_difference(|s| self.current(theta, s), t, FD_STEP)
    }

    /// `d J / d theta`.
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        central_difference(|a| self.current(a, t), theta, FD_STEP)
    }

    /// `d rho / d theta`.
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        central_difference(|a| self.density(a, t), theta, FD_STEP)
    }

    /// Temporal period over which the radiated power is integrated, if the
    /// source is periodic.
    fn period(&self) -> Option<f64> {
        None
    }

    /// Residual of `d rho/dt + dJ/dtheta` at one point.
    fn continuity_residual(&self, theta: f64, t: f64) -> f64 {
        self.density_rate(theta, t) + self.current_slope(theta, t)
    }
}

macro_rules! forward_ring_source {
    ($($ty:ty),*) => {$(
        impl<S: RingSource + ?Sized> RingSource for $ty {
            fn density(&self, theta: f64, t: f64) -> f64 { (**self).density(theta, t) }
            fn current(&self, theta: f64, t: f64) -> f64 { (**self).current(theta, t) }
            fn density_rate(&self, theta: f64, t: f64) -> f64 { (**self).density_rate(theta, t) }
            fn current_rate(&self, theta: f64, t: f64) -> f64 { (**self).current_rate(theta, t) }
            fn current_slope(&self, theta: f64, t: f64) -> f64 { (**self).current_slope(theta, t) }
            fn density_slope(&self, theta: f64, t: f64) -> f64 { (**self).density_slope(theta, t) }
            fn period(&self) -> Option<f64> { (**self).period() }
        }
    )*};
}

forward_ring_source!(&S, Box<S>, Arc<S>);

/// Ring source built from two closures. Derivatives use finite differences.
pub struct FnSource<R, J> {
    density: R,
    current: J,
    period: Option<f64>,
}

impl<R, J> FnSource<R, J>
where
    R: Fn(f64, f64) -> f64 + Send + Sync,
    J: Fn(f64, f64) -> f64 + Send + Sync,
{
    pub fn new(density: R, current: J) -> Self {
        Self {
            density,
            current,
            period: None,
        }
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }
}

impl<R, J> RingSource for FnSource<R, J>
where
    R: Fn(f64, f64) -> f64 + Send + Sync,
    J: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn density(&self, theta: f64, t: f64) -> f64 {
        (self.density)(theta, t)
    }

    fn current(&self, theta: f64, t: f64) -> f64 {
        (self.current)(theta, t)
    }

    fn period(&self) -> Option<f64> {
        self.period
    }
}

/// Uniform static charge `a` and current `b` on the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSource {
    pub charge: f64,
    pub current: f64,
}

impl RingSource for ConstantSource {
    fn density(&self, _: f64, _: f64) -> f64 {
        self.charge
    }
    fn current(&self, _: f64, _: f64) -> f64 {
        self.current
    }
    fn density_rate(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn current_rate(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn current_slope(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn density_slope(&self, _: f64, _: f64) -> f64 {
        0.0
    }
}

/// A source with a constant background added to its charge and current.
#[derive(Debug, Clone)]
pub struct WithBackground<S> {
    pub inner: S,
    pub background: ConstantSource,
}

impl<S: RingSource> RingSource for WithBackground<S> {
    fn density(&self, theta: f64, t: f64) -> f64 {
        self.inner.density(theta, t) + self.background.charge
    }
    fn current(&self, theta: f64, t: f64) -> f64 {
        self.inner.current(theta, t) + self.background.current
    }
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        self.inner.density_rate(theta, t)
    }
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        self.inner.current_rate(theta, t)
    }
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        self.inner.current_slope(theta, t)
    }
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        self.inner.density_slope(theta, t)
    }
    fn period(&self) -> Option<f64> {
        self.inner.period()
    }
}

/// Pointwise scaling of charge and current by a common factor.
#[derive(Debug, Clone)]
pub struct Scaled<S> {
    pub inner: S,
    pub factor: f64,
}

impl<S: RingSource> RingSource for Scaled<S> {
    fn density(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.density(theta, t)
    }
    fn current(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.current(theta, t)
    }
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.density_rate(theta, t)
    }
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.current_rate(theta, t)
    }
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.current_slope(theta, t)
    }
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        self.factor * self.inner.density_slope(theta, t)
    }
    fn period(&self) -> Option<f64> {
        self.inner.period()
    }
}

/// Zero charge and current.
#[derive(Debug, Clone, Copy, Default)]
pub struct Vacuum;

impl RingSource for Vacuum {
    fn density(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn current(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn density_rate(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn current_rate(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn current_slope(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn density_slope(&self, _: f64, _: f64) -> f64 {
        0.0
    }
}
