//! Continuity-preserving flows in the plane and in a thin shell around the
//! ring.
//!
//! The ring current `J(theta, t)` is extended off the circle as the planar
//! field `J(theta, t) (-y, x, 0)`, which equals the tangential current on
//! `r = 1` and has divergence exactly `dJ/dtheta` everywhere. Multiplying
//! by radial and axial bumps that depend only on `r` and `z` keeps that
//! divergence, so the volumetric pair still satisfies continuity.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, central_difference, FD_STEP};
use crate::source::RingSource;
use crate::Vec3;

/// Absolute tolerance for radial reconstruction integrals.
pub const RADIAL_TOLERANCE: f64 = 1e-10;

/// `J(theta, t) (-sin theta, cos theta, 0)`.
pub fn ring_current_vector(src: &impl RingSource, theta: f64, t: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    src.current(theta, t) * Vec3::new(-s, c, 0.0)
}

/// Planar divergence `dFx/dx + dFy/dy` by central differences.
pub fn planar_divergence(field: impl Fn(f64, f64) -> (f64, f64), x: f64, y: f64) -> f64 {
    let dx = central_difference(|u| field(u, y).0, x, FD_STEP);
    let dy = central_difference(|v| field(x, v).1, y, FD_STEP);
    dx + dy
}

/// Divergence of the extended tangential current at the ring point `theta`.
/// Equals `dJ/dtheta` up to differencing error.
pub fn surface_divergence(src: &impl RingSource, theta: f64, t: f64) -> f64 {
    let field = |x: f64, y: f64| {
        let j = src.current(y.atan2(x), t);
        (-y * j, x * j)
    };
    let (s, c) = theta.sin_cos();
    planar_divergence(field, c, s)
}

/// Divergence of the circular flow `w(r, theta) (-sin theta, cos theta)` at
/// polar point `(r, theta)`. Zero whenever `w` does not depend on `theta`;
/// otherwise `(1/r) dw/dtheta`.
pub fn circular_flow_divergence(w: impl Fn(f64, f64) -> f64, r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InputDomain(format!("radius must be positive, got {r}")));
    }
    let field = |x: f64, y: f64| {
        let rr = x.hypot(y);
        let th = y.atan2(x);
        let v = w(rr, th);
        (-th.sin() * v, th.cos() * v)
    };
    let (s, c) = theta.sin_cos();
    Ok(planar_divergence(field, r * c, r * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpKind {
    /// `exp(1 - 1/(1 - u^2))` for `|u| < 1`, zero otherwise.
    Compact,
    /// `exp(-u^2)`, positive everywhere, undefined on the axis.
    Analytic,
}

/// Radial and axial profile of half-width `epsilon`, normalised to 1 at
/// `r = 1` and `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    epsilon: f64,
    kind: BumpKind,
}

impl BumpProfile {
    pub fn new(epsilon: f64, kind: BumpKind) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InputDomain(format!("bump width must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self { epsilon, kind })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn kind(&self) -> BumpKind {
        self.kind
    }

    fn shape(&self, u: f64) -> f64 {
        match self.kind {
            BumpKind::Compact => {
                let u2 = u * u;
                if u2 >= 1.0 {
                    0.0
                } else {
                    // e * exp(-1/(1-u^2)) folded into one exponential
                    (-u2 / (1.0 - u2)).exp()
                }
            }
            BumpKind::Analytic => (-u * u).exp(),
        }
    }

    /// Radial factor at cylindrical radius `r`.
    pub fn radial(&self, r: f64) -> Result<f64> {
        if r == 0.0 && self.kind == BumpKind::Analytic {
            return Err(Error::UndefinedOnAxis);
        }
        Ok(self.shape((r - 1.0) / self.epsilon))
    }

    /// Axial factor at height `z`.
    pub fn axial(&self, z: f64) -> f64 {
        self.shape(z / self.epsilon)
    }

    /// True when `(r, z)` lies in the closed support shell.
    pub fn in_support(&self, r: f64, z: f64) -> bool {
        match self.kind {
            BumpKind::Compact => (r - 1.0).abs() <= self.epsilon && z.abs() <= self.epsilon,
            BumpKind::Analytic => true,
        }
    }
}

/// Ring source thickened by a bump profile.
#[derive(Debug, Clone)]
pub struct VolumetricSource<S> {
    pub ring: S,
    pub profile: BumpProfile,
}

/// Extend a ring source into the shell `Ann(1, eps) x (-eps, eps)`.
pub fn bump_extend<S: RingSource>(ring: S, profile: BumpProfile) -> VolumetricSource<S> {
    VolumetricSource { ring, profile }
}

impl<S: RingSource> VolumetricSource<S> {
    fn weight(&self, r: f64, z: f64) -> Result<f64> {
        Ok(self.profile.radial(r)? * self.profile.axial(z))
    }

    /// Charge density at cylindrical coordinates.
    pub fn density_cylindrical(&self, r: f64, theta: f64, z: f64, t: f64) -> Result<f64> {
        let w = self.weight(r, z)?;
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * self.ring.density(theta, t))
    }

    /// Current density at cylindrical coordinates, in Cartesian components.
    pub fn current_cylindrical(&self, r: f64, theta: f64, z: f64, t: f64) -> Result<Vec3> {
        let w = self.weight(r, z)?;
        if w == 0.0 {
            return Ok(Vec3::zeros());
        }
        let (s, c) = theta.sin_cos();
        Ok(w * r * self.ring.current(theta, t) * Vec3::new(-s, c, 0.0))
    }

    pub fn density(&self, p: &Vec3, t: f64) -> Result<f64> {
        let r = p.x.hypot(p.y);
        self.density_cylindrical(r, p.y.atan2(p.x), p.z, t)
    }

    pub fn current(&self, p: &Vec3, t: f64) -> Result<Vec3> {
        let r = p.x.hypot(p.y);
        self.current_cylindrical(r, p.y.atan2(p.x), p.z, t)
    }

    /// `d rho_1/dt + div J` at a point off the axis, derivatives by central
    /// differences.
    pub fn continuity_residual(&self, p: &Vec3, t: f64) -> Result<f64> {
        let h = FD_STEP;
        let err = RefCell::new(None);
        let guard = |v: Result<f64>| capture(&err, v);
        let rate = central_difference(|s| guard(self.density(p, s)), t, h);
        let mut div = 0.0;
        for axis in 0..3 {
            div += central_difference(
                |u| {
                    let mut q = *p;
                    q[axis] = u;
                    guard(self.current(&q, t).map(|j| j[axis]))
                },
                p[axis],
                h,
            );
        }
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(rate + div),
        }
    }
}

/// Unwraps `v`, remembering the first error and substituting NaN.
fn capture(slot: &RefCell<Option<Error>>, v: Result<f64>) -> f64 {
    match v {
        Ok(x) => x,
        Err(e) => {
            slot.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    }
}

/// Region on which a radial flow component is reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FlowDomain {
    /// `1 - epsilon <= r`, with the radial flow prescribed on the inner rim.
    Annulus { epsilon: f64 },
    /// `0 <= r`.
    Disc,
}

impl FlowDomain {
    /// `epsilon == 1` selects the disc.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if epsilon == 1.0 {
            Ok(Self::Disc)
        } else if epsilon > 0.0 && epsilon < 1.0 {
            Ok(Self::Annulus { epsilon })
        } else {
            Err(Error::InputDomain(format!("epsilon must lie in (0, 1], got {epsilon}")))
        }
    }

    pub fn inner(&self) -> f64 {
        match *self {
            Self::Annulus { epsilon } => 1.0 - epsilon,
            Self::Disc => 0.0,
        }
    }
}

/// Radial component `w1(r0, theta0)` that makes `w1 r_hat + w2 theta_hat`
/// divergence free, given the angular component and the radial component
/// `g` on the inner rim.
///
/// `dw2_dtheta` is used when supplied; otherwise the derivative is taken by
/// central differences.
pub fn reconstruct_radial(
    w2: impl Fn(f64, f64) -> f64,
    dw2_dtheta: Option<&dyn Fn(f64, f64) -> f64>,
    boundary_g: impl Fn(f64) -> f64,
    domain: FlowDomain,
    r0: f64,
    theta0: f64,
) -> Result<f64> {
    let slope = |r: f64| match dw2_dtheta {
        Some(d) => d(r, theta0),
        None => central_difference(|a| w2(r, a), theta0, FD_STEP),
    };
    let inner = domain.inner();
    if !r0.is_finite() || r0 < inner {
        return Err(Error::InputDomain(format!("r0 = {r0} lies outside the flow domain (r >= {inner})")));
    }
    match domain {
        FlowDomain::Annulus { .. } => {
            let flux = if r0 == inner {
                0.0
            } else {
                adaptive(inner, r0, RADIAL_TOLERANCE, |r| -slope(r))?
            };
            Ok((inner * boundary_g(theta0) + flux) / r0)
        }
        FlowDomain::Disc => {
            if r0 == 0.0 {
                return Ok(-slope(0.0));
            }
            Ok(adaptive(0.0, r0, RADIAL_TOLERANCE, |r| -slope(r))? / r0)
        }
    }
}

/// Divergence-free planar flow built from an angular component and a
/// boundary radial flow.
pub struct AnnulusFlow<W, G> {
    pub w2: W,
    pub boundary_g: G,
    pub domain: FlowDomain,
    /// Outer radius `1 + delta`.
    pub outer: f64,
}

impl<W, G> AnnulusFlow<W, G>
where
    W: Fn(f64, f64) -> f64,
    G: Fn(f64) -> f64,
{
    pub fn new(w2: W, boundary_g: G, domain: FlowDomain, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InputDomain(format!("delta must be positive, got {delta}")));
        }
        Ok(Self {
            w2,
            boundary_g,
            domain,
            outer: 1.0 + delta,
        })
    }

    pub fn inner(&self) -> f64 {
        self.domain.inner()
    }

    pub fn w1(&self, r: f64, theta: f64) -> Result<f64> {
        if r > self.outer {
            return Err(Error::InputDomain(format!("r = {r} exceeds outer radius {}", self.outer)));
        }
        reconstruct_radial(&self.w2, None, &self.boundary_g, self.domain, r, theta)
    }

    /// Cartesian velocity `w1 r_hat + w2 theta_hat`.
    pub fn velocity(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let r = x.hypot(y);
        let theta = y.atan2(x);
        let w1 = self.w1(r, theta)?;
        let w2 = (self.w2)(r, theta);
        let (s, c) = theta.sin_cos();
        Ok((w1 * c - w2 * s, w1 * s + w2 * c))
    }

    /// Planar divergence at polar point `(r, theta)` by central differences.
    pub fn divergence(&self, r: f64, theta: f64) -> Result<f64> {
        let err = RefCell::new(None);
        let field = |x: f64, y: f64| {
            let v = self.velocity(x, y);
            let vx = capture(&err, v.clone().map(|v| v.0));
            (vx, v.map(|v| v.1).unwrap_or(f64::NAN))
        };
        let (s, c) = theta.sin_cos();
        let d = planar_divergence(field, r * c, r * s);
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{ConstantSource, FnSource};
    use crate::spectral::mode_pair;
    use std::f64::consts::{E, FRAC_1_SQRT_2, PI};

    #[test]
    fn ring_current_is_tangent() {
        let unit = ConstantSource { charge: 0.0, current: 1.0 };
        let v = ring_current_vector(&unit, 0.0, 0.0);
        assert!((v - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        let v = ring_current_vector(&unit, PI / 2.0, 0.0);
        assert!((v - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        let p1 = mode_pair(1, 2).unwrap();
        let v = ring_current_vector(&p1, PI / 4.0, PI / 4.0);
        assert!((v - Vec3::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn surface_divergence_examples() {
        let unit = ConstantSource { charge: 0.0, current: 1.0 };
        assert!(surface_divergence(&unit, 0.4, 0.0).abs() < 1e-12);
        let src = FnSource::new(|_, _| 0.0, |x: f64, t: f64| (2.0 * x).sin() * (2.0 * t).sin());
        assert!((surface_divergence(&src, 0.0, PI / 4.0) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn bump_profiles() {
        let b = BumpProfile::new(0.2, BumpKind::Compact).unwrap();
        assert_eq!(b.radial(1.0).unwrap(), 1.0);
        assert_eq!(b.axial(0.0), 1.0);
        assert_eq!(b.radial(1.21).unwrap(), 0.0);
        assert_eq!(b.radial(0.0).unwrap(), 0.0);
        // oracle: the unnormalised bump exp(-1/(1-u^2)) scaled by e
        let u: f64 = 0.5;
        assert!((b.radial(1.1).unwrap() - E * (-1.0 / (1.0 - u * u)).exp()).abs() < 1e-15);
        let a = BumpProfile::new(0.2, BumpKind::Analytic).unwrap();
        assert!(a.radial(1.5).unwrap() > 0.0);
        assert_eq!(a.radial(0.0), Err(Error::UndefinedOnAxis));
        assert!(BumpProfile::new(1.0, BumpKind::Compact).is_err());
        assert!(BumpProfile::new(0.0, BumpKind::Compact).is_err());
    }

    #[test]
    fn extension_restricts_to_ring() {
        let p = mode_pair(3, 2).unwrap();
        let vol = bump_extend(p, BumpProfile::new(0.2, BumpKind::Compact).unwrap());
        let (theta, t) = (0.7f64, 0.3);
        let q = Vec3::new(theta.cos(), theta.sin(), 0.0);
        assert!((vol.density(&q, t).unwrap() - p.density(theta, t)).abs() < 1e-15);
        assert!((vol.current(&q, t).unwrap() - ring_current_vector(&p, theta, t)).norm() < 1e-15);
        let out = Vec3::new(1.0 + 0.2 + 0.01, 0.0, 0.0);
        assert_eq!(vol.density(&out, t).unwrap(), 0.0);
        assert_eq!(vol.current(&out, t).unwrap(), Vec3::zeros());
        assert_eq!(vol.density(&Vec3::new(0.0, 0.0, 0.1), t).unwrap(), 0.0);
    }

    #[test]
    fn extension_satisfies_continuity() {
        let p = mode_pair(1, 2).unwrap();
        let vol = bump_extend(p, BumpProfile::new(0.2, BumpKind::Compact).unwrap());
        let (r, th, z, t) = (1.05f64, 0.3f64, 0.02, 0.7);
        let q = Vec3::new(r * th.cos(), r * th.sin(), z);
        assert!(vol.continuity_residual(&q, t).unwrap().abs() < 1e-6);
        let an = bump_extend(p, BumpProfile::new(0.2, BumpKind::Analytic).unwrap());
        assert!(an.continuity_residual(&q, t).unwrap().abs() < 1e-6);
        assert!(an.density(&Vec3::new(0.0, 0.0, 0.3), t).is_err());
    }

    #[test]
    fn circular_flows() {
        assert!(circular_flow_divergence(|_, _| 1.0, 2.0, 0.5).unwrap().abs() < 1e-8);
        assert!(circular_flow_divergence(|r, _| r * r, 0.7, -1.2).unwrap().abs() < 1e-8);
        let r = 1.3;
        let d = circular_flow_divergence(|_, th: f64| 2.0 + th.cos(), r, PI / 2.0).unwrap();
        assert!((d + 1.0 / r).abs() < 1e-8);
        assert!(circular_flow_divergence(|_, _| 1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn radial_reconstruction_examples() {
        let annulus = FlowDomain::from_epsilon(0.5).unwrap();
        let v = reconstruct_radial(|r, _| r, None, |_| 5.0, annulus, 1.0, 0.3).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
        let disc = FlowDomain::from_epsilon(1.0).unwrap();
        let w2 = |r: f64, th: f64| r * th.sin();
        let v = reconstruct_radial(w2, None, |_| 0.0, disc, 0.8, 0.0).unwrap();
        assert!((v + 0.4).abs() < 1e-10);
        let v0 = reconstruct_radial(|r: f64, th: f64| (1.0 + r) * th.sin(), None, |_| 0.0, disc, 0.0, 0.0).unwrap();
        assert!((v0 + 1.0).abs() < 1e-10);
        assert!(reconstruct_radial(w2, None, |_| 0.0, annulus, 0.2, 0.0).is_err());
        assert!(FlowDomain::from_epsilon(1.5).is_err());
    }

    #[test]
    fn reconstructed_flow_is_divergence_free() {
        let flow = AnnulusFlow::new(
            |r: f64, th: f64| r * r * (2.0 * th).sin() + th.cos(),
            |th: f64| 1.0 + 0.5 * th.sin(),
            FlowDomain::from_epsilon(0.3).unwrap(),
            0.4,
        )
        .unwrap();
        for &(r, th) in &[(0.9, 0.1), (1.1, 2.0), (1.3, -2.5)] {
            assert!(flow.divergence(r, th).unwrap().abs() < 1e-6);
        }
        assert!(flow.w1(2.0, 0.0).is_err());
    }
}
