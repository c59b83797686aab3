//! Retarded (Jefimenko) fields of a ring source, by trapezoid quadrature
//! over the ring angle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::periodic_nodes;
use crate::source::RingSource;
use crate::Vec3;

/// Default number of ring nodes.
pub const DEFAULT_THETA_NODES: usize = 4096;

/// Smallest accepted node count for direct evaluation.
pub const MIN_THETA_NODES: usize = 64;

/// Relative change tolerated between successive node doublings.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-10;

/// Points closer than this to the ring are rejected as singular.
const RING_CLEARANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub position: Vec3,
    pub time: f64,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64, z: f64, time: f64) -> Result<Self> {
        if ![x, y, z, time].iter().all(|v| v.is_finite()) {
            return Err(Error::InputDomain("evaluation point must be finite".into()));
        }
        Ok(Self {
            position: Vec3::new(x, y, z),
            time,
        })
    }

    pub fn at(position: Vec3, time: f64) -> Result<Self> {
        Self::new(position.x, position.y, position.z, time)
    }

    pub fn radius(&self) -> f64 {
        self.position.norm()
    }

    /// Distance from the point to the ring.
    pub fn ring_clearance(&self) -> f64 {
        let p = &self.position;
        (p.x.hypot(p.y) - 1.0).hypot(p.z)
    }
}

/// The five retarded terms and their sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
    pub b1: Vec3,
    pub b2: Vec3,
    pub e_total: Vec3,
    pub b_total: Vec3,
}

impl FieldSample {
    pub fn from_terms(e1: Vec3, e2: Vec3, e3: Vec3, b1: Vec3, b2: Vec3) -> Self {
        Self {
            e1,
            e2,
            e3,
            b1,
            b2,
            e_total: e1 + e2 + e3,
            b_total: b1 + b2,
        }
    }

    pub fn zero() -> Self {
        let z = Vec3::zeros();
        Self::from_terms(z, z, z, z, z)
    }

    fn max_abs(&self) -> f64 {
        [self.e1, self.e2, self.e3, self.b1, self.b2]
            .iter()
            .map(|v| v.amax())
            .fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = [self.e1, self.e2, self.e3, self.b1, self.b2];
        let b = [other.e1, other.e2, other.e3, other.b1, other.b2];
        a.iter().zip(&b).map(|(u, v)| (u - v).amax()).fold(0.0, f64::max)
    }
}

/// `sqrt(r^2 + 1 - 2 x cos(theta) - 2 y sin(theta))`, the distance from the
/// point to the ring element at `theta`.
pub fn retarded_distance(point: &EvalPoint, theta: f64) -> f64 {
    let p = &point.position;
    let (s, c) = theta.sin_cos();
    (p.norm_squared() + 1.0 - 2.0 * p.x * c - 2.0 * p.y * s).max(0.0).sqrt()
}

pub(crate) fn check_speed(c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InputDomain(format!("signal speed must be positive and finite, got {c}")));
    }
    Ok(())
}

/// All five retarded terms at `point` by `nodes`-point trapezoid quadrature
/// over the ring.
pub fn causal_fields_direct(src: &(impl RingSource + ?Sized), point: &EvalPoint, c: f64, nodes: usize) -> Result<FieldSample> {
    check_speed(c)?;
    if nodes < MIN_THETA_NODES {
        return Err(Error::InputDomain(format!("need at least {MIN_THETA_NODES} ring nodes, got {nodes}")));
    }
    if point.ring_clearance() < RING_CLEARANCE {
        let p = point.position;
        return Err(Error::Singular { x: p.x, y: p.y, z: p.z });
    }
    let p = point.position;
    let t = point.time;
    let (mut e1, mut e2, mut e3, mut b1, mut b2) = (Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
    for theta in periodic_nodes(nodes) {
        let (s, co) = theta.sin_cos();
        let sep = p - Vec3::new(co, s, 0.0);
        let d = sep.norm();
        let tr = t - d / c;
        let tangent = Vec3::new(-s, co, 0.0);
        let rho = src.density(theta, tr);
        let rho_dot = src.density_rate(theta, tr);
        let j = src.current(theta, tr);
        let j_dot = src.current_rate(theta, tr);
        let d2 = d * d;
        let d3 = d2 * d;
        let turn = tangent.cross(&sep);
        e1 += (rho / d3) * sep;
        e2 += (rho_dot / (c * d2)) * sep;
        e3 -= (j_dot / (c * c * d)) * tangent;
        b1 += (j / d3) * turn;
        b2 += (j_dot / (c * d2)) * turn;
    }
    let w = std::f64::consts::TAU / nodes as f64 / (4.0 * std::f64::consts::PI);
    Ok(FieldSample::from_terms(w * e1, w * e2, w * e3, w * b1, w * b2))
}

/// Direct evaluation that doubles the node count from `start` until two
/// successive results agree to [`CONVERGENCE_TOLERANCE`] relative, up to
/// `max_nodes`.
pub fn causal_fields_converged(
    src: &(impl RingSource + ?Sized),
    point: &EvalPoint,
    c: f64,
    start: usize,
    max_nodes: usize,
) -> Result<FieldSample> {
    let mut n = start.max(MIN_THETA_NODES);
    let mut prev = causal_fields_direct(src, point, c, n)?;
    loop {
        n *= 2;
        let next = causal_fields_direct(src, point, c, n)?;
        let scale = next.max_abs().max(f64::MIN_POSITIVE);
        let change = next.max_abs_diff(&prev) / scale;
        if change <= CONVERGENCE_TOLERANCE || next.max_abs() == 0.0 {
            return Ok(next);
        }
        if n >= max_nodes {
            return Err(Error::Tolerance {
                estimate: change,
                tolerance: CONVERGENCE_TOLERANCE,
            });
        }
        prev = next;
    }
}
