//! Poynting flux of the retarded fields through spheres centred on the ring,
//! and its integral over one temporal cycle.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farfield::{far_field_basis, FarFieldBasis};
use crate::fields::{causal_fields_direct, check_speed, EvalPoint, FieldSample, DEFAULT_THETA_NODES};
use crate::quadrature::{periodic_nodes, periodic_trapezoid_on, GaussRule};
use crate::source::{ConstantSource, RingSource, WithBackground};
use crate::spectral::{combined_source, ModeWeights, StandingWaves};
use crate::Vec3;

/// Quadrature resolution shared by the flux computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounts {
    /// Ring nodes for the retarded integrals and basis integrals.
    pub theta: usize,
    /// Gauss-Legendre nodes in the polar angle.
    pub phi: usize,
    /// Trapezoid nodes in the azimuth on the sphere.
    pub sphere_theta: usize,
    /// Trapezoid nodes over one cycle.
    pub time: usize,
}

impl Default for NodeCounts {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA_NODES,
            phi: 64,
            sphere_theta: 128,
            time: 128,
        }
    }
}

impl NodeCounts {
    pub fn validate(&self) -> Result<()> {
        if self.phi < 16 || self.sphere_theta < 16 {
            return Err(Error::InputDomain("sphere quadrature needs at least 16 nodes per angle".into()));
        }
        if self.theta < 64 {
            return Err(Error::InputDomain("ring quadrature needs at least 64 nodes".into()));
        }
        if self.time < 32 {
            return Err(Error::InputDomain("cycle quadrature needs at least 32 time nodes".into()));
        }
        Ok(())
    }
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Quadrature nodes on the sphere of radius `r`: point, outward normal and
/// weight (including `r^2 sin(phi)`).
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub radius: f64,
    pub nodes: Vec<(Vec3, Vec3, f64)>,
}

impl SphereGrid {
    pub fn new(r: f64, nodes_phi: usize, nodes_theta: usize) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InputDomain(format!("sphere radius must be positive, got {r}")));
        }
        if nodes_phi < 16 || nodes_theta < 16 {
            return Err(Error::InputDomain("sphere quadrature needs at least 16 nodes per angle".into()));
        }
        let rule = GaussRule::new(nodes_phi, 0.0, PI)?;
        let dtheta = 2.0 * PI / nodes_theta as f64;
        let mut nodes = Vec::with_capacity(nodes_phi * nodes_theta);
        for (phi, wphi) in rule.iter() {
            let (sp, cp) = phi.sin_cos();
            for theta in periodic_nodes(nodes_theta) {
                let (st, ct) = theta.sin_cos();
                let n = Vec3::new(sp * ct, sp * st, cp);
                nodes.push((r * n, n, wphi * dtheta * sp * r * r));
            }
        }
        Ok(Self { radius: r, nodes })
    }
}

/// Flux value and the largest `|F . n|` seen at a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereFlux {
    pub value: f64,
    pub max_integrand: f64,
}

/// `int_{S(r)} F . dS` by Gauss-Legendre in the polar angle and trapezoid in
/// the azimuth.
pub fn sphere_flux(
    field: impl Fn(&Vec3) -> Result<Vec3> + Sync + Send,
    r: f64,
    nodes_phi: usize,
    nodes_theta: usize,
) -> Result<SphereFlux> {
    let grid = SphereGrid::new(r, nodes_phi, nodes_theta)?;
    let samples = par_map(&grid.nodes, |(p, n, w)| field(p).map(|f| (w * f.dot(n), f.dot(n).abs())));
    let mut value = 0.0;
    let mut max_integrand: f64 = 0.0;
    for s in samples {
        let (v, a) = s?;
        value += v;
        max_integrand = max_integrand.max(a);
    }
    Ok(SphereFlux { value, max_integrand })
}

/// One electric term crossed with one magnetic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermPair {
    #[serde(rename = "E1xB1")]
    E1B1,
    #[serde(rename = "E1xB2")]
    E1B2,
    #[serde(rename = "E2xB1")]
    E2B1,
    #[serde(rename = "E2xB2")]
    E2B2,
    #[serde(rename = "E3xB1")]
    E3B1,
    #[serde(rename = "E3xB2")]
    E3B2,
}

impl TermPair {
    pub const ALL: [TermPair; 6] = [Self::E1B1, Self::E1B2, Self::E2B1, Self::E2B2, Self::E3B1, Self::E3B2];

    /// True for the two pairs that survive at large radius.
    pub fn is_radiative(self) -> bool {
        matches!(self, Self::E2B2 | Self::E3B2)
    }

    fn cross(self, f: &FieldSample) -> Vec3 {
        let (e, b) = match self {
            Self::E1B1 => (f.e1, f.b1),
            Self::E1B2 => (f.e1, f.b2),
            Self::E2B1 => (f.e2, f.b1),
            Self::E2B2 => (f.e2, f.b2),
            Self::E3B1 => (f.e3, f.b1),
            Self::E3B2 => (f.e3, f.b2),
        };
        e.cross(&b)
    }
}

impl fmt::Display for TermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::E1B1 => "E1xB1",
            Self::E1B2 => "E1xB2",
            Self::E2B1 => "E2xB1",
            Self::E2B2 => "E2xB2",
            Self::E3B1 => "E3xB1",
            Self::E3B2 => "E3xB2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    /// Full retarded fields by ring quadrature.
    Direct,
    /// Leading-order `E2`, `E3`, `B2` from the far-field basis.
    FarField,
}

/// Instantaneous flux through `S(r)` at time `t`, split by term pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxRecord {
    pub radius: f64,
    pub time: f64,
    pub power: f64,
    pub parts: BTreeMap<TermPair, f64>,
}

impl FluxRecord {
    fn from_parts(radius: f64, time: f64, parts: BTreeMap<TermPair, f64>) -> Self {
        let power = parts.values().sum();
        Self {
            radius,
            time,
            power,
            parts,
        }
    }

    pub fn part(&self, pair: TermPair) -> f64 {
        self.parts.get(&pair).copied().unwrap_or(0.0)
    }

    /// Sum of every pair except `E2xB2` and `E3xB2`.
    pub fn other(&self) -> f64 {
        self.parts
            .iter()
            .filter(|(k, _)| !k.is_radiative())
            .map(|(_, v)| v)
            .sum()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 1.0 {
        return Err(Error::InsideSource(r));
    }
    Ok(())
}

/// Per-pair fluxes of the full retarded fields of any ring source.
pub fn source_flux(src: &(impl RingSource + ?Sized), r: f64, t: f64, c: f64, nodes: &NodeCounts) -> Result<FluxRecord> {
    check_radius(r)?;
    check_speed(c)?;
    let grid = SphereGrid::new(r, nodes.phi, nodes.sphere_theta)?;
    let samples = par_map(&grid.nodes, |(p, n, w)| -> Result<[f64; 6]> {
        let f = causal_fields_direct(src, &EvalPoint::at(*p, t)?, c, nodes.theta)?;
        let mut out = [0.0; 6];
        for (o, pair) in out.iter_mut().zip(TermPair::ALL) {
            *o = w * pair.cross(&f).dot(n);
        }
        Ok(out)
    });
    let mut sums = [0.0; 6];
    for s in samples {
        for (acc, v) in sums.iter_mut().zip(s?) {
            *acc += v;
        }
    }
    Ok(FluxRecord::from_parts(r, t, TermPair::ALL.into_iter().zip(sums).collect()))
}

/// Far-field basis at every node of a sphere, reusable across times and
/// weights with the same `m` and `c`.
#[derive(Debug, Clone)]
pub struct FarFieldSphere {
    pub radius: f64,
    pub m: u32,
    pub c: f64,
    nodes: Vec<(Vec3, f64, FarFieldBasis)>,
}

impl FarFieldSphere {
    pub fn new(m: u32, r: f64, c: f64, nodes: &NodeCounts) -> Result<Self> {
        check_radius(r)?;
        let grid = SphereGrid::new(r, nodes.phi, nodes.sphere_theta)?;
        let built = par_map(&grid.nodes, |(p, n, w)| far_field_basis(m, p, c, nodes.theta).map(|b| (*n, *w, b)));
        let nodes = built.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { radius: r, m, c, nodes })
    }

    /// `E2xB2` and `E3xB2` fluxes at time `t`.
    pub fn record(&self, weights: &ModeWeights, t: f64) -> Result<FluxRecord> {
        let mut e2b2 = 0.0;
        let mut e3b2 = 0.0;
        for (n, w, basis) in &self.nodes {
            let f = basis.terms(weights, t)?;
            e2b2 += w * f.e2.cross(&f.b2).dot(n);
            e3b2 += w * f.e3.cross(&f.b2).dot(n);
        }
        let parts = [(TermPair::E2B2, e2b2), (TermPair::E3B2, e3b2)].into_iter().collect();
        Ok(FluxRecord::from_parts(self.radius, t, parts))
    }

    /// Cycle integral over `[t0, t0 + pi/m]`.
    pub fn cycle(&self, weights: &ModeWeights, t0: f64, time_nodes: usize) -> Result<CycleRecord> {
        integrate_cycle(self.radius, t0, weights.half_period(), time_nodes, |t| self.record(weights, t))
    }
}

/// Instantaneous flux of a weighted mode combination through `S(r)`.
pub fn instantaneous_power(
    weights: &ModeWeights,
    r: f64,
    t: f64,
    c: f64,
    mode: PowerMode,
    nodes: &NodeCounts,
) -> Result<FluxRecord> {
    match mode {
        PowerMode::Direct => source_flux(&combined_source(*weights), r, t, c, nodes),
        PowerMode::FarField => FarFieldSphere::new(weights.m, r, c, nodes)?.record(weights, t),
    }
}

/// Energy through `S(r)` over one cycle `[t0, t0 + period]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub radius: f64,
    pub t0: f64,
    pub period: f64,
    pub integral: f64,
    /// Cycle integral of each term pair.
    pub parts: BTreeMap<TermPair, f64>,
}

impl CycleRecord {
    pub fn part(&self, pair: TermPair) -> f64 {
        self.parts.get(&pair).copied().unwrap_or(0.0)
    }
}

fn integrate_cycle(
    r: f64,
    t0: f64,
    period: f64,
    time_nodes: usize,
    mut at: impl FnMut(f64) -> Result<FluxRecord>,
) -> Result<CycleRecord> {
    if time_nodes < 32 {
        return Err(Error::InputDomain("cycle quadrature needs at least 32 time nodes".into()));
    }
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InputDomain(format!("cycle period must be positive, got {period}")));
    }
    let step = period / time_nodes as f64;
    let mut parts: BTreeMap<TermPair, f64> = BTreeMap::new();
    for k in 0..time_nodes {
        let rec = at(t0 + step * k as f64)?;
        for (pair, v) in rec.parts {
            *parts.entry(pair).or_insert(0.0) += step * v;
        }
    }
    let integral = parts.values().sum();
    Ok(CycleRecord {
        radius: r,
        t0,
        period,
        integral,
        parts,
    })
}

/// Cycle integral of a weighted mode combination; the period is `pi / m`,
/// after which every field changes sign and the flux repeats.
pub fn cycle_power(
    weights: &ModeWeights,
    r: f64,
    t0: f64,
    c: f64,
    mode: PowerMode,
    nodes: &NodeCounts,
) -> Result<CycleRecord> {
    match mode {
        PowerMode::FarField => FarFieldSphere::new(weights.m, r, c, nodes)?.cycle(weights, t0, nodes.time),
        PowerMode::Direct => {
            cycle_power_source(&combined_source(*weights), weights.half_period(), r, t0, c, nodes)
        }
    }
}

/// Cycle integral of the full retarded flux of any ring source.
pub fn cycle_power_source(
    src: &(impl RingSource + ?Sized),
    period: f64,
    r: f64,
    t0: f64,
    c: f64,
    nodes: &NodeCounts,
) -> Result<CycleRecord> {
    integrate_cycle(r, t0, period, nodes.time, |t| source_flux(src, r, t, c, nodes))
}

/// Trapezoid integral of `f` over `[t0, t0 + period]`.
pub fn cycle_integral(t0: f64, period: f64, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    periodic_trapezoid_on(t0, period, nodes, f)
}

/// Relative tolerance used by [`admissible_weights`].
pub const ADMISSIBLE_TOLERANCE: f64 = 1e-12;

/// True when
/// `a1^2 = a2^2`, `a3^2 = a4^2`, `a1 a2 = -a3 a4`, `a1 a3 = -a2 a4` and
/// `a2 a3 = -a1 a4`, each to `tol` relative to the largest squared weight.
pub fn admissible_weights_tol(a: [f64; 4], tol: f64) -> bool {
    let [a1, a2, a3, a4] = a;
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v * v)).max(f64::MIN_POSITIVE);
    let residuals = [
        a1 * a1 - a2 * a2,
        a3 * a3 - a4 * a4,
        a1 * a2 + a3 * a4,
        a1 * a3 + a2 * a4,
        a2 * a3 + a1 * a4,
    ];
    residuals.iter().all(|r| r.abs() <= tol * scale)
}

pub fn admissible_weights(a: [f64; 4]) -> bool {
    admissible_weights_tol(a, ADMISSIBLE_TOLERANCE)
}

/// Power law `|integral| ~ amplitude * r^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub amplitude: f64,
}

/// Least-squares fit of `log |integral|` against `log r`.
///
/// A zero integral yields the sentinel exponent `-inf` with amplitude 0.
pub fn decay_fit(records: &[CycleRecord]) -> Result<DecayFit> {
    let mut radii: Vec<f64> = records.iter().map(|r| r.radius).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    if records.len() < 3 || radii.len() != records.len() {
        return Err(Error::TooFewRecords(radii.len().min(records.len())));
    }
    if records.iter().any(|r| r.integral == 0.0) {
        return Ok(DecayFit {
            exponent: f64::NEG_INFINITY,
            amplitude: 0.0,
        });
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.radius.ln(), r.integral.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    Ok(DecayFit {
        exponent,
        amplitude: (my - exponent * mx).exp(),
    })
}

/// Mode combination run at signal speed `c`: density `rho(x, c t)` and
/// current `c J(x, c t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledSource {
    pub base: StandingWaves,
    pub c: f64,
}

pub fn rescaled_source(weights: ModeWeights, c: f64) -> Result<RescaledSource> {
    check_speed(c)?;
    Ok(RescaledSource {
        base: combined_source(weights),
        c,
    })
}

impl RingSource for RescaledSource {
    fn density(&self, theta: f64, t: f64) -> f64 {
        self.base.density(theta, self.c * t)
    }
    fn current(&self, theta: f64, t: f64) -> f64 {
        self.c * self.base.current(theta, self.c * t)
    }
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        self.c * self.base.density_rate(theta, self.c * t)
    }
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        self.c * self.c * self.base.current_rate(theta, self.c * t)
    }
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        self.c * self.base.current_slope(theta, self.c * t)
    }
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        self.base.density_slope(theta, self.c * t)
    }
    /// `pi / (m c)`.
    fn period(&self) -> Option<f64> {
        Some(self.base.weights.half_period() / self.c)
    }
}

/// `(rho + a, J + b)`.
pub fn add_constant_background<S: RingSource>(src: S, a: f64, b: f64) -> WithBackground<S> {
    WithBackground {
        inner: src,
        background: ConstantSource { charge: a, current: b },
    }
}
