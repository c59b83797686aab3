//! Spectral solution of the rescaled wave equation `Psi_tt = Psi_xx` on the
//! periodic interval `[-pi, pi)`, the current it induces through the
//! continuity equation, and the four standing-wave charge/current pairs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, periodic_trapezoid};
use crate::source::RingSource;

/// Default spectral cutoff.
pub const DEFAULT_CUTOFF: usize = 32;

/// Absolute tolerance for coefficient and charge integrals.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-12;

/// Node count of the trapezoid fallback for periodic integrands.
pub const TRAPEZOID_FALLBACK_NODES: usize = 4096;

/// Truncated Fourier data of the initial profile `Psi_0` and initial
/// velocity `Psi_1`.
///
/// `a[m] = (1/2pi) int Psi_0 cos(mx)`, `b[m] = (1/2pi) int Psi_0 sin(mx)`,
/// and likewise `a_prime`, `b_prime` for `Psi_1`. All four vectors have
/// length `cutoff + 1`; `b[0]` and `b_prime[0]` are always zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_prime: Vec<f64>,
    pub b_prime: Vec<f64>,
}

impl FourierSpectrum {
    /// All-zero spectrum with the given cutoff.
    pub fn zeros(cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InputDomain("spectral cutoff must be at least 1".into()));
        }
        let z = vec![0.0; cutoff + 1];
        Ok(Self {
            a: z.clone(),
            b: z.clone(),
            a_prime: z.clone(),
            b_prime: z,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.a.len() - 1
    }

    /// True when the data is even in `x` (no sine coefficients).
    pub fn is_symmetric(&self) -> bool {
        self.b.iter().chain(&self.b_prime).all(|&v| v == 0.0)
    }

    fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if n < 2 || self.b.len() != n || self.a_prime.len() != n || self.b_prime.len() != n {
            return Err(Error::InputDomain("coefficient arrays must share length cutoff + 1 >= 2".into()));
        }
        if self.b[0] != 0.0 || self.b_prime[0] != 0.0 {
            return Err(Error::InputDomain("b[0] and b_prime[0] must be zero".into()));
        }
        let finite = [&self.a, &self.b, &self.a_prime, &self.b_prime]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::InputDomain("non-finite Fourier coefficient".into()));
        }
        Ok(())
    }
}

/// `(1/2pi) int_{-pi}^{pi} f dx` for a smooth periodic integrand.
///
/// Adaptive quadrature first; if it misses the tolerance, the periodic
/// trapezoid rule at 4096 nodes, accepted when it agrees with the 2048-node
/// rule.
pub(crate) fn periodic_mean(f: impl Fn(f64) -> f64) -> Result<f64> {
    match adaptive(-PI, PI, COEFFICIENT_TOLERANCE, &f) {
        Ok(v) => Ok(v / (2.0 * PI)),
        Err(Error::Tolerance { .. }) => {
            let fine = periodic_trapezoid(TRAPEZOID_FALLBACK_NODES, &f);
            let coarse = periodic_trapezoid(TRAPEZOID_FALLBACK_NODES / 2, &f);
            let estimate = (fine - coarse).abs();
            if !fine.is_finite() {
                return Err(Error::InputDomain("integrand produced a non-finite value".into()));
            }
            if estimate > COEFFICIENT_TOLERANCE {
                return Err(Error::Tolerance {
                    estimate,
                    tolerance: COEFFICIENT_TOLERANCE,
                });
            }
            Ok(fine / (2.0 * PI))
        }
        Err(e) => Err(e),
    }
}

/// Fourier coefficients of the initial data up to `cutoff`.
pub fn compute_fourier_coefficients(
    psi0: impl Fn(f64) -> f64,
    psi1: impl Fn(f64) -> f64,
    cutoff: usize,
) -> Result<FourierSpectrum> {
    let mut spec = FourierSpectrum::zeros(cutoff)?;
    for m in 0..=cutoff {
        let k = m as f64;
        spec.a[m] = periodic_mean(|x| psi0(x) * (k * x).cos())?;
        spec.a_prime[m] = periodic_mean(|x| psi1(x) * (k * x).cos())?;
        if m > 0 {
            spec.b[m] = periodic_mean(|x| psi0(x) * (k * x).sin())?;
            spec.b_prime[m] = periodic_mean(|x| psi1(x) * (k * x).sin())?;
        }
    }
    Ok(spec)
}

/// Solution of the wave equation given by its truncated series, together
/// with the current `J(x,t) = -int_{-pi}^{x} Psi_t dx'`.
///
/// A nonzero `a_prime[0]` makes the total charge grow linearly and leaves
/// `J` discontinuous across the seam `x = +-pi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSolution {
    pub spectrum: FourierSpectrum,
}

impl WaveSolution {
    pub fn new(spectrum: FourierSpectrum) -> Result<Self> {
        spectrum.validate()?;
        Ok(Self { spectrum })
    }

    /// Solve from initial data with the default cutoff.
    pub fn from_initial_data(psi0: impl Fn(f64) -> f64, psi1: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(compute_fourier_coefficients(psi0, psi1, DEFAULT_CUTOFF)?)
    }

    fn modes(&self) -> impl Iterator<Item = (f64, f64, f64, f64, f64)> + '_ {
        let s = &self.spectrum;
        (1..s.a.len()).map(move |m| (m as f64, s.a[m], s.b[m], s.a_prime[m], s.b_prime[m]))
    }

    /// `Psi(x, t)`.
    pub fn evaluate(&self, x: f64, t: f64) -> f64 {
        let s = &self.spectrum;
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                a * cx * ct + b * sx * ct + ap / k * cx * st + bp / k * sx * st
            })
            .sum();
        s.a[0] + t * s.a_prime[0] + 2.0 * series
    }

    /// `dPsi/dt (x, t)`.
    pub fn time_derivative(&self, x: f64, t: f64) -> f64 {
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                -k * a * cx * st - k * b * sx * st + ap * cx * ct + bp * sx * ct
            })
            .sum();
        self.spectrum.a_prime[0] + 2.0 * series
    }

    /// `d^2 Psi / dt^2`.
    pub fn time_second_derivative(&self, x: f64, t: f64) -> f64 {
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                -k * k * (a * cx * ct + b * sx * ct) - k * (ap * cx * st + bp * sx * st)
            })
            .sum();
        2.0 * series
    }

    /// `dPsi/dx (x, t)`.
    pub fn space_derivative(&self, x: f64, t: f64) -> f64 {
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                -k * a * sx * ct + k * b * cx * ct - ap * sx * st + bp * cx * st
            })
            .sum();
        2.0 * series
    }

    /// Current obtained by integrating `-dPsi/dt` from `-pi` to `x` term by term.
    pub fn induced_current(&self, x: f64, t: f64) -> f64 {
        let s = &self.spectrum;
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                // int_{-pi}^{x} sin(k x') dx' = ((-1)^k - cos(k x)) / k
                let sign = if (k as u64) % 2 == 0 { 1.0 } else { -1.0 };
                let sin_int = sign - cx;
                a * sx * st - ap / k * sx * ct + b * st * sin_int - bp / k * ct * sin_int
            })
            .sum();
        -s.a_prime[0] * PI - s.a_prime[0] * x + 2.0 * series
    }

    /// `dJ/dt`.
    pub fn induced_current_rate(&self, x: f64, t: f64) -> f64 {
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| {
                let (sx, cx) = (k * x).sin_cos();
                let (st, ct) = (k * t).sin_cos();
                let sign = if (k as u64) % 2 == 0 { 1.0 } else { -1.0 };
                let sin_int = sign - cx;
                k * a * sx * ct + ap * sx * st + k * b * ct * sin_int + bp * st * sin_int
            })
            .sum();
        2.0 * series
    }

    /// Upper bound on `|Psi(x, t')|` valid for every `t'`, available when
    /// the data carries no linearly growing mode (`a_prime[0] == 0`).
    pub fn amplitude_bound(&self) -> Option<f64> {
        let s = &self.spectrum;
        if s.a_prime[0] != 0.0 {
            return None;
        }
        let series: f64 = self
            .modes()
            .map(|(k, a, b, ap, bp)| a.abs() + b.abs() + (ap.abs() + bp.abs()) / k)
            .sum();
        Some(s.a[0].abs() + 2.0 * series)
    }
}

impl RingSource for WaveSolution {
    fn density(&self, theta: f64, t: f64) -> f64 {
        self.evaluate(theta, t)
    }
    fn current(&self, theta: f64, t: f64) -> f64 {
        self.induced_current(theta, t)
    }
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        self.time_derivative(theta, t)
    }
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        self.induced_current_rate(theta, t)
    }
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        -self.time_derivative(theta, t)
    }
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        self.space_derivative(theta, t)
    }
}

/// `cos` or `sin`, the two factors of a standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Trig {
    Cos,
    Sin,
}

impl Trig {
    pub(crate) fn eval(self, u: f64) -> f64 {
        match self {
            Trig::Cos => u.cos(),
            Trig::Sin => u.sin(),
        }
    }

    /// Derivative with respect to the argument.
    pub(crate) fn deriv(self, u: f64) -> f64 {
        match self {
            Trig::Cos => -u.sin(),
            Trig::Sin => u.cos(),
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Trig::Cos => 0,
            Trig::Sin => 1,
        }
    }
}

/// One of the four fundamental standing-wave pairs.
///
/// | mode | rho                  | J                     |
/// |------|----------------------|-----------------------|
/// | 1    | `cos(mx) cos(mt)`    | `sin(mx) sin(mt)`     |
/// | 2    | `cos(mx) sin(mt)`    | `-sin(mx) cos(mt)`    |
/// | 3    | `sin(mx) cos(mt)`    | `-cos(mx) sin(mt)`    |
/// | 4    | `sin(mx) sin(mt)`    | `cos(mx) cos(mt)`     |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FundamentalMode {
    One,
    Two,
    Three,
    Four,
}

pub(crate) struct ModeShape {
    pub density: (Trig, Trig),
    pub current: (Trig, Trig),
    pub current_sign: f64,
}

impl FundamentalMode {
    pub const ALL: [FundamentalMode; 4] = [Self::One, Self::Two, Self::Three, Self::Four];

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(Error::ModeIndex(i)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }

    pub(crate) fn shape(self) -> ModeShape {
        use Trig::*;
        let (density, current, current_sign) = match self {
            Self::One => ((Cos, Cos), (Sin, Sin), 1.0),
            Self::Two => ((Cos, Sin), (Sin, Cos), -1.0),
            Self::Three => ((Sin, Cos), (Cos, Sin), -1.0),
            Self::Four => ((Sin, Sin), (Cos, Cos), 1.0),
        };
        ModeShape {
            density,
            current,
            current_sign,
        }
    }
}

/// Mode number `m` and the weights `a_1..a_4` of a linear combination of
/// the four fundamental pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeWeights {
    pub m: u32,
    pub weights: [f64; 4],
}

impl ModeWeights {
    pub fn new(m: u32, weights: [f64; 4]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InputDomain("mode number must be at least 1".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InputDomain("mode weights must be finite".into()));
        }
        Ok(Self { m, weights })
    }

    /// Unit weight on a single fundamental mode.
    pub fn single(mode: FundamentalMode, m: u32) -> Result<Self> {
        let mut weights = [0.0; 4];
        weights[mode.index() - 1] = 1.0;
        Self::new(m, weights)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    /// `pi / m`, after which every field of the combination changes sign.
    pub fn half_period(&self) -> f64 {
        PI / self.m as f64
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (f64, ModeShape)> + '_ {
        FundamentalMode::ALL
            .iter()
            .zip(self.weights)
            .filter(|(_, w)| *w != 0.0)
            .map(|(mode, w)| (w, mode.shape()))
    }
}

/// Closed-form charge and current of a weighted sum of fundamental pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingWaves {
    pub weights: ModeWeights,
}

impl StandingWaves {
    fn m(&self) -> f64 {
        self.weights.m as f64
    }

    fn sum(&self, theta: f64, t: f64, pick: impl Fn(&ModeShape, f64, f64) -> f64) -> f64 {
        let m = self.m();
        self.weights
            .terms()
            .map(|(w, shape)| w * pick(&shape, m * theta, m * t))
            .sum()
    }
}

impl RingSource for StandingWaves {
    fn density(&self, theta: f64, t: f64) -> f64 {
        self.sum(theta, t, |s, x, u| s.density.0.eval(x) * s.density.1.eval(u))
    }
    fn current(&self, theta: f64, t: f64) -> f64 {
        self.sum(theta, t, |s, x, u| s.current_sign * s.current.0.eval(x) * s.current.1.eval(u))
    }
    fn density_rate(&self, theta: f64, t: f64) -> f64 {
        self.m() * self.sum(theta, t, |s, x, u| s.density.0.eval(x) * s.density.1.deriv(u))
    }
    fn current_rate(&self, theta: f64, t: f64) -> f64 {
        self.m() * self.sum(theta, t, |s, x, u| s.current_sign * s.current.0.eval(x) * s.current.1.deriv(u))
    }
    fn current_slope(&self, theta: f64, t: f64) -> f64 {
        self.m() * self.sum(theta, t, |s, x, u| s.current_sign * s.current.0.deriv(x) * s.current.1.eval(u))
    }
    fn density_slope(&self, theta: f64, t: f64) -> f64 {
        self.m() * self.sum(theta, t, |s, x, u| s.density.0.deriv(x) * s.density.1.eval(u))
    }
    fn period(&self) -> Option<f64> {
        Some(self.weights.half_period())
    }
}

/// Fundamental pair `i` (1-based) with mode number `m`.
pub fn mode_pair(i: usize, m: u32) -> Result<StandingWaves> {
    let mode = FundamentalMode::from_index(i)?;
    Ok(StandingWaves {
        weights: ModeWeights::single(mode, m)?,
    })
}

/// Weighted sum `sum a_i (rho^i, J^i)`.
pub fn combined_source(weights: ModeWeights) -> StandingWaves {
    StandingWaves { weights }
}

/// `int_{-pi}^{pi} rho(x, t) dx`.
pub fn total_charge(source: &impl RingSource, t: f64) -> Result<f64> {
    Ok(2.0 * PI * periodic_mean(|x| source.density(x, t))?)
}
