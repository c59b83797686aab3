//! Trigonometric moments
//! `I(a, b) = int_{-pi}^{pi} cos^a(t) sin^b(t) dt` and
//! `J(g) = int_0^pi sin^g(t) dt` for odd `g`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `I(a, b)`; zero unless both exponents are even.
pub fn wallis_i(alpha: u32, beta: u32) -> f64 {
    if alpha % 2 == 1 || beta % 2 == 1 {
        return 0.0;
    }
    let num = PI * factorial(alpha) * factorial(beta);
    let den = 2f64.powi(alpha as i32 + beta as i32 - 1)
        * factorial(alpha / 2)
        * factorial(beta / 2)
        * factorial((alpha + beta) / 2);
    num / den
}

/// `J(g) = 2^g ((g-1)/2)!^2 / g!` for odd `g`.
pub fn wallis_j(gamma: u32) -> Result<f64> {
    if gamma % 2 == 0 {
        return Err(Error::EvenExponent(gamma));
    }
    let h = factorial((gamma - 1) / 2);
    Ok(2f64.powi(gamma as i32) * h * h / factorial(gamma))
}

/// The variant with `2^(g+1)` in place of `2^g`, kept so the factor-of-two
/// discrepancy can be demonstrated.
pub fn wallis_j_overcounted(gamma: u32) -> Result<f64> {
    Ok(2.0 * wallis_j(gamma)?)
}

/// Precomputed `I` and `J` values. Immutable after construction, so shared
/// references can be read from any number of threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WallisTable {
    max_ab: u32,
    max_gamma: u32,
    i: Vec<f64>,
    j: Vec<f64>,
}

impl WallisTable {
    pub fn new(max_ab: u32, max_gamma: u32) -> Self {
        let n = max_ab as usize + 1;
        let mut i = Vec::with_capacity(n * n);
        for a in 0..=max_ab {
            for b in 0..=max_ab {
                i.push(wallis_i(a, b));
            }
        }
        let j = (0..=max_gamma)
            .map(|g| wallis_j(g).unwrap_or(f64::NAN))
            .collect();
        Self { max_ab, max_gamma, i, j }
    }

    pub fn max_ab(&self) -> u32 {
        self.max_ab
    }

    pub fn max_gamma(&self) -> u32 {
        self.max_gamma
    }

    /// Stored `I(a, b)`, or the closed form when outside the table.
    pub fn i(&self, alpha: u32, beta: u32) -> f64 {
        if alpha <= self.max_ab && beta <= self.max_ab {
            self.i[alpha as usize * (self.max_ab as usize + 1) + beta as usize]
        } else {
            wallis_i(alpha, beta)
        }
    }

    pub fn j(&self, gamma: u32) -> Result<f64> {
        if gamma % 2 == 0 {
            return Err(Error::EvenExponent(gamma));
        }
        if gamma <= self.max_gamma {
            Ok(self.j[gamma as usize])
        } else {
            wallis_j(gamma)
        }
    }

    /// `(alpha, beta)` pairs in row-major order.
    pub fn i_entries(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..=self.max_ab).flat_map(move |a| (0..=self.max_ab).map(move |b| (a, b, self.i(a, b))))
    }

    pub fn j_entries(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        (1..=self.max_gamma).step_by(2).map(move |g| (g, self.j[g as usize]))
    }
}
