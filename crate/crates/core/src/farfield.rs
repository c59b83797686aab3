//! Leading-order far-field fields of the standing-wave pairs.
//!
//! Far from the ring the retarded phase is expanded as
//! `m t_r ~ m t - phi - a(theta)` with `phi = m sqrt(r^2+1)/c` and
//! `a(theta) = -(m/c) (x cos(theta) + y sin(theta)) / sqrt(r^2+1)`.
//! Each radiative term then becomes a combination of twelve ring integrals
//! `int A(m theta) f(a(theta)) K(theta) d theta`, where `A` and `f` are
//! `cos` or `sin` and `K` is one of three kernels: the position `(x, y, z)`,
//! `theta_hat x (x, y, z)`, or `theta_hat`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{check_speed, EvalPoint};
use crate::quadrature::periodic_nodes;
use crate::spectral::{ModeWeights, Trig};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    /// The position vector `(x, y, z)`.
    Radial,
    /// `theta_hat x (x, y, z)`.
    Cross,
    /// `theta_hat`.
    Tangent,
}

/// The twelve basis integrals at one point, plus the radial prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldBasis {
    pub m: u32,
    pub c: f64,
    pub position: Vec3,
    /// `vectors[A][f][K]` with `A, f` indexed `cos = 0, sin = 1`.
    vectors: [[[Vec3; 3]; 2]; 2],
    /// `1 / (4 pi c (r^2 + 1))`, prefactor of the electric term `E2`.
    pub alpha: f64,
    /// `1 / (4 pi c (r^2 + 1))`, prefactor of `B2`.
    pub beta: f64,
    /// `1 / (4 pi c^2 sqrt(r^2 + 1))`, prefactor of `E3`.
    pub gamma: f64,
    /// `m sqrt(r^2 + 1) / c`.
    pub phase: f64,
}

fn kernel_index(k: Kernel) -> usize {
    match k {
        Kernel::Radial => 0,
        Kernel::Cross => 1,
        Kernel::Tangent => 2,
    }
}

/// `1/(4 pi c (r^2+1))`, `1/(4 pi c^2 sqrt(r^2+1))` and `m sqrt(r^2+1)/c`.
pub fn prefactors(m: u32, r: f64, c: f64) -> (f64, f64, f64) {
    let q = r * r + 1.0;
    let alpha = 1.0 / (4.0 * PI * c * q);
    let gamma = 1.0 / (4.0 * PI * c * c * q.sqrt());
    (alpha, gamma, m as f64 * q.sqrt() / c)
}

/// Basis integrals at `point` by `nodes`-point trapezoid quadrature.
pub fn far_field_basis(m: u32, point: &Vec3, c: f64, nodes: usize) -> Result<FarFieldBasis> {
    check_speed(c)?;
    if m == 0 {
        return Err(Error::InputDomain("mode number must be at least 1".into()));
    }
    if nodes == 0 {
        return Err(Error::InputDomain("need at least one ring node".into()));
    }
    let r = point.norm();
    if !r.is_finite() {
        return Err(Error::InputDomain("evaluation point must be finite".into()));
    }
    if r <= 1.0 {
        return Err(Error::InsideSource(r));
    }
    let (x, y, z) = (point.x, point.y, point.z);
    let root = (r * r + 1.0).sqrt();
    let mf = m as f64;
    let scale = -mf / (c * root);
    // scalar accumulators for the radial kernel, vectors for the others
    let mut radial = [[0.0; 2]; 2];
    let mut other = [[[Vec3::zeros(); 2]; 2]; 2];
    for theta in periodic_nodes(nodes) {
        let (s, co) = theta.sin_cos();
        let a = scale * (x * co + y * s);
        let (sa, ca) = a.sin_cos();
        let (sm, cm) = (mf * theta).sin_cos();
        let cross = Vec3::new(z * co, z * s, -y * s - x * co);
        let tangent = Vec3::new(-s, co, 0.0);
        for (ai, av) in [cm, sm].into_iter().enumerate() {
            for (fi, fv) in [ca, sa].into_iter().enumerate() {
                let w = av * fv;
                radial[ai][fi] += w;
                other[ai][fi][0] += w * cross;
                other[ai][fi][1] += w * tangent;
            }
        }
    }
    let step = 2.0 * PI / nodes as f64;
    let mut vectors = [[[Vec3::zeros(); 3]; 2]; 2];
    for ai in 0..2 {
        for fi in 0..2 {
            vectors[ai][fi][0] = step * radial[ai][fi] * point;
            vectors[ai][fi][1] = step * other[ai][fi][0];
            vectors[ai][fi][2] = step * other[ai][fi][1];
        }
    }
    let (alpha, gamma, phase) = prefactors(m, r, c);
    Ok(FarFieldBasis {
        m,
        c,
        position: *point,
        vectors,
        alpha,
        beta: alpha,
        gamma,
        phase,
    })
}

impl FarFieldBasis {
    pub(crate) fn get(&self, spatial: Trig, inner: Trig, kernel: Kernel) -> Vec3 {
        self.vectors[spatial.index()][inner.index()][kernel_index(kernel)]
    }

    /// `int cos(m theta) cos(a) d theta (x, y, z)`.
    pub fn gamma_0(&self) -> Vec3 {
        self.get(Trig::Cos, Trig::Cos, Kernel::Radial)
    }
    /// `int sin(m theta) sin(a) theta_hat x (x, y, z) d theta`.
    pub fn gamma_1(&self) -> Vec3 {
        self.get(Trig::Sin, Trig::Sin, Kernel::Cross)
    }
    /// `int sin(m theta) sin(a) theta_hat d theta`.
    pub fn gamma_2(&self) -> Vec3 {
        self.get(Trig::Sin, Trig::Sin, Kernel::Tangent)
    }
    /// `int cos(m theta) sin(a) d theta (x, y, z)`; vanishes for even `m`.
    pub fn gamma_3(&self) -> Vec3 {
        self.get(Trig::Cos, Trig::Sin, Kernel::Radial)
    }
    /// `int sin(m theta) cos(a) theta_hat x (x, y, z) d theta`.
    pub fn gamma_4(&self) -> Vec3 {
        self.get(Trig::Sin, Trig::Cos, Kernel::Cross)
    }
    /// `int sin(m theta) cos(a) theta_hat d theta`.
    pub fn gamma_5(&self) -> Vec3 {
        self.get(Trig::Sin, Trig::Cos, Kernel::Tangent)
    }
    /// `int sin(m theta) cos(a) d theta (x, y, z)`.
    pub fn delta_0(&self) -> Vec3 {
        self.get(Trig::Sin, Trig::Cos, Kernel::Radial)
    }
    /// `int cos(m theta) sin(a) theta_hat x (x, y, z) d theta`.
    pub fn delta_1(&self) -> Vec3 {
        self.get(Trig::Cos, Trig::Sin, Kernel::Cross)
    }
    /// `int cos(m theta) sin(a) theta_hat d theta`.
    pub fn delta_2(&self) -> Vec3 {
        self.get(Trig::Cos, Trig::Sin, Kernel::Tangent)
    }

    /// The nine named vectors in the order
    /// `gamma_0..gamma_5, delta_0..delta_2`.
    pub fn named(&self) -> [Vec3; 9] {
        [
            self.gamma_0(),
            self.gamma_1(),
            self.gamma_2(),
            self.gamma_3(),
            self.gamma_4(),
            self.gamma_5(),
            self.delta_0(),
            self.delta_1(),
            self.delta_2(),
        ]
    }

    /// Far-field radiative terms of a weighted mode combination at time `t`.
    pub fn terms(&self, weights: &ModeWeights, t: f64) -> Result<FarFieldTerms> {
        if weights.m != self.m {
            return Err(Error::InputDomain(format!(
                "basis built for m = {} but weights have m = {}",
                self.m, weights.m
            )));
        }
        let mf = self.m as f64;
        let psi = mf * t - self.phase;
        let (sp, cp) = psi.sin_cos();
        // T'(psi - a) = p cos(a) + q sin(a)
        let split = |tf: Trig| match tf {
            Trig::Cos => (-sp, cp),
            Trig::Sin => (cp, sp),
        };
        let mut e2 = Vec3::zeros();
        let mut e3 = Vec3::zeros();
        let mut b2 = Vec3::zeros();
        for (w, shape) in weights.terms() {
            let (p, q) = split(shape.density.1);
            let a = shape.density.0;
            e2 += w * (p * self.get(a, Trig::Cos, Kernel::Radial) + q * self.get(a, Trig::Sin, Kernel::Radial));
            let (p, q) = split(shape.current.1);
            let a = shape.current.0;
            let ws = w * shape.current_sign;
            e3 += ws * (p * self.get(a, Trig::Cos, Kernel::Tangent) + q * self.get(a, Trig::Sin, Kernel::Tangent));
            b2 += ws * (p * self.get(a, Trig::Cos, Kernel::Cross) + q * self.get(a, Trig::Sin, Kernel::Cross));
        }
        Ok(FarFieldTerms {
            e2: self.alpha * mf * e2,
            e3: -self.gamma * mf * e3,
            b2: self.beta * mf * b2,
        })
    }
}

/// Leading-order `E2`, `E3` and `B2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldTerms {
    pub e2: Vec3,
    pub e3: Vec3,
    pub b2: Vec3,
}

/// Far-field terms of a mode combination at one evaluation point.
pub fn far_field_terms(weights: &ModeWeights, point: &EvalPoint, c: f64, nodes: usize) -> Result<FarFieldTerms> {
    far_field_basis(weights.m, &point.position, c, nodes)?.terms(weights, point.time)
}

/// Far-field `E2` of a mode combination.
pub fn far_field_e2(weights: &ModeWeights, point: &EvalPoint, c: f64, nodes: usize) -> Result<Vec3> {
    Ok(far_field_terms(weights, point, c, nodes)?.e2)
}

/// Coefficients `(C1, C2, C3)` of the cross-product fluxes of the
/// admissible combination, built from the prefactors at radius `r`.
pub fn coefficient_functions(m: u32, r: f64, t: f64, c: f64) -> Result<(f64, f64, f64)> {
    check_speed(c)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InputDomain(format!("radius must be positive, got {r}")));
    }
    let (beta, gamma, phase) = prefactors(m, r, c);
    let k = beta * gamma * (m as f64).powi(2);
    let (s, co) = phase.sin_cos();
    let (st, ct) = (m as f64 * t).sin_cos();
    let c1 = k * (-ct * ct * s * s + 2.0 * st * ct * s * co - st * st * co * co);
    let c2 = k * (-st * st * s * s - 2.0 * st * ct * s * co - ct * ct * co * co);
    let c3 = k * (ct * st * s * s - st * ct * co * co - st * st * s * co + ct * ct * s * co);
    Ok((c1, c2, c3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::causal_fields_direct;
    use crate::spectral::{combined_source, FundamentalMode};

    #[test]
    fn axis_points_kill_sine_integrals() {
        for m in 1..=4 {
            let b = far_field_basis(m, &Vec3::new(0.0, 0.0, 3.0), 10.0, 256).unwrap();
            assert_eq!(b.gamma_2(), Vec3::zeros());
            assert_eq!(b.delta_2(), Vec3::zeros());
        }
    }

    #[test]
    fn structural_zeros() {
        let b = far_field_basis(2, &Vec3::new(10.0, 0.0, 0.0), 10.0, 1024).unwrap();
        assert_eq!(b.gamma_0().z, 0.0);
        let b = far_field_basis(2, &Vec3::new(10.0, 3.0, 2.0), 10.0, 1024).unwrap();
        assert_eq!(b.gamma_2().z, 0.0);
        assert_eq!(b.delta_2().z, 0.0);
        let p = b.position.normalize();
        for v in [b.gamma_0(), b.gamma_3(), b.delta_0()] {
            assert!(v.cross(&p).norm() <= 1e-15 * (1.0 + v.norm()));
        }
        // even m: the cos(m theta) sin(a) radial integral vanishes by symmetry
        assert!(b.gamma_3().norm() < 1e-14);
        assert!(matches!(far_field_basis(2, &Vec3::new(0.5, 0.0, 0.0), 10.0, 64), Err(Error::InsideSource(_))));
    }

    #[test]
    fn basis_converges_and_is_locked() {
        let p = Vec3::new(10.0, 3.0, 2.0);
        let fine = far_field_basis(2, &p, 10.0, 4096).unwrap();
        let coarse = far_field_basis(2, &p, 10.0, 64).unwrap();
        for (a, b) in fine.named().iter().zip(coarse.named()) {
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
        // independent oracle for gamma_0: adaptive quadrature of the scalar integral
        let root = (p.norm_squared() + 1.0).sqrt();
        let scalar = crate::quadrature::adaptive(-PI, PI, 1e-13, |th: f64| {
            (2.0 * th).cos() * (-(2.0 / 10.0) * (p.x * th.cos() + p.y * th.sin()) / root).cos()
        })
        .unwrap();
        assert!((fine.gamma_0() - scalar * p).norm() < 1e-11);
        let golden = fine.named();
        let again = far_field_basis(2, &p, 10.0, 4096).unwrap().named();
        assert_eq!(golden, again);
    }

    #[test]
    fn e2_at_time_zero_keeps_single_term() {
        let w = ModeWeights::single(FundamentalMode::One, 2).unwrap();
        let p = EvalPoint::new(6.0, 2.0, 1.0, 0.0).unwrap();
        let b = far_field_basis(2, &p.position, 10.0, 1024).unwrap();
        let expect = b.alpha * 2.0 * b.phase.sin() * b.gamma_0();
        assert!((far_field_e2(&w, &p, 10.0, 1024).unwrap() - expect).norm() < 1e-15 * (1.0 + expect.norm()) + 1e-18);
    }

    fn cycle_rms_mismatch(r: f64) -> f64 {
        let w = ModeWeights::single(FundamentalMode::One, 2).unwrap();
        let src = combined_source(w);
        let pt = Vec3::new(6.0, 3.0, 5.0).normalize() * r;
        let basis = far_field_basis(2, &pt, 10.0, 512).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..16 {
            let t = PI / 2.0 * k as f64 / 16.0;
            let direct = causal_fields_direct(&src, &EvalPoint::at(pt, t).unwrap(), 10.0, 512).unwrap();
            let series = basis.terms(&w, t).unwrap();
            for (d, s) in [(direct.e2, series.e2), (direct.e3, series.e3), (direct.b2, series.b2)] {
                num += (d - s).norm_squared();
                den += d.norm_squared();
            }
        }
        (num / den).sqrt()
    }

    #[test]
    fn series_approaches_direct_fields() {
        let near = cycle_rms_mismatch(16.0);
        let far = cycle_rms_mismatch(256.0);
        assert!(far < 0.1, "mismatch at r = 256: {far}");
        assert!(far < near / 4.0, "{near} -> {far}");
    }

    #[test]
    fn coefficient_identities() {
        let (beta, gamma, phase) = prefactors(2, 7.0, 10.0);
        let (c1, c2, c3) = coefficient_functions(2, 7.0, 0.0, 10.0).unwrap();
        let k = beta * gamma * 4.0;
        assert!((c1 + c2 + k).abs() < 1e-12 * k);
        assert!((c3 - k * phase.sin() * phase.cos()).abs() < 1e-15 * k);
        assert!(coefficient_functions(2, 0.0, 0.0, 10.0).is_err());
    }
}
