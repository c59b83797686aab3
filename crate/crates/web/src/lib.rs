//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each export wraps a plain function of the same name with an `_impl`
//! suffix, so the numerics can be tested natively.

use std::f64::consts::PI;

use wasm_bindgen::prelude::*;

use ringradiant::farfield::far_field_basis;
use ringradiant::radiation::{FarFieldSphere, NodeCounts};
use ringradiant::spectral::{combined_source, ModeWeights};
use ringradiant::{RingSource, Vec3};

/// Light quadrature: the page recomputes on every slider move.
pub const DEMO_NODES: NodeCounts = NodeCounts {
    theta: 256,
    phi: 16,
    sphere_theta: 32,
    time: 32,
};

fn weights(m: u32, w: &[f64]) -> Result<ModeWeights, String> {
    let arr: [f64; 4] = w.try_into().map_err(|_| format!("expected 4 weights, got {}", w.len()))?;
    ModeWeights::new(m, arr).map_err(|e| e.to_string())
}

/// `samples` triples `(theta, rho, J)` around the ring at time `t`,
/// flattened.
pub fn ring_state_impl(m: u32, w: &[f64], t: f64, samples: usize) -> Result<Vec<f64>, String> {
    if samples == 0 {
        return Err("need at least one sample".into());
    }
    let src = combined_source(weights(m, w)?);
    let mut out = Vec::with_capacity(3 * samples);
    for k in 0..samples {
        let th = -PI + 2.0 * PI * k as f64 / samples as f64;
        out.extend([th, src.density(th, t), src.current(th, t)]);
    }
    Ok(out)
}

/// Radial Poynting component of the leading far-field terms on a
/// `rows x cols` polar/azimuth grid over `S(r)`, row-major, polar angle
/// first.
pub fn flux_map_impl(m: u32, w: &[f64], r: f64, t: f64, c: f64, rows: usize, cols: usize) -> Result<Vec<f64>, String> {
    let weights = weights(m, w)?;
    if rows == 0 || cols == 0 {
        return Err("grid must be non-empty".into());
    }
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let phi = PI * (i as f64 + 0.5) / rows as f64;
        for j in 0..cols {
            let th = -PI + 2.0 * PI * j as f64 / cols as f64;
            let n = Vec3::new(phi.sin() * th.cos(), phi.sin() * th.sin(), phi.cos());
            let basis = far_field_basis(m, &(r * n), c, DEMO_NODES.theta).map_err(|e| e.to_string())?;
            let f = basis.terms(&weights, t).map_err(|e| e.to_string())?;
            out.push((f.e2 + f.e3).cross(&f.b2).dot(&n));
        }
    }
    Ok(out)
}

/// Per-cycle radiated energy through each sphere in `radii`.
pub fn cycle_power_curve_impl(m: u32, w: &[f64], c: f64, radii: &[f64]) -> Result<Vec<f64>, String> {
    let weights = weights(m, w)?;
    radii
        .iter()
        .map(|&r| {
            FarFieldSphere::new(m, r, c, &DEMO_NODES)
                .and_then(|s| s.cycle(&weights, 0.0, DEMO_NODES.time))
                .map(|rec| rec.integral)
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[wasm_bindgen]
pub fn ring_state(m: u32, weights: &[f64], t: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    ring_state_impl(m, weights, t, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn flux_map(m: u32, weights: &[f64], r: f64, t: f64, c: f64, rows: usize, cols: usize) -> Result<Vec<f64>, JsError> {
    flux_map_impl(m, weights, r, t, c, rows, cols).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cycle_power_curve(m: u32, weights: &[f64], c: f64, radii: &[f64]) -> Result<Vec<f64>, JsError> {
    cycle_power_curve_impl(m, weights, c, radii).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn version() -> String {
    ringradiant::VERSION.to_string()
}
