//! Configuration, verification suites, sweeps and output formats behind the
//! `ringradiant` command.

pub mod config;
pub mod report;
pub mod suites;
pub mod sweep;

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};

use ringradiant::quadrature::adaptive;
use ringradiant::wallis::{wallis_i, wallis_j};

use crate::report::WallisRow;

pub const THREADS_ENV: &str = "RINGRADIANT_THREADS";

/// Worker count: the value of `RINGRADIANT_THREADS` if set, capped at the
/// available parallelism.
pub fn worker_count(var: Option<&str>) -> Result<usize> {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match var {
        None => Ok(avail),
        Some(s) => {
            let n: usize = s.trim().parse().with_context(|| format!("{THREADS_ENV} must be a positive integer, got '{s}'"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be a positive integer, got 0");
            }
            Ok(n.min(avail))
        }
    }
}

pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let var = std::env::var(THREADS_ENV).ok();
    let n = worker_count(var.as_deref())?;
    Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?)
}

/// Closed-form `I(a, b)` for `a, b <= max` and `J(g)` for odd `g <= max + 1`,
/// each next to adaptive quadrature.
pub fn wallis_rows(max: u32) -> Result<Vec<WallisRow>> {
    let mut rows = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            let q = adaptive(-PI, PI, 1e-13, |t| t.cos().powi(a as i32) * t.sin().powi(b as i32))?;
            let v = wallis_i(a, b);
            rows.push(WallisRow {
                integral: "I",
                a,
                b: Some(b),
                closed_form: v,
                quadrature: q,
                delta: (v - q).abs(),
            });
        }
    }
    for g in (1..=max + 1).step_by(2) {
        let q = adaptive(0.0, PI, 1e-13, |t| t.sin().powi(g as i32))?;
        let v = wallis_j(g)?;
        rows.push(WallisRow {
            integral: "J",
            a: g,
            b: None,
            closed_form: v,
            quadrature: q,
            delta: (v - q).abs(),
        });
    }
    Ok(rows)
}
