//! Radius sweep: instantaneous flux at `t0` and the cycle integral at each
//! radius, plus a power-law fit of the cycle integrals.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use ringradiant::radiation::{
    cycle_power_source, decay_fit, source_flux, CycleRecord, DecayFit, FarFieldSphere, FluxRecord, TermPair,
};
use ringradiant::spectral::combined_source;

use crate::config::{ExperimentConfig, Mode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub radius: f64,
    pub t0: f64,
    pub period: f64,
    pub p_e2xb2: f64,
    pub p_e3xb2: f64,
    pub p_other: f64,
    pub cycle_integral: f64,
    /// Cycle integral of each term pair.
    pub cycle_parts: BTreeMap<TermPair, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(radius: f64, t0: f64, period: f64, error: String) -> Self {
        Self {
            radius,
            t0,
            period,
            p_e2xb2: f64::NAN,
            p_e3xb2: f64::NAN,
            p_other: f64::NAN,
            cycle_integral: f64::NAN,
            cycle_parts: BTreeMap::new(),
            error: Some(error),
        }
    }

    fn from_records(rec: &FluxRecord, cyc: CycleRecord) -> Self {
        Self {
            radius: cyc.radius,
            t0: cyc.t0,
            period: cyc.period,
            p_e2xb2: rec.part(TermPair::E2B2),
            p_e3xb2: rec.part(TermPair::E3B2),
            p_other: rec.other(),
            cycle_integral: cyc.integral,
            cycle_parts: cyc.parts,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// `None` when fewer than three rows succeeded.
    pub fit: Option<DecayFit>,
}

impl Sweep {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn evaluate(cfg: &ExperimentConfig, r: f64) -> anyhow::Result<SweepRow> {
    let w = cfg.mode_weights()?;
    let nodes = cfg.node_counts();
    let (rec, cyc) = match cfg.mode {
        Mode::FarField => {
            let sphere = FarFieldSphere::new(w.m, r, cfg.c, &nodes)?;
            (sphere.record(&w, cfg.t0)?, sphere.cycle(&w, cfg.t0, nodes.time)?)
        }
        Mode::Direct => {
            let src = combined_source(w);
            (
                source_flux(&src, r, cfg.t0, cfg.c, &nodes)?,
                cycle_power_source(&src, w.half_period(), r, cfg.t0, cfg.c, &nodes)?,
            )
        }
    };
    Ok(SweepRow::from_records(&rec, cyc))
}

/// One row per radius, in input order. A failed radius yields a row with
/// `error` set and the sweep carries on.
pub fn run_sweep(cfg: &ExperimentConfig) -> Sweep {
    let period = std::f64::consts::PI / cfg.m.max(1) as f64;
    let rows: Vec<SweepRow> = cfg
        .radii
        .par_iter()
        .map(|&r| evaluate(cfg, r).unwrap_or_else(|e| SweepRow::failed(r, cfg.t0, period, e.to_string())))
        .collect();
    let ok: Vec<CycleRecord> = rows
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| CycleRecord {
            radius: r.radius,
            t0: r.t0,
            period: r.period,
            integral: r.cycle_integral,
            parts: r.cycle_parts.clone(),
        })
        .collect();
    Sweep {
        fit: decay_fit(&ok).ok(),
        rows,
    }
}
