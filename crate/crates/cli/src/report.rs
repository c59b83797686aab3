//! CSV and JSON writers. CSV uses LF line endings and 17 significant
//! digits; JSON carries a metadata block with the config hash and versions.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use ringradiant::fields::{EvalPoint, FieldSample};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::suites::Check;
use crate::sweep::Sweep;

pub const SWEEP_HEADER: [&str; 7] = ["radius", "t0", "period", "P_E2xB2", "P_E3xB2", "P_other", "cycle_integral"];

/// 17 significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    // no negative zero in the output
    let v = if v == 0.0 { 0.0 } else { v };
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

pub fn metadata(cfg: &ExperimentConfig) -> Value {
    json!({
        "config_hash": cfg.hash(),
        "versions": {
            "ringradiant": ringradiant::VERSION,
            "ringradiant-cli": env!("CARGO_PKG_VERSION"),
        },
        "config": cfg,
    })
}

fn write_json<W: Write>(mut out: W, cfg: &ExperimentConfig, key: &str, body: impl Serialize) -> Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("metadata".into(), metadata(cfg));
    doc.insert(key.into(), serde_json::to_value(body)?);
    serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// One row per radius, then a row whose radius cell reads `fit` with the
/// fitted exponent and amplitude in the two flux columns.
pub fn write_sweep<W: Write>(out: W, cfg: &ExperimentConfig, sweep: &Sweep, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, cfg, "sweep", sweep),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(SWEEP_HEADER)?;
            for r in &sweep.rows {
                w.write_record([
                    num(r.radius),
                    num(r.t0),
                    num(r.period),
                    num(r.p_e2xb2),
                    num(r.p_e3xb2),
                    num(r.p_other),
                    num(r.cycle_integral),
                ])?;
            }
            if let Some(fit) = sweep.fit {
                w.write_record(["fit".into(), String::new(), String::new(), num(fit.exponent), num(fit.amplitude), String::new(), String::new()])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_checks<W: Write>(out: W, cfg: &ExperimentConfig, checks: &[Check], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let passed = checks.iter().filter(|c| c.pass).count();
            let body = json!({
                "passed": passed,
                "failed": checks.len() - passed,
                "items": checks,
            });
            write_json(out, cfg, "checks", body)
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["suite", "check", "value", "limit", "bound", "status"])?;
            for c in checks {
                let bound = match c.bound {
                    crate::suites::Bound::AtMost => "<=",
                    crate::suites::Bound::AtLeast => ">=",
                    crate::suites::Bound::Above => ">",
                };
                w.write_record([
                    c.suite.name().to_string(),
                    c.name.clone(),
                    num(c.value),
                    num(c.limit),
                    bound.into(),
                    if c.pass { "PASS" } else { "FAIL" }.into(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_fields<W: Write>(
    out: W,
    cfg: &ExperimentConfig,
    point: &EvalPoint,
    f: &FieldSample,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, cfg, "fields", json!({ "point": point, "terms": f })),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["term", "x", "y", "z"])?;
            let terms = [
                ("E1", f.e1),
                ("E2", f.e2),
                ("E3", f.e3),
                ("B1", f.b1),
                ("B2", f.b2),
                ("E", f.e_total),
                ("B", f.b_total),
            ];
            for (name, v) in terms {
                w.write_record([name.to_string(), num(v.x), num(v.y), num(v.z)])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallisRow {
    /// `I` or `J`.
    pub integral: &'static str,
    pub a: u32,
    /// Second exponent of `I`; absent for `J`.
    pub b: Option<u32>,
    pub closed_form: f64,
    pub quadrature: f64,
    pub delta: f64,
}

pub fn write_wallis<W: Write>(out: W, cfg: &ExperimentConfig, rows: &[WallisRow], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, cfg, "wallis", rows),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["integral", "a", "b", "closed_form", "quadrature", "delta"])?;
            for r in rows {
                w.write_record([
                    r.integral.to_string(),
                    r.a.to_string(),
                    r.b.map(|b| b.to_string()).unwrap_or_default(),
                    num(r.closed_form),
                    num(r.quadrature),
                    num(r.delta),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
