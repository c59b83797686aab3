use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ringradiant::fields::{causal_fields_direct, EvalPoint};
use ringradiant::spectral::combined_source;
use ringradiant_cli::config::{resolve, ExperimentConfig, OutputFormat, Overrides};
use ringradiant_cli::report;
use ringradiant_cli::suites::{run_verify, Suite};
use ringradiant_cli::sweep::run_sweep;
use ringradiant_cli::{thread_pool, wallis_rows};

/// Radiation from charge and current waves on a unit ring.
#[derive(Parser, Debug)]
#[command(name = "ringradiant", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Signal speed.
    #[arg(long = "c", global = true, allow_hyphen_values = true)]
    c: Option<f64>,

    /// Mode number.
    #[arg(long = "m", global = true)]
    m: Option<u32>,

    /// Mode weights a1,a2,a3,a4.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,

    /// Sphere radii r1,r2,...
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    radii: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite: wave, extension, wallis, cancellation, power, thermal or all.
    Verify { suite: Suite },
    /// Flux and cycle integral at each radius, with a power-law fit.
    Sweep,
    /// Retarded field terms at one point.
    Fields {
        /// x,y,z,t
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        at: Vec<f64>,
    },
    /// Trigonometric moment table against quadrature.
    Wallis {
        #[arg(long, default_value_t = 12)]
        max: u32,
    },
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("could not create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Ok(true) when everything passed.
fn run(cli: Cli) -> Result<bool> {
    let overrides = Overrides {
        c: cli.c,
        m: cli.m,
        weights: cli.weights.clone(),
        radii: cli.radii.clone(),
        format: cli.format,
    };
    let cfg: ExperimentConfig = resolve(cli.config.as_deref(), &overrides)?;
    let format = cfg.output_format;
    let pool = thread_pool()?;
    let mut out = sink(cli.out.as_ref())?;
    let ok = match cli.command {
        Command::Verify { suite } => {
            let checks = pool.install(|| run_verify(suite, &cfg));
            report::write_checks(&mut out, &cfg, &checks, format)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            eprintln!("verify {suite}: {} passed, {failed} failed", checks.len() - failed);
            failed == 0
        }
        Command::Sweep => {
            let sweep = pool.install(|| run_sweep(&cfg));
            report::write_sweep(&mut out, &cfg, &sweep, format)?;
            for r in &sweep.rows {
                if let Some(e) = &r.error {
                    eprintln!("radius {}: {e}", r.radius);
                }
            }
            sweep.failures() == 0
        }
        Command::Fields { at } => {
            if at.len() != 4 {
                bail!("--at takes x,y,z,t");
            }
            let point = EvalPoint::new(at[0], at[1], at[2], at[3])?;
            let src = combined_source(cfg.mode_weights()?);
            let f = causal_fields_direct(&src, &point, cfg.c, cfg.nodes.theta)?;
            report::write_fields(&mut out, &cfg, &point, &f, format)?;
            true
        }
        Command::Wallis { max } => {
            if max > 40 {
                bail!("--max is limited to 40");
            }
            let rows = pool.install(|| wallis_rows(max))?;
            report::write_wallis(&mut out, &cfg, &rows, format)?;
            rows.iter().all(|r| r.delta < 1e-12)
        }
    };
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
