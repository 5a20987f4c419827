//! Command-line front end: coefficient tables, trace tables, densities of
//! states, generating-function coefficients and the verification suite.

pub mod output;
pub mod verify;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hoftrace_core::dos::{exact_moment_lambda, DensityProfile};
use hoftrace_core::kreft::chambers_recursive;
use hoftrace_core::traces::{
    full_trace, hofstadter_trace, midband_trace, pm_s_trace, trace_series, TraceKind,
};
use hoftrace_core::{Coupling, Flux};
use rayon::prelude::*;
use serde::Serialize;

use output::{emit, CheckRow, CoeffRow, DosRow, Format, SeriesRow, TraceRow};

/// Largest accepted trace order.
pub const N_MAX_CAP: u32 = 64;

/// Number of reference moments emitted by `dos`.
const DOS_MOMENTS: u32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "hoftrace",
    version,
    about = "Spectral moment traces of the Hofstadter and almost Mathieu operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Flux numerator
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    /// Flux denominator
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
    /// Coupling λ (2 is the isotropic Hofstadter case)
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("order").required(true).args(["n", "n_max"])))]
pub struct Orders {
    /// A single (trace) order
    #[arg(long)]
    pub n: Option<u32>,
    /// All orders 0..=n-max
    #[arg(long)]
    pub n_max: Option<u32>,
}

impl Orders {
    fn values(&self) -> Result<Vec<u32>> {
        let top = self
            .n
            .or(self.n_max)
            .expect("clap requires one of --n, --n-max");
        check_order(top)?;
        Ok(match self.n {
            Some(n) => vec![n],
            None => (0..=top).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Full,
    MidBand,
    PmS,
}

impl KindArg {
    fn core(self) -> TraceKind {
        match self {
            KindArg::Full => TraceKind::FullQuantum,
            KindArg::MidBand => TraceKind::MidBand,
            KindArg::PmS => TraceKind::PlusMinusS,
        }
    }

    fn label(self) -> &'static str {
        match self {
            KindArg::Full => "full",
            KindArg::MidBand => "mid-band",
            KindArg::PmS => "pm-s",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chambers polynomial coefficients a(0), a(2), ..., a(2⌊q/2⌋)
    Coeffs {
        #[command(flatten)]
        common: Common,
    },
    /// Full quantum or mid-band traces from the partition sums
    Trace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
    },
    /// Traces over the ±s point spectrum for each listed s
    PointTrace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        orders: Orders,
        /// Comma-separated s values
        #[arg(
            long,
            required = true,
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        s: Vec<f64>,
    },
    /// Density of states samples and reference moments
    Dos {
        #[command(flatten)]
        common: Common,
        /// Number of equally spaced samples across the support
        #[arg(long, default_value_t = 81)]
        grid: usize,
        /// Explicit sample points (overrides --grid)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<f64>,
    },
    /// Taylor coefficients of a trace generating function
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
        /// Point-spectrum parameter for --kind pm-s
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
    },
    /// Cross-check the closed forms against the oracles
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
    },
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

fn check_order(n: u32) -> Result<()> {
    if n > N_MAX_CAP {
        bail!("order {n} exceeds the cap {N_MAX_CAP}");
    }
    Ok(())
}

fn parameters(common: &Common) -> Result<(Flux, Coupling)> {
    Ok((
        Flux::new(common.p, common.q)?,
        Coupling::new(common.lambda)?,
    ))
}

#[derive(Serialize)]
struct CoeffDocument {
    p: u64,
    q: u64,
    lambda: f64,
    a: Vec<f64>,
}

#[derive(Serialize)]
struct TraceDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<f64>,
    method: &'static str,
    records: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct DensitySample {
    s: f64,
    density: f64,
}

#[derive(Serialize)]
struct MomentEntry {
    k: u32,
    order: u32,
    exact: f64,
}

#[derive(Serialize)]
struct DosDocument {
    p: u64,
    q: u64,
    lambda: f64,
    lambda_tilde: f64,
    support_half_width: f64,
    density: Vec<DensitySample>,
    moments: Vec<MomentEntry>,
}

#[derive(Serialize)]
struct SeriesDocument {
    p: u64,
    q: u64,
    lambda: f64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    coefficients: Vec<f64>,
}

#[derive(Serialize)]
struct VerifyDocument {
    p: u64,
    q: u64,
    lambda: f64,
    n_max: u32,
    passed: bool,
    checks: Vec<CheckRow>,
}

const PARTITION_SUM: &str = "partition-sum";

fn trace_document(rows: Vec<TraceRow>, single: bool, warnings: Vec<String>) -> TraceDocument {
    TraceDocument {
        trace: if single && rows.len() == 1 {
            Some(rows[0].value)
        } else {
            None
        },
        method: PARTITION_SUM,
        records: rows,
        warnings,
    }
}

/// Executes one parsed command line.
pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Coeffs { common } => {
            let (flux, coupling) = parameters(&common)?;
            let poly = chambers_recursive(flux, coupling);
            let a = poly.coefficients().to_vec();
            let rows: Vec<CoeffRow> = a
                .iter()
                .enumerate()
                .map(|(j, &v)| CoeffRow {
                    p: flux.p(),
                    q: flux.q(),
                    lambda: coupling.lambda(),
                    order: 2 * j as u64,
                    a: v,
                })
                .collect();
            let doc = CoeffDocument {
                p: flux.p(),
                q: flux.q(),
                lambda: coupling.lambda(),
                a,
            };
            emit(common.format, common.output.as_deref(), &doc, &rows)?;
        }
        Command::Trace {
            common,
            orders,
            kind,
        } => {
            let (flux, coupling) = parameters(&common)?;
            if kind == KindArg::PmS {
                bail!("use the point-trace command for ±s traces");
            }
            let ns = orders.values()?;
            let poly = chambers_recursive(flux, coupling);
            let rows: Vec<TraceRow> = ns
                .par_iter()
                .map(|&n| {
                    let value = match kind {
                        KindArg::MidBand => midband_trace(&poly, n),
                        _ if coupling.is_hofstadter() => hofstadter_trace(flux, n),
                        _ => full_trace(&poly, n),
                    };
                    TraceRow {
                        p: flux.p(),
                        q: flux.q(),
                        lambda: coupling.lambda(),
                        kind: kind.label().into(),
                        n,
                        s: None,
                        value,
                        method: PARTITION_SUM.into(),
                    }
                })
                .collect();
            let doc = trace_document(rows.clone(), orders.n.is_some(), Vec::new());
            emit(common.format, common.output.as_deref(), &doc, &rows)?;
        }
        Command::PointTrace { common, orders, s } => {
            let (flux, coupling) = parameters(&common)?;
            let ns = orders.values()?;
            let poly = chambers_recursive(flux, coupling);
            let range = poly.s_range();
            let warnings: Vec<String> = s
                .iter()
                .filter(|v| v.abs() > range)
                .map(|v| format!("s = {v} is outside the spectral range ±{range}; value is the polynomial continuation"))
                .collect();
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let cases: Vec<(f64, u32)> = s
                .iter()
                .flat_map(|&v| ns.iter().map(move |&n| (v, n)))
                .collect();
            let rows: Vec<TraceRow> = cases
                .par_iter()
                .map(|&(sv, n)| TraceRow {
                    p: flux.p(),
                    q: flux.q(),
                    lambda: coupling.lambda(),
                    kind: KindArg::PmS.label().into(),
                    n,
                    s: Some(sv),
                    value: pm_s_trace(&poly, n, sv),
                    method: PARTITION_SUM.into(),
                })
                .collect();
            let doc = trace_document(rows.clone(), orders.n.is_some(), warnings);
            emit(common.format, common.output.as_deref(), &doc, &rows)?;
        }
        Command::Dos { common, grid, s } => {
            let (flux, coupling) = parameters(&common)?;
            let profile = DensityProfile::new(coupling.lambda_tilde(flux.q()))?;
            let width = profile.support_half_width();
            let points: Vec<f64> = if !s.is_empty() {
                s
            } else if grid == 1 {
                vec![0.0]
            } else if grid == 0 {
                bail!("--grid must be positive");
            } else {
                (0..grid)
                    .map(|i| -width + 2.0 * width * i as f64 / (grid - 1) as f64)
                    .collect()
            };
            let density: Vec<DensitySample> = points
                .par_iter()
                .map(|&sv| DensitySample {
                    s: sv,
                    density: profile.density(sv),
                })
                .collect();
            let moments: Vec<MomentEntry> = (0..DOS_MOMENTS)
                .map(|k| MomentEntry {
                    k,
                    order: 2 * k,
                    exact: exact_moment_lambda(k, profile.lambda_tilde()),
                })
                .collect();
            let rows: Vec<DosRow> = density
                .iter()
                .map(|d| DosRow {
                    record: "density".into(),
                    x: d.s,
                    value: d.density,
                })
                .chain(moments.iter().map(|m| DosRow {
                    record: "moment".into(),
                    x: m.order as f64,
                    value: m.exact,
                }))
                .collect();
            let doc = DosDocument {
                p: flux.p(),
                q: flux.q(),
                lambda: coupling.lambda(),
                lambda_tilde: profile.lambda_tilde(),
                support_half_width: width,
                density,
                moments,
            };
            emit(common.format, common.output.as_deref(), &doc, &rows)?;
        }
        Command::Series {
            common,
            n_max,
            kind,
            s,
        } => {
            let (flux, coupling) = parameters(&common)?;
            check_order(n_max)?;
            let s = match kind {
                KindArg::PmS => Some(s.unwrap_or(0.0)),
                _ => None,
            };
            let coefficients = trace_series(flux, coupling, kind.core(), s, n_max as usize);
            let rows: Vec<SeriesRow> = coefficients
                .iter()
                .enumerate()
                .map(|(n, &value)| SeriesRow {
                    p: flux.p(),
                    q: flux.q(),
                    lambda: coupling.lambda(),
                    kind: kind.label().into(),
                    s,
                    n: n as u32,
                    value,
                })
                .collect();
            let doc = SeriesDocument {
                p: flux.p(),
                q: flux.q(),
                lambda: coupling.lambda(),
                kind: kind.label(),
                s,
                coefficients,
            };
            emit(common.format, common.output.as_deref(), &doc, &rows)?;
        }
        Command::Verify { common, n_max } => {
            let (flux, coupling) = parameters(&common)?;
            check_order(n_max)?;
            let checks = verify::run_checks(flux, coupling, n_max);
            let passed = checks.iter().all(|c| c.passed);
            for c in &checks {
                eprintln!(
                    "{} {}: max deviation {:.3e} (tolerance {:.0e}, {} cases)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.max_deviation,
                    c.tolerance,
                    c.cases
                );
            }
            let doc = VerifyDocument {
                p: flux.p(),
                q: flux.q(),
                lambda: coupling.lambda(),
                n_max,
                passed,
                checks: checks.clone(),
            };
            emit(common.format, common.output.as_deref(), &doc, &checks)?;
            if !passed {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}
