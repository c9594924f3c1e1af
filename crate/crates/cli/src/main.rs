//! `latdisc`: exact lattice counts, discrepancy bounds and sweep verification.
//!
//! Exit codes: 0 success, 1 a certified bound was violated, 2 bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use latdisc_core::arith::{format_rational, parse_rational, rational_to_f64};
use latdisc_core::bounds::{circle_psi_decomposition, Theorem};
use latdisc_core::forms::{Dimension, EllipsoidInvariants, QuadraticForm};
use latdisc_core::harness::{
    count_at, emit_report, rational_grid, run_sweep, BoundContext, Domain, DomainSpec, ReportFormat,
    PROFILE_GRID,
};
use latdisc_core::profiles::compute_invariants;
use latdisc_core::{Error, Result};
use num_rational::BigRational;

const THREADS_ENV: &str = "LATDISC_THREADS";
const PSI_RESIDUAL_LIMIT: f64 = 5.0;

#[derive(Parser)]
#[command(name = "latdisc", version, about = "Lattice-point counts and certified discrepancy bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact lattice-point count, main term and discrepancy.
    Count {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Itemized bound value.
    Bound {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        theorem: Theorem,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Invariants of the domain (form or profile).
    Invariants {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sweep a grid, compare |P(t)| with the bound, write a report.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        theorem: Theorem,
        #[command(flatten)]
        grid: GridArgs,
        /// Report destination; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
    },
    /// Sawtooth decomposition of the circle count; grid values are X².
    PsiCheck {
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args)]
struct GridArgs {
    /// A single value.
    #[arg(long, conflicts_with_all = ["t_from", "t_to", "t_step"])]
    t: Option<String>,
    #[arg(long, requires_all = ["t_to", "t_step"])]
    t_from: Option<String>,
    #[arg(long, requires_all = ["t_from", "t_step"])]
    t_to: Option<String>,
    #[arg(long, requires_all = ["t_from", "t_to"])]
    t_step: Option<String>,
}

impl GridArgs {
    fn values(&self) -> Result<Vec<BigRational>> {
        match (&self.t, &self.t_from, &self.t_to, &self.t_step) {
            (Some(t), None, None, None) => Ok(vec![parse_rational(t)?]),
            (None, Some(from), Some(to), Some(step)) => {
                rational_grid(&parse_rational(from)?, &parse_rational(to)?, &parse_rational(step)?)
            }
            _ => Err(Error::Parse("give either --t or all of --t-from, --t-to, --t-step".into())),
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<DomainSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read spec {}: {e}", path.display())))?;
    DomainSpec::from_json(&text)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Parse(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Count { spec, grid } => {
            let spec = load_spec(&spec)?;
            for (i, t) in grid.values()?.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                let r = count_at(&spec, t)?;
                println!("kind={}", spec.domain.kind());
                println!("t={}", format_rational(&r.t));
                println!("count={}", r.count);
                println!("main_term={}", r.main_term);
                println!("discrepancy={}", r.discrepancy);
            }
        }
        Command::Bound { spec, theorem, grid } => {
            let spec = load_spec(&spec)?;
            let ctx = BoundContext::prepare(&spec, theorem)?;
            for (i, t) in grid.values()?.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                let b = ctx.bound(rational_to_f64(t))?;
                println!("theorem={}", b.theorem);
                println!("t={}", format_rational(t));
                println!("total={}", b.total);
                println!("valid={}", b.valid);
                println!("threshold={}", b.threshold);
                for (label, value) in &b.components {
                    println!("component[{label}]={value}");
                }
            }
        }
        Command::Invariants { spec } => {
            let spec = load_spec(&spec)?;
            println!("kind={}", spec.domain.kind());
            print_invariants(&spec.domain)?;
        }
        Command::Verify { spec, theorem, grid, output, format } => {
            let spec = load_spec(&spec)?;
            let report = run_sweep(&spec, theorem, &grid.values()?)?;
            let summary = [
                format!("rows={}", report.rows.len()),
                format!(
                    "max_ratio_in_validity_range={}",
                    report
                        .summary
                        .max_ratio_in_validity_range
                        .map_or_else(|| "none".to_string(), |r| r.to_string())
                ),
                format!(
                    "violations={}",
                    report.summary.violations.iter().map(format_rational).collect::<Vec<_>>().join(",")
                ),
            ];
            match output {
                Some(path) => {
                    emit_report(&report, format, &path)?;
                    summary.iter().for_each(|line| println!("{line}"));
                }
                None => {
                    print!("{}", report.render(format)?);
                    summary.iter().for_each(|line| eprintln!("{line}"));
                }
            }
            if !report.summary.violations.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::PsiCheck { grid } => {
            let values = grid.values()?;
            let mut worst: Option<(f64, BigRational)> = None;
            let mut failures = Vec::new();
            for x_sq in &values {
                let d = circle_psi_decomposition(x_sq)?;
                if d.residual.abs() > PSI_RESIDUAL_LIMIT {
                    failures.push(format_rational(x_sq));
                }
                if worst.as_ref().map_or(true, |(w, _)| d.residual.abs() > *w) {
                    worst = Some((d.residual.abs(), x_sq.clone()));
                }
            }
            println!("values={}", values.len());
            if let Some((w, at)) = worst {
                println!("max_abs_residual={w}");
                println!("at_x_sq={}", format_rational(&at));
            }
            println!("limit={PSI_RESIDUAL_LIMIT}");
            println!("violations={}", failures.join(","));
            if !failures.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_invariants(domain: &Domain) -> Result<()> {
    let form = match domain {
        Domain::Ellipse(f) | Domain::Ellipsoid(f) => f.clone(),
        Domain::Circle => QuadraticForm::identity(Dimension::Two),
        Domain::Ball => QuadraticForm::identity(Dimension::Three),
        Domain::Revolution(profile) => {
            let inv = compute_invariants(profile, PROFILE_GRID)?;
            println!("profile={}", profile.name());
            println!("r_max={}", inv.r_max);
            println!("r_min={}", inv.r_min);
            println!("r0={}", inv.r0);
            println!("M={}", inv.m);
            println!("z0={}", inv.z0);
            println!("F2={}", inv.f2);
            println!("certified={}", inv.certified);
            return Ok(());
        }
    };
    let inv = EllipsoidInvariants::compute(&form);
    println!("form={form}");
    println!("det={}", format_rational(&inv.det));
    println!("G0_sq={}", format_rational(&inv.g0_sq));
    println!("G0={}", inv.g0);
    println!(
        "G0_witness={}",
        inv.witness.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    );
    println!("G1_sq={}", format_rational(&inv.g1_sq));
    println!("G1={}", inv.g1);
    println!("scale={}", inv.scale);
    println!("G0_normalized={}", inv.normalized_g0());
    println!("G1_normalized={}", inv.normalized_g1());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    };
    eprintln!("elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    code
}
