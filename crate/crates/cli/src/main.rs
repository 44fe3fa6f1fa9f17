//! `radialis`: verify radial identities on the rank-one model spaces, emit
//! plot tables and classify sampled profiles.
//!
//! Exit codes: 0 success, 1 tolerance or classification failure, 2 usage or
//! validation error.

mod profile;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use radialis::classify::{candidates_for_dimension, classify_profile, ObservedProfile, Quantity};
use radialis::greens::{flux, green_derivative, green_harmonicity_residual, GreenProfile};
use radialis::ledger_riccati::compare_ricci;
use radialis::model_spaces::{density, make_model, omega, ModelSpace, SpaceKind};
use radialis::radial_ops::{
    eigen_residuals, linspace, mean_curvature, ClaimId, ClaimRhs, EigenClaim,
};

const TOL_ENV: &str = "RADIALIS_TOL";

#[derive(Parser)]
#[command(
    name = "radialis",
    version,
    about = "Radial calculus on rank-one model spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog spaces
    List(ListArgs),
    /// Check a catalog identity Δf = rhs on a grid
    Eigencheck(EigencheckArgs),
    /// Flux and harmonicity of the radial Green's function
    Green(GreenArgs),
    /// Ricci curvature by Ledger's formula and by the Riccati trace
    Ledger(LedgerArgs),
    /// Classify an `r,value` CSV profile against the catalog
    Classify(ClassifyArgs),
    /// CSV of r, theta, omega, H, Gprime
    Table(TableArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// euclidean, sphere, hyperbolic, chn or qhn
    #[arg(value_parser = parse_space)]
    space: SpaceKind,
    #[arg(long)]
    n: u32,
}

impl SpaceArgs {
    fn model(&self) -> Result<ModelSpace> {
        Ok(make_model(self.space, self.n)?)
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.1)]
    r_min: f64,
    #[arg(long, default_value_t = 3.0)]
    r_max: f64,
    #[arg(long)]
    steps: Option<usize>,
}

impl GridArgs {
    fn grid(&self, space: &ModelSpace, default_steps: usize) -> Result<Vec<f64>> {
        let steps = self.steps.unwrap_or(default_steps);
        if steps < 2 {
            bail!("--steps must be at least 2, got {steps}");
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max) {
            bail!(
                "need 0 < --r-min < --r-max, got [{}, {}]",
                self.r_min,
                self.r_max
            );
        }
        check_in_domain(space, self.r_max)?;
        Ok(linspace(self.r_min, self.r_max, steps))
    }
}

#[derive(Args)]
struct ListArgs {
    /// Only spaces of this real dimension
    #[arg(long, conflicts_with = "n")]
    dim: Option<u32>,
    /// Parameter n for every family (default: smallest valid n per family)
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EigencheckArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// r2, rpow, cos, cosh or sinh2
    #[arg(long, value_parser = parse_claim)]
    claim: ClaimId,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    tol: Option<f64>,
    /// Print the per-point residuals
    #[arg(long)]
    table: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GreenArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Radius where the quadrature for G starts
    #[arg(long, default_value_t = 1.0)]
    r_ref: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LedgerArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    dim: u32,
    /// mean_curvature, density or omega
    #[arg(long, value_parser = parse_quantity)]
    quantity: Quantity,
    #[arg(long, default_value_t = radialis::classify::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// CSV file with header `r,value`
    profile: PathBuf,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    #[arg(long)]
    r_max: f64,
    #[arg(long)]
    steps: usize,
}

fn parse_space(s: &str) -> Result<SpaceKind, String> {
    s.parse().map_err(|e: radialis::Error| e.to_string())
}

fn parse_claim(s: &str) -> Result<ClaimId, String> {
    s.parse().map_err(|e: radialis::Error| e.to_string())
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.parse().map_err(|e: radialis::Error| e.to_string())
}

fn check_in_domain(space: &ModelSpace, r: f64) -> Result<()> {
    if !space.contains(r) {
        match space.r_max() {
            Some(m) => bail!("radius {r} is outside (0, {m}) on {space}"),
            None => bail!("radius {r} must be positive and finite"),
        }
    }
    Ok(())
}

/// `--tol`, then `RADIALIS_TOL`, then the command default.
fn tolerance(flag: Option<f64>, default: f64) -> Result<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(text) => text
                .trim()
                .parse()
                .with_context(|| format!("{TOL_ENV}='{text}' is not a number"))?,
            Err(_) => default,
        },
    };
    if !(tol.is_finite() && tol >= 0.0) {
        bail!("tolerance must be finite and non-negative, got {tol}");
    }
    Ok(tol)
}

enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_list(args: &ListArgs, out: &mut impl Write) -> Result<Outcome> {
    let spaces = match (args.dim, args.n) {
        (Some(d), _) => candidates_for_dimension(d),
        (None, Some(n)) => SpaceKind::ALL
            .into_iter()
            .filter_map(|k| make_model(k, n).ok())
            .collect(),
        (None, None) => SpaceKind::ALL
            .into_iter()
            .map(|k| make_model(k, k.min_n()))
            .collect::<radialis::Result<_>>()?,
    };
    if args.json {
        print_json(out, &spaces)?;
        return Ok(Outcome::Pass);
    }
    for s in &spaces {
        let spectrum = s
            .spectrum()
            .levels()
            .iter()
            .map(|l| format!("({}, {})", l.curvature, l.multiplicity))
            .collect::<Vec<_>>()
            .join(", ");
        let r_max = s.r_max().map_or("inf".to_string(), |m| m.to_string());
        writeln!(
            out,
            "{:<6} {:<11} d={:<3} spectrum {{{}}}  r_max={}  Ric={}",
            s.name(),
            s.id().short_name(),
            s.dim(),
            spectrum,
            r_max,
            s.einstein_constant()
        )?;
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct EigenReport<'a> {
    space: String,
    claim: &'a str,
    rhs: ClaimRhs,
    r_min: f64,
    r_max: f64,
    steps: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<(f64, f64)>>,
}

fn cmd_eigencheck(args: &EigencheckArgs, out: &mut impl Write) -> Result<Outcome> {
    let space = args.space.model()?;
    let tol = tolerance(args.tol, 1e-9)?;
    let grid = args.grid.grid(&space, 200)?;
    let claim = EigenClaim::catalog(args.claim, &space)?;
    let residuals = eigen_residuals(&claim, &grid)?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let pass = max_residual <= tol;
    let report = EigenReport {
        space: space.name(),
        claim: args.claim.name(),
        rhs: claim.rhs,
        r_min: grid[0],
        r_max: grid[grid.len() - 1],
        steps: grid.len(),
        max_residual,
        tolerance: tol,
        pass,
        table: args.table.then(|| {
            grid.iter()
                .copied()
                .zip(residuals.iter().copied())
                .collect()
        }),
    };
    if args.json {
        print_json(out, &report)?;
    } else {
        let rhs = match claim.rhs {
            ClaimRhs::Eigen { lambda } => format!("{lambda} f"),
            ClaimRhs::Constant { value } => format!("{value}"),
        };
        writeln!(out, "space: {}", report.space)?;
        writeln!(
            out,
            "claim: {} (Δf = {rhs}, f = {})",
            report.claim,
            claim.f.label()
        )?;
        writeln!(
            out,
            "grid: {} points on [{}, {}]",
            report.steps, report.r_min, report.r_max
        )?;
        if let Some(table) = &report.table {
            writeln!(out, "r,residual")?;
            for (r, res) in table {
                writeln!(out, "{r},{res:e}")?;
            }
        }
        writeln!(out, "max residual: {max_residual:e}")?;
        writeln!(out, "tolerance: {tol:e}")?;
        writeln!(out, "result: {}", verdict(pass))?;
    }
    Ok(Outcome::from_bool(pass))
}

#[derive(Serialize)]
struct GreenRow {
    r: f64,
    g_prime: f64,
    g: f64,
    flux_error: f64,
    harmonicity: f64,
}

#[derive(Serialize)]
struct GreenReport {
    space: String,
    r_ref: f64,
    max_flux_error: f64,
    max_harmonicity: f64,
    tolerance: f64,
    pass: bool,
    rows: Vec<GreenRow>,
}

fn cmd_green(args: &GreenArgs, out: &mut impl Write) -> Result<Outcome> {
    let space = args.space.model()?;
    let tol = tolerance(args.tol, 1e-10)?;
    let grid = args.grid.grid(&space, 30)?;
    check_in_domain(&space, args.r_ref)?;
    let mut profile = GreenProfile::new(space.clone(), args.r_ref)?;
    let rows = grid
        .iter()
        .map(|&r| {
            Ok(GreenRow {
                r,
                g_prime: green_derivative(&space, r)?,
                g: profile.value(r)?,
                flux_error: (flux(&space, r)? - 1.0).abs(),
                harmonicity: green_harmonicity_residual(&space, r)?,
            })
        })
        .collect::<radialis::Result<Vec<_>>>()?;
    let max_flux_error = rows.iter().map(|w| w.flux_error).fold(0.0, f64::max);
    let max_harmonicity = rows.iter().map(|w| w.harmonicity).fold(0.0, f64::max);
    let pass = max_flux_error <= tol && max_harmonicity <= tol;
    let report = GreenReport {
        space: space.name(),
        r_ref: args.r_ref,
        max_flux_error,
        max_harmonicity,
        tolerance: tol,
        pass,
        rows,
    };
    if args.json {
        print_json(out, &report)?;
    } else {
        writeln!(
            out,
            "space: {} (G anchored at r_ref = {})",
            report.space, report.r_ref
        )?;
        writeln!(out, "r,Gprime,G,flux_error,harmonicity")?;
        for w in &report.rows {
            writeln!(
                out,
                "{:?},{:?},{:?},{:e},{:e}",
                w.r, w.g_prime, w.g, w.flux_error, w.harmonicity
            )?;
        }
        writeln!(out, "max |flux - 1|: {max_flux_error:e}")?;
        writeln!(out, "max harmonicity residual: {max_harmonicity:e}")?;
        writeln!(out, "tolerance: {tol:e}")?;
        writeln!(out, "result: {}", verdict(pass))?;
    }
    Ok(Outcome::from_bool(pass))
}

#[derive(Serialize)]
struct LedgerReport {
    #[serde(flatten)]
    comparison: radialis::ledger_riccati::RicciComparison,
    tolerance: f64,
    pass: bool,
}

fn cmd_ledger(args: &LedgerArgs, out: &mut impl Write) -> Result<Outcome> {
    let space = args.space.model()?;
    let tol = tolerance(args.tol, 1e-5)?;
    let top = space.r_max().map_or(3.0, |m| 3.0_f64.min(m - 1e-3));
    let comparison = compare_ricci(&space, &linspace(0.05, top, 60))?;
    let pass = comparison.gap <= tol;
    let report = LedgerReport {
        comparison,
        tolerance: tol,
        pass,
    };
    if args.json {
        print_json(out, &report)?;
    } else {
        let c = &report.comparison;
        writeln!(out, "space: {}", c.space)?;
        writeln!(out, "einstein constant: {}", c.einstein_constant)?;
        writeln!(out, "ledger (-3 omega''(0)): {}", c.ledger)?;
        writeln!(
            out,
            "riccati (-tr h' - tr h^2): [{}, {}]",
            c.riccati_min, c.riccati_max
        )?;
        writeln!(out, "gap: {:e}", c.gap)?;
        writeln!(out, "tolerance: {tol:e}")?;
        writeln!(out, "result: {}", verdict(pass))?;
    }
    Ok(Outcome::from_bool(pass))
}

fn cmd_classify(args: &ClassifyArgs, out: &mut impl Write) -> Result<Outcome> {
    let file =
        File::open(&args.profile).with_context(|| format!("opening {}", args.profile.display()))?;
    let samples = profile::read_profile(file)
        .with_context(|| format!("reading {}", args.profile.display()))?;
    let obs = ObservedProfile::new(args.quantity, samples, args.dim)?;
    let result = classify_profile(&obs, args.threshold)?;
    print_json(out, &result)?;
    Ok(Outcome::from_bool(result.best.is_some()))
}

fn cmd_table(args: &TableArgs, out: &mut impl Write) -> Result<Outcome> {
    let space = args.space.model()?;
    if args.steps == 0 {
        bail!("--steps must be positive");
    }
    if !(args.r_min >= 0.0 && args.r_min < args.r_max) {
        bail!(
            "need 0 <= --r-min < --r-max, got [{}, {}]",
            args.r_min,
            args.r_max
        );
    }
    check_in_domain(&space, args.r_max)?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["r", "theta", "omega", "H", "Gprime"])?;
    let span = args.r_max - args.r_min;
    for i in 0..args.steps {
        let r = args.r_min + span * (i + 1) as f64 / args.steps as f64;
        let row = [
            r,
            density(&space, r)?.value,
            omega(&space, r)?.value,
            mean_curvature(&space, r)?,
            green_derivative(&space, r)?,
        ];
        csv.write_record(row.iter().map(|v| format!("{v:?}")))?;
    }
    csv.flush()?;
    Ok(Outcome::Pass)
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<Outcome> {
    match &cli.command {
        Command::List(a) => cmd_list(a, out),
        Command::Eigencheck(a) => cmd_eigencheck(a, out),
        Command::Green(a) => cmd_green(a, out),
        Command::Ledger(a) => cmd_ledger(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Table(a) => cmd_table(a, out),
    }
}

// a closed downstream pipe (`| head`) is not an error
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|err| {
                matches!(err.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe)
            })
    })
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let outcome = run(&cli, &mut out);
    let flushed = out.flush();
    match (outcome, flushed) {
        (Ok(Outcome::Pass), Ok(())) => ExitCode::SUCCESS,
        (Ok(Outcome::Fail), Ok(())) => ExitCode::from(1),
        (Err(e), _) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        (Err(e), _) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        (_, Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
