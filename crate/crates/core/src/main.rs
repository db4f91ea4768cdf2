//! `weyl`: exact tables, projections and simulations for the Weyl chambers
//! of types A, B and D.
//!
//! Records go to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 1 when a verification fails and 2 on usage errors.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weyl_chambers::chambers::{internal_angle_spec, Chamber, FaceIndex, Family};
use weyl_chambers::combinatorics::{intrinsic_volume_rows, ExactRational};
use weyl_chambers::output::{csv_table, volume_rows_csv, OutputRecord};
use weyl_chambers::parallel::Parallelism;
use weyl_chambers::projection::{certificate, project};
use weyl_chambers::simulation::{
    bernoulli_sum_law, estimate_angle_b, estimate_angle_d, estimate_internal_angle, even_cycle_law,
    face_dimension_law, majorant_segment_law, PermKind, SimReport, Z_THRESHOLD,
};
use weyl_chambers::suites::{run_suite, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "weyl", version, about = "Intrinsic volumes of Weyl chambers: exact tables and stochastic checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact intrinsic volumes for n = 1..n_max.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Project a point onto a chamber.
    #[command(allow_negative_numbers = true)]
    Project(ProjectArgs),
    /// Run one Monte Carlo experiment against its exact law.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct TableArgs {
    /// A, B or D; all three when omitted.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long = "n-max", visible_alias = "n", default_value_t = 10)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long = "n-max", default_value_t = 100)]
    n_max: usize,
    /// Samples per Monte Carlo experiment.
    #[arg(long, visible_alias = "trials", default_value_t = 100_000)]
    samples: u64,
    /// Gaussian points per (family, n) in the projection suite.
    #[arg(long, default_value_t = 1000)]
    projection_points: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    family: Family,
    /// Coordinates of the point.
    #[arg(required = true, num_args = 1..)]
    point: Vec<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Experiment {
    Facedim,
    AngleD,
    AngleB,
    Majorant,
    EvenCycles,
    Bernoulli,
    InternalAngle,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, visible_alias = "trials", default_value_t = 100_000)]
    samples: u64,
    /// signed or dperm (even-cycles).
    #[arg(long, default_value = "signed")]
    kind: PermKind,
    /// Face indices `l_1,...` (internal-angle); empty for the minimal face.
    #[arg(long, default_value = "")]
    face: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

/// Failure kinds mapped to exit codes.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Table(a) => cmd_table(a, started),
        Command::Verify(a) => cmd_verify(a, started),
        Command::Project(a) => cmd_project(a, started),
        Command::Simulate(a) => cmd_simulate(a, started),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(command: &str, parameters: Value, results: Value, seed: u64, started: Instant) {
    let rec = OutputRecord {
        command: command.into(),
        parameters,
        results,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    println!("{}", rec.to_json());
}

fn par(c: &Common) -> Parallelism {
    Parallelism::threads(c.threads)
}

fn cmd_table(a: TableArgs, started: Instant) -> anyhow::Result<Outcome> {
    let families = a.family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    let mut rows = Vec::new();
    for family in &families {
        if a.n_max < family.min_dimension() {
            bail!("n_max must be at least {} for family {family}", family.min_dimension());
        }
        rows.extend(
            intrinsic_volume_rows(*family, a.n_max)?
                .into_iter()
                .filter(|r| r.n >= family.min_dimension()),
        );
    }
    match a.format {
        Format::Csv => print!("{}", volume_rows_csv(&rows)?),
        Format::Json => emit(
            "table",
            json!({ "families": families, "n_max": a.n_max }),
            serde_json::to_value(&rows)?,
            a.common.seed,
            started,
        ),
    }
    Ok(Outcome::Pass)
}

fn cmd_verify(a: VerifyArgs, started: Instant) -> anyhow::Result<Outcome> {
    let cfg = SuiteConfig {
        n_max: a.n_max,
        samples: a.samples,
        projection_points: a.projection_points,
        seed: a.common.seed,
        par: par(&a.common),
    };
    let records = run_suite(a.suite, &cfg)?;
    let failed = records.iter().filter(|r| !r.passed).count();
    for r in &records {
        eprintln!("{} {}/{}", if r.passed { "PASS" } else { "FAIL" }, r.suite, r.name);
    }
    eprintln!("{} checks, {} failed", records.len(), failed);
    emit(
        "verify",
        json!({
            "suite": a.suite,
            "n_max": a.n_max,
            "samples": a.samples,
            "projection_points": a.projection_points,
            "threads": a.common.threads,
        }),
        json!({ "passed": failed == 0, "checks": records }),
        a.common.seed,
        started,
    );
    Ok(if failed == 0 { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_project(a: ProjectArgs, started: Instant) -> anyhow::Result<Outcome> {
    let chamber = Chamber::new(a.family, a.point.len())?;
    let result = project(chamber, &a.point)?;
    let cert = certificate(chamber, &a.point, &result.point)?;
    match a.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = a
                .point
                .iter()
                .zip(&result.point)
                .enumerate()
                .map(|(i, (x, p))| vec![(i + 1).to_string(), x.to_string(), p.to_string()])
                .collect();
            print!("{}", csv_table(&["i", "input", "projection"], &rows)?);
        }
        Format::Json => emit(
            "project",
            json!({ "family": a.family, "point": a.point }),
            json!({
                "projection": result.point,
                "face_dim": result.face_dim,
                "blocks": result.blocks,
                "last_sign_flipped": result.last_sign_flipped,
                "certificate": cert,
            }),
            a.common.seed,
            started,
        ),
    }
    Ok(Outcome::Pass)
}

fn required<T>(v: Option<T>, flag: &str, experiment: Experiment) -> anyhow::Result<T> {
    v.with_context(|| format!("--{flag} is required for {experiment:?}"))
}

fn parse_face(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().with_context(|| format!("bad face index `{t}`")))
        .collect()
}

fn cmd_simulate(a: SimulateArgs, started: Instant) -> anyhow::Result<Outcome> {
    let (seed, p, samples, e) = (a.common.seed, par(&a.common), a.samples, a.experiment);
    let mut parameters = json!({
        "experiment": e.to_possible_value().map(|v| v.get_name().to_string()),
        "samples": samples,
        "threads": a.common.threads,
    });
    let mut set = |k: &str, v: Value| {
        parameters[k] = v;
    };
    let report: SimReport = match e {
        Experiment::Facedim => {
            let (family, n) = (required(a.family, "family", e)?, required(a.n, "n", e)?);
            set("family", json!(family));
            set("n", json!(n));
            face_dimension_law(Chamber::new(family, n)?, samples, seed, p)?
        }
        Experiment::AngleD | Experiment::AngleB => {
            let m = required(a.m, "m", e)?;
            set("m", json!(m));
            if matches!(e, Experiment::AngleD) {
                estimate_angle_d(m, samples, seed, p)?
            } else {
                estimate_angle_b(m, samples, seed, p)?
            }
        }
        Experiment::Majorant => {
            let n = required(a.n, "n", e)?;
            set("n", json!(n));
            majorant_segment_law(n, samples, seed, p)?
        }
        Experiment::EvenCycles => {
            let n = required(a.n, "n", e)?;
            set("n", json!(n));
            set("kind", json!(a.kind));
            even_cycle_law(a.kind, n, samples, seed, p)?
        }
        Experiment::Bernoulli => {
            let (family, n) = (required(a.family, "family", e)?, required(a.n, "n", e)?);
            set("family", json!(family));
            set("n", json!(n));
            bernoulli_sum_law(family, n, samples, seed, p)?
        }
        Experiment::InternalAngle => {
            let (family, n) = (required(a.family, "family", e)?, required(a.n, "n", e)?);
            let face = FaceIndex::new(Chamber::new(family, n)?, parse_face(&a.face)?)?;
            set("family", json!(family));
            set("n", json!(n));
            set("face", json!(face.ls()));
            return internal_angle(&face, samples, seed, p, parameters, started);
        }
    };
    let passed = report.verdict;
    eprintln!("{} {} (max |z| = {:.3})", if passed { "PASS" } else { "FAIL" }, report.label, report.max_abs_z());
    match a.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .exact_law
                .keys()
                .chain(report.outcomes.keys())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .map(|k| {
                    let exact = report.exact_law.get(k).cloned().unwrap_or_else(ExactRational::zero);
                    vec![
                        k.to_string(),
                        report.outcomes.get(k).copied().unwrap_or(0).to_string(),
                        exact.numer().to_string(),
                        exact.denom().to_string(),
                        report.z_scores.get(k).map_or(String::new(), ToString::to_string),
                    ]
                })
                .collect();
            print!("{}", csv_table(&["outcome", "count", "exact_num", "exact_den", "z"], &rows)?);
        }
        Format::Json => emit("simulate", parameters, serde_json::to_value(&report)?, seed, started),
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

fn internal_angle(
    face: &FaceIndex,
    samples: u64,
    seed: u64,
    p: Parallelism,
    parameters: Value,
    started: Instant,
) -> anyhow::Result<Outcome> {
    let descriptor = internal_angle_spec(face);
    let est = estimate_internal_angle(&descriptor, samples, seed, p)?;
    let closed = descriptor.closed_form();
    let passed = closed.is_none_or(|c| (est.value - c).abs() <= Z_THRESHOLD * est.std_error + 1e-12);
    eprintln!("{} internal angle of {face}: {:.6} ± {:.6}", if passed { "PASS" } else { "FAIL" }, est.value, est.std_error);
    emit(
        "simulate",
        parameters,
        json!({
            "face": face.to_string(),
            "descriptor": descriptor,
            "estimate": est.value,
            "std_error": est.std_error,
            "closed_form": closed,
            "verdict": passed,
        }),
        seed,
        started,
    );
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}
