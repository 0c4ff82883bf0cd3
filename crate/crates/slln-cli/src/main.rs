//! `slln` — classify distributions against the (p,q)-type strong law
//! criteria, simulate the weighted series, probe series conditions
//! numerically, and check the underlying maximal inequalities.
//!
//! Exit codes: 0 membership/convergence/pass, 1 failure/divergence/mismatch,
//! 2 inconclusive, 64 usage error, 65 unsupported (p, q) regime, 66 I/O.

mod corpus;
mod manifest;

use anyhow::Context;
use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use manifest::RunManifest;
use serde::Serialize;
use slln::criteria::{
    classify_mean_series_with, classify_slln_with, integral_condition_numeric, qp_series_numeric,
    truncmean_series_numeric, CriteriaError, CriterionReport, Overall, ProbeClass, ProbeOptions,
    SeriesProbe,
};
use slln::inequalities::{
    hj_series_check, hj_three_term_smoke, marcus_pisier_check, BoundCheckResult, InequalityError,
};
use slln::montecarlo::{simulate_weighted_series, SimConfig, SimResult};
use slln::rational::{fmt_rat, parse_rat, Rat};
use slln::tailmodel::{parse_spec, DistributionSpec};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_UNSUPPORTED: u8 = 65;
const EXIT_IO: u8 = 66;

#[derive(Debug, Parser)]
#[command(name = "slln", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide SLLN(p, q) membership or expectation-series convergence.
    Classify(ClassifyArgs),
    /// Simulate weighted-series trajectories; CSV trajectories + JSON stats.
    Simulate(SimulateArgs),
    /// Run a numeric series probe directly.
    ProbeSeries(ProbeArgs),
    /// Empirically check a maximal inequality.
    InequalityCheck(InequalityArgs),
    /// Classify the built-in corpus and diff against the expected table.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Slln,
    MeanSeries,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Distribution, e.g. `ex4_1:p=8/5,r=5/4` or `pareto:alpha=5/2,centered=true`.
    #[arg(long)]
    spec: String,
    /// Exponent p as `num/den`.
    #[arg(long)]
    p: String,
    /// Exponent q as `num/den`.
    #[arg(long)]
    q: String,
    #[arg(long, value_enum, default_value = "slln")]
    target: TargetArg,
    /// Dyadic blocks used by numeric fallback probes.
    #[arg(long, default_value_t = 24)]
    probe_j: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Largest n; must be a power of two.
    #[arg(long, default_value_t = 65536)]
    nmax: u64,
    #[arg(long, default_value_t = 512)]
    reps: u32,
    /// Master seed; generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = library default).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Base path: writes `<out>.csv` (trajectories) and `<out>.json` (stats).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProbeKind {
    /// The q = p series with the min(u_n^p, n) lower limit.
    Qp,
    /// The truncated-mean series (needs --q).
    Truncmean,
    /// The integral condition integrand over dyadic t (needs --q).
    Integral,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long)]
    spec: String,
    #[arg(long, value_enum)]
    kind: ProbeKind,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long, default_value_t = 24)]
    j: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InequalityKind {
    /// Weak-norm tail bound on blocks of n i.i.d. draws.
    MarcusPisier,
    /// Probability/expectation comparison for the weighted series (symmetric laws).
    Hj,
    /// One documented smoke configuration of the three-threshold display.
    HjSmoke,
}

#[derive(Debug, Args)]
struct InequalityArgs {
    #[arg(long)]
    spec: String,
    #[arg(long, value_enum)]
    kind: InequalityKind,
    /// Weak-norm order s (marcus-pisier) or power q (hj) as `num/den`.
    #[arg(long)]
    order: String,
    /// Draws per trial (marcus-pisier) or series truncation (hj).
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: u32,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// JSON file overriding the built-in expected table.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Emit the full diff as JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify_error(&err))
        }
    }
}

/// Maps error causes onto the documented exit codes.
fn classify_error(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(c) = cause.downcast_ref::<CriteriaError>() {
            return match c {
                CriteriaError::UnsupportedRegime { .. } => EXIT_UNSUPPORTED,
                _ => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<InequalityError>().is_some() {
            return EXIT_USAGE;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::ProbeSeries(args) => cmd_probe(args),
        Command::InequalityCheck(args) => cmd_inequality(args),
        Command::Corpus(args) => cmd_corpus(args),
    }
}

fn load_spec(s: &str) -> anyhow::Result<DistributionSpec> {
    parse_spec(s).with_context(|| format!("invalid --spec `{s}`"))
}

fn load_rat(name: &str, s: &str) -> anyhow::Result<Rat> {
    parse_rat(s).with_context(|| format!("invalid --{name} `{s}` (use num/den syntax)"))
}

fn emit(out: Option<&Path>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{payload}"),
    }
    Ok(())
}

fn exit_for_overall(overall: Overall) -> ExitCode {
    match overall {
        Overall::InSlln | Overall::SeriesConverges => ExitCode::SUCCESS,
        Overall::NotInSlln | Overall::SeriesDiverges => ExitCode::from(1),
        Overall::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    manifest: RunManifest,
    #[serde(flatten)]
    report: CriterionReport,
}

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let spec = load_spec(&args.spec)?;
    let p = load_rat("p", &args.p)?;
    let q = load_rat("q", &args.q)?;
    let opts = ProbeOptions {
        j_max: args.probe_j,
        ..ProbeOptions::default()
    };
    let (target_name, report) = match args.target {
        TargetArg::Slln => ("slln", classify_slln_with(&spec, p, q, &opts)?),
        TargetArg::MeanSeries => ("mean-series", classify_mean_series_with(&spec, p, q, &opts)?),
    };
    let mut manifest = RunManifest::new(
        "classify",
        spec.name(),
        Some(fmt_rat(p)),
        Some(fmt_rat(q)),
        None,
        &[
            ("target", target_name.to_string()),
            ("probe_j", args.probe_j.to_string()),
        ],
    );
    manifest.wall_clock_s = Some(started.elapsed().as_secs_f64());
    let overall = report.overall;
    let payload = serde_json::to_string_pretty(&ClassifyOutput { manifest, report })?;
    emit(args.out.as_deref(), &payload)?;
    Ok(exit_for_overall(overall))
}

#[derive(Serialize)]
struct SimulateOutput {
    manifest: RunManifest,
    spec: String,
    config: serde_json::Value,
    stats: serde_json::Value,
    overflowed_reps: u32,
}

fn trajectories_csv(manifest: &RunManifest, result: &SimResult) -> String {
    let mut csv = manifest.csv_header();
    csv.push_str("rep,checkpoint,T,M\n");
    for tr in &result.trajectories {
        for (ci, &cp) in result.config.checkpoints.iter().enumerate() {
            let line = format!("{},{},{},{}\n", tr.rep, cp, tr.t[ci], tr.m[ci]);
            csv.push_str(&line);
        }
    }
    csv
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let spec = load_spec(&args.spec)?;
    let p = load_rat("p", &args.p)?;
    let q = load_rat("q", &args.q)?;
    if args.reps == 0 {
        anyhow::bail!("--reps must be at least 1");
    }
    let seed = args.seed.unwrap_or_else(|| {
        let s = entropy_seed();
        eprintln!("generated seed: {s}");
        s
    });
    let cfg = SimConfig::new(seed, args.reps, args.nmax, p, q)
        .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let result = if args.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .context("building worker pool")?;
        pool.install(|| simulate_weighted_series(&spec, &cfg))
    } else {
        simulate_weighted_series(&spec, &cfg)
    }
    .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let mut manifest = RunManifest::new(
        "simulate",
        spec.name(),
        Some(fmt_rat(p)),
        Some(fmt_rat(q)),
        Some(seed),
        &[
            ("nmax", args.nmax.to_string()),
            ("reps", args.reps.to_string()),
        ],
    );
    manifest.wall_clock_s = Some(started.elapsed().as_secs_f64());
    let overflowed = result.trajectories.iter().filter(|t| t.overflowed).count() as u32;
    let stats_payload = serde_json::to_string_pretty(&SimulateOutput {
        manifest: manifest.clone(),
        spec: result.spec.clone(),
        config: serde_json::to_value(&result.config)?,
        stats: serde_json::to_value(&result.stats)?,
        overflowed_reps: overflowed,
    })?;
    match &args.out {
        Some(base) => {
            let csv_path = base.with_extension("csv");
            let json_path = base.with_extension("json");
            let mut csv_file = std::fs::File::create(&csv_path)
                .with_context(|| format!("creating {}", csv_path.display()))?;
            csv_file
                .write_all(trajectories_csv(&manifest, &result).as_bytes())
                .context("writing trajectories")?;
            std::fs::write(&json_path, stats_payload)
                .with_context(|| format!("creating {}", json_path.display()))?;
        }
        None => println!("{stats_payload}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Seed from OS entropy for runs where the caller supplied none.
fn entropy_seed() -> u64 {
    use std::collections::hash_map::RandomState;
    use std::hash::{BuildHasher, Hasher};
    RandomState::new().build_hasher().finish()
}

#[derive(Serialize)]
struct ProbeOutput {
    manifest: RunManifest,
    probe: SeriesProbe,
}

fn cmd_probe(args: ProbeArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let spec = load_spec(&args.spec)?;
    let opts = ProbeOptions {
        j_max: args.j,
        ..ProbeOptions::default()
    };
    let p = args.p.as_deref().map(|s| load_rat("p", s)).transpose()?;
    let q = args.q.as_deref().map(|s| load_rat("q", s)).transpose()?;
    let probe = match args.kind {
        ProbeKind::Qp => {
            let p = p.context("--kind qp requires --p")?;
            qp_series_numeric(&spec, p, &opts)?
        }
        ProbeKind::Truncmean => {
            let q = q.context("--kind truncmean requires --q")?;
            truncmean_series_numeric(&spec, q, &opts)?
        }
        ProbeKind::Integral => {
            let p = p.context("--kind integral requires --p")?;
            let q = q.context("--kind integral requires --q")?;
            integral_condition_numeric(&spec, p, q, &opts)?
        }
    };
    let mut manifest = RunManifest::new(
        "probe-series",
        spec.name(),
        p.map(fmt_rat),
        q.map(fmt_rat),
        None,
        &[("j", args.j.to_string())],
    );
    manifest.wall_clock_s = Some(started.elapsed().as_secs_f64());
    let class = probe.classification;
    let payload = serde_json::to_string_pretty(&ProbeOutput { manifest, probe })?;
    emit(args.out.as_deref(), &payload)?;
    Ok(match class {
        ProbeClass::Converges => ExitCode::SUCCESS,
        ProbeClass::Diverges => ExitCode::from(1),
        ProbeClass::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    })
}

#[derive(Serialize)]
struct InequalityOutput {
    manifest: RunManifest,
    result: BoundCheckResult,
}

fn cmd_inequality(args: InequalityArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let spec = load_spec(&args.spec)?;
    let order = load_rat("order", &args.order)?;
    let seed = args.seed.unwrap_or_else(|| {
        let s = entropy_seed();
        eprintln!("generated seed: {s}");
        s
    });
    let result = match args.kind {
        InequalityKind::MarcusPisier => {
            marcus_pisier_check(&spec, args.n, order, None, args.trials, seed)?
        }
        InequalityKind::Hj => hj_series_check(&spec, order, args.n, args.trials, seed)?,
        InequalityKind::HjSmoke => hj_three_term_smoke(&spec, order, args.n, args.trials, seed)?,
    };
    let kind_name = match args.kind {
        InequalityKind::MarcusPisier => "marcus-pisier",
        InequalityKind::Hj => "hj",
        InequalityKind::HjSmoke => "hj-smoke",
    };
    let mut manifest = RunManifest::new(
        "inequality-check",
        spec.name(),
        None,
        None,
        Some(seed),
        &[
            ("kind", kind_name.to_string()),
            ("order", fmt_rat(order)),
            ("n", args.n.to_string()),
            ("trials", args.trials.to_string()),
        ],
    );
    manifest.wall_clock_s = Some(started.elapsed().as_secs_f64());
    let violations = result.violations;
    let payload = serde_json::to_string_pretty(&InequalityOutput { manifest, result })?;
    emit(args.out.as_deref(), &payload)?;
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_corpus(args: CorpusArgs) -> anyhow::Result<ExitCode> {
    let rows = match &args.table {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<Vec<corpus::ExpectedRow>>(&raw)
                .with_context(|| format!("parsing expected table {}", path.display()))?
        }
        None => corpus::builtin_table(),
    };
    let cells = corpus::run_corpus(&rows)?;
    let mismatches: Vec<&corpus::CorpusCell> = cells.iter().filter(|c| !c.matches).collect();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&cells)?);
    } else {
        println!(
            "{:<34} {:>5} {:>6} {:<12} {:<11} {:<11} ok",
            "spec", "p", "q", "target", "expected", "got"
        );
        for c in &cells {
            println!(
                "{:<34} {:>5} {:>6} {:<12} {:<11} {:<11} {}",
                c.spec,
                c.p,
                c.q,
                c.target,
                c.expected,
                c.got,
                if c.matches { "yes" } else { "MISMATCH" }
            );
        }
        println!(
            "\n{} cells, {} mismatches",
            cells.len(),
            mismatches.len()
        );
    }
    if mismatches.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for c in mismatches {
            eprintln!(
                "mismatch: {} p={} q={} target={}: expected {}, got {}",
                c.spec, c.p, c.q, c.target, c.expected, c.got
            );
        }
        Ok(ExitCode::from(1))
    }
}
