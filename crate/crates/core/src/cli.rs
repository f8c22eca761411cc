//! `sublab` command-line front end.
//!
//! Every subcommand emits one JSON [`RunRecord`] (or a flat CSV projection
//! of its per-trial rows). Trial `t` is seeded from sub-stream `t` of
//! `--seed`, so records are reproducible and extending `--trials` never
//! changes earlier trials. Fields named `wall_time_ms` are the only
//! non-deterministic output.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::generators::{random_bipartite, random_matching_union};
use crate::graph::io::{read_graph, to_text};
use crate::graph::{BoundedDegreeGraph, QueryLedger};
use crate::instances::{default_host_size, sample_pml, PmlParams};
use crate::kwise::Seed;
use crate::lowerbound::suite::run_lab;
use crate::lowerbound::ErrorBudget;
use crate::rng::{child_seed, substream};
use crate::testers::{
    kwise_seed_bits, test_bipartiteness, test_expansion, BipartiteParams, CoinMode, CounterMode, ExpansionParams,
    RepetitionRecord, TesterOptions,
};

#[derive(Debug, Parser)]
#[command(name = "sublab", version, about = "Random-walk property testers and lower-bound lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bipartiteness tester over independent trials.
    TestBip(TestBipArgs),
    /// Expansion tester over independent trials.
    TestExp(TestExpArgs),
    /// Sample P_{M,l}: host and induced graphs plus a JSON sidecar.
    GenPml(GenPmlArgs),
    /// Identity suites and the exact-vs-sampled expectation grid.
    VerifyLb(VerifyLbArgs),
    /// Query counts of both testers across graph sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeArg {
    #[default]
    FullyRandom,
    Kwise,
}

impl From<ModeArg> for CoinMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FullyRandom => CoinMode::FullyRandom,
            ModeArg::Kwise => CoinMode::Kwise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum CounterArg {
    #[default]
    Exact,
    Skeleton,
}

impl From<CounterArg> for CounterMode {
    fn from(c: CounterArg) -> Self {
        match c {
            CounterArg::Exact => CounterMode::Exact,
            CounterArg::Skeleton => CounterMode::Skeleton,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of independent trials.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Output path (directory for gen-pml); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Overrides of the derived walk parameters.
#[derive(Debug, Clone, Args)]
pub struct WalkOverrides {
    /// Repetitions `T`.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Walks per repetition `K`.
    #[arg(long)]
    pub walks: Option<usize>,
    /// Walk length `L`.
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::FullyRandom)]
    pub mode: ModeArg,
    /// Fixed k-wise family seed (hex) used in every repetition.
    #[arg(long)]
    pub kwise_seed: Option<String>,
    /// Probability that the collision finder drops a found pair.
    #[arg(long, default_value_t = 0.0)]
    pub failure: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TestBipArgs {
    /// Graph file (text or JSON format).
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    pub walk: WalkOverrides,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TestExpArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_enum, default_value_t = CounterArg::Exact)]
    pub counter: CounterArg,
    /// Outer retries of the skeleton counter.
    #[arg(long)]
    pub retries: Option<u32>,
    #[command(flatten)]
    pub walk: WalkOverrides,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct GenPmlArgs {
    #[arg(long)]
    pub n: usize,
    /// Host size; defaults to the smallest valid size above N(1 + N^-0.1).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub c: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyLbArgs {
    /// Largest partition size (at most 8).
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Monte Carlo samples per grid cell.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Comma-separated vertex counts (even).
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.12)]
    pub mu: f64,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord<P, T, A> {
    pub subcommand: &'static str,
    pub params: P,
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<T>,
    pub aggregate: A,
    pub ledger: QueryLedger,
    pub wall_time_ms: u64,
}

/// Seed of trial `t`.
pub fn trial_seed(master: u64, t: usize) -> u64 {
    child_seed(&mut substream(master, t as u64))
}

#[derive(Debug, Clone, Serialize)]
pub struct RateSummary {
    pub accepts: usize,
    pub accept_rate: f64,
    pub reject_rate: f64,
    /// binomial standard error of the rate
    pub std_error: f64,
    pub mean_classical_queries: f64,
    pub mean_modeled_quantum_queries: f64,
    pub mean_walk_steps: f64,
}

fn summarize(accepts: &[bool], ledgers: &[QueryLedger]) -> RateSummary {
    let n = accepts.len().max(1) as f64;
    let a = accepts.iter().filter(|&&x| x).count();
    let rate = a as f64 / n;
    let mean = |f: fn(&QueryLedger) -> u64| ledgers.iter().map(|l| f(l) as f64).sum::<f64>() / n;
    RateSummary {
        accepts: a,
        accept_rate: rate,
        reject_rate: 1.0 - rate,
        std_error: (rate * (1.0 - rate) / n).sqrt(),
        mean_classical_queries: mean(|l| l.classical_queries),
        mean_modeled_quantum_queries: mean(|l| l.modeled_quantum_queries),
        mean_walk_steps: mean(|l| l.walk_steps),
    }
}

fn total_ledger(ledgers: &[QueryLedger]) -> QueryLedger {
    let mut t = QueryLedger::default();
    ledgers.iter().for_each(|l| t.merge(l));
    t
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

#[derive(Debug, Clone, Serialize)]
pub struct TesterEcho<P> {
    pub graph: String,
    pub mode: CoinMode,
    pub kwise_seed: Option<String>,
    pub injected_failure: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter: Option<CounterMode>,
    pub tester: P,
}

#[derive(Debug, Clone, Serialize)]
pub struct TesterTrial {
    pub trial: usize,
    pub seed: u64,
    pub accept: bool,
    pub repetitions_run: usize,
    pub rejected_at: Option<usize>,
    /// collision statistic per repetition, `;`-joined
    pub collisions: String,
    pub classical_queries: u64,
    pub modeled_quantum_queries: u64,
    pub walk_steps: u64,
}

fn options(w: &WalkOverrides, bits: impl FnOnce() -> Result<usize>) -> Result<TesterOptions> {
    let mut opts = TesterOptions::new(w.mode.into()).with_failure(w.failure);
    if let Some(hex) = &w.kwise_seed {
        if w.mode != ModeArg::Kwise {
            return Err(Error::Input("--kwise-seed needs --mode kwise".into()));
        }
        opts.kwise_seed = Some(Seed::from_hex(hex, bits()?)?);
    }
    Ok(opts)
}

fn trial_row(
    trial: usize,
    seed: u64,
    accept: bool,
    reps: &[RepetitionRecord],
    ledger: &QueryLedger,
) -> TesterTrial {
    TesterTrial {
        trial,
        seed,
        accept,
        repetitions_run: reps.len(),
        rejected_at: reps.iter().position(|r| r.rejected),
        collisions: reps.iter().map(|r| r.collisions.to_string()).collect::<Vec<_>>().join(";"),
        classical_queries: ledger.classical_queries,
        modeled_quantum_queries: ledger.modeled_quantum_queries,
        walk_steps: ledger.walk_steps,
    }
}

fn load_graph(path: &Path) -> Result<BoundedDegreeGraph> {
    read_graph(path)
}

pub fn cmd_test_bip(args: &TestBipArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let mut params = BipartiteParams::derive(g.n_vertices(), args.eps, g.degree_bound())?;
    let w = &args.walk;
    if let Some(t) = w.reps {
        params = params.with_repetitions(t);
    }
    if let Some(k) = w.walks {
        params = params.with_walks(k);
    }
    if let Some(l) = w.length {
        params = params.with_walk_length(l);
    }
    params.validate()?;
    let opts = options(w, || {
        kwise_seed_bits(params.walks, params.walk_length, params.degree_bound, params.k_indep, params.k_factor)
    })?;
    let mut rows = Vec::new();
    let mut accepts = Vec::new();
    let mut ledgers = Vec::new();
    for t in 0..args.common.trials {
        let seed = trial_seed(args.common.seed, t);
        let v = test_bipartiteness(&g, &params, &opts, seed)?;
        rows.push(trial_row(t, seed, v.accept, &v.repetitions, &v.ledger));
        accepts.push(v.accept);
        ledgers.push(v.ledger);
    }
    let record = RunRecord {
        subcommand: "test-bip",
        params: TesterEcho {
            graph: args.graph.display().to_string(),
            mode: w.mode.into(),
            kwise_seed: opts.kwise_seed.as_ref().map(Seed::to_hex),
            injected_failure: w.failure,
            counter: None,
            tester: params,
        },
        seed: args.common.seed,
        trials: args.common.trials,
        aggregate: summarize(&accepts, &ledgers),
        ledger: total_ledger(&ledgers),
        results: rows,
        wall_time_ms: elapsed_ms(start),
    };
    Ok((render(&record, &record.results, args.common.format)?, true))
}

pub fn cmd_test_exp(args: &TestExpArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let mut params = ExpansionParams::derive(g.n_vertices(), args.eps, args.alpha, args.mu, g.degree_bound())?;
    let w = &args.walk;
    if let Some(t) = w.reps {
        params = params.with_repetitions(t);
    }
    if let Some(k) = w.walks {
        params = params.with_walks(k);
    }
    if let Some(l) = w.length {
        params = params.with_walk_length(l);
    }
    if let Some(r) = args.retries {
        params = params.with_outer_retries(r);
    }
    params.validate()?;
    let opts = options(w, || {
        kwise_seed_bits(params.walks, params.walk_length, params.degree_bound, params.k_indep, params.k_factor)
    })?
    .with_counter(args.counter.into());
    let mut rows = Vec::new();
    let mut accepts = Vec::new();
    let mut ledgers = Vec::new();
    for t in 0..args.common.trials {
        let seed = trial_seed(args.common.seed, t);
        let v = test_expansion(&g, &params, &opts, seed)?;
        rows.push(trial_row(t, seed, v.accept, &v.repetitions, &v.ledger));
        accepts.push(v.accept);
        ledgers.push(v.ledger);
    }
    let record = RunRecord {
        subcommand: "test-exp",
        params: TesterEcho {
            graph: args.graph.display().to_string(),
            mode: w.mode.into(),
            kwise_seed: opts.kwise_seed.as_ref().map(Seed::to_hex),
            injected_failure: w.failure,
            counter: Some(opts.counter),
            tester: params,
        },
        seed: args.common.seed,
        trials: args.common.trials,
        aggregate: summarize(&accepts, &ledgers),
        ledger: total_ledger(&ledgers),
        results: rows,
        wall_time_ms: elapsed_ms(start),
    };
    Ok((render(&record, &record.results, args.common.format)?, true))
}

#[derive(Debug, Clone, Serialize)]
pub struct PmlTrial {
    pub trial: usize,
    pub failed: bool,
    /// vertices chosen per block, `;`-joined
    pub block_counts: String,
    pub host_edges: usize,
    pub induced_vertices: usize,
    pub induced_edges: usize,
    pub induced_max_degree: usize,
    pub collapsed_parallel_edges: usize,
    pub host_file: Option<String>,
    pub induced_file: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PmlAggregate {
    pub failures: usize,
    pub failure_rate: f64,
}

pub fn cmd_gen_pml(args: &GenPmlArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let m = match args.m {
        Some(m) => m,
        None => default_host_size(args.n, args.l)?,
    };
    let params = PmlParams::new(args.n, m, args.l, args.c)?;
    if let Some(dir) = &args.common.out {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    let mut rows = Vec::new();
    for t in 0..args.common.trials {
        let mut rng = substream(args.common.seed, t as u64);
        let (host, sample) = sample_pml(&params, &mut rng)?;
        let host_graph = host.host_graph()?;
        let (mut host_file, mut induced_file) = (None, None);
        if let Some(dir) = &args.common.out {
            let h = format!("pml-{t}-host.txt");
            write_file(&dir.join(&h), &to_text(&host_graph))?;
            host_file = Some(h);
            if let Some(ind) = &sample.induced {
                let i = format!("pml-{t}-induced.txt");
                write_file(&dir.join(&i), &to_text(ind))?;
                induced_file = Some(i);
            }
        }
        rows.push(PmlTrial {
            trial: t,
            failed: sample.failed,
            block_counts: sample.block_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"),
            host_edges: host_graph.n_edges(),
            induced_vertices: sample.induced.as_ref().map_or(0, |g| g.n_vertices()),
            induced_edges: sample.induced.as_ref().map_or(0, |g| g.n_edges()),
            induced_max_degree: sample.induced.as_ref().map_or(0, |g| g.max_degree()),
            collapsed_parallel_edges: sample.collapsed_parallel_edges,
            host_file,
            induced_file,
        });
    }
    let failures = rows.iter().filter(|r| r.failed).count();
    let record = RunRecord {
        subcommand: "gen-pml",
        params,
        seed: args.common.seed,
        trials: args.common.trials,
        aggregate: PmlAggregate {
            failures,
            failure_rate: failures as f64 / rows.len().max(1) as f64,
        },
        ledger: QueryLedger::default(),
        results: rows,
        wall_time_ms: elapsed_ms(start),
    };
    let text = render(&record, &record.results, args.common.format)?;
    match &args.common.out {
        Some(dir) => {
            let name = match args.common.format {
                Format::Json => "pml.json",
                Format::Csv => "pml.csv",
            };
            write_file(&dir.join(name), &text)?;
            Ok((String::new(), true))
        }
        None => Ok((text, true)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LabParams {
    pub kmax: usize,
    pub samples: u64,
    pub cells: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabRow {
    pub kind: &'static str,
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub passed: bool,
    pub exact: Option<String>,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub denominator: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabAggregate {
    pub all_passed: bool,
    pub identities_passed: bool,
    pub grid_passed: bool,
    pub budget: ErrorBudget,
}

/// Grid cells sampled by `verify-lb`. The block size `M/l` must be even,
/// which rules out `(10, 2)`; `(12, 2)` takes its place.
pub const LAB_CELLS: [(usize, usize); 3] = [(10, 1), (12, 2), (12, 3)];

pub fn cmd_verify_lb(args: &VerifyLbArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let report = run_lab(args.kmax, args.samples, args.common.seed, &LAB_CELLS)?;
    let mut rows: Vec<LabRow> = report
        .checks
        .iter()
        .map(|c| LabRow {
            kind: "identity",
            name: c.name.clone(),
            cases: c.cases,
            failures: c.failures,
            passed: c.passed(),
            exact: None,
            estimate: None,
            std_error: None,
            denominator: None,
        })
        .collect();
    rows.extend(report.expectations.iter().map(|r| LabRow {
        kind: "expectation",
        name: format!("{} @ M={} l={}", r.monomial, r.m, r.l),
        cases: r.monte_carlo.samples,
        failures: u64::from(!r.within_3_sigma),
        passed: r.within_3_sigma,
        exact: Some(r.exact.clone()),
        estimate: Some(r.monte_carlo.mean),
        std_error: Some(r.monte_carlo.std_error),
        denominator: Some(r.denominator.clone()),
    }));
    let ok = report.all_passed;
    let aggregate = LabAggregate {
        all_passed: ok,
        identities_passed: report.checks.iter().all(|c| c.passed()),
        grid_passed: report.expectations.iter().all(|r| r.within_3_sigma),
        budget: report.budget,
    };
    let record = RunRecord {
        subcommand: "verify-lb",
        params: LabParams {
            kmax: args.kmax,
            samples: args.samples,
            cells: LAB_CELLS.to_vec(),
        },
        seed: args.common.seed,
        trials: 1,
        results: rows,
        aggregate,
        ledger: QueryLedger::default(),
        wall_time_ms: elapsed_ms(start),
    };
    Ok((render(&record, &record.results, args.common.format)?, ok))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub tester: &'static str,
    pub n: usize,
    pub repetitions: usize,
    pub walks: usize,
    pub walk_length: usize,
    pub accept_rate: f64,
    pub mean_classical_queries: f64,
    pub mean_modeled_quantum_queries: f64,
    pub mean_walk_steps: f64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchAggregate {
    /// least-squares slope of log(classical queries) against log N
    pub bip_query_exponent: Option<f64>,
    pub exp_query_exponent: Option<f64>,
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Bipartiteness on random bipartite graphs (always accepted, so every
/// repetition runs) and expansion on random matching unions, with the
/// derived parameters at each size.
pub fn cmd_bench(args: &BenchArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut all_ledgers = Vec::new();
    for (si, &n) in args.sizes.iter().enumerate() {
        let mut graph_rng = substream(args.common.seed, 1_000_000 + si as u64);
        let bip_graph = random_bipartite(n, args.degree, &mut graph_rng)?;
        let exp_graph = random_matching_union(n, args.degree, &mut graph_rng)?;
        let bip = BipartiteParams::derive(n, args.eps, args.degree)?;
        let exp = ExpansionParams::derive(n, args.eps, args.alpha, args.mu, args.degree)?;
        for tester in ["bip", "exp"] {
            let t0 = Instant::now();
            let mut accepts = Vec::new();
            let mut ledgers = Vec::new();
            for t in 0..args.common.trials {
                let seed = trial_seed(args.common.seed, si * args.common.trials + t);
                let (accept, ledger) = if tester == "bip" {
                    let v = test_bipartiteness(&bip_graph, &bip, &TesterOptions::default(), seed)?;
                    (v.accept, v.ledger)
                } else {
                    let v = test_expansion(&exp_graph, &exp, &TesterOptions::default(), seed)?;
                    (v.accept, v.ledger)
                };
                accepts.push(accept);
                ledgers.push(ledger);
            }
            let s = summarize(&accepts, &ledgers);
            let (reps, walks, len) = if tester == "bip" {
                (bip.repetitions, bip.walks, bip.walk_length)
            } else {
                (exp.repetitions, exp.walks, exp.walk_length)
            };
            rows.push(BenchRow {
                tester: if tester == "bip" { "bipartiteness" } else { "expansion" },
                n,
                repetitions: reps,
                walks,
                walk_length: len,
                accept_rate: s.accept_rate,
                mean_classical_queries: s.mean_classical_queries,
                mean_modeled_quantum_queries: s.mean_modeled_quantum_queries,
                mean_walk_steps: s.mean_walk_steps,
                wall_time_ms: elapsed_ms(t0),
            });
            all_ledgers.extend(ledgers);
        }
    }
    let slope = |name: &str| {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.tester == name)
            .map(|r| (r.n as f64, r.mean_classical_queries))
            .collect();
        loglog_slope(&pts)
    };
    let record = RunRecord {
        subcommand: "bench",
        params: serde_json::json!({
            "sizes": args.sizes,
            "eps": args.eps,
            "alpha": args.alpha,
            "mu": args.mu,
            "degree": args.degree,
        }),
        seed: args.common.seed,
        trials: args.common.trials,
        aggregate: BenchAggregate {
            bip_query_exponent: slope("bipartiteness"),
            exp_query_exponent: slope("expansion"),
        },
        ledger: total_ledger(&all_ledgers),
        results: rows,
        wall_time_ms: elapsed_ms(start),
    };
    Ok((render(&record, &record.results, args.common.format)?, true))
}

fn render<R: Serialize, T: Serialize>(record: &R, rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).map_err(|e| Error::Input(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn out_path(cmd: &Command) -> Option<&Path> {
    let common = match cmd {
        Command::TestBip(a) => &a.common,
        Command::TestExp(a) => &a.common,
        Command::GenPml(_) => return None,
        Command::VerifyLb(a) => &a.common,
        Command::Bench(a) => &a.common,
    };
    common.out.as_deref()
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::TestBip(a) => cmd_test_bip(a),
        Command::TestExp(a) => cmd_test_exp(a),
        Command::GenPml(a) => cmd_gen_pml(a),
        Command::VerifyLb(a) => cmd_verify_lb(a),
        Command::Bench(a) => cmd_bench(a),
    };
    let (text, ok) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sublab: {e}");
            return 2;
        }
    };
    let written = match out_path(&cli.command) {
        Some(p) => write_file(p, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Input(e.to_string())),
    };
    if let Err(e) = written {
        eprintln!("sublab: {e}");
        return 2;
    }
    if ok {
        0
    } else {
        eprintln!("sublab: at least one check failed");
        1
    }
}
