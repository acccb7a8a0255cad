use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plantedbip::certificate::ColumnStrategy;
use plantedbip::instance::{read_archive, write_archive, AdversaryStrategy, BipartiteTopology};
use plantedbip_harness::config::{parse_list, AlgorithmSettings, Cell};
use plantedbip_harness::oracle::{brute_force_recover_with_budget, DEFAULT_BUDGET};
use plantedbip_harness::sweep::WORKERS_ENV;
use plantedbip_harness::trial::{generate, run_algorithm};
use plantedbip_harness::{Algorithm, ExperimentConfig, HarnessError, Model, Overrides};
use serde_json::json;

#[derive(Parser)]
#[command(name = "plantedbip", version, about = "Planted bipartite subgraph experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write `<out>.edges` and `<out>.meta.json`.
    Gen(GenArgs),
    /// Run one recovery algorithm on an archive.
    Recover {
        #[arg(long, value_parser = parse_recovery)]
        alg: Algorithm,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build and verify the dual certificate for an archive.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value = "min_max_entry")]
        strategy: ColumnStrategy,
    },
    /// Run a parameter sweep described by a TOML file.
    Sweep(SweepArgs),
    /// List every planted-shaped set of an archive by exhaustive search.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1.0 / 6.0)]
    alpha: f64,
    #[arg(long, default_value = "random_regular")]
    topology: BipartiteTopology,
    #[arg(long, default_value = "random")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monotone adversary: add each outside non-edge with this probability.
    #[arg(long)]
    adversary_extra: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    model: Option<Model>,
    /// Comma list, e.g. `degree,sdp`.
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    p: Option<String>,
}

fn parse_recovery(s: &str) -> Result<Algorithm, String> {
    match s.parse::<Algorithm>() {
        Ok(Algorithm::Certify) | Err(_) => Err(format!("expected degree, sdp or subspace, got {s:?}")),
        Ok(a) => Ok(a),
    }
}

fn opt_list<T>(s: &Option<String>) -> Result<Option<Vec<T>>, HarnessError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.as_deref().map(parse_list).transpose()
}

fn print(value: &serde_json::Value) -> Result<(), HarnessError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn gen(a: &GenArgs) -> Result<(), HarnessError> {
    let mut cfg = ExperimentConfig::single(a.n, a.k, a.d, a.p, vec![Algorithm::Degree]);
    cfg.model = a.model;
    cfg.topology = a.topology.clone();
    cfg.adversary = a.adversary_extra.map(AdversaryStrategy::RandomExtra);
    let cell = Cell {
        index: 0,
        n: a.n,
        k: a.k,
        d: a.d,
        p: a.p,
        alpha: a.alpha,
    };
    let inst = generate(&cfg, &cell, a.seed)?;
    write_archive(&inst, &a.out)?;
    print(&json!({
        "edges": inst.graph.edge_count(),
        "adversary_edges": inst.adversary_edges.len(),
        "planted": inst.planted_set(),
    }))
}

fn sweep(a: &SweepArgs) -> Result<(), HarnessError> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    cfg.apply(&Overrides {
        model: a.model,
        algorithms: opt_list(&a.algorithms)?,
        trials: a.trials,
        master_seed: a.master_seed,
        output: a.output.clone(),
        n: opt_list(&a.n)?,
        k: opt_list(&a.k)?,
        d: opt_list(&a.d)?,
        p: opt_list(&a.p)?,
    })?;
    let report = plantedbip_harness::run_sweep(&cfg)?;
    eprintln!("{} rows, workers from {WORKERS_ENV}", report.rows);
    print(&serde_json::to_value(&report)?)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Recover { alg, input } => {
            let inst = read_archive(&input)?;
            print(&serde_json::to_value(run_algorithm(alg, &inst, &AlgorithmSettings::default()))?)
        }
        Command::Certify { input, tau, t, strategy } => {
            let inst = read_archive(&input)?;
            let mut settings = AlgorithmSettings::default();
            settings.certify.tau = tau;
            settings.certify.t = t;
            settings.certify.strategy = strategy;
            print(&serde_json::to_value(run_algorithm(Algorithm::Certify, &inst, &settings))?)
        }
        Command::Sweep(a) => sweep(&a),
        Command::Oracle { input, budget } => {
            let inst = read_archive(&input)?;
            let sets = brute_force_recover_with_budget(&inst.graph, inst.params.k, inst.params.d, budget)?;
            let planted = inst.planted_set();
            print(&json!({
                "count": sets.len(),
                "contains_planted": sets.contains(&planted),
                "sets": sets,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
