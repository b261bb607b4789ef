//! `omd-bench`: generate benchmark streams, run the online learners
//! against their closed-form regret guarantees, check the structural
//! inequalities those guarantees rest on, and diff result files.
//!
//! Exit codes: 0 success; 1 operational error (bad flags, unreadable
//! files, solver failure); 2 contract violation (a run exceeded its regret
//! bound, a verification check came out wrong, or compared files differ).

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use barrier_omd::omd::EgEtaVariant;
use barrier_omd::verify::{full_suite, SampleCfg};
use barrier_omd_cli::config::{Algorithm, DataSource, ExperimentConfig, Problem};
use barrier_omd_cli::data::{
    generate_market, generate_quantum_stream, write_market_csv, write_observables_json,
    MarketKind, PovmStyle, TrueStateKind,
};
use barrier_omd_cli::run::{compare_results, resolve_out, run_experiment, RunOutcome};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "omd-bench", version, about = "Online portfolio and density-matrix learning benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate input data files
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run experiments from config files or inline flags
    Run(RunArgs),
    /// Check the structural inequalities behind the regret guarantees
    Verify(VerifyArgs),
    /// Compare two results CSV files cell by cell
    Compare(CompareArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Write a seeded price-relative market as CSV (header a1,...,ad)
    Market {
        #[arg(long, value_enum, default_value_t = MarketKind::IidUniform)]
        kind: MarketKind,
        /// Number of assets
        #[arg(long)]
        d: usize,
        /// Number of rounds
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Write a seeded observable stream as JSON ([re, im] matrices)
    Quantum {
        /// Hilbert-space dimension
        #[arg(long)]
        d: usize,
        /// Number of rounds
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TrueStateKind::RandomMixed)]
        true_state: TrueStateKind,
        #[arg(long, value_enum, default_value_t = PovmStyle::RandomProjective)]
        povm: PovmStyle,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

/// Mirrors the step-size variant enum for clap; the core type stays free
/// of CLI concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum EtaVariantArg {
    #[default]
    SqrtLogDim,
    SqrtDim,
}

impl From<EtaVariantArg> for EgEtaVariant {
    fn from(v: EtaVariantArg) -> Self {
        match v {
            EtaVariantArg::SqrtLogDim => EgEtaVariant::SqrtLogDim,
            EtaVariantArg::SqrtDim => EgEtaVariant::SqrtDim,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; repeatable, executed in the listed order.
    /// Mutually exclusive with the inline flags below.
    #[arg(long = "config", value_name = "FILE")]
    configs: Vec<PathBuf>,
    /// Worker threads for a batch of runs
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Defaults to the problem the algorithm plays
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    /// Dimension (assets / Hilbert-space dimension)
    #[arg(long)]
    d: Option<usize>,
    /// Horizon (rounds)
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Synthetic market generator (portfolio runs)
    #[arg(long, value_enum)]
    market: Option<MarketKind>,
    /// Market CSV or observables JSON to play instead of generating
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// True state behind a synthetic measurement stream (quantum runs)
    #[arg(long, value_enum)]
    true_state: Option<TrueStateKind>,
    /// Measurement style of a synthetic stream (quantum runs)
    #[arg(long, value_enum)]
    povm: Option<PovmStyle>,
    /// Step-size override (default: horizon-tuned schedule)
    #[arg(long)]
    eta: Option<f64>,
    /// EG mixing-weight override; requires --eta
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = EtaVariantArg::SqrtLogDim)]
    eta_variant: EtaVariantArg,
    /// Duality-gap tolerance for the offline comparator
    #[arg(long)]
    comparator_tol: Option<f64>,
    /// Compensated summation for cumulative losses
    #[arg(long)]
    kahan: bool,
    /// Leave the per-round step-length column empty in the results CSV
    #[arg(long)]
    no_steps: bool,
    /// Per-round results CSV (t,loss,cum_loss,cmp_cum_loss,regret,r_t)
    #[arg(long, value_name = "FILE")]
    out_csv: Option<PathBuf>,
    /// Run-summary JSON
    #[arg(long, value_name = "FILE")]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dimension the checks sample at
    #[arg(long, default_value_t = 5)]
    dim: usize,
    /// Random samples per check (crafted instances come on top)
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Run the deliberately weakened suite instead; it must fail every
    /// check, proving the checks have teeth
    #[arg(long)]
    weakened: bool,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    /// Numeric cells may differ by up to this much
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own convention would exit 2 on usage errors; keep 2
            // reserved for contract violations.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(cmd) => gen(cmd).map(|()| 0),
        Command::Run(args) => run(args),
        Command::Verify(args) => verify(args),
        Command::Compare(args) => compare(args),
    }
}

fn gen(cmd: GenCmd) -> Result<()> {
    match cmd {
        GenCmd::Market { kind, d, t, seed, out } => {
            let days = generate_market(kind, d, t, seed)?;
            let path = resolve_out(&out);
            write_market_csv(&path, &days)?;
            println!("wrote {} rounds to {}", days.len(), path.display());
        }
        GenCmd::Quantum { d, t, seed, true_state, povm, out } => {
            let stream = generate_quantum_stream(d, t, seed, true_state, povm)?;
            let path = resolve_out(&out);
            write_observables_json(&path, &stream)?;
            println!("wrote {} rounds to {}", stream.len(), path.display());
        }
    }
    Ok(())
}

fn inline_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let algorithm = args
        .algorithm
        .context("--algorithm is required when no --config is given")?;
    let problem = args.problem.unwrap_or_else(|| algorithm.problem());
    let d = args.d.context("--d is required when no --config is given")?;
    let t = args.t.context("--t is required when no --config is given")?;
    let data = match problem {
        Problem::Ops => {
            if args.true_state.is_some() || args.povm.is_some() {
                bail!("--true-state/--povm only apply to quantum runs");
            }
            match (&args.input, args.market) {
                (Some(_), Some(_)) => bail!("--input and --market are mutually exclusive"),
                (Some(path), None) => DataSource::MarketFile { path: path.clone() },
                (None, kind) => {
                    DataSource::Market { kind: kind.unwrap_or(MarketKind::IidUniform) }
                }
            }
        }
        Problem::Quantum => {
            if args.market.is_some() {
                bail!("--market only applies to portfolio runs");
            }
            match (&args.input, args.true_state, args.povm) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    bail!("--input and --true-state/--povm are mutually exclusive")
                }
                (Some(path), None, None) => DataSource::ObservablesFile { path: path.clone() },
                (None, ts, pv) => DataSource::Quantum {
                    true_state: ts.unwrap_or(TrueStateKind::RandomMixed),
                    povm: pv.unwrap_or(PovmStyle::RandomProjective),
                },
            }
        }
    };
    let cfg = ExperimentConfig {
        problem,
        algorithm,
        d,
        t,
        seed: args.seed,
        data,
        eta: args.eta,
        gamma: args.gamma,
        eta_variant: args.eta_variant.into(),
        comparator_tol: args.comparator_tol,
        log_steps: !args.no_steps,
        kahan: args.kahan,
        output_csv: args.out_csv.clone(),
        output_json: args.out_json.clone(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<i32> {
    let configs: Vec<ExperimentConfig> = if args.configs.is_empty() {
        vec![inline_config(&args)?]
    } else {
        if args.algorithm.is_some() || args.d.is_some() || args.t.is_some() {
            bail!("--config and inline experiment flags are mutually exclusive");
        }
        args.configs.iter().map(|p| ExperimentConfig::load(p)).collect::<Result<_>>()?
    };
    let results = run_batch(&configs, args.jobs);
    let mut operational_failure = false;
    let mut bound_violation = false;
    for (cfg, result) in configs.iter().zip(results) {
        match result {
            Ok(outcome) => {
                println!("{}", serde_json::to_string(&outcome.summary)?);
                if !outcome.summary.bound_satisfied {
                    bound_violation = true;
                    eprintln!(
                        "regret bound violated: {:?}/{:?} d={} t={} regret {:.6} > bound {:.6} + gap {:.3e}",
                        cfg.algorithm,
                        cfg.problem,
                        cfg.d,
                        cfg.t,
                        outcome.summary.final_regret,
                        outcome.summary.bound,
                        outcome.summary.comparator.gap,
                    );
                }
            }
            Err(e) => {
                operational_failure = true;
                eprintln!("error: {e:#}");
            }
        }
    }
    Ok(if operational_failure {
        1
    } else if bound_violation {
        2
    } else {
        0
    })
}

/// Runs a batch on up to `jobs` worker threads, returning results in
/// config order.
fn run_batch(configs: &[ExperimentConfig], jobs: usize) -> Vec<Result<RunOutcome>> {
    let workers = jobs.max(1).min(configs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunOutcome>>>> =
        configs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= configs.len() {
                    break;
                }
                let result = run_experiment(&configs[i]);
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("worker filled every claimed slot"))
        .collect()
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let cfg = SampleCfg { d: args.dim, samples: args.samples, seed: args.seed };
    let suite = if args.weakened { "weakened" } else { "canonical" };
    let reports = full_suite(&cfg, args.weakened).context("building verification suite")?;
    let mut ok = true;
    for report in &reports {
        let mut line = serde_json::to_value(report)?;
        line.as_object_mut()
            .expect("check reports serialize as objects")
            .insert("suite".into(), suite.into());
        println!("{}", serde_json::to_string(&line)?);
        // The canonical suite must pass everything; the weakened suite
        // must fail everything, or a check has no teeth.
        let expected = !args.weakened;
        if report.pass != expected {
            ok = false;
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    eprintln!("{suite} suite: {passed}/{} checks passed", reports.len());
    Ok(if ok { 0 } else { 2 })
}

fn compare(args: CompareArgs) -> Result<i32> {
    let diffs = compare_results(&args.a, &args.b, args.tol)?;
    if diffs.is_empty() {
        println!("files match (tol {})", args.tol);
        Ok(0)
    } else {
        for diff in &diffs {
            println!("{diff}");
        }
        Ok(2)
    }
}
