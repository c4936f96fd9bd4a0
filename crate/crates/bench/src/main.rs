use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lcplan::planners::PlannerKind;
use lcplan_bench::benchmark::{run_benchmark, write_reference_suite, BenchmarkOptions, Suite};
use lcplan_bench::io::{read_to_string, write_atomic, write_json};
use lcplan_bench::metrics::{timestep_csv, MetricsRecord};
use lcplan_bench::record::RunRecord;
use lcplan_bench::runner::{evaluate_record, plan_record, EvaluateOptions};
use lcplan_bench::{BenchError, Scenario};

#[derive(Parser)]
#[command(name = "lcplan", version, about = "Localizability-constrained multi-robot planning benchmark")]
struct Cli {
    /// Worker threads for the benchmark pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Output directory.
    #[arg(long, global = true, env = "LCPLAN_OUT_DIR", default_value = "lcplan-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one scenario and write a run file.
    Plan {
        scenario: PathBuf,
        /// Overrides the scenario's planner (lcgp, astar, rrt, potential_field).
        #[arg(long)]
        planner: Option<String>,
        /// Overrides the scenario's planner seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Localize a planned trajectory and write metrics.
    Evaluate {
        run_file: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        noise_seed: Option<u64>,
        /// Exact ranges and initial guesses.
        #[arg(long)]
        noiseless: bool,
    },
    /// Run every scenario x planner x seed cell of a suite.
    Benchmark {
        suite: PathBuf,
        #[arg(long)]
        seeds: Option<usize>,
        /// Skip the per-cell run files.
        #[arg(long)]
        no_runs: bool,
    },
    /// Write the five reference scenarios and their suite file.
    GenScenarios,
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into())
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Plan { scenario, planner, seed } => {
            let mut sc = Scenario::from_json(&read_to_string(&scenario)?)?;
            if let Some(name) = planner {
                let kind = PlannerKind::parse(&name).ok_or_else(|| BenchError::Schema {
                    field: "planner".into(),
                    message: format!("unknown planner `{name}`"),
                })?;
                sc = sc.with_planner(kind);
            }
            let seed = seed.unwrap_or(sc.seeds.planner);
            let (record, _) = plan_record(&sc, seed)?;
            let path = cli.out.join(format!("{}__{}__s{seed}.json", stem(&scenario), sc.planner.name));
            write_json(&path, &record)?;
            println!("{}", path.display());
            if let Some(f) = &record.failure {
                return Err(BenchError::PlannerFailed { planner: record.planner.clone(), reason: f.detail.clone() });
            }
            log::info!("planned in {:.3} s, {} orderings", record.planning_time_seconds, record.orderings_tried);
            Ok(())
        }
        Command::Evaluate { run_file, trials, noise_seed, noiseless } => {
            let record: RunRecord = serde_json::from_str(&read_to_string(&run_file)?).map_err(BenchError::from_json)?;
            let mut opts = EvaluateOptions::from_scenario(&record.scenario);
            if let Some(t) = trials {
                opts.trials = t;
            }
            if let Some(s) = noise_seed {
                opts.noise_seed = s;
            }
            opts.noiseless = noiseless;
            let report = evaluate_record(&record, &opts)?;
            let metrics = MetricsRecord::new(&record, &opts, &report);
            let base = stem(&run_file);
            let json = cli.out.join(format!("{base}.metrics.json"));
            let csv = cli.out.join(format!("{base}.timesteps.csv"));
            write_json(&json, &metrics)?;
            write_atomic(&csv, &timestep_csv(&report))?;
            println!("{}\n{}", json.display(), csv.display());
            Ok(())
        }
        Command::Benchmark { suite, seeds, no_runs } => {
            let suite = Suite::load(&suite)?;
            let opts = BenchmarkOptions { out_dir: cli.out.clone(), seeds, write_runs: !no_runs };
            let out = run_benchmark(&suite, &opts)?;
            print!("{}", String::from_utf8_lossy(&out.summary_csv));
            Ok(())
        }
        Command::GenScenarios => {
            for p in write_reference_suite(&cli.out)? {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
