use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use regret_sched::bench::{run_bench, BenchSpec, CSV_HEADER};
use regret_sched::error::CliError;
use regret_sched::formats::{
    read_four_pp, read_instance, read_partition, read_scenario, read_schedule, write_instance,
    write_json, write_schedule, FourPPFile, ReportFile, ScheduleFile, ThresholdFile, WitnessFile,
};
use regret_sched::random::gen_random_instance;
use regret_sched::solver::solve_exact_timed;
use regret_sched::verify::{run_suite, Suite, VerifyOptions};
use regret_sched_core::deterministic::spt_schedule;
use regret_sched_core::exact::{count_search_space, SearchConfig};
use regret_sched_core::heuristics::{local_search, midpoint_heuristic};
use regret_sched_core::reductions::{
    decide_3partition, decide_4pp, gen_4pp_from_3partition, gen_sched_from_4pp,
};
use regret_sched_core::regret::{max_regret, oracle_max_regret, DEFAULT_ORACLE_CAP};
use regret_sched_core::single_machine::{detect_equal_midpoints, optimal_single_machine};
use regret_sched_core::structure::{canonicalize, rebalance};
use regret_sched_core::{flow_time, load_vector, RegretReport, Schedule, Time};

/// Interval minmax regret scheduling on parallel identical machines.
#[derive(Parser)]
#[command(name = "regret-sched", version)]
struct Cli {
    /// Worker threads for solvers and verification suites.
    #[arg(long, global = true, env = "REGRET_SCHED_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum regret of a schedule, with its worst-case certificate.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Enumerate extreme scenarios instead of solving the assignment.
        #[arg(long)]
        oracle: bool,
    },
    /// SPT schedule and optimal flow time for a fixed scenario.
    DetSolve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        machines: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Robust schedule for an instance.
    Solve(SolveArgs),
    /// Aligns two balanced schedules machine by machine.
    Canonicalize {
        #[arg(long)]
        pi: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        out_pi: Option<PathBuf>,
        #[arg(long)]
        out_sigma: Option<PathBuf>,
    },
    /// Moves jobs from longest to shortest machine until balanced.
    Rebalance {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Gen(GenCommand),
    /// Brute-force decision for a partition problem.
    Decide {
        problem: Problem,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Runs a property suite; exit code 1 if any trial fails.
    Verify {
        suite: Suite,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// theorem2: a 4-PP file to check instead of the built-in instances.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// theorem2: also check every 8-value instance over 1..=4.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Exact solver vs. heuristics on random instances.
    Bench {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, short, default_value_t = 2)]
        machines: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_width: Time,
        #[arg(long, default_value_t = 20)]
        max_lo: Time,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("method").required(true).args(["exact", "heuristic", "single_uniform"])))]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Exhaustive search over multiplier profiles.
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum)]
    heuristic: Option<Heuristic>,
    /// Closed form for one machine with equal interval midpoints.
    #[arg(long)]
    single_uniform: bool,
    /// Only balanced schedules (exact; needs m | n).
    #[arg(long, requires = "exact")]
    balanced_only: bool,
    #[arg(long, requires = "exact")]
    node_cap: Option<u64>,
    /// Seconds.
    #[arg(long, requires = "exact")]
    time_cap: Option<f64>,
    /// Print the search-space size and exit.
    #[arg(long, requires = "exact")]
    count_only: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start schedule for local search; defaults to the midpoint heuristic.
    #[arg(long)]
    start: Option<PathBuf>,
    /// Where to write the schedule.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Seeded random instance.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        n: usize,
        #[arg(long, short)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        max_width: Time,
        #[arg(long, default_value_t = 20)]
        max_lo: Time,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 3-PARTITION file to 4-PP file.
    #[command(name = "3p-to-4pp")]
    ThreePToFourPP {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 4-PP file to scheduling instance; the threshold goes to stdout.
    #[command(name = "4pp-to-sched")]
    FourPPToSched {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Heuristic {
    Midpoint,
    LocalSearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    #[value(name = "3partition")]
    ThreePartition,
    #[value(name = "4pp")]
    FourPP,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn print_json(value: &serde_json::Value) {
    println!("{value}");
}

/// Writes `value` to `out`, or prints it as one JSON line.
fn emit<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", serde_json::to_string(value).expect("serializable"));
            Ok(())
        }
    }
}

fn report_json(report: &RegretReport) -> serde_json::Value {
    serde_json::to_value(ReportFile::from(report)).expect("serializable")
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.instance)?;
    let mut extra = serde_json::Map::new();
    let (schedule, report) = if args.exact {
        let mut cfg = if args.balanced_only {
            SearchConfig::balanced()
        } else {
            SearchConfig::default()
        };
        if let Some(cap) = args.node_cap {
            cfg.node_cap = cap;
        }
        if let Some(secs) = args.time_cap {
            cfg.time_cap = Duration::try_from_secs_f64(secs)
                .map_err(|e| CliError::Usage(format!("--time-cap: {e}")))?;
        }
        if args.count_only {
            print_json(&json!({ "profiles": count_search_space(&inst, &cfg)? }));
            return Ok(());
        }
        let outcome = solve_exact_timed(&inst, &cfg)?;
        extra.insert("optimal".into(), outcome.optimal.into());
        extra.insert("profiles_visited".into(), outcome.profiles_visited.into());
        (outcome.schedule, outcome.report)
    } else if let Some(h) = args.heuristic {
        match h {
            Heuristic::Midpoint => midpoint_heuristic(&inst)?,
            Heuristic::LocalSearch => {
                let start = match &args.start {
                    Some(path) => read_schedule(path)?,
                    None => midpoint_heuristic(&inst)?.0,
                };
                let start_regret = max_regret(&inst, &start)?.max_regret;
                extra.insert("start_regret".into(), start_regret.into());
                local_search(&inst, &start, args.seed)?
            }
        }
    } else {
        let emi = detect_equal_midpoints(&inst)?;
        let (schedule, _) = optimal_single_machine(&emi)?;
        let report = max_regret(&inst, &schedule)?;
        (schedule, report)
    };
    if let Some(out) = &args.out {
        write_schedule(out, &schedule)?;
    }
    let mut line = serde_json::Map::new();
    line.insert("max_regret".into(), report.max_regret.into());
    line.insert(
        "schedule".into(),
        serde_json::to_value(ScheduleFile::from(&schedule)).expect("serializable"),
    );
    line.insert("report".into(), report_json(&report));
    line.extend(extra);
    print_json(&line.into());
    Ok(())
}

/// Returns whether the run passed; only `verify` can fail.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Eval {
            instance,
            schedule,
            oracle,
        } => {
            let inst = read_instance(&instance)?;
            let s = read_schedule(&schedule)?;
            let report = if oracle {
                oracle_max_regret(&inst, &s, DEFAULT_ORACLE_CAP)?
            } else {
                max_regret(&inst, &s)?
            };
            print_json(&report_json(&report));
        }
        Command::DetSolve {
            scenario,
            machines,
            out,
        } => {
            if machines == 0 {
                return Err(CliError::Usage("--machines must be at least 1".into()));
            }
            let sc = read_scenario(&scenario)?;
            let s = spt_schedule(&sc, machines);
            if let Some(path) = &out {
                write_schedule(path, &s)?;
            }
            print_json(
                &json!({ "flow_time": flow_time(&s, &sc), "schedule": ScheduleFile::from(&s) }),
            );
        }
        Command::Solve(args) => solve(args)?,
        Command::Canonicalize {
            pi,
            sigma,
            out_pi,
            out_sigma,
        } => {
            let (p, s) = canonicalize(&read_schedule(&pi)?, &read_schedule(&sigma)?)?;
            if let Some(path) = &out_pi {
                write_schedule(path, &p)?;
            }
            if let Some(path) = &out_sigma {
                write_schedule(path, &s)?;
            }
            print_json(&json!({ "pi": ScheduleFile::from(&p), "sigma": ScheduleFile::from(&s) }));
        }
        Command::Rebalance { schedule, out } => {
            let s: Schedule = rebalance(&read_schedule(&schedule)?)?;
            emit(out.as_deref(), &ScheduleFile::from(&s))?;
            if out.is_some() {
                print_json(&json!({ "loads": load_vector(&s) }));
            }
        }
        Command::Gen(GenCommand::Random {
            seed,
            n,
            m,
            max_width,
            max_lo,
            out,
        }) => {
            if n == 0 || m == 0 || max_width < 0 || max_lo < 0 {
                return Err(CliError::Usage(
                    "n and m must be positive, bounds nonnegative".into(),
                ));
            }
            let inst = gen_random_instance(seed, n, m, max_width, max_lo);
            match &out {
                Some(path) => write_instance(path, &inst)?,
                None => emit(None, &regret_sched::formats::InstanceFile::from(&inst))?,
            }
        }
        Command::Gen(GenCommand::ThreePToFourPP { input, out }) => {
            let four = gen_4pp_from_3partition(&read_partition(&input)?)?;
            emit(out.as_deref(), &FourPPFile::from(&four))?;
        }
        Command::Gen(GenCommand::FourPPToSched { input, out }) => {
            let generated = gen_sched_from_4pp(&read_four_pp(&input)?)?;
            match &out {
                Some(path) => write_instance(path, &generated.instance)?,
                None => emit(
                    None,
                    &regret_sched::formats::InstanceFile::from(&generated.instance),
                )?,
            }
            emit(None, &ThresholdFile::from(&generated))?;
        }
        Command::Decide { problem, input } => match problem {
            Problem::ThreePartition => {
                let answer = decide_3partition(&read_partition(&input)?)?;
                print_json(
                    &json!({ "answer": if answer.is_some() { "yes" } else { "no" }, "triplets": answer }),
                );
            }
            Problem::FourPP => {
                let answer = decide_4pp(&read_four_pp(&input)?)?;
                print_json(&json!({
                    "answer": if answer.is_some() { "yes" } else { "no" },
                    "witness": answer.as_ref().map(WitnessFile::from),
                }));
            }
        },
        Command::Verify {
            suite,
            trials,
            seed,
            input,
            exhaustive,
        } => {
            if (input.is_some() || exhaustive) && suite != Suite::Theorem2 {
                return Err(CliError::Usage(
                    "--in and --exhaustive apply to theorem2 only".into(),
                ));
            }
            let opts = VerifyOptions {
                trials,
                seed,
                four_pp: input.as_deref().map(read_four_pp).transpose()?,
                exhaustive,
            };
            let report = run_suite(suite, &opts)?;
            for line in report.json_lines() {
                println!("{line}");
            }
            eprintln!("{}", report.summary());
            return Ok(report.pass());
        }
        Command::Bench {
            n_min,
            n_max,
            machines,
            trials,
            seed,
            max_width,
            max_lo,
            format,
        } => {
            let spec = BenchSpec {
                n_min,
                n_max,
                machines,
                trials,
                seed,
                max_width,
                max_lo,
            };
            if format == Format::Csv {
                println!("{CSV_HEADER}");
            }
            run_bench(&spec, |row| match format {
                Format::Csv => println!("{}", row.csv()),
                Format::Json => println!("{}", serde_json::to_string(row).expect("serializable")),
            })?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {}", CliError::from(e));
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
