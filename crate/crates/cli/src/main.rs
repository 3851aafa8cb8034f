use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use fondgr::bench::{self, BenchConfig};
use fondgr::compile::{self, CompileError, EmitMode};
use fondgr::fond;
use fondgr::logic::parse_formula;
use fondgr::par::{self, Parallelism};
use fondgr::planner::{self, PlanError, PlanOptions};
use fondgr::recognizer::{self, RecognizerOptions};

#[derive(Parser)]
#[command(name = "fondgr", version, about = "Temporal goal recognition in FOND domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a temporal goal into an augmented FOND task and write PDDL.
    Compile {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        goal: String,
        /// Emit automaton predicates lifted over the goal's objects.
        #[arg(long)]
        parametric: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "task")]
        task: String,
        #[arg(long, default_value = "phi0")]
        goal_id: String,
    },
    /// Solve for a strong-cyclic policy and print it.
    Plan {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        /// Temporal goal; the problem's own goal is used when omitted.
        #[arg(long)]
        goal: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Recognize the goal behind an observation sequence.
    Recognize {
        #[arg(long)]
        bundle: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Generate datasets and write metrics as CSV and JSON.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
        /// Record wall-clock times (outputs are then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 8.0)]
        memory_gb: f64,
    },
}

#[derive(Args)]
struct Limits {
    /// `builtin` or `exec:<command>`.
    #[arg(long, env = "FONDGR_PLANNER", default_value = "builtin")]
    planner: String,
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    #[arg(long, default_value_t = 8.0)]
    memory_gb: f64,
}

enum Failure {
    Usage(String),
    Unsolvable(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Unsolvable(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Unsolvable(m) | Failure::Internal(m) => m,
        }
    }
}

fn plan_failure(e: PlanError) -> Failure {
    match e {
        PlanError::Unsolvable | PlanError::Timeout | PlanError::StateCap { .. } => {
            Failure::Unsolvable(e.to_string())
        }
        PlanError::NoGoal => Failure::Usage(e.to_string()),
        _ => Failure::Internal(e.to_string()),
    }
}

fn compile_failure(e: CompileError) -> Failure {
    match e {
        CompileError::Automaton(fondgr::automata::AutomatonError::TooManyStates { .. }) => {
            Failure::Unsolvable(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn limit_memory(gb: f64) {
    if gb <= 0.0 {
        return;
    }
    let bytes = (gb * 1024.0 * 1024.0 * 1024.0) as libc::rlim_t;
    let lim = libc::rlimit {
        rlim_cur: bytes,
        rlim_max: bytes,
    };
    // SAFETY: setrlimit only reads the struct we pass.
    let rc = unsafe { libc::setrlimit(libc::RLIMIT_AS, &lim) };
    if rc != 0 {
        eprintln!("warning: could not set the memory limit");
    }
}

fn load_task(domain: &Path, problem: &Path) -> Result<(fond::Domain, fond::ProblemInstance), Failure> {
    let d = fond::parse_domain(&read(domain)?).map_err(|e| Failure::Usage(format!("{}: {e}", domain.display())))?;
    let p = fond::parse_problem(&read(problem)?, &d)
        .map_err(|e| Failure::Usage(format!("{}: {e}", problem.display())))?;
    Ok((d, p))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compile {
            domain,
            problem,
            goal,
            parametric,
            out,
            task,
            goal_id,
        } => {
            let (d, p) = load_task(&domain, &problem)?;
            let phi = parse_formula(&goal).map_err(|e| Failure::Usage(e.to_string()))?;
            let aug = compile::compile_goal(&d, &p, &phi).map_err(compile_failure)?;
            let mode = if parametric {
                EmitMode::Parametric
            } else {
                EmitMode::Grounded
            };
            let (dt, pt) = aug.emit_pddl(mode);
            std::fs::create_dir_all(&out).map_err(|e| Failure::Internal(e.to_string()))?;
            let (dn, pn) = compile::file_names(&task, &goal_id);
            write(&out.join(&dn), &dt)?;
            write(&out.join(&pn), &pt)?;
            eprintln!(
                "wrote {} and {} ({} automaton states)",
                dn,
                pn,
                aug.automaton.num_states()
            );
            Ok(())
        }
        Command::Plan {
            domain,
            problem,
            goal,
            out,
            limits,
        } => {
            limit_memory(limits.memory_gb);
            let (d, p) = load_task(&domain, &problem)?;
            let opts = PlanOptions::with_timeout(Duration::from_secs_f64(limits.timeout));
            let (text, states) = match goal {
                Some(g) => {
                    let phi = parse_formula(&g).map_err(|e| Failure::Usage(e.to_string()))?;
                    let aug = compile::compile_goal(&d, &p, &phi).map_err(compile_failure)?;
                    let pl = planner::planner_from_spec(&limits.planner)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    let policy = pl.solve(&aug, &opts).map_err(plan_failure)?;
                    (policy.to_text(&aug.model), policy.len())
                }
                None => {
                    let m = fond::ground(&d, &p).map_err(|e| Failure::Usage(e.to_string()))?;
                    let g = m
                        .goal
                        .clone()
                        .ok_or_else(|| Failure::Usage("problem has no goal; pass --goal".into()))?;
                    let policy = planner::solve_strong_cyclic(&m, &g, &opts).map_err(plan_failure)?;
                    (policy.to_text(&m), policy.len())
                }
            };
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            eprintln!("policy with {states} entries");
            Ok(())
        }
        Command::Recognize { bundle, limits } => {
            limit_memory(limits.memory_gb);
            let rp = recognizer::load_bundle(&bundle).map_err(|e| Failure::Usage(e.to_string()))?;
            let pl = planner::planner_from_spec(&limits.planner)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = RecognizerOptions {
                timeout: Some(Duration::from_secs_f64(limits.timeout)),
                parallelism: Parallelism::Sequential,
                ..Default::default()
            };
            let result = recognizer::recognize_with(&rp, pl.as_ref(), &opts)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let json = serde_json::to_string_pretty(&result).map_err(|e| Failure::Internal(e.to_string()))?;
            println!("{json}");
            Ok(())
        }
        Command::Bench {
            config,
            seed,
            out,
            jobs,
            timing,
            memory_gb,
        } => {
            limit_memory(memory_gb);
            let mut cfg = match config {
                Some(path) => serde_json::from_str::<BenchConfig>(&read(&path)?)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => BenchConfig::standard(0),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.record_timing |= timing;
            match jobs {
                Some(1) => cfg.parallelism = Parallelism::Sequential,
                Some(n) => par::set_threads(n),
                None => {}
            }
            let report = bench::run(&cfg).map_err(|e| match e {
                bench::BenchError::Config(_) => Failure::Usage(e.to_string()),
                _ => Failure::Internal(e.to_string()),
            })?;
            std::fs::create_dir_all(&out).map_err(|e| Failure::Internal(e.to_string()))?;
            write(&out.join("bench.csv"), &report.to_csv())?;
            write(&out.join("bench.json"), &report.to_json())?;
            eprint!("{}", report.to_csv());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
