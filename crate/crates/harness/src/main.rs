//! Command-line entry point for the benchmark harness.

use anyhow::{anyhow, bail, Context, Result};
use stabbench::{agent, record, report, runner, suite};
use clap::{Args, Parser, Subcommand};
use stabbench_core::circuit::{cost_of, parse_circuit};
use stabbench_core::code::{validate_code, CodeInstance, LoadedSuite};
use stabbench_core::fault::ft_score;
use stabbench_core::score::{aggregate, score_to_f64, Task};
use stabbench_core::synth::synthesize_prep;
use stabbench_core::tableau::check_stabilizers;
use std::path::{Path, PathBuf};
use std::time::Duration;

#[derive(Parser)]
#[command(name = "stabbench", version, about = "Stabilizer-circuit benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SuiteArg {
    /// Suite file to use instead of the built-in default suite.
    #[arg(long, global = true)]
    suite: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate, or summarize the code suite.
    Suite {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Inspect a single code instance.
    Instance {
        #[command(subcommand)]
        action: InstanceAction,
    },
    /// Run the verification oracles directly on a circuit file.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Run an agent over the suite for one task.
    Run {
        #[command(flatten)]
        suite: SuiteArg,
        /// Task to run: B1, B2, or B3.
        #[arg(long)]
        task: String,
        /// Agent: reference, null, cmd:<command>, or sock:<addr>.
        #[arg(long)]
        agent: String,
        /// Submission attempts per instance.
        #[arg(long, default_value_t = 3)]
        attempts: u32,
        /// Wall-clock seconds per instance.
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Output directory for run artifacts.
        #[arg(long)]
        out: PathBuf,
        /// Run only the first n suite instances.
        #[arg(long)]
        limit: Option<usize>,
        /// Parallel instance workers.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Score a finished run.
    Score {
        #[command(flatten)]
        suite: SuiteArg,
        #[arg(long)]
        run_file: PathBuf,
        /// Equal-width weight buckets in the breakdown (0 disables).
        #[arg(long, default_value_t = 6)]
        buckets: usize,
        /// Print the full score report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the bucket table of a finished run as CSV.
    Report {
        #[command(flatten)]
        suite: SuiteArg,
        #[arg(long)]
        run_file: PathBuf,
        #[arg(long, default_value_t = 6)]
        buckets: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve a built-in agent over stdin/stdout (wire protocol).
    #[command(hide = true)]
    Agent {
        #[arg(long)]
        kind: String,
    },
}

#[derive(Subcommand)]
enum SuiteAction {
    /// Resolve the suite and save it as a suite file.
    Build {
        #[command(flatten)]
        suite: SuiteArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-validate every instance.
    Validate {
        #[command(flatten)]
        suite: SuiteArg,
    },
    /// Print suite-wide counts and weight ranges.
    Stats {
        #[command(flatten)]
        suite: SuiteArg,
    },
}

#[derive(Subcommand)]
enum InstanceAction {
    /// Print one instance as JSON.
    Show {
        #[command(flatten)]
        suite: SuiteArg,
        id: String,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Check that a circuit prepares a code's stabilizer state.
    CheckStabilizers {
        #[command(flatten)]
        suite: SuiteArg,
        /// Circuit text file.
        #[arg(long)]
        circuit: PathBuf,
        /// Suite code id, or path to a code JSON file.
        #[arg(long)]
        code: String,
    },
    /// Exhaustive single-fault report for a preparation circuit.
    Ft {
        #[command(flatten)]
        suite: SuiteArg,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        code: String,
    },
    /// Synthesize a reference preparation circuit for a code.
    Optimize {
        #[command(flatten)]
        suite: SuiteArg,
        #[arg(long)]
        code: String,
    },
}

fn parse_task(s: &str) -> Result<Task> {
    match s.to_ascii_uppercase().as_str() {
        "B1" => Ok(Task::B1),
        "B2" => Ok(Task::B2),
        "B3" => Ok(Task::B3),
        _ => bail!("unknown task '{s}' (expected B1, B2, or B3)"),
    }
}

/// A `--code` argument: a path to a code JSON file if one exists there,
/// otherwise an id looked up in the suite.
fn resolve_code(suite_path: Option<&Path>, spec: &str) -> Result<CodeInstance> {
    let as_path = Path::new(spec);
    if as_path.is_file() {
        let text = std::fs::read_to_string(as_path)
            .with_context(|| format!("reading {}", as_path.display()))?;
        let code: CodeInstance = serde_json::from_str(&text)
            .with_context(|| format!("parsing {} as a code instance", as_path.display()))?;
        let report = validate_code(&code);
        if !report.valid {
            bail!("code in {} fails validation: {report:?}", as_path.display());
        }
        return Ok(code);
    }
    let suite = suite::resolve_suite(suite_path)?;
    suite
        .instances
        .into_iter()
        .find(|c| c.id == spec)
        .ok_or_else(|| anyhow!("no suite code with id '{spec}' (and no such file)"))
}

fn load_circuit(path: &Path) -> Result<stabbench_core::circuit::CircuitIR> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_circuit(&text).with_context(|| format!("parsing {}", path.display()))
}

fn suite_stats(suite: &LoadedSuite) -> String {
    let weights: Vec<u32> = suite
        .instances
        .iter()
        .map(|c| c.generators.len() as u32)
        .collect();
    let base = &weights[..suite.base_count];
    let mut out = String::new();
    out.push_str(&format!("codes: {}\n", suite.instances.len()));
    out.push_str(&format!("base codes: {}\n", suite.base_count));
    out.push_str(&format!(
        "products: {}\n",
        suite.instances.len() - suite.base_count
    ));
    out.push_str(&format!("total generators (k_max): {}\n", suite.total_generators));
    out.push_str(&format!(
        "declared total generators: {}\n",
        suite.declared_total_generators
    ));
    out.push_str(&format!(
        "base weight range: {}..{}\n",
        base.iter().min().unwrap(),
        base.iter().max().unwrap()
    ));
    out.push_str(&format!(
        "overall weight range: {}..{}\n",
        weights.iter().min().unwrap(),
        weights.iter().max().unwrap()
    ));
    if !suite.declared_matches() {
        out.push_str("warning: computed generator total differs from the declared total\n");
    }
    out
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Suite { action } => match action {
            SuiteAction::Build { suite, out } => {
                let loaded = suite::resolve_suite(suite.suite.as_deref())?;
                suite::save_suite(&loaded, &out)?;
                println!(
                    "wrote {} instances to {}",
                    loaded.instances.len(),
                    out.display()
                );
            }
            SuiteAction::Validate { suite } => {
                let loaded = suite::resolve_suite(suite.suite.as_deref())?;
                let mut bad = 0usize;
                for inst in &loaded.instances {
                    let report = validate_code(inst);
                    if !report.valid {
                        bad += 1;
                        println!("FAIL {}: {report:?}", inst.id);
                    }
                }
                println!(
                    "{}/{} instances valid",
                    loaded.instances.len() - bad,
                    loaded.instances.len()
                );
                if bad > 0 {
                    bail!("{bad} instances failed validation");
                }
            }
            SuiteAction::Stats { suite } => {
                let loaded = suite::resolve_suite(suite.suite.as_deref())?;
                print!("{}", suite_stats(&loaded));
            }
        },
        Command::Instance { action } => match action {
            InstanceAction::Show { suite, id } => {
                let code = resolve_code(suite.suite.as_deref(), &id)?;
                println!("{}", serde_json::to_string_pretty(&code)?);
            }
        },
        Command::Oracle { action } => match action {
            OracleAction::CheckStabilizers {
                suite,
                circuit,
                code,
            } => {
                let code = resolve_code(suite.suite.as_deref(), &code)?;
                let c = load_circuit(&circuit)?;
                let report = check_stabilizers(&c, &code.generators)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
                if !report.valid {
                    bail!(
                        "{}/{} generators satisfied",
                        report.satisfied_count,
                        code.generators.len()
                    );
                }
            }
            OracleAction::Ft {
                suite,
                circuit,
                code,
            } => {
                let code = resolve_code(suite.suite.as_deref(), &code)?;
                let c = load_circuit(&circuit)?;
                let report = ft_score(&c, &code)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
            OracleAction::Optimize { suite, code } => {
                let code = resolve_code(suite.suite.as_deref(), &code)?;
                let prep = synthesize_prep(&code.generators)?;
                let cost = cost_of(&prep);
                eprintln!("cost: {} two-qubit gates, depth {}", cost.g2q, cost.depth);
                print!("{}", stabbench_core::circuit::emit_circuit(&prep));
            }
        },
        Command::Run {
            suite,
            task,
            agent,
            attempts,
            timeout,
            out,
            limit,
            workers,
        } => {
            let task = parse_task(&task)?;
            let loaded = suite::resolve_suite(suite.suite.as_deref())?;
            let agent = agent::agent_from_arg(&agent)?;
            let cfg = runner::RunConfig {
                task,
                max_attempts: attempts.max(1),
                timeout: Duration::from_secs(timeout),
                workers: workers.unwrap_or_else(runner::default_workers),
                limit,
                out_dir: out.clone(),
            };
            let run = runner::run_suite(&loaded, agent, &cfg)?;
            println!("{}", runner::summarize(&run, &out));
        }
        Command::Score {
            suite,
            run_file,
            buckets,
            json,
        } => {
            let loaded = suite::resolve_suite(suite.suite.as_deref())?;
            let run = record::load_run_file(&run_file)?;
            let report = aggregate(&run.results, &loaded, buckets)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report::summary_text(&report));
                println!(
                    "normalized: {:.6}",
                    score_to_f64(&report.s_qual) / report.k_max as f64
                );
            }
        }
        Command::Report {
            suite,
            run_file,
            buckets,
            out,
        } => {
            let loaded = suite::resolve_suite(suite.suite.as_deref())?;
            let run = record::load_run_file(&run_file)?;
            let report = aggregate(&run.results, &loaded, buckets.max(1))?;
            let csv = report::bucket_csv(&report);
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::Agent { kind } => {
            agent::serve_stdio(&kind)?;
        }
    }
    Ok(())
}
