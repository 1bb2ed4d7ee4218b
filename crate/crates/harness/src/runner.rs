//! Drives a run: instances through an agent under attempts and a clock.
//!
//! Each instance gets a wall-clock budget starting after its baseline is
//! prepared. A watchdog thread raises a cancel flag at the deadline so a
//! long fault enumeration aborts cooperatively; agent waits are bounded
//! by the same deadline. Within the budget the agent gets up to
//! `max_attempts` submissions, each failure answered with feedback. An
//! instance ends early on success, on give-up, or when the agent repeats
//! a submission verbatim (it has stopped adapting).

use crate::agent::Agent;
use crate::protocol::{TaskInputs, WireRequest};
use crate::record::{
    write_json_atomic, AttemptRecord, InstanceRecord, Outcome, RunFile, RunMeta, RUN_FILE_VERSION,
};
use crate::tools::{evaluate_submission, TaskBaseline};
use anyhow::{Context, Result};
use stabbench_core::circuit::emit_circuit;
use stabbench_core::code::{CodeInstance, LoadedSuite};
use stabbench_core::error::Error;
use stabbench_core::score::{score_int, score_to_f64, InstanceResult, Task};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub struct RunConfig {
    pub task: Task,
    pub max_attempts: u32,
    pub timeout: Duration,
    pub workers: usize,
    /// Run only the first n suite instances.
    pub limit: Option<usize>,
    pub out_dir: PathBuf,
}

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "STABBENCH_WORKERS";

pub fn default_workers() -> usize {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

static REQUEST_COUNTER: AtomicU64 = AtomicU64::new(1);

fn next_request_id(instance_id: &str, attempt: u32) -> String {
    let serial = REQUEST_COUNTER.fetch_add(1, Ordering::Relaxed);
    format!("{instance_id}.a{attempt}.{serial}")
}

fn failed_result(code: &CodeInstance, task: Task, attempts_used: u32) -> InstanceResult {
    InstanceResult {
        code_id: code.id.clone(),
        task,
        success: false,
        quality: score_int(0),
        satisfied_generators: 0,
        candidate_cost: None,
        ft: None,
        attempts_used,
    }
}

/// Everything one instance produces; `None` when the instance is
/// excluded from the run (a B3 baseline with nothing to improve).
fn run_instance(
    code: &CodeInstance,
    agent: &dyn Agent,
    cfg: &RunConfig,
) -> Result<Option<InstanceRecord>> {
    let baseline = TaskBaseline::prepare(cfg.task, code)
        .with_context(|| format!("preparing the {} baseline for {}", cfg.task, code.id))?;
    if !baseline.has_headroom() {
        eprintln!(
            "note: {} excluded from B3, its baseline has no dangerous fault",
            code.id
        );
        return Ok(None);
    }

    let deadline = Instant::now() + cfg.timeout;
    let cancel = Arc::new(AtomicBool::new(false));
    let finished = Arc::new(AtomicBool::new(false));
    {
        let cancel = Arc::clone(&cancel);
        let finished = Arc::clone(&finished);
        std::thread::spawn(move || {
            while !finished.load(Ordering::Relaxed) {
                if Instant::now() >= deadline {
                    cancel.store(true, Ordering::Relaxed);
                    return;
                }
                std::thread::sleep(Duration::from_millis(20));
            }
        });
    }
    let record = drive_attempts(code, agent, cfg, &baseline, deadline, &cancel);
    finished.store(true, Ordering::Relaxed);
    record
}

fn drive_attempts(
    code: &CodeInstance,
    agent: &dyn Agent,
    cfg: &RunConfig,
    baseline: &TaskBaseline,
    deadline: Instant,
    cancel: &AtomicBool,
) -> Result<Option<InstanceRecord>> {
    let mut inputs = TaskInputs::from_instance(code);
    match baseline {
        TaskBaseline::B1 => {}
        TaskBaseline::B2 { circuit, cost } => {
            inputs.baseline_circuit = Some(emit_circuit(circuit));
            inputs.baseline_cost = Some(*cost);
        }
        TaskBaseline::B3 { circuit, report } => {
            inputs.baseline_circuit = Some(emit_circuit(circuit));
            inputs.baseline_ft = Some(report.ft_score.clone());
        }
    }

    let mut attempts: Vec<AttemptRecord> = Vec::new();
    let mut outcome = Outcome::Failed;
    let mut result = failed_result(code, cfg.task, 0);
    let mut previous_circuit: Option<String> = None;

    for attempt in 1..=cfg.max_attempts {
        if Instant::now() >= deadline {
            outcome = Outcome::Timeout;
            break;
        }
        let req = WireRequest::new(
            next_request_id(&code.id, attempt),
            code.id.clone(),
            cfg.task,
            inputs.clone(),
            cfg.max_attempts - attempt + 1,
        );
        let resp = match agent.request(&req, deadline) {
            Ok(r) => r,
            Err(e) => {
                outcome = Outcome::AgentError;
                result.attempts_used = attempt;
                attempts.push(AttemptRecord {
                    attempt,
                    circuit: None,
                    gave_up: false,
                    success: false,
                    feedback: Some(serde_json::json!({
                        "kind": "agent_error",
                        "message": e.to_string(),
                    })),
                });
                break;
            }
        };
        if resp.give_up {
            outcome = Outcome::GaveUp;
            result.attempts_used = attempt;
            attempts.push(AttemptRecord {
                attempt,
                circuit: None,
                gave_up: true,
                success: false,
                feedback: None,
            });
            break;
        }
        let text = resp.circuit.unwrap_or_default();
        if previous_circuit.as_deref() == Some(text.as_str()) {
            outcome = Outcome::Failed;
            result.attempts_used = attempt;
            attempts.push(AttemptRecord {
                attempt,
                circuit: Some(text),
                gave_up: false,
                success: false,
                feedback: Some(serde_json::json!({ "kind": "repeated_submission" })),
            });
            break;
        }
        let eval = match evaluate_submission(cfg.task, code, baseline, &text, cancel) {
            Ok(eval) => eval,
            Err(Error::Cancelled) => {
                outcome = Outcome::Timeout;
                result.attempts_used = attempt;
                attempts.push(AttemptRecord {
                    attempt,
                    circuit: Some(text),
                    gave_up: false,
                    success: false,
                    feedback: Some(serde_json::json!({ "kind": "timeout" })),
                });
                break;
            }
            Err(e) => return Err(e).context("evaluating a submission"),
        };
        attempts.push(AttemptRecord {
            attempt,
            circuit: Some(text.clone()),
            gave_up: false,
            success: eval.success,
            feedback: eval.feedback.clone(),
        });
        result = InstanceResult {
            code_id: code.id.clone(),
            task: cfg.task,
            success: eval.success,
            quality: eval.quality,
            satisfied_generators: eval.satisfied_generators,
            candidate_cost: eval.candidate_cost,
            ft: eval.ft,
            attempts_used: attempt,
        };
        if eval.success {
            outcome = Outcome::Success;
            break;
        }
        inputs.feedback = eval.feedback;
        previous_circuit = Some(text);
    }

    Ok(Some(InstanceRecord {
        instance_id: code.id.clone(),
        task: cfg.task,
        outcome,
        result,
        attempts,
    }))
}

pub fn run_suite(
    suite: &LoadedSuite,
    agent: Arc<dyn Agent>,
    cfg: &RunConfig,
) -> Result<RunFile> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let records_dir = cfg.out_dir.join("records");
    std::fs::create_dir_all(&records_dir)
        .with_context(|| format!("creating {}", records_dir.display()))?;

    let selected: Vec<&CodeInstance> = match cfg.limit {
        Some(n) => suite.instances.iter().take(n).collect(),
        None => suite.instances.iter().collect(),
    };
    let queue: Mutex<std::collections::VecDeque<(usize, &CodeInstance)>> =
        Mutex::new(selected.iter().copied().enumerate().collect());
    let collected: Mutex<Vec<(usize, InstanceRecord)>> = Mutex::new(Vec::new());
    let failures: Mutex<Vec<anyhow::Error>> = Mutex::new(Vec::new());

    let workers = cfg.workers.max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop_front();
                let Some((index, code)) = job else { return };
                match run_instance(code, agent.as_ref(), cfg) {
                    Ok(Some(record)) => {
                        let path = records_dir.join(format!("{}.json", record.instance_id));
                        if let Err(e) = write_json_atomic(&path, &record) {
                            failures.lock().unwrap().push(e);
                            return;
                        }
                        collected.lock().unwrap().push((index, record));
                    }
                    Ok(None) => {}
                    Err(e) => {
                        failures.lock().unwrap().push(e);
                        return;
                    }
                }
            });
        }
    });

    let failures = failures.into_inner().unwrap();
    if let Some(e) = failures.into_iter().next() {
        return Err(e);
    }
    let mut records = collected.into_inner().unwrap();
    records.sort_by_key(|(index, _)| *index);

    let results: Vec<InstanceResult> = records.iter().map(|(_, r)| r.result.clone()).collect();
    let run = RunFile {
        version: RUN_FILE_VERSION,
        meta: RunMeta {
            agent: agent.describe(),
            task: cfg.task,
            max_attempts: cfg.max_attempts,
            timeout_secs: cfg.timeout.as_secs(),
            workers,
            suite_codes: suite.instances.len(),
            instances_run: results.len(),
            started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
        },
        results,
    };
    write_json_atomic(&cfg.out_dir.join("run.json"), &run)?;
    Ok(run)
}

/// One-line human summary printed after a run.
pub fn summarize(run: &RunFile, out_dir: &Path) -> String {
    let successes = run.results.iter().filter(|r| r.success).count();
    let quality = run
        .results
        .iter()
        .filter(|r| r.success)
        .fold(0.0, |acc, r| acc + score_to_f64(&r.quality));
    format!(
        "{} on {}: {}/{} instances succeeded (summed quality {:.3}); artifacts in {}",
        run.meta.agent,
        run.meta.task,
        successes,
        run.meta.instances_run,
        quality,
        out_dir.display()
    )
}
