//! Per-submission evaluation: turn a circuit text into a verdict.
//!
//! Every rejection carries machine-readable feedback so an agent can
//! revise its next attempt. Feedback is a JSON object with a `kind`
//! field and kind-specific details; successful evaluations carry none.

use serde_json::{json, Value};
use stabbench_core::circuit::{cost_of, parse_circuit, CircuitIR, CostTuple};
use stabbench_core::code::CodeInstance;
use stabbench_core::error::Error;
use stabbench_core::fault::{ft_score_cancellable, FTReport};
use stabbench_core::score::{
    b1_success, b2_improvement, b2_quality, b3_validity_and_quality, score_int, score_to_f64,
    Score, Task,
};
use stabbench_core::synth::{make_b2_baseline, make_b3_baseline};
use stabbench_core::tableau::{check_stabilizers, GenStatus, StabReport};
use std::sync::atomic::AtomicBool;

/// What a task is measured against. B1 needs no baseline; B2 carries the
/// inflated synthesis circuit and its cost; B3 carries the bare prep and
/// its fault report.
pub enum TaskBaseline {
    B1,
    B2 { circuit: CircuitIR, cost: CostTuple },
    B3 { circuit: CircuitIR, report: FTReport },
}

impl TaskBaseline {
    pub fn prepare(task: Task, code: &CodeInstance) -> stabbench_core::error::Result<TaskBaseline> {
        Ok(match task {
            Task::B1 => TaskBaseline::B1,
            Task::B2 => {
                let (circuit, cost) = make_b2_baseline(code)?;
                TaskBaseline::B2 { circuit, cost }
            }
            Task::B3 => {
                let (circuit, report) = make_b3_baseline(code)?;
                TaskBaseline::B3 { circuit, report }
            }
        })
    }

    /// A B3 instance whose bare prep already has no dangerous fault
    /// offers nothing to improve; runs skip it.
    pub fn has_headroom(&self) -> bool {
        match self {
            TaskBaseline::B3 { report, .. } => report.dangerous_count > 0,
            _ => true,
        }
    }

}

pub struct Evaluation {
    pub success: bool,
    pub quality: Score,
    pub satisfied_generators: u32,
    pub candidate_cost: Option<CostTuple>,
    pub ft: Option<Score>,
    /// Present exactly when `success` is false.
    pub feedback: Option<Value>,
}

impl Evaluation {
    fn rejected(feedback: Value) -> Evaluation {
        Evaluation {
            success: false,
            quality: score_int(0),
            satisfied_generators: 0,
            candidate_cost: None,
            ft: None,
            feedback: Some(feedback),
        }
    }
}

fn failing_generator_indices(report: &StabReport) -> Vec<usize> {
    report
        .statuses
        .iter()
        .enumerate()
        .filter(|(_, s)| !matches!(s, GenStatus::Pass))
        .map(|(i, _)| i)
        .take(8)
        .collect()
}

fn unsatisfied_feedback(report: &StabReport, total: usize) -> Value {
    json!({
        "kind": "generators_unsatisfied",
        "satisfied": report.satisfied_count,
        "total": total,
        "failing_indices": failing_generator_indices(report),
    })
}

fn cost_json(c: &CostTuple) -> Value {
    json!({ "g2q": c.g2q, "depth": c.depth })
}

/// Evaluate one submitted circuit against one instance and task.
///
/// Only cancellation propagates as an error; every other defect in the
/// submission comes back as a failed [`Evaluation`] with feedback.
pub fn evaluate_submission(
    task: Task,
    code: &CodeInstance,
    baseline: &TaskBaseline,
    circuit_text: &str,
    cancel: &AtomicBool,
) -> stabbench_core::error::Result<Evaluation> {
    let circuit = match parse_circuit(circuit_text) {
        Ok(c) => c,
        Err(e) => {
            return Ok(Evaluation::rejected(json!({
                "kind": "parse_error",
                "message": e.to_string(),
            })))
        }
    };
    match (task, baseline) {
        (Task::B1, TaskBaseline::B1) => evaluate_b1(code, &circuit),
        (Task::B2, TaskBaseline::B2 { cost, .. }) => evaluate_b2(code, cost, &circuit),
        (Task::B3, TaskBaseline::B3 { report, .. }) => evaluate_b3(code, report, &circuit, cancel),
        _ => panic!("baseline prepared for a different task"),
    }
}

fn evaluate_b1(code: &CodeInstance, circuit: &CircuitIR) -> stabbench_core::error::Result<Evaluation> {
    let report = match check_stabilizers(circuit, &code.generators) {
        Ok(r) => r,
        Err(e) => return structural_rejection(e),
    };
    let (success, quality) = b1_success(&report);
    Ok(Evaluation {
        success,
        quality: if success { quality } else { score_int(0) },
        satisfied_generators: report.satisfied_count,
        candidate_cost: Some(cost_of(circuit)),
        ft: None,
        feedback: if success {
            None
        } else {
            Some(unsatisfied_feedback(&report, code.generators.len()))
        },
    })
}

fn evaluate_b2(
    code: &CodeInstance,
    baseline_cost: &CostTuple,
    circuit: &CircuitIR,
) -> stabbench_core::error::Result<Evaluation> {
    // B2 asks for a cheaper circuit on the same qubits: helpers would
    // make the cost comparison meaningless.
    let mut helpers: Vec<u32> = circuit
        .instructions
        .iter()
        .flat_map(|inst| inst.targets.iter().copied())
        .filter(|&q| q >= code.num_qubits)
        .collect();
    helpers.sort_unstable();
    helpers.dedup();
    if !helpers.is_empty() {
        return Ok(Evaluation::rejected(json!({
            "kind": "helper_qubits_forbidden",
            "allowed_qubits": code.num_qubits,
            "offending_targets": helpers,
        })));
    }
    let report = match check_stabilizers(circuit, &code.generators) {
        Ok(r) => r,
        Err(e) => return structural_rejection(e),
    };
    let candidate_cost = cost_of(circuit);
    if !report.valid {
        let mut eval = Evaluation::rejected(unsatisfied_feedback(&report, code.generators.len()));
        eval.satisfied_generators = report.satisfied_count;
        eval.candidate_cost = Some(candidate_cost);
        return Ok(eval);
    }
    let success = b2_improvement(&candidate_cost, baseline_cost);
    Ok(Evaluation {
        success,
        quality: if success {
            b2_quality(baseline_cost, &candidate_cost)
        } else {
            score_int(0)
        },
        satisfied_generators: report.satisfied_count,
        candidate_cost: Some(candidate_cost),
        ft: None,
        feedback: if success {
            None
        } else {
            Some(json!({
                "kind": "not_improved",
                "baseline_cost": cost_json(baseline_cost),
                "candidate_cost": cost_json(&candidate_cost),
            }))
        },
    })
}

fn evaluate_b3(
    code: &CodeInstance,
    baseline: &FTReport,
    circuit: &CircuitIR,
    cancel: &AtomicBool,
) -> stabbench_core::error::Result<Evaluation> {
    let stab_report = match check_stabilizers(circuit, &code.generators) {
        Ok(r) => r,
        Err(e) => return structural_rejection(e),
    };
    if !stab_report.valid {
        let mut eval =
            Evaluation::rejected(unsatisfied_feedback(&stab_report, code.generators.len()));
        eval.satisfied_generators = stab_report.satisfied_count;
        eval.candidate_cost = Some(cost_of(circuit));
        return Ok(eval);
    }
    let report = match ft_score_cancellable(circuit, code, cancel) {
        Ok(r) => r,
        Err(Error::Cancelled) => return Err(Error::Cancelled),
        Err(e) => return structural_rejection(e),
    };
    let (success, quality) = b3_validity_and_quality(&baseline.ft_score, &report.ft_score, &stab_report);
    Ok(Evaluation {
        success,
        quality: if success { quality } else { score_int(0) },
        satisfied_generators: stab_report.satisfied_count,
        candidate_cost: Some(cost_of(circuit)),
        ft: Some(report.ft_score.clone()),
        feedback: if success {
            None
        } else {
            Some(json!({
                "kind": "not_more_tolerant",
                "baseline_ft": score_to_f64(&baseline.ft_score),
                "candidate_ft": score_to_f64(&report.ft_score),
                "dangerous": report.dangerous_count,
                "flagged_dangerous": report.flagged_dangerous,
            }))
        },
    })
}

/// A submission the simulator itself refuses (bad targets, measuring a
/// data qubit, a flag that fires on the ideal state, ...).
fn structural_rejection(e: Error) -> stabbench_core::error::Result<Evaluation> {
    if matches!(e, Error::Cancelled) {
        return Err(Error::Cancelled);
    }
    Ok(Evaluation::rejected(json!({
        "kind": "invalid_candidate",
        "message": e.to_string(),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabbench_core::code::{build_base_code, Family, Params};
    use stabbench_core::synth::synthesize_prep;

    fn bell_like_code() -> CodeInstance {
        let mut params = Params::new();
        params.insert("m".into(), serde_json::json!(2));
        build_base_code(Family::Iceberg, &params).unwrap()
    }

    fn flag() -> AtomicBool {
        AtomicBool::new(false)
    }

    #[test]
    fn b1_accepts_reference_and_rejects_garbage() {
        let code = bell_like_code();
        let base = TaskBaseline::prepare(Task::B1, &code).unwrap();
        let prep = synthesize_prep(&code.generators).unwrap();
        let text = stabbench_core::circuit::emit_circuit(&prep);
        let ok = evaluate_submission(Task::B1, &code, &base, &text, &flag()).unwrap();
        assert!(ok.success);
        assert_eq!(ok.quality, score_int(1));
        assert_eq!(ok.satisfied_generators as usize, code.generators.len());

        let bad = evaluate_submission(Task::B1, &code, &base, "H 0", &flag()).unwrap();
        assert!(!bad.success);
        let fb = bad.feedback.unwrap();
        assert_eq!(fb["kind"], "generators_unsatisfied");

        let unparsable = evaluate_submission(Task::B1, &code, &base, "Q 9 #", &flag()).unwrap();
        assert_eq!(unparsable.feedback.unwrap()["kind"], "parse_error");
    }

    #[test]
    fn b2_enforces_helper_rule_and_strict_improvement() {
        let code = bell_like_code();
        let base = TaskBaseline::prepare(Task::B2, &code).unwrap();
        // The uninflated prep beats the tripled baseline.
        let prep = synthesize_prep(&code.generators).unwrap();
        let text = stabbench_core::circuit::emit_circuit(&prep);
        let ok = evaluate_submission(Task::B2, &code, &base, &text, &flag()).unwrap();
        assert!(ok.success);
        assert!(ok.quality > score_int(0));
        assert!(ok.quality <= score_int(1));

        // Same circuit shifted onto a helper qubit: rejected before any
        // simulation runs.
        let helper = evaluate_submission(
            Task::B2,
            &code,
            &base,
            &format!("{text}H {}\n", code.num_qubits),
            &flag(),
        )
        .unwrap();
        assert_eq!(helper.feedback.unwrap()["kind"], "helper_qubits_forbidden");

        // Submitting the baseline itself is not an improvement.
        let (baseline_circuit, _) = make_b2_baseline(&code).unwrap();
        let same = evaluate_submission(
            Task::B2,
            &code,
            &base,
            &stabbench_core::circuit::emit_circuit(&baseline_circuit),
            &flag(),
        )
        .unwrap();
        assert!(!same.success);
        assert_eq!(same.feedback.unwrap()["kind"], "not_improved");
    }

    #[test]
    fn b3_compares_fault_scores() {
        let code = bell_like_code();
        let base = TaskBaseline::prepare(Task::B3, &code).unwrap();
        assert!(base.has_headroom());
        // Resubmitting the bare prep preserves the group but cannot beat
        // its own report.
        let prep = synthesize_prep(&code.generators).unwrap();
        let text = stabbench_core::circuit::emit_circuit(&prep);
        let eval = evaluate_submission(Task::B3, &code, &base, &text, &flag()).unwrap();
        assert!(!eval.success);
        assert!(eval.ft.is_some());
        assert_eq!(eval.feedback.unwrap()["kind"], "not_more_tolerant");
    }

    #[test]
    fn b3_rejects_gadgets_that_flag_the_ideal_state() {
        let code = bell_like_code();
        let base = TaskBaseline::prepare(Task::B3, &code).unwrap();
        let prep = synthesize_prep(&code.generators).unwrap();
        let n = code.num_qubits;
        // A flag prepared in |1> fires with no fault present.
        let text = format!(
            "{}R {n}\nX {n}\nM {n}\n",
            stabbench_core::circuit::emit_circuit(&prep)
        );
        let eval = evaluate_submission(Task::B3, &code, &base, &text, &flag()).unwrap();
        assert!(!eval.success);
        assert_eq!(eval.feedback.unwrap()["kind"], "invalid_candidate");
    }
}
