//! Line-delimited JSON wire protocol between the harness and an agent.
//!
//! Each message is one JSON object on one line. The harness sends a
//! request and waits for the response carrying the same `request_id`;
//! responses with unknown ids are stale (for example a late answer after
//! a timeout) and are discarded. Everything an agent needs is inlined in
//! the request, so agents can be stateless.

use serde::{Deserialize, Serialize};
use stabbench_core::circuit::CostTuple;
use stabbench_core::code::CodeInstance;
use stabbench_core::score::{score_serde_opt, Score, Task};

pub const PROTOCOL_VERSION: u32 = 1;

/// Task-specific payload. `generators` are sparse Pauli literals like
/// `+X0*Z3`; baselines are present for the tasks that compare against
/// one. `feedback` explains the previous failed attempt, if any.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TaskInputs {
    pub num_qubits: u32,
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distance: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub baseline_circuit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub baseline_cost: Option<CostTuple>,
    #[serde(
        with = "score_serde_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub baseline_ft: Option<Score>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feedback: Option<serde_json::Value>,
}

impl TaskInputs {
    pub fn from_instance(inst: &CodeInstance) -> TaskInputs {
        TaskInputs {
            num_qubits: inst.num_qubits,
            generators: inst.generators.iter().map(|g| g.emit_sparse()).collect(),
            distance: Some(inst.distance),
            baseline_circuit: None,
            baseline_cost: None,
            baseline_ft: None,
            feedback: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WireRequest {
    #[serde(rename = "type")]
    pub kind: String,
    pub protocol: u32,
    pub request_id: String,
    pub instance_id: String,
    pub task: Task,
    pub inputs: TaskInputs,
    pub remaining_attempts: u32,
}

impl WireRequest {
    pub fn new(
        request_id: String,
        instance_id: String,
        task: Task,
        inputs: TaskInputs,
        remaining_attempts: u32,
    ) -> WireRequest {
        WireRequest {
            kind: "request".into(),
            protocol: PROTOCOL_VERSION,
            request_id,
            instance_id,
            task,
            inputs,
            remaining_attempts,
        }
    }
}

/// An agent either submits circuit text or gives up on the instance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WireResponse {
    #[serde(rename = "type")]
    pub kind: String,
    pub request_id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub circuit: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub give_up: bool,
}

impl WireResponse {
    pub fn circuit(request_id: &str, text: impl Into<String>) -> WireResponse {
        WireResponse {
            kind: "response".into(),
            request_id: request_id.into(),
            circuit: Some(text.into()),
            give_up: false,
        }
    }

    pub fn give_up(request_id: &str) -> WireResponse {
        WireResponse {
            kind: "response".into(),
            request_id: request_id.into(),
            circuit: None,
            give_up: true,
        }
    }
}

pub fn encode_line<T: Serialize>(msg: &T) -> String {
    let mut line = serde_json::to_string(msg).expect("protocol messages always serialize");
    debug_assert!(!line.contains('\n'));
    line.push('\n');
    line
}

pub fn parse_request(line: &str) -> Result<WireRequest, String> {
    let req: WireRequest =
        serde_json::from_str(line.trim()).map_err(|e| format!("malformed request: {e}"))?;
    if req.kind != "request" {
        return Err(format!("expected a request, got type {:?}", req.kind));
    }
    if req.protocol != PROTOCOL_VERSION {
        return Err(format!(
            "protocol version {} not supported (this build speaks {})",
            req.protocol, PROTOCOL_VERSION
        ));
    }
    Ok(req)
}

pub fn parse_response(line: &str) -> Result<WireResponse, String> {
    let resp: WireResponse =
        serde_json::from_str(line.trim()).map_err(|e| format!("malformed response: {e}"))?;
    if resp.kind != "response" {
        return Err(format!("expected a response, got type {:?}", resp.kind));
    }
    if resp.circuit.is_none() && !resp.give_up {
        return Err("response carries neither a circuit nor give_up".into());
    }
    Ok(resp)
}
