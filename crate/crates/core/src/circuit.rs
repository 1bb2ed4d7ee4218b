//! Circuit text format, IR, cost metrics, and ASAP layering.
//!
//! Grammar: one instruction per line, `GATE q0 q1 ...`, with `#` starting a
//! comment and blank lines ignored. Gate names are case-insensitive.
//! Two-qubit gates accept an even-length target list read as consecutive
//! pairs ("broadcast" form); single-qubit gates broadcast over each listed
//! target. TICK takes no targets and is ignored by all metrics.

use crate::error::{Error, Result};
use crate::gate::GateKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instruction {
    pub kind: GateKind,
    /// Original broadcast grouping is retained; see [`Instruction::applications`].
    pub targets: Vec<u32>,
}

impl Instruction {
    /// Expand the broadcast form into individual gate applications:
    /// one slice per pair for two-qubit kinds, one per target otherwise.
    pub fn applications(&self) -> impl Iterator<Item = &[u32]> {
        let chunk = if self.kind.is_two_qubit() { 2 } else { 1 };
        self.targets.chunks(chunk)
    }
}

/// One expanded gate application, as placed by the ASAP scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Application<'c> {
    pub kind: GateKind,
    pub qubits: &'c [u32],
    /// Index of the source instruction in `CircuitIR::instructions`.
    pub instruction: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitIR {
    pub num_qubits: u32,
    pub instructions: Vec<Instruction>,
    /// Original text when parsed from a source; not part of equality.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source_text: Option<String>,
}

impl PartialEq for CircuitIR {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.instructions == other.instructions
    }
}

impl Eq for CircuitIR {}

/// Lexicographic circuit cost: two-qubit gate count first, depth second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CostTuple {
    pub g2q: u64,
    pub depth: u64,
}

impl CircuitIR {
    pub fn empty() -> Self {
        CircuitIR {
            num_qubits: 0,
            instructions: Vec::new(),
            source_text: None,
        }
    }

    pub fn from_instructions(instructions: Vec<Instruction>) -> Self {
        let num_qubits = instructions
            .iter()
            .flat_map(|i| i.targets.iter())
            .map(|&q| q + 1)
            .max()
            .unwrap_or(0);
        CircuitIR {
            num_qubits,
            instructions,
            source_text: None,
        }
    }

    /// All expanded applications in program order.
    pub fn applications(&self) -> impl Iterator<Item = Application<'_>> {
        self.instructions
            .iter()
            .enumerate()
            .filter(|(_, inst)| inst.kind != GateKind::Tick)
            .flat_map(|(i, inst)| {
                inst.applications().map(move |qubits| Application {
                    kind: inst.kind,
                    qubits,
                    instruction: i,
                })
            })
    }

    /// Qubits measured by M applications, in program order. Positions in
    /// this vector are the stable measurement-record indices.
    pub fn measurement_record(&self) -> Vec<u32> {
        self.applications()
            .filter(|a| a.kind == GateKind::M)
            .map(|a| a.qubits[0])
            .collect()
    }

    /// Indices of qubits touched by at least one instruction.
    pub fn used_qubits(&self) -> Vec<u32> {
        let mut seen = vec![false; self.num_qubits as usize];
        for inst in &self.instructions {
            for &q in &inst.targets {
                seen[q as usize] = true;
            }
        }
        (0..self.num_qubits).filter(|&q| seen[q as usize]).collect()
    }

    pub fn cost(&self) -> CostTuple {
        CostTuple {
            g2q: two_qubit_gate_count(self),
            depth: depth(self),
        }
    }
}

/// Parse circuit text. Errors carry 1-based line numbers.
pub fn parse_circuit(text: &str) -> Result<CircuitIR> {
    let mut instructions = Vec::new();
    let mut num_qubits = 0u32;
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut tokens = line.split_whitespace();
        let Some(name) = tokens.next() else {
            continue;
        };
        let kind = GateKind::from_name(name).ok_or_else(|| {
            Error::parse(line_no, 1, format!("unknown gate name '{name}'"))
        })?;
        let mut targets = Vec::new();
        for tok in tokens {
            if tok.starts_with('-') {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("negative qubit index '{tok}'"),
                ));
            }
            let q: u32 = tok.parse().map_err(|_| {
                Error::parse(line_no, 1, format!("invalid qubit index '{tok}'"))
            })?;
            targets.push(q);
        }
        validate_instruction(kind, &targets, line_no)?;
        for &q in &targets {
            num_qubits = num_qubits.max(q + 1);
        }
        instructions.push(Instruction { kind, targets });
    }
    Ok(CircuitIR {
        num_qubits,
        instructions,
        source_text: Some(text.to_string()),
    })
}

fn validate_instruction(kind: GateKind, targets: &[u32], line_no: usize) -> Result<()> {
    match kind {
        GateKind::Tick => {
            if !targets.is_empty() {
                return Err(Error::parse(line_no, 1, "TICK takes no targets"));
            }
        }
        k if k.is_two_qubit() => {
            if targets.is_empty() || targets.len() % 2 != 0 {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!(
                        "{} needs an even, non-zero number of targets, got {}",
                        k.name(),
                        targets.len()
                    ),
                ));
            }
            // pairs must be disjoint across the whole instruction
            let mut seen = std::collections::HashSet::new();
            for &q in targets {
                if !seen.insert(q) {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("duplicate qubit {q} in {} instruction", k.name()),
                    ));
                }
            }
        }
        k => {
            if targets.is_empty() {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("{} needs at least one target", k.name()),
                ));
            }
            let mut seen = std::collections::HashSet::new();
            for &q in targets {
                if !seen.insert(q) {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("duplicate qubit {q} in {} instruction", k.name()),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Canonical text: uppercase names, one instruction per line, broadcast
/// grouping preserved, comments dropped.
pub fn emit_circuit(c: &CircuitIR) -> String {
    let mut out = String::new();
    for inst in &c.instructions {
        out.push_str(inst.kind.name());
        for &q in &inst.targets {
            out.push(' ');
            out.push_str(&q.to_string());
        }
        out.push('\n');
    }
    out
}

/// Count of applied two-qubit pairs; every entangling pair is an independent
/// noise channel, so broadcast pairs count individually.
pub fn two_qubit_gate_count(c: &CircuitIR) -> u64 {
    c.instructions
        .iter()
        .filter(|i| i.kind.is_two_qubit())
        .map(|i| (i.targets.len() / 2) as u64)
        .sum()
}

/// Circuit depth under ASAP scheduling on qubit availability. Every
/// non-TICK application (R and M included) occupies one time step on its
/// qubits; TICK is ignored so depth cannot be gamed by annotation.
pub fn depth(c: &CircuitIR) -> u64 {
    let mut avail = vec![0u64; c.num_qubits as usize];
    let mut max_layer = 0;
    for app in c.applications() {
        let layer = 1 + app
            .qubits
            .iter()
            .map(|&q| avail[q as usize])
            .max()
            .unwrap_or(0);
        for &q in app.qubits {
            avail[q as usize] = layer;
        }
        max_layer = max_layer.max(layer);
    }
    max_layer
}

/// Both cost metrics of a circuit at once.
pub fn cost_of(c: &CircuitIR) -> CostTuple {
    CostTuple {
        g2q: two_qubit_gate_count(c),
        depth: depth(c),
    }
}

/// ASAP layer of each application, in program order. Layers are 1-based
/// (the first time step is 1) so that 0 can denote "before the circuit".
/// `application_layers(c).iter().max()` equals `depth(c)`.
pub fn application_layers(c: &CircuitIR) -> Vec<u64> {
    let mut avail = vec![0u64; c.num_qubits as usize];
    let mut out = Vec::new();
    for app in c.applications() {
        let layer = 1 + app
            .qubits
            .iter()
            .map(|&q| avail[q as usize])
            .max()
            .unwrap_or(0);
        for &q in app.qubits {
            avail[q as usize] = layer;
        }
        out.push(layer);
    }
    out
}

/// ASAP layering. Layer `l` (0-based) holds the applications scheduled at
/// time step `l+1`; concatenating layers reproduces a circuit with the same
/// per-qubit gate order. The layer count equals `depth(c)`.
pub fn layered_view(c: &CircuitIR) -> Vec<Vec<Application<'_>>> {
    let mut avail = vec![0u64; c.num_qubits as usize];
    let mut layers: Vec<Vec<Application>> = Vec::new();
    for app in c.applications() {
        let layer = 1 + app
            .qubits
            .iter()
            .map(|&q| avail[q as usize])
            .max()
            .unwrap_or(0);
        for &q in app.qubits {
            avail[q as usize] = layer;
        }
        if layers.len() < layer as usize {
            layers.resize_with(layer as usize, Vec::new);
        }
        layers[layer as usize - 1].push(app);
    }
    layers
}
