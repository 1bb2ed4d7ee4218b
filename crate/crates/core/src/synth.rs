//! Deterministic state-preparation synthesis and task baselines.
//!
//! [`synthesize_prep`] builds, for any independent commuting generator
//! set, a circuit that maps |0...0> to a state satisfying every generator
//! with its sign. The method is symplectic elimination: conjugate the
//! generators by logged Clifford gates until each becomes +/-Z on its own
//! pivot qubit, using row multiplication to keep earlier pivots clean.
//! The preparation circuit is then the inverted log in reverse, preceded
//! by an X on every pivot whose eliminated generator came out with a
//! minus sign. No SWAP insertion and no column permutation: pivots land
//! wherever the support happens to live, so a tensor-product code
//! synthesizes block-locally for free.
//!
//! Generators that are already Z-products are folded with CX alone, which
//! is what makes the canonical two-gate Bell preparation come out of the
//! generic path instead of needing a special case.

use crate::bits::{BitVec, Gf2Basis};
use crate::circuit::{cost_of, CircuitIR, CostTuple, Instruction};
use crate::code::CodeInstance;
use crate::error::{Error, Result};
use crate::fault::{ft_score, FTReport};
use crate::gate::GateKind;
use crate::pauli::PauliString;
use crate::tableau::validate_generator_set;

/// Gate log entry; single-qubit entries repeat the target.
#[derive(Clone, Copy)]
struct LoggedGate {
    kind: GateKind,
    a: u32,
    b: u32,
}

impl LoggedGate {
    fn targets(&self) -> Vec<u32> {
        if self.kind.is_two_qubit() {
            vec![self.a, self.b]
        } else {
            vec![self.a]
        }
    }
}

fn push_gate(rows: &mut [PauliString], log: &mut Vec<LoggedGate>, kind: GateKind, a: u32, b: u32) {
    let entry = LoggedGate { kind, a, b };
    let targets = entry.targets();
    for row in rows.iter_mut() {
        row.apply_gate_unchecked(kind, &targets);
    }
    log.push(entry);
}

fn x_z_key(p: &PauliString) -> BitVec {
    let n = p.num_qubits() as usize;
    let mut key = BitVec::zeros(2 * n);
    for i in p.x_bits().iter_ones() {
        key.set(i, true);
    }
    for i in p.z_bits().iter_ones() {
        key.set(n + i, true);
    }
    key
}

/// Synthesizes a preparation circuit for `generators`: the output maps
/// |0...0> to a state on which every generator measures +1 (signs
/// included). Uses H, S_DAG, CX, CZ, and initial X gates only; emits no
/// measurement or reset, so the circuit is unitary.
///
/// The set must be Hermitian, commuting (checked), and independent
/// (checked; a redundant generator is an input error, not something to
/// silently drop).
pub fn synthesize_prep(generators: &[PauliString]) -> Result<CircuitIR> {
    let n = validate_generator_set(generators)?;
    let mut basis = Gf2Basis::new();
    for (i, g) in generators.iter().enumerate() {
        if !basis.insert(x_z_key(g)) {
            return Err(Error::DependentGenerators { index: i });
        }
    }

    let mut rows: Vec<PauliString> = generators.to_vec();
    let mut log: Vec<LoggedGate> = Vec::new();
    let mut pivots: Vec<(usize, u32)> = Vec::new();

    for k in 0..rows.len() {
        // Earlier rows are single-site +/-Z at their pivots; multiplying
        // them in clears row k there. An X component at an earlier pivot
        // would anticommute with that row, so only Z can appear.
        for &(e, p) in &pivots {
            debug_assert!(!rows[k].x_bits().get(p as usize));
            if rows[k].z_bits().get(p as usize) {
                let (head, tail) = rows.split_at_mut(k);
                tail[0].mul_assign_unchecked(&head[e]);
            }
        }

        let pivot = if let Some(p) = rows[k].x_bits().first_one() {
            let p = p as u32;
            let others: Vec<u32> = rows[k]
                .x_bits()
                .iter_ones()
                .map(|j| j as u32)
                .filter(|&j| j != p)
                .collect();
            for j in others {
                push_gate(&mut rows, &mut log, GateKind::Cx, p, j);
            }
            if rows[k].z_bits().get(p as usize) {
                push_gate(&mut rows, &mut log, GateKind::S, p, p);
            }
            let zs: Vec<u32> = rows[k]
                .z_bits()
                .iter_ones()
                .map(|j| j as u32)
                .filter(|&j| j != p)
                .collect();
            for j in zs {
                push_gate(&mut rows, &mut log, GateKind::Cz, p, j);
            }
            push_gate(&mut rows, &mut log, GateKind::H, p, p);
            p
        } else {
            // Z-only row: fold every other site into the pivot with CX
            // towards it; no basis change needed.
            let p = rows[k]
                .z_bits()
                .first_one()
                .expect("independent generator cannot be identity") as u32;
            let others: Vec<u32> = rows[k]
                .z_bits()
                .iter_ones()
                .map(|j| j as u32)
                .filter(|&j| j != p)
                .collect();
            for j in others {
                push_gate(&mut rows, &mut log, GateKind::Cx, j, p);
            }
            p
        };

        debug_assert_eq!(rows[k].weight(), 1);
        debug_assert_eq!(rows[k].site(pivot), 'Z');
        pivots.push((k, pivot));
    }

    let mut instructions = Vec::new();
    for &(k, p) in &pivots {
        if rows[k].phase() == 2 {
            instructions.push(Instruction {
                kind: GateKind::X,
                targets: vec![p],
            });
        }
    }
    for entry in log.iter().rev() {
        let kind = match entry.kind {
            GateKind::S => GateKind::SDag,
            GateKind::SDag => GateKind::S,
            other => other,
        };
        instructions.push(Instruction {
            kind,
            targets: entry.targets(),
        });
    }
    Ok(CircuitIR {
        num_qubits: n,
        instructions,
        source_text: None,
    })
}

/// Deliberately padded baseline for the optimization task: the reference
/// preparation with every two-qubit gate repeated three times in a row.
/// An odd repeat count keeps the unitary identical while leaving an
/// obvious two-thirds reduction on the table.
pub const B2_INFLATION: u64 = 3;

pub fn make_b2_baseline(code: &CodeInstance) -> Result<(CircuitIR, CostTuple)> {
    let prep = synthesize_prep(&code.generators)?;
    let mut instructions = Vec::new();
    for inst in prep.instructions {
        let copies = if inst.kind.is_two_qubit() {
            B2_INFLATION
        } else {
            1
        };
        for _ in 0..copies {
            instructions.push(inst.clone());
        }
    }
    let circuit = CircuitIR {
        num_qubits: prep.num_qubits,
        instructions,
        source_text: None,
    };
    let cost = cost_of(&circuit);
    Ok((circuit, cost))
}

/// Baseline for the flag task: the bare reference preparation (no flags,
/// so nothing is ever caught) together with its fault-tolerance report.
/// `report.dangerous_count == 0` means no single fault can exceed the
/// code's budget and the instance has no headroom for flagging.
pub fn make_b3_baseline(code: &CodeInstance) -> Result<(CircuitIR, FTReport)> {
    let prep = synthesize_prep(&code.generators)?;
    let report = ft_score(&prep, code)?;
    Ok((prep, report))
}
