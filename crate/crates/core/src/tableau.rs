//! Stabilizer-state simulation over exact Pauli rows.
//!
//! The tableau keeps 2n `PauliString` rows: destabilizers 0..n, stabilizers
//! n..2n, with the invariant that destabilizer i anticommutes with
//! stabilizer i and commutes with every other row. Signs ride on the exact
//! mod-4 phases of the rows, so there is a single source of phase truth.

use crate::bits::BitVec;
use crate::circuit::CircuitIR;
use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::pauli::PauliString;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    num_qubits: u32,
    /// n destabilizers then n stabilizers.
    rows: Vec<PauliString>,
}

/// Result of a stabilizer-group membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    PlusOne,
    MinusOne,
    NotInGroup,
}

/// Per-generator verdict in a [`StabReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenStatus {
    /// The state is a +1 eigenstate of the generator.
    Pass,
    /// The generator's negation stabilizes the state (sign error).
    SignFail,
    /// Neither sign of the generator is in the stabilizer group.
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabReport {
    pub statuses: Vec<GenStatus>,
    pub satisfied_count: u32,
    pub valid: bool,
}

impl Tableau {
    /// Tableau of |0…0⟩: destabilizers X_i, stabilizers Z_i.
    pub fn new(num_qubits: u32) -> Self {
        let mut rows = Vec::with_capacity(2 * num_qubits as usize);
        for i in 0..num_qubits {
            rows.push(PauliString::single(num_qubits, i, GateKind::X).unwrap());
        }
        for i in 0..num_qubits {
            rows.push(PauliString::single(num_qubits, i, GateKind::Z).unwrap());
        }
        Tableau { num_qubits, rows }
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn destabilizer(&self, i: u32) -> &PauliString {
        &self.rows[i as usize]
    }

    pub fn stabilizer(&self, i: u32) -> &PauliString {
        &self.rows[(self.num_qubits + i) as usize]
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.num_qubits as usize..]
    }

    /// Conjugate every row by a unitary gate.
    pub fn apply_gate(&mut self, kind: GateKind, targets: &[u32]) {
        debug_assert!(kind.is_unitary());
        for row in &mut self.rows {
            row.apply_gate_unchecked(kind, targets);
        }
    }

    /// Apply a Pauli operator to the state: stabilizer signs flip where the
    /// rows anticommute with it. Used to push an error frame onto a state.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        debug_assert_eq!(p.num_qubits(), self.num_qubits);
        for row in &mut self.rows {
            if !row.commutes_unchecked(p) {
                row.set_phase((row.phase() + 2) % 4);
            }
        }
    }

    /// Measure Z on `qubit`. A random outcome collapses to the forced branch
    /// `forced` (used by R); a deterministic outcome reports the fixed bit.
    fn measure_z(&mut self, qubit: u32, forced: u8) -> MeasureOutcome {
        let n = self.num_qubits as usize;
        let q = qubit as usize;
        let pivot = (n..2 * n).find(|&i| self.rows[i].x_bits().get(q));
        match pivot {
            Some(p) => {
                // random outcome: rowsum everything else with x_q set
                let row_p = self.rows[p].clone();
                for i in 0..2 * n {
                    if i != p && self.rows[i].x_bits().get(q) {
                        self.rows[i].mul_assign_unchecked(&row_p);
                    }
                }
                self.rows[p - n] = row_p;
                let mut new_stab =
                    PauliString::single(self.num_qubits, qubit, GateKind::Z).unwrap();
                new_stab.set_phase(2 * forced);
                self.rows[p] = new_stab;
                MeasureOutcome::Random
            }
            None => {
                // deterministic: accumulate stabilizer rows selected by
                // destabilizer x-bits at q; the product is ±Z_q
                let mut acc = PauliString::identity(self.num_qubits);
                for i in 0..n {
                    if self.rows[i].x_bits().get(q) {
                        let stab = self.rows[n + i].clone();
                        acc.mul_assign_unchecked(&stab);
                    }
                }
                debug_assert!(acc.z_bits().get(q));
                debug_assert_eq!(acc.weight(), 1);
                MeasureOutcome::Deterministic(if acc.phase() == 2 { 1 } else { 0 })
            }
        }
    }

    /// Reset `qubit` to |0⟩: measure Z and correct a |1⟩ outcome with X.
    pub fn reset(&mut self, qubit: u32) {
        match self.measure_z(qubit, 0) {
            MeasureOutcome::Random => {}
            MeasureOutcome::Deterministic(1) => self.apply_gate(GateKind::X, &[qubit]),
            MeasureOutcome::Deterministic(_) => {}
        }
    }

    /// Internal consistency: symplectic pairing and full rank.
    pub fn validate_invariants(&self) -> bool {
        let n = self.num_qubits as usize;
        for i in 0..2 * n {
            for j in i..2 * n {
                let want_anti = j == i + n && i < n;
                let anti = !self.rows[i].commutes_unchecked(&self.rows[j]);
                if anti != want_anti {
                    return false;
                }
            }
        }
        let mut basis = crate::bits::Gf2Basis::new();
        for row in &self.rows {
            if !basis.insert(symplectic_key(row)) {
                return false;
            }
        }
        true
    }

    /// Membership of a Hermitian Pauli in the stabilizer group, with sign.
    pub fn stabilizes(&self, s: &PauliString) -> Result<Membership> {
        if s.num_qubits() != self.num_qubits {
            return Err(Error::LengthMismatch {
                left: s.num_qubits(),
                right: self.num_qubits,
            });
        }
        if !s.is_hermitian() {
            return Err(Error::NonHermitianPauli);
        }
        Ok(StabBasis::from_tableau(self).membership(s))
    }

    /// Canonical signed generating set: reduced row echelon over the
    /// symplectic bits with exact signs, rows sorted by pivot. Two tableaux
    /// describe the same state iff their canonical stabilizers are equal.
    pub fn canonical_stabilizers(&self) -> Vec<PauliString> {
        let n = self.num_qubits as usize;
        let mut rows: Vec<PauliString> = self.stabilizers().to_vec();
        let mut pivot_of_row: Vec<usize> = Vec::with_capacity(n);
        let mut done = 0usize;
        for col in 0..2 * n {
            let Some(hit) = (done..n).find(|&r| symplectic_bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(done, hit);
            let pivot_row = rows[done].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != done && symplectic_bit(row, col) {
                    row.mul_assign_unchecked(&pivot_row);
                }
            }
            pivot_of_row.push(col);
            done += 1;
            if done == n {
                break;
            }
        }
        rows.truncate(done);
        rows
    }
}

enum MeasureOutcome {
    Random,
    Deterministic(u8),
}

#[inline]
fn symplectic_bit(p: &PauliString, col: usize) -> bool {
    let n = p.num_qubits() as usize;
    if col < n {
        p.x_bits().get(col)
    } else {
        p.z_bits().get(col - n)
    }
}

fn symplectic_key(p: &PauliString) -> BitVec {
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

/// Echelonized stabilizer rows with exact product tracking, for repeated
/// membership queries against one state.
pub struct StabBasis {
    num_qubits: u32,
    /// (pivot column, row as exact Pauli) in insertion order.
    rows: Vec<(usize, PauliString)>,
}

impl StabBasis {
    pub fn from_tableau(t: &Tableau) -> Self {
        let mut basis = StabBasis {
            num_qubits: t.num_qubits(),
            rows: Vec::with_capacity(t.num_qubits() as usize),
        };
        for s in t.stabilizers() {
            basis.insert(s.clone());
        }
        basis
    }

    fn insert(&mut self, mut row: PauliString) {
        for (pivot, basis_row) in &self.rows {
            if symplectic_bit(&row, *pivot) {
                row.mul_assign_unchecked(basis_row);
            }
        }
        if let Some(pivot) = first_symplectic_one(&row) {
            self.rows.push((pivot, row));
        }
    }

    pub fn membership(&self, s: &PauliString) -> Membership {
        debug_assert!(s.is_hermitian());
        let mut acc = PauliString::identity(self.num_qubits);
        let mut residual_x = s.x_bits().clone();
        let mut residual_z = s.z_bits().clone();
        for (pivot, basis_row) in &self.rows {
            let n = self.num_qubits as usize;
            let hit = if *pivot < n {
                residual_x.get(*pivot)
            } else {
                residual_z.get(*pivot - n)
            };
            if hit {
                acc.mul_assign_unchecked(basis_row);
                residual_x.xor_assign(basis_row.x_bits());
                residual_z.xor_assign(basis_row.z_bits());
            }
        }
        if !residual_x.is_zero() || !residual_z.is_zero() {
            return Membership::NotInGroup;
        }
        // bits match exactly; a Hermitian pair can only differ by sign
        debug_assert!(acc.is_hermitian());
        if acc.phase() == s.phase() {
            Membership::PlusOne
        } else {
            Membership::MinusOne
        }
    }
}

fn first_symplectic_one(p: &PauliString) -> Option<usize> {
    let n = p.num_qubits() as usize;
    p.x_bits()
        .first_one()
        .or_else(|| p.z_bits().first_one().map(|i| i + n))
}

/// Run a circuit from |0…0⟩. Measurements must be deterministic; a random
/// outcome is an error naming the offending instruction. Resets are allowed
/// anywhere. Returns the final tableau and the measurement outcomes in
/// record order.
pub fn simulate_with_outcomes(c: &CircuitIR) -> Result<(Tableau, Vec<u8>)> {
    let mut t = Tableau::new(c.num_qubits);
    let mut outcomes = Vec::new();
    apply_circuit(&mut t, c, &mut outcomes)?;
    Ok((t, outcomes))
}

/// Continue simulation on an existing tableau (compositionality hook).
pub fn apply_circuit(t: &mut Tableau, c: &CircuitIR, outcomes: &mut Vec<u8>) -> Result<()> {
    assert!(c.num_qubits <= t.num_qubits());
    for app in c.applications() {
        match app.kind {
            GateKind::R => t.reset(app.qubits[0]),
            GateKind::M => {
                let q = app.qubits[0];
                match t.measure_z(q, 0) {
                    MeasureOutcome::Deterministic(bit) => outcomes.push(bit),
                    MeasureOutcome::Random => {
                        return Err(Error::NondeterministicMeasurement {
                            instruction: app.instruction,
                            qubit: q,
                        });
                    }
                }
            }
            kind => t.apply_gate(kind, app.qubits),
        }
    }
    Ok(())
}

/// Tableau of the state prepared by `c`.
pub fn simulate(c: &CircuitIR) -> Result<Tableau> {
    simulate_with_outcomes(c).map(|(t, _)| t)
}

/// Fault-free measurement outcomes of a flagged circuit. Every M must
/// target a non-data qubit and be deterministic; well-formed flag gadgets
/// read all zeros.
pub fn deterministic_flag_outcomes(c: &CircuitIR, data_qubits: &BitVec) -> Result<Vec<u8>> {
    for q in c.measurement_record() {
        if (q as usize) < data_qubits.len() && data_qubits.get(q as usize) {
            return Err(Error::MeasurementOnData { qubit: q });
        }
    }
    match simulate_with_outcomes(c) {
        Ok((_, outcomes)) => Ok(outcomes),
        Err(Error::NondeterministicMeasurement { instruction, qubit }) => {
            Err(Error::IllFormedFlagGadget {
                reason: format!(
                    "flag measurement at instruction {instruction} on qubit {qubit} has a random outcome"
                ),
            })
        }
        Err(e) => Err(e),
    }
}

/// Validate a generator set: equal lengths, Hermitian, pairwise commuting.
/// Violations are problem-authoring errors, distinct from candidate failure.
pub fn validate_generator_set(generators: &[PauliString]) -> Result<u32> {
    let Some(first) = generators.first() else {
        return Err(Error::EmptyGeneratorSet);
    };
    let n = first.num_qubits();
    for (i, g) in generators.iter().enumerate() {
        if g.num_qubits() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: g.num_qubits(),
            });
        }
        if !g.is_hermitian() {
            return Err(Error::NonHermitianGenerator { index: i });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if !generators[i].commutes_unchecked(&generators[j]) {
                return Err(Error::NonCommutingGenerators { a: i, b: j });
            }
        }
    }
    Ok(n)
}

/// The B1/B2 preservation oracle: does `c|0…0⟩` satisfy every generator?
///
/// The candidate may use extra (flag) qubits beyond the generators' span;
/// generators are extended by identity over those, and the check runs on
/// the joint state. Measuring a data qubit is rejected outright.
pub fn check_stabilizers(c: &CircuitIR, generators: &[PauliString]) -> Result<StabReport> {
    let n_data = validate_generator_set(generators)?;
    let n_joint = n_data.max(c.num_qubits);
    for q in c.measurement_record() {
        if q < n_data {
            return Err(Error::MeasurementOnData { qubit: q });
        }
    }
    let mut padded = c.clone();
    padded.num_qubits = n_joint;
    let t = simulate(&padded)?;
    let basis = StabBasis::from_tableau(&t);
    let mut statuses = Vec::with_capacity(generators.len());
    let mut satisfied = 0u32;
    for g in generators {
        let extended = if g.num_qubits() == n_joint {
            g.clone()
        } else {
            g.resized(n_joint)
        };
        let status = match basis.membership(&extended) {
            Membership::PlusOne => {
                satisfied += 1;
                GenStatus::Pass
            }
            Membership::MinusOne => GenStatus::SignFail,
            Membership::NotInGroup => GenStatus::Fail,
        };
        statuses.push(status);
    }
    let valid = satisfied as usize == generators.len();
    Ok(StabReport {
        statuses,
        satisfied_count: satisfied,
        valid,
    })
}
