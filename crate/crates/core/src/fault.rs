//! Single-fault enumeration and Pauli-frame propagation.
//!
//! A fault is one Pauli error injected between the time steps of a circuit.
//! Instead of re-simulating the whole state for every fault, we track the
//! error as a Pauli frame: the injected operator conjugated through the
//! remaining gates. Frames compose over disjoint qubits, so the residual
//! error, its weight on the data block, and which flag measurements flip
//! are all exact, with cost independent of the state.
//!
//! Conventions:
//! - Layers come from ASAP scheduling ([`application_layers`]); layer `j`
//!   means the fault strikes after time step `j`, with `j = 0` before the
//!   first gate and `j = depth` after the last.
//! - `R` discards the frame on its qubit: the qubit is physically replaced
//!   by |0>, so any prior error there is erased.
//! - `M` flips its recorded outcome iff the frame anticommutes with Z on
//!   that qubit (an X or Y component). The Z component is untouched by the
//!   readout and passes through.
//! - A `Y` fault is the exact frame i*X*Z, which is what
//!   [`PauliString::single`] encodes.

use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::circuit::{application_layers, depth, CircuitIR};
use crate::code::CodeInstance;
use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::pauli::PauliString;
use crate::score::{score_serde, Score};
use crate::tableau::{check_stabilizers, deterministic_flag_outcomes};

/// The three non-identity single-qubit Paulis a fault can inject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaultPauli {
    X,
    Y,
    Z,
}

impl FaultPauli {
    pub const ALL: [FaultPauli; 3] = [FaultPauli::X, FaultPauli::Y, FaultPauli::Z];

    pub fn as_gate(self) -> GateKind {
        match self {
            FaultPauli::X => GateKind::X,
            FaultPauli::Y => GateKind::Y,
            FaultPauli::Z => GateKind::Z,
        }
    }
}

/// One fault: `pauli` applied to `qubit` immediately after time step `layer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultLocation {
    pub qubit: u32,
    pub layer: u64,
    pub pauli: FaultPauli,
}

/// Exact effect of one fault on the rest of the circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationResult {
    /// Residual error at the end of the circuit (after measurement and
    /// reset absorption). The sign is tracked through unitaries but is not
    /// meaningful once a frame crosses an `M` or `R`.
    pub error: PauliString,
    /// Non-identity sites of `error` restricted to the data block.
    pub data_weight: usize,
    /// One entry per measurement in record order; true where the fault
    /// flips the recorded outcome.
    pub flag_flips: Vec<bool>,
    /// True iff any measurement outcome flips.
    pub flagged: bool,
}

/// Every fault location of a circuit: one per qubit, per insertion layer
/// `0..=depth`, per Pauli, ordered layer-major then qubit then X, Y, Z.
/// An empty circuit still has layer 0, so the count is
/// `num_qubits * (depth + 1) * 3`.
pub fn enumerate_fault_locations(c: &CircuitIR) -> Vec<FaultLocation> {
    let m = depth(c);
    let mut out = Vec::with_capacity(c.num_qubits as usize * (m as usize + 1) * 3);
    for layer in 0..=m {
        for qubit in 0..c.num_qubits {
            for pauli in FaultPauli::ALL {
                out.push(FaultLocation {
                    qubit,
                    layer,
                    pauli,
                });
            }
        }
    }
    out
}

/// Conjugates the fault's frame through every application scheduled after
/// its insertion layer. `data_qubits` masks which sites count toward
/// `data_weight`; it must cover the full register.
///
/// Applications are visited in program order. Whenever program order and
/// layer order disagree the two applications act on disjoint qubits (a
/// shared qubit forces a later layer), and frame updates on disjoint
/// qubits commute, so this matches a strict layer-by-layer sweep.
pub fn propagate_fault(
    c: &CircuitIR,
    loc: &FaultLocation,
    data_qubits: &BitVec,
) -> Result<PropagationResult> {
    let n = c.num_qubits;
    if loc.qubit >= n || loc.layer > depth(c) {
        return Err(Error::InvalidFaultLocation {
            qubit: loc.qubit,
            layer: loc.layer,
        });
    }
    if data_qubits.len() != n as usize {
        return Err(Error::LengthMismatch {
            left: n,
            right: data_qubits.len() as u32,
        });
    }
    let mut frame = PauliString::single(n, loc.qubit, loc.pauli.as_gate())?;
    let mut flag_flips = vec![false; c.measurement_record().len()];
    let layers = application_layers(c);
    let mut meas_idx = 0usize;
    for (app, &layer) in c.applications().zip(&layers) {
        let live = layer > loc.layer;
        match app.kind {
            GateKind::M => {
                let q = app.qubits[0] as usize;
                if live {
                    if frame.x_bits().get(q) {
                        flag_flips[meas_idx] = true;
                    }
                    frame.clear_x(q);
                }
                meas_idx += 1;
            }
            GateKind::R if live => {
                let q = app.qubits[0] as usize;
                frame.clear_x(q);
                frame.clear_z(q);
            }
            GateKind::R => {}
            kind if live => frame.apply_gate_unchecked(kind, app.qubits),
            _ => {}
        }
    }
    let data_weight = frame.weight_on(data_qubits);
    let flagged = flag_flips.iter().any(|&f| f);
    Ok(PropagationResult {
        error: frame,
        data_weight,
        flag_flips,
        flagged,
    })
}

/// Weight of the residual error over the whole register (every qubit
/// counted as data).
pub fn weight_of_variant(c: &CircuitIR, loc: &FaultLocation) -> Result<usize> {
    let all = BitVec::from_indices(c.num_qubits as usize, 0..c.num_qubits as usize);
    Ok(propagate_fault(c, loc, &all)?.data_weight)
}

/// Outcome of scanning every single-fault location of a preparation
/// circuit against a code's tolerated-error budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FTReport {
    pub total_locations: u64,
    /// Faults whose residual data weight exceeds t = floor((d-1)/2).
    pub dangerous_count: u64,
    /// Dangerous faults that flip at least one flag measurement.
    pub flagged_dangerous: u64,
    /// Harmless faults that still raise a flag (pure rejection overhead;
    /// reported for diagnostics, never scored).
    pub false_flag_count: u64,
    /// Largest residual data weight among faults that raise no flag.
    pub max_unflagged_weight: usize,
    /// flagged_dangerous / dangerous_count, exact; 1 when nothing is
    /// dangerous.
    #[serde(with = "score_serde")]
    pub ft_score: Score,
    pub is_fault_tolerant: bool,
}

/// Per-layer tally merged across the parallel sweep.
#[derive(Default, Clone, Copy)]
struct Tally {
    dangerous: u64,
    flagged_dangerous: u64,
    false_flags: u64,
    max_unflagged: usize,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            dangerous: self.dangerous + other.dangerous,
            flagged_dangerous: self.flagged_dangerous + other.flagged_dangerous,
            false_flags: self.false_flags + other.false_flags,
            max_unflagged: self.max_unflagged.max(other.max_unflagged),
        }
    }
}

/// Application flattened for the batched sweep: targets by value, layer
/// attached.
struct FlatApp {
    kind: GateKind,
    a: usize,
    b: usize,
    layer: u64,
}

fn flatten(c: &CircuitIR) -> Vec<FlatApp> {
    let layers = application_layers(c);
    c.applications()
        .zip(&layers)
        .map(|(app, &layer)| FlatApp {
            kind: app.kind,
            a: app.qubits[0] as usize,
            b: *app.qubits.last().unwrap() as usize,
            layer,
        })
        .collect()
}

/// Propagates up to 64 same-layer frames at once, one frame per bit.
/// `x[q]` bit `f` is frame `f`'s X component on qubit `q`. Signs are not
/// tracked; weights and flag flips do not depend on them.
struct FrameBatch {
    x: Vec<u64>,
    z: Vec<u64>,
    flagged: u64,
}

impl FrameBatch {
    /// Frames `batch_start..batch_start+width` of layer-local index
    /// `q * 3 + p` (p: 0 = X, 1 = Y, 2 = Z).
    fn seed(num_qubits: usize, batch_start: usize, width: usize) -> FrameBatch {
        let mut x = vec![0u64; num_qubits];
        let mut z = vec![0u64; num_qubits];
        for bit in 0..width {
            let f = batch_start + bit;
            let q = f / 3;
            let mask = 1u64 << bit;
            match f % 3 {
                0 => x[q] |= mask,
                1 => {
                    x[q] |= mask;
                    z[q] |= mask;
                }
                _ => z[q] |= mask,
            }
        }
        FrameBatch {
            x,
            z,
            flagged: 0,
        }
    }

    fn apply(&mut self, app: &FlatApp) {
        let (a, b) = (app.a, app.b);
        match app.kind {
            GateKind::I | GateKind::X | GateKind::Y | GateKind::Z | GateKind::Tick => {}
            GateKind::H => std::mem::swap(&mut self.x[a], &mut self.z[a]),
            GateKind::S | GateKind::SDag => self.z[a] ^= self.x[a],
            GateKind::Cx => {
                self.x[b] ^= self.x[a];
                self.z[a] ^= self.z[b];
            }
            GateKind::Cz => {
                let (xa, xb) = (self.x[a], self.x[b]);
                self.z[a] ^= xb;
                self.z[b] ^= xa;
            }
            GateKind::Swap => {
                self.x.swap(a, b);
                self.z.swap(a, b);
            }
            GateKind::R => {
                self.x[a] = 0;
                self.z[a] = 0;
            }
            GateKind::M => {
                self.flagged |= self.x[a];
                self.x[a] = 0;
            }
        }
    }

    /// Residual weight of each frame over `0..n_data`.
    fn data_weights(&self, n_data: usize) -> [u32; 64] {
        let mut w = [0u32; 64];
        for q in 0..n_data {
            let mut word = self.x[q] | self.z[q];
            while word != 0 {
                w[word.trailing_zeros() as usize] += 1;
                word &= word - 1;
            }
        }
        w
    }
}

fn sweep_layer(apps: &[FlatApp], layer: u64, num_qubits: usize, n_data: usize, t: u32) -> Tally {
    let frames = num_qubits * 3;
    let mut tally = Tally::default();
    let mut batch_start = 0;
    while batch_start < frames {
        let width = 64.min(frames - batch_start);
        let mut batch = FrameBatch::seed(num_qubits, batch_start, width);
        for app in apps {
            if app.layer > layer {
                batch.apply(app);
            }
        }
        let weights = batch.data_weights(n_data);
        for bit in 0..width {
            let flagged = batch.flagged >> bit & 1 == 1;
            let dangerous = weights[bit] > t;
            if dangerous {
                tally.dangerous += 1;
                if flagged {
                    tally.flagged_dangerous += 1;
                }
            } else if flagged {
                tally.false_flags += 1;
            }
            if !flagged {
                tally.max_unflagged = tally.max_unflagged.max(weights[bit] as usize);
            }
        }
        batch_start += width;
    }
    tally
}

/// Scores fault tolerance of a preparation circuit for `code`. Every
/// single-fault location is propagated; a fault is dangerous when its
/// residual data weight exceeds `t = floor((d - 1) / 2)`, and the score is
/// the exact fraction of dangerous faults that raise a flag (1 when no
/// fault is dangerous).
///
/// Rejects circuits that do not prepare the code's stabilizer group and
/// flag gadgets whose fault-free measurements are random or read one: a
/// gadget that rejects the ideal state scores nothing.
pub fn ft_score(c: &CircuitIR, code: &CodeInstance) -> Result<FTReport> {
    ft_score_cancellable(c, code, &AtomicBool::new(false))
}

/// [`ft_score`] with a cooperative cancel flag, checked between layer
/// sweeps; a raised flag aborts with [`Error::Cancelled`].
pub fn ft_score_cancellable(
    c: &CircuitIR,
    code: &CodeInstance,
    cancel: &AtomicBool,
) -> Result<FTReport> {
    let n_data = code.num_qubits;
    let n = c.num_qubits.max(n_data);
    let mut padded = c.clone();
    padded.num_qubits = n;
    let data = BitVec::from_indices(n as usize, (0..n_data).map(|q| q as usize));

    let outcomes = deterministic_flag_outcomes(&padded, &data)?;
    if outcomes.iter().any(|&o| o != 0) {
        return Err(Error::IllFormedFlagGadget {
            reason: "fault-free flag measurement reads one, so the gadget rejects the ideal state"
                .into(),
        });
    }
    let stab = check_stabilizers(&padded, &code.generators)?;
    if !stab.valid {
        return Err(Error::NotPreserving {
            satisfied: stab.satisfied_count,
            total: code.generators.len() as u32,
        });
    }

    let t = (code.distance.saturating_sub(1)) / 2;
    let m = depth(&padded);
    let apps = flatten(&padded);
    let total_locations = n as u64 * (m + 1) * 3;

    let tally = (0..=m)
        .into_par_iter()
        .map(|layer| {
            if cancel.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
            Ok(sweep_layer(&apps, layer, n as usize, n_data as usize, t))
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let ft = if tally.dangerous == 0 {
        Score::one()
    } else {
        Score::new(tally.flagged_dangerous.into(), tally.dangerous.into())
    };
    let is_fault_tolerant = ft == Score::one();
    Ok(FTReport {
        total_locations,
        dangerous_count: tally.dangerous,
        flagged_dangerous: tally.flagged_dangerous,
        false_flag_count: tally.false_flags,
        max_unflagged_weight: tally.max_unflagged,
        ft_score: ft,
        is_fault_tolerant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use num_traits::Zero;

    fn loc(qubit: u32, layer: u64, pauli: FaultPauli) -> FaultLocation {
        FaultLocation {
            qubit,
            layer,
            pauli,
        }
    }

    fn tiny_code(id: &str, n: u32, gens: &[&str], distance: u32) -> CodeInstance {
        CodeInstance {
            id: id.into(),
            family: crate::code::Family::Named,
            num_qubits: n,
            generators: gens
                .iter()
                .map(|g| PauliString::parse(g, n).unwrap())
                .collect(),
            num_logical: n - gens.len() as u32,
            distance,
            parents: None,
        }
    }

    fn all_data(n: u32) -> BitVec {
        BitVec::from_indices(n as usize, 0..n as usize)
    }

    #[test]
    fn location_count_formula() {
        let c = parse_circuit("H 0\nCX 0 1\nCX 1 2").unwrap();
        assert_eq!(depth(&c), 3);
        assert_eq!(enumerate_fault_locations(&c).len(), 3 * 4 * 3);

        let mut empty = parse_circuit("").unwrap();
        empty.num_qubits = 3;
        assert_eq!(enumerate_fault_locations(&empty).len(), 9);
    }

    #[test]
    fn x_spreads_through_cx() {
        let c = parse_circuit("CX 0 1").unwrap();
        let r = propagate_fault(&c, &loc(0, 0, FaultPauli::X), &all_data(2)).unwrap();
        assert_eq!(r.error.emit(), "+XX");
        assert_eq!(r.data_weight, 2);
        assert!(!r.flagged);
    }

    #[test]
    fn terminal_fault_is_untouched() {
        let c = parse_circuit("CX 0 1").unwrap();
        let r = propagate_fault(&c, &loc(0, 1, FaultPauli::Z), &all_data(2)).unwrap();
        assert_eq!(r.error.emit(), "+Z_");
        assert_eq!(r.data_weight, 1);
    }

    #[test]
    fn reset_erases_frame() {
        let c = parse_circuit("CX 0 1\nR 1").unwrap();
        let r = propagate_fault(&c, &loc(0, 0, FaultPauli::X), &all_data(2)).unwrap();
        assert_eq!(r.error.emit(), "+X_");
        assert_eq!(r.data_weight, 1);

        let gone = propagate_fault(&c, &loc(1, 1, FaultPauli::Y), &all_data(2)).unwrap();
        assert_eq!(gone.data_weight, 0);
    }

    #[test]
    fn measurement_flip_rules() {
        let c = parse_circuit("CX 0 2\nM 2").unwrap();
        // X on the flag before readout flips it; the X component is absorbed.
        let r = propagate_fault(&c, &loc(2, 1, FaultPauli::X), &all_data(3)).unwrap();
        assert_eq!(r.flag_flips, vec![true]);
        assert!(r.flagged);
        assert_eq!(r.data_weight, 0);
        // Z on the flag commutes with the readout and passes through.
        let z = propagate_fault(&c, &loc(2, 1, FaultPauli::Z), &all_data(3)).unwrap();
        assert_eq!(z.flag_flips, vec![false]);
        assert_eq!(z.error.emit(), "+__Z");
        // A fault before the CX reaches the flag through it.
        let early = propagate_fault(&c, &loc(0, 0, FaultPauli::X), &all_data(3)).unwrap();
        assert_eq!(early.flag_flips, vec![true]);
        assert_eq!(early.error.emit(), "+X__");
    }

    #[test]
    fn faults_before_insertion_layer_do_nothing() {
        let c = parse_circuit("H 0\nCX 0 1\nM 1").unwrap();
        // Fault after the measurement: record already taken.
        let r = propagate_fault(&c, &loc(1, 3, FaultPauli::X), &all_data(2)).unwrap();
        assert_eq!(r.flag_flips, vec![false]);
        assert_eq!(r.error.emit(), "+_X");
    }

    #[test]
    fn rejects_bad_locations() {
        let c = parse_circuit("H 0").unwrap();
        assert!(matches!(
            propagate_fault(&c, &loc(1, 0, FaultPauli::X), &all_data(1)),
            Err(Error::InvalidFaultLocation { .. })
        ));
        assert!(matches!(
            propagate_fault(&c, &loc(0, 2, FaultPauli::X), &all_data(1)),
            Err(Error::InvalidFaultLocation { .. })
        ));
    }

    #[test]
    fn weight_of_variant_counts_whole_register() {
        let c = parse_circuit("CX 0 1\nCX 1 2").unwrap();
        assert_eq!(
            weight_of_variant(&c, &loc(0, 0, FaultPauli::X)).unwrap(),
            3
        );
        assert_eq!(
            weight_of_variant(&c, &loc(2, 2, FaultPauli::Z)).unwrap(),
            1
        );
    }

    #[test]
    fn batched_matches_naive_on_small_circuit() {
        let text = "R 3\nH 0\nCX 0 1\nCX 1 2\nCX 0 3\nCX 2 3\nS 1\nM 3";
        let c = parse_circuit(text).unwrap();
        let n = c.num_qubits;
        let n_data = 3u32;
        let data = BitVec::from_indices(n as usize, 0..n_data as usize);
        let apps = flatten(&c);
        for layer in 0..=depth(&c) {
            let tally = sweep_layer(&apps, layer, n as usize, n_data as usize, 0);
            let mut dangerous = 0u64;
            let mut flagged_dangerous = 0u64;
            let mut false_flags = 0u64;
            let mut max_unflagged = 0usize;
            for qubit in 0..n {
                for pauli in FaultPauli::ALL {
                    let r = propagate_fault(&c, &loc(qubit, layer, pauli), &data).unwrap();
                    if r.data_weight > 0 {
                        dangerous += 1;
                        if r.flagged {
                            flagged_dangerous += 1;
                        }
                    } else if r.flagged {
                        false_flags += 1;
                    }
                    if !r.flagged {
                        max_unflagged = max_unflagged.max(r.data_weight);
                    }
                }
            }
            assert_eq!(tally.dangerous, dangerous, "layer {layer}");
            assert_eq!(tally.flagged_dangerous, flagged_dangerous, "layer {layer}");
            assert_eq!(tally.false_flags, false_flags, "layer {layer}");
            assert_eq!(tally.max_unflagged, max_unflagged, "layer {layer}");
        }
    }

    #[test]
    fn unflagged_bell_prep_scores_zero() {
        let code = tiny_code("bell", 2, &["+XX", "+ZZ"], 2);
        let c = parse_circuit("H 0\nCX 0 1").unwrap();
        let report = ft_score(&c, &code).unwrap();
        assert_eq!(report.total_locations, 2 * 3 * 3);
        assert!(report.dangerous_count > 0);
        assert_eq!(report.flagged_dangerous, 0);
        assert_eq!(report.ft_score, Score::zero());
        assert!(!report.is_fault_tolerant);
        assert!(report.max_unflagged_weight >= 2);
    }

    #[test]
    fn trivially_tolerant_when_nothing_is_dangerous() {
        // d = 3 tolerates weight-1 errors and no gate entangles anything,
        // so no single fault is dangerous.
        let code = tiny_code("plus3", 3, &["+X__", "+_X_", "+__X"], 3);
        let c = parse_circuit("H 0\nH 1\nH 2").unwrap();
        let report = ft_score(&c, &code).unwrap();
        assert_eq!(report.dangerous_count, 0);
        assert_eq!(report.ft_score, Score::one());
        assert!(report.is_fault_tolerant);
    }

    #[test]
    fn rejects_non_preparing_circuit() {
        let code = tiny_code("bell", 2, &["+XX", "+ZZ"], 2);
        let c = parse_circuit("H 0\nH 1").unwrap();
        assert!(matches!(
            ft_score(&c, &code),
            Err(Error::NotPreserving { .. })
        ));
    }

    #[test]
    fn rejects_gadget_that_flags_the_ideal_state() {
        let code = tiny_code("bell", 2, &["+XX", "+ZZ"], 2);
        // Flag left in |1> on the fault-free path.
        let c = parse_circuit("H 0\nCX 0 1\nR 2\nX 2\nM 2").unwrap();
        assert!(matches!(
            ft_score(&c, &code),
            Err(Error::IllFormedFlagGadget { .. })
        ));
        // Random flag outcome.
        let r = parse_circuit("H 0\nCX 0 1\nH 2\nM 2").unwrap();
        assert!(matches!(
            ft_score(&r, &code),
            Err(Error::IllFormedFlagGadget { .. })
        ));
    }

    #[test]
    fn cancel_aborts() {
        let code = tiny_code("bell", 2, &["+XX", "+ZZ"], 2);
        let c = parse_circuit("H 0\nCX 0 1").unwrap();
        let cancel = AtomicBool::new(true);
        assert!(matches!(
            ft_score_cancellable(&c, &code, &cancel),
            Err(Error::Cancelled)
        ));
    }
}
