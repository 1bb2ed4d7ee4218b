//! Dense state-vector oracle used to validate the symplectic machinery.
//!
//! Everything here is deliberately naive: amplitudes are explicit
//! `Complex64` vectors, gates are applied entry by entry, and Pauli action
//! is computed per basis state. Disagreement between this module and the
//! production code is always a bug in the production code or in the rule
//! tables, never a performance artifact.


use num_complex::Complex64;
use rand::Rng;
use stabbench_core::gate::GateKind;
use stabbench_core::{CircuitIR, Instruction, PauliString};

pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DenseState {
    pub num_qubits: u32,
    /// Basis index bit q is qubit q (qubit 0 is the least significant bit).
    pub amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero_state(num_qubits: u32) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        DenseState { num_qubits, amps }
    }

    pub fn basis_state(num_qubits: u32, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        DenseState { num_qubits, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_unitary(&mut self, kind: GateKind, targets: &[u32]) {
        let dim = self.amps.len();
        match kind {
            GateKind::I | GateKind::Tick => {}
            GateKind::X => {
                let m = 1usize << targets[0];
                for b in 0..dim {
                    if b & m == 0 {
                        self.amps.swap(b, b | m);
                    }
                }
            }
            GateKind::Y => {
                let m = 1usize << targets[0];
                let i = Complex64::new(0.0, 1.0);
                for b in 0..dim {
                    if b & m == 0 {
                        let a0 = self.amps[b];
                        let a1 = self.amps[b | m];
                        // Y|0> = i|1>, Y|1> = -i|0>
                        self.amps[b] = -i * a1;
                        self.amps[b | m] = i * a0;
                    }
                }
            }
            GateKind::Z => {
                let m = 1usize << targets[0];
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & m != 0 {
                        *amp = -*amp;
                    }
                }
            }
            GateKind::H => {
                let m = 1usize << targets[0];
                let s = 1.0 / 2.0_f64.sqrt();
                for b in 0..dim {
                    if b & m == 0 {
                        let a0 = self.amps[b];
                        let a1 = self.amps[b | m];
                        self.amps[b] = s * (a0 + a1);
                        self.amps[b | m] = s * (a0 - a1);
                    }
                }
            }
            GateKind::S | GateKind::SDag => {
                let m = 1usize << targets[0];
                let f = if kind == GateKind::S {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                };
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & m != 0 {
                        *amp *= f;
                    }
                }
            }
            GateKind::Cx => {
                let c = 1usize << targets[0];
                let t = 1usize << targets[1];
                for b in 0..dim {
                    if b & c != 0 && b & t == 0 {
                        self.amps.swap(b, b | t);
                    }
                }
            }
            GateKind::Cz => {
                let c = 1usize << targets[0];
                let t = 1usize << targets[1];
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & c != 0 && b & t != 0 {
                        *amp = -*amp;
                    }
                }
            }
            GateKind::Swap => {
                let p = 1usize << targets[0];
                let q = 1usize << targets[1];
                for b in 0..dim {
                    if b & p != 0 && b & q == 0 {
                        self.amps.swap(b, (b & !p) | q);
                    }
                }
            }
            GateKind::R | GateKind::M => panic!("apply_unitary got {kind}"),
        }
    }

    /// Probability of reading 0 on `qubit`.
    pub fn prob_zero(&self, qubit: u32) -> f64 {
        let m = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & m == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Measurement with a deterministic-outcome contract: `Some(bit)` when
    /// one branch carries all probability, `None` when genuinely random.
    /// A deterministic measurement leaves the state untouched.
    pub fn measure_deterministic(&self, qubit: u32) -> Option<u8> {
        let p0 = self.prob_zero(qubit);
        if p0 > 1.0 - EPS {
            Some(0)
        } else if p0 < EPS {
            Some(1)
        } else {
            None
        }
    }

    /// Reset to |0⟩: project onto the 0 branch when it has support,
    /// otherwise relabel the certain 1 branch (the X-correction picture).
    pub fn reset(&mut self, qubit: u32) {
        let m = 1usize << qubit;
        let p0 = self.prob_zero(qubit);
        if p0 > EPS {
            let scale = 1.0 / p0.sqrt();
            for (b, amp) in self.amps.iter_mut().enumerate() {
                if b & m != 0 {
                    *amp = Complex64::new(0.0, 0.0);
                } else {
                    *amp *= scale;
                }
            }
        } else {
            for b in 0..self.amps.len() {
                if b & m != 0 {
                    self.amps[(b & !m) as usize] = self.amps[b];
                    self.amps[b] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Apply a Pauli operator (not a measurement): returns P|ψ⟩.
    pub fn apply_pauli(&self, p: &PauliString) -> DenseState {
        assert_eq!(p.num_qubits(), self.num_qubits);
        let mut x_mask = 0usize;
        let mut zy_mask = 0usize;
        let mut y_count = 0u32;
        for q in 0..self.num_qubits as usize {
            let x = p.x_bits().get(q);
            let z = p.z_bits().get(q);
            if x {
                x_mask |= 1 << q;
            }
            if z {
                zy_mask |= 1 << q;
            }
            if x && z {
                y_count += 1;
            }
        }
        // per-site factors: Z gives (-1)^bit, Y gives i * (-1)^bit
        let lead = Complex64::new(0.0, 1.0).powu(p.phase() as u32 + y_count);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, amp) in self.amps.iter().enumerate() {
            let sign = if (b & zy_mask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            out[b ^ x_mask] = lead * sign * amp;
        }
        DenseState {
            num_qubits: self.num_qubits,
            amps: out,
        }
    }

    /// Is this state a ±1 eigenvector of `p`? Returns the eigenvalue sign.
    pub fn eigen_sign(&self, p: &PauliString) -> Option<i8> {
        let moved = self.apply_pauli(p);
        let mut dist_plus = 0.0;
        let mut dist_minus = 0.0;
        for (a, b) in self.amps.iter().zip(&moved.amps) {
            dist_plus += (b - a).norm_sqr();
            dist_minus += (b + a).norm_sqr();
        }
        if dist_plus.sqrt() < EPS {
            Some(1)
        } else if dist_minus.sqrt() < EPS {
            Some(-1)
        } else {
            None
        }
    }

    pub fn approx_eq(&self, other: &DenseState, tol: f64) -> bool {
        self.amps.len() == other.amps.len()
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() < tol)
    }

    /// Equality up to a single global phase.
    pub fn same_ray(&self, other: &DenseState, tol: f64) -> bool {
        if self.amps.len() != other.amps.len() {
            return false;
        }
        let pivot = self.amps.iter().position(|a| a.norm() > 0.5 * tol.max(1e-6));
        let Some(k) = pivot else {
            return other.norm() < tol;
        };
        if other.amps[k].norm() < EPS {
            return false;
        }
        let phase = other.amps[k] / self.amps[k];
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() < tol)
    }
}

/// Run a circuit on the dense simulator from |0…0⟩. Panics if any M has a
/// random outcome (callers pick circuits where that cannot happen).
pub fn dense_run(c: &CircuitIR) -> (DenseState, Vec<u8>) {
    let mut state = DenseState::zero_state(c.num_qubits);
    let mut outcomes = Vec::new();
    for app in c.applications() {
        match app.kind {
            GateKind::R => state.reset(app.qubits[0]),
            GateKind::M => {
                let bit = state
                    .measure_deterministic(app.qubits[0])
                    .expect("dense oracle: random measurement outcome");
                outcomes.push(bit);
            }
            kind => state.apply_unitary(kind, app.qubits),
        }
    }
    (state, outcomes)
}

/// Iterator over every Pauli on `n` qubits with every mod-4 phase.
/// 4^n bit patterns times 4 phases; keep n tiny.
pub fn all_paulis(n: u32) -> Vec<PauliString> {
    let sites = ['_', 'X', 'Z', 'Y'];
    let mut out = Vec::new();
    for pattern in 0..(1usize << (2 * n)) {
        for p in 0..4u8 {
            let mut text = String::from('+');
            for q in 0..n as usize {
                text.push(sites[(pattern >> (2 * q)) & 3]);
            }
            let mut parsed = PauliString::parse(&text, n).unwrap();
            parsed.set_phase(p);
            out.push(parsed);
        }
    }
    out
}

const UNITARY_1Q: &[GateKind] = &[
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::SDag,
];
const UNITARY_2Q: &[GateKind] = &[GateKind::Cx, GateKind::Cz, GateKind::Swap];

/// Random circuit over the unitary gate set, optionally with resets.
/// Never emits M; measurement tests construct their circuits by hand.
pub fn random_circuit(rng: &mut impl Rng, num_qubits: u32, len: usize, with_resets: bool) -> CircuitIR {
    assert!(num_qubits >= 2);
    let mut instructions = Vec::with_capacity(len);
    for _ in 0..len {
        let roll = rng.gen_range(0..10);
        let (kind, targets) = if with_resets && roll == 0 {
            (GateKind::R, vec![rng.gen_range(0..num_qubits)])
        } else if roll < 6 {
            (
                UNITARY_1Q[rng.gen_range(0..UNITARY_1Q.len())],
                vec![rng.gen_range(0..num_qubits)],
            )
        } else {
            let a = rng.gen_range(0..num_qubits);
            let mut b = rng.gen_range(0..num_qubits - 1);
            if b >= a {
                b += 1;
            }
            (UNITARY_2Q[rng.gen_range(0..UNITARY_2Q.len())], vec![a, b])
        };
        instructions.push(Instruction { kind, targets });
    }
    let mut c = CircuitIR::from_instructions(instructions);
    c.num_qubits = num_qubits;
    c
}

/// A uniformly random Hermitian Pauli (possibly identity).
pub fn random_hermitian_pauli(rng: &mut impl Rng, num_qubits: u32) -> PauliString {
    let mut text = String::from(if rng.gen::<bool>() { "+" } else { "-" });
    for _ in 0..num_qubits {
        text.push(['_', 'X', 'Z', 'Y'][rng.gen_range(0..4)]);
    }
    PauliString::parse(&text, num_qubits).unwrap()
}
