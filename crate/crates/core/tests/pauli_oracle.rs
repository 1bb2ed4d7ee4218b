//! Exhaustive cross-checks of Pauli algebra against the dense oracle.
//!
//! The production phase rules live in hand-written bit masks; every branch
//! of those masks is exercised here over all operators on one and two
//! qubits, so a single wrong mask term cannot survive.



use stabbench_testkit::{all_paulis, DenseState, EPS};
use stabbench_core::gate::GateKind;
use stabbench_core::PauliString;

fn operators_agree(n: u32, claimed: &PauliString, action: impl Fn(&DenseState) -> DenseState) -> bool {
    let dim = 1usize << n;
    for b in 0..dim {
        let basis = DenseState::basis_state(n, b);
        let lhs = basis.apply_pauli(claimed);
        let rhs = action(&basis);
        if !lhs.approx_eq(&rhs, EPS) {
            return false;
        }
    }
    true
}

#[test]
fn dense_pauli_action_is_involutive_where_expected() {
    // sanity-check the oracle itself: P applied twice is i^(2p) times the
    // identity for Hermitian P, and (iP)(iP) = -P^2
    for p in all_paulis(2) {
        let double = p.multiply(&p).unwrap();
        assert!(double.is_identity_bits());
        assert_eq!(double.phase(), (2 * p.phase()) % 4);
    }
}

#[test]
fn multiplication_matches_dense_exhaustively() {
    // all 64 x 64 ordered pairs on two qubits, phases included
    let paulis = all_paulis(2);
    for a in &paulis {
        for b in &paulis {
            let product = a.multiply(b).unwrap();
            let ok = operators_agree(2, &product, |v| v.apply_pauli(b).apply_pauli(a));
            assert!(ok, "product mismatch: ({}) * ({}) != {}", a, b, product);
        }
    }
}

#[test]
fn commutation_matches_dense_exhaustively() {
    let paulis = all_paulis(2);
    for a in &paulis {
        for b in &paulis {
            let ab = a.multiply(b).unwrap();
            let ba = b.multiply(a).unwrap();
            let claimed = a.commutes(b).unwrap();
            assert_eq!(claimed, ab == ba, "commutation mismatch: {} vs {}", a, b);
        }
    }
}

#[test]
fn single_qubit_conjugation_matches_dense_exhaustively() {
    let gates = [
        GateKind::I,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::SDag,
    ];
    for gate in gates {
        for target in 0..2u32 {
            for p in all_paulis(2) {
                let conj = p.conjugate_by_gate(gate, &[target]).unwrap();
                // claimed = U P U^dagger, so claimed (U v) must equal U (P v)
                for b in 0..4usize {
                    let basis = DenseState::basis_state(2, b);
                    let mut uv = basis.clone();
                    uv.apply_unitary(gate, &[target]);
                    let lhs = uv.apply_pauli(&conj);
                    let mut rhs = basis.apply_pauli(&p);
                    rhs.apply_unitary(gate, &[target]);
                    assert!(
                        lhs.approx_eq(&rhs, EPS),
                        "conjugation mismatch: {gate} on {target} applied to {p} gave {conj}"
                    );
                }
            }
        }
    }
}

#[test]
fn two_qubit_conjugation_matches_dense_exhaustively() {
    let gates = [GateKind::Cx, GateKind::Cz, GateKind::Swap];
    let orientations: [[u32; 2]; 2] = [[0, 1], [1, 0]];
    for gate in gates {
        for targets in orientations {
            for p in all_paulis(2) {
                let conj = p.conjugate_by_gate(gate, &targets).unwrap();
                let dim = 1usize << 2;
                for b in 0..dim {
                    let basis = DenseState::basis_state(2, b);
                    // P' U v == U P v for every basis v
                    let mut uv = basis.clone();
                    uv.apply_unitary(gate, &targets);
                    let lhs = uv.apply_pauli(&conj);
                    let mut rhs = basis.apply_pauli(&p);
                    rhs.apply_unitary(gate, &targets);
                    assert!(
                        lhs.approx_eq(&rhs, EPS),
                        "conjugation mismatch: {gate} {targets:?} applied to {p} gave {conj}"
                    );
                }
            }
        }
    }
}

#[test]
fn conjugation_on_three_qubits_leaves_spectators_alone() {
    // indexing check away from qubit 0: conjugate at offsets inside a
    // wider register and compare against the dense action there
    for p in all_paulis(1) {
        let wide = p.shifted(2, 3);
        for gate in [GateKind::H, GateKind::S, GateKind::Y] {
            let conj = wide.conjugate_by_gate(gate, &[2]).unwrap();
            for b in 0..8 {
                let basis = DenseState::basis_state(3, b);
                let mut uv = basis.clone();
                uv.apply_unitary(gate, &[2]);
                let lhs = uv.apply_pauli(&conj);
                let mut rhs = basis.apply_pauli(&wide);
                rhs.apply_unitary(gate, &[2]);
                assert!(lhs.approx_eq(&rhs, EPS));
            }
        }
    }
}
