//! Fault-propagation oracle tests.
//!
//! The frame engine claims that injecting Pauli P after layer j and
//! conjugating it through the remaining gates yields E with
//! E * U|0> = U_suffix * P * U_prefix |0>, exactly and including global
//! phase. We verify that against dense state-vector re-simulation over
//! every fault location of random unitary circuits. Measurements and
//! resets are pinned by hand-built gadgets instead: resets are projectors
//! on the dense side, so the frame identity above only holds for unitary
//! suffixes, and the gadget tests cover the absorb rules directly.



use stabbench_testkit::{random_circuit, DenseState, EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabbench_core::circuit::{application_layers, depth, parse_circuit};
use stabbench_core::code::{CodeInstance, Family};
use stabbench_core::fault::{
    enumerate_fault_locations, ft_score, propagate_fault, weight_of_variant, FaultLocation,
    FaultPauli,
};
use stabbench_core::bits::BitVec;
use stabbench_core::pauli::PauliString;

fn all_data(n: u32) -> BitVec {
    BitVec::from_indices(n as usize, 0..n as usize)
}

/// Dense run of `c` with `loc.pauli` injected on `loc.qubit` after every
/// application of layer <= loc.layer.
fn dense_with_fault(c: &stabbench_core::CircuitIR, loc: &FaultLocation) -> DenseState {
    let layers = application_layers(c);
    let mut state = DenseState::zero_state(c.num_qubits);
    for (app, &layer) in c.applications().zip(&layers) {
        if layer <= loc.layer {
            state.apply_unitary(app.kind, app.qubits);
        }
    }
    state.apply_unitary(loc.pauli.as_gate(), &[loc.qubit]);
    for (app, &layer) in c.applications().zip(&layers) {
        if layer > loc.layer {
            state.apply_unitary(app.kind, app.qubits);
        }
    }
    state
}

#[test]
fn residual_frame_matches_dense_resimulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFA17_0001);
    for trial in 0..20 {
        let n = 2 + (trial % 7) as u32;
        let c = random_circuit(&mut rng, n, 25, false);
        let data = all_data(n);

        let mut fault_free = DenseState::zero_state(n);
        for app in c.applications() {
            fault_free.apply_unitary(app.kind, app.qubits);
        }

        let locations = enumerate_fault_locations(&c);
        assert_eq!(
            locations.len() as u64,
            n as u64 * (depth(&c) + 1) * 3,
            "trial {trial}"
        );
        for loc in &locations {
            let r = propagate_fault(&c, loc, &data).unwrap();
            let via_frame = fault_free.apply_pauli(&r.error);
            let via_resim = dense_with_fault(&c, loc);
            assert!(
                via_frame.approx_eq(&via_resim, EPS),
                "trial {trial}, location {loc:?}: frame {} disagrees with re-simulation",
                r.error.emit()
            );
            assert_eq!(r.data_weight, r.error.weight(), "trial {trial}");
            assert!(!r.flagged, "no measurements, trial {trial}");
        }
    }
}

#[test]
fn error_spread_through_entangler() {
    let c = parse_circuit("CX 0 1").unwrap();
    let r = propagate_fault(
        &c,
        &FaultLocation {
            qubit: 0,
            layer: 0,
            pauli: FaultPauli::X,
        },
        &all_data(2),
    )
    .unwrap();
    assert_eq!(r.error.emit(), "+XX");
    assert_eq!(r.data_weight, 2);

    // The same fault after the gate stays weight one.
    assert_eq!(
        weight_of_variant(
            &c,
            &FaultLocation {
                qubit: 0,
                layer: 1,
                pauli: FaultPauli::X,
            }
        )
        .unwrap(),
        1
    );
}

#[test]
fn flag_gadget_catches_mid_gadget_error() {
    // One data qubit checked twice by a flag: a fault between the two
    // couplings leaves exactly one imprint and flips the readout.
    let c = parse_circuit("R 1\nCX 0 1\nCX 0 1\nM 1").unwrap();
    let mid = FaultLocation {
        qubit: 0,
        layer: 2,
        pauli: FaultPauli::X,
    };
    let r = propagate_fault(&c, &mid, &all_data(2)).unwrap();
    assert_eq!(r.flag_flips, vec![true]);
    assert!(r.flagged);

    // Before both couplings the two imprints cancel: no flag.
    let early = FaultLocation {
        qubit: 0,
        layer: 0,
        pauli: FaultPauli::X,
    };
    let r = propagate_fault(&c, &early, &all_data(2)).unwrap();
    assert_eq!(r.flag_flips, vec![false]);
    assert_eq!(r.error.emit(), "+X_");
}

fn plus_code(n: u32, distance: u32) -> CodeInstance {
    let generators = (0..n)
        .map(|q| {
            let mut text = vec![b'_'; n as usize];
            text[q as usize] = b'X';
            PauliString::parse(&format!("+{}", String::from_utf8(text).unwrap()), n).unwrap()
        })
        .collect();
    CodeInstance {
        id: format!("plus{n}"),
        family: Family::Named,
        num_qubits: n,
        generators,
        num_logical: 0,
        distance,
        parents: None,
    }
}

/// Naive FT recomputation straight from the public per-location API.
fn naive_ft(
    c: &stabbench_core::CircuitIR,
    n_data: u32,
    t: u32,
) -> (u64, u64, u64, usize) {
    let data = BitVec::from_indices(c.num_qubits as usize, 0..n_data as usize);
    let mut dangerous = 0u64;
    let mut flagged_dangerous = 0u64;
    let mut false_flags = 0u64;
    let mut max_unflagged = 0usize;
    for loc in enumerate_fault_locations(c) {
        let r = propagate_fault(c, &loc, &data).unwrap();
        if r.data_weight > t as usize {
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
    (dangerous, flagged_dangerous, false_flags, max_unflagged)
}

#[test]
fn batched_report_matches_naive_enumeration() {
    // |+...+> preparation followed by randomized double-coupling flag
    // gadgets: fault-free flags stay zero, mid-gadget faults flip them.
    let mut rng = ChaCha8Rng::seed_from_u64(0xFA17_0002);
    for trial in 0..12 {
        let n_data = 3 + (trial % 3) as u32;
        let mut lines: Vec<String> = (0..n_data).map(|q| format!("H {q}")).collect();
        let flags = 1 + (trial % 2) as u32;
        for f in 0..flags {
            let flag = n_data + f;
            lines.push(format!("R {flag}"));
            use rand::Rng;
            let a = rng.gen_range(0..n_data);
            let b = rng.gen_range(0..n_data);
            lines.push(format!("CZ {a} {flag}"));
            if rng.gen_bool(0.5) {
                lines.push(format!("S {flag}"));
            }
            lines.push(format!("CZ {b} {flag}"));
            lines.push(format!("CZ {a} {flag}"));
            lines.push(format!("CZ {b} {flag}"));
            lines.push(format!("M {flag}"));
        }
        let c = parse_circuit(&lines.join("\n")).unwrap();
        let distance = 1 + (trial % 3) as u32;
        let code = plus_code(n_data, distance);
        let mut padded = c.clone();
        padded.num_qubits = padded.num_qubits.max(n_data);

        let report = ft_score(&c, &code).unwrap();
        let t = (distance - 1) / 2;
        let (dangerous, flagged_dangerous, false_flags, max_unflagged) =
            naive_ft(&padded, n_data, t);

        assert_eq!(report.dangerous_count, dangerous, "trial {trial}");
        assert_eq!(report.flagged_dangerous, flagged_dangerous, "trial {trial}");
        assert_eq!(report.false_flag_count, false_flags, "trial {trial}");
        assert_eq!(report.max_unflagged_weight, max_unflagged, "trial {trial}");
        assert_eq!(
            report.total_locations,
            padded.num_qubits as u64 * (depth(&padded) + 1) * 3,
            "trial {trial}"
        );
    }
}

#[test]
fn measurement_and_reset_absorption() {
    // Z commutes with readout and survives; X flips and is absorbed; a
    // reset wipes whatever reaches it.
    let c = parse_circuit("CX 0 1\nM 1\nR 1").unwrap();
    let data = all_data(2);
    let z = propagate_fault(
        &c,
        &FaultLocation {
            qubit: 1,
            layer: 1,
            pauli: FaultPauli::Z,
        },
        &data,
    )
    .unwrap();
    assert_eq!(z.flag_flips, vec![false]);
    assert_eq!(z.error.emit(), "+__");

    let y = propagate_fault(
        &c,
        &FaultLocation {
            qubit: 1,
            layer: 1,
            pauli: FaultPauli::Y,
        },
        &data,
    )
    .unwrap();
    assert_eq!(y.flag_flips, vec![true]);
    assert_eq!(y.error.emit(), "+__");
}
