//! Synthesis correctness over the full code library and randomized
//! stabilizer groups, plus frozen expectations for the baselines.



use stabbench_testkit::random_circuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabbench_core::circuit::{cost_of, emit_circuit, parse_circuit};
use stabbench_core::code::{build_default_manifest, load_suite};
use stabbench_core::gate::GateKind;
use stabbench_core::pauli::PauliString;
use stabbench_core::synth::{make_b2_baseline, make_b3_baseline, synthesize_prep, B2_INFLATION};
use stabbench_core::tableau::{check_stabilizers, simulate};

#[test]
fn whole_suite_synthesizes_and_verifies() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    for inst in &suite.instances {
        let c = synthesize_prep(&inst.generators).unwrap();
        assert_eq!(c.num_qubits, inst.num_qubits, "{}", inst.id);
        let report = check_stabilizers(&c, &inst.generators).unwrap();
        assert!(
            report.valid,
            "{}: {}/{} generators satisfied",
            inst.id,
            report.satisfied_count,
            inst.generators.len()
        );
    }
}

#[test]
fn synthesis_is_deterministic() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    for inst in suite.instances.iter().take(30) {
        let a = synthesize_prep(&inst.generators).unwrap();
        let b = synthesize_prep(&inst.generators).unwrap();
        assert_eq!(emit_circuit(&a), emit_circuit(&b), "{}", inst.id);
    }
}

/// No correct two-gate Bell preparation beats [H 0, CX 0 1] on cost, and
/// nothing with fewer gates works at all, so the synthesized circuit is
/// cost-minimal. Exhaustive over all one- and two-instruction circuits.
#[test]
fn bell_prep_is_minimal() {
    let bell = [
        PauliString::parse("+XX", 2).unwrap(),
        PauliString::parse("+ZZ", 2).unwrap(),
    ];
    let synth = synthesize_prep(&bell).unwrap();
    let synth_cost = cost_of(&synth);
    assert!(check_stabilizers(&synth, &bell).unwrap().valid);

    let gates_1q = [
        GateKind::I,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::SDag,
    ];
    let gates_2q = [GateKind::Cx, GateKind::Cz, GateKind::Swap];
    let mut lines: Vec<String> = Vec::new();
    for g in gates_1q {
        for q in 0..2 {
            lines.push(format!("{} {q}", g.name()));
        }
    }
    for g in gates_2q {
        lines.push(format!("{} 0 1", g.name()));
        lines.push(format!("{} 1 0", g.name()));
    }

    let mut better_or_equal_found = false;
    for a in &lines {
        for b in &lines {
            let c = parse_circuit(&format!("{a}\n{b}")).unwrap();
            let mut padded = c.clone();
            padded.num_qubits = 2;
            if !check_stabilizers(&padded, &bell).unwrap().valid {
                continue;
            }
            let cost = cost_of(&padded);
            assert!(cost >= synth_cost, "{a}; {b} beats synthesis");
            better_or_equal_found = true;
        }
    }
    assert!(better_or_equal_found, "search never reproduced the Bell state");

    for line in &lines {
        let mut c = parse_circuit(line).unwrap();
        c.num_qubits = 2;
        assert!(
            !check_stabilizers(&c, &bell).unwrap().valid,
            "single instruction {line} cannot entangle"
        );
    }
}

/// Any stabilizer group reachable by a random circuit synthesizes back to
/// a verifying preparation, signs and all.
#[test]
fn random_groups_synthesize() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E17_0001);
    for trial in 0..60 {
        let n = 2 + (trial % 6) as u32;
        let c = random_circuit(&mut rng, n, 30, false);
        let t = simulate(&c).unwrap();
        let r = rng.gen_range(1..=n) as usize;
        let generators: Vec<PauliString> = t.stabilizers()[..r].to_vec();
        let prep = synthesize_prep(&generators).unwrap();
        let report = check_stabilizers(&prep, &generators).unwrap();
        assert!(report.valid, "trial {trial}");
    }
}

#[test]
fn b2_baseline_inflates_suite_costs() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    for inst in suite.instances.iter().take(12) {
        let prep = synthesize_prep(&inst.generators).unwrap();
        let (baseline, cost) = make_b2_baseline(inst).unwrap();
        assert_eq!(cost, cost_of(&baseline), "{}", inst.id);
        assert_eq!(
            cost.g2q,
            cost_of(&prep).g2q * B2_INFLATION,
            "{}",
            inst.id
        );
        assert!(check_stabilizers(&baseline, &inst.generators).unwrap().valid);
    }
}

#[test]
fn b3_baseline_flags_nothing() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let iceberg = suite.instance("iceberg_m2").unwrap();
    let (prep, report) = make_b3_baseline(iceberg).unwrap();
    assert!(prep.measurement_record().is_empty());
    assert_eq!(report.flagged_dangerous, 0);
    assert_eq!(report.false_flag_count, 0);
    // d = 2 tolerates nothing, and the prep entangles, so danger exists.
    assert!(report.dangerous_count > 0);
    assert!(!report.is_fault_tolerant);
}
