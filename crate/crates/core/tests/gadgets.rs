use std::collections::BTreeMap;

use cssft::css::CssCode;
use cssft::gadgets::*;
use cssft::gf2::BinaryVector;
use cssft::registry::lookup;
use cssft::sim::{apply_in_place, encode, encode_basis, logical_amplitudes, toffoli, BitwiseGate, CMatrix};
use num_complex::Complex64;

fn code(name: &str) -> CssCode {
    lookup(name).unwrap().build().unwrap()
}

fn outcome(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn table<'a>(g: &'a Gadget, label: &str) -> &'a [CorrectionEntry] {
    g.tables().into_iter().find(|(l, _)| *l == label).unwrap().1
}

fn ops_for<'a>(t: &'a [CorrectionEntry], o: &BTreeMap<String, u64>) -> &'a [LogicalOp] {
    &t.iter().find(|e| &e.outcome == o).unwrap().ops
}

#[test]
fn teleport_variants_relocate_identically() {
    let c = code("steane");
    let mut actions = Vec::new();
    for variant in [TeleportVariant::CxPair, TeleportVariant::CzPair] {
        let g = build_teleport(&c, variant).unwrap();
        assert_eq!((g.recoveries, g.ancilla_blocks), (2, 2));
        let r = simulate_gadget(&g, &c).unwrap();
        assert!(r.passes(), "{variant:?}: {r:?}");
        assert_eq!(r.branches.len(), 4);
        let total: f64 = r.branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(r.branches.iter().all(|b| (b.probability - 0.25).abs() < 1e-9));
        actions.push(r.action.derived());
    }
    assert!(cssft::sim::max_abs_diff(&actions[0], &actions[1]) < 1e-9);
    assert!(cssft::sim::max_abs_diff(&actions[0], &CMatrix::identity(2, 2)) < 1e-9);
}

#[test]
fn teleport_corrections_are_the_textbook_paulis() {
    // Standard teleportation: an X-basis outcome 1 on the data calls for Z̄,
    // a Z-basis outcome 1 on the pair half calls for X̄.
    let c = code("steane");
    let g = derive_corrections(&build_teleport(&c, TeleportVariant::CxPair).unwrap(), &c).unwrap();
    let t = table(&g, "teleport");
    let out = 2;
    assert!(ops_for(t, &outcome(&[("a", 0), ("b", 0)])).is_empty());
    assert_eq!(ops_for(t, &outcome(&[("a", 1), ("b", 0)])), [LogicalOp::Z { reg: out, qubit: 0 }]);
    assert_eq!(ops_for(t, &outcome(&[("a", 0), ("b", 1)])), [LogicalOp::X { reg: out, qubit: 0 }]);
    assert_eq!(ops_for(t, &outcome(&[("a", 1), ("b", 1)])).len(), 2);
}

#[test]
fn teleport_moves_a_superposition() {
    let c = code("steane");
    let g = derive_corrections(&build_teleport(&c, TeleportVariant::CxPair).unwrap(), &c).unwrap();
    let amps = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let input = encode(&c, &amps).unwrap();
    let branches = run_gadget_on(&g, &c, &input).unwrap();
    assert_eq!(branches.len(), 4);
    for b in &branches {
        let (out, leak) = logical_amplitudes(&b.state, &[&c]);
        assert!(leak < 1e-12);
        let phase = out[0] / amps[0];
        assert!((phase.norm() - 1.0).abs() < 1e-9);
        assert!((out[1] - phase * amps[1]).norm() < 1e-9, "{:?}", b.outcome);
    }
}

#[test]
fn teleport_on_two_qubit_blocks() {
    let c = code("four-qubit");
    let r = simulate_gadget(&build_teleport(&c, TeleportVariant::CxPair).unwrap(), &c).unwrap();
    assert!(r.passes());
    assert_eq!(r.branches.len(), 16);
    // The CZ pair needs D̃D̃ᵀ = I, which this code lacks.
    assert!(matches!(
        build_teleport(&c, TeleportVariant::CzPair),
        Err(GadgetError::LemmaUnsupported { .. })
    ));
}

#[test]
fn block_cnot_network() {
    let c = code("steane");
    let g = build_gadget(GadgetKind::IntraBlockCX, &c, &[]).unwrap();
    assert_eq!((g.recoveries, g.ancilla_blocks), (4, 2));
    let r = simulate_gadget(&g, &c).unwrap();
    assert!(r.passes(), "{r:?}");
    assert_eq!(r.branches.len(), 16);
    let cnot = cssft::sim::permutation(4, |j| if j & 2 != 0 { j ^ 1 } else { j });
    assert!(cssft::sim::max_abs_diff(&r.action.derived(), &cnot) < 1e-9);
    assert!(r.probability_defect < 1e-9);
}

#[test]
fn toffoli_network() {
    let c = code("steane");
    let g = build_gadget(GadgetKind::Toffoli, &c, &[]).unwrap();
    assert_eq!((g.recoveries, g.ancilla_blocks, g.cat_repetitions), (8, 3, 3));
    let r = simulate_gadget(&g, &c).unwrap();
    assert!(r.passes(), "max deviation {}", r.max_deviation);
    // cat parity × three data readouts.
    assert_eq!(r.branches.len(), 16);
    assert!(r.probability_defect < 1e-9);
    assert!(cssft::sim::max_abs_diff(&r.action.derived(), &toffoli()) < 1e-9);

    let prep = table(&r.gadget, "prep");
    assert!(ops_for(prep, &outcome(&[("cat", 0)])).is_empty());
    // Odd cat parity leaves Σ|a,b,ab⊕1⟩; flipping the third ancilla fixes it.
    assert_eq!(ops_for(prep, &outcome(&[("cat", 1)])), [LogicalOp::X { reg: 5, qubit: 0 }]);

    // Outcome 1 on the first data readout needs CX from the second ancilla
    // onto the third; the third readout needs CZ between the first two.
    let fin = table(&r.gadget, "toffoli");
    let ops = ops_for(fin, &outcome(&[("x1", 1), ("x2", 0), ("x3", 0)]));
    assert!(ops.contains(&LogicalOp::Cx { control: 4, target: 5 }), "{ops:?}");
    let ops = ops_for(fin, &outcome(&[("x1", 0), ("x2", 0), ("x3", 1)]));
    assert!(ops.contains(&LogicalOp::Cz { a: 3, b: 4 }), "{ops:?}");
    assert!(ops.contains(&LogicalOp::Z { reg: 5, qubit: 0 }), "{ops:?}");
}

#[test]
fn toffoli_requires_lemma_conditions() {
    assert!(matches!(
        build_gadget(GadgetKind::Toffoli, &code("four-qubit"), &[]),
        Err(GadgetError::LemmaUnsupported { .. })
    ));
    assert!(build_gadget(GadgetKind::Toffoli, &code("golay23"), &[]).is_ok());
}

#[test]
fn switching_out_and_back_in() {
    for (name, q) in [("steane", 0), ("four-qubit", 0), ("four-qubit", 1)] {
        let c = code(name);
        let out = build_gadget(GadgetKind::SwitchOut, &c, &[q]).unwrap();
        assert_eq!(out.recoveries, 1);
        let r = simulate_gadget(&out, &c).unwrap();
        assert!(r.passes(), "{name} out {q}: {r:?}");
        let back = build_gadget(GadgetKind::SwitchIn, &c, &[q]).unwrap();
        assert_eq!(back.recoveries, 1);
        let r = simulate_gadget(&back, &c).unwrap();
        assert!(r.passes(), "{name} in {q}: {r:?}");
    }
}

#[test]
fn bad_logical_index() {
    assert!(matches!(
        build_gadget(GadgetKind::SwitchOut, &code("steane"), &[1]),
        Err(GadgetError::BadLogicalIndex { index: 1, k: 1 })
    ));
}

#[test]
fn merged_measure_gadget_projects() {
    for name in ["steane", "four-qubit"] {
        let c = code(name);
        let u = BinaryVector::ones(c.k);
        for kind in [LogicalOperatorKind::X, LogicalOperatorKind::Z] {
            let g = build_merged_measure(&c, &u, kind).unwrap();
            let r = simulate_gadget(&g, &c).unwrap();
            assert!(r.passes(), "{name} {kind:?}: {r:?}");
            assert_eq!(r.branches.len(), 2);
        }
    }
}

#[test]
fn merged_measurement_on_eigenstate() {
    let c = code("steane");
    let plus = encode(&c, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)].map(|a| a / 2f64.sqrt())).unwrap();
    let minus = encode(&c, &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)].map(|a| a / 2f64.sqrt())).unwrap();
    let one = BinaryVector::ones(1);
    for (state, sign) in [(&plus, 1), (&minus, -1)] {
        let m = merged_measurement(&c, &one, LogicalOperatorKind::X, state).unwrap();
        assert_eq!(m.branches.len(), 1);
        assert_eq!(m.branches[0].eigenvalue, sign);
        assert!(m.branches[0].syndrome.is_zero());
        assert!((m.branches[0].probability - 1.0).abs() < 1e-9);
        assert!(m.branches[0].post_state.phase_relative_to(state, 1e-9).is_some());
    }
    let zero = encode_basis(&c, &BinaryVector::zeros(1)).unwrap();
    let m = merged_measurement(&c, &one, LogicalOperatorKind::Z, &zero).unwrap();
    assert_eq!(m.branches.len(), 1);
    assert_eq!(m.branches[0].eigenvalue, 1);
}

#[test]
fn merged_measurement_locates_single_errors() {
    let c = code("steane");
    let plus = encode(&c, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)].map(|a| a / 2f64.sqrt())).unwrap();
    let zero = encode_basis(&c, &BinaryVector::zeros(1)).unwrap();
    let one = BinaryVector::ones(1);
    for j in 0..c.n {
        // Expected syndrome from the check matrix directly: column j.
        let column = BinaryVector::from_bits((0..c.c0_generator.row_count()).map(|r| c.c0_generator.get(r, j)));

        let mut s = plus.clone();
        apply_in_place(&BitwiseGate::z(0, BinaryVector::unit(c.n, j)), &mut s).unwrap();
        let m = merged_measurement(&c, &one, LogicalOperatorKind::X, &s).unwrap();
        assert_eq!(m.branches.len(), 1, "Z error at {j}");
        let b = &m.branches[0];
        assert_eq!((b.eigenvalue, b.error_position), (1, Some(j)));
        assert_eq!(b.syndrome, column);
        assert!(b.post_state.phase_relative_to(&plus, 1e-9).is_some());

        let mut s = zero.clone();
        apply_in_place(&BitwiseGate::x(0, BinaryVector::unit(c.n, j)), &mut s).unwrap();
        let m = merged_measurement(&c, &one, LogicalOperatorKind::Z, &s).unwrap();
        let b = &m.branches[0];
        assert_eq!((m.branches.len(), b.eigenvalue, b.error_position), (1, 1, Some(j)));
        assert!(b.post_state.phase_relative_to(&zero, 1e-9).is_some());
    }
}

#[test]
fn merged_measurement_with_u_zero_is_plain_syndrome_extraction() {
    let c = code("steane");
    let plus = encode(&c, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)].map(|a| a / 2f64.sqrt())).unwrap();
    let mut s = plus.clone();
    apply_in_place(&BitwiseGate::z(0, BinaryVector::unit(7, 4)), &mut s).unwrap();
    let m = merged_measurement(&c, &BinaryVector::zeros(1), LogicalOperatorKind::X, &s).unwrap();
    assert_eq!(m.branches.len(), 1);
    assert_eq!(m.branches[0].eigenvalue, 1);
    assert_eq!(m.branches[0].error_position, Some(4));
}

#[test]
fn ancilla_costs() {
    let big = code("bch127-29");
    let cost = ancilla_cost(&big, 64.0);
    assert_eq!(cost.verification_cnots, 3600.0);
    assert_eq!(cost.spec.prep_time_steps, 49);
    assert_eq!(cost.spec.prep_gate_count, 64 * 49);

    let steane = code("steane");
    let cost = ancilla_cost(&steane, 4.0);
    assert_eq!(cost.spec.prep_time_steps, 3);
    assert_eq!(cost.verification_cnots, 4.0 * 3.0 + 4.0);
    // Every verification check annihilates the words of |0⟩_L.
    let zero = encode_basis(&steane, &BinaryVector::zeros(1)).unwrap();
    for (w, _) in zero.terms() {
        assert!(cost.spec.verification.iter().all(|chk| !chk.dot(w)));
    }

    let golay = code("golay24");
    let cost = ancilla_cost(&golay, 8.0);
    assert_eq!(cost.verification_cnots, 8.0 * 12.0);
}

#[test]
fn step_lists_are_transversal_and_serialise() {
    let c = code("steane");
    for kind in GadgetKind::ALL {
        let g = build_gadget(kind, &c, &[0]).unwrap();
        assert!(g.is_transversal(), "{kind}");
        let back: Gadget = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert_eq!(kind.name().parse::<GadgetKind>().unwrap(), kind);
    }
}
