use super::{
    AncillaCost, AncillaSpec, AncillaTarget, CorrectionTarget, Embedding, Gadget, GadgetError, GadgetKind,
    IdealAction, LogicalOperatorKind, Readout, Register, RegisterKind, Step, TeleportVariant, Vocabulary,
};
use crate::css::CssCode;
use crate::gf2::{BinaryMatrix, BinaryVector};
use crate::sim::{BitwiseGate, MeasureBasis};

const PAULIS: Vocabulary = Vocabulary {
    paulis: true,
    cx: false,
    cz: false,
};

/// Builds the step list of `kind` for blocks of `code`.
///
/// `logical_indices` selects the switched qubit for [`GadgetKind::SwitchOut`]
/// and [`GadgetKind::SwitchIn`], and the support of `u` for
/// [`GadgetKind::MergedMeasureRecover`] (an `X̄_u` measurement). Correction
/// tables are left empty; see [`super::derive_corrections`].
pub fn build_gadget(kind: GadgetKind, code: &CssCode, logical_indices: &[usize]) -> Result<Gadget, GadgetError> {
    if code.k == 0 {
        return Err(unsupported(kind, "a code with k ≥ 1"));
    }
    for &i in logical_indices {
        if i >= code.k {
            return Err(GadgetError::BadLogicalIndex { index: i, k: code.k });
        }
    }
    let first = logical_indices.first().copied().unwrap_or(0);
    match kind {
        GadgetKind::Teleport => build_teleport(code, TeleportVariant::CxPair),
        GadgetKind::IntraBlockCX => intra_block_cx(code),
        GadgetKind::Toffoli => toffoli(code),
        GadgetKind::SwitchOut => switch_out(code, first),
        GadgetKind::SwitchIn => Ok(switch_in(code, first)),
        GadgetKind::MergedMeasureRecover => {
            let u = BinaryVector::from_indices(code.k, logical_indices);
            build_merged_measure(code, &u, LogicalOperatorKind::X)
        }
    }
}

fn unsupported(gadget: GadgetKind, requirement: &str) -> GadgetError {
    GadgetError::LemmaUnsupported {
        gadget,
        requirement: requirement.to_string(),
    }
}

fn blocks(names: &[&str]) -> Vec<Register> {
    names
        .iter()
        .map(|n| Register {
            name: n.to_string(),
            kind: RegisterKind::Block,
        })
        .collect()
}

fn prepare(code: &CssCode, reg: usize, target: AncillaTarget) -> Step {
    Step::Prepare {
        reg,
        ancilla: ancilla_spec(code, target),
    }
}

fn gate(g: BitwiseGate) -> Step {
    Step::Gate { gate: g }
}

fn measure(reg: usize, basis: MeasureBasis, label: &str, readout: Readout) -> Step {
    Step::Measure {
        reg,
        basis,
        label: label.to_string(),
        readout,
    }
}

fn correct(label: &str, keys: &[&str], scope: &[usize], vocabulary: Vocabulary, target: CorrectionTarget) -> Step {
    Step::Correct {
        label: label.to_string(),
        keys: keys.iter().map(|k| k.to_string()).collect(),
        scope: scope.to_vec(),
        vocabulary,
        target,
        table: None,
    }
}

fn gadget(kind: GadgetKind, code: &CssCode, registers: Vec<Register>, steps: Vec<Step>) -> Gadget {
    Gadget {
        name: kind,
        variant: None,
        code: code.label(),
        registers,
        inputs: vec![0],
        outputs: vec![0],
        embedding: Embedding::Direct,
        ideal: IdealAction::Identity,
        steps,
        recoveries: kind.recoveries(),
        ancilla_blocks: 0,
        cat_repetitions: 0,
    }
}

/// Teleports a whole block through a Bell pair of blocks.
pub fn build_teleport(code: &CssCode, variant: TeleportVariant) -> Result<Gadget, GadgetError> {
    let kind = GadgetKind::Teleport;
    if code.k == 0 {
        return Err(unsupported(kind, "a code with k ≥ 1"));
    }
    let (a, b, c) = (0, 1, 2);
    let mut steps = vec![prepare(code, b, AncillaTarget::PlusL)];
    match variant {
        TeleportVariant::CxPair => {
            steps.push(prepare(code, c, AncillaTarget::ZeroL));
            steps.push(gate(BitwiseGate::cx(b, c)));
        }
        TeleportVariant::CzPair => {
            if !(code.satisfies_lemma3() && code.dd_transpose.is_identity()) {
                return Err(unsupported(kind, "C₁ = C₀⊥ and D̃D̃ᵀ = I for the CZ pair"));
            }
            steps.push(prepare(code, c, AncillaTarget::PlusL));
            steps.push(gate(BitwiseGate::cz(b, c)));
        }
    }
    steps.push(gate(BitwiseGate::cx(a, b)));
    steps.push(measure(a, MeasureBasis::X, "a", Readout::Logical));
    steps.push(measure(b, MeasureBasis::Z, "b", Readout::Logical));
    if variant == TeleportVariant::CzPair {
        steps.push(gate(BitwiseGate::H { reg: c }));
    }
    steps.push(correct("teleport", &["a", "b"], &[c], PAULIS, CorrectionTarget::Ideal));
    let mut g = gadget(kind, code, blocks(&["data", "pair_a", "pair_b"]), steps);
    g.variant = Some(variant);
    g.outputs = vec![c];
    g.ancilla_blocks = 2;
    Ok(g)
}

/// CNOT between two single-qubit blocks by teleporting the control into an
/// ancilla, acting blockwise, and teleporting it back.
fn intra_block_cx(code: &CssCode) -> Result<Gadget, GadgetError> {
    let kind = GadgetKind::IntraBlockCX;
    if code.k != 1 {
        return Err(unsupported(kind, "k = 1 (blocks stand in for the logical qubits of one block)"));
    }
    let (d1, d2, a1, a2) = (0, 1, 2, 3);
    let steps = vec![
        prepare(code, a1, AncillaTarget::PlusL),
        prepare(code, a2, AncillaTarget::ZeroL),
        gate(BitwiseGate::cx(a1, a2)),
        gate(BitwiseGate::cx(d1, a1)),
        measure(d1, MeasureBasis::X, "t1x", Readout::Logical),
        measure(a1, MeasureBasis::Z, "t1z", Readout::Logical),
        gate(BitwiseGate::cx(a2, d2)),
        prepare(code, a1, AncillaTarget::PlusL),
        prepare(code, d1, AncillaTarget::ZeroL),
        gate(BitwiseGate::cx(a1, d1)),
        gate(BitwiseGate::cx(a2, a1)),
        measure(a2, MeasureBasis::X, "t2x", Readout::Logical),
        measure(a1, MeasureBasis::Z, "t2z", Readout::Logical),
        correct(
            "cx",
            &["t1x", "t1z", "t2x", "t2z"],
            &[d1, d2],
            PAULIS,
            CorrectionTarget::Ideal,
        ),
    ];
    let mut g = gadget(kind, code, blocks(&["control", "target", "anc_1", "anc_2"]), steps);
    g.inputs = vec![d1, d2];
    g.outputs = vec![d1, d2];
    g.ideal = IdealAction::Cnot;
    g.ancilla_blocks = 2;
    Ok(g)
}

/// Toffoli by an ancilla `Σ_{ab}|a,b,ab⟩` prepared with a cat-controlled
/// `CZ̄ ⊗ Z̄` measurement, then consumed by the data.
fn toffoli(code: &CssCode) -> Result<Gadget, GadgetError> {
    let kind = GadgetKind::Toffoli;
    if code.k != 1 || !code.satisfies_lemma3() || !code.dd_transpose.is_identity() {
        return Err(unsupported(kind, "k = 1, C₁ = C₀⊥ and an odd-weight D̃ row"));
    }
    let (x1, x2, x3, a1, a2, a3, cat) = (0, 1, 2, 3, 4, 5, 6);
    let mut registers = blocks(&["x1", "x2", "x3", "anc_1", "anc_2", "anc_3"]);
    registers.push(Register {
        name: "cat".into(),
        kind: RegisterKind::Cat,
    });
    let steps = vec![
        prepare(code, a1, AncillaTarget::PlusL),
        prepare(code, a2, AncillaTarget::PlusL),
        prepare(code, a3, AncillaTarget::PlusL),
        prepare(code, cat, AncillaTarget::Cat { n: code.n }),
        gate(BitwiseGate::Ccz { a: cat, b: a1, c: a2 }),
        gate(BitwiseGate::cz(cat, a3)),
        measure(cat, MeasureBasis::X, "cat", Readout::Parity),
        correct("prep", &["cat"], &[a1, a2, a3], PAULIS, CorrectionTarget::ReferenceBranch),
        gate(BitwiseGate::cx(a1, x1)),
        measure(x1, MeasureBasis::Z, "x1", Readout::Logical),
        gate(BitwiseGate::cx(a2, x2)),
        measure(x2, MeasureBasis::Z, "x2", Readout::Logical),
        gate(BitwiseGate::cx(x3, a3)),
        measure(x3, MeasureBasis::X, "x3", Readout::Logical),
        correct(
            "toffoli",
            &["x1", "x2", "x3"],
            &[a1, a2, a3],
            Vocabulary {
                paulis: true,
                cx: true,
                cz: true,
            },
            CorrectionTarget::Ideal,
        ),
    ];
    let mut g = gadget(kind, code, registers, steps);
    g.inputs = vec![x1, x2, x3];
    g.outputs = vec![a1, a2, a3];
    g.ideal = IdealAction::Toffoli;
    g.ancilla_blocks = 3;
    g.cat_repetitions = code.distance.value;
    Ok(g)
}

/// `e_q·(D̃D̃ᵀ)^{-1}`: the ancilla word whose bitwise CZ pairing reads `v_q`.
fn cz_reader(code: &CssCode, u: &BinaryVector) -> Option<BinaryVector> {
    let inv = code.dd_transpose.inverse()?;
    Some(inv.left_mul(u))
}

/// Moves logical qubit `q` of a block into a fresh block, leaving `|0⟩` behind.
fn switch_out(code: &CssCode, q: usize) -> Result<Gadget, GadgetError> {
    let kind = GadgetKind::SwitchOut;
    let reader = code
        .satisfies_lemma3()
        .then(|| cz_reader(code, &BinaryVector::unit(code.k, q)))
        .flatten()
        .ok_or_else(|| unsupported(kind, "C₁ = C₀⊥ for the merged Z̄ measurement"))?;
    let (a, d, m) = (0, 1, 2);
    let steps = vec![
        prepare(
            code,
            d,
            AncillaTarget::ZeroPlusU {
                u: BinaryVector::unit(code.k, q),
            },
        ),
        gate(BitwiseGate::cx(d, a)),
        prepare(code, m, AncillaTarget::ZeroPlusU { u: reader.clone() }),
        gate(BitwiseGate::cz(a, m)),
        measure(m, MeasureBasis::X, "eigen", Readout::Eigen { u: reader }),
        correct("switch", &["eigen"], &[a, d], PAULIS, CorrectionTarget::Ideal),
    ];
    let mut g = gadget(kind, code, blocks(&["data", "out", "meter"]), steps);
    g.outputs = vec![a, d];
    g.ideal = IdealAction::SwitchOut { qubit: q };
    g.ancilla_blocks = 2;
    Ok(g)
}

/// Inverse of [`switch_out`]: qubit `q` of the second block returns to the
/// first, whose qubit `q` must be `|0⟩`.
fn switch_in(code: &CssCode, q: usize) -> Gadget {
    let (a, d) = (0, 1);
    let steps = vec![
        gate(BitwiseGate::cx(d, a)),
        measure(d, MeasureBasis::X, "out", Readout::Logical),
        correct("switch", &["out"], &[a], PAULIS, CorrectionTarget::Ideal),
    ];
    let mut g = gadget(GadgetKind::SwitchIn, code, blocks(&["data", "out"]), steps);
    g.inputs = vec![a, d];
    g.embedding = Embedding::Switched { qubit: q };
    g.ancilla_blocks = 1;
    g
}

/// Measurement of `X̄_u` (bitwise CX from `|0⟩_L + |u⟩_L`) or `Z̄_u` (bitwise
/// CZ with `|0⟩_L + |u(D̃D̃ᵀ)^{-1}⟩_L`) read from the recovery ancilla.
pub fn build_merged_measure(
    code: &CssCode,
    u: &BinaryVector,
    kind: LogicalOperatorKind,
) -> Result<Gadget, GadgetError> {
    let gk = GadgetKind::MergedMeasureRecover;
    if code.k == 0 || u.len() != code.k {
        return Err(unsupported(gk, "k ≥ 1 and u of length k"));
    }
    let (a, m) = (0, 1);
    let (reader, coupling) = match kind {
        LogicalOperatorKind::X => (u.clone(), BitwiseGate::cx(m, a)),
        LogicalOperatorKind::Z => {
            let r = code
                .satisfies_lemma3()
                .then(|| cz_reader(code, u))
                .flatten()
                .ok_or_else(|| unsupported(gk, "C₁ = C₀⊥ for a Z̄ measurement"))?;
            (r, BitwiseGate::cz(a, m))
        }
    };
    let steps = vec![
        prepare(code, m, AncillaTarget::ZeroPlusU { u: reader.clone() }),
        gate(coupling),
        measure(m, MeasureBasis::X, "eigen", Readout::Eigen { u: reader }),
    ];
    let mut g = gadget(gk, code, blocks(&["data", "meter"]), steps);
    g.ideal = IdealAction::Projector { u: u.clone(), kind };
    g.ancilla_blocks = 1;
    Ok(g)
}

/// Preparation cost and verification checks for one ancilla target.
pub fn ancilla_spec(code: &CssCode, target: AncillaTarget) -> AncillaSpec {
    let h = &code.c0_generator;
    let row_gates: usize = h.row_weights().iter().sum();
    let (checks, gates, steps) = match &target {
        AncillaTarget::ZeroL => (h.null_space(), row_gates, h.row_count()),
        AncillaTarget::PlusL => {
            let g = &code.c1_generator;
            (g.null_space(), g.row_weights().iter().sum(), g.row_count())
        }
        AncillaTarget::ZeroPlusU { u } => {
            let shift = if code.k == 0 {
                BinaryVector::zeros(code.n)
            } else {
                code.coset_leaders.left_mul(u)
            };
            let extra = if shift.is_zero() { 0 } else { shift.weight() };
            let mut span = h.clone();
            span.push_row(shift);
            (span.null_space(), row_gates + extra, h.row_count() + usize::from(extra > 0))
        }
        AncillaTarget::Cat { n } => {
            let rows = (1..*n).map(|j| BinaryVector::from_indices(*n, &[j - 1, j])).collect();
            (BinaryMatrix::from_rows(*n, rows), *n, n.saturating_sub(1))
        }
    };
    AncillaSpec {
        target_state: target,
        verification: checks.into_rows(),
        prep_gate_count: gates,
        prep_time_steps: steps,
    }
}

/// `|0⟩_L` preparation and verification cost with mean check-row weight `w`:
/// `w` gates per `H̃` row, and `w(n−k)/2 + (d+1)k` verification CNOTs.
pub fn ancilla_cost(code: &CssCode, w: f64) -> AncillaCost {
    let mut spec = ancilla_spec(code, AncillaTarget::ZeroL);
    let rows = code.c0_generator.row_count();
    spec.prep_gate_count = (w * rows as f64).round() as usize;
    let half = (code.n - code.k) as f64 / 2.0;
    let k = code.k as f64;
    let leader = code.mean_leader_weight();
    AncillaCost {
        spec,
        mean_check_weight: w,
        verification_cnots: w * half + (code.distance.value as f64 + 1.0) * k,
        verification_cnots_achieved: w * half + leader * k,
        mean_leader_weight: leader,
    }
}
