use std::collections::BTreeMap;

use num_complex::Complex64;

use super::build::build_merged_measure;
use super::{AncillaTarget, GadgetError, LogicalOperatorKind, Readout, Step};
use crate::css::CssCode;
use crate::gf2::BinaryVector;
use crate::sim::{apply_in_place, encode, logical_index, BitwiseGate, LogicalState, TOLERANCE};

/// One `(eigenvalue, syndrome)` outcome class of a merged measurement.
#[derive(Clone, Debug)]
pub struct MergedBranch {
    /// `+1` or `−1`.
    pub eigenvalue: i8,
    /// `H̃·yᵀ` for the ancilla word `y`.
    pub syndrome: BinaryVector,
    /// Qubit whose single error explains the syndrome, if any.
    pub error_position: Option<usize>,
    pub probability: f64,
    /// Normalised data state after the single-error correction.
    pub post_state: LogicalState,
}

#[derive(Clone, Debug)]
pub struct MergedMeasurement {
    pub kind: LogicalOperatorKind,
    pub u: BinaryVector,
    pub branches: Vec<MergedBranch>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ClassKey {
    eigen: bool,
    syndrome: BinaryVector,
}

/// Measures `X̄_u` or `Z̄_u` on the single-block `data` through a recovery
/// ancilla, reading the eigenvalue and the error syndrome from the same
/// ancilla word.
///
/// For `X̄_u` the syndrome locates `Z` errors on the data, for `Z̄_u` it
/// locates `X` errors; a located single error is corrected in the returned
/// post-states.
pub fn merged_measurement(
    code: &CssCode,
    u: &BinaryVector,
    kind: LogicalOperatorKind,
    data: &LogicalState,
) -> Result<MergedMeasurement, GadgetError> {
    let g = build_merged_measure(code, u, kind)?;
    let (reader, coupling) = match (&g.steps[0], &g.steps[1]) {
        (
            Step::Prepare { ancilla, .. },
            Step::Gate { gate },
        ) => match &ancilla.target_state {
            AncillaTarget::ZeroPlusU { u } => (u.clone(), gate.clone()),
            _ => unreachable!("merged measurement prepares |0⟩ + |u⟩"),
        },
        _ => unreachable!("merged measurement starts with preparation and coupling"),
    };
    debug_assert!(matches!(&g.steps[2], Step::Measure { readout: Readout::Eigen { .. }, .. }));

    let dim = 1usize << code.k;
    let mut amps = vec![Complex64::default(); dim];
    let ri = logical_index(&reader);
    amps[0] = Complex64::new(1.0, 0.0);
    if ri != 0 {
        amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[ri] = amps[0];
    }
    let meter = encode(code, &amps)?;
    let mut state = data.tensor(&meter);
    apply_in_place(&coupling, &mut state)?;
    apply_in_place(&BitwiseGate::H { reg: 1 }, &mut state)?;

    let n = code.n;
    let h = &code.c0_generator;
    let total = state.norm_sqr();
    let mut groups: BTreeMap<ClassKey, Vec<(BinaryVector, LogicalState, Option<usize>)>> = BTreeMap::new();
    let mut split: BTreeMap<BinaryVector, Vec<(BinaryVector, Complex64)>> = BTreeMap::new();
    for (word, a) in state.terms() {
        split.entry(word.slice(n, n)).or_default().push((word.slice(0, n), *a));
    }
    for (y, terms) in split {
        let syndrome = h.syndrome(&y);
        let position = (!syndrome.is_zero())
            .then(|| (0..n).find(|&j| (0..h.row_count()).all(|r| h.get(r, j) == syndrome.get(r))))
            .flatten();
        let mut corrected = y.clone();
        if let Some(j) = position {
            corrected.flip(j);
        }
        let c = BinaryVector::from_bits(code.coset_leaders.rows().iter().map(|d| corrected.dot(d)));
        let key = ClassKey {
            eigen: code.k > 0 && c.dot(&reader),
            syndrome,
        };
        groups
            .entry(key)
            .or_default()
            .push((y, LogicalState::from_terms(vec![n], terms), position));
    }
    let mut branches = Vec::new();
    for (key, members) in groups {
        let rep = &members[0].1;
        for (y, s, _) in &members {
            if s.phase_relative_to(rep, TOLERANCE).is_none() {
                return Err(GadgetError::BranchMismatch {
                    label: "eigen".into(),
                    detail: format!("ancilla word {y} leaves a different data state"),
                });
            }
        }
        let probability = members.iter().map(|(_, s, _)| s.norm_sqr()).sum::<f64>() / total;
        let mut post = rep.clone();
        let position = members[0].2;
        if let Some(j) = position {
            let fix = BinaryVector::unit(n, j);
            let gate = match kind {
                LogicalOperatorKind::X => BitwiseGate::z(0, fix),
                LogicalOperatorKind::Z => BitwiseGate::x(0, fix),
            };
            apply_in_place(&gate, &mut post)?;
        }
        post.normalize();
        branches.push(MergedBranch {
            eigenvalue: if key.eigen { -1 } else { 1 },
            syndrome: key.syndrome,
            error_position: position,
            probability,
            post_state: post,
        });
    }
    Ok(MergedMeasurement {
        kind,
        u: u.clone(),
        branches,
    })
}
