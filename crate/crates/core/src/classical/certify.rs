use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ClassicalCode, ClassicalError};
use crate::gf2::{self, BinaryMatrix, BinaryVector, Gf2Error, DEFAULT_MAX_DIM};

/// Number of random dual codewords inspected as a cross-check of the
/// row-congruence argument.
const SAMPLED_WORDS: usize = 512;
const SAMPLE_SEED: u64 = 0x5EED_C0DE;

/// How the doubly-even property of the dual was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DoublyEvenEvidence {
    /// Every dual codeword was enumerated.
    Enumerated { words: u64 },
    /// Check rows have weight ≡ 0 mod 4 and pairwise even overlap, so every
    /// sum of rows does too; `sampled` random sums were re-checked directly.
    RowCongruence { sampled: usize },
    /// The property fails; `witness` is a dual codeword of weight ≢ 0 mod 4.
    Refuted { witness: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EligibilityCertificate {
    /// `C⊥ ⊆ C`, tested as `check · checkᵀ = 0`.
    pub contains_dual: bool,
    /// Every word of `C⊥` has weight divisible by 4.
    pub dual_doubly_even: bool,
    pub doubly_even_evidence: DoublyEvenEvidence,
    pub check_row_weights: Vec<usize>,
    pub lemma1_w: Option<usize>,
    /// Coset label (bit string of `u`) → common weight residue mod `w`, or
    /// `None` when the coset's weights are not constant mod `w`.
    pub lemma1_residues: Option<BTreeMap<String, Option<usize>>>,
}

pub fn certify(code: &ClassicalCode, w: Option<usize>) -> Result<EligibilityCertificate, ClassicalError> {
    certify_with_budget(code, w, DEFAULT_MAX_DIM)
}

/// Certifies lemma eligibility of `code`.
///
/// Dual containment and the doubly-even property are exact (the latter from
/// the row-pair congruence argument, with full enumeration when the dual has
/// dimension at most `max_dim.min(20)`). Weight residues for `w` need the
/// dual enumerable within `max_dim`.
pub fn certify_with_budget(
    code: &ClassicalCode,
    w: Option<usize>,
    max_dim: usize,
) -> Result<EligibilityCertificate, ClassicalError> {
    let leaders = if code.check.is_self_orthogonal() {
        complement_basis(&code.check, &code.generator)
    } else {
        BinaryMatrix::empty(code.n)
    };
    let w = w.filter(|_| code.check.is_self_orthogonal());
    let cert = certify_subcode(&code.check, &leaders, w, max_dim)?;
    Ok(cert)
}

/// Certificate for the code space `rowspace(c0) + rowspace(leaders)` with
/// `c0` playing the role of the dual: containment and doubly-even tests run
/// on `c0`, residues on the cosets `c0 + u·leaders`.
pub fn certify_subcode(
    c0: &BinaryMatrix,
    leaders: &BinaryMatrix,
    w: Option<usize>,
    max_dim: usize,
) -> Result<EligibilityCertificate, Gf2Error> {
    let contains_dual = c0.is_self_orthogonal();
    let check_row_weights = c0.row_weights();
    let (dual_doubly_even, doubly_even_evidence) = doubly_even(c0, contains_dual, max_dim.min(20));
    let lemma1_residues = match w {
        Some(w) => Some(coset_weight_residues(c0, leaders, w, max_dim)?),
        None => None,
    };
    Ok(EligibilityCertificate {
        contains_dual,
        dual_doubly_even,
        doubly_even_evidence,
        check_row_weights,
        lemma1_w: w,
        lemma1_residues,
    })
}

fn doubly_even(check: &BinaryMatrix, self_orthogonal: bool, enum_dim: usize) -> (bool, DoublyEvenEvidence) {
    if let Some(bad) = check.rows().iter().find(|r| r.weight() % 4 != 0) {
        return (
            false,
            DoublyEvenEvidence::Refuted {
                witness: bad.to_string(),
            },
        );
    }
    if !self_orthogonal {
        // Two rows with odd overlap: their sum has weight ≡ 2 mod 4.
        for (i, a) in check.rows().iter().enumerate() {
            for b in &check.rows()[i + 1..] {
                if a.dot(b) {
                    return (
                        false,
                        DoublyEvenEvidence::Refuted {
                            witness: (a ^ b).to_string(),
                        },
                    );
                }
            }
        }
    }
    if check.row_count() <= enum_dim {
        let wd = gf2::weight_distribution(check, enum_dim).expect("within guard");
        let ok = wd.keys().all(|w| w % 4 == 0);
        assert!(ok, "row congruence argument contradicted by enumeration");
        return (
            true,
            DoublyEvenEvidence::Enumerated {
                words: wd.values().sum(),
            },
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..SAMPLED_WORDS {
        let mut word = BinaryVector::zeros(check.col_count());
        for r in check.rows() {
            if rng.gen::<bool>() {
                word.xor_assign(r);
            }
        }
        assert_eq!(
            word.weight() % 4,
            0,
            "row congruence argument contradicted by a sampled word"
        );
    }
    (
        true,
        DoublyEvenEvidence::RowCongruence {
            sampled: SAMPLED_WORDS,
        },
    )
}

/// Rows of `code_generator` that extend `rowspace(subspace)` to the full code,
/// chosen greedily in order.
pub(crate) fn complement_basis(subspace: &BinaryMatrix, code_generator: &BinaryMatrix) -> BinaryMatrix {
    let base = subspace.independent_rows();
    let sub_rank = base.row_count();
    let all = base.stack(code_generator).independent_rows();
    BinaryMatrix::from_rows(
        code_generator.col_count(),
        all.rows()[sub_rank..].to_vec(),
    )
}

/// Weight residues mod `w` of the cosets `rowspace(c0) + u·leaders` for every
/// `u` (at most 2^6 cosets).
pub fn coset_weight_residues(
    c0: &BinaryMatrix,
    leaders: &BinaryMatrix,
    w: usize,
    max_dim: usize,
) -> Result<BTreeMap<String, Option<usize>>, Gf2Error> {
    assert!(w > 0, "modulus must be positive");
    let k = leaders.row_count();
    let basis = c0.row_basis();
    if basis.row_count() > max_dim {
        return Err(Gf2Error::DimensionTooLarge {
            dimension: basis.row_count(),
            max_dim,
        });
    }
    if k > 6 {
        return Err(Gf2Error::DimensionTooLarge {
            dimension: k,
            max_dim: 6,
        });
    }
    let mut out = BTreeMap::new();
    for u in 0..1u64 << k {
        let uv = BinaryVector::from_u64(k, u);
        let shift = if k == 0 {
            BinaryVector::zeros(c0.col_count())
        } else {
            leaders.left_mul(&uv)
        };
        let mut residue: Option<Option<usize>> = None;
        gf2::for_each_in_coset(basis.rows(), &shift, |word, _| {
            let r = word.weight() % w;
            residue = match residue {
                None => Some(Some(r)),
                Some(Some(prev)) if prev == r => Some(Some(r)),
                _ => Some(None),
            };
        });
        out.insert(uv.to_string(), residue.flatten());
    }
    Ok(out)
}
