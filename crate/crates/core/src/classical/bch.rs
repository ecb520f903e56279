use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::certify::{certify_with_budget, DoublyEvenEvidence};
use super::field::{poly_mul, Gf2m};
use super::{ClassicalCode, ClassicalError, Distance, Family, DISTANCE_MAX_DIM};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Narrow-sense binary BCH code of length `2^m − 1` with designed distance `δ`.
///
/// The parity checks are the GF(2) expansions of `Σ_j c_j α^{ij} = 0` for
/// `i = 1 … δ−1`, one row per bit of the field element. Those rows are kept in
/// [`ClassicalCode::check_expanded`]; the check matrix is the subset of them
/// that is linearly independent, taken in order.
pub fn bch_code(m: u32, designed_distance: usize) -> Result<ClassicalCode, ClassicalError> {
    bch_code_with_budget(m, designed_distance, DISTANCE_MAX_DIM)
}

/// [`bch_code`] with an explicit enumeration limit for the exact-distance search.
pub fn bch_code_with_budget(
    m: u32,
    designed_distance: usize,
    max_dim: usize,
) -> Result<ClassicalCode, ClassicalError> {
    let code = build(m, designed_distance)?;
    Ok(code.with_exact_distance(max_dim))
}

fn build(m: u32, delta: usize) -> Result<ClassicalCode, ClassicalError> {
    if !(3..=8).contains(&m) {
        return Err(ClassicalError::InvalidParameters(format!(
            "BCH field degree m = {m} outside 3..=8"
        )));
    }
    let field = Gf2m::new(m).expect("tabulated degree");
    let n = field.order();
    if delta < 3 || delta % 2 == 0 {
        return Err(ClassicalError::InvalidParameters(format!(
            "designed distance {delta} must be odd and at least 3"
        )));
    }
    if delta > n {
        return Err(ClassicalError::InvalidParameters(format!(
            "designed distance {delta} exceeds length {n}"
        )));
    }

    let mut seen = BTreeSet::new();
    let mut generator_poly = vec![true];
    for i in 1..delta {
        let coset = field.cyclotomic_coset(i);
        let rep = *coset.iter().min().unwrap();
        if seen.insert(rep) {
            generator_poly = poly_mul(&generator_poly, &field.minimal_polynomial(i));
        }
    }
    let redundancy = generator_poly.len() - 1;
    if redundancy >= n {
        return Err(ClassicalError::InvalidParameters(format!(
            "designed distance {delta} leaves no information symbols at length {n}"
        )));
    }
    let k = n - redundancy;

    let gen_rows = (0..k)
        .map(|shift| {
            let mut v = BinaryVector::zeros(n);
            for (t, &c) in generator_poly.iter().enumerate() {
                if c {
                    v.set(shift + t, true);
                }
            }
            v
        })
        .collect();
    let generator = BinaryMatrix::from_rows(n, gen_rows);

    let mut expanded = BinaryMatrix::empty(n);
    for i in 1..delta {
        let powers: Vec<u16> = (0..n).map(|j| field.alpha_pow(i * j)).collect();
        for b in 0..m {
            expanded.push_row(BinaryVector::from_bits(
                powers.iter().map(|&p| (p >> b) & 1 == 1),
            ));
        }
    }
    let check = expanded.independent_rows();
    assert_eq!(check.row_count(), redundancy, "BCH check rank mismatch");
    debug_assert!(generator.mul_transpose(&check).is_zero());

    Ok(ClassicalCode {
        n,
        k,
        distance: Distance::design(delta),
        generator,
        check,
        check_expanded: Some(expanded),
        family: Family::Bch {
            m,
            designed_distance: delta,
        },
        mean_check_weight: f64::from(1u32 << (m - 1)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BchConjectureEntry {
    pub n: usize,
    pub k: usize,
    /// Smallest odd designed distance producing this code.
    pub designed_distance: usize,
    pub contains_dual: bool,
    pub dual_doubly_even: bool,
    pub evidence: DoublyEvenEvidence,
    /// Distinct weights among the canonical check rows.
    pub check_row_weights: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BchConjectureReport {
    pub m: u32,
    pub n: usize,
    /// Every distinct narrow-sense BCH code of this length (all odd δ).
    pub entries: Vec<BchConjectureEntry>,
    /// True when every dual-containing code in `entries` has a doubly-even dual.
    pub holds: bool,
}

impl BchConjectureReport {
    pub fn dual_containing(&self) -> impl Iterator<Item = &BchConjectureEntry> {
        self.entries.iter().filter(|e| e.contains_dual)
    }
}

/// Checks, for every narrow-sense BCH code of length `2^m − 1` that contains
/// its dual, whether the dual is doubly even.
///
/// The doubly-even test uses the row-pair congruence argument (all check rows
/// have weight ≡ 0 mod 4 and pairwise even overlap), cross-checked against a
/// deterministic sample of dual codewords, or full enumeration when the dual
/// is small.
pub fn verify_bch_dual_conjecture(m: u32) -> Result<BchConjectureReport, ClassicalError> {
    if !(3..=7).contains(&m) {
        return Err(ClassicalError::InvalidParameters(format!(
            "conjecture check supports 3 ≤ m ≤ 7, got {m}"
        )));
    }
    let n = (1usize << m) - 1;
    let mut entries = Vec::new();
    let mut seen_dims = BTreeSet::new();
    let mut delta = 3;
    while delta <= n {
        let code = match build(m, delta) {
            Ok(c) => c,
            Err(ClassicalError::InvalidParameters(_)) => break,
            Err(e) => return Err(e),
        };
        // Narrow-sense BCH codes are nested, so the dimension identifies the code.
        if seen_dims.insert(code.k) {
            let cert = certify_with_budget(&code, None, 16)?;
            let weights: BTreeSet<usize> = cert.check_row_weights.iter().copied().collect();
            entries.push(BchConjectureEntry {
                n,
                k: code.k,
                designed_distance: delta,
                contains_dual: cert.contains_dual,
                dual_doubly_even: cert.dual_doubly_even,
                evidence: cert.doubly_even_evidence,
                check_row_weights: weights.into_iter().collect(),
            });
        }
        delta += 2;
    }
    let holds = entries
        .iter()
        .filter(|e| e.contains_dual)
        .all(|e| e.dual_doubly_even);
    Ok(BchConjectureReport {
        m,
        n,
        entries,
        holds,
    })
}
