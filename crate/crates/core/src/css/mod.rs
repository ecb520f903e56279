//! CSS codes built from nested classical codes `C₀ ⊂ C₁`.
//!
//! Encoded basis states are `|u⟩_L = Σ_{x∈C₀} |x + u·D̃⟩`, where `H̃` generates
//! `C₀` and the rows of `D̃` extend `C₀` to `C₁`. X stabilizers are the rows of
//! `H̃`; Z stabilizers generate `C₁⊥`.

mod pauli;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pauli::PauliProduct;

use crate::classical::{self, certify_subcode, ClassicalCode, ClassicalError, Distance, DistanceKind, EligibilityCertificate};
use crate::gf2::{self, BinaryMatrix, BinaryVector, Gf2Error, DEFAULT_MAX_DIM};

/// Coset-leader search is exhaustive up to this many coset elements.
pub const LEADER_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum CssError {
    #[error("classical code does not contain its dual")]
    NotDualContaining,
    #[error("C₀ is not contained in C₁")]
    NotNested,
    #[error("D̃D̃ᵀ is singular and no dual basis for the logical Z operators exists")]
    SingularDdt,
    #[error("code is not lemma-4 eligible: {0}")]
    NotLemma4(String),
    #[error("row index {index} out of range for {rows} rows")]
    InvalidRow { index: usize, rows: usize },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("i/o error writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// How the quantum code was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "snake_case")]
pub enum CssOrigin {
    /// `C₀ = C⊥`, `C₁ = C` for a dual-containing classical code `C`.
    DualContaining { classical: String },
    /// General nested pair.
    Nested { c0: String, c1: String },
    /// Row `row` of the reduced `H̃` of the parent was removed.
    Derived { parent: String, row: usize, punctured: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CssCode {
    pub n: usize,
    pub k: usize,
    pub distance: Distance,
    /// `H̃`, a basis of `C₀`.
    pub c0_generator: BinaryMatrix,
    /// Basis of `C₁`.
    pub c1_generator: BinaryMatrix,
    /// `D̃`, `k × n`; row `i` is the minimum-weight word of its coset of `C₀`.
    pub coset_leaders: BinaryMatrix,
    /// Whether every leader's minimality was proven exhaustively.
    pub leaders_certified: bool,
    /// Rows `e_i·(D̃D̃ᵀ)^{-1}·D̃`, or a re-derived dual basis when the pairing
    /// formula does not apply.
    pub z_leaders: BinaryMatrix,
    pub stabilizer_x: BinaryMatrix,
    pub stabilizer_z: BinaryMatrix,
    pub dd_transpose: BinaryMatrix,
    pub certificate: EligibilityCertificate,
    pub origin: CssOrigin,
}

/// Flat summary for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CssSummary {
    pub label: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub distance_kind: DistanceKind,
    pub contains_dual: bool,
    pub dual_doubly_even: bool,
    pub leaders_certified: bool,
    pub mean_leader_weight: f64,
    pub lemmas: BTreeMap<String, bool>,
}

/// CSS code from a dual-containing classical code: `C₀ = C⊥`, `C₁ = C`.
pub fn css_from_classical(c: &ClassicalCode) -> Result<CssCode, CssError> {
    css_from_classical_with_budget(c, DEFAULT_MAX_DIM)
}

pub fn css_from_classical_with_budget(c: &ClassicalCode, max_dim: usize) -> Result<CssCode, CssError> {
    if !c.check.is_self_orthogonal() {
        return Err(CssError::NotDualContaining);
    }
    build(
        c.check.clone(),
        c.generator.clone(),
        c.distance,
        CssOrigin::DualContaining {
            classical: c.label(),
        },
        max_dim,
    )
}

/// CSS code from a nested pair `C₀ ⊂ C₁`.
pub fn css_from_nested(c0: &ClassicalCode, c1: &ClassicalCode) -> Result<CssCode, CssError> {
    if !c0.generator.rows().iter().all(|r| c1.generator.row_space_contains(r)) {
        return Err(CssError::NotNested);
    }
    build(
        c0.generator.clone(),
        c1.generator.clone(),
        c1.distance,
        CssOrigin::Nested {
            c0: c0.label(),
            c1: c1.label(),
        },
        DEFAULT_MAX_DIM,
    )
}

/// Lemma-3 code `C₁ = C₀⊥` from a self-orthogonal `H̃`.
pub fn css_from_self_orthogonal(h: &BinaryMatrix, origin: CssOrigin) -> Result<CssCode, CssError> {
    if !h.is_self_orthogonal() {
        return Err(CssError::NotDualContaining);
    }
    let c1 = h.null_space();
    let d = classical::exact_min_distance(&c1, h, DEFAULT_MAX_DIM)
        .map(Distance::exact)
        .unwrap_or(Distance::bound(1));
    build(h.clone(), c1, d, origin, DEFAULT_MAX_DIM)
}

fn build(
    c0: BinaryMatrix,
    c1: BinaryMatrix,
    c1_distance: Distance,
    origin: CssOrigin,
    max_dim: usize,
) -> Result<CssCode, CssError> {
    let n = c0.col_count();
    let c0 = c0.independent_rows();
    let c1 = c1.independent_rows();
    let complement = classical::complement_basis(&c0, &c1);
    let k = complement.row_count();
    debug_assert_eq!(k, c1.row_count() - c0.row_count());

    let mut certified = true;
    let leaders: Vec<BinaryVector> = complement
        .rows()
        .iter()
        .map(|r| {
            let rep = gf2::min_weight_coset_representative(&c0, r, LEADER_BUDGET);
            certified &= rep.certified;
            rep.vector
        })
        .collect();
    let d_tilde = BinaryMatrix::from_rows(n, leaders);
    let dd = d_tilde.mul_transpose(&d_tilde);
    let z_leaders = z_dual_basis(&c0, &c1, &d_tilde, &dd)?;
    let stabilizer_z = c1.null_space();
    let certificate = certify_subcode(&c0, &d_tilde, None, max_dim)?;

    let distance = quantum_distance(&c0, &c1, &d_tilde, &stabilizer_z, c1_distance, max_dim);

    Ok(CssCode {
        n,
        k,
        distance,
        stabilizer_x: c0.clone(),
        c0_generator: c0,
        c1_generator: c1,
        coset_leaders: d_tilde,
        leaders_certified: certified,
        z_leaders,
        stabilizer_z,
        dd_transpose: dd,
        certificate,
        origin,
    })
}

/// Rows `z_i ∈ C₀⊥` with `z_i·d_jᵀ = δ_ij`.
fn z_dual_basis(
    c0: &BinaryMatrix,
    c1: &BinaryMatrix,
    d_tilde: &BinaryMatrix,
    dd: &BinaryMatrix,
) -> Result<BinaryMatrix, CssError> {
    let n = c0.col_count();
    if d_tilde.row_count() == 0 {
        return Ok(BinaryMatrix::empty(n));
    }
    let in_c0_perp = d_tilde.mul_transpose(c0).is_zero();
    if in_c0_perp {
        if let Some(inv) = dd.inverse() {
            return Ok(inv.mul(d_tilde));
        }
    }
    // Fall back to a complement of C₁⊥ inside C₀⊥, paired against D̃.
    let c0_perp = c0.null_space();
    let c1_perp = c1.null_space();
    let b = classical::complement_basis(&c1_perp, &c0_perp);
    let m = b.mul_transpose(d_tilde);
    let inv = m.inverse().ok_or(CssError::SingularDdt)?;
    Ok(inv.mul(&b))
}

fn quantum_distance(
    c0: &BinaryMatrix,
    c1: &BinaryMatrix,
    d_tilde: &BinaryMatrix,
    c1_perp: &BinaryMatrix,
    c1_distance: Distance,
    max_dim: usize,
) -> Distance {
    let n = c0.col_count();
    if d_tilde.row_count() == 0 {
        // No logical operators; quote the classical distance of C₁.
        return c1_distance;
    }
    let lemma3 = c0.row_count() + c1.row_count() == n && c0.is_self_orthogonal();
    let x_part = gf2::min_weight_outside(c0, d_tilde, max_dim).ok().flatten();
    let z_part = if lemma3 {
        x_part
    } else {
        let c0_perp = c0.null_space();
        let ext = classical::complement_basis(c1_perp, &c0_perp);
        gf2::min_weight_outside(c1_perp, &ext, max_dim).ok().flatten()
    };
    if let (Some(a), Some(b)) = (x_part, z_part) {
        return Distance::exact(a.min(b));
    }
    if lemma3 && c1_distance.kind == DistanceKind::Exact {
        // A minimum-weight word of C₁ lies outside C₀ when C₀ is heavier.
        if let Ok(Some(d0)) = gf2::min_distance(c0, max_dim) {
            if d0 > c1_distance.value {
                return c1_distance;
            }
        }
        return Distance::bound(c1_distance.value);
    }
    c1_distance
}

impl CssCode {
    pub fn label(&self) -> String {
        format!("[[{},{},{}]]", self.n, self.k, self.distance.value)
    }

    /// `X̄_u = X_{u·D̃}`.
    pub fn encoded_x(&self, u: &BinaryVector) -> PauliProduct {
        assert_eq!(u.len(), self.k, "logical word length");
        PauliProduct::x(self.leader_combination(&self.coset_leaders, u))
    }

    /// `Z̄_u = Z_{u·(D̃D̃ᵀ)^{-1}·D̃}`.
    pub fn encoded_z(&self, u: &BinaryVector) -> PauliProduct {
        assert_eq!(u.len(), self.k, "logical word length");
        PauliProduct::z(self.leader_combination(&self.z_leaders, u))
    }

    fn leader_combination(&self, m: &BinaryMatrix, u: &BinaryVector) -> BinaryVector {
        if self.k == 0 {
            BinaryVector::zeros(self.n)
        } else {
            m.left_mul(u)
        }
    }

    /// `C₁ = C₀⊥`: the condition for bitwise H and CZ.
    pub fn satisfies_lemma3(&self) -> bool {
        self.c0_generator.row_count() + self.c1_generator.row_count() == self.n
            && self.c0_generator.is_self_orthogonal()
    }

    /// Lemma 3 plus every `H̃` row of weight ≡ 0 mod 4 (bitwise P).
    pub fn satisfies_lemma4(&self) -> bool {
        self.satisfies_lemma3() && self.certificate.dual_doubly_even
    }

    /// Lemma conditions keyed `L2`, `L3`, `L4`, `DDT=I`.
    pub fn check_lemma_conditions(&self) -> BTreeMap<String, bool> {
        BTreeMap::from([
            ("L2".to_string(), true),
            ("L3".to_string(), self.satisfies_lemma3()),
            ("L4".to_string(), self.satisfies_lemma4()),
            ("DDT=I".to_string(), self.dd_transpose.is_identity()),
        ])
    }

    pub fn mean_leader_weight(&self) -> f64 {
        classical::mean_weight(&self.coset_leaders)
    }

    /// Recomputes the certificate with Lemma 1 residues mod `w`.
    pub fn with_lemma1(mut self, w: usize, max_dim: usize) -> Result<Self, CssError> {
        self.certificate = certify_subcode(&self.c0_generator, &self.coset_leaders, Some(w), max_dim)?;
        Ok(self)
    }

    /// For `k = 1`: `(r₀, r₁)` when both codewords have constant weight mod `w`.
    pub fn lemma1_residues(&self) -> Option<(usize, usize)> {
        let res = self.certificate.lemma1_residues.as_ref()?;
        if self.k != 1 {
            return None;
        }
        Some(((*res.get("0")?)?, (*res.get("1")?)?))
    }

    pub fn summary(&self) -> CssSummary {
        CssSummary {
            label: self.label(),
            n: self.n,
            k: self.k,
            d: self.distance.value,
            distance_kind: self.distance.kind,
            contains_dual: self.certificate.contains_dual,
            dual_doubly_even: self.certificate.dual_doubly_even,
            leaders_certified: self.leaders_certified,
            mean_leader_weight: self.mean_leader_weight(),
            lemmas: self.check_lemma_conditions(),
        }
    }

    /// Writes `h_tilde.txt`, `d_tilde.txt`, `stabilizer_x.txt`,
    /// `stabilizer_z.txt` and `summary.json` into `dir`.
    pub fn export(&self, dir: &Path) -> Result<(), CssError> {
        let io = |path: &Path, e| CssError::Io {
            path: path.display().to_string(),
            source: e,
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let files = [
            ("h_tilde.txt", self.c0_generator.to_text()),
            ("d_tilde.txt", self.coset_leaders.to_text()),
            ("stabilizer_x.txt", self.stabilizer_x.to_text()),
            ("stabilizer_z.txt", self.stabilizer_z.to_text()),
            (
                "summary.json",
                serde_json::to_string_pretty(&self.summary()).expect("summary serializes"),
            ),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}

/// `[[n−1, k+1, ≥ d−1]]` lemma-4 code from deleting row `row_index` of the
/// reduced row echelon form of `H̃` and puncturing that row's pivot column.
///
/// Other rows are zero on the pivot column, so their weights and pairwise
/// overlaps are unchanged.
pub fn derive_smaller_code(code: &CssCode, row_index: usize) -> Result<CssCode, CssError> {
    if !code.satisfies_lemma4() {
        return Err(CssError::NotLemma4(code.label()));
    }
    let rref = code.c0_generator.rref();
    let rows = rref.rank;
    if row_index >= rows {
        return Err(CssError::InvalidRow { index: row_index, rows });
    }
    let pivot = rref.pivots[row_index];
    let h = BinaryMatrix::from_rows(code.n, rref.matrix.rows()[..rows].to_vec())
        .delete_row(row_index)
        .delete_column(pivot);
    assert!(h.is_self_orthogonal(), "row deletion broke self-orthogonality");
    let mut derived = css_from_self_orthogonal(
        &h,
        CssOrigin::Derived {
            parent: code.label(),
            row: row_index,
            punctured: pivot,
        },
    )?;
    assert!(derived.certificate.dual_doubly_even, "row deletion broke doubly-evenness");
    if derived.distance.kind != DistanceKind::Exact {
        let floor = code.distance.value.saturating_sub(1);
        if derived.distance.value < floor {
            derived.distance = Distance::bound(floor);
        }
    }
    Ok(derived)
}
