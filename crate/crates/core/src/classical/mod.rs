//! Classical binary linear codes: BCH, punctured Reed–Muller, extended
//! quadratic residue, and user-supplied generators.

mod bch;
mod certify;
pub(crate) use certify::complement_basis;
pub mod field;
mod load;
mod macwilliams;
mod qr;
mod rm;

pub use bch::{bch_code, bch_code_with_budget, verify_bch_dual_conjecture, BchConjectureEntry, BchConjectureReport};
pub use certify::{certify, certify_subcode, certify_with_budget, coset_weight_residues, EligibilityCertificate, DoublyEvenEvidence};
pub use load::{load_code, parse_code, CodeHeader};
pub use macwilliams::dual_weight_enumerator;
pub use qr::extended_qr_code;
pub use rm::punctured_reed_muller;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, BinaryMatrix, Gf2Error, DEFAULT_MAX_DIM};

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("claimed {what} = {claimed} but the code has {actual}")]
    ClaimMismatch {
        what: &'static str,
        claimed: String,
        actual: String,
    },
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// How a recorded minimum distance was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    /// Proven by enumeration (directly or through the MacWilliams identity).
    Exact,
    /// Designed or tabulated value for the family; not enumerated.
    Design,
    /// A lower bound only.
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub value: usize,
    pub kind: DistanceKind,
}

impl Distance {
    pub fn exact(value: usize) -> Self {
        Self {
            value,
            kind: DistanceKind::Exact,
        }
    }

    pub fn design(value: usize) -> Self {
        Self {
            value,
            kind: DistanceKind::Design,
        }
    }

    pub fn bound(value: usize) -> Self {
        Self {
            value,
            kind: DistanceKind::Bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Bch { m: u32, designed_distance: usize },
    PuncturedRm { r: u32, m: u32 },
    ExtendedQr { p: usize },
    UserSupplied,
}

/// An `[n, k_c, d]` binary linear code.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalCode {
    pub n: usize,
    pub k: usize,
    pub distance: Distance,
    pub generator: BinaryMatrix,
    /// Full-rank parity-check matrix, `n − k` rows.
    pub check: BinaryMatrix,
    /// For BCH codes: every expanded parity-check row before the rank reduction.
    pub check_expanded: Option<BinaryMatrix>,
    pub family: Family,
    /// Mean check-row weight fed to the overhead model.
    pub mean_check_weight: f64,
}

impl ClassicalCode {
    /// Builds a code from a generator; the check matrix is its null space.
    pub fn from_generator(generator: &BinaryMatrix, family: Family) -> Self {
        let generator = generator.independent_rows();
        let check = generator.null_space();
        Self::assemble(generator, check, family)
    }

    fn assemble(generator: BinaryMatrix, check: BinaryMatrix, family: Family) -> Self {
        let n = generator.col_count();
        let k = generator.row_count();
        let mean_check_weight = mean_weight(&check);
        Self {
            n,
            k,
            distance: Distance::bound(usize::from(k > 0)),
            generator,
            check,
            check_expanded: None,
            family,
            mean_check_weight,
        }
    }

    /// Dimension of the dual code, `n − k`.
    pub fn dual_dimension(&self) -> usize {
        self.n - self.k
    }

    /// `[n,k,d]` label.
    pub fn label(&self) -> String {
        format!("[{},{},{}]", self.n, self.k, self.distance.value)
    }

    /// Replaces the recorded distance with an enumerated one when either the
    /// code or its dual has dimension at most `max_dim`.
    pub fn with_exact_distance(mut self, max_dim: usize) -> Self {
        if let Some(d) = exact_min_distance(&self.generator, &self.check, max_dim) {
            self.distance = Distance::exact(d);
        }
        self
    }
}

pub(crate) fn mean_weight(m: &BinaryMatrix) -> f64 {
    if m.row_count() == 0 {
        0.0
    } else {
        m.row_weights().iter().sum::<usize>() as f64 / m.row_count() as f64
    }
}

/// Minimum distance of `rowspace(generator)`, by direct enumeration when the
/// code is small or through the MacWilliams transform of the dual's weight
/// distribution when the dual is small. `None` when neither is feasible.
pub(crate) fn exact_min_distance(
    generator: &BinaryMatrix,
    check: &BinaryMatrix,
    max_dim: usize,
) -> Option<usize> {
    let k = generator.row_count();
    let r = check.row_count();
    if k == 0 {
        return Some(0);
    }
    if k <= max_dim && k <= r {
        return gf2::min_distance(generator, max_dim).ok().flatten();
    }
    if r <= max_dim {
        let dual = gf2::weight_distribution(check, max_dim).ok()?;
        return macwilliams::min_distance_from_dual(generator.col_count(), &dual);
    }
    if k <= max_dim {
        return gf2::min_distance(generator, max_dim).ok().flatten();
    }
    None
}

/// Default enumeration limit for exact distances.
pub const DISTANCE_MAX_DIM: usize = DEFAULT_MAX_DIM;
