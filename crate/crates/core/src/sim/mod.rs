//! Exact sparse simulation of transversal gates on CSS-encoded blocks.

mod gate;
mod logical;
mod state;

pub use gate::{apply, apply_in_place, Angle, BitwiseGate, H_OUTPUT_BUDGET};
pub use logical::{
    blockwise_cnot, derive_logical_action, diagonal, encode, encode_basis, encode_product, hadamard,
    logical_amplitudes, logical_index, logical_word, max_abs_diff, measure_block, permutation, predicted_bitwise_cz,
    predicted_bitwise_h, predicted_bitwise_p, toffoli, verify_lemma1, verify_lemma5, BlockDecoder,
    Branch, CMatrix, Lemma1Check, Lemma1Report, Lemma5Case, Lemma5Report, LogicalActionReport, MeasureBasis,
    ENCODE_BUDGET_DIM, TOLERANCE,
};
pub use state::{LogicalState, AMPLITUDE_CUTOFF};

use thiserror::Error;

use crate::css::CssError;
use crate::gf2::Gf2Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("register {0} does not exist")]
    BadRegister(usize),
    #[error("registers acted on together must have equal widths")]
    WidthMismatch,
    #[error("a gate names the same register twice")]
    RepeatedRegister,
    #[error("bitwise H unsupported on this state: {0}")]
    UnsupportedOnState(String),
    #[error("{0} logical qubits exceed the limit of 6")]
    TooManyLogicalQubits(usize),
    #[error("code has k = {0}; this check needs k = 1")]
    NotSingleQubitCode(usize),
    #[error("coset weights are not constant mod {w}")]
    WeightCongruenceViolated { w: usize },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Css(#[from] CssError),
}
