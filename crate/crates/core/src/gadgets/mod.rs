//! Teleportation-based fault-tolerant networks on CSS blocks.
//!
//! A [`Gadget`] is a list of primitive steps over named registers: ancilla
//! preparation, bitwise gates between distinct registers, whole-register
//! measurements, and corrections conditioned on measurement outcomes. The
//! correction tables are derived by simulation ([`derive_corrections`]) and
//! then stored in the gadget as plain data.

mod build;
mod exec;
mod merged;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::css::{CssCode, CssError};
use crate::gf2::BinaryVector;
use crate::sim::{logical_word, BitwiseGate, CMatrix, MeasureBasis, SimError};

pub use build::{ancilla_cost, ancilla_spec, build_gadget, build_merged_measure, build_teleport};
pub use exec::{derive_corrections, run_gadget_on, simulate_gadget, BranchSummary, GadgetBranch, GadgetReport};
pub use merged::{merged_measurement, MergedBranch, MergedMeasurement};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("{gadget} needs {requirement}")]
    LemmaUnsupported { gadget: GadgetKind, requirement: String },
    #[error("logical index {index} out of range for k = {k}")]
    BadLogicalIndex { index: usize, k: usize },
    #[error("measurement {label}: {detail}")]
    BranchMismatch { label: String, detail: String },
    #[error("correction {label} has no table; derive it first")]
    MissingTable { label: String },
    #[error("correction {label}: no vocabulary element fixes outcome {outcome}")]
    NoCorrection { label: String, outcome: String },
    #[error("gadget has {0} logical input qubits; at most 6 are simulated")]
    TooManyInputs(usize),
    #[error("gadget step {step}: {detail}")]
    Malformed { step: usize, detail: String },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Css(#[from] CssError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    MergedMeasureRecover,
    IntraBlockCX,
    Teleport,
    Toffoli,
    SwitchOut,
    SwitchIn,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 6] = [
        GadgetKind::MergedMeasureRecover,
        GadgetKind::IntraBlockCX,
        GadgetKind::Teleport,
        GadgetKind::Toffoli,
        GadgetKind::SwitchOut,
        GadgetKind::SwitchIn,
    ];

    /// Recoveries charged to one use of the gadget.
    pub fn recoveries(self) -> usize {
        match self {
            GadgetKind::MergedMeasureRecover | GadgetKind::SwitchOut | GadgetKind::SwitchIn => 1,
            GadgetKind::Teleport => 2,
            GadgetKind::IntraBlockCX => 4,
            GadgetKind::Toffoli => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::MergedMeasureRecover => "merged-measure",
            GadgetKind::IntraBlockCX => "intra-block-cx",
            GadgetKind::Teleport => "teleport",
            GadgetKind::Toffoli => "toffoli",
            GadgetKind::SwitchOut => "switch-out",
            GadgetKind::SwitchIn => "switch-in",
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|g| g.name() == key || format!("{g:?}").to_ascii_lowercase() == key.replace('-', ""))
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|g| g.name()).collect();
                format!("unknown gadget {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Bell-pair resource used by a teleportation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportVariant {
    /// `|+⟩_L|0⟩_L` joined by a bitwise CX.
    CxPair,
    /// `|+⟩_L|+⟩_L` joined by a bitwise CZ, undone by a bitwise H on the output.
    CzPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalOperatorKind {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterKind {
    Block,
    /// `n`-qubit cat state, not a code block.
    Cat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum AncillaTarget {
    ZeroL,
    PlusL,
    /// `|0⟩_L + |u⟩_L`.
    ZeroPlusU { u: BinaryVector },
    Cat { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncillaSpec {
    pub target_state: AncillaTarget,
    /// Parity checks every word of the prepared state satisfies.
    pub verification: Vec<BinaryVector>,
    pub prep_gate_count: usize,
    pub prep_time_steps: usize,
}

/// Cost summary of `|0⟩_L` preparation and verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncillaCost {
    pub spec: AncillaSpec,
    pub mean_check_weight: f64,
    /// `w(n−k)/2 + (d+1)k`.
    pub verification_cnots: f64,
    /// Same count with the achieved mean leader weight in place of `d+1`.
    pub verification_cnots_achieved: f64,
    pub mean_leader_weight: f64,
}

/// How a measured register is turned into a classical outcome class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "readout", rename_all = "snake_case")]
pub enum Readout {
    /// The logical word (Z basis) or the `X̄` eigenvalue bits (X basis).
    Logical,
    /// Parity of the measured word; used for cat states.
    Parity,
    /// The single bit `c·u` of the logical readout `c`.
    Eigen { u: BinaryVector },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub paulis: bool,
    pub cx: bool,
    pub cz: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionTarget {
    /// The gadget's ideal action.
    Ideal,
    /// The branch whose conditioning outcomes are all zero.
    ReferenceBranch,
}

/// Logical operation used in corrections, realised by bitwise gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LogicalOp {
    X { reg: usize, qubit: usize },
    Z { reg: usize, qubit: usize },
    Cx { control: usize, target: usize },
    Cz { a: usize, b: usize },
}

impl LogicalOp {
    pub fn to_gate(&self, code: &CssCode) -> BitwiseGate {
        match *self {
            LogicalOp::X { reg, qubit } => BitwiseGate::x(reg, code.coset_leaders.row(qubit).clone()),
            LogicalOp::Z { reg, qubit } => BitwiseGate::z(reg, code.z_leaders.row(qubit).clone()),
            LogicalOp::Cx { control, target } => BitwiseGate::cx(control, target),
            LogicalOp::Cz { a, b } => BitwiseGate::cz(a, b),
        }
    }

    pub fn registers(&self) -> Vec<usize> {
        match *self {
            LogicalOp::X { reg, .. } | LogicalOp::Z { reg, .. } => vec![reg],
            LogicalOp::Cx { control, target } => vec![control, target],
            LogicalOp::Cz { a, b } => vec![a, b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionEntry {
    pub outcome: BTreeMap<String, u64>,
    pub ops: Vec<LogicalOp>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Prepare {
        reg: usize,
        ancilla: AncillaSpec,
    },
    Gate {
        gate: BitwiseGate,
    },
    Measure {
        reg: usize,
        basis: MeasureBasis,
        label: String,
        readout: Readout,
    },
    Correct {
        label: String,
        /// Measurement labels the correction is conditioned on.
        keys: Vec<String>,
        scope: Vec<usize>,
        vocabulary: Vocabulary,
        target: CorrectionTarget,
        table: Option<Vec<CorrectionEntry>>,
    },
}

/// How a logical input index is laid out over the input registers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "embedding", rename_all = "snake_case")]
pub enum Embedding {
    /// Input index split big-endian across the input registers.
    Direct,
    /// `k`-bit input `v` spread as `(v with bit q cleared, v_q·e_q)` over the
    /// two input registers.
    Switched { qubit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ideal", rename_all = "snake_case")]
pub enum IdealAction {
    Identity,
    /// CNOT from the first logical qubit to the second.
    Cnot,
    Toffoli,
    /// `v ↦ (v with bit q cleared) ⊗ v_q·e_q`.
    SwitchOut { qubit: usize },
    /// Projector onto the eigenspace named by the `eigen` outcome.
    Projector { u: BinaryVector, kind: LogicalOperatorKind },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gadget {
    pub name: GadgetKind,
    pub variant: Option<TeleportVariant>,
    pub code: String,
    pub registers: Vec<Register>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub embedding: Embedding,
    pub ideal: IdealAction,
    pub steps: Vec<Step>,
    pub recoveries: usize,
    pub ancilla_blocks: usize,
    /// Cat measurements repeated for a majority vote; accounted, not simulated.
    pub cat_repetitions: usize,
}

impl Gadget {
    /// Logical input qubits for a code with `k` logical qubits per block.
    pub fn input_qubits(&self, k: usize) -> usize {
        match self.embedding {
            Embedding::Direct => k * self.inputs.len(),
            Embedding::Switched { .. } => k,
        }
    }

    pub fn output_qubits(&self, k: usize) -> usize {
        k * self.outputs.len()
    }

    /// Logical words of the input registers for input index `j`.
    pub fn input_words(&self, k: usize, j: usize) -> Vec<BinaryVector> {
        match self.embedding {
            Embedding::Direct => {
                let total = self.input_qubits(k);
                let v = logical_word(total, j);
                (0..self.inputs.len()).map(|r| v.slice(r * k, k)).collect()
            }
            Embedding::Switched { qubit } => {
                let mut a = logical_word(k, j);
                let mut d = BinaryVector::zeros(k);
                d.set(qubit, a.get(qubit));
                a.set(qubit, false);
                vec![a, d]
            }
        }
    }

    /// Ideal Kraus operator for a branch, `2^out × 2^in`.
    pub fn ideal_matrix(&self, k: usize, outcome: &BTreeMap<String, u64>) -> CMatrix {
        let (kin, kout) = (self.input_qubits(k), self.output_qubits(k));
        let one = Complex64::new(1.0, 0.0);
        let mut m = CMatrix::zeros(1 << kout, 1 << kin);
        match &self.ideal {
            IdealAction::Identity => m.fill_with_identity(),
            IdealAction::Cnot => {
                m = crate::sim::permutation(1 << kin, |j| if j & 0b10 != 0 { j ^ 1 } else { j });
            }
            IdealAction::Toffoli => m = crate::sim::toffoli(),
            IdealAction::SwitchOut { qubit } => {
                let bit = 1usize << (k - 1 - qubit);
                for v in 0..1usize << kin {
                    m[((((v & !bit) << k) | (v & bit)), v)] = one;
                }
            }
            IdealAction::Projector { u, kind } => {
                let e = outcome.get("eigen").copied().unwrap_or(0) == 1;
                let ui = crate::sim::logical_index(u);
                for v in 0..1usize << kin {
                    match kind {
                        LogicalOperatorKind::Z => {
                            if ((v & ui).count_ones() % 2 == 1) == e {
                                m[(v, v)] = one;
                            }
                        }
                        LogicalOperatorKind::X => {
                            let sign = if e { -0.5 } else { 0.5 };
                            m[(v, v)] += Complex64::new(0.5, 0.0);
                            m[(v ^ ui, v)] += Complex64::new(sign, 0.0);
                        }
                    }
                }
            }
        }
        m
    }

    /// Every two- or three-register gate acts between distinct registers, so
    /// each physical qubit interacts only with its counterparts in other
    /// blocks.
    pub fn is_transversal(&self) -> bool {
        self.steps.iter().all(|s| match s {
            Step::Gate { gate } => {
                let regs = gate.registers();
                let mut sorted = regs.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == regs.len()
            }
            _ => true,
        })
    }

    pub fn tables(&self) -> Vec<(&str, &[CorrectionEntry])> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Correct {
                    label, table: Some(t), ..
                } => Some((label.as_str(), t.as_slice())),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gadget serialises")
    }
}
