
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::{apply_in_place, Angle, BitwiseGate};
use super::state::LogicalState;
use super::SimError;
use crate::css::CssCode;
use crate::gf2::{self, BinaryMatrix, BinaryVector};

/// Terms allowed in one encoded block.
pub const ENCODE_BUDGET_DIM: usize = 20;
/// Tolerance for legitimacy and matrix comparisons.
pub const TOLERANCE: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

/// `|u⟩_L = |C₀|^{-1/2} Σ_{x∈C₀} |x + u·D̃⟩` as a one-register state.
pub fn encode_basis(code: &CssCode, u: &BinaryVector) -> Result<LogicalState, SimError> {
    let amps = basis_amplitudes(code.k, u);
    encode(code, &amps)
}

fn basis_amplitudes(k: usize, u: &BinaryVector) -> Vec<Complex64> {
    assert_eq!(u.len(), k, "logical word length");
    let mut amps = vec![Complex64::default(); 1 << k];
    amps[logical_index(u)] = Complex64::new(1.0, 0.0);
    amps
}

/// Big-endian index of a logical word: bit 0 is the most significant.
pub fn logical_index(u: &BinaryVector) -> usize {
    u.iter().fold(0, |acc, b| (acc << 1) | usize::from(b))
}

pub fn logical_word(k: usize, index: usize) -> BinaryVector {
    BinaryVector::from_bits((0..k).map(|i| (index >> (k - 1 - i)) & 1 == 1))
}

/// `Σ_u amps[u] |u⟩_L` for one block.
pub fn encode(code: &CssCode, amps: &[Complex64]) -> Result<LogicalState, SimError> {
    assert_eq!(amps.len(), 1 << code.k, "amplitude vector length");
    let r = code.c0_generator.row_count();
    if r > ENCODE_BUDGET_DIM {
        return Err(SimError::Gf2(gf2::Gf2Error::DimensionTooLarge {
            dimension: r,
            max_dim: ENCODE_BUDGET_DIM,
        }));
    }
    let norm = Complex64::new(2f64.powf(-(r as f64) / 2.0), 0.0);
    let mut terms = Vec::with_capacity(amps.len() << r);
    for (idx, &a) in amps.iter().enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        let shift = if code.k == 0 {
            BinaryVector::zeros(code.n)
        } else {
            code.coset_leaders.left_mul(&logical_word(code.k, idx))
        };
        gf2::for_each_in_coset(code.c0_generator.rows(), &shift, |w, _| terms.push((w.clone(), a * norm)));
    }
    Ok(LogicalState::from_terms(vec![code.n], terms))
}

/// Tensor product of encoded basis states, one block per code.
pub fn encode_product(codes: &[&CssCode], index: usize) -> Result<LogicalState, SimError> {
    let ks: Vec<usize> = codes.iter().map(|c| c.k).collect();
    let total: usize = ks.iter().sum();
    let mut state: Option<LogicalState> = None;
    let mut consumed = 0;
    for (code, &k) in codes.iter().zip(&ks) {
        let part = (index >> (total - consumed - k)) & ((1 << k) - 1);
        consumed += k;
        let block = encode_basis(code, &logical_word(k, part))?;
        state = Some(match state {
            None => block,
            Some(s) => s.tensor(&block),
        });
    }
    Ok(state.expect("at least one block"))
}

/// Decodes block words to logical words.
pub struct BlockDecoder {
    k: usize,
    c0_rank: usize,
    stacked: BinaryMatrix,
}

impl BlockDecoder {
    pub fn new(code: &CssCode) -> Self {
        Self {
            k: code.k,
            c0_rank: code.c0_generator.row_count(),
            stacked: code.coset_leaders.stack(&code.c0_generator),
        }
    }

    /// `u` with `word ∈ C₀ + u·D̃`, or `None` when `word ∉ C₁`.
    pub fn decode(&self, word: &BinaryVector) -> Option<BinaryVector> {
        if self.stacked.row_count() == 0 {
            return word.is_zero().then(|| BinaryVector::zeros(0));
        }
        self.stacked.solve_left(word).map(|c| c.slice(0, self.k))
    }

    fn amplitude_scale(&self) -> f64 {
        2f64.powf(-(self.c0_rank as f64) / 2.0)
    }
}

/// Projection of `state` onto the encoded basis of the given blocks.
///
/// Returns the logical amplitude vector (big-endian over blocks) and the
/// norm that fell outside the encoded space.
pub fn logical_amplitudes(state: &LogicalState, codes: &[&CssCode]) -> (Vec<Complex64>, f64) {
    assert_eq!(state.register_count(), codes.len(), "one code per register");
    let decoders: Vec<BlockDecoder> = codes.iter().map(|c| BlockDecoder::new(c)).collect();
    let total_k: usize = codes.iter().map(|c| c.k).sum();
    let mut amps = vec![Complex64::default(); 1 << total_k];
    let scale: f64 = decoders.iter().map(BlockDecoder::amplitude_scale).product();
    'terms: for (w, a) in state.terms() {
        let mut idx = 0usize;
        for (r, dec) in decoders.iter().enumerate() {
            match dec.decode(&state.register_bits(w, r)) {
                Some(u) => idx = (idx << dec.k) | logical_index(&u),
                None => continue 'terms,
            }
        }
        amps[idx] += a * scale;
    }
    let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let leak = (state.norm_sqr() - captured).max(0.0);
    (amps, leak)
}

/// Result of running a gate sequence on every encoded basis state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogicalActionReport {
    /// Row-major matrix; entry `(i, j)` is `⟨i|U|j⟩`.
    pub derived_matrix: Vec<Vec<(f64, f64)>>,
    pub predicted_matrix: Option<Vec<Vec<(f64, f64)>>>,
    /// Largest entry difference against the prediction (0 when none given).
    pub max_deviation: f64,
    /// Largest entry of `U†U − I` (isometry defect for rectangular `U`).
    pub unitarity_deviation: f64,
    /// Largest norm that left the encoded space for any input.
    pub leakage: f64,
    pub legitimate: bool,
}

impl LogicalActionReport {
    pub fn from_matrix(derived: &CMatrix, predicted: Option<&CMatrix>, leakage: f64) -> Self {
        let dim = derived.ncols();
        let unitarity_deviation = (derived.adjoint() * derived - CMatrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let max_deviation = predicted.map_or(0.0, |p| max_abs_diff(derived, p));
        Self {
            derived_matrix: to_rows(derived),
            predicted_matrix: predicted.map(to_rows),
            max_deviation,
            unitarity_deviation,
            leakage,
            legitimate: leakage < TOLERANCE,
        }
    }

    pub fn derived(&self) -> CMatrix {
        from_rows(&self.derived_matrix)
    }

    /// Legitimate, unitary and matching the prediction within tolerance.
    pub fn passes(&self) -> bool {
        self.legitimate && self.unitarity_deviation < TOLERANCE && self.max_deviation < TOLERANCE
    }
}

fn to_rows(m: &CMatrix) -> Vec<Vec<(f64, f64)>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

fn from_rows(rows: &[Vec<(f64, f64)>]) -> CMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "matrix shapes differ");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Applies `gates` to every encoded basis state of `codes` (one register
/// per code) and assembles the induced logical matrix.
pub fn derive_logical_action(
    codes: &[&CssCode],
    gates: &[BitwiseGate],
    predicted: Option<&CMatrix>,
) -> Result<LogicalActionReport, SimError> {
    let total_k: usize = codes.iter().map(|c| c.k).sum();
    if total_k > 6 {
        return Err(SimError::TooManyLogicalQubits(total_k));
    }
    let dim = 1usize << total_k;
    let mut m = CMatrix::zeros(dim, dim);
    let mut leakage: f64 = 0.0;
    for j in 0..dim {
        let mut s = encode_product(codes, j)?;
        for g in gates {
            apply_in_place(g, &mut s)?;
        }
        let (col, leak) = logical_amplitudes(&s, codes);
        leakage = leakage.max(leak);
        for (i, a) in col.into_iter().enumerate() {
            m[(i, j)] = a;
        }
    }
    Ok(LogicalActionReport::from_matrix(&m, predicted, leakage))
}

// Standard logical matrices, big-endian qubit order.

pub fn hadamard(k: usize) -> CMatrix {
    let h = CMatrix::from_row_slice(
        2,
        2,
        &[1.0, 1.0, 1.0, -1.0].map(|x| Complex64::new(x * std::f64::consts::FRAC_1_SQRT_2, 0.0)),
    );
    (1..k).fold(if k == 0 { CMatrix::identity(1, 1) } else { h.clone() }, |acc, _| acc.kronecker(&h))
}

/// Diagonal matrix with `phase(index)` on the diagonal.
pub fn diagonal(dim: usize, phase: impl Fn(usize) -> Complex64) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| if i == j { phase(i) } else { Complex64::default() })
}

/// Permutation matrix sending basis state `j` to `f(j)`.
pub fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        m[(f(j), j)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Logical CNOT from every qubit of the first `k`-qubit block onto the
/// corresponding qubit of the second.
pub fn blockwise_cnot(k: usize) -> CMatrix {
    let mask = (1 << k) - 1;
    permutation(1 << (2 * k), |j| {
        let (u, v) = (j >> k, j & mask);
        (u << k) | (u ^ v)
    })
}

/// Logical Toffoli on three qubits, controls first.
pub fn toffoli() -> CMatrix {
    permutation(8, |j| if j & 0b110 == 0b110 { j ^ 1 } else { j })
}

/// Prediction of bitwise H for a lemma-3 code: `(−1)^{u·D̃D̃ᵀ·vᵀ}/2^{k/2}`.
pub fn predicted_bitwise_h(code: &CssCode) -> CMatrix {
    let k = code.k;
    let dim = 1 << k;
    let s = 2f64.powf(-(k as f64) / 2.0);
    CMatrix::from_fn(dim, dim, |i, j| {
        let ddv = if k == 0 {
            false
        } else {
            code.dd_transpose.left_mul(&logical_word(k, i)).dot(&logical_word(k, j))
        };
        Complex64::new(if ddv { -s } else { s }, 0.0)
    })
}

/// Prediction of bitwise P for a lemma-4 code: `i^{|u·D̃|}`.
pub fn predicted_bitwise_p(code: &CssCode) -> CMatrix {
    let k = code.k;
    diagonal(1 << k, |i| {
        let w = if k == 0 {
            0
        } else {
            code.coset_leaders.left_mul(&logical_word(k, i)).weight()
        };
        Angle::Eighths(2).phase(w)
    })
}

/// Prediction of bitwise CZ for a lemma-3 pair: `(−1)^{u·D̃D̃ᵀ·vᵀ}`.
pub fn predicted_bitwise_cz(code: &CssCode) -> CMatrix {
    let k = code.k;
    let mask = (1 << k) - 1;
    diagonal(1 << (2 * k), |j| {
        let (u, v) = (logical_word(k, j >> k), logical_word(k, j & mask));
        let s = k > 0 && code.dd_transpose.left_mul(&u).dot(&v);
        Complex64::new(if s { -1.0 } else { 1.0 }, 0.0)
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Check {
    pub gate: String,
    pub report: LogicalActionReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub w: usize,
    pub r0: usize,
    pub r1: usize,
    /// `r₁ − r₀ mod w`.
    pub r: usize,
    /// False when `r₀ ≠ 0`; the matrices are then compared after removing
    /// the phase of the `|0…0⟩` entry.
    pub closed_form: bool,
    pub checks: Vec<Lemma1Check>,
}

impl Lemma1Report {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.report.passes())
    }
}

/// Verifies the three bitwise phase gates of Lemma 1 for a `k = 1` code.
pub fn verify_lemma1(code: &CssCode, w: usize) -> Result<Lemma1Report, SimError> {
    if code.k != 1 {
        return Err(SimError::NotSingleQubitCode(code.k));
    }
    let c = code.clone().with_lemma1(w, ENCODE_BUDGET_DIM)?;
    let (r0, r1) = c
        .lemma1_residues()
        .ok_or(SimError::WeightCongruenceViolated { w })?;
    let r = (r1 + w - r0) % w;
    let w_i = w as i64;
    let r_i = r as i64;
    let specs: [(&str, usize, BitwiseGate, Angle); 3] = [
        (
            "P(2pi/w)",
            1,
            BitwiseGate::P { reg: 0, angle: Angle::turn_fraction(1, w_i) },
            Angle::turn_fraction(r_i, w_i),
        ),
        (
            "CP(4pi/w)",
            2,
            BitwiseGate::Cp { a: 0, b: 1, angle: Angle::turn_fraction(2, w_i) },
            Angle::turn_fraction(2 * r_i, w_i),
        ),
        (
            "CCP(8pi/w)",
            3,
            BitwiseGate::Ccp { a: 0, b: 1, c: 2, angle: Angle::turn_fraction(4, w_i) },
            Angle::turn_fraction(4 * r_i, w_i),
        ),
    ];
    let mut checks = Vec::new();
    for (name, blocks, gate, logical_angle) in specs {
        let codes: Vec<&CssCode> = vec![code; blocks];
        let all = (1usize << blocks) - 1;
        let predicted = diagonal(1 << blocks, |i| logical_angle.phase(usize::from(i == all)));
        let mut report = derive_logical_action(&codes, &[gate], Some(&predicted))?;
        if r0 != 0 {
            let mut m = report.derived();
            let g = m[(0, 0)] / m[(0, 0)].norm();
            m /= g;
            report = LogicalActionReport::from_matrix(&m, Some(&predicted), report.leakage);
        }
        checks.push(Lemma1Check { gate: name.to_string(), report });
    }
    Ok(Lemma1Report {
        w,
        r0,
        r1,
        r,
        closed_form: r0 == 0,
        checks,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma5Case {
    pub u: String,
    pub v: String,
    pub a: bool,
    pub expected_sign: i8,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma5Report {
    pub cases: Vec<Lemma5Case>,
    pub max_deviation: f64,
}

impl Lemma5Report {
    pub fn passes(&self) -> bool {
        self.max_deviation < TOLERANCE
    }
}

/// Bitwise CCZ on two encoded blocks and an `n`-bit cat-basis register:
/// `|u⟩_L|v⟩_L|a⟩ → (−1)^{a·u·D̃D̃ᵀ·vᵀ}|u⟩_L|v⟩_L|a⟩`.
pub fn verify_lemma5(code: &CssCode) -> Result<Lemma5Report, SimError> {
    let k = code.k;
    if 2 * k > 6 {
        return Err(SimError::TooManyLogicalQubits(2 * k));
    }
    let gate = BitwiseGate::Ccz { a: 0, b: 1, c: 2 };
    let mut cases = Vec::new();
    let mut max_dev: f64 = 0.0;
    for ui in 0..1usize << k {
        for vi in 0..1usize << k {
            for a in [false, true] {
                let (u, v) = (logical_word(k, ui), logical_word(k, vi));
                let cat_word = if a { BinaryVector::ones(code.n) } else { BinaryVector::zeros(code.n) };
                let input = encode_basis(code, &u)?
                    .tensor(&encode_basis(code, &v)?)
                    .tensor(&LogicalState::basis(vec![code.n], cat_word));
                let out = super::gate::apply(&gate, &input)?;
                let odd = a && k > 0 && code.dd_transpose.left_mul(&u).dot(&v);
                let sign = if odd { -1.0 } else { 1.0 };
                let mut expected = input.clone();
                expected.scale(Complex64::new(sign, 0.0));
                let deviation = out.max_deviation(&expected);
                max_dev = max_dev.max(deviation);
                cases.push(Lemma5Case {
                    u: u.to_string(),
                    v: v.to_string(),
                    a,
                    expected_sign: sign as i8,
                    deviation,
                });
            }
        }
    }
    Ok(Lemma5Report { cases, max_deviation: max_dev })
}

/// Measurement basis for a whole register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureBasis {
    Z,
    X,
}

/// One outcome of a branch-complete measurement.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: BinaryVector,
    pub probability: f64,
    /// Normalised post-measurement state with the measured register removed.
    pub state: LogicalState,
}

/// Measures every qubit of register `block` in `basis`, enumerating all
/// outcomes with nonzero probability.
pub fn measure_block(s: &LogicalState, block: usize, basis: MeasureBasis) -> Result<Vec<Branch>, SimError> {
    if block >= s.register_count() {
        return Err(SimError::BadRegister(block));
    }
    let rotated;
    let s = match basis {
        MeasureBasis::Z => s,
        MeasureBasis::X => {
            rotated = super::gate::apply(&BitwiseGate::H { reg: block }, s)?;
            &rotated
        }
    };
    let total = s.norm_sqr();
    let mut out = Vec::new();
    for (outcome, weight) in s.register_distribution(block) {
        if weight < 1e-24 {
            continue;
        }
        let mut post = s.project_out(block, &outcome);
        post.normalize();
        out.push(Branch {
            outcome,
            probability: weight / total,
            state: post,
        });
    }
    Ok(out)
}
