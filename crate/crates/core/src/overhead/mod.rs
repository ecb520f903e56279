//! Analytic resource model for a machine that runs every logical gate through
//! recoveries on `[[n,k,d]]` blocks: scale-up, per-block failure probability,
//! the noise level that still meets a target, and ancilla sufficiency.

mod table;

use serde::Serialize;
use thiserror::Error;

pub use table::{
    compare_with_reference, p1_against_reference, table1, table1_codes, Comparison, P1Comparison, P1Reference, Table1, Table1Reference,
    Table1Row, P1_REFERENCE, TABLE1_REFERENCE,
};

/// Algorithm size `K·Q` for factoring a 430-bit number.
pub const TABLE1_KQ: f64 = 2.15e12;
/// Lower and upper ends of the `γ` bracket searched by [`solve_gamma_max`].
pub const GAMMA_BRACKET: (f64, f64) = (1e-12, 1e-1);
/// Relative agreement between `P(γ_max)` and `Plim` demanded of the solver.
pub const SOLVE_TOLERANCE: f64 = 1e-6;
/// Binomial terms smaller than this fraction of the running sum end the sum.
pub const TRUNCATION: f64 = 1e-30;
/// Largest fraction of blocks with a non-zero first syndrome that the spare
/// ancillas can serve: `2B` spares against `7·P₁·B` further extractions.
pub const P1_LIMIT: f64 = 2.0 / 7.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OverheadError {
    #[error("infeasible: P = {p_floor:.3e} exceeds Plim = {plim:.3e} already at gamma = {gamma_floor:e}")]
    Infeasible { gamma_floor: f64, p_floor: f64, plim: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Size of the accumulator that logical gates pass through.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accumulator {
    /// Three blocks, one logical qubit each.
    #[default]
    ThreeBlocks,
    /// About `K/4k` blocks.
    QuarterOfData,
}

impl Accumulator {
    pub fn blocks(self, k: usize, logical_qubits: f64) -> f64 {
        match self {
            Accumulator::ThreeBlocks => 3.0,
            Accumulator::QuarterOfData => logical_qubits / (4.0 * k as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverheadParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Mean weight of an `H̃` row.
    pub w: f64,
    /// Mean weight of a `D̃` row.
    pub mean_d_weight: f64,
    /// Logical qubits `K`; infinite gives the large-machine limit of `S`.
    pub logical_qubits: f64,
    /// Product `K·Q` with `Q` the Toffoli count.
    pub kq: f64,
    pub gamma: f64,
    /// Memory error `ε` as a multiple of `γ`.
    pub epsilon_ratio: f64,
    /// Syndrome repetitions per recovery.
    pub r: usize,
    pub accumulator: Accumulator,
}

impl OverheadParams {
    /// Defaults: `D̃` weight `d+1`, `ε = γ/n`, `r = t+1`, `K → ∞`,
    /// `KQ = 2.15·10¹²`, `γ = 0`.
    pub fn new(n: usize, k: usize, d: usize, w: f64) -> Self {
        let t = d.saturating_sub(1) / 2;
        OverheadParams {
            n,
            k,
            d,
            w,
            mean_d_weight: d as f64 + 1.0,
            logical_qubits: f64::INFINITY,
            kq: TABLE1_KQ,
            gamma: 0.0,
            epsilon_ratio: 1.0 / n as f64,
            r: t + 1,
            accumulator: Accumulator::ThreeBlocks,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_kq(mut self, kq: f64) -> Self {
        self.kq = kq;
        self
    }

    /// Correctable errors per block.
    pub fn t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    pub fn epsilon(&self) -> f64 {
        self.gamma * self.epsilon_ratio
    }

    pub fn validate(&self) -> Result<(), OverheadError> {
        let bad = |m: &str| Err(OverheadError::InvalidParams(m.into()));
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return bad("need 1 <= k <= n");
        }
        if self.d == 0 {
            return bad("distance must be positive");
        }
        if !(self.w >= 0.0 && self.mean_d_weight >= 0.0 && self.epsilon_ratio >= 0.0) {
            return bad("weights and epsilon ratio must be non-negative");
        }
        if !(self.kq >= 1.0) || !(self.logical_qubits >= self.k as f64) {
            return bad("need KQ >= 1 and K >= k");
        }
        if !(0.0..=1.0).contains(&self.gamma) || !(0.0..=1.0).contains(&self.epsilon()) {
            return bad("gamma and epsilon must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Physical-to-logical size ratio and its `K → ∞` limit `(5n+4)/k`.
pub fn scale_up(n: usize, k: usize, logical_qubits: f64) -> (f64, f64) {
    scale_up_with(n, k, logical_qubits, Accumulator::ThreeBlocks)
}

pub fn scale_up_with(n: usize, k: usize, logical_qubits: f64, accumulator: Accumulator) -> (f64, f64) {
    let per_block = (5 * n + 4) as f64 / k as f64;
    let extra = if logical_qubits.is_infinite() {
        match accumulator {
            Accumulator::ThreeBlocks => 0.0,
            Accumulator::QuarterOfData => 0.25,
        }
    } else {
        accumulator.blocks(k, logical_qubits) * k as f64 / logical_qubits
    };
    (per_block * (1.0 + extra), per_block)
}

/// Gate and memory error opportunities `(g, s)` in one recovery of a block.
pub fn error_opportunities(p: &OverheadParams) -> (usize, f64) {
    let (n, k, r) = (p.n as f64, p.k as f64, p.r as f64);
    let g = p.n * (4 * p.r + 1);
    let s = n * ((p.w + 2.0) * (n - k) / 2.0 + (p.mean_d_weight + 1.0) * k + n * (2.0 + r / 2.0));
    (g, s)
}

/// Per-opportunity error rate `2γ/3 + (s/g)(2ε/3)`.
pub fn opportunity_rate(p: &OverheadParams) -> f64 {
    let (g, s) = error_opportunities(p);
    2.0 * p.gamma / 3.0 + s / g as f64 * 2.0 * p.epsilon() / 3.0
}

/// `2 Σ_{i=from}^{g} C(g,i) x^i`, summed in log space.
pub fn binomial_tail(g: usize, x: f64, from: usize) -> f64 {
    if from > g || x <= 0.0 {
        return if from == 0 { 2.0 } else { 0.0 };
    }
    let lx = x.ln();
    let mut log_c: f64 = (0..from).map(|j| ((g - j) as f64 / (j + 1) as f64).ln()).sum();
    let mut log_sum = f64::NEG_INFINITY;
    let cut = TRUNCATION.ln();
    for i in from..=g {
        let lt = log_c + i as f64 * lx;
        log_sum = log_add(log_sum, lt);
        // Past the peak every further term is smaller still.
        if lt < log_sum + cut && (i as f64) > g as f64 * x {
            break;
        }
        log_c += ((g - i) as f64 / (i + 1) as f64).ln();
    }
    2.0 * log_sum.exp()
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Probability that a corrected block develops more than `t` errors.
pub fn failure_probability(p: &OverheadParams) -> f64 {
    let (g, _) = error_opportunities(p);
    binomial_tail(g, opportunity_rate(p), p.t() + 1)
}

/// Required per-block recovery failure bound `k/(8KQ)`.
pub fn plim(k: usize, kq: f64) -> f64 {
    k as f64 / (8.0 * kq)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaSolution {
    pub gamma_max: f64,
    pub epsilon_max: f64,
    pub plim: f64,
    /// `P` at `gamma_max`.
    pub p: f64,
    /// The bracket's upper end already meets the bound.
    pub saturated: bool,
}

/// Largest `γ` (with `ε = γ·epsilon_ratio`) for which the failure probability
/// stays at or below `Plim`. The `gamma` field of `params` is ignored.
pub fn solve_gamma_max(params: &OverheadParams) -> Result<GammaSolution, OverheadError> {
    let mut p = params.clone();
    p.gamma = 0.0;
    p.validate()?;
    let target = plim(p.k, p.kq);
    let at = |gamma: f64| failure_probability(&OverheadParams { gamma, ..p.clone() });
    let (mut lo, mut hi) = GAMMA_BRACKET;
    let floor = at(lo);
    if floor > target {
        return Err(OverheadError::Infeasible { gamma_floor: lo, p_floor: floor, plim: target });
    }
    let done = |gamma: f64, saturated| GammaSolution {
        gamma_max: gamma,
        epsilon_max: gamma * p.epsilon_ratio,
        plim: target,
        p: at(gamma),
        saturated,
    };
    if at(hi) <= target {
        return Ok(done(hi, true));
    }
    // Bisect on log γ; stop once the feasible end is within tolerance of Plim.
    while (target - at(lo)) / target > SOLVE_TOLERANCE && hi / lo - 1.0 > f64::EPSILON * 16.0 {
        let mid = (lo * hi).sqrt();
        if at(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(done(lo, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AncillaSufficiency {
    /// `32nrγ/3`.
    pub closed_form: f64,
    /// The failure sum started at one error instead of `t+1`.
    pub full_sum: f64,
    pub limit: f64,
    /// Verdict on the closed form.
    pub sufficient: bool,
    pub full_sum_sufficient: bool,
}

/// Probability of a non-zero first syndrome, and whether the two spare
/// ancillas per block cover the repeated extractions it triggers.
pub fn ancilla_sufficiency(params: &OverheadParams, gamma: f64) -> AncillaSufficiency {
    let p = OverheadParams { gamma, ..params.clone() };
    let (g, _) = error_opportunities(&p);
    let closed_form = 32.0 * p.n as f64 * p.r as f64 * gamma / 3.0;
    let full_sum = binomial_tail(g, opportunity_rate(&p), 1);
    AncillaSufficiency {
        closed_form,
        full_sum,
        limit: P1_LIMIT,
        sufficient: closed_form <= P1_LIMIT,
        full_sum_sufficient: full_sum <= P1_LIMIT,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoubleFailureCheck {
    /// `2^{t+1}`.
    pub accumulation_factor: f64,
    /// `2^{t+1}·P`: an uncorrected block left for a second recovery.
    pub accumulated: f64,
    pub plim: f64,
    /// Largest wrong-zero-syndrome probability keeping the combined
    /// mechanism at or below `Plim`.
    pub max_wrong_zero: f64,
    /// `max_wrong_zero ≥ 2^{-(t+1)}`, within the solver tolerance.
    pub holds: bool,
}

pub fn double_failure_check(params: &OverheadParams) -> DoubleFailureCheck {
    let factor = 2f64.powi(params.t() as i32 + 1);
    let p = failure_probability(params);
    let limit = plim(params.k, params.kq);
    let accumulated = factor * p;
    let max_wrong_zero = if accumulated > 0.0 { limit / accumulated } else { f64::INFINITY };
    DoubleFailureCheck {
        accumulation_factor: factor,
        accumulated,
        plim: limit,
        max_wrong_zero,
        holds: max_wrong_zero * factor >= 1.0 - 10.0 * SOLVE_TOLERANCE,
    }
}

/// Rotation angle `φ` produced from a rotation by `α` through one round of
/// the measured-ancilla construction: `cos φ = (6+10cos α)/(10+6cos α)`.
pub fn rotation_synthesis(alpha: f64) -> f64 {
    let c = alpha.cos();
    ((6.0 + 10.0 * c) / (10.0 + 6.0 * c)).clamp(-1.0, 1.0).acos()
}

/// The starting rotation, obtained from `α = π/2` (`cos φ = 3/5`).
pub fn rotation_base() -> f64 {
    rotation_synthesis(std::f64::consts::FRAC_PI_2)
}

/// Everything the model says about one parameter set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverheadReport {
    pub params: OverheadParams,
    pub g: usize,
    pub s: f64,
    pub p: f64,
    pub plim: f64,
    pub p1: AncillaSufficiency,
    pub scaleup: f64,
    pub scaleup_limit: f64,
    /// `γ_max`, or `None` when infeasible.
    pub gamma_max: Option<f64>,
    pub feasible: bool,
    /// CNOTs verifying one ancilla, `w(n−k)/2 + (D̃ weight)·k`.
    pub verification_cnots: f64,
    pub double_failure: DoubleFailureCheck,
}

pub fn evaluate(params: &OverheadParams) -> Result<OverheadReport, OverheadError> {
    params.validate()?;
    let (g, s) = error_opportunities(params);
    let (scaleup, scaleup_limit) = scale_up_with(params.n, params.k, params.logical_qubits, params.accumulator);
    let gamma_max = match solve_gamma_max(params) {
        Ok(sol) => Some(sol.gamma_max),
        Err(OverheadError::Infeasible { .. }) => None,
        Err(e) => return Err(e),
    };
    let p = failure_probability(params);
    let limit = plim(params.k, params.kq);
    Ok(OverheadReport {
        params: params.clone(),
        g,
        s,
        p,
        plim: limit,
        p1: ancilla_sufficiency(params, params.gamma),
        scaleup,
        scaleup_limit,
        gamma_max,
        feasible: p <= limit,
        verification_cnots: params.w * (params.n - params.k) as f64 / 2.0 + params.mean_d_weight * params.k as f64,
        double_failure: double_failure_check(params),
    })
}
