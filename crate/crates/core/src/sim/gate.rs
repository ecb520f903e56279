use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::LogicalState;
use super::SimError;
use crate::gf2::{self, BinaryMatrix, BinaryVector};

/// Largest number of terms the H transform may produce.
pub const H_OUTPUT_BUDGET: usize = 1 << 23;

/// A phase angle; multiples of π/4 are evaluated from an exact table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    /// `k·π/4`.
    Eighths(i64),
    Radians(f64),
}

impl Angle {
    /// `2π·num/den`, exact when it is a multiple of π/4.
    pub fn turn_fraction(num: i64, den: i64) -> Self {
        if (8 * num) % den == 0 {
            Angle::Eighths(8 * num / den)
        } else {
            Angle::Radians(2.0 * PI * num as f64 / den as f64)
        }
    }

    pub fn radians(self) -> f64 {
        match self {
            Angle::Eighths(k) => k as f64 * PI / 4.0,
            Angle::Radians(r) => r,
        }
    }

    /// `e^{i·m·θ}`.
    pub fn phase(self, m: usize) -> Complex64 {
        match self {
            Angle::Eighths(k) => {
                const S: f64 = FRAC_1_SQRT_2;
                const TABLE: [(f64, f64); 8] =
                    [(1.0, 0.0), (S, S), (0.0, 1.0), (-S, S), (-1.0, 0.0), (-S, -S), (0.0, -1.0), (S, -S)];
                let (re, im) = TABLE[(k * m as i64).rem_euclid(8) as usize];
                Complex64::new(re, im)
            }
            Angle::Radians(r) => Complex64::from_polar(1.0, r * m as f64),
        }
    }
}

/// Transversal operations. Register indices refer to the state's registers;
/// every multi-register gate acts on corresponding positions only, restricted
/// to `mask` when one is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum BitwiseGate {
    X { reg: usize, mask: BinaryVector },
    Z { reg: usize, mask: BinaryVector },
    /// H on every qubit of the register.
    H { reg: usize },
    /// `P(θ) = diag(1, e^{iθ})` on every qubit of the register.
    P { reg: usize, angle: Angle },
    Cx { control: usize, target: usize, mask: Option<BinaryVector> },
    Cz { a: usize, b: usize, mask: Option<BinaryVector> },
    Ccz { a: usize, b: usize, c: usize },
    /// Controlled `P(θ)` between corresponding qubits.
    Cp { a: usize, b: usize, angle: Angle },
    /// Doubly controlled `P(θ)` across three registers.
    Ccp { a: usize, b: usize, c: usize, angle: Angle },
}

impl BitwiseGate {
    pub fn x(reg: usize, mask: BinaryVector) -> Self {
        Self::X { reg, mask }
    }

    pub fn z(reg: usize, mask: BinaryVector) -> Self {
        Self::Z { reg, mask }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::Cx { control, target, mask: None }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::Cz { a, b, mask: None }
    }

    /// Registers the gate touches.
    pub fn registers(&self) -> Vec<usize> {
        match *self {
            Self::X { reg, .. } | Self::Z { reg, .. } | Self::H { reg } | Self::P { reg, .. } => vec![reg],
            Self::Cx { control, target, .. } => vec![control, target],
            Self::Cz { a, b, .. } | Self::Cp { a, b, .. } => vec![a, b],
            Self::Ccz { a, b, c } | Self::Ccp { a, b, c, .. } => vec![a, b, c],
        }
    }

    /// Same gate with register indices passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut g = self.clone();
        match &mut g {
            Self::X { reg, .. } | Self::Z { reg, .. } | Self::H { reg } | Self::P { reg, .. } => *reg = f(*reg),
            Self::Cx { control, target, .. } => {
                *control = f(*control);
                *target = f(*target);
            }
            Self::Cz { a, b, .. } | Self::Cp { a, b, .. } => {
                *a = f(*a);
                *b = f(*b);
            }
            Self::Ccz { a, b, c } | Self::Ccp { a, b, c, .. } => {
                *a = f(*a);
                *b = f(*b);
                *c = f(*c);
            }
        }
        g
    }
}

fn check_widths(s: &LogicalState, regs: &[usize]) -> Result<usize, SimError> {
    let w = s.width(*regs.first().expect("at least one register"));
    for &r in regs {
        if r >= s.register_count() {
            return Err(SimError::BadRegister(r));
        }
        if s.width(r) != w {
            return Err(SimError::WidthMismatch);
        }
    }
    let mut sorted = regs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != regs.len() {
        return Err(SimError::RepeatedRegister);
    }
    Ok(w)
}

/// Applies `gate` to `s`, returning the new state.
pub fn apply(gate: &BitwiseGate, s: &LogicalState) -> Result<LogicalState, SimError> {
    let mut out = s.clone();
    apply_in_place(gate, &mut out)?;
    Ok(out)
}

pub fn apply_in_place(gate: &BitwiseGate, s: &mut LogicalState) -> Result<(), SimError> {
    let regs = gate.registers();
    let width = check_widths(s, &regs)?;
    let offs: Vec<usize> = regs.iter().map(|&r| s.offset(r)).collect();
    let bits = |word: &BinaryVector, i: usize| word.slice(offs[i], width);
    let full = BinaryVector::ones(width);
    let check_mask = |m: &BinaryVector| {
        if m.len() == width {
            Ok(())
        } else {
            Err(SimError::WidthMismatch)
        }
    };
    match gate {
        BitwiseGate::X { mask, .. } => {
            check_mask(mask)?;
            let shifted = BinaryVector::zeros(offs[0]).concat(mask);
            let padded = shifted.concat(&BinaryVector::zeros(s.total_bits() - offs[0] - width));
            for (w, _) in s.terms_mut().iter_mut() {
                w.xor_assign(&padded);
            }
            s.canonicalize();
        }
        BitwiseGate::Z { mask, .. } => {
            check_mask(mask)?;
            for (w, a) in s.terms_mut().iter_mut() {
                if bits(w, 0).dot(mask) {
                    *a = -*a;
                }
            }
        }
        BitwiseGate::P { angle, .. } => {
            let table: Vec<Complex64> = (0..=width).map(|m| angle.phase(m)).collect();
            for (w, a) in s.terms_mut().iter_mut() {
                *a *= table[bits(w, 0).weight()];
            }
            s.canonicalize();
        }
        BitwiseGate::Cx { mask, .. } => {
            let mask = mask.as_ref().unwrap_or(&full);
            check_mask(mask)?;
            for (w, _) in s.terms_mut().iter_mut() {
                let c = &bits(w, 0) & mask;
                let t = &bits(w, 1) ^ &c;
                w.copy_from(offs[1], &t);
            }
            s.canonicalize();
        }
        BitwiseGate::Cz { mask, .. } => {
            let mask = mask.as_ref().unwrap_or(&full);
            check_mask(mask)?;
            for (w, a) in s.terms_mut().iter_mut() {
                let both = &bits(w, 0) & &bits(w, 1);
                if both.dot(mask) {
                    *a = -*a;
                }
            }
        }
        BitwiseGate::Ccz { .. } => {
            for (w, a) in s.terms_mut().iter_mut() {
                let all = &(&bits(w, 0) & &bits(w, 1)) & &bits(w, 2);
                if all.weight() % 2 == 1 {
                    *a = -*a;
                }
            }
        }
        BitwiseGate::Cp { angle, .. } => {
            let table: Vec<Complex64> = (0..=width).map(|m| angle.phase(m)).collect();
            for (w, a) in s.terms_mut().iter_mut() {
                *a *= table[bits(w, 0).overlap(&bits(w, 1))];
            }
            s.canonicalize();
        }
        BitwiseGate::Ccp { angle, .. } => {
            let table: Vec<Complex64> = (0..=width).map(|m| angle.phase(m)).collect();
            for (w, a) in s.terms_mut().iter_mut() {
                let ab = &bits(w, 0) & &bits(w, 1);
                *a *= table[ab.overlap(&bits(w, 2))];
            }
            s.canonicalize();
        }
        BitwiseGate::H { reg } => {
            *s = hadamard_register(s, *reg)?;
        }
    }
    Ok(())
}

/// Reduced basis of an affine span with fast coordinate extraction.
struct Span {
    rows: Vec<BinaryVector>,
    pivots: Vec<usize>,
}

impl Span {
    fn of(vectors: impl Iterator<Item = BinaryVector>, n: usize) -> Self {
        let m = BinaryMatrix::from_rows(n, vectors.collect());
        let r = m.rref();
        Self {
            rows: r.matrix.rows()[..r.rank].to_vec(),
            pivots: r.pivots,
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` (assumed in the span) as a bitmask.
    fn coords(&self, v: &BinaryVector) -> usize {
        self.pivots
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &p)| acc | (usize::from(v.get(p)) << i))
    }
}

/// Bitwise H on register `reg` by coset duality.
///
/// Within each group of terms sharing the other registers, the register's
/// bits lie in `b₀ + U`. Then `H^{⊗n}` sends `Σ_c f(c)|b₀ + c·G⟩` to
/// `2^{-n/2} Σ_y (−1)^{b₀·y} f̂(G·y)|y⟩`, so the output is a union of cosets
/// of `U⊥`, one per character `χ = G·y` with `f̂(χ) ≠ 0`.
fn hadamard_register(s: &LogicalState, reg: usize) -> Result<LogicalState, SimError> {
    let (off, n) = (s.offset(reg), s.width(reg));
    if s.is_empty() {
        return Ok(s.clone());
    }
    let b0 = s.register_bits(&s.terms()[0].0, reg);
    let span = Span::of(
        s.terms().iter().map(|(w, _)| &s.register_bits(w, reg) ^ &b0),
        n,
    );
    let u = span.dim();
    if u > 24 {
        return Err(SimError::UnsupportedOnState(format!("support span of dimension {u}")));
    }
    let perp = BinaryMatrix::from_rows(n, span.rows.clone()).null_space();
    let scale = Complex64::new(2f64.powf(-(n as f64) / 2.0), 0.0);

    // Group by the other registers; terms are sorted by whole word, so
    // collect groups through a map keyed on the complement bits.
    let mut groups: std::collections::BTreeMap<BinaryVector, Vec<Complex64>> = Default::default();
    for (w, a) in s.terms() {
        let mut other = w.clone();
        other.copy_from(off, &BinaryVector::zeros(n));
        let f = groups.entry(other).or_insert_with(|| vec![Complex64::default(); 1 << u]);
        f[span.coords(&(&s.register_bits(w, reg) ^ &b0))] += *a;
    }

    let mut out = Vec::new();
    let per_coset = 1usize.checked_shl((n - u) as u32).unwrap_or(usize::MAX);
    for (other, mut f) in groups {
        walsh_hadamard(&mut f);
        for (chi, amp) in f.iter().enumerate() {
            if amp.norm() < super::state::AMPLITUDE_CUTOFF {
                continue;
            }
            if out.len().saturating_add(per_coset) > H_OUTPUT_BUDGET {
                return Err(SimError::UnsupportedOnState(format!(
                    "H output exceeds {H_OUTPUT_BUDGET} terms"
                )));
            }
            let mut y0 = BinaryVector::zeros(n);
            for (i, &p) in span.pivots.iter().enumerate() {
                if (chi >> i) & 1 == 1 {
                    y0.set(p, true);
                }
            }
            gf2::for_each_in_coset(perp.rows(), &y0, |y, _| {
                let sign = if b0.dot(y) { -1.0 } else { 1.0 };
                let mut word = other.clone();
                word.copy_from(off, y);
                out.push((word, amp * scale * sign));
            });
        }
    }
    Ok(LogicalState::from_terms(s.widths().to_vec(), out))
}

fn walsh_hadamard(f: &mut [Complex64]) {
    let mut h = 1;
    while h < f.len() {
        for i in (0..f.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (f[j], f[j + h]);
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
        h *= 2;
    }
}
