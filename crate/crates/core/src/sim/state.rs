use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gf2::BinaryVector;

/// Amplitudes below this magnitude are dropped during canonicalisation.
pub const AMPLITUDE_CUTOFF: f64 = 1e-12;

/// Sparse state over registers of fixed widths.
///
/// Basis words are the concatenation of the registers in order. Terms are
/// kept sorted by word with no duplicates and no negligible amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalState {
    widths: Vec<usize>,
    offsets: Vec<usize>,
    terms: Vec<(BinaryVector, Complex64)>,
}

fn offsets_of(widths: &[usize]) -> Vec<usize> {
    widths
        .iter()
        .scan(0, |acc, &w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect()
}

impl LogicalState {
    /// State with the given terms; duplicates are summed, nothing is normalised.
    pub fn from_terms(widths: Vec<usize>, terms: Vec<(BinaryVector, Complex64)>) -> Self {
        let total: usize = widths.iter().sum();
        assert!(terms.iter().all(|(w, _)| w.len() == total), "word length mismatch");
        let mut s = Self {
            offsets: offsets_of(&widths),
            widths,
            terms,
        };
        s.canonicalize();
        s
    }

    pub fn basis(widths: Vec<usize>, word: BinaryVector) -> Self {
        Self::from_terms(widths, vec![(word, Complex64::new(1.0, 0.0))])
    }

    /// Equal-weight superposition of `words` in a single register.
    pub fn uniform(width: usize, words: impl IntoIterator<Item = BinaryVector>) -> Self {
        let words: Vec<_> = words.into_iter().collect();
        let a = Complex64::new(1.0 / (words.len() as f64).sqrt(), 0.0);
        Self::from_terms(vec![width], words.into_iter().map(|w| (w, a)).collect())
    }

    /// `(|0…0⟩ + (−1)^minus |1…1⟩)/√2` on `n` qubits.
    pub fn cat(n: usize, minus: bool) -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let b = if minus { -a } else { a };
        Self::from_terms(
            vec![n],
            vec![
                (BinaryVector::zeros(n), Complex64::new(a, 0.0)),
                (BinaryVector::ones(n), Complex64::new(b, 0.0)),
            ],
        )
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn register_count(&self) -> usize {
        self.widths.len()
    }

    pub fn offset(&self, reg: usize) -> usize {
        self.offsets[reg]
    }

    pub fn width(&self, reg: usize) -> usize {
        self.widths[reg]
    }

    pub fn total_bits(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn terms(&self) -> &[(BinaryVector, Complex64)] {
        &self.terms
    }

    pub(crate) fn terms_mut(&mut self) -> &mut Vec<(BinaryVector, Complex64)> {
        &mut self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn amplitude(&self, word: &BinaryVector) -> Complex64 {
        self.terms
            .binary_search_by(|(w, _)| w.cmp(word))
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    /// Bits of register `reg` within `word`.
    pub fn register_bits(&self, word: &BinaryVector, reg: usize) -> BinaryVector {
        word.slice(self.offsets[reg], self.widths[reg])
    }

    /// Sorts, merges equal words and drops negligible amplitudes.
    pub fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BinaryVector, Complex64)> = Vec::with_capacity(self.terms.len());
        for (w, a) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lw, la)) if *lw == w => *la += a,
                _ => merged.push((w, a)),
            }
        }
        merged.retain(|(_, a)| a.norm() >= AMPLITUDE_CUTOFF);
        self.terms = merged;
    }

    pub fn scale(&mut self, factor: Complex64) {
        for (_, a) in &mut self.terms {
            *a *= factor;
        }
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.scale(Complex64::new(1.0 / n, 0.0));
        }
    }

    /// `self ⊗ other`, with `other`'s registers appended.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut widths = self.widths.clone();
        widths.extend_from_slice(&other.widths);
        let terms = self
            .terms
            .iter()
            .flat_map(|(a, x)| other.terms.iter().map(move |(b, y)| (a.concat(b), x * y)))
            .collect();
        Self::from_terms(widths, terms)
    }

    /// Keeps the terms whose register `reg` equals `outcome`, removing the
    /// register. The result is not renormalised.
    pub fn project_out(&self, reg: usize, outcome: &BinaryVector) -> Self {
        let (off, w) = (self.offsets[reg], self.widths[reg]);
        let mut widths = self.widths.clone();
        widths.remove(reg);
        let terms = self
            .terms
            .iter()
            .filter(|(word, _)| word.slice(off, w) == *outcome)
            .map(|(word, a)| (remove_range(word, off, w), *a))
            .collect();
        Self::from_terms(widths, terms)
    }

    /// Outcome words of register `reg` with their total probability weight.
    pub fn register_distribution(&self, reg: usize) -> BTreeMap<BinaryVector, f64> {
        let mut out = BTreeMap::new();
        for (word, a) in &self.terms {
            *out.entry(self.register_bits(word, reg)).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// Moves register `from` to position `to`, shifting the others.
    pub fn move_register(&self, from: usize, to: usize) -> Self {
        let mut order: Vec<usize> = (0..self.register_count()).collect();
        let r = order.remove(from);
        order.insert(to, r);
        self.permute_registers(&order)
    }

    /// Reorders registers so that new register `i` is old register `order[i]`.
    pub fn permute_registers(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.register_count());
        let widths: Vec<usize> = order.iter().map(|&r| self.widths[r]).collect();
        let terms = self
            .terms
            .iter()
            .map(|(word, a)| {
                let mut out = BinaryVector::zeros(word.len());
                let mut off = 0;
                for &r in order {
                    out.copy_from(off, &self.register_bits(word, r));
                    off += self.widths[r];
                }
                (out, *a)
            })
            .collect();
        Self::from_terms(widths, terms)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.widths, other.widths, "register layouts differ");
        let (mut i, mut j) = (0, 0);
        let mut acc = Complex64::default();
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.terms[i].1.conj() * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Largest amplitude difference against `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.widths, other.widths, "register layouts differ");
        let mut dev: f64 = 0.0;
        for (w, a) in &self.terms {
            dev = dev.max((a - other.amplitude(w)).norm());
        }
        for (w, b) in &other.terms {
            dev = dev.max((self.amplitude(w) - b).norm());
        }
        dev
    }

    /// Phase `c` with `self ≈ c·other`, if the two states are equal up to a
    /// global phase within `tol`.
    pub fn phase_relative_to(&self, other: &Self, tol: f64) -> Option<Complex64> {
        let overlap = other.inner(self);
        let norm = (self.norm_sqr() * other.norm_sqr()).sqrt();
        if norm == 0.0 || (overlap.norm() - norm).abs() > tol {
            return None;
        }
        let c = overlap / overlap.norm();
        let mut scaled = other.clone();
        scaled.scale(c);
        (scaled.max_deviation(self) <= tol).then_some(c)
    }

    /// Dense amplitude vector, bit 0 of the word as the most significant bit.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.total_bits();
        assert!(n <= 24, "dense export limited to 24 qubits");
        let mut v = vec![Complex64::default(); 1 << n];
        for (w, a) in &self.terms {
            let idx = (0..n).fold(0usize, |acc, i| (acc << 1) | usize::from(w.get(i)));
            v[idx] = *a;
        }
        v
    }
}

pub(crate) fn remove_range(word: &BinaryVector, off: usize, w: usize) -> BinaryVector {
    let head = word.slice(0, off);
    let tail = word.slice(off + w, word.len() - off - w);
    head.concat(&tail)
}
