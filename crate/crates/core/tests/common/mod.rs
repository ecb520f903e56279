//! Dense state-vector oracle, written against plain `Vec<bool>` words so it
//! shares no code with the sparse simulator.
#![allow(dead_code)]

use num_complex::Complex64;

pub struct Dense {
    pub qubits: usize,
    pub amps: Vec<Complex64>,
}

/// Index with qubit 0 as the most significant bit.
fn bit(index: usize, qubits: usize, q: usize) -> bool {
    (index >> (qubits - 1 - q)) & 1 == 1
}

fn flip(index: usize, qubits: usize, q: usize) -> usize {
    index ^ (1 << (qubits - 1 - q))
}

fn to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

impl Dense {
    pub fn zero(qubits: usize) -> Self {
        assert!(qubits <= 22);
        let mut amps = vec![Complex64::default(); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    /// `|C₀|^{-1/2} Σ_{x ∈ span(rows)} |x + shift⟩`, by brute-force span enumeration.
    pub fn coset(rows: &[Vec<bool>], shift: &[bool]) -> Self {
        let n = shift.len();
        let mut words = std::collections::BTreeSet::new();
        for mask in 0..1usize << rows.len() {
            let mut w = shift.to_vec();
            for (i, r) in rows.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    for (a, &b) in w.iter_mut().zip(r) {
                        *a ^= b;
                    }
                }
            }
            words.insert(to_index(&w));
        }
        let mut amps = vec![Complex64::default(); 1 << n];
        let a = 1.0 / (words.len() as f64).sqrt();
        for w in words {
            amps[w] = Complex64::new(a, 0.0);
        }
        Self { qubits: n, amps }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { qubits: self.qubits + other.qubits, amps }
    }

    pub fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if !bit(i, self.qubits, q) {
                let j = flip(i, self.qubits, q);
                let (a, b) = (self.amps[i], self.amps[j]);
                self.amps[i] = (a + b) * s;
                self.amps[j] = (a - b) * s;
            }
        }
    }

    pub fn x(&mut self, q: usize) {
        for i in 0..self.amps.len() {
            if !bit(i, self.qubits, q) {
                self.amps.swap(i, flip(i, self.qubits, q));
            }
        }
    }

    /// Multiplies by `phase` wherever all of `qs` are 1.
    pub fn controlled_phase(&mut self, qs: &[usize], phase: Complex64) {
        for i in 0..self.amps.len() {
            if qs.iter().all(|&q| bit(i, self.qubits, q)) {
                self.amps[i] *= phase;
            }
        }
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        for i in 0..self.amps.len() {
            if bit(i, self.qubits, c) && !bit(i, self.qubits, t) {
                self.amps.swap(i, flip(i, self.qubits, t));
            }
        }
    }

    pub fn max_deviation(&self, other: &[Complex64]) -> f64 {
        self.amps.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

pub fn bools(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}
