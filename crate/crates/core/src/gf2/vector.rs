use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::Gf2Error;

pub(crate) type Words = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// Fixed-length vector over GF(2), packed 64 bits per word.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`. Bits beyond `len`
/// are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryVector {
    len: usize,
    words: Words,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        let mut words = Words::new();
        words.resize(word_count(len), 0);
        Self { len, words }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Words::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self { len, words }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `value`, bit 0 first.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.mask_tail();
        }
        v
    }

    /// Integer with bit `i` equal to entry `i`. Only valid for `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Number of positions where both vectors have a 1.
    pub fn overlap(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let tz = w.trailing_zeros() as usize;
                out.push(wi * 64 + tz);
                w &= w - 1;
            }
        }
        out
    }

    /// Index of the first set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        out.copy_from(0, self);
        out.copy_from(self.len, other);
        out
    }

    /// Writes `src` into positions `offset..offset + src.len()`.
    pub fn copy_from(&mut self, offset: usize, src: &Self) {
        assert!(offset + src.len <= self.len);
        if offset % 64 == 0 {
            let base = offset / 64;
            let full = src.len / 64;
            self.words[base..base + full].copy_from_slice(&src.words[..full]);
            let rem = src.len % 64;
            if rem != 0 {
                let m = (1u64 << rem) - 1;
                let w = &mut self.words[base + full];
                *w = (*w & !m) | (src.words[full] & m);
            }
        } else {
            for i in 0..src.len {
                self.set(offset + i, src.get(i));
            }
        }
    }

    /// Sub-vector of positions `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        let mut out = Self::zeros(len);
        if start % 64 == 0 {
            let base = start / 64;
            let n = word_count(len);
            out.words.copy_from_slice(&self.words[base..base + n]);
            out.mask_tail();
        } else {
            for i in 0..len {
                if self.get(start + i) {
                    out.set(i, true);
                }
            }
        }
        out
    }

    /// Copy with position `index` removed.
    pub fn delete(&self, index: usize) -> Self {
        assert!(index < self.len);
        Self::from_bits(
            self.iter()
                .enumerate()
                .filter(|&(i, _)| i != index)
                .map(|(_, b)| b),
        )
    }

    /// Compares as bit strings read from position 0 (`"0…" < "1…"`).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            let x = a ^ b;
            if x != 0 {
                let bit = x.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BinaryVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.lex_cmp(other))
    }
}

impl BitXor for &BinaryVector {
    type Output = BinaryVector;
    fn bitxor(self, rhs: &BinaryVector) -> BinaryVector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl BitXorAssign<&BinaryVector> for BinaryVector {
    fn bitxor_assign(&mut self, rhs: &BinaryVector) {
        self.xor_assign(rhs);
    }
}

impl BitAnd for &BinaryVector {
    type Output = BinaryVector;
    fn bitand(self, rhs: &BinaryVector) -> BinaryVector {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(rhs.words.iter()) {
            *a &= b;
        }
        out
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl FromStr for BinaryVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut bits = Vec::with_capacity(s.len());
        for (col, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Gf2Error::Parse {
                        line: 1,
                        message: format!("unexpected character {other:?} at column {}", col + 1),
                    })
                }
            }
        }
        Ok(Self::from_bits(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let v: BinaryVector = "1011000".parse().unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.to_string(), "1011000");
        assert_eq!(v.ones_indices(), vec![0, 2, 3]);
    }

    #[test]
    fn dot_and_overlap() {
        let a: BinaryVector = "1110".parse().unwrap();
        let b: BinaryVector = "0111".parse().unwrap();
        assert_eq!(a.overlap(&b), 2);
        assert!(!a.dot(&b));
        assert!(a.dot(&a));
    }

    #[test]
    fn lexicographic_order_reads_from_position_zero() {
        let a: BinaryVector = "0011".parse().unwrap();
        let b: BinaryVector = "0100".parse().unwrap();
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert!(a < b);
    }

    #[test]
    fn wide_vectors_span_words() {
        let mut v = BinaryVector::zeros(200);
        v.set(0, true);
        v.set(63, true);
        v.set(64, true);
        v.set(199, true);
        assert_eq!(v.weight(), 4);
        assert_eq!(v.ones_indices(), vec![0, 63, 64, 199]);
        let s = v.slice(60, 10);
        assert_eq!(s.ones_indices(), vec![3, 4]);
        let ones = BinaryVector::ones(130);
        assert_eq!(ones.weight(), 130);
    }

    #[test]
    fn concat_and_delete() {
        let a: BinaryVector = "101".parse().unwrap();
        let b: BinaryVector = "0011".parse().unwrap();
        assert_eq!(a.concat(&b).to_string(), "1010011");
        assert_eq!(a.concat(&b).delete(2).to_string(), "100011");
    }

    #[test]
    fn rejects_bad_characters() {
        assert!("10x1".parse::<BinaryVector>().is_err());
    }
}
