//! Arithmetic in GF(2^m) for 3 ≤ m ≤ 8 via exp/log tables.

/// Primitive polynomials used for every construction, bit `i` = coefficient of `x^i`.
///
/// | m | polynomial            |
/// |---|-----------------------|
/// | 3 | x³ + x + 1            |
/// | 4 | x⁴ + x + 1            |
/// | 5 | x⁵ + x² + 1           |
/// | 6 | x⁶ + x + 1            |
/// | 7 | x⁷ + x³ + 1           |
/// | 8 | x⁸ + x⁴ + x³ + x² + 1 |
pub const PRIMITIVE_POLYNOMIALS: [(u32, u32); 6] = [
    (3, 0b1011),
    (4, 0b1_0011),
    (5, 0b10_0101),
    (6, 0b100_0011),
    (7, 0b1000_1001),
    (8, 0b1_0001_1101),
];

pub fn primitive_polynomial(m: u32) -> Option<u32> {
    PRIMITIVE_POLYNOMIALS
        .iter()
        .find(|(deg, _)| *deg == m)
        .map(|&(_, p)| p)
}

#[derive(Clone, Debug)]
pub struct Gf2m {
    m: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf2m {
    pub fn new(m: u32) -> Option<Self> {
        let poly = primitive_polynomial(m)?;
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for (i, e) in exp.iter_mut().enumerate().take(order) {
            *e = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        assert_eq!(x, 1, "polynomial for m = {m} is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Some(Self { m, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Multiplicative order of the group, `2^m − 1`.
    pub fn order(&self) -> usize {
        (1usize << self.m) - 1
    }

    /// `α^e` for the primitive element α.
    pub fn alpha_pow(&self, e: usize) -> u16 {
        self.exp[e % self.order()]
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Cyclotomic coset of `i` modulo `2^m − 1`: `{i, 2i, 4i, …}`.
    pub fn cyclotomic_coset(&self, i: usize) -> Vec<usize> {
        let n = self.order();
        let mut coset = vec![i % n];
        let mut j = (2 * i) % n;
        while j != i % n {
            coset.push(j);
            j = (2 * j) % n;
        }
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2), bit `t` = coefficient of `x^t`.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<bool> {
        // Multiply out Π (x − α^j) over the coset; coefficients land in GF(2).
        let mut poly: Vec<u16> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(j);
            let mut next = vec![0u16; poly.len() + 1];
            for (t, &c) in poly.iter().enumerate() {
                next[t + 1] ^= c;
                next[t] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
                c == 1
            })
            .collect()
    }
}

/// Product of two GF(2) polynomials given as coefficient vectors.
pub fn poly_mul(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_tabulated_polynomials_are_primitive() {
        for m in 3..=8 {
            let f = Gf2m::new(m).unwrap();
            let mut seen = vec![false; f.order() + 1];
            for e in 0..f.order() {
                let x = f.alpha_pow(e) as usize;
                assert!(!seen[x]);
                seen[x] = true;
            }
        }
        assert!(Gf2m::new(9).is_none());
    }

    #[test]
    fn minimal_polynomial_of_alpha_is_the_primitive_polynomial() {
        let f = Gf2m::new(4).unwrap();
        let mp = f.minimal_polynomial(1);
        assert_eq!(mp, vec![true, true, false, false, true]);
        // α^3 in GF(16) has minimal polynomial x^4 + x^3 + x^2 + x + 1.
        assert_eq!(f.minimal_polynomial(3), vec![true; 5]);
        // α^5 has order 3: x^2 + x + 1.
        assert_eq!(f.minimal_polynomial(5), vec![true, true, true]);
    }

    #[test]
    fn cyclotomic_cosets_mod_31() {
        let f = Gf2m::new(5).unwrap();
        assert_eq!(f.cyclotomic_coset(1), vec![1, 2, 4, 8, 16]);
        assert_eq!(f.cyclotomic_coset(3), vec![3, 6, 12, 24, 17]);
    }
}
