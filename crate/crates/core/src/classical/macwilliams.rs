use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// Krawtchouk polynomial `K_j(i) = Σ_s (−1)^s C(i, s) C(n − i, j − s)`.
fn krawtchouk(binom: &[Vec<BigInt>], n: usize, j: usize, i: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for s in 0..=j.min(i) {
        if j - s > n - i {
            continue;
        }
        let term = &binom[i][s] * &binom[n - i][j - s];
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Weight distribution of a code from that of its dual (MacWilliams identity).
/// Entry `j` of the result is the number of codewords of weight `j`.
pub fn dual_weight_enumerator(n: usize, dual: &BTreeMap<usize, u64>) -> Vec<BigInt> {
    let binom = binomials(n);
    let size: BigInt = dual.values().map(|&c| BigInt::from(c)).sum();
    (0..=n)
        .map(|j| weight_count(&binom, n, j, dual, &size))
        .collect()
}

fn weight_count(
    binom: &[Vec<BigInt>],
    n: usize,
    j: usize,
    dual: &BTreeMap<usize, u64>,
    size: &BigInt,
) -> BigInt {
    let mut acc = BigInt::zero();
    for (&i, &b) in dual {
        acc += BigInt::from(b) * krawtchouk(binom, n, j, i);
    }
    debug_assert!((&acc % size).is_zero(), "MacWilliams sum not divisible");
    acc / size
}

pub(crate) fn min_distance_from_dual(n: usize, dual: &BTreeMap<usize, u64>) -> Option<usize> {
    let binom = binomials(n);
    let size: BigInt = dual.values().map(|&c| BigInt::from(c)).sum();
    (1..=n).find(|&j| weight_count(&binom, n, j, dual, &size).is_positive())
}
