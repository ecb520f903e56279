use std::collections::BTreeSet;

use super::{ClassicalCode, ClassicalError, Distance, Family, DISTANCE_MAX_DIM};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Known minimum distances of the self-dual extended QR codes beyond the
/// enumeration limit, keyed by length.
const TABULATED_DISTANCE: [(usize, usize); 7] =
    [(8, 4), (24, 8), (32, 8), (48, 12), (72, 12), (80, 16), (104, 20)];

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Self-dual extended quadratic-residue code of length `p + 1`.
///
/// Only primes `p ≡ −1 (mod 8)` give a self-dual extension; `p ≡ 1 (mod 8)`
/// is rejected.
pub fn extended_qr_code(p: usize) -> Result<ClassicalCode, ClassicalError> {
    if !is_prime(p) || p % 8 != 7 || p + 1 > 104 {
        return Err(ClassicalError::InvalidParameters(format!(
            "extended QR code needs a prime p ≡ 7 mod 8 with p + 1 ≤ 104, got {p}"
        )));
    }
    let residues: BTreeSet<usize> = (1..p).map(|x| x * x % p).collect();
    let non_residues: BTreeSet<usize> = (1..p).filter(|x| !residues.contains(x)).collect();
    let k = (p + 1) / 2;

    let candidates = [
        (false, &non_residues),
        (false, &residues),
        (true, &non_residues),
        (true, &residues),
    ];
    let cyclic = candidates
        .iter()
        .map(|&(with_one, set)| {
            let mut e = BinaryVector::from_indices(p, &set.iter().copied().collect::<Vec<_>>());
            if with_one {
                e.flip(0);
            }
            circulant(&e)
        })
        .find(|m| m.rank() == k)
        .expect("one QR idempotent generates a code of dimension (p+1)/2");

    let rows = cyclic
        .independent_rows()
        .into_rows()
        .into_iter()
        .map(|r| {
            let parity = r.weight() % 2 == 1;
            r.concat(&BinaryVector::from_bits([parity]))
        })
        .collect();
    let generator = BinaryMatrix::from_rows(p + 1, rows);
    assert!(generator.is_self_orthogonal(), "extended QR code not self-dual");

    let d = TABULATED_DISTANCE
        .iter()
        .find(|(n, _)| *n == p + 1)
        .map(|&(_, d)| d)
        .expect("tabulated length");
    let check = generator.clone();
    let mut code = ClassicalCode {
        n: p + 1,
        k,
        distance: Distance::design(d),
        generator,
        check,
        check_expanded: None,
        family: Family::ExtendedQr { p },
        mean_check_weight: d as f64,
    };
    if k <= DISTANCE_MAX_DIM {
        code = code.with_exact_distance(DISTANCE_MAX_DIM);
        code.mean_check_weight = code.distance.value as f64;
    }
    Ok(code)
}

fn circulant(first: &BinaryVector) -> BinaryMatrix {
    let p = first.len();
    let rows = (0..p)
        .map(|s| BinaryVector::from_bits((0..p).map(|j| first.get((j + p - s) % p))))
        .collect();
    BinaryMatrix::from_rows(p, rows)
}
