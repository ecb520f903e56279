use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BinaryMatrix, BinaryVector, Gf2Error};

/// Default cap on the dimension of spaces enumerated word by word.
pub const DEFAULT_MAX_DIM: usize = 28;

/// Below this dimension enumeration runs on a single thread.
const PARALLEL_THRESHOLD: usize = 18;

/// Visits every word of `start + span(basis)` in Gray-code order.
///
/// The callback receives the current word and the Gray-code index whose
/// set bits name the basis rows combined into it.
pub fn for_each_in_coset<F>(basis: &[BinaryVector], start: &BinaryVector, mut f: F)
where
    F: FnMut(&BinaryVector, u64),
{
    assert!(basis.len() < 64);
    let mut word = start.clone();
    f(&word, 0);
    let total: u64 = 1 << basis.len();
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        word.xor_assign(&basis[bit]);
        f(&word, i ^ (i >> 1));
    }
}

/// Runs `for_each_in_coset` over `2^split` disjoint slices in parallel and
/// folds the per-slice results with `merge`.
fn par_fold_coset<T, F, M>(basis: &[BinaryVector], start: &BinaryVector, init: T, f: F, merge: M) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, &BinaryVector, u64) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    let dim = basis.len();
    if dim < PARALLEL_THRESHOLD {
        let mut acc = init;
        for_each_in_coset(basis, start, |w, g| f(&mut acc, w, g));
        return acc;
    }
    let split = 6.min(dim);
    let (low, high) = basis.split_at(dim - split);
    (0..1u64 << split)
        .into_par_iter()
        .map(|hi| {
            let mut offset = start.clone();
            for (j, b) in high.iter().enumerate() {
                if (hi >> j) & 1 == 1 {
                    offset.xor_assign(b);
                }
            }
            let hi_bits = hi << low.len();
            let mut acc = init.clone();
            for_each_in_coset(low, &offset, |w, g| f(&mut acc, w, g | hi_bits));
            acc
        })
        .reduce(|| init.clone(), &merge)
}

fn guard(rank: usize, max_dim: usize) -> Result<(), Gf2Error> {
    if rank > max_dim {
        Err(Gf2Error::DimensionTooLarge {
            dimension: rank,
            max_dim,
        })
    } else {
        Ok(())
    }
}

/// Exact weight distribution of the row space of `m`.
pub fn weight_distribution(m: &BinaryMatrix, max_dim: usize) -> Result<BTreeMap<usize, u64>, Gf2Error> {
    let basis = m.row_basis();
    guard(basis.row_count(), max_dim)?;
    let n = m.col_count();
    let counts = par_fold_coset(
        basis.rows(),
        &BinaryVector::zeros(n),
        vec![0u64; n + 1],
        |acc, w, _| acc[w.weight()] += 1,
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}

/// Minimum weight over words of `span(subspace) + span(extension)` that lie
/// outside `span(subspace)`. Rows of `extension` must be independent modulo
/// the subspace. Returns `None` when `extension` is empty.
pub fn min_weight_outside(
    subspace: &BinaryMatrix,
    extension: &BinaryMatrix,
    max_dim: usize,
) -> Result<Option<usize>, Gf2Error> {
    if extension.row_count() == 0 {
        return Ok(None);
    }
    let sub = subspace.row_basis();
    let mut basis: Vec<BinaryVector> = extension.rows().to_vec();
    basis.extend(sub.rows().iter().cloned());
    guard(basis.len(), max_dim)?;
    let ext_mask: u64 = (1u64 << extension.row_count()) - 1;
    let best = par_fold_coset(
        &basis,
        &BinaryVector::zeros(subspace.col_count().max(extension.col_count())),
        usize::MAX,
        |acc, w, g| {
            if g & ext_mask != 0 {
                *acc = (*acc).min(w.weight());
            }
        },
        usize::min,
    );
    Ok(Some(best))
}

/// Minimum nonzero weight of the row space of `m`, or `None` for the zero space.
pub fn min_distance(m: &BinaryMatrix, max_dim: usize) -> Result<Option<usize>, Gf2Error> {
    let basis = m.row_basis();
    min_weight_outside(&BinaryMatrix::empty(m.col_count()), &basis, max_dim)
}

/// A coset representative and whether its minimality was proven by exhaustion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRepresentative {
    pub vector: BinaryVector,
    pub certified: bool,
}

/// Minimum-weight vector of `shift + rowspace(space)`.
///
/// When the coset has at most `budget` elements it is searched exhaustively
/// and ties are broken by [`BinaryVector::lex_cmp`]. Otherwise a greedy
/// descent from `shift` returns a local minimum with `certified = false`.
pub fn min_weight_coset_representative(
    space: &BinaryMatrix,
    shift: &BinaryVector,
    budget: u64,
) -> CosetRepresentative {
    assert_eq!(shift.len(), space.col_count(), "shift length mismatch");
    let basis = space.row_basis();
    let dim = basis.row_count();
    let exhaustive = dim < 63 && (1u64 << dim) <= budget;
    if exhaustive {
        let best = par_fold_coset(
            basis.rows(),
            shift,
            None::<BinaryVector>,
            |acc, w, _| {
                let better = match acc {
                    None => true,
                    Some(b) => {
                        let (ww, bw) = (w.weight(), b.weight());
                        ww < bw || (ww == bw && w.lex_cmp(b).is_lt())
                    }
                };
                if better {
                    *acc = Some(w.clone());
                }
            },
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => {
                    let (aw, bw) = (a.weight(), b.weight());
                    if aw < bw || (aw == bw && a.lex_cmp(&b).is_le()) {
                        Some(a)
                    } else {
                        Some(b)
                    }
                }
            },
        );
        return CosetRepresentative {
            vector: best.expect("coset is never empty"),
            certified: true,
        };
    }
    let mut current = shift.clone();
    loop {
        let mut improved = false;
        for b in basis.rows() {
            let cand = &current ^ b;
            if cand.weight() < current.weight() {
                current = cand;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    CosetRepresentative {
        vector: current,
        certified: false,
    }
}
