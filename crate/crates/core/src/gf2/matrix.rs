use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BinaryVector, Gf2Error};

/// Dense matrix over GF(2), stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<BinaryVector>,
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; the first `rank` rows are the nonzero ones.
    pub matrix: BinaryMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BinaryMatrix {
    /// Matrix with `cols` columns and no rows.
    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BinaryVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BinaryVector::unit(n, i)).collect(),
        }
    }

    /// Panics if the rows have differing lengths.
    pub fn from_rows(cols: usize, rows: Vec<BinaryVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self { cols, rows }
    }

    pub fn try_from_rows(rows: Vec<BinaryVector>) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, BinaryVector::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Gf2Error::Parse {
                    line: i + 1,
                    message: format!("row has {} columns, expected {cols}", r.len()),
                });
            }
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix from string rows such as `"1011"`. Panics on bad input.
    pub fn from_strs(rows: &[&str]) -> Self {
        let rows: Vec<BinaryVector> = rows.iter().map(|r| r.parse().unwrap()).collect();
        Self::try_from_rows(rows).unwrap()
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn col_count(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rows(&self) -> &[BinaryVector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BinaryVector {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BinaryVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BinaryVector) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BinaryVector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.row_count() == self.cols
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.weight() == 1 && r.get(i))
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BinaryVector::weight).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.row_count());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_indices() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.row_count(), "inner dimensions differ");
        let rows = self.rows.iter().map(|r| other.left_mul(r)).collect();
        Self {
            cols: other.cols,
            rows,
        }
    }

    /// `self · otherᵀ`, computed directly from row inner products.
    pub fn mul_transpose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let rows = self
            .rows
            .iter()
            .map(|a| BinaryVector::from_bits(other.rows.iter().map(|b| a.dot(b))))
            .map(|v| {
                if v.is_empty() {
                    BinaryVector::zeros(other.row_count())
                } else {
                    v
                }
            })
            .collect();
        Self {
            cols: other.row_count(),
            rows,
        }
    }

    /// Row-vector product `u · self` (the combination of rows selected by `u`).
    pub fn left_mul(&self, u: &BinaryVector) -> BinaryVector {
        assert_eq!(u.len(), self.row_count(), "coefficient length mismatch");
        let mut acc = BinaryVector::zeros(self.cols);
        for i in u.ones_indices() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Column-vector product `self · vᵀ` (the syndrome of `v`).
    pub fn syndrome(&self, v: &BinaryVector) -> BinaryVector {
        assert_eq!(v.len(), self.cols);
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(v)).collect();
        BinaryVector::from_bits(bits)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self {
            cols: self.cols,
            rows,
        }
    }

    pub fn delete_row(&self, index: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(index);
        Self {
            cols: self.cols,
            rows,
        }
    }

    pub fn delete_column(&self, index: usize) -> Self {
        Self {
            cols: self.cols - 1,
            rows: self.rows.iter().map(|r| r.delete(index)).collect(),
        }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == m.rows.len() {
                break;
            }
            let Some(p) = (rank..m.rows.len()).find(|&r| m.rows[r].get(col)) else {
                continue;
            };
            m.rows.swap(rank, p);
            let pivot = m.rows[rank].clone();
            for r in 0..m.rows.len() {
                if r != rank && m.rows[r].get(col) {
                    m.rows[r].xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_basis(&self) -> Self {
        let r = self.rref();
        Self {
            cols: self.cols,
            rows: r.matrix.rows.into_iter().take(r.rank).collect(),
        }
    }

    /// Basis of `{v : self · vᵀ = 0}`, one free column per basis vector.
    pub fn null_space(&self) -> Self {
        let r = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let mut rows = Vec::with_capacity(self.cols - r.rank);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BinaryVector::unit(self.cols, free);
            for (i, &p) in r.pivots.iter().enumerate() {
                if r.matrix.rows[i].get(free) {
                    v.set(p, true);
                }
            }
            rows.push(v);
        }
        Self {
            cols: self.cols,
            rows,
        }
    }

    /// True iff `self · selfᵀ = 0`.
    pub fn is_self_orthogonal(&self) -> bool {
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i..] {
                if a.dot(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Coefficients `c` with `c · self = target`, if `target` is in the row space.
    pub fn solve_left(&self, target: &BinaryVector) -> Option<BinaryVector> {
        assert_eq!(target.len(), self.cols);
        // Eliminate on the augmented rows [row | unit] to track combinations.
        let k = self.row_count();
        let mut aug: Vec<(BinaryVector, BinaryVector)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BinaryVector::unit(k, i)))
            .collect();
        let mut rest = target.clone();
        let mut coeffs = BinaryVector::zeros(k);
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..aug.len()).find(|&r| aug[r].0.get(col)) else {
                continue;
            };
            aug.swap(rank, p);
            let (pr, pc) = aug[rank].clone();
            for (r, entry) in aug.iter_mut().enumerate() {
                if r != rank && entry.0.get(col) {
                    entry.0.xor_assign(&pr);
                    entry.1.xor_assign(&pc);
                }
            }
            if rest.get(col) {
                rest.xor_assign(&pr);
                coeffs.xor_assign(&pc);
            }
            rank += 1;
        }
        rest.is_zero().then_some(coeffs)
    }

    pub fn row_space_contains(&self, v: &BinaryVector) -> bool {
        self.solve_left(v).is_some()
    }

    /// Inverse of a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.row_count();
        if n != self.cols {
            return None;
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<BinaryVector> = (0..n).map(|i| BinaryVector::unit(n, i)).collect();
        for col in 0..n {
            let p = (col..n).find(|&r| a[r].get(col))?;
            a.swap(col, p);
            inv.swap(col, p);
            let (pa, pi) = (a[col].clone(), inv[col].clone());
            for r in 0..n {
                if r != col && a[r].get(col) {
                    a[r].xor_assign(&pa);
                    inv[r].xor_assign(&pi);
                }
            }
        }
        Some(Self { cols: n, rows: inv })
    }

    /// Rows of `self` that are linearly independent of all earlier rows, in order.
    pub fn independent_rows(&self) -> Self {
        let mut basis: Vec<(usize, BinaryVector)> = Vec::new();
        let mut kept = Vec::new();
        for row in &self.rows {
            let mut r = row.clone();
            for (p, b) in &basis {
                if r.get(*p) {
                    r.xor_assign(b);
                }
            }
            if let Some(p) = r.first_one() {
                for (_, b) in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&r);
                    }
                }
                basis.push((p, r));
                kept.push(row.clone());
            }
        }
        Self {
            cols: self.cols,
            rows: kept,
        }
    }

    /// Parses the text format: one row of `0`/`1` characters per line,
    /// `#` comment lines and blank lines ignored.
    pub fn parse_text(text: &str) -> Result<Self, Gf2Error> {
        let mut rows = Vec::new();
        let mut cols = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: BinaryVector = line.parse().map_err(|e| match e {
                Gf2Error::Parse { message, .. } => Gf2Error::Parse {
                    line: lineno + 1,
                    message,
                },
                other => other,
            })?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Gf2Error::Parse {
                        line: lineno + 1,
                        message: format!("row has {} columns, expected {c}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Ok(Self {
            cols: cols.unwrap_or(0),
            rows,
        })
    }

    /// Inverse of [`BinaryMatrix::parse_text`]; no comments are emitted.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.row_count() * (self.cols + 1));
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.row_count(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
