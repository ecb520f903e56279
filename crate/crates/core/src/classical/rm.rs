use super::{ClassicalCode, ClassicalError, Distance, Family, DISTANCE_MAX_DIM};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Reed–Muller code RM(r, m) with the coordinate at the origin deleted.
///
/// Coordinates are the nonzero points `x = 1 … 2^m − 1` of GF(2)^m, with bit
/// `b` of the integer `x` giving coordinate `x_b`. Rows are the evaluations of
/// the monomials of degree at most `r`, lowest degree first.
pub fn punctured_reed_muller(r: u32, m: u32) -> Result<ClassicalCode, ClassicalError> {
    if m < 3 || r > m || m > 10 {
        return Err(ClassicalError::InvalidParameters(format!(
            "punctured RM({r}, {m}) needs 0 ≤ r ≤ m and 3 ≤ m ≤ 10"
        )));
    }
    let n = (1usize << m) - 1;
    let mut monomials: Vec<u32> = (0..1u32 << m).filter(|s| s.count_ones() <= r).collect();
    monomials.sort_by_key(|s| (s.count_ones(), *s));
    let rows = monomials
        .iter()
        .map(|&s| BinaryVector::from_bits((1..=n as u32).map(|x| x & s == s)))
        .collect();
    let full = BinaryMatrix::from_rows(n, rows);
    let mut code = ClassicalCode::from_generator(&full, Family::PuncturedRm { r, m });
    code.distance = Distance::design(if r == m { 1 } else { (1 << (m - r)) - 1 });
    Ok(code.with_exact_distance(DISTANCE_MAX_DIM))
}
