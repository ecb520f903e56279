use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::gf2::BinaryVector;

/// `i^phase · X_{x_mask} · Z_{z_mask}` on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliProduct {
    pub x_mask: BinaryVector,
    pub z_mask: BinaryVector,
    /// Power of `i`, reduced mod 4.
    pub phase: u8,
}

impl PauliProduct {
    pub fn identity(n: usize) -> Self {
        Self::new(BinaryVector::zeros(n), BinaryVector::zeros(n))
    }

    pub fn new(x_mask: BinaryVector, z_mask: BinaryVector) -> Self {
        assert_eq!(x_mask.len(), z_mask.len(), "mask lengths differ");
        Self {
            x_mask,
            z_mask,
            phase: 0,
        }
    }

    pub fn x(mask: BinaryVector) -> Self {
        let n = mask.len();
        Self::new(mask, BinaryVector::zeros(n))
    }

    pub fn z(mask: BinaryVector) -> Self {
        let n = mask.len();
        Self::new(BinaryVector::zeros(n), mask)
    }

    pub fn len(&self) -> usize {
        self.x_mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_mask.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask.is_zero() && self.z_mask.is_zero() && self.phase == 0
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        (&self.x_mask ^ &self.z_mask).weight() + self.x_mask.overlap(&self.z_mask)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.x_mask.dot(&other.z_mask) == self.z_mask.dot(&other.x_mask)
    }
}

impl Mul for &PauliProduct {
    type Output = PauliProduct;

    fn mul(self, rhs: &PauliProduct) -> PauliProduct {
        // Z_a X_b = (−1)^{a·b} X_b Z_a.
        let swap = if self.z_mask.dot(&rhs.x_mask) { 2 } else { 0 };
        PauliProduct {
            x_mask: &self.x_mask ^ &rhs.x_mask,
            z_mask: &self.z_mask ^ &rhs.z_mask,
            phase: (self.phase + rhs.phase + swap) % 4,
        }
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.len() {
            let c = match (self.x_mask.get(q), self.z_mask.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                // X·Z ordering, i.e. −iY.
                (true, true) => 'W',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
