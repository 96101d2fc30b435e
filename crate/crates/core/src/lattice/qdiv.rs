//! ℚ-divisors: rational combinations of lattice basis vectors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{standard_lattice, IntLattice, LatticeError, LatticeKind};

#[derive(Debug, Clone)]
pub struct QDivisor {
    lattice: Arc<IntLattice>,
    coords: Vec<BigRational>,
}

impl QDivisor {
    pub fn new(lattice: Arc<IntLattice>, coords: Vec<BigRational>) -> Result<Self, LatticeError> {
        if coords.len() != lattice.rank() {
            return Err(LatticeError::Dimension { expected: lattice.rank(), got: coords.len() });
        }
        Ok(QDivisor { lattice, coords })
    }

    pub fn lattice(&self) -> &Arc<IntLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn same_lattice(&self, other: &QDivisor) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice.gram() == other.lattice.gram()
    }

    pub fn inner(&self, other: &QDivisor) -> Result<BigRational, LatticeError> {
        if !self.same_lattice(other) {
            return Err(LatticeError::LatticeMismatch);
        }
        Ok(self.lattice.pair(&self.coords, &other.coords))
    }

    pub fn norm(&self) -> BigRational {
        self.lattice.pair(&self.coords, &self.coords)
    }

    /// Least `m ≥ 1` with `m · coords` integral.
    pub fn order_mod_lattice(&self) -> u64 {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
            .to_u64()
            .expect("order fits in u64")
    }

    /// Whether every pairing with the basis is integral.
    pub fn in_dual(&self) -> bool {
        let n = self.coords.len();
        (0..n).all(|i| {
            let mut e = vec![BigRational::from_integer(0.into()); n];
            e[i] = BigRational::one();
            self.lattice.pair(&self.coords, &e).is_integer()
        })
    }

    pub fn in_lattice(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

/// `ϑ_{2m} = (1/2m) Σ k Θ_k` on the chain `Θ₁ … Θ_{2m−1}` of `A_{2m−1}`.
pub fn theta_divisor(m: u32) -> Result<QDivisor, LatticeError> {
    if m < 1 {
        return Err(LatticeError::InvalidParameter("ϑ needs m ≥ 1".into()));
    }
    let lat = Arc::new(standard_lattice(LatticeKind::A(2 * m - 1))?);
    let coords = (1..2 * m)
        .map(|k| BigRational::new(BigInt::from(k), BigInt::from(2 * m)))
        .collect();
    QDivisor::new(lat, coords)
}
