//! Integral lattices given by Gram matrices, their discriminant forms, and
//! ℚ-divisors in the ambient rational space.
//!
//! Root lattices use the negative-definite convention (−2 on the diagonal)
//! so that they match fiber components, which are (−2)-curves. `U` and
//! `M_d = U ⊕ U ⊕ ⟨−2d⟩` keep their usual signs.

mod form;
mod qdiv;
pub mod snf;

pub use form::{discriminant_form, discriminant_group, has_element_of_order, FiniteQuadForm};
pub use qdiv::{theta_divisor, QDivisor};
pub use snf::{smith_normal_form, IntMatrix, Snf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use snf::{determinant, from_i64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (det = 0)")]
    DegenerateLattice,
    #[error("lattice is odd; the discriminant quadratic form needs an even lattice")]
    OddLattice,
    #[error("invalid lattice parameter: {0}")]
    InvalidParameter(String),
    #[error("ℚ-divisors live in different lattices")]
    LatticeMismatch,
    #[error("glue vectors do not generate an integral overlattice")]
    NotIntegral,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    A(u32),
    D(u32),
    E7,
    E8,
    U,
    Rank1(i64),
    /// `U ⊕ U ⊕ ⟨−2d⟩`
    Md(u32),
    /// The overlattice of `A₁⁸` spanned by `e₁, …, e₈, ½Σeᵢ`.
    Nikulin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl IntLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let labels = (0..gram.len()).map(|i| format!("e{}", i + 1)).collect();
        Self::with_labels(gram, labels)
    }

    pub fn with_labels(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if labels.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(IntLattice { gram, labels })
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn det(&self) -> BigInt {
        determinant(&from_i64(&self.gram))
    }

    pub fn gram_big(&self) -> IntMatrix {
        from_i64(&self.gram)
    }

    pub fn relabel(mut self, prefix: &str) -> Self {
        for l in &mut self.labels {
            *l = format!("{prefix}.{l}");
        }
        self
    }

    /// Gram multiplied by `k`.
    pub fn rescale(&self, k: i64) -> Result<IntLattice, LatticeError> {
        if k == 0 {
            return Err(LatticeError::InvalidParameter("rescale by 0".into()));
        }
        Ok(IntLattice {
            gram: self.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn direct_sum(parts: &[&IntLattice]) -> IntLattice {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut gram = vec![vec![0; n]; n];
        let mut labels = Vec::with_capacity(n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    gram[off + i][off + j] = p.gram[i][j];
                }
            }
            labels.extend(p.labels.iter().cloned());
            off += p.rank();
        }
        IntLattice { gram, labels }
    }

    /// Exact pairing of rational coordinate vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !yj.is_zero() {
                    s += xi * yj * BigRational::from_integer(BigInt::from(g));
                }
            }
        }
        s
    }

    /// The lattice spanned by this one and the rational `glue` vectors.
    ///
    /// Returns the new lattice together with its basis written in the old
    /// coordinates (one vector per new basis element).
    pub fn overlattice(
        &self,
        glue: &[Vec<BigRational>],
    ) -> Result<(IntLattice, Vec<Vec<BigRational>>), LatticeError> {
        let n = self.rank();
        for g in glue {
            if g.len() != n {
                return Err(LatticeError::Dimension { expected: n, got: g.len() });
            }
        }
        let den = glue
            .iter()
            .flatten()
            .fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        // generators as integer columns of den·(old coordinates)
        let mut cols: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { den.clone() } else { BigInt::zero() }).collect())
            .collect();
        for g in glue {
            cols.push(g.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect());
        }
        let m: IntMatrix = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let s = smith_normal_form(&m);
        // column space basis: U⁻¹ · diag(s)
        let uinv = snf::inverse_unimodular(&s.u);
        let diag = s.diagonal();
        let basis: Vec<Vec<BigRational>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|r| BigRational::new(&uinv[r][k] * &diag[k], den.clone()))
                    .collect()
            })
            .collect();
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = self.pair(&basis[i], &basis[j]);
                if !v.is_integer() {
                    return Err(LatticeError::NotIntegral);
                }
                gram[i][j] = v.to_integer().to_i64().ok_or(LatticeError::NotIntegral)?;
            }
        }
        let labels = (0..n).map(|i| format!("b{}", i + 1)).collect();
        Ok((IntLattice { gram, labels }, basis))
    }
}

pub fn standard_lattice(kind: LatticeKind) -> Result<IntLattice, LatticeError> {
    let bad = |s: &str| Err(LatticeError::InvalidParameter(s.to_string()));
    let lat = match kind {
        LatticeKind::A(n) => {
            if n < 1 {
                return bad("A(n) needs n ≥ 1");
            }
            let n = n as usize;
            let mut g = vec![vec![0; n]; n];
            for i in 0..n {
                g[i][i] = -2;
                if i + 1 < n {
                    g[i][i + 1] = 1;
                    g[i + 1][i] = 1;
                }
            }
            named(g, "A", n)
        }
        LatticeKind::D(n) => {
            if n < 4 {
                return bad("D(n) needs n ≥ 4");
            }
            // chain x1 … x_{n-1}, with x_n attached to x_{n-2}
            let n = n as usize;
            let mut g = chain(n - 1, n);
            g[n - 1][n - 1] = -2;
            g[n - 1][n - 3] = 1;
            g[n - 3][n - 1] = 1;
            named(g, "D", n)
        }
        LatticeKind::E7 => {
            // chain y1 … y6 with y7 attached to y3
            let mut g = chain(6, 7);
            g[6][6] = -2;
            g[6][2] = 1;
            g[2][6] = 1;
            named(g, "E7", 7)
        }
        LatticeKind::E8 => {
            // chain x1 … x7 with x8 attached to x5
            let mut g = chain(7, 8);
            g[7][7] = -2;
            g[7][4] = 1;
            g[4][7] = 1;
            named(g, "E8", 8)
        }
        LatticeKind::U => IntLattice::with_labels(
            vec![vec![0, 1], vec![1, 0]],
            vec!["U.e".into(), "U.f".into()],
        )?,
        LatticeKind::Rank1(k) => {
            if k == 0 {
                return bad("rank-1 lattice needs k ≠ 0");
            }
            IntLattice::with_labels(vec![vec![k]], vec![format!("<{k}>")])?
        }
        LatticeKind::Md(d) => {
            if d < 1 {
                return bad("M_d needs d ≥ 1");
            }
            let u = standard_lattice(LatticeKind::U)?;
            let r = standard_lattice(LatticeKind::Rank1(-2 * d as i64))?;
            IntLattice::direct_sum(&[&u, &u, &r])
        }
        LatticeKind::Nikulin => {
            // basis e1 … e7, h = ½(e1 + … + e8)
            let mut g = vec![vec![0; 8]; 8];
            for i in 0..7 {
                g[i][i] = -2;
                g[i][7] = -1;
                g[7][i] = -1;
            }
            g[7][7] = -4;
            let mut labels: Vec<String> = (1..=7).map(|i| format!("N.e{i}")).collect();
            labels.push("N.h".into());
            IntLattice::with_labels(g, labels)?
        }
    };
    Ok(lat)
}

fn chain(len: usize, size: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; size]; size];
    for i in 0..len {
        g[i][i] = -2;
        if i + 1 < len {
            g[i][i + 1] = 1;
            g[i + 1][i] = 1;
        }
    }
    g
}

fn named(g: Vec<Vec<i64>>, prefix: &str, n: usize) -> IntLattice {
    let name = if prefix.starts_with('E') { prefix.to_string() } else { format!("{prefix}{n}") };
    let labels = (1..=n).map(|i| format!("{name}.{i}")).collect();
    IntLattice { gram: g, labels }
}
