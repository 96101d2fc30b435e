//! Exact univariate polynomials over ℚ.
//!
//! Coefficients are [`BigRational`]s stored in ascending degree order with no
//! trailing zeros, so the zero polynomial is the empty vector. Everything the
//! surface pipeline needs is here: Euclidean gcd, Yun's square-free
//! decomposition, square detection, and the per-place valuation machinery in
//! [`places`].

mod places;

pub use places::{coprime_refine, infinity_valuations, Place, PlaceCluster, Valuation};
pub(crate) use places::check_bound;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("degree bound violated: deg {name} = {degree} > {bound}")]
    DegreeBoundViolated {
        name: &'static str,
        degree: usize,
        bound: usize,
    },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Build a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"`; the result is always normalized.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let err = || PolyError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

/// Square root of a rational if it is a rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Dense univariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `t - r`
    pub fn linear_root(r: Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divide by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dd = d.degree().ok_or(PolyError::ZeroPolynomial)?;
        let lc_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lc_inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &UniPoly) -> bool {
        f.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Largest `k` with `h^k | self`; `None` when `self` is zero.
    /// `h` must be non-constant.
    pub fn multiplicity_of(&self, h: &UniPoly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        debug_assert!(!h.is_constant());
        let mut f = self.clone();
        let mut k = 0;
        while let Some(q) = f.exact_div(h) {
            f = q;
            k += 1;
        }
        Some(k)
    }

    /// Square-free part `f / gcd(f, f')`, made monic.
    pub fn squarefree_part(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let g = poly_gcd(self, &self.derivative());
        Ok(self.exact_div(&g).expect("gcd divides").monic())
    }

    /// `t^n f(1/t)` for `n ≥ deg f`.
    pub fn reversed(&self, n: usize) -> UniPoly {
        assert!(self.degree().is_none_or(|d| d <= n));
        let mut c = vec![Rational::zero(); n + 1];
        for (k, x) in self.coeffs.iter().enumerate() {
            c[n - k] = x.clone();
        }
        UniPoly::new(c)
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn ord_at_zero(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }
}

/// Monic gcd; zero iff both inputs are zero.
pub fn poly_gcd(f: &UniPoly, g: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).expect("b nonzero");
        a = b;
        b = r.monic();
    }
    a.monic()
}

/// Yun's algorithm. Returns monic, square-free, pairwise coprime factors
/// with strictly increasing multiplicities; `f = lc(f) · ∏ gᵢ^mᵢ`.
pub fn squarefree_decompose(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = poly_gcd(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides f");
    let mut c = df.exact_div(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d);
        b = b.exact_div(&a).expect("gcd divides b");
        c = d.exact_div(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Square root in ℚ[t], if one exists.
pub fn is_square_rational(f: &UniPoly) -> Option<UniPoly> {
    let Some(deg) = f.degree() else {
        return Some(UniPoly::zero());
    };
    if deg % 2 == 1 {
        return None;
    }
    let lc_root = rational_sqrt(f.leading_coeff()?)?;
    let root = monic_sqrt_candidate(&f.monic())?.scale(&lc_root);
    (&root * &root == *f).then_some(root)
}

/// Over ℂ[t]: every root multiplicity even (a nonzero constant is a square).
pub fn is_square_geometric(f: &UniPoly) -> Result<bool, PolyError> {
    Ok(squarefree_decompose(f)?.iter().all(|(_, m)| m % 2 == 0))
}

/// Candidate monic square root of a monic polynomial of even degree, fixed by
/// matching the top half of the coefficients. The caller verifies it.
fn monic_sqrt_candidate(f: &UniPoly) -> Option<UniPoly> {
    let deg = f.degree()?;
    if deg % 2 == 1 {
        return None;
    }
    let n = deg / 2;
    let mut g = vec![Rational::zero(); n + 1];
    g[n] = Rational::one();
    let two = rat_int(2);
    for j in 1..=n {
        // coefficient of t^(2n-j) in g² is 2·g[n-j] + Σ_{0<i<j} g[n-i]·g[n-j+i]
        let mut s = Rational::zero();
        for i in 1..j {
            s += &g[n - i] * &g[n - j + i];
        }
        g[n - j] = (f.coeff(2 * n - j) - s) / &two;
    }
    Some(UniPoly::new(g))
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(c)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// JSON form: ascending coefficients as `"num/den"` strings.
impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(UniPoly::new(coeffs))
    }
}
