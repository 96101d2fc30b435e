//! Finite quadratic forms: discriminant groups `L*/L` with `q: L*/L → ℚ/2ℤ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::snf::{inverse_unimodular, mat_mul, mat_vec_rat, smith_normal_form, IntMatrix};
use super::{IntLattice, LatticeError};

/// A finite abelian group `⊕ ℤ/dᵢ` (with `d₁ | d₂ | …`, every `dᵢ > 1`) and a
/// quadratic form on it.
///
/// Values are stored as integer numerators over a shared denominator `den`:
/// `q(gᵢ) = q[i]/den mod 2`, `b(gᵢ, gⱼ) = b[i][j]/den mod 1`.
#[derive(Debug, Clone)]
pub struct FiniteQuadForm {
    factors: Vec<u64>,
    den: u64,
    q: Vec<u64>,
    b: Vec<Vec<u64>>,
    lifts: Vec<Vec<BigRational>>,
    /// `U·G` and the rows belonging to nontrivial factors; maps dual vectors
    /// to group coordinates.
    coord_map: Option<(IntMatrix, Vec<usize>)>,
}

pub type Element = Vec<u64>;

/// `L*/L` as a list of invariant factors (greater than 1).
pub fn discriminant_group(l: &IntLattice) -> Result<Vec<u64>, LatticeError> {
    let det = l.det();
    if det.is_zero() {
        return Err(LatticeError::DegenerateLattice);
    }
    smith_normal_form(&l.gram_big())
        .invariant_factors()
        .iter()
        .map(to_u64)
        .collect()
}

pub fn discriminant_form(l: &IntLattice) -> Result<FiniteQuadForm, LatticeError> {
    if l.det().is_zero() {
        return Err(LatticeError::DegenerateLattice);
    }
    if !l.is_even() {
        return Err(LatticeError::OddLattice);
    }
    let g = l.gram_big();
    let snf = smith_normal_form(&g);
    let diag = snf.diagonal();
    let idx: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] != BigInt::from(1)).collect();
    let factors: Vec<u64> = idx.iter().map(|&i| to_u64(&diag[i])).collect::<Result<_, _>>()?;
    let den = factors.last().copied().unwrap_or(1);
    let n = l.rank();
    let lifts: Vec<Vec<BigRational>> = idx
        .iter()
        .map(|&i| (0..n).map(|r| BigRational::new(snf.v[r][i].clone(), diag[i].clone())).collect())
        .collect();
    let big_den = BigRational::from_integer(BigInt::from(den));
    let k = lifts.len();
    let mut q = vec![0u64; k];
    let mut b = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let v = l.pair(&lifts[i], &lifts[j]) * &big_den;
            debug_assert!(v.is_integer());
            let v = v.to_integer();
            if i == j {
                q[i] = to_u64(&v.mod_floor(&BigInt::from(2 * den)))?;
            }
            b[i][j] = to_u64(&v.mod_floor(&BigInt::from(den)))?;
        }
    }
    let ug = mat_mul(&snf.u, &g);
    Ok(FiniteQuadForm { factors, den, q, b, lifts, coord_map: Some((ug, idx)) })
}

/// True iff the group `⊕ ℤ/dᵢ` contains an element of order `q`.
pub fn has_element_of_order(factors: &[u64], q: u64) -> bool {
    q == 1 || factors.iter().any(|d| d % q == 0)
}

fn to_u64(x: &BigInt) -> Result<u64, LatticeError> {
    x.to_u64()
        .ok_or_else(|| LatticeError::InvalidParameter(format!("group too large: {x}")))
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

impl FiniteQuadForm {
    /// Builds an abstract form from rational generator values
    /// (`q` in `ℚ/2ℤ`, `b` in `ℚ/ℤ`); the values are not checked for
    /// consistency with the group orders.
    pub fn from_values(
        factors: Vec<u64>,
        q: &[BigRational],
        b: &[Vec<BigRational>],
    ) -> Result<Self, LatticeError> {
        let k = factors.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(LatticeError::Dimension { expected: k, got: q.len() });
        }
        if factors.iter().any(|&d| d < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(LatticeError::InvalidParameter(format!("invariant factors {factors:?}")));
        }
        let den = q
            .iter()
            .chain(b.iter().flatten())
            .map(|x| x.denom().to_u64().unwrap_or(0))
            .try_fold(1u64, |acc, d| if d == 0 { None } else { Some(lcm_u64(acc, d)) })
            .ok_or_else(|| LatticeError::InvalidParameter("denominator too large".into()))?;
        let num = |x: &BigRational, m: u64| -> u64 {
            let v = (x * BigRational::from_integer(BigInt::from(den))).to_integer();
            v.mod_floor(&BigInt::from(m)).to_u64().unwrap()
        };
        Ok(FiniteQuadForm {
            q: q.iter().map(|x| num(x, 2 * den)).collect(),
            b: b.iter().map(|r| r.iter().map(|x| num(x, den)).collect()).collect(),
            factors,
            den,
            lifts: Vec::new(),
            coord_map: None,
        })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Generator lifts in the lattice basis (empty for abstract forms).
    pub fn generator_lifts(&self) -> &[Vec<BigRational>] {
        &self.lifts
    }

    pub fn q_generators(&self) -> Vec<BigRational> {
        self.q.iter().map(|&n| BigRational::new(n.into(), self.den.into())).collect()
    }

    pub fn has_element_of_order(&self, q: u64) -> bool {
        has_element_of_order(&self.factors, q)
    }

    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![Vec::with_capacity(self.factors.len())];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |c| {
                        let mut e = e.clone();
                        e.push(c);
                        e
                    })
                })
                .collect();
        }
        out
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter().zip(y).zip(&self.factors).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.factors)
            .fold(1, |acc, (&c, &d)| lcm_u64(acc, d / c.gcd(&d)))
    }

    /// Numerator of `q(x)` over `den`, reduced mod `2·den`.
    fn q_num(&self, x: &[u64]) -> u64 {
        let m = 2 * self.den as u128;
        let mut s: u128 = 0;
        for i in 0..x.len() {
            let ci = x[i] as u128;
            if ci == 0 {
                continue;
            }
            s = (s + ci * ci % m * self.q[i] as u128) % m;
            for j in i + 1..x.len() {
                let cj = x[j] as u128;
                s = (s + 2 * (ci * cj % m) * self.b[i][j] as u128) % m;
            }
        }
        s as u64
    }

    fn b_num(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.den as u128;
        let mut s: u128 = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                s = (s + (xi as u128 * yj as u128 % m) * self.b[i][j] as u128) % m;
            }
        }
        s as u64
    }

    /// `q(x)` as a reduced rational in `[0, 2)`.
    pub fn q_value(&self, x: &[u64]) -> BigRational {
        BigRational::new(self.q_num(x).into(), self.den.into())
    }

    /// `b(x, y)` as a reduced rational in `[0, 1)`.
    pub fn b_value(&self, x: &[u64], y: &[u64]) -> BigRational {
        BigRational::new(self.b_num(x, y).into(), self.den.into())
    }

    /// Group coordinates of a dual vector given in the lattice basis.
    /// `None` for abstract forms or vectors outside `L*`.
    pub fn coordinates_of(&self, x: &[BigRational]) -> Option<Element> {
        let (map, idx) = self.coord_map.as_ref()?;
        let y = mat_vec_rat(map, x);
        if y.iter().any(|v| !v.is_integer()) {
            return None;
        }
        idx.iter()
            .map(|&i| &y[i])
            .zip(&self.factors)
            .map(|(v, &d)| {
                v.is_integer()
                    .then(|| v.to_integer().mod_floor(&BigInt::from(d)).to_u64().unwrap())
            })
            .collect()
    }

    /// The same form with numerators scaled to denominator `den`.
    fn with_den(&self, den: u64) -> FiniteQuadForm {
        debug_assert_eq!(den % self.den, 0);
        let k = den / self.den;
        FiniteQuadForm {
            factors: self.factors.clone(),
            den,
            q: self.q.iter().map(|x| x * k).collect(),
            b: self.b.iter().map(|r| r.iter().map(|x| x * k).collect()).collect(),
            lifts: self.lifts.clone(),
            coord_map: None,
        }
    }

    /// Multiset of `(element order, q)` over all elements; a cheap isomorphism invariant.
    fn profile(&self) -> HashMap<(u64, u64), usize> {
        let mut m = HashMap::new();
        for e in self.elements() {
            *m.entry((self.element_order(&e), self.q_num(&e))).or_insert(0) += 1;
        }
        m
    }

    /// Isomorphism of finite quadratic forms, by backtracking over generator images.
    pub fn is_isomorphic(&self, other: &FiniteQuadForm) -> bool {
        if self.factors != other.factors {
            return false;
        }
        let den = lcm_u64(self.den, other.den);
        let a = self.with_den(den);
        let b = other.with_den(den);
        if a.profile() != b.profile() {
            return false;
        }
        let gens: Vec<Element> = (0..a.factors.len()).map(|i| unit(a.factors.len(), i)).collect();
        let mut by_key: HashMap<(u64, u64), Vec<Element>> = HashMap::new();
        for e in b.elements() {
            by_key.entry((b.element_order(&e), b.q_num(&e))).or_default().push(e);
        }
        let candidates: Vec<&[Element]> = gens
            .iter()
            .map(|g| {
                by_key
                    .get(&(a.element_order(g), a.q_num(g)))
                    .map_or(&[][..], |v| v.as_slice())
            })
            .collect();
        let mut chosen: Vec<&Element> = Vec::new();
        search(&a, &b, &candidates, &mut chosen)
    }

    /// Forms on `h^⊥/⟨h⟩` for every isotropic element `h` of order 2,
    /// deduplicated up to isomorphism.
    pub fn isotropic_reductions(&self) -> Vec<FiniteQuadForm> {
        let hs: Vec<Element> = self
            .elements()
            .into_iter()
            .filter(|h| self.element_order(h) == 2 && self.q_num(h) == 0)
            .collect();
        let forms: Vec<FiniteQuadForm> = hs.par_iter().map(|h| self.reduce_by(h)).collect();
        let mut out: Vec<FiniteQuadForm> = Vec::new();
        for f in forms {
            if !out.iter().any(|g| g.is_isomorphic(&f)) {
                out.push(f);
            }
        }
        out
    }

    /// The form on `h^⊥/⟨h⟩` for an isotropic `h` of order 2.
    pub fn reduce_by(&self, h: &[u64]) -> FiniteQuadForm {
        let n = self.factors.len();
        let eps: Vec<bool> = (0..n).map(|i| self.b_num(&unit(n, i), h) != 0).collect();
        // preimage of h^⊥ in ℤⁿ, columns in G-coordinates
        let mut p: IntMatrix = vec![vec![BigInt::zero(); n]; n];
        let j0 = eps.iter().position(|&e| e);
        for i in 0..n {
            p[i][i] = BigInt::from(1);
        }
        if let Some(j) = j0 {
            for i in 0..n {
                if eps[i] && i != j {
                    p[j][i] = BigInt::from(1);
                }
            }
            p[j][j] = BigInt::from(2);
        }
        let mut rel: IntMatrix = vec![vec![BigInt::zero(); n + 1]; n];
        for i in 0..n {
            rel[i][i] = BigInt::from(self.factors[i]);
            rel[i][n] = BigInt::from(h[i]);
        }
        let pinv = super::snf::inverse_rational(&p).expect("preimage basis is invertible");
        let c: IntMatrix = pinv
            .iter()
            .map(|row| {
                (0..=n)
                    .map(|col| {
                        let v = row
                            .iter()
                            .enumerate()
                            .fold(BigRational::zero(), |acc, (k, x)| {
                                acc + x * BigRational::from_integer(rel[k][col].clone())
                            });
                        assert!(v.is_integer(), "relations lie in the preimage lattice");
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let snf = smith_normal_form(&c);
        let diag = snf.diagonal();
        let pu = mat_mul(&p, &inverse_unimodular(&snf.u));
        let mut factors = Vec::new();
        let mut gens: Vec<Element> = Vec::new();
        for (k, s) in diag.iter().enumerate() {
            if *s == BigInt::from(1) {
                continue;
            }
            factors.push(s.to_u64().expect("subquotient factor fits"));
            gens.push(
                (0..n)
                    .map(|r| pu[r][k].mod_floor(&BigInt::from(self.factors[r])).to_u64().unwrap())
                    .collect(),
            );
        }
        let k = gens.len();
        let q = gens.iter().map(|g| self.q_num(g)).collect();
        let b = (0..k)
            .map(|i| (0..k).map(|j| self.b_num(&gens[i], &gens[j])).collect())
            .collect();
        let lifts = if self.lifts.is_empty() {
            Vec::new()
        } else {
            gens.iter().map(|g| self.lift(g)).collect()
        };
        FiniteQuadForm { factors, den: self.den, q, b, lifts, coord_map: None }
    }

    fn lift(&self, x: &[u64]) -> Vec<BigRational> {
        let dim = self.lifts.first().map_or(0, Vec::len);
        let mut v = vec![BigRational::zero(); dim];
        for (c, l) in x.iter().zip(&self.lifts) {
            for (vi, li) in v.iter_mut().zip(l) {
                *vi += li * BigRational::from_integer(BigInt::from(*c));
            }
        }
        v
    }
}

fn unit(n: usize, i: usize) -> Element {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn search<'a>(
    a: &FiniteQuadForm,
    b: &FiniteQuadForm,
    candidates: &[&'a [Element]],
    chosen: &mut Vec<&'a Element>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return images_generate(b, chosen);
    }
    let n = a.factors.len();
    let gi = unit(n, i);
    for y in candidates[i] {
        if (0..i).all(|j| a.b_num(&gi, &unit(n, j)) == b.b_num(y, chosen[j])) {
            chosen.push(y);
            if search(a, b, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// The homomorphism is an isomorphism iff its image has full size.
fn images_generate(b: &FiniteQuadForm, imgs: &[&Element]) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![vec![0u64; b.factors.len()]];
    seen.insert(frontier[0].clone());
    while let Some(x) = frontier.pop() {
        for y in imgs {
            let z = b.add(&x, y);
            if seen.insert(z.clone()) {
                frontier.push(z);
            }
        }
    }
    seen.len() as u64 == b.order()
}

impl PartialEq for FiniteQuadForm {
    fn eq(&self, other: &Self) -> bool {
        self.is_isomorphic(other)
    }
}

impl Serialize for FiniteQuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FiniteQuadForm", 2)?;
        st.serialize_field("group", &self.factors)?;
        let q: Vec<String> = self.q_generators().iter().map(|x| x.to_string()).collect();
        st.serialize_field("q", &q)?;
        st.end()
    }
}

impl std::fmt::Display for FiniteQuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
