//! Torsion sections detected from the coefficients: the 2-torsion rank and
//! whether σ is divisible by 2.

use num_traits::Zero;

use super::TwoTorsionSurface;
use crate::poly::{is_square_geometric, rat_int, rational_sqrt, squarefree_decompose, Rational, UniPoly};

/// 2 iff `c = a² − 4b` is a square in ℂ[t] (all three 2-torsion points defined).
pub fn two_torsion_rank(s: &TwoTorsionSurface) -> u32 {
    if is_square_geometric(&s.c()).expect("c ≠ 0 on a valid surface") {
        2
    } else {
        1
    }
}

/// Is there a section `Q` with `2Q = σ`?
///
/// The tangent line at `Q = (x₁, y₁)` passes through `(0,0)` exactly when
/// `x₁² = b` and `a + 2x₁` is a square, so the test is: `b = s₀²` in ℂ[t] and
/// `a ± 2s₀` a square in ℂ[t]. When `b = ℓ·h²` with `ℓ` not a rational
/// square, `s₀ = √ℓ·h` lives over `ℚ(√ℓ)` and the square test runs there.
pub fn has_order_four_over_sigma(s: &TwoTorsionSurface) -> bool {
    let b = s.b();
    let Ok(parts) = squarefree_decompose(b) else { return false };
    if parts.iter().any(|(_, m)| m % 2 == 1) {
        return false;
    }
    let mut h = UniPoly::one();
    for (f, m) in &parts {
        h = &h * &f.pow(m / 2);
    }
    let lc = b.leading_coeff().expect("b ≠ 0").clone() / h.leading_coeff().unwrap().pow(2);
    let (r, s0) = match rational_sqrt(&lc) {
        Some(root) => (Rational::zero(), QPoly::rational(&h.scale(&root))),
        None => (lc.clone(), QPoly::irrational(&h)),
    };
    let a = QPoly::rational(s.a());
    [1, -1].into_iter().any(|sign| {
        let f = a.add(&s0.scale(&QElem::int(2 * sign)), &r);
        f.is_geometric_square(&r)
    })
}

/// `2^rank`, doubled when σ is divisible by 2.
pub fn torsion_summary(s: &TwoTorsionSurface) -> super::TorsionSummary {
    let rank = two_torsion_rank(s);
    let four = has_order_four_over_sigma(s);
    super::TorsionSummary::new(rank, four)
}

/// `x + y√r` with `r` fixed by the caller.
#[derive(Debug, Clone, PartialEq)]
struct QElem {
    x: Rational,
    y: Rational,
}

impl QElem {
    fn zero() -> Self {
        QElem { x: Rational::zero(), y: Rational::zero() }
    }

    fn int(n: i64) -> Self {
        QElem { x: rat_int(n), y: Rational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn add(&self, o: &QElem) -> QElem {
        QElem { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    fn sub(&self, o: &QElem) -> QElem {
        QElem { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    fn mul(&self, o: &QElem, r: &Rational) -> QElem {
        QElem {
            x: &self.x * &o.x + &self.y * &o.y * r,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }

    /// Inverse; `r` is not a rational square so the norm is nonzero.
    fn inv(&self, r: &Rational) -> QElem {
        let norm = &self.x * &self.x - &self.y * &self.y * r;
        QElem { x: &self.x / &norm, y: -(&self.y / &norm) }
    }

    fn half(&self) -> QElem {
        let two = rat_int(2);
        QElem { x: &self.x / &two, y: &self.y / &two }
    }
}

/// Polynomials over `ℚ(√r)`, ascending coefficients, trimmed.
#[derive(Debug, Clone, PartialEq)]
struct QPoly(Vec<QElem>);

impl QPoly {
    fn trimmed(mut v: Vec<QElem>) -> QPoly {
        while v.last().is_some_and(QElem::is_zero) {
            v.pop();
        }
        QPoly(v)
    }

    fn rational(p: &UniPoly) -> QPoly {
        QPoly::trimmed(p.coeffs().iter().map(|c| QElem { x: c.clone(), y: Rational::zero() }).collect())
    }

    /// `√r · p`
    fn irrational(p: &UniPoly) -> QPoly {
        QPoly::trimmed(p.coeffs().iter().map(|c| QElem { x: Rational::zero(), y: c.clone() }).collect())
    }

    fn scale(&self, k: &QElem) -> QPoly {
        // only used with rational k
        debug_assert!(k.y.is_zero());
        QPoly::trimmed(self.0.iter().map(|c| QElem { x: &c.x * &k.x, y: &c.y * &k.x }).collect())
    }

    fn add(&self, o: &QPoly, _r: &Rational) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = QElem::zero();
        QPoly::trimmed(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z).add(o.0.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    fn mul(&self, o: &QPoly, r: &Rational) -> QPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return QPoly(Vec::new());
        }
        let mut out = vec![QElem::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, r));
            }
        }
        QPoly::trimmed(out)
    }

    /// A monic square root, if any, is unique and Galois-stable, so it has
    /// coefficients in the same field; solve for it from the top down and
    /// verify.
    fn is_geometric_square(&self, r: &Rational) -> bool {
        let Some(lc) = self.0.last() else { return true };
        let deg = self.0.len() - 1;
        if deg % 2 == 1 {
            return false;
        }
        let inv = lc.inv(r);
        let f: Vec<QElem> = self.0.iter().map(|c| c.mul(&inv, r)).collect();
        let n = deg / 2;
        let mut g = vec![QElem::zero(); n + 1];
        g[n] = QElem::int(1);
        for j in 1..=n {
            let mut s = QElem::zero();
            for i in 1..j {
                s = s.add(&g[n - i].mul(&g[n - j + i], r));
            }
            g[n - j] = f[2 * n - j].sub(&s).half();
        }
        let g = QPoly(g);
        g.mul(&g, r) == QPoly(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{find_rational_points, group_law, quotient_surface, specialize, AffinePoint};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn rank_examples() {
        // a = 0, b = −t²: c = 4t²
        let s = TwoTorsionSurface::from_model(p(&[0]), p(&[0, 0, -1])).unwrap();
        assert_eq!(two_torsion_rank(&s), 2);
        let pp = p(&[1, 1, 0, 1]);
        for d in 1..=8usize {
            let mut b = vec![0; d + 1];
            b[d] = 1;
            let x = TwoTorsionSurface::new(pp.clone(), p(&b)).unwrap();
            assert_eq!(two_torsion_rank(&x), 1, "X_{d}");
            let y = quotient_surface(&x).unwrap();
            assert_eq!(two_torsion_rank(&y), if d % 2 == 0 { 2 } else { 1 }, "Y_{d}");
            assert!(!has_order_four_over_sigma(&y), "Y_{d}");
        }
    }

    #[test]
    fn order_four_rational_case() {
        // a = 5t², b = 4t⁴: s₀ = 2t², a − 2s₀ = t²
        let s = TwoTorsionSurface::from_model(p(&[0, 0, 5]), p(&[0, 0, 0, 0, 4])).unwrap();
        assert!(has_order_four_over_sigma(&s));
        // exhibit Q with 2Q = σ on the fiber over t = 1
        let c = specialize(&s, &rat_int(1)).unwrap();
        let halves: Vec<_> = find_rational_points(&c, 10, 100)
            .into_iter()
            .filter(|q| group_law(&c, q, q).unwrap() == AffinePoint::ints(0, 0))
            .collect();
        assert!(!halves.is_empty());
    }

    #[test]
    fn order_four_needs_square_b() {
        let s = TwoTorsionSurface::from_model(p(&[0, 0, 5]), p(&[0, 0, 0, 4])).unwrap();
        assert!(!has_order_four_over_sigma(&s));
    }

    #[test]
    fn order_four_over_quadratic_field() {
        // b = 2t², s₀ = √2·t, a ± 2s₀ = (t ± √2)²
        let s = TwoTorsionSurface::from_model(p(&[2, 0, 1]), p(&[0, 0, 2])).unwrap();
        assert!(has_order_four_over_sigma(&s));
        // (3 ± 2√2)t² + 1 has two simple roots
        let s = TwoTorsionSurface::from_model(p(&[1, 0, 3]), p(&[0, 0, 0, 0, 2])).unwrap();
        assert!(!has_order_four_over_sigma(&s));
    }
}
