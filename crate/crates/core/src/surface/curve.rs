//! Smooth fibers `y² = x(x² + a₀x + b₀)` over ℚ, the chord-tangent law, and
//! the 2-isogeny to the quotient curve and back.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{SurfaceError, TwoTorsionSurface};
use crate::poly::{rat_int, rational_sqrt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializedCurve {
    pub a0: Rational,
    pub b0: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum AffinePoint {
    Infinity,
    Finite { x: Rational, y: Rational },
}

impl AffinePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        AffinePoint::Finite { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        AffinePoint::Finite { x: rat_int(x), y: rat_int(y) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AffinePoint::Infinity)
    }
}

impl std::fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AffinePoint::Infinity => f.write_str("inf"),
            AffinePoint::Finite { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl SpecializedCurve {
    pub fn new(a0: Rational, b0: Rational) -> Result<Self, SurfaceError> {
        let disc = &b0 * &b0 * (&a0 * &a0 - &b0 * rat_int(4));
        if disc.is_zero() {
            return Err(SurfaceError::SingularFiber { t0: format!("(a, b) = ({a0}, {b0})") });
        }
        Ok(SpecializedCurve { a0, b0 })
    }

    /// `x(x² + a₀x + b₀)`
    pub fn rhs(&self, x: &Rational) -> Rational {
        x * (x * x + &self.a0 * x + &self.b0)
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        match p {
            AffinePoint::Infinity => true,
            AffinePoint::Finite { x, y } => y * y == self.rhs(x),
        }
    }

    /// The companion curve `(−2a₀, a₀² − 4b₀)`.
    pub fn quotient(&self) -> SpecializedCurve {
        SpecializedCurve {
            a0: &self.a0 * rat_int(-2),
            b0: &self.a0 * &self.a0 - &self.b0 * rat_int(4),
        }
    }

    fn check(&self, p: &AffinePoint) -> Result<(), SurfaceError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(SurfaceError::OffCurve)
        }
    }

    pub fn neg(&self, p: &AffinePoint) -> AffinePoint {
        match p {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Finite { x, y } => AffinePoint::new(x.clone(), -y),
        }
    }

    pub fn multiply(&self, p: &AffinePoint, n: u64) -> Result<AffinePoint, SurfaceError> {
        self.check(p)?;
        let mut acc = AffinePoint::Infinity;
        let mut base = p.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = group_law(self, &acc, &base)?;
            }
            base = group_law(self, &base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

/// `(a(t₀), b(t₀))`, rejecting singular fibers.
pub fn specialize(s: &TwoTorsionSurface, t0: &Rational) -> Result<SpecializedCurve, SurfaceError> {
    SpecializedCurve::new(s.a().eval(t0), s.b().eval(t0))
        .map_err(|_| SurfaceError::SingularFiber { t0: t0.to_string() })
}

/// `P + Q` on `y² = x³ + a₀x² + b₀x`.
pub fn group_law(
    c: &SpecializedCurve,
    p: &AffinePoint,
    q: &AffinePoint,
) -> Result<AffinePoint, SurfaceError> {
    c.check(p)?;
    c.check(q)?;
    let (AffinePoint::Finite { x: x1, y: y1 }, AffinePoint::Finite { x: x2, y: y2 }) = (p, q) else {
        return Ok(if p.is_infinity() { q.clone() } else { p.clone() });
    };
    let lambda = if x1 != x2 {
        (y2 - y1) / (x2 - x1)
    } else if y1 == y2 && !y1.is_zero() {
        (rat_int(3) * x1 * x1 + rat_int(2) * &c.a0 * x1 + &c.b0) / (rat_int(2) * y1)
    } else {
        // P = −Q
        return Ok(AffinePoint::Infinity);
    };
    let x3 = &lambda * &lambda - &c.a0 - x1 - x2;
    let y3 = -(y1 + &lambda * (&x3 - x1));
    Ok(AffinePoint::new(x3, y3))
}

/// `φ(x, y) = (y²/x², y(x² − b₀)/x²)` onto the quotient curve; the kernel
/// `{∞, (0,0)}` goes to `∞`.
pub fn apply_isogeny(c: &SpecializedCurve, p: &AffinePoint) -> Result<AffinePoint, SurfaceError> {
    c.check(p)?;
    match p {
        AffinePoint::Finite { x, y } if !x.is_zero() => {
            let x2 = x * x;
            Ok(AffinePoint::new(y * y / &x2, y * (&x2 - &c.b0) / &x2))
        }
        _ => Ok(AffinePoint::Infinity),
    }
}

/// `φ̂(x, y) = (y²/4x², y(x² − B)/8x²)` from the quotient curve `(A, B)`
/// back to the original curve.
pub fn apply_dual(cy: &SpecializedCurve, q: &AffinePoint) -> Result<AffinePoint, SurfaceError> {
    cy.check(q)?;
    match q {
        AffinePoint::Finite { x, y } if !x.is_zero() => {
            let x2 = x * x;
            Ok(AffinePoint::new(
                y * y / (rat_int(4) * &x2),
                y * (&x2 - &cy.b0) / (rat_int(8) * &x2),
            ))
        }
        _ => Ok(AffinePoint::Infinity),
    }
}

/// Rational points with `x = p/q`, `|p| ≤ height`, `1 ≤ q ≤ height`, found
/// by testing whether `x(x² + a₀x + b₀)` is a rational square. `(0, 0)` and
/// duplicate `x` values are skipped; each hit is reported with `y ≥ 0`.
pub fn find_rational_points(c: &SpecializedCurve, height: i64, limit: usize) -> Vec<AffinePoint> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for q in 1..=height {
        for p in -height..=height {
            let x = Rational::new(p.into(), q.into());
            if x.is_zero() || !seen.insert(x.clone()) {
                continue;
            }
            let r = c.rhs(&x);
            if r.is_negative() {
                continue;
            }
            if let Some(y) = rational_sqrt(&r) {
                out.push(AffinePoint::new(x, y));
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// Whether `[2]P = φ̂(φ(P))` holds at `P`.
pub fn isogeny_identity_holds(c: &SpecializedCurve, p: &AffinePoint) -> Result<bool, SurfaceError> {
    let cy = c.quotient();
    let img = apply_isogeny(c, p)?;
    if !cy.contains(&img) {
        return Ok(false);
    }
    let back = apply_dual(&cy, &img)?;
    let doubled = group_law(c, p, p)?;
    Ok(back == doubled)
}
