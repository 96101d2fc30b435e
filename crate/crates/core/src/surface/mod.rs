//! Elliptic K3 surfaces `y² = x(x² + a(t)x + b(t))` with the 2-torsion
//! section `σ = (0, 0)`, their quotient by translation by σ, and the
//! invariants read off from the singular fibers.
//!
//! Discriminants are normalized as `Δ_X = b²c` and `Δ_Y = bc²` with
//! `c = a² − 4b`; the Weierstrass discriminant of the cubic differs by the
//! constant factor 16, which does not affect any valuation.

mod curve;
mod invariants;
mod torsion;

pub use curve::{
    apply_dual, apply_isogeny, find_rational_points, group_law, isogeny_identity_holds, specialize, AffinePoint,
    SpecializedCurve,
};
pub use invariants::{
    det_i64, det_ns, shioda_tate, sigma_overlattice, trivial_lattice, FiberBlock, SurfaceReport,
    TorsionSummary, TrivialLattice,
};
pub use torsion::{has_order_four_over_sigma, torsion_summary, two_torsion_rank};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kodaira::{classify_from_valuations, Configuration, FiberError, FiberType};
use crate::poly::{
    coprime_refine, infinity_valuations, check_bound, rat_int, Place, PolyError, UniPoly,
    Valuation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("discriminant vanishes identically (b = 0 or a² − 4b = 0)")]
    SingularSurface,
    #[error("model is not minimal at {place}: ord a = {v_a}, ord b = {v_b}")]
    NonMinimalModel { place: String, v_a: Valuation, v_b: u32 },
    #[error("fiber at {place}: {source}")]
    Fiber { place: String, source: FiberError },
    #[error("fiber over t = {t0} is singular")]
    SingularFiber { t0: String },
    #[error("point is not on the curve")]
    OffCurve,
    #[error("∏ m⁽¹⁾ = {prod_m1} is not divisible by |tor|² = {tor_sq}")]
    NonIntegralDeterminant { prod_m1: u64, tor_sq: u64 },
}

/// `y² = x(x² + a x + b)` with `deg a ≤ 4`, `deg b ≤ 8`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoTorsionSurface {
    a: UniPoly,
    b: UniPoly,
}

#[derive(Deserialize)]
struct RawSurface {
    a: UniPoly,
    b: UniPoly,
}

impl TwoTorsionSurface {
    /// Checks degree bounds, `Δ ≢ 0`, and minimality at every place.
    pub fn new(a: UniPoly, b: UniPoly) -> Result<Self, SurfaceError> {
        let s = Self::from_model(a, b)?;
        s.check_minimal()?;
        Ok(s)
    }

    /// Checks degree bounds and `Δ ≢ 0` only. Useful for constant models
    /// and curve-level computations; classification still rejects
    /// non-minimal places.
    pub fn from_model(a: UniPoly, b: UniPoly) -> Result<Self, SurfaceError> {
        check_bound("a", &a, 4)?;
        check_bound("b", &b, 8)?;
        let s = TwoTorsionSurface { a, b };
        if s.b.is_zero() || s.c().is_zero() {
            return Err(SurfaceError::SingularSurface);
        }
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        let raw: RawSurface = serde_json::from_str(text)
            .map_err(|e| SurfaceError::Poly(PolyError::Parse(e.to_string())))?;
        Self::new(raw.a, raw.b)
    }

    pub fn a(&self) -> &UniPoly {
        &self.a
    }

    pub fn b(&self) -> &UniPoly {
        &self.b
    }

    /// `c = a² − 4b`.
    pub fn c(&self) -> UniPoly {
        &(&self.a * &self.a) - &self.b.scale(&rat_int(4))
    }

    fn check_minimal(&self) -> Result<(), SurfaceError> {
        let clusters = coprime_refine(&self.b.squarefree_part()?, &[self.a.clone(), self.b.clone()])?;
        let inf = infinity_valuations(&self.a, &self.b)?;
        let finite = clusters.into_iter().map(|c| (c.place, c.valuations[0], c.valuations[1]));
        let all = finite.chain(std::iter::once((inf.place, inf.valuations[0], inf.valuations[1])));
        for (place, v_a, v_b) in all {
            if let Valuation::Finite(vb) = v_b {
                if v_a.at_least(2) && vb >= 4 {
                    return Err(SurfaceError::NonMinimalModel { place: place.to_string(), v_a, v_b: vb });
                }
            }
        }
        Ok(())
    }
}

/// `(Δ_X, Δ_Y) = (b²c, bc²)`.
pub fn discriminants(s: &TwoTorsionSurface) -> Result<(UniPoly, UniPoly), SurfaceError> {
    let c = s.c();
    let dx = &(&s.b * &s.b) * &c;
    let dy = &(&c * &c) * &s.b;
    if dx.is_zero() {
        return Err(SurfaceError::SingularSurface);
    }
    Ok((dx, dy))
}

/// `Y: y² = x(x² − 2a x + (a² − 4b))`.
pub fn quotient_surface(s: &TwoTorsionSurface) -> Result<TwoTorsionSurface, SurfaceError> {
    TwoTorsionSurface::from_model(s.a.scale(&rat_int(-2)), s.c())
}

/// One packet of conjugate singular fibers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedFiber {
    pub place: Place,
    pub point_count: usize,
    pub v_a: Valuation,
    pub v_b: u32,
    pub v_c: u32,
    pub fiber: FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub fibers: Vec<ClassifiedFiber>,
}

impl Classification {
    pub fn configuration(&self) -> Configuration {
        Configuration::from_counts(self.fibers.iter().map(|f| (f.fiber, f.point_count as u32)))
    }

    pub fn at(&self, place: &Place) -> Option<&ClassifiedFiber> {
        self.fibers.iter().find(|f| &f.place == place)
    }

    pub fn at_infinity(&self) -> Option<&ClassifiedFiber> {
        self.at(&Place::Infinity)
    }
}

pub fn classify_surface(s: &TwoTorsionSurface) -> Result<Classification, SurfaceError> {
    let c = s.c();
    let support = (&s.b * &c).squarefree_part()?;
    let mut fibers = Vec::new();
    let finite = coprime_refine(&support, &[s.a.clone(), s.b.clone(), c])?;
    let inf = infinity_valuations(&s.a, &s.b)?;
    for cl in finite.into_iter().chain(std::iter::once(inf)) {
        let v_a = cl.valuations[0];
        let (Some(v_b), Some(v_c)) = (cl.valuations[1].finite(), cl.valuations[2].finite()) else {
            return Err(SurfaceError::SingularSurface);
        };
        let fiber = classify_from_valuations(v_a, v_b, v_c).map_err(|e| match e {
            FiberError::NonMinimalModel { v_a, v_b } => {
                SurfaceError::NonMinimalModel { place: cl.place.to_string(), v_a, v_b }
            }
            other => SurfaceError::Fiber { place: cl.place.to_string(), source: other },
        })?;
        if fiber.is_regular() {
            continue;
        }
        fibers.push(ClassifiedFiber { point_count: cl.point_count, place: cl.place, v_a, v_b, v_c, fiber });
    }
    Ok(Classification { fibers })
}

/// Does the classification of the quotient equal the table image of the
/// classification of `s`?
pub fn quotient_configuration_crosscheck(s: &TwoTorsionSurface) -> Result<bool, SurfaceError> {
    let x = classify_surface(s)?;
    let y = classify_surface(&quotient_surface(s)?)?;
    Ok(x.configuration().quotient() == y.configuration())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kodaira::Action;
    use crate::poly::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn xd(d: usize) -> TwoTorsionSurface {
        // P = t³ + t + 1, b = t^d
        let mut b = vec![0; d + 1];
        b[d] = 1;
        TwoTorsionSurface::new(p(&[1, 1, 0, 1]), p(&b)).unwrap()
    }

    fn strings(c: &Configuration) -> Vec<String> {
        c.canonical_strings()
    }

    #[test]
    fn discriminant_examples() {
        let s = TwoTorsionSurface::from_model(p(&[0]), p(&[1])).unwrap();
        let (dx, dy) = discriminants(&s).unwrap();
        assert_eq!(dx, p(&[-4]));
        assert_eq!(dy, p(&[16]));
        let s = TwoTorsionSurface::new(p(&[1, 0, 0, 1]), p(&[0, 1])).unwrap();
        let pp = p(&[1, 0, 0, 1]);
        let c = &(&pp * &pp) - &p(&[0, 4]);
        assert_eq!(discriminants(&s).unwrap().0, &p(&[0, 0, 1]) * &c);
        assert_eq!(
            TwoTorsionSurface::new(p(&[0, 2]), p(&[0, 0, 1])).unwrap_err(),
            SurfaceError::SingularSurface
        );
    }

    #[test]
    fn constructor_rejects_bad_models() {
        assert!(matches!(
            TwoTorsionSurface::new(p(&[0, 0, 0, 0, 0, 1]), p(&[1])),
            Err(SurfaceError::Poly(PolyError::DegreeBoundViolated { .. }))
        ));
        // constant models are non-minimal at infinity
        match TwoTorsionSurface::new(p(&[5]), p(&[4])) {
            Err(SurfaceError::NonMinimalModel { place, .. }) => assert_eq!(place, "t = inf"),
            other => panic!("{other:?}"),
        }
        // t²·(…) and t⁴·(…) at a finite place
        match TwoTorsionSurface::new(p(&[0, 0, 1]), p(&[0, 0, 0, 0, 1, 0, 0, 0, 1])) {
            Err(SurfaceError::NonMinimalModel { place, v_b, .. }) => {
                assert_eq!(place, "t = 0");
                assert_eq!(v_b, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(TwoTorsionSurface::from_model(p(&[5]), p(&[4])).is_ok());
    }

    #[test]
    fn x1_configuration() {
        let s = TwoTorsionSurface::new(p(&[1, 0, 0, 1]), p(&[0, 1])).unwrap();
        let cl = classify_surface(&s).unwrap();
        assert_eq!(cl.at(&Place::Finite(p(&[0, 1]))).unwrap().fiber, FiberType::I { n: 2, action: Action::II });
        assert_eq!(cl.at_infinity().unwrap().fiber, FiberType::IStar { n: 10, action: Action::II });
        assert_eq!(strings(&cl.configuration()), vec!["6I1(i)", "I2(ii)", "I*10(ii)"]);
        let y = classify_surface(&quotient_surface(&s).unwrap()).unwrap().configuration();
        assert_eq!(strings(&y), vec!["I1(i)", "6I2(ii)", "I*5(i)"]);
        assert!(quotient_configuration_crosscheck(&s).unwrap());
    }

    #[test]
    fn family_xd_rows() {
        let x8 = classify_surface(&xd(8)).unwrap();
        assert_eq!(strings(&x8.configuration()), vec!["8I1(i)", "I16(ii)"]);
        assert!(x8.at_infinity().is_none());
        let x7 = classify_surface(&xd(7)).unwrap().configuration();
        assert_eq!(strings(&x7), vec!["7I1(i)", "I14(ii)", "III"]);
        for d in 0..=8 {
            let cfg = classify_surface(&xd(d)).unwrap().configuration();
            assert_eq!(cfg.euler(), 24, "d = {d}");
            assert_eq!(cfg.fixed_points(), 8, "d = {d}");
            assert!(quotient_configuration_crosscheck(&xd(d)).unwrap());
        }
    }

    #[test]
    fn x_prime_family() {
        // P = 2t⁴ − (8−n)t³ + t + 1, b = tⁿ(t−1)^{8−n}
        for n in [5usize, 7] {
            let a = p(&[1, 1, 0, -(8 - n as i64), 2]);
            let mut b = p(&[1]);
            for _ in 0..n {
                b = &b * &p(&[0, 1]);
            }
            for _ in 0..8 - n {
                b = &b * &p(&[-1, 1]);
            }
            let s = TwoTorsionSurface::new(a, b).unwrap();
            let cl = classify_surface(&s).unwrap();
            assert_eq!(cl.at(&Place::Finite(p(&[0, 1]))).unwrap().fiber, FiberType::I { n: 2 * n as u32, action: Action::II });
            assert_eq!(
                cl.at(&Place::Finite(p(&[-1, 1]))).unwrap().fiber,
                FiberType::I { n: 16 - 2 * n as u32, action: Action::II }
            );
            assert_eq!(cl.at_infinity().unwrap().fiber, FiberType::I { n: 2, action: Action::I });
            assert_eq!(cl.configuration().count(&FiberType::I { n: 1, action: Action::I }), 6);
            assert!(quotient_configuration_crosscheck(&s).unwrap());
        }
    }

    #[test]
    fn quotient_examples() {
        let s = TwoTorsionSurface::from_model(p(&[0]), p(&[1])).unwrap();
        let y = quotient_surface(&s).unwrap();
        assert_eq!((y.a().clone(), y.b().clone()), (p(&[0]), p(&[-4])));
        let s = xd(3);
        let yy = quotient_surface(&quotient_surface(&s).unwrap()).unwrap();
        assert_eq!(yy.a(), &s.a().scale(&rat(4, 1)));
        assert_eq!(yy.b(), &s.b().scale(&rat(16, 1)));
    }

    #[test]
    fn json_input() {
        let s = TwoTorsionSurface::from_json(r#"{"a": ["1", "1", "0", "1"], "b": ["0", "1"]}"#).unwrap();
        assert_eq!(s, xd(1));
        let back: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(back["b"], serde_json::json!(["0", "1"]));
        assert!(TwoTorsionSurface::from_json("{").is_err());
    }
}
