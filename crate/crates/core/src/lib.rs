//! Exact computations for elliptic K3 surfaces `y² = x(x² + a(t)x + b(t))`
//! with a 2-torsion section: singular fibers, the quotient by translation
//! by the section, Néron–Severi invariants, discriminant forms, and a
//! finite search for the admissible `d` with `T_X ≅ U ⊕ U ⊕ ⟨−2d⟩`.

pub mod families;
pub mod kodaira;
pub mod lattice;
pub mod poly;
pub mod report;
pub mod surface;
pub mod theorem;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NikulinError {
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Fiber(#[from] kodaira::FiberError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Theorem(#[from] theorem::TheoremError),
    #[error(transparent)]
    Family(#[from] families::FamilyError),
}

impl NikulinError {
    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        use surface::SurfaceError as S;
        match self {
            NikulinError::Poly(poly::PolyError::DegreeBoundViolated { .. })
            | NikulinError::Surface(S::Poly(poly::PolyError::DegreeBoundViolated { .. })) => "DegreeBoundViolated",
            NikulinError::Poly(_) | NikulinError::Surface(S::Poly(_)) => "PolyError",
            NikulinError::Fiber(kodaira::FiberError::NotInTable { .. }) => "NotInTable",
            NikulinError::Fiber(_) => "FiberError",
            NikulinError::Surface(S::SingularSurface) => "SingularSurface",
            NikulinError::Surface(S::NonMinimalModel { .. }) => "NonMinimalModel",
            NikulinError::Surface(S::Fiber { source: kodaira::FiberError::NotInTable { .. }, .. }) => "NotInTable",
            NikulinError::Surface(S::Fiber { .. }) => "FiberError",
            NikulinError::Surface(S::SingularFiber { .. }) => "SingularFiber",
            NikulinError::Surface(S::OffCurve) => "OffCurve",
            NikulinError::Surface(S::NonIntegralDeterminant { .. }) => "NonIntegralDeterminant",
            NikulinError::Lattice(_) => "LatticeError",
            NikulinError::Theorem(_) => "NotAdmissible",
            NikulinError::Family(families::FamilyError::Surface(e)) => NikulinError::Surface(e.clone()).kind(),
            NikulinError::Family(families::FamilyError::InvalidFamilyParameter(_)) => "InvalidFamilyParameter",
            NikulinError::Family(_) => "FamilyError",
        }
    }

    /// The place (`"t = 0"`, `"t = inf"`, …) an error refers to, if any.
    pub fn place(&self) -> Option<String> {
        use surface::SurfaceError as S;
        let s = match self {
            NikulinError::Surface(s) => s,
            NikulinError::Family(families::FamilyError::Surface(s)) => s,
            _ => return None,
        };
        match s {
            S::NonMinimalModel { place, .. } | S::Fiber { place, .. } => Some(place.clone()),
            S::SingularFiber { t0 } => Some(format!("t = {t0}")),
            _ => None,
        }
    }
}
