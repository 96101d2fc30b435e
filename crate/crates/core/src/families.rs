//! The two example families, their Γ divisors, a genericity check and
//! seeded random surfaces for property tests.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kodaira::{Action, FiberType};
use crate::lattice::QDivisor;
use crate::poly::{poly_gcd, rat_int, Place, Rational, UniPoly};
use crate::surface::{classify_surface, trivial_lattice, SurfaceError, TrivialLattice, TwoTorsionSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family parameter: {0}")]
    InvalidFamilyParameter(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("no {0} fiber where the family puts one")]
    MissingFiber(String),
}

/// `X_d: y² = x(x² + P x + t^d)` with `P` cubic, or
/// `X′_n: y² = x(x² + P x + tⁿ(t−1)^{8−n})` with `P = 2t⁴ − (8−n)t³ + a₁t² + a₂t + a₃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Xd { d: u32, p: UniPoly },
    XPrime { n: u32, a1: Rational, a2: Rational, a3: Rational },
}

impl FamilySpec {
    /// `X_d` with the sample cubic `t³ + t + 1`.
    pub fn xd(d: u32) -> Self {
        FamilySpec::Xd { d, p: sample_cubic() }
    }

    /// `X′_n` with the sample parameters `(a₁, a₂, a₃) = (0, 1, 1)`.
    pub fn x_prime(n: u32) -> Self {
        FamilySpec::XPrime { n, a1: rat_int(0), a2: rat_int(1), a3: rat_int(1) }
    }

    pub fn name(&self) -> String {
        match self {
            FamilySpec::Xd { d, .. } => format!("X_{d}"),
            FamilySpec::XPrime { n, .. } => format!("X'_{n}"),
        }
    }

    /// Places where the family prescribes a special fiber; `c` must be
    /// squarefree away from these.
    pub fn designated_places(&self) -> Vec<UniPoly> {
        match self {
            FamilySpec::Xd { d: 0, .. } => Vec::new(),
            FamilySpec::Xd { .. } => vec![UniPoly::t()],
            FamilySpec::XPrime { .. } => vec![UniPoly::t(), UniPoly::from_ints(&[-1, 1])],
        }
    }
}

pub fn sample_cubic() -> UniPoly {
    UniPoly::from_ints(&[1, 1, 0, 1])
}

pub fn build_family(spec: &FamilySpec) -> Result<TwoTorsionSurface, FamilyError> {
    let (a, b) = match spec {
        FamilySpec::Xd { d, p } => {
            if *d > 8 {
                return Err(FamilyError::InvalidFamilyParameter(format!("d = {d} outside 0..=8")));
            }
            if p.degree() != Some(3) {
                return Err(FamilyError::InvalidFamilyParameter(format!("P = {p} is not cubic")));
            }
            (p.clone(), UniPoly::monomial(Rational::one(), *d as usize))
        }
        FamilySpec::XPrime { n, a1, a2, a3 } => {
            if *n != 5 && *n != 7 {
                return Err(FamilyError::InvalidFamilyParameter(format!("n = {n} is not 5 or 7")));
            }
            let p = UniPoly::new(vec![a3.clone(), a2.clone(), a1.clone(), rat_int(*n as i64 - 8), rat_int(2)]);
            let b = &UniPoly::monomial(Rational::one(), *n as usize)
                * &UniPoly::from_ints(&[-1, 1]).pow(8 - n);
            (p, b)
        }
    };
    Ok(TwoTorsionSurface::new(a, b)?)
}

/// `c` is squarefree once the designated places are divided out.
pub fn is_generic(spec: &FamilySpec, s: &TwoTorsionSurface) -> bool {
    let mut c = s.c();
    for h in spec.designated_places() {
        while let Some(q) = c.exact_div(&h) {
            c = q;
        }
    }
    match c.degree() {
        Some(0) => true,
        Some(_) => poly_gcd(&c, &c.derivative()).is_constant(),
        None => false,
    }
}

/// Random `(a, b)` with coefficients in `−3..=3` and random degrees within
/// the K3 bounds. Candidates failing the strict constructor are skipped.
pub fn random_surfaces(seed: u64, count: usize) -> Vec<TwoTorsionSurface> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let draw = |rng: &mut ChaCha8Rng, max_deg: usize| {
        let deg = rng.gen_range(0..=max_deg);
        UniPoly::from_ints(&(0..=deg).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>())
    };
    while out.len() < count {
        let a = draw(&mut rng, 4);
        let b = draw(&mut rng, 8);
        if b.is_zero() {
            continue;
        }
        if let Ok(s) = TwoTorsionSurface::new(a, b) {
            out.push(s);
        }
    }
    out
}

/// `Γ` in the trivial lattice of the family surface, together with that
/// lattice (which carries σ).
#[derive(Debug, Clone)]
pub struct GammaDivisor {
    pub trivial: TrivialLattice,
    pub gamma: QDivisor,
}

impl GammaDivisor {
    pub fn norm(&self) -> Rational {
        self.gamma.norm()
    }

    /// Order in `L*/L` for the trivial lattice `L`.
    pub fn order_mod_trivial(&self) -> u64 {
        self.gamma.order_mod_lattice()
    }

    /// Order in `N*/N` for `N = L + ℤσ`.
    pub fn order_mod_ns(&self) -> u64 {
        let sigma = self.trivial.sigma_divisor();
        let s = sigma.order_mod_lattice();
        let lat = self.gamma.lattice().clone();
        (1..)
            .find(|&k| {
                (0..s).any(|j| {
                    let coords = self
                        .gamma
                        .coords()
                        .iter()
                        .zip(sigma.coords())
                        .map(|(g, sg)| g * rat_int(k as i64) - sg * rat_int(j as i64))
                        .collect();
                    QDivisor::new(lat.clone(), coords).unwrap().in_lattice()
                })
            })
            .unwrap()
    }

    /// `Γ ∈ N*`: integral against the trivial lattice and against σ.
    pub fn in_ns_dual(&self) -> bool {
        let sigma = self.trivial.sigma_divisor();
        self.gamma.in_dual() && self.gamma.inner(&sigma).map(|x| x.is_integer()).unwrap_or(false)
    }
}

fn theta_coords(coords: &mut [Rational], offset: usize, rank: usize) {
    let m2 = rank as i64 + 1;
    for k in 1..=rank {
        coords[offset + k - 1] = Rational::new((k as i64).into(), m2.into());
    }
}

/// `X_d`: `ϑ_{2d}` on the `I_{2d}` at `t = 0` plus `½(Θ₂ + Θ₃)` on the `I*` at ∞.
/// `X′_n`: `ϑ_{2n} + ϑ_{16−2n} + ½Θ₁` with `Θ₁` on the `I₂` at ∞.
pub fn gamma_divisor(spec: &FamilySpec) -> Result<GammaDivisor, FamilyError> {
    let s = build_family(spec)?;
    let cl = classify_surface(&s)?;
    let trivial = trivial_lattice(&cl);
    let mut coords = vec![Rational::zero(); trivial.lattice.rank()];
    let block = |place: &Place, want: &str| {
        trivial
            .blocks
            .iter()
            .find(|b| &b.place == place)
            .cloned()
            .ok_or_else(|| FamilyError::MissingFiber(format!("{want} at {place}")))
    };
    let zero = Place::Finite(UniPoly::t());
    match spec {
        FamilySpec::Xd { d, .. } => {
            if !(1..=6).contains(d) {
                return Err(FamilyError::InvalidFamilyParameter(format!("Γ needs 1 ≤ d ≤ 6, got {d}")));
            }
            let b0 = block(&zero, "I_2d")?;
            theta_coords(&mut coords, b0.offset, b0.rank);
            let binf = block(&Place::Infinity, "I*")?;
            let half = Rational::new(1.into(), 2.into());
            match binf.fiber {
                FiberType::IStar { n: 0, .. } => {
                    // D₄ has no preferred pair: σ meets x₁, pair it with x₃
                    coords[binf.offset] = half.clone();
                    coords[binf.offset + 2] = half;
                }
                FiberType::IStar { action: Action::II, .. } => {
                    coords[binf.offset + binf.rank - 2] = half.clone();
                    coords[binf.offset + binf.rank - 1] = half;
                }
                other => {
                    return Err(FamilyError::MissingFiber(format!("I* of type (ii) at inf, found {other}")));
                }
            }
        }
        FamilySpec::XPrime { .. } => {
            let b0 = block(&zero, "I_2n")?;
            theta_coords(&mut coords, b0.offset, b0.rank);
            let b1 = block(&Place::Finite(UniPoly::from_ints(&[-1, 1])), "I_{16-2n}")?;
            theta_coords(&mut coords, b1.offset, b1.rank);
            let binf = block(&Place::Infinity, "I2")?;
            coords[binf.offset] = Rational::new(1.into(), 2.into());
        }
    }
    let gamma = QDivisor::new(trivial.lattice.clone(), coords).expect("dimensions agree");
    Ok(GammaDivisor { trivial, gamma })
}
