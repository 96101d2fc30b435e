//! Picard number, determinant of the Néron–Severi lattice, and an explicit
//! model of `NS` spanned by the trivial lattice and σ.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{classify_surface, torsion_summary, Classification, ClassifiedFiber, SurfaceError, TwoTorsionSurface};
use crate::kodaira::{Action, Configuration, FiberType, TorsionGroup};
use crate::lattice::{snf, standard_lattice, IntLattice, LatticeError, LatticeKind, QDivisor};
use crate::poly::{rat_int, Place, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorsionSummary {
    pub two_torsion_rank: u32,
    pub order_four_over_sigma: bool,
    pub order: u64,
    pub group: &'static str,
}

impl TorsionSummary {
    pub fn new(two_torsion_rank: u32, order_four_over_sigma: bool) -> Self {
        let group = match (two_torsion_rank, order_four_over_sigma) {
            (1, false) => "Z/2",
            (1, true) => "Z/4",
            (_, false) => "(Z/2)^2",
            (_, true) => "Z/2 x Z/4",
        };
        let order = (1u64 << two_torsion_rank) * if order_four_over_sigma { 2 } else { 1 };
        TorsionSummary { two_torsion_rank, order_four_over_sigma, order, group }
    }

    pub fn as_group(&self) -> Option<TorsionGroup> {
        match (self.two_torsion_rank, self.order_four_over_sigma) {
            (1, false) => Some(TorsionGroup::Z2),
            (1, true) => Some(TorsionGroup::Z4),
            (2, false) => Some(TorsionGroup::Z2xZ2),
            _ => None,
        }
    }
}

/// `ρ = 2 + rank + Σ(m_ν − 1)`.
pub fn shioda_tate(cfg: &Configuration, mw_rank: u32) -> u64 {
    2 + mw_rank as u64 + cfg.sum_m_minus_1()
}

/// `det NS = (−1)^{ρ−1} ∏ m⁽¹⁾ / |tor|²` for Mordell–Weil rank 0.
pub fn det_ns(cfg: &Configuration, torsion_order: u64, rank_ns: u64) -> Result<i64, SurfaceError> {
    let prod = cfg.prod_m1();
    let tor_sq = torsion_order * torsion_order;
    if tor_sq == 0 || prod % tor_sq != 0 {
        return Err(SurfaceError::NonIntegralDeterminant { prod_m1: prod, tor_sq });
    }
    let abs = (prod / tor_sq) as i64;
    Ok(if rank_ns % 2 == 1 { abs } else { -abs })
}

/// Root-lattice block of one fiber (one point of a packet).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberBlock {
    pub place: Place,
    pub fiber: FiberType,
    pub offset: usize,
    pub rank: usize,
}

/// `⟨F, o⟩ ⊕ ⨁ L_ν` with σ solved from its intersection numbers.
#[derive(Debug, Clone)]
pub struct TrivialLattice {
    pub lattice: Arc<IntLattice>,
    pub blocks: Vec<FiberBlock>,
    /// Coordinates of σ in the basis `F, o, blocks…`.
    pub sigma: Vec<Rational>,
}

impl TrivialLattice {
    pub fn sigma_divisor(&self) -> QDivisor {
        QDivisor::new(self.lattice.clone(), self.sigma.clone()).expect("dimensions agree")
    }
}

fn root_lattice_of(f: FiberType) -> Option<IntLattice> {
    let kind = match f {
        FiberType::I { n, .. } if n >= 2 => LatticeKind::A(n - 1),
        FiberType::IStar { n, .. } => LatticeKind::D(n + 4),
        FiberType::III => LatticeKind::A(1),
        FiberType::IIIStar => LatticeKind::E7,
        _ => return None,
    };
    Some(standard_lattice(kind).expect("valid root lattice"))
}

/// Which root-basis vector σ meets (none when σ meets the identity component).
///
/// `I_n`: chain `Θ₁…Θ_{n−1}`. `I*_n`: `x₁ = Θ₁`, `x₂…x_{n+2}` the double
/// components, `x_{n+3} = Θ₂`, `x_{n+4} = Θ₃`. `III*`: chain `y₁…y₆`, `y₇` on `y₃`.
fn sigma_component(f: FiberType) -> Option<usize> {
    match f {
        FiberType::I { n, action: Action::II } => Some((n / 2 - 1) as usize),
        FiberType::IStar { n, action: Action::II } => Some(n as usize + 2),
        FiberType::IStar { .. } => Some(0),
        FiberType::III => Some(0),
        FiberType::IIIStar => Some(5),
        _ => None,
    }
}

pub fn trivial_lattice(cl: &Classification) -> TrivialLattice {
    let u = IntLattice::with_labels(vec![vec![0, 1], vec![1, -2]], vec!["F".into(), "o".into()])
        .expect("symmetric");
    let mut parts = vec![u];
    let mut blocks = Vec::new();
    let mut incid: Vec<i64> = vec![1, 0];
    let mut offset = 2;
    for ClassifiedFiber { place, fiber, point_count, .. } in &cl.fibers {
        let Some(root) = root_lattice_of(*fiber) else { continue };
        for _ in 0..*point_count {
            let rank = root.rank();
            let mut v = vec![0; rank];
            if let Some(k) = sigma_component(*fiber) {
                v[k] = 1;
            }
            incid.extend(v);
            blocks.push(FiberBlock { place: place.clone(), fiber: *fiber, offset, rank });
            parts.push(root.clone());
            offset += rank;
        }
    }
    let refs: Vec<&IntLattice> = parts.iter().collect();
    let lattice = IntLattice::direct_sum(&refs);
    let inv = snf::inverse_rational(&lattice.gram_big()).expect("trivial lattice is nondegenerate");
    let sigma = inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(&incid)
                .fold(Rational::zero(), |acc, (g, &r)| acc + g * rat_int(r))
        })
        .collect();
    TrivialLattice { lattice: Arc::new(lattice), blocks, sigma }
}

/// The overlattice of the trivial lattice generated by σ; it is all of NS
/// when the Mordell–Weil group is exactly `{o, σ}`.
pub fn sigma_overlattice(t: &TrivialLattice) -> Result<IntLattice, LatticeError> {
    Ok(t.lattice.overlattice(std::slice::from_ref(&t.sigma))?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub a: String,
    pub b: String,
    pub fibers: Vec<ClassifiedFiber>,
    pub configuration: Configuration,
    pub mw_rank: u32,
    pub picard: u64,
    pub torsion: TorsionSummary,
    pub det_ns: Option<i64>,
    pub fixed_point_total: u64,
    pub euler_total: u64,
    pub notes: Vec<String>,
}

impl SurfaceReport {
    pub fn build(s: &TwoTorsionSurface, mw_rank: u32) -> Result<SurfaceReport, SurfaceError> {
        let cl = classify_surface(s)?;
        let cfg = cl.configuration();
        let torsion = torsion_summary(s);
        let picard = shioda_tate(&cfg, mw_rank);
        let mut notes = vec![format!(
            "Mordell-Weil rank {mw_rank} is an input assumption, not computed"
        )];
        let det = if mw_rank == 0 {
            notes.push("det NS = (-1)^(rho-1) prod m1 / |tor|^2 (Shioda, rank 0)".into());
            match det_ns(&cfg, torsion.order, picard) {
                Ok(d) => Some(d),
                Err(e) => {
                    notes.push(format!("det NS unavailable: {e}"));
                    None
                }
            }
        } else {
            notes.push("det NS needs the Mordell-Weil lattice when the rank is positive".into());
            None
        };
        if torsion.two_torsion_rank == 2 && !torsion.order_four_over_sigma {
            notes.push("only halvings of sigma are tested; other order-4 sections are not searched".into());
        }
        Ok(SurfaceReport {
            a: s.a().to_string(),
            b: s.b().to_string(),
            fixed_point_total: cfg.fixed_points(),
            euler_total: cfg.euler(),
            fibers: cl.fibers,
            configuration: cfg,
            mw_rank,
            picard,
            torsion,
            det_ns: det,
            notes,
        })
    }
}

/// `|det|` of a lattice as `i64` (for reports and tests).
pub fn det_i64(l: &IntLattice) -> i64 {
    l.det().to_i64().expect("determinant fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, UniPoly};
    use crate::surface::quotient_surface;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn xd(d: usize) -> TwoTorsionSurface {
        let mut b = vec![0; d + 1];
        b[d] = 1;
        TwoTorsionSurface::new(p(&[1, 1, 0, 1]), p(&b)).unwrap()
    }

    fn x_prime(n: usize) -> TwoTorsionSurface {
        let a = p(&[1, 1, 0, -(8 - n as i64), 2]);
        let mut b = p(&[1]);
        for _ in 0..n {
            b = &b * &p(&[0, 1]);
        }
        for _ in 0..8 - n {
            b = &b * &p(&[-1, 1]);
        }
        TwoTorsionSurface::new(a, b).unwrap()
    }

    #[test]
    fn picard_numbers() {
        let cfg = |d| classify_surface(&xd(d)).unwrap().configuration();
        assert_eq!(shioda_tate(&cfg(0), 0), 18);
        for d in 1..=6 {
            assert_eq!(shioda_tate(&cfg(d), 0), 17);
        }
        assert_eq!(shioda_tate(&cfg(7), 0), 16);
    }

    #[test]
    fn determinants_of_families() {
        let r = |s: &TwoTorsionSurface| SurfaceReport::build(s, 0).unwrap().det_ns.unwrap();
        assert_eq!(r(&xd(0)), -1);
        for d in 1..=6 {
            assert_eq!(r(&xd(d)), 2 * d as i64);
        }
        for d in 0..=6i64 {
            let y = quotient_surface(&xd(d as usize)).unwrap();
            let expect = if d == 0 { 16 } else if d % 2 == 1 { 64 * d } else { 16 * d };
            assert_eq!(r(&y).abs(), expect, "Y_{d}");
        }
        assert_eq!(r(&x_prime(5)), 30);
        assert_eq!(r(&x_prime(7)), 14);
    }

    #[test]
    fn non_integral_determinant() {
        let cfg = classify_surface(&xd(1)).unwrap().configuration();
        assert!(matches!(det_ns(&cfg, 8, 17), Err(SurfaceError::NonIntegralDeterminant { .. })));
    }

    #[test]
    fn sigma_is_a_minus_two_curve() {
        let mut cases: Vec<TwoTorsionSurface> = (0..=8).map(xd).collect();
        cases.push(x_prime(5));
        cases.push(x_prime(7));
        for s in &cases {
            let cl = classify_surface(s).unwrap();
            let t = trivial_lattice(&cl);
            let sig = t.sigma_divisor();
            assert_eq!(sig.norm(), rat(-2, 1));
            assert!(sig.in_dual());
        }
    }

    #[test]
    fn explicit_ns_matches_determinant_formula() {
        for d in 0..=7 {
            let s = xd(d);
            let rep = SurfaceReport::build(&s, 0).unwrap();
            let t = trivial_lattice(&classify_surface(&s).unwrap());
            let ns = sigma_overlattice(&t).unwrap();
            assert_eq!(ns.rank() as u64, rep.picard);
            assert_eq!(det_i64(&ns), rep.det_ns.unwrap(), "X_{d}");
        }
        for n in [5, 7] {
            let s = x_prime(n);
            let t = trivial_lattice(&classify_surface(&s).unwrap());
            let ns = sigma_overlattice(&t).unwrap();
            assert_eq!(det_i64(&ns), 2 * n as i64 * (8 - n as i64));
        }
    }
}
