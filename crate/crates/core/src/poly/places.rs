use std::fmt;

use serde::{Serialize, Serializer};

use super::{poly_gcd, PolyError, UniPoly};

/// Order of vanishing of a tracked polynomial along a place. The zero
/// polynomial vanishes to infinite order; that case is a variant, never a
/// magic integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn of_optional(v: Option<u32>) -> Self {
        v.map_or(Valuation::Infinite, Valuation::Finite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    /// `2·vb + vc`, the valuation of `b²c`.
    pub fn delta(vb: Valuation, vc: Valuation) -> Valuation {
        match (vb, vc) {
            (Valuation::Finite(b), Valuation::Finite(c)) => Valuation::Finite(2 * b + c),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A Galois-stable packet of points of ℙ¹: the roots of a monic squarefree
/// rational polynomial, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(UniPoly),
    Infinity,
}

impl Place {
    pub fn point_count(&self) -> usize {
        match self {
            Place::Finite(h) => h.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(h) => write!(f, "{h} = 0"),
            Place::Infinity => write!(f, "t = inf"),
        }
    }
}

/// JSON form: the modulus coefficient array, or the string `"inf"`.
impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Place::Finite(h) => h.serialize(s),
            Place::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceCluster {
    pub place: Place,
    pub point_count: usize,
    /// One entry per tracked polynomial, in the order they were supplied.
    pub valuations: Vec<Valuation>,
}

/// Split `support` into pairwise coprime squarefree moduli along which every
/// tracked polynomial has a uniform valuation.
///
/// For each tracked `f` a modulus `h` is peeled as `h = ∏ h_k` where `h_k`
/// collects the roots of `h` on which `f` vanishes to order exactly `k`:
/// repeatedly take `g = gcd(h, f)`, emit `h/g` at the current order, and
/// continue with `(g, f/g)`. Splitting only refines, so uniformity for the
/// earlier tracked polynomials survives the later splits.
pub fn coprime_refine(
    support: &UniPoly,
    tracked: &[UniPoly],
) -> Result<Vec<PlaceCluster>, PolyError> {
    if support.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let support = support.monic();
    if support.is_constant() {
        return Ok(Vec::new());
    }
    debug_assert!(poly_gcd(&support, &support.derivative()).is_constant());

    let mut moduli = vec![support];
    for f in tracked {
        if f.is_zero() {
            continue;
        }
        let mut next = Vec::new();
        for h in moduli {
            next.extend(split_by_order(&h, f).into_iter().map(|(piece, _)| piece));
        }
        moduli = next;
    }

    let mut clusters: Vec<PlaceCluster> = moduli
        .into_iter()
        .map(|h| {
            let valuations = tracked
                .iter()
                .map(|f| Valuation::of_optional(f.multiplicity_of(&h)))
                .collect();
            PlaceCluster {
                point_count: h.degree().expect("non-constant modulus"),
                place: Place::Finite(h),
                valuations,
            }
        })
        .collect();
    // deterministic order: by degree, then coefficients as strings
    clusters.sort_by_key(|c| match &c.place {
        Place::Finite(h) => (
            h.degree().unwrap_or(0),
            h.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        ),
        Place::Infinity => (usize::MAX, Vec::new()),
    });
    Ok(clusters)
}

/// Pieces of the squarefree `h` by exact vanishing order of `f` (nonzero).
fn split_by_order(h: &UniPoly, f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let mut rest = h.monic();
    let mut cur = f.clone();
    let mut k = 0;
    while !rest.is_constant() {
        let g = poly_gcd(&rest, &cur);
        let piece = rest.exact_div(&g).expect("gcd divides").monic();
        if !piece.is_constant() {
            out.push((piece, k));
        }
        cur = cur.exact_div(&g).expect("g | cur");
        rest = g;
        k += 1;
    }
    out
}

/// The cluster at `t = ∞` for `y² = x(x² + a x + b)` under the weight-(4, 8)
/// homogenization `ã(s) = s⁴a(1/s)`, `b̃(s) = s⁸b(1/s)`, `c̃ = ã² − 4b̃`.
///
/// Valuations are reported in the order `[v_a, v_b, v_c, v_Δ]`.
pub fn infinity_valuations(a: &UniPoly, b: &UniPoly) -> Result<PlaceCluster, PolyError> {
    check_bound("a", a, 4)?;
    check_bound("b", b, 8)?;
    let at = a.reversed(4);
    let bt = b.reversed(8);
    let ct = &(&at * &at) - &bt.scale(&super::rat_int(4));
    let va = Valuation::of_optional(at.ord_at_zero());
    let vb = Valuation::of_optional(bt.ord_at_zero());
    let vc = Valuation::of_optional(ct.ord_at_zero());
    Ok(PlaceCluster {
        place: Place::Infinity,
        point_count: 1,
        valuations: vec![va, vb, vc, Valuation::delta(vb, vc)],
    })
}

pub(crate) fn check_bound(name: &'static str, f: &UniPoly, bound: usize) -> Result<(), PolyError> {
    match f.degree() {
        Some(d) if d > bound => Err(PolyError::DegreeBoundViolated { name, degree: d, bound }),
        _ => Ok(()),
    }
}
