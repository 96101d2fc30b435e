//! Kodaira fibers of `y² = x(x² + a x + b)` and the action of translation by
//! the 2-torsion section on them.
//!
//! A fiber is read off from `(ord b, ord c)` with `c = a² − 4b`. Every
//! invariant here (component counts, fixed points of the involution, the
//! fiber on the quotient surface) is a table lookup on [`FiberType`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::Valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("valuations (ord b, ord c) = ({v_b}, {v_c}) match no fiber with a 2-torsion section")]
    NotInTable { v_b: u32, v_c: u32 },
    #[error("model is not minimal: ord a = {v_a}, ord b = {v_b}")]
    NonMinimalModel { v_a: Valuation, v_b: u32 },
    #[error("regular fiber has no invariants")]
    RegularFiber,
    #[error("invalid fiber type {0:?}")]
    Invalid(String),
}

/// How translation by σ acts on a fiber: (i) σ meets the identity component
/// (or the near simple component of an `I*`), (ii) σ meets the far component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    I,
    II,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::I => "i",
            Action::II => "ii",
        })
    }
}

/// A Kodaira fiber that can occur on an elliptic surface with a 2-torsion
/// section. Build through [`FiberType::mult`] / [`FiberType::star`] to keep
/// the parity rules for type (ii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiberType {
    Regular,
    I { n: u32, action: Action },
    IStar { n: u32, action: Action },
    III,
    IIIStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootLattice {
    A(u32),
    D(u32),
    E7,
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::A(n) => write!(f, "A{n}"),
            RootLattice::D(n) => write!(f, "D{n}"),
            RootLattice::E7 => write!(f, "E7"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberInvariants {
    /// Lattice spanned by the components missing the zero section; `None`
    /// for `I₁`.
    pub root_lattice: Option<RootLattice>,
    pub ord_delta: u32,
    /// Number of components.
    pub m: u32,
    /// Number of simple components.
    pub m1: u32,
    /// Fixed points of the involution on the fiber.
    pub n_fixed: u32,
}

/// Torsion part of the group of simple points of a singular fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentGroup {
    /// `ℂ* × ℤ/n`
    Multiplicative(u32),
    /// `ℂ × (ℤ/2)²`
    AdditiveKlein,
    /// `ℂ × ℤ/4`
    AdditiveCyclic4,
    /// `ℂ × ℤ/2`
    AdditiveCyclic2,
}

/// Mordell-Weil torsion candidates containing the 2-torsion section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TorsionGroup {
    Z2,
    Z2xZ2,
    Z4,
}

impl TorsionGroup {
    pub fn order(self) -> u64 {
        match self {
            TorsionGroup::Z2 => 2,
            TorsionGroup::Z2xZ2 | TorsionGroup::Z4 => 4,
        }
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionGroup::Z2 => "Z/2",
            TorsionGroup::Z2xZ2 => "(Z/2)^2",
            TorsionGroup::Z4 => "Z/4",
        })
    }
}

impl ComponentGroup {
    /// Whether torsion sections of type `g` can specialize injectively into
    /// this fiber. `ℂ*` contains every root of unity; `ℂ` contains none.
    pub fn admits(self, g: TorsionGroup) -> bool {
        use ComponentGroup::*;
        match (self, g) {
            (_, TorsionGroup::Z2) => true,
            (Multiplicative(n), TorsionGroup::Z2xZ2) => n % 2 == 0,
            (Multiplicative(_), TorsionGroup::Z4) => true,
            (AdditiveKlein, TorsionGroup::Z2xZ2) => true,
            (AdditiveCyclic4, TorsionGroup::Z4) => true,
            _ => false,
        }
    }
}

impl FiberType {
    /// `I_n` with the given action; type (ii) needs `n` even.
    pub fn mult(n: u32, action: Action) -> Result<Self, FiberError> {
        if n == 0 || (action == Action::II && n % 2 == 1) {
            return Err(FiberError::Invalid(format!("I{n}({action})")));
        }
        Ok(FiberType::I { n, action })
    }

    /// `I*_n`. For `n = 0` the two actions agree and the tag is normalized
    /// to (i); odd `n` only has (i).
    pub fn star(n: u32, action: Action) -> Result<Self, FiberError> {
        if action == Action::II && n % 2 == 1 {
            return Err(FiberError::Invalid(format!("I*{n}({action})")));
        }
        let action = if n == 0 { Action::I } else { action };
        Ok(FiberType::IStar { n, action })
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, FiberType::Regular)
    }

    pub fn action(&self) -> Option<Action> {
        match self {
            FiberType::I { action, .. } | FiberType::IStar { action, .. } => Some(*action),
            _ => None,
        }
    }

    /// Kodaira symbol without the action tag, e.g. `I10`, `I*4`, `III`.
    pub fn symbol(&self) -> String {
        match self {
            FiberType::Regular => "reg.".into(),
            FiberType::I { n, .. } => format!("I{n}"),
            FiberType::IStar { n, .. } => format!("I*{n}"),
            FiberType::III => "III".into(),
            FiberType::IIIStar => "III*".into(),
        }
    }

    pub fn invariants(&self) -> Result<FiberInvariants, FiberError> {
        fiber_invariants(*self)
    }

    pub fn component_group(&self) -> Option<ComponentGroup> {
        match *self {
            FiberType::Regular => None,
            FiberType::I { n, .. } => Some(ComponentGroup::Multiplicative(n)),
            FiberType::IStar { n, .. } if n % 2 == 0 => Some(ComponentGroup::AdditiveKlein),
            FiberType::IStar { .. } => Some(ComponentGroup::AdditiveCyclic4),
            FiberType::III | FiberType::IIIStar => Some(ComponentGroup::AdditiveCyclic2),
        }
    }

    /// `(ord b, ord c)` from the table rows.
    pub fn canonical_valuations(&self) -> (u32, u32) {
        match *self {
            FiberType::Regular => (0, 0),
            FiberType::I { n, action: Action::I } => (0, n),
            FiberType::I { n, action: Action::II } => (n / 2, 0),
            FiberType::IStar { n, action: Action::I } => (2, n + 2),
            FiberType::IStar { n, action: Action::II } => (n / 2 + 2, 2),
            FiberType::III => (1, 1),
            FiberType::IIIStar => (3, 3),
        }
    }
}

/// Classify a fiber from the orders of `a`, `b` and `c = a² − 4b`.
pub fn classify_from_valuations(v_a: Valuation, v_b: u32, v_c: u32) -> Result<FiberType, FiberError> {
    if v_a.at_least(2) && v_b >= 4 {
        return Err(FiberError::NonMinimalModel { v_a, v_b });
    }
    let fiber = match (v_b, v_c) {
        (0, 0) => FiberType::Regular,
        (0, n) => FiberType::I { n, action: Action::I },
        (m, 0) => FiberType::I { n: 2 * m, action: Action::II },
        (1, 1) => FiberType::III,
        (3, 3) => FiberType::IIIStar,
        (2, c) if c >= 2 => FiberType::star(c - 2, Action::I)?,
        (b, 2) if b >= 3 => FiberType::IStar { n: 2 * (b - 2), action: Action::II },
        _ => return Err(FiberError::NotInTable { v_b, v_c }),
    };
    Ok(fiber)
}

pub fn fiber_invariants(f: FiberType) -> Result<FiberInvariants, FiberError> {
    let inv = match f {
        FiberType::Regular => return Err(FiberError::RegularFiber),
        FiberType::I { n, action } => FiberInvariants {
            root_lattice: (n > 1).then_some(RootLattice::A(n - 1)),
            ord_delta: n,
            m: n,
            m1: n,
            n_fixed: if action == Action::I { n } else { 0 },
        },
        FiberType::IStar { n, action } => FiberInvariants {
            root_lattice: Some(RootLattice::D(n + 4)),
            ord_delta: n + 6,
            m: n + 5,
            m1: 4,
            n_fixed: if action == Action::I { n + 2 } else { 2 },
        },
        FiberType::III => FiberInvariants {
            root_lattice: Some(RootLattice::A(1)),
            ord_delta: 3,
            m: 2,
            m1: 2,
            n_fixed: 1,
        },
        FiberType::IIIStar => FiberInvariants {
            root_lattice: Some(RootLattice::E7),
            ord_delta: 9,
            m: 8,
            m1: 2,
            n_fixed: 3,
        },
    };
    Ok(inv)
}

/// Fiber of the quotient surface over the same place.
///
/// The Kodaira symbol comes from the table row; the action tag is recomputed
/// by classifying the swapped valuations `(ord b_Y, ord c_Y) = (ord c, ord b)`.
pub fn quotient_fiber(f: FiberType) -> FiberType {
    let symbol = match f {
        FiberType::Regular => return FiberType::Regular,
        FiberType::I { n, action: Action::I } => FiberType::I { n: 2 * n, action: Action::II },
        FiberType::I { n, action: Action::II } => FiberType::I { n: n / 2, action: Action::I },
        FiberType::IStar { n, action: Action::I } if n % 2 == 0 => {
            FiberType::IStar { n: 2 * n, action: Action::II }
        }
        FiberType::IStar { n, action: Action::II } => FiberType::IStar { n: n / 2, action: Action::I },
        FiberType::IStar { n, .. } => FiberType::IStar { n: 2 * n, action: Action::II },
        FiberType::III => FiberType::III,
        FiberType::IIIStar => FiberType::IIIStar,
    };
    let (vb, vc) = f.canonical_valuations();
    let recomputed = classify_from_valuations(Valuation::Finite(0), vc, vb)
        .expect("swapped table valuations classify");
    assert_eq!(recomputed.symbol(), symbol.symbol(), "quotient table row disagrees with valuations");
    recomputed
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::Regular => f.write_str("reg"),
            FiberType::I { n, action } => write!(f, "I{n}({action})"),
            FiberType::IStar { n, action } => write!(f, "I*{n}({action})"),
            FiberType::III => f.write_str("III"),
            FiberType::IIIStar => f.write_str("III*"),
        }
    }
}

impl FromStr for FiberType {
    type Err = FiberError;

    fn from_str(s: &str) -> Result<Self, FiberError> {
        let bad = || FiberError::Invalid(s.to_string());
        match s {
            "reg" => return Ok(FiberType::Regular),
            "III" => return Ok(FiberType::III),
            "III*" => return Ok(FiberType::IIIStar),
            _ => {}
        }
        let (head, tag) = s.strip_suffix(')').and_then(|r| r.split_once('(')).ok_or_else(bad)?;
        let action = match tag {
            "i" => Action::I,
            "ii" => Action::II,
            _ => return Err(bad()),
        };
        if let Some(n) = head.strip_prefix("I*") {
            let n = n.parse().map_err(|_| bad())?;
            let f = FiberType::star(n, action)?;
            // I*0 only has the (i) spelling
            if f.action() != Some(action) {
                return Err(bad());
            }
            Ok(f)
        } else if let Some(n) = head.strip_prefix('I') {
            FiberType::mult(n.parse().map_err(|_| bad())?, action)
        } else {
            Err(bad())
        }
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiberType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiset of singular fibers. Regular fibers are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    fibers: BTreeMap<FiberType, u32>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (FiberType, u32)>>(items: I) -> Self {
        let mut c = Self::new();
        for (f, k) in items {
            c.add(f, k);
        }
        c
    }

    pub fn add(&mut self, f: FiberType, count: u32) {
        if f.is_regular() || count == 0 {
            return;
        }
        *self.fibers.entry(f).or_insert(0) += count;
    }

    pub fn count(&self, f: &FiberType) -> u32 {
        self.fibers.get(f).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (FiberType, u32)> + '_ {
        self.fibers.iter().map(|(f, &k)| (*f, k))
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    fn sum_by(&self, g: impl Fn(&FiberInvariants) -> u64) -> u64 {
        self.iter()
            .map(|(f, k)| g(&fiber_invariants(f).expect("no regular fibers stored")) * k as u64)
            .sum()
    }

    /// Σ ord Δ, which is 24 for an elliptic K3.
    pub fn euler(&self) -> u64 {
        self.sum_by(|i| i.ord_delta as u64)
    }

    pub fn fixed_points(&self) -> u64 {
        self.sum_by(|i| i.n_fixed as u64)
    }

    pub fn sum_m_minus_1(&self) -> u64 {
        self.sum_by(|i| i.m as u64 - 1)
    }

    pub fn prod_m1(&self) -> u64 {
        self.iter()
            .map(|(f, k)| (fiber_invariants(f).unwrap().m1 as u64).pow(k))
            .product()
    }

    /// Σ ord b and Σ ord c over the fibers.
    pub fn valuation_totals(&self) -> (u64, u64) {
        self.iter().fold((0, 0), |(sb, sc), (f, k)| {
            let (vb, vc) = f.canonical_valuations();
            (sb + vb as u64 * k as u64, sc + vc as u64 * k as u64)
        })
    }

    /// Entrywise [`quotient_fiber`].
    pub fn quotient(&self) -> Configuration {
        Configuration::from_counts(self.iter().map(|(f, k)| (quotient_fiber(f), k)))
    }

    /// Whether torsion of type `g` specializes injectively into every fiber.
    pub fn admits_torsion(&self, g: TorsionGroup) -> bool {
        self.iter()
            .all(|(f, _)| f.component_group().is_none_or(|cg| cg.admits(g)))
    }

    /// Sorted fiber strings with multiplicities, e.g. `["6I1(i)", "I2(i)"]`.
    pub fn canonical_strings(&self) -> Vec<String> {
        self.iter()
            .map(|(f, k)| if k == 1 { f.to_string() } else { format!("{k}{f}") })
            .collect()
    }

    /// Same as [`Self::canonical_strings`] without action tags.
    pub fn symbol_strings(&self) -> Vec<String> {
        let mut by_symbol: BTreeMap<FiberType, u32> = BTreeMap::new();
        for (f, k) in self.iter() {
            let key = match f {
                FiberType::I { n, .. } => FiberType::I { n, action: Action::I },
                FiberType::IStar { n, .. } => FiberType::IStar { n, action: Action::I },
                other => other,
            };
            *by_symbol.entry(key).or_insert(0) += k;
        }
        by_symbol
            .into_iter()
            .map(|(f, k)| if k == 1 { f.symbol() } else { format!("{k}{}", f.symbol()) })
            .collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("(none)");
        }
        f.write_str(&self.canonical_strings().join(" + "))
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.canonical_strings().serialize(s)
    }
}

/// Every fiber type in the table with `ord Δ ≤ 24`.
pub fn table_fibers() -> Vec<FiberType> {
    let mut out = Vec::new();
    for n in 1..=24 {
        out.push(FiberType::I { n, action: Action::I });
        if n % 2 == 0 {
            out.push(FiberType::I { n, action: Action::II });
        }
    }
    for n in 0..=18 {
        out.push(FiberType::star(n, Action::I).unwrap());
        if n % 2 == 0 && n > 0 {
            out.push(FiberType::IStar { n, action: Action::II });
        }
    }
    out.push(FiberType::III);
    out.push(FiberType::IIIStar);
    out
}
