//! Finite search over singular-fiber configurations of Picard number 17
//! whose transcendental lattice could be `M_d = U ⊕ U ⊕ ⟨−2d⟩`.
//!
//! Every check is a necessary condition: the search reports survivors, it
//! does not claim they are realized by surfaces.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kodaira::{fiber_invariants, table_fibers, Configuration, FiberType, TorsionGroup};
use crate::lattice::has_element_of_order;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("d = {0} is not admissible")]
    NotAdmissible(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConstraints {
    pub picard: u64,
    pub mw_rank: u64,
    pub sum_m_minus_1: u64,
    pub euler: u64,
    pub fixed_points: u64,
    pub torsion_options_x: Vec<u64>,
    pub torsion_options_y: Vec<u64>,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            picard: 17,
            mw_rank: 0,
            sum_m_minus_1: 15,
            euler: 24,
            fixed_points: 8,
            torsion_options_x: vec![2, 4],
            torsion_options_y: vec![2, 4],
        }
    }
}

impl SearchConstraints {
    pub fn with_mw_rank(mw_rank: u64) -> Self {
        let mut c = Self::default();
        c.mw_rank = mw_rank;
        c.sum_m_minus_1 = c.picard.saturating_sub(2 + mw_rank);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CandidateWitness {
    pub d: u64,
    pub x_config: Configuration,
    pub y_config: Configuration,
    pub torsion_x: String,
    pub torsion_y: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub admissible: Vec<u64>,
    pub witnesses: BTreeMap<u64, Vec<CandidateWitness>>,
    pub configurations_examined: usize,
    /// Configurations that would pass every other test with torsion of order 8.
    pub order_eight_survivors: usize,
    pub caveats: BTreeMap<u64, String>,
    pub mw_rank: u64,
}

impl SearchResult {
    /// Distinct X configurations among the witnesses for `d`.
    pub fn configurations(&self, d: u64) -> Vec<&Configuration> {
        let mut v: Vec<&Configuration> =
            self.witnesses.get(&d).into_iter().flatten().map(|w| &w.x_config).collect();
        v.dedup();
        v
    }
}

pub const D15_CAVEAT: &str = "Cited, not computed: this configuration does not realize K3 surfaces with T_X ≅ M₁₅. \
The search reports survivors of necessary conditions only.";

fn m_minus_1(f: FiberType) -> u64 {
    fiber_invariants(f).unwrap().m as u64 - 1
}

fn n_fixed(f: FiberType) -> u64 {
    fiber_invariants(f).unwrap().n_fixed as u64
}

/// Fibers that fit in a configuration of Picard number 17: filtered from the
/// full table by `m − 1 ≤ 15` and `n_fixed ≤ 8`.
pub fn allowed_fiber_alphabet() -> Vec<FiberType> {
    table_fibers()
        .into_iter()
        .filter(|&f| m_minus_1(f) <= 15 && n_fixed(f) <= 8)
        .collect()
}

/// Every multiset over the alphabet with the prescribed `Σ(m−1)`, fixed
/// point count and Euler number. `I₁` fibers are filled in last, since they
/// contribute nothing to `Σ(m−1)`.
pub fn enumerate_configurations(c: &SearchConstraints) -> Vec<Configuration> {
    let i1 = FiberType::I { n: 1, action: crate::kodaira::Action::I };
    let alphabet: Vec<FiberType> = allowed_fiber_alphabet().into_iter().filter(|&f| f != i1).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    grow(&alphabet, 0, c.sum_m_minus_1, c.fixed_points, &mut stack, &mut |chosen: &[FiberType]| {
        let fixed: u64 = chosen.iter().map(|&f| n_fixed(f)).sum();
        let ord: u64 = chosen.iter().map(|&f| fiber_invariants(f).unwrap().ord_delta as u64).sum();
        let k = c.fixed_points - fixed;
        if ord + k != c.euler {
            return;
        }
        let mut cfg = Configuration::from_counts(chosen.iter().map(|&f| (f, 1)));
        cfg.add(i1, k as u32);
        out.push(cfg);
    });
    out.sort();
    out.dedup();
    out
}

fn grow(
    alphabet: &[FiberType],
    start: usize,
    budget_m: u64,
    budget_fixed: u64,
    stack: &mut Vec<FiberType>,
    emit: &mut impl FnMut(&[FiberType]),
) {
    if budget_m == 0 {
        emit(stack);
        return;
    }
    for i in start..alphabet.len() {
        let f = alphabet[i];
        let (dm, df) = (m_minus_1(f), n_fixed(f));
        if dm == 0 || dm > budget_m || df > budget_fixed {
            continue;
        }
        stack.push(f);
        grow(alphabet, i, budget_m - dm, budget_fixed - df, stack, emit);
        stack.pop();
    }
}

/// Orders of the cyclic summands of `⊕ L_ν*/L_ν` over the fibers.
pub fn trivial_discriminant_orders(cfg: &Configuration) -> Vec<u64> {
    let mut v = Vec::new();
    for (f, k) in cfg.iter() {
        let parts: &[u64] = match f {
            FiberType::I { n, .. } => &[n as u64][..],
            FiberType::IStar { n, .. } if n % 2 == 0 => &[2, 2],
            FiberType::IStar { .. } => &[4],
            FiberType::III | FiberType::IIIStar => &[2],
            FiberType::Regular => &[],
        };
        for _ in 0..k {
            v.extend(parts.iter().copied().filter(|&x| x > 1));
        }
    }
    v
}

/// Prime powers `p^e` exactly dividing `n`.
pub fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn torsion_types(order: u64) -> Vec<TorsionGroup> {
    match order {
        2 => vec![TorsionGroup::Z2],
        4 => vec![TorsionGroup::Z2xZ2, TorsionGroup::Z4],
        _ => Vec::new(),
    }
}

/// Torsion of order 8 specializes injectively only into multiplicative fibers
/// (additive fibers have component groups of order at most 4).
fn admits_order_eight(cfg: &Configuration) -> bool {
    cfg.iter().all(|(f, _)| matches!(f, FiberType::I { .. }))
}

/// Component group of a fiber as cyclic factors, with the height
/// correction of each element.
fn component_group_data(f: FiberType) -> (Vec<u64>, Box<dyn Fn(&[u64]) -> Ratio<i64>>) {
    match f {
        FiberType::I { n, .. } => {
            let n = n as i64;
            (vec![n as u64], Box::new(move |e: &[u64]| {
                let i = e[0] as i64;
                Ratio::new(i * (n - i), n)
            }))
        }
        FiberType::IStar { n, .. } => {
            let far = Ratio::new(4 + n as i64, 4);
            if n % 2 == 0 {
                // (1,0) is the near simple component, (0,1) and (1,1) the far ones
                (vec![2, 2], Box::new(move |e: &[u64]| match (e[0], e[1]) {
                    (0, 0) => Ratio::from_integer(0),
                    (1, 0) => Ratio::from_integer(1),
                    _ => far,
                }))
            } else {
                (vec![4], Box::new(move |e: &[u64]| match e[0] {
                    0 => Ratio::from_integer(0),
                    2 => Ratio::from_integer(1),
                    _ => far,
                }))
            }
        }
        FiberType::III => (vec![2], Box::new(|e: &[u64]| Ratio::new(e[0] as i64, 2))),
        FiberType::IIIStar => (vec![2], Box::new(|e: &[u64]| Ratio::new(3 * e[0] as i64, 2))),
        FiberType::Regular => (Vec::new(), Box::new(|_: &[u64]| Ratio::from_integer(0))),
    }
}

/// Can the abelian group `⊕ ℤ/g_i` be a torsion subgroup of Mordell–Weil on
/// a K3 with these fibers? Each nonzero torsion section is disjoint from
/// the zero section and has height `4 − Σ contr_ν = 0`, so we look for a
/// homomorphism into `⊕ A_ν` under which every nonzero element has total
/// correction exactly 4.
pub fn height_zero_embedding(cfg: &Configuration, group: &[u64]) -> bool {
    let elements: Vec<Vec<u64>> = group
        .iter()
        .fold(vec![Vec::new()], |acc, &g| {
            acc.into_iter()
                .flat_map(|v| (0..g).map(move |k| [v.clone(), vec![k]].concat()))
                .collect()
        })
        .into_iter()
        .filter(|v| v.iter().any(|&k| k != 0))
        .collect();
    let fibers: Vec<FiberType> = cfg
        .iter()
        .flat_map(|(f, k)| std::iter::repeat_n(f, k as usize))
        .filter(|f| !matches!(f, FiberType::I { n: 1, .. }))
        .collect();
    let target = Ratio::from_integer(4);
    // slack[i] = largest correction the fibers from i on can still add
    let mut slack = vec![Ratio::from_integer(0); fibers.len() + 1];
    for i in (0..fibers.len()).rev() {
        slack[i] = slack[i + 1] + max_correction(fibers[i]);
    }
    let mut sums = vec![Ratio::from_integer(0); elements.len()];
    embed(&fibers, &slack, group, &elements, &target, &mut sums)
}

fn max_correction(f: FiberType) -> Ratio<i64> {
    match f {
        FiberType::I { n, .. } => {
            let n = n as i64;
            Ratio::new((n / 2) * (n - n / 2), n)
        }
        FiberType::IStar { n, .. } => Ratio::new(4 + n as i64, 4),
        FiberType::III => Ratio::new(1, 2),
        FiberType::IIIStar => Ratio::new(3, 2),
        FiberType::Regular => Ratio::from_integer(0),
    }
}

fn embed(
    fibers: &[FiberType],
    slack: &[Ratio<i64>],
    group: &[u64],
    elements: &[Vec<u64>],
    target: &Ratio<i64>,
    sums: &mut [Ratio<i64>],
) -> bool {
    if sums.iter().any(|s| s + &slack[0] < *target) {
        return false;
    }
    let Some((&f, rest)) = fibers.split_first() else {
        return sums.iter().all(|s| s == target);
    };
    let (factors, contr) = component_group_data(f);
    let all: Vec<Vec<u64>> = factors.iter().fold(vec![Vec::new()], |acc, &g| {
        acc.into_iter()
            .flat_map(|v| (0..g).map(move |k| [v.clone(), vec![k]].concat()))
            .collect()
    });
    let order_of = |e: &[u64]| -> u64 {
        e.iter()
            .zip(&factors)
            .map(|(&x, &n)| n / num_integer::gcd(x, n))
            .fold(1, num_integer::lcm)
    };
    // images of the generators, each of order dividing the generator's
    let mut choice: Vec<usize> = vec![0; group.len()];
    loop {
        let ok = choice.iter().zip(group).all(|(&c, &g)| g % order_of(&all[c]) == 0);
        if ok {
            let saved = sums.to_vec();
            let mut feasible = true;
            for (s, el) in sums.iter_mut().zip(elements) {
                let img: Vec<u64> = (0..factors.len())
                    .map(|j| {
                        el.iter().zip(&choice).map(|(&k, &c)| k * all[c][j]).sum::<u64>() % factors[j]
                    })
                    .collect();
                *s += contr(&img);
                if *s > *target {
                    feasible = false;
                    break;
                }
            }
            if feasible && embed(rest, &slack[1..], group, elements, target, sums) {
                return true;
            }
            sums.copy_from_slice(&saved);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return false;
            }
            choice[i] += 1;
            if choice[i] < all.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn order_eight_heights(cfg: &Configuration) -> bool {
    height_zero_embedding(cfg, &[8]) || height_zero_embedding(cfg, &[2, 4])
}

struct Checked {
    witnesses: Vec<CandidateWitness>,
    order_eight: bool,
}

fn check_configuration(x: &Configuration, c: &SearchConstraints) -> Checked {
    let y = x.quotient();
    let mut witnesses = Vec::new();
    let mut order_eight = false;
    if y.sum_m_minus_1() != c.sum_m_minus_1 || y.euler() != c.euler || y.fixed_points() != c.fixed_points {
        return Checked { witnesses, order_eight };
    }
    let px = x.prod_m1();
    let py = y.prod_m1();
    let gx = trivial_discriminant_orders(x);
    let gy = trivial_discriminant_orders(&y);
    let passes = |tx: u64, ty: u64| -> Option<u64> {
        if px % (tx * tx) != 0 || py % (ty * ty) != 0 {
            return None;
        }
        let dx = px / (tx * tx);
        let dy = py / (ty * ty);
        if dx % 2 != 0 || dx == 0 {
            return None;
        }
        let d = dx / 2;
        if dy != 64 * d {
            return None;
        }
        // |X_tor| = 2^ε |Y_tor| with ε ∈ {−1, 0, 1}
        if !(tx == ty || tx == 2 * ty || ty == 2 * tx) {
            return None;
        }
        if !prime_power_parts(2 * d).iter().all(|&q| has_element_of_order(&gx, q)) {
            return None;
        }
        if !prime_power_parts(4 * d).iter().all(|&q| has_element_of_order(&gy, q)) {
            return None;
        }
        // follows from the two determinant equations and the torsion ratio
        assert!(8 * px <= py && py <= 128 * px, "product ratio out of range for {x}");
        Some(d)
    };
    for &tx in &c.torsion_options_x {
        for &ty in &c.torsion_options_y {
            let Some(d) = passes(tx, ty) else { continue };
            for gx_t in torsion_types(tx).into_iter().filter(|&g| x.admits_torsion(g)) {
                for gy_t in torsion_types(ty).into_iter().filter(|&g| y.admits_torsion(g)) {
                    witnesses.push(CandidateWitness {
                        d,
                        x_config: x.clone(),
                        y_config: y.clone(),
                        torsion_x: gx_t.to_string(),
                        torsion_y: gy_t.to_string(),
                    });
                }
            }
        }
    }
    if admits_order_eight(x) || admits_order_eight(&y) {
        for (tx, ty) in [(8, 4), (8, 8), (4, 8), (2, 8), (8, 2)] {
            if passes(tx, ty).is_none() {
                continue;
            }
            let x8 = tx != 8 || (admits_order_eight(x) && order_eight_heights(x));
            let y8 = ty != 8 || (admits_order_eight(&y) && order_eight_heights(&y));
            if x8 && y8 {
                order_eight = true;
            }
        }
    }
    Checked { witnesses, order_eight }
}

pub fn admissible_d_search(c: &SearchConstraints) -> SearchResult {
    let configs = enumerate_configurations(c);
    let checked: Vec<Checked> = configs.par_iter().map(|x| check_configuration(x, c)).collect();
    let mut witnesses: BTreeMap<u64, Vec<CandidateWitness>> = BTreeMap::new();
    let mut order_eight_survivors = 0;
    for ch in checked {
        if ch.order_eight {
            order_eight_survivors += 1;
        }
        for w in ch.witnesses {
            witnesses.entry(w.d).or_default().push(w);
        }
    }
    for v in witnesses.values_mut() {
        v.sort();
        v.dedup();
    }
    let admissible: Vec<u64> = witnesses.keys().copied().collect();
    let mut caveats = BTreeMap::new();
    if witnesses.contains_key(&15) {
        caveats.insert(15, D15_CAVEAT.to_string());
    }
    SearchResult {
        admissible,
        witnesses,
        configurations_examined: configs.len(),
        order_eight_survivors,
        caveats,
        mw_rank: c.mw_rank,
    }
}

/// How one fiber arises from the generic `8 I₂ (b = 0) + 8 I₁ (c = 0)` on X
/// (dually `8 I₁ + 8 I₂` on Y): it absorbs `ord b` of the former and `ord c`
/// of the latter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Confluence {
    pub fiber: String,
    pub count: u32,
    pub from_b_zeros: u32,
    pub from_c_zeros: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationEntry {
    pub x_config: Configuration,
    pub y_config: Configuration,
    pub x: Vec<Confluence>,
    pub y: Vec<Confluence>,
    pub b_zeros_used: u64,
    pub c_zeros_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationReport {
    pub d: u64,
    pub entries: Vec<DegenerationEntry>,
    pub caveat: Option<String>,
}

fn confluences(cfg: &Configuration, swap: bool) -> Vec<Confluence> {
    cfg.iter()
        .map(|(f, count)| {
            let (vb, vc) = f.canonical_valuations();
            let (b, c) = if swap { (vc, vb) } else { (vb, vc) };
            Confluence { fiber: f.to_string(), count, from_b_zeros: b, from_c_zeros: c }
        })
        .collect()
}

pub fn degeneration_report(result: &SearchResult, d: u64) -> Result<DegenerationReport, TheoremError> {
    let configs = result.configurations(d);
    if configs.is_empty() {
        return Err(TheoremError::NotAdmissible(d));
    }
    let entries = configs
        .into_iter()
        .map(|x| {
            let y = x.quotient();
            let (b_zeros_used, c_zeros_used) = x.valuation_totals();
            DegenerationEntry {
                x: confluences(x, false),
                // on Y the roles of b and c are exchanged
                y: confluences(&y, true),
                x_config: x.clone(),
                y_config: y,
                b_zeros_used,
                c_zeros_used,
            }
        })
        .collect();
    Ok(DegenerationReport { d, entries, caveat: result.caveats.get(&d).cloned() })
}

impl std::fmt::Display for DegenerationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "d = {}", self.d)?;
        for e in &self.entries {
            writeln!(f, "  X: 8I2 + 8I1 --> {}", e.x_config)?;
            for c in &e.x {
                writeln!(f, "     {}x {} <= {} I2 + {} I1", c.count, c.fiber, c.from_b_zeros, c.from_c_zeros)?;
            }
            writeln!(f, "  Y: 8I1 + 8I2 --> {}", e.y_config)?;
            for c in &e.y {
                writeln!(f, "     {}x {} <= {} I1 + {} I2", c.count, c.fiber, c.from_b_zeros, c.from_c_zeros)?;
            }
        }
        if let Some(c) = &self.caveat {
            writeln!(f, "  note: {c}")?;
        }
        Ok(())
    }
}
