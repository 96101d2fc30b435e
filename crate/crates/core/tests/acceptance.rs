//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nikulin_core::families::{build_family, gamma_divisor, random_surfaces, sample_cubic, FamilySpec};
use nikulin_core::kodaira::{fiber_invariants, table_fibers, Action, FiberType};
use nikulin_core::lattice::{
    discriminant_form, discriminant_group, has_element_of_order, standard_lattice, theta_divisor, IntLattice,
    LatticeKind,
};
use nikulin_core::poly::{rat, rat_int, Rational};
use nikulin_core::report::fiber_table;
use nikulin_core::surface::{
    apply_dual, apply_isogeny, classify_surface, find_rational_points, group_law, isogeny_identity_holds,
    quotient_configuration_crosscheck, quotient_surface, specialize, AffinePoint, SpecializedCurve, SurfaceReport,
    TwoTorsionSurface,
};
use nikulin_core::theorem::{admissible_d_search, allowed_fiber_alphabet, trivial_discriminant_orders, SearchConstraints};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn family_surfaces() -> Vec<(String, TwoTorsionSurface)> {
    let mut out = Vec::new();
    for d in 0..=8 {
        let x = build_family(&FamilySpec::xd(d)).unwrap();
        out.push((format!("Y_{d}"), quotient_surface(&x).unwrap()));
        out.push((format!("X_{d}"), x));
    }
    for n in [5, 7] {
        let x = build_family(&FamilySpec::x_prime(n)).unwrap();
        out.push((format!("Y'_{n}"), quotient_surface(&x).unwrap()));
        out.push((format!("X'_{n}"), x));
    }
    out
}

/// Random surfaces that classify without error.
fn classified_random(target: usize) -> (Vec<TwoTorsionSurface>, usize) {
    let mut kept = Vec::new();
    let mut drawn = 0;
    let mut seed = 2024;
    while kept.len() < target {
        for s in random_surfaces(seed, 100) {
            drawn += 1;
            if classify_surface(&s).is_ok() {
                kept.push(s);
            }
        }
        seed += 1;
    }
    (kept, drawn)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cols = fiber_table(&sample_cubic()).map_err(|e| e.to_string())?;
    let expect = |name: &str| -> (String, String, String) {
        let (fam, d) = name.split_once('_').unwrap();
        let d: u32 = d.parse().unwrap();
        let s = |x: &str| x.to_string();
        match (fam, d) {
            ("X", 0) => (s("reg."), s("6I1"), s("I*12")),
            ("X", 7) => (s("I14"), s("7I1"), s("III")),
            ("X", 8) => (s("I16"), s("8I1"), s("reg.")),
            ("X", d) => (format!("I{}", 2 * d), s("6I1"), format!("I*{}", 12 - 2 * d)),
            ("Y", 0) => (s("reg."), s("6I2"), s("I*6")),
            ("Y", 7) => (s("I7"), s("7I2"), s("III")),
            ("Y", 8) => (s("I8"), s("8I2"), s("reg.")),
            (_, d) => (format!("I{d}"), s("6I2"), format!("I*{}", 6 - d)),
        }
    };
    ensure(cols.len() == 18, "expected 18 columns")?;
    for c in &cols {
        let got = (c.at_zero.clone(), c.elsewhere.clone(), c.at_infinity.clone());
        ensure(got == expect(&c.surface), format!("{}: got {got:?}, expected {:?}", c.surface, expect(&c.surface)))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), format!("took {t:?}"))?;
    Ok(format!("54 cells of X_0..X_8, Y_0..Y_8 match for P = t^3 + t + 1 ({t:.2?})"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let fam = family_surfaces();
    let (random, drawn) = classified_random(200);
    let mut n = 0;
    for (name, s) in fam.iter().map(|(n, s)| (n.clone(), s)).chain(random.iter().map(|s| (format!("{s:?}"), s))) {
        let cfg = classify_surface(s).map_err(|e| format!("{name}: {e}"))?.configuration();
        ensure(cfg.fixed_points() == 8, format!("{name}: fixed points {}", cfg.fixed_points()))?;
        ensure(cfg.euler() == 24, format!("{name}: euler {}", cfg.euler()))?;
        n += 1;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!(
        "{} family + {} random surfaces ({} drawn) have 8 fixed points and Euler number 24 ({t:.2?})",
        fam.len(),
        n - fam.len(),
        drawn
    ))
}

fn criterion_3() -> Outcome {
    let fam = family_surfaces();
    let (random, _) = classified_random(200);
    let all: Vec<&TwoTorsionSurface> = fam.iter().map(|(_, s)| s).chain(&random).collect();
    for s in &all {
        let ok = quotient_configuration_crosscheck(s).map_err(|e| format!("{s:?}: {e}"))?;
        ensure(ok, format!("quotient mismatch on a = {}, b = {}", s.a(), s.b()))?;
    }
    Ok(format!("classified quotient equals the table image on {} surfaces", all.len()))
}

fn criterion_4() -> Outcome {
    let c = SpecializedCurve::new(rat_int(5), rat_int(4)).map_err(|e| e.to_string())?;
    let p = AffinePoint::ints(2, 6);
    let img = apply_isogeny(&c, &p).map_err(|e| e.to_string())?;
    ensure(img == AffinePoint::ints(9, 0), format!("phi(P) = {img}"))?;
    let back = apply_dual(&c.quotient(), &img).map_err(|e| e.to_string())?;
    ensure(back == AffinePoint::ints(0, 0), format!("dual(phi(P)) = {back}"))?;
    ensure(group_law(&c, &p, &p).unwrap() == back, "2P differs")?;
    let mut triples = 1;
    for d in 1..=8 {
        let s = build_family(&FamilySpec::xd(d)).unwrap();
        for t0 in -4i64..=4 {
            let Ok(curve) = specialize(&s, &rat_int(t0)) else { continue };
            for pt in find_rational_points(&curve, 30, 3) {
                ensure(isogeny_identity_holds(&curve, &pt).unwrap(), format!("X_{d}, t0 = {t0}, P = {pt}"))?;
                triples += 1;
            }
        }
    }
    ensure(triples >= 20, format!("only {triples} triples"))?;
    Ok(format!("dual(phi(P)) = 2P at {triples} (surface, t0, point) triples incl. (5,4), P = (2,6)"))
}

fn criterion_5() -> Outcome {
    let det = |s: &TwoTorsionSurface| SurfaceReport::build(s, 0).map(|r| r.det_ns).map_err(|e| e.to_string());
    for d in 0..=6i64 {
        let x = build_family(&FamilySpec::xd(d as u32)).unwrap();
        let want_x = if d == 0 { -1 } else { 2 * d };
        ensure(det(&x)? == Some(want_x), format!("X_{d}: {:?}", det(&x)?))?;
        let y = quotient_surface(&x).unwrap();
        let want_y = match d {
            0 => 16,
            d if d % 2 == 1 => 64 * d,
            d => 16 * d,
        };
        let got = det(&y)?.ok_or("no det")?;
        ensure(got.abs() == want_y, format!("Y_{d}: {got}"))?;
    }
    for (n, want) in [(5, 30), (7, 14)] {
        let x = build_family(&FamilySpec::x_prime(n)).unwrap();
        ensure(det(&x)? == Some(want), format!("X'_{n}: {:?}", det(&x)?))?;
    }
    Ok("det NS of X_0..X_6, Y_0..Y_6, X'_5, X'_7 with computed torsion".into())
}

fn criterion_6() -> Outcome {
    for m in 1..=8i64 {
        let th = theta_divisor(m as u32).map_err(|e| e.to_string())?;
        ensure(th.norm() == rat(-1, 1) + rat(1, 2 * m), format!("theta_{}: {}", 2 * m, th.norm()))?;
    }
    for d in 1..=6i64 {
        let g = gamma_divisor(&FamilySpec::xd(d as u32)).map_err(|e| e.to_string())?;
        ensure(g.norm() == rat(-2, 1) + rat(1, 2 * d), format!("Gamma(X_{d})^2 = {}", g.norm()))?;
        ensure(g.order_mod_trivial() == 2 * d as u64, format!("Gamma(X_{d}) order {}", g.order_mod_trivial()))?;
        ensure(g.order_mod_ns() == 2 * d as u64, format!("Gamma(X_{d}) order in NS {}", g.order_mod_ns()))?;
    }
    let cases: [(u32, Rational, u64); 2] = [(5, rat(-2, 1) - rat(7, 30), 30), (7, rat(-2, 1) + rat(1, 14), 14)];
    for (n, norm, order) in cases {
        let g = gamma_divisor(&FamilySpec::x_prime(n)).map_err(|e| e.to_string())?;
        ensure(g.norm() == norm, format!("Gamma(X'_{n})^2 = {}", g.norm()))?;
        ensure(g.order_mod_trivial() == order && g.order_mod_ns() == order, format!("Gamma(X'_{n}) order"))?;
    }
    Ok("theta_2..theta_16, Gamma(X_1..X_6), Gamma(X'_5), Gamma(X'_7) norms and orders".into())
}

/// Element orders of `L*/L` found by closing the images of the dual basis
/// under addition, with vectors kept as numerators over `|det|`.
fn brute_force_orders(g: &[Vec<i64>]) -> Vec<u64> {
    let l = IntLattice::new(g.to_vec()).unwrap();
    let det = l.det().to_i64().unwrap().abs();
    let inv = nikulin_core::lattice::snf::inverse_rational(&l.gram_big()).unwrap();
    let n = g.len();
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let x = &inv[i][j] * rat_int(det);
                    x.to_integer().to_i64().unwrap().rem_euclid(det)
                })
                .collect()
        })
        .collect();
    let zero = vec![0i64; n];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for gen in &gens {
            let w: Vec<i64> = v.iter().zip(gen).map(|(a, b)| (a + b) % det).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    let mut orders: Vec<u64> = seen
        .iter()
        .map(|v| {
            let gcd = v.iter().fold(det, |acc, &x| num_integer::gcd(acc, x));
            (det / gcd) as u64
        })
        .collect();
    orders.sort();
    orders
}

fn group_orders(factors: &[u64]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &f in factors {
        out = out
            .iter()
            .flat_map(|&o| (0..f).map(move |k| num_integer::lcm(o, f / num_integer::gcd(k, f))))
            .collect();
    }
    out.sort();
    out
}

fn symmetric(entries: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            g[i][j] = entries[k];
            g[j][i] = entries[k];
            k += 1;
        }
    }
    g
}

fn oracle_sweep() -> Result<usize, String> {
    let mut grams: Vec<Vec<Vec<i64>>> = Vec::new();
    for d in -50..=50 {
        grams.push(vec![vec![d]]);
    }
    let range = |n: usize, lo: i64, hi: i64| -> Vec<Vec<i64>> {
        let len = n * (n + 1) / 2;
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    };
    grams.extend(range(2, -4, 4).into_iter().map(|e| symmetric(&e, 2)));
    grams.extend(range(3, -2, 2).into_iter().map(|e| symmetric(&e, 3)));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3000 {
        let e: Vec<i64> = (0..10).map(|_| rng.gen_range(-3..=3)).collect();
        grams.push(symmetric(&e, 4));
    }
    let mut checked = 0;
    for g in grams {
        let Ok(l) = IntLattice::new(g.clone()) else { continue };
        let det = l.det().to_i64().unwrap().abs();
        if det == 0 || det > 50 {
            continue;
        }
        let factors = discriminant_group(&l).map_err(|e| e.to_string())?;
        ensure(group_orders(&factors) == brute_force_orders(&g), format!("mismatch on {g:?}"))?;
        checked += 1;
    }
    Ok(checked)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    for d in 1..=8u32 {
        let m2 = standard_lattice(LatticeKind::Md(d)).unwrap().rescale(2).unwrap();
        let f = discriminant_form(&m2).map_err(|e| e.to_string())?;
        let want = vec![2, 2, 2, 2, 4 * d as u64];
        ensure(f.invariant_factors() == want.as_slice(), format!("M_{d}(2): {:?}", f.invariant_factors()))?;
    }
    let m = IntLattice::new(vec![
        vec![0, 1, 0, 0, 0],
        vec![1, 0, 0, 0, 0],
        vec![0, 0, 2, 1, 0],
        vec![0, 0, 1, -2, 0],
        vec![0, 0, 0, 0, -6],
    ])
    .unwrap();
    let f = discriminant_form(&m).map_err(|e| e.to_string())?;
    ensure(f.invariant_factors() == [30], format!("group {:?}", f.invariant_factors()))?;
    let delta = vec![rat_int(0), rat_int(0), rat(2, 5), rat(1, 5), rat(1, 6)];
    let el = f.coordinates_of(&delta).ok_or("delta not in the dual")?;
    ensure(f.element_order(&el) == 30, "delta does not generate")?;
    ensure(f.q_value(&el) == rat(7, 30), format!("q(delta) = {}", f.q_value(&el)))?;
    let checked = oracle_sweep()?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!(
        "disc M_d(2) for d = 1..8, Z/30 with q = 7/30, SNF = brute force on {checked} lattices ({t:.2?})"
    ))
}

fn criterion_8() -> Outcome {
    let alpha = allowed_fiber_alphabet();
    let symbols: BTreeSet<String> = alpha.iter().map(|f| f.symbol()).collect();
    let mut listed: BTreeSet<String> = (1..=8).chain([10, 12, 14, 16]).map(|n| format!("I{n}")).collect();
    listed.extend((0..=6).chain([8, 10]).map(|n| format!("I*{n}")));
    listed.extend(["III".to_string(), "III*".to_string()]);
    ensure(symbols == listed, format!("symbols {symbols:?}"))?;
    for s in ["I10", "I12", "I14", "I16", "I*8", "I*10"] {
        ensure(
            alpha.iter().filter(|f| f.symbol() == s).all(|f| f.action() == Some(Action::II)),
            format!("{s} not restricted to type (ii)"),
        )?;
    }
    // everything excluded violates one of the two bounds
    for f in table_fibers() {
        let inv = fiber_invariants(f).unwrap();
        let fits = inv.m - 1 <= 15 && inv.n_fixed <= 8;
        ensure(fits == alpha.contains(&f), format!("{f} filtered inconsistently"))?;
    }
    ensure(!alpha.contains(&FiberType::I { n: 9, action: Action::I }), "I9 present")?;
    Ok(format!("{} fibers, {} symbols, type (ii) restrictions hold", alpha.len(), symbols.len()))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let r = admissible_d_search(&SearchConstraints::default());
    ensure(r.admissible == [1, 2, 3, 5, 7, 15], format!("admissible {:?}", r.admissible))?;
    let d15 = r.configurations(15);
    ensure(d15.len() == 1, format!("{} configurations for d = 15", d15.len()))?;
    let x: Vec<String> = d15[0].symbol_strings();
    ensure(x == ["6I1", "I2", "I6", "I10"], format!("X = {x:?}"))?;
    let y: Vec<String> = d15[0].quotient().symbol_strings();
    ensure(y == ["6I2", "I3", "I4", "I5"], format!("Y = {y:?}"))?;
    let caveat = r.caveats.get(&15).ok_or("no caveat for d = 15")?;
    ensure(caveat.contains("does not realize K3 surfaces with T_X ≅ M₁₅"), "caveat text")?;
    // d = 2 is realized by X_8 (I16 + 8I1); the X_2 quotient has det 2^4 d, not 2^6 d
    for (d, e) in [(1u64, 1u32), (2, 8), (3, 3), (5, 5)] {
        let cfg = classify_surface(&build_family(&FamilySpec::xd(e)).unwrap()).unwrap().configuration();
        ensure(r.configurations(d).contains(&&cfg), format!("X_{e} is not a witness for d = {d}"))?;
    }
    let x7 = classify_surface(&build_family(&FamilySpec::x_prime(7)).unwrap()).unwrap().configuration();
    ensure(r.configurations(7).contains(&&x7), "X'_7 is not a witness")?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("admissible d = {{1, 2, 3, 5, 7, 15}}, unique d = 15 configuration, caveat present ({t:.2?})"))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    for d in [2u32, 4, 6] {
        let m2 = standard_lattice(LatticeKind::Md(d)).unwrap().rescale(2).unwrap();
        let candidates = discriminant_form(&m2).map_err(|e| e.to_string())?.isotropic_reductions();
        let y = quotient_surface(&build_family(&FamilySpec::xd(d)).unwrap()).unwrap();
        let ly = trivial_discriminant_orders(&classify_surface(&y).unwrap().configuration());
        let mut expect_ly = vec![2u64; 8];
        expect_ly.push(d as u64);
        let (mut a, mut b) = (ly.clone(), expect_ly);
        a.sort();
        b.sort();
        ensure(a == b, format!("Y_{d} trivial group {ly:?}"))?;
        let compatible: BTreeSet<Vec<u64>> = candidates
            .iter()
            .map(|f| f.invariant_factors().to_vec())
            .filter(|g| {
                group_orders(g).iter().filter(|&&o| o > 1).all(|&o| {
                    nikulin_core::theorem::prime_power_parts(o).iter().all(|&q| has_element_of_order(&ly, q))
                })
            })
            .collect();
        let mut target = vec![2u64, 2, 2, 2];
        target.push(d as u64);
        ensure(
            compatible == BTreeSet::from([target]),
            format!("d = {d}: compatible {compatible:?} among {} candidates", candidates.len()),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!("only (Z/2)^4 x Z/d survives for d = 2, 4, 6 ({t:.2?})"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("family fiber table", criterion_1),
        ("fixed points and Euler number", criterion_2),
        ("quotient cross-check", criterion_3),
        ("isogeny identity", criterion_4),
        ("Neron-Severi determinants", criterion_5),
        ("Q-divisor values", criterion_6),
        ("discriminant forms", criterion_7),
        ("allowed fiber alphabet", criterion_8),
        ("admissible d search", criterion_9),
        ("overlattice elimination", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
