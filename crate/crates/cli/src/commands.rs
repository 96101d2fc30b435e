use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use nikulin_core::families::{build_family, is_generic, random_surfaces, FamilySpec};
use nikulin_core::lattice::{discriminant_form, discriminant_group, IntLattice};
use nikulin_core::poly::{parse_rational, UniPoly};
use nikulin_core::report::{
    degeneration_text, paper_tables as tables, render_table, search_result_text, surface_report_text,
};
use nikulin_core::surface::{
    apply_dual, apply_isogeny, find_rational_points, group_law, quotient_configuration_crosscheck,
    quotient_surface, specialize, AffinePoint, SurfaceReport, TwoTorsionSurface,
};
use nikulin_core::theorem::{admissible_d_search, degeneration_report, SearchConstraints};
use nikulin_core::NikulinError;

use crate::FamilyCommand;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input the library rejected on mathematical grounds (exit 2).
    #[error("{message}")]
    Domain { kind: String, message: String, place: Option<String> },
    /// Unreadable or malformed input (exit 1).
    #[error("{0}")]
    Input(String),
}

impl<E: Into<NikulinError>> From<E> for CliError {
    fn from(e: E) -> Self {
        let e = e.into();
        CliError::Domain { kind: e.kind().into(), message: e.to_string(), place: e.place() }
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<(String, Value), CliError> {
    let text = read(path)?;
    let v = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((text, v))
}

fn read_surface(path: &Path) -> Result<TwoTorsionSurface, CliError> {
    let (text, _) = read_json(path)?;
    Ok(TwoTorsionSurface::from_json(&text)?)
}

fn parse_coeffs(s: &str) -> Result<UniPoly, CliError> {
    let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(UniPoly::new(coeffs))
}

fn surface_json(s: &TwoTorsionSurface) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn report_output(r: SurfaceReport) -> Output {
    let text = surface_report_text(&r);
    Output { json: serde_json::to_value(&r).expect("serializable"), text }
}

pub fn classify(input: &Path, mw_rank: u32) -> Result<Output, CliError> {
    let s = read_surface(input)?;
    Ok(report_output(SurfaceReport::build(&s, mw_rank)?))
}

pub fn quotient(input: &Path, mw_rank: u32) -> Result<Output, CliError> {
    let s = read_surface(input)?;
    let y = quotient_surface(&s)?;
    let crosscheck = quotient_configuration_crosscheck(&s)?;
    let rx = SurfaceReport::build(&s, mw_rank)?;
    let ry = SurfaceReport::build(&y, mw_rank)?;
    let text = format!(
        "quotient: a = {}, b = {}\nX: {}\nY: {}\ntable image of X matches Y: {crosscheck}\n\n{}",
        y.a(),
        y.b(),
        rx.configuration,
        ry.configuration,
        surface_report_text(&ry)
    );
    let json = json!({
        "quotient": surface_json(&y),
        "x_configuration": rx.configuration,
        "y_configuration": ry.configuration,
        "crosscheck": crosscheck,
        "report": ry,
    });
    Ok(Output { json, text })
}

pub fn lattice(input: &Path, reductions: bool) -> Result<Output, CliError> {
    let (_, v) = read_json(input)?;
    let gram: Vec<Vec<i64>> = serde_json::from_value(v)
        .map_err(|e| CliError::Input(format!("{}: expected an integer matrix: {e}", input.display())))?;
    let l = IntLattice::new(gram)?;
    let group = discriminant_group(&l)?;
    let form = if l.is_even() { Some(discriminant_form(&l)?) } else { None };
    let reduced = match (&form, reductions) {
        (Some(f), true) => Some(f.isotropic_reductions()),
        _ => None,
    };
    let mut text = format!("rank: {}\ndet: {}\neven: {}\n", l.rank(), l.det(), l.is_even());
    match &form {
        Some(f) => {
            let q: Vec<String> = f.q_generators().iter().map(|x| x.to_string()).collect();
            text += &format!("discriminant group: {f}\nq on generators: {}\n", q.join(", "));
        }
        None => text += &format!("discriminant group: {group:?} (odd lattice, no quadratic form)\n"),
    }
    if let Some(rs) = &reduced {
        text += &format!("isotropic reductions ({}):\n", rs.len());
        for r in rs {
            let q: Vec<String> = r.q_generators().iter().map(|x| x.to_string()).collect();
            text += &format!("  {r}  q = [{}]\n", q.join(", "));
        }
    }
    let json = json!({
        "rank": l.rank(),
        "det": l.det().to_string(),
        "even": l.is_even(),
        "discriminant": form.as_ref().map_or_else(|| json!({ "group": group, "q": null }), |f| json!(f)),
        "reductions": reduced,
    });
    Ok(Output { json, text })
}

pub fn theorem_search(mw_rank: u32, degeneration: Option<u64>) -> Result<Output, CliError> {
    let result = admissible_d_search(&SearchConstraints::with_mw_rank(mw_rank as u64));
    let mut json = serde_json::to_value(&result).expect("serializable");
    let mut text = search_result_text(&result);
    if let Some(d) = degeneration {
        let rep = degeneration_report(&result, d)?;
        text += &format!("\n{}", degeneration_text(&rep));
        json["degeneration"] = serde_json::to_value(&rep).expect("serializable");
    }
    Ok(Output { json, text })
}

fn point_str(p: &AffinePoint) -> String {
    p.to_string()
}

pub fn isogeny_check(input: &Path, t0s: &[String], height: i64, points: usize) -> Result<Output, CliError> {
    let s = read_surface(input)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut empty = Vec::new();
    for t in t0s {
        let t0 = parse_rational(t)?;
        let c = specialize(&s, &t0)?;
        let cy = c.quotient();
        let mut checks = Vec::new();
        let found = find_rational_points(&c, height, points);
        if found.is_empty() {
            empty.push(t0.to_string());
        }
        // the kernel point (0, 0) is always checked
        for p in std::iter::once(AffinePoint::ints(0, 0)).chain(found) {
            let img = apply_isogeny(&c, &p)?;
            let on_y = cy.contains(&img);
            let back = if on_y { Some(apply_dual(&cy, &img)?) } else { None };
            let doubled = group_law(&c, &p, &p)?;
            let ok = back.as_ref() == Some(&doubled);
            if !ok {
                failures.push(format!("t0 = {t0}, P = {p}"));
            }
            rows.push(vec![
                t0.to_string(),
                point_str(&p),
                point_str(&img),
                back.as_ref().map_or("-".into(), point_str),
                point_str(&doubled),
                ok.to_string(),
            ]);
            checks.push(json!({
                "point": point_str(&p),
                "phi": point_str(&img),
                "dual_phi": back.as_ref().map(point_str),
                "doubled": point_str(&doubled),
                "ok": ok,
            }));
        }
        results.push(json!({
            "t0": t0.to_string(),
            "curve": { "a0": c.a0.to_string(), "b0": c.b0.to_string() },
            "quotient": { "a0": cy.a0.to_string(), "b0": cy.b0.to_string() },
            "checks": checks,
        }));
    }
    if !failures.is_empty() {
        return Err(CliError::Domain {
            kind: "IsogenyIdentityFailed".into(),
            message: format!("dual(phi(P)) != 2P at {}", failures.join("; ")),
            place: None,
        });
    }
    let checked = rows.len();
    let mut text = render_table(&["t0", "P", "phi(P)", "dual(phi(P))", "2P", "ok"], &rows)
        + &format!("\n{checked} points checked, all satisfy dual(phi(P)) = 2P\n");
    if !empty.is_empty() {
        text += &format!("no points besides (0, 0) up to height {height} at t0 = {}\n", empty.join(", "));
    }
    Ok(Output { json: json!({ "fibers": results, "checked": checked, "no_points_found": empty }), text })
}

pub fn family(which: &FamilyCommand, mw_rank: u32) -> Result<Output, CliError> {
    let spec = match which {
        FamilyCommand::Xd { d, p } => FamilySpec::Xd { d: *d, p: parse_coeffs(p)? },
        FamilyCommand::Xprime { n, a1, a2, a3 } => FamilySpec::XPrime {
            n: *n,
            a1: parse_rational(a1)?,
            a2: parse_rational(a2)?,
            a3: parse_rational(a3)?,
        },
        FamilyCommand::Random { seed, count } => return random(*seed, *count, mw_rank),
    };
    let s = build_family(&spec)?;
    let generic = is_generic(&spec, &s);
    let r = SurfaceReport::build(&s, mw_rank)?;
    let mut text = format!("{}: generic = {generic}\n", spec.name());
    text += &surface_report_text(&r);
    let json = json!({ "family": spec.name(), "surface": surface_json(&s), "generic": generic, "report": r });
    Ok(Output { json, text })
}

fn random(seed: u64, count: usize, mw_rank: u32) -> Result<Output, CliError> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for s in random_surfaces(seed, count) {
        let entry = match SurfaceReport::build(&s, mw_rank) {
            Ok(r) => {
                rows.push(vec![
                    s.a().to_string(),
                    s.b().to_string(),
                    r.configuration.to_string(),
                    r.fixed_point_total.to_string(),
                    r.euler_total.to_string(),
                ]);
                json!({ "surface": surface_json(&s), "configuration": r.configuration,
                        "fixed_point_total": r.fixed_point_total, "euler_total": r.euler_total })
            }
            Err(e) => {
                let e = NikulinError::from(e);
                rows.push(vec![s.a().to_string(), s.b().to_string(), format!("error: {}", e.kind()), "-".into(), "-".into()]);
                json!({ "surface": surface_json(&s), "error": e.kind(), "place": e.place() })
            }
        };
        items.push(entry);
    }
    let text = render_table(&["a", "b", "configuration", "fixed", "euler"], &rows);
    Ok(Output { json: json!({ "seed": seed, "surfaces": items }), text })
}

pub fn paper_tables(p: &str) -> Result<Output, CliError> {
    let t = tables(&parse_coeffs(p)?)?;
    Ok(Output { json: serde_json::to_value(&t).expect("serializable"), text: t.to_text() })
}
