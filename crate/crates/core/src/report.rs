//! Tables regenerated from the families, and plain-text rendering of reports.

use serde::Serialize;

use crate::families::{build_family, gamma_divisor, FamilySpec};
use crate::kodaira::Configuration;
use crate::poly::{Place, UniPoly};
use crate::surface::{classify_surface, quotient_surface, Classification, SurfaceReport, TwoTorsionSurface};
use crate::theorem::{DegenerationReport, SearchResult};
use crate::NikulinError;

/// One column of the family fiber table: the fibers over `t = 0`, over the
/// remaining finite places and over `t = ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberColumn {
    pub surface: String,
    pub at_zero: String,
    pub elsewhere: String,
    pub at_infinity: String,
    pub configuration: Configuration,
}

fn cell(cl: &Classification, keep: impl Fn(&Place) -> bool) -> String {
    let cfg = Configuration::from_counts(
        cl.fibers
            .iter()
            .filter(|f| keep(&f.place))
            .map(|f| (f.fiber, f.point_count as u32)),
    );
    if cfg.is_empty() {
        "reg.".into()
    } else {
        cfg.symbol_strings().join(" + ")
    }
}

pub fn fiber_column(name: &str, s: &TwoTorsionSurface) -> Result<FiberColumn, NikulinError> {
    let cl = classify_surface(s)?;
    let zero = Place::Finite(UniPoly::t());
    Ok(FiberColumn {
        surface: name.to_string(),
        at_zero: cell(&cl, |p| p == &zero),
        elsewhere: cell(&cl, |p| p != &zero && !p.is_infinity()),
        at_infinity: cell(&cl, Place::is_infinity),
        configuration: cl.configuration(),
    })
}

/// Columns `X_0 … X_8` followed by `Y_0 … Y_8` for the cubic `p`.
pub fn fiber_table(p: &UniPoly) -> Result<Vec<FiberColumn>, NikulinError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for d in 0..=8 {
        let s = build_family(&FamilySpec::Xd { d, p: p.clone() })?;
        xs.push(fiber_column(&format!("X_{d}"), &s)?);
        ys.push(fiber_column(&format!("Y_{d}"), &quotient_surface(&s)?)?);
    }
    xs.extend(ys);
    Ok(xs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantRow {
    pub surface: String,
    pub picard: u64,
    pub torsion: String,
    pub det_ns: Option<i64>,
}

fn determinant_row(name: String, s: &TwoTorsionSurface) -> Result<DeterminantRow, NikulinError> {
    let r = SurfaceReport::build(s, 0)?;
    Ok(DeterminantRow { surface: name, picard: r.picard, torsion: r.torsion.group.into(), det_ns: r.det_ns })
}

/// `det NS` of `X_d`, `Y_d` for `d = 0..=6` and of `X′_5`, `X′_7` and their quotients.
pub fn determinant_table(p: &UniPoly) -> Result<Vec<DeterminantRow>, NikulinError> {
    let mut rows = Vec::new();
    for d in 0..=6 {
        let s = build_family(&FamilySpec::Xd { d, p: p.clone() })?;
        rows.push(determinant_row(format!("X_{d}"), &s)?);
        rows.push(determinant_row(format!("Y_{d}"), &quotient_surface(&s)?)?);
    }
    for n in [5, 7] {
        let s = build_family(&FamilySpec::x_prime(n))?;
        rows.push(determinant_row(format!("X'_{n}"), &s)?);
        rows.push(determinant_row(format!("Y'_{n}"), &quotient_surface(&s)?)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaRow {
    pub surface: String,
    pub norm: String,
    pub order_mod_trivial: u64,
    pub order_mod_ns: u64,
}

pub fn gamma_table() -> Result<Vec<GammaRow>, NikulinError> {
    let specs = (1..=6).map(FamilySpec::xd).chain([5, 7].map(FamilySpec::x_prime));
    specs
        .map(|spec| {
            let g = gamma_divisor(&spec)?;
            Ok(GammaRow {
                surface: spec.name(),
                norm: g.norm().to_string(),
                order_mod_trivial: g.order_mod_trivial(),
                order_mod_ns: g.order_mod_ns(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PaperTables {
    pub cubic: UniPoly,
    pub fibers: Vec<FiberColumn>,
    pub determinants: Vec<DeterminantRow>,
    pub gamma: Vec<GammaRow>,
    pub notes: Vec<String>,
}

pub fn paper_tables(p: &UniPoly) -> Result<PaperTables, NikulinError> {
    Ok(PaperTables {
        cubic: p.clone(),
        fibers: fiber_table(p)?,
        determinants: determinant_table(p)?,
        gamma: gamma_table()?,
        notes: vec![
            "Mordell-Weil rank 0 is assumed for every determinant".into(),
            "X'_n rows use (a1, a2, a3) = (0, 1, 1)".into(),
        ],
    })
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out += &line(widths.iter().map(|&w| "-".repeat(w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

impl PaperTables {
    pub fn to_text(&self) -> String {
        let mut out = format!("Singular fibers for P = {}\n\n", self.cubic);
        let rows: Vec<Vec<String>> = self
            .fibers
            .iter()
            .map(|c| vec![c.surface.clone(), c.at_zero.clone(), c.elsewhere.clone(), c.at_infinity.clone()])
            .collect();
        out += &render_table(&["surface", "t = 0", "c(t) = 0", "t = inf"], &rows);
        out += "\nNeron-Severi determinants\n\n";
        let rows: Vec<Vec<String>> = self
            .determinants
            .iter()
            .map(|r| {
                vec![
                    r.surface.clone(),
                    r.picard.to_string(),
                    r.torsion.clone(),
                    r.det_ns.map_or("-".into(), |d| d.to_string()),
                ]
            })
            .collect();
        out += &render_table(&["surface", "rho", "torsion", "det NS"], &rows);
        out += "\nGamma divisors\n\n";
        let rows: Vec<Vec<String>> = self
            .gamma
            .iter()
            .map(|r| {
                vec![
                    r.surface.clone(),
                    r.norm.clone(),
                    r.order_mod_trivial.to_string(),
                    r.order_mod_ns.to_string(),
                ]
            })
            .collect();
        out += &render_table(&["surface", "Gamma^2", "order in L*/L", "order in NS*/NS"], &rows);
        for n in &self.notes {
            out += &format!("\nnote: {n}");
        }
        out + "\n"
    }
}

pub fn surface_report_text(r: &SurfaceReport) -> String {
    let mut out = format!("a = {}\nb = {}\n\n", r.a, r.b);
    let rows: Vec<Vec<String>> = r
        .fibers
        .iter()
        .map(|f| {
            vec![
                f.place.to_string(),
                f.point_count.to_string(),
                f.v_a.to_string(),
                f.v_b.to_string(),
                f.v_c.to_string(),
                f.fiber.to_string(),
            ]
        })
        .collect();
    out += &render_table(&["place", "points", "ord a", "ord b", "ord c", "fiber"], &rows);
    out += &format!(
        "\nconfiguration: {}\npicard: {}\ntorsion: {}\ndet NS: {}\nfixed points: {}\neuler: {}\n",
        r.configuration,
        r.picard,
        r.torsion.group,
        r.det_ns.map_or("-".into(), |d| d.to_string()),
        r.fixed_point_total,
        r.euler_total
    );
    for n in &r.notes {
        out += &format!("note: {n}\n");
    }
    out
}

pub fn search_result_text(r: &SearchResult) -> String {
    let list: Vec<String> = r.admissible.iter().map(u64::to_string).collect();
    let mut out = format!(
        "admissible d: {{{}}}\nconfigurations examined: {}\norder-8 torsion survivors: {}\nMordell-Weil rank: {}\n\n",
        list.join(", "),
        r.configurations_examined,
        r.order_eight_survivors,
        r.mw_rank
    );
    let mut rows = Vec::new();
    for (d, ws) in &r.witnesses {
        for w in ws {
            rows.push(vec![
                d.to_string(),
                w.x_config.to_string(),
                w.y_config.to_string(),
                w.torsion_x.clone(),
                w.torsion_y.clone(),
            ]);
        }
    }
    out += &render_table(&["d", "X", "Y", "tor X", "tor Y"], &rows);
    for (d, c) in &r.caveats {
        out += &format!("\nd = {d}: {c}\n");
    }
    out
}

pub fn degeneration_text(r: &DegenerationReport) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::sample_cubic;

    #[test]
    fn fiber_table_cells() {
        let t = fiber_table(&sample_cubic()).unwrap();
        let col = |name: &str| t.iter().find(|c| c.surface == name).unwrap().clone();
        let x3 = col("X_3");
        assert_eq!((x3.at_zero.as_str(), x3.elsewhere.as_str(), x3.at_infinity.as_str()), ("I6", "6I1", "I*6"));
        let y8 = col("Y_8");
        assert_eq!((y8.at_zero.as_str(), y8.elsewhere.as_str(), y8.at_infinity.as_str()), ("I8", "8I2", "reg."));
    }

    #[test]
    fn aligned_text() {
        let s = render_table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(s, "a    bb\n---  --\nxyz  1\n");
    }

    #[test]
    fn tables_render() {
        let t = paper_tables(&sample_cubic()).unwrap();
        let text = t.to_text();
        assert!(text.contains("X'_7"));
        assert_eq!(t.determinants.iter().find(|r| r.surface == "X'_5").unwrap().det_ns, Some(30));
        assert_eq!(t.determinants.iter().find(|r| r.surface == "Y'_7").unwrap().det_ns, Some(14 * 32));
        serde_json::to_string(&t).unwrap();
    }
}
