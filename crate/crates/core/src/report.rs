//! Result files: solve and eval JSON, frame tables, and SVG figures.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::flow::{FlowFrame, FlowReport};
use crate::functional::{Analysis, FunctionalDescriptor};
use crate::geometry::{PolygonFile, SymmetricPolygon};
use crate::solver::{SolveResult, SolveStatus};

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub theta: f64,
    pub nu_mass: f64,
    #[serde(rename = "V_mass")]
    pub v_mass: f64,
    pub surface_density: f64,
    pub support: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveFile {
    pub functional: String,
    pub alpha: f64,
    pub nu_total: f64,
    #[serde(rename = "F_value")]
    pub f_value: f64,
    pub iterations: usize,
    pub residual_linf: f64,
    pub gradient_linf: f64,
    pub objective_phi: f64,
    pub status: SolveStatus,
    pub table: Vec<TableRow>,
    pub gamma_trace: Vec<f64>,
    pub body: PolygonFile,
}

impl From<&SolveResult> for SolveFile {
    fn from(r: &SolveResult) -> Self {
        let table = r
            .body
            .pairs()
            .iter()
            .enumerate()
            .map(|(i, p)| TableRow {
                theta: p.theta(),
                nu_mass: r.measure.mass[i],
                v_mass: r.variational.mass[i],
                surface_density: r.surface_density[i],
                support: r.body.support()[i],
            })
            .collect();
        SolveFile {
            functional: r.functional.name().into(),
            alpha: r.alpha,
            nu_total: r.measure.total,
            f_value: r.f_value,
            iterations: r.iterations,
            residual_linf: r.residual_linf,
            gradient_linf: r.gradient_linf,
            objective_phi: r.objective,
            status: r.status,
            table,
            gamma_trace: r.gamma_trace.clone(),
            body: PolygonFile::from(&r.body),
        }
    }
}

pub fn solve_result_json(r: &SolveResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SolveFile::from(r))?)
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRow {
    pub theta: f64,
    pub support: f64,
    pub edge_length: f64,
    pub surface_density: f64,
    #[serde(rename = "V_mass")]
    pub v_mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalFile {
    pub functional: String,
    pub alpha: f64,
    #[serde(rename = "F_value")]
    pub f_value: f64,
    #[serde(rename = "V_total")]
    pub v_total: f64,
    pub table: Vec<EvalRow>,
}

pub fn eval_json(f: &FunctionalDescriptor, p: &SymmetricPolygon, a: &Analysis) -> Result<String> {
    let v = a.variational_masses(f.alpha());
    let table = p
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, d)| EvalRow {
            theta: d.theta(),
            support: p.support()[i],
            edge_length: p.edge_lengths()[i],
            surface_density: a.density[i],
            v_mass: v[i],
        })
        .collect();
    Ok(serde_json::to_string_pretty(&EvalFile {
        functional: f.kind.name().into(),
        alpha: f.alpha(),
        f_value: a.value,
        v_total: v.iter().sum(),
        table,
    })?)
}

/// `t,scale,F_value` rows.
pub fn frames_csv(frames: &[FlowFrame]) -> String {
    let mut out = String::from("t,scale,F_value\n");
    for f in frames {
        let _ = writeln!(out, "{:e},{:e},{:e}", f.t, f.scale, f.f_value);
    }
    out
}

pub fn flow_report_json(report: &FlowReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

const SVG_SIZE: f64 = 480.0;

fn svg_header(out: &mut String, half: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
}

/// Closed path through the vertices, with `y` flipped to screen coordinates.
fn outline_path(p: &SymmetricPolygon) -> String {
    let mut d = String::new();
    for (k, v) in p.vertices().iter().enumerate() {
        let _ = write!(
            d,
            "{}{:.6} {:.6} ",
            if k == 0 { "M" } else { "L" },
            v[0],
            -v[1]
        );
    }
    d.push('Z');
    d
}

/// The polygon outline alone.
pub fn polygon_svg(p: &SymmetricPolygon) -> String {
    let half = 1.1 * p.circumradius();
    let stroke = half / 200.0;
    let mut out = String::new();
    svg_header(&mut out, half);
    let _ = writeln!(
        out,
        r##"<path class="outline" d="{}" fill="none" stroke="#222" stroke-width="{stroke:.6}"/>"##,
        outline_path(p)
    );
    out.push_str("</svg>\n");
    out
}

/// Outline of the solution with one glyph per facet normal: a bar for the
/// prescribed mass `ν_i` and one for the computed `V_i`, drawn outward from
/// the facet midpoint.
pub fn solve_svg(r: &SolveResult) -> String {
    let p = &r.body;
    let radius = p.circumradius();
    let bar_max = 0.35 * radius;
    let half = radius + bar_max + 0.1 * radius;
    let stroke = half / 200.0;
    let peak = r
        .measure
        .mass
        .iter()
        .chain(&r.variational.mass)
        .cloned()
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut out = String::new();
    svg_header(&mut out, half);
    let _ = writeln!(
        out,
        r##"<path class="outline" d="{}" fill="none" stroke="#222" stroke-width="{stroke:.6}"/>"##,
        outline_path(p)
    );
    for e in p.edges() {
        let n = e.normal(p.pairs());
        let t = [-n[1], n[0]];
        let mid = [(e.from[0] + e.to[0]) / 2.0, (e.from[1] + e.to[1]) / 2.0];
        let gap = 2.0 * stroke;
        let _ = writeln!(out, r#"<g class="glyph" data-pair="{}">"#, e.pair);
        for (value, offset, color) in [
            (r.measure.mass[e.pair], -gap, "#1f77b4"),
            (r.variational.mass[e.pair], gap, "#d62728"),
        ] {
            let len = bar_max * value / peak;
            let a = [mid[0] + offset * t[0], mid[1] + offset * t[1]];
            let b = [a[0] + len * n[0], a[1] + len * n[1]];
            let _ = writeln!(
                out,
                r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{color}" stroke-width="{:.6}"/>"#,
                a[0],
                -a[1],
                b[0],
                -b[1],
                3.0 * stroke
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Superimposed frame outlines, outermost first, each labeled by its time.
pub fn flow_svg(frames: &[FlowFrame]) -> String {
    let radius = frames
        .iter()
        .map(|f| f.body.circumradius())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let half = 1.15 * radius;
    let stroke = half / 250.0;
    let mut order: Vec<&FlowFrame> = frames.iter().collect();
    order.sort_by(|a, b| a.t.total_cmp(&b.t));
    let mut out = String::new();
    svg_header(&mut out, half);
    for f in order {
        let _ = writeln!(
            out,
            r##"<path class="frame" data-t="{}" d="{}" fill="none" stroke="#333" stroke-width="{stroke:.6}"/>"##,
            f.t,
            outline_path(&f.body)
        );
        let v = f.body.vertices()[0];
        let _ = writeln!(
            out,
            r#"<text x="{:.6}" y="{:.6}" font-size="{:.6}">t={}</text>"#,
            v[0],
            -v[1],
            0.04 * half,
            f.t
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::FunctionalDescriptor;
    use crate::measure::EvenMeasure;
    use crate::solver::{solve_log_minkowski, SolveOptions};

    #[test]
    fn square_outline() {
        let svg = polygon_svg(&SymmetricPolygon::rectangle(1.0, 1.0).unwrap());
        let path = svg
            .lines()
            .find(|l| l.contains("class=\"outline\""))
            .unwrap();
        assert_eq!(path.matches('L').count() + path.matches('M').count(), 4);
        // centered at the origin, 10% margin around the circumradius √2
        let half = 1.1 * 2f64.sqrt();
        let view = format!(
            "viewBox=\"{:.6} {:.6} {:.6} {:.6}\"",
            -half,
            -half,
            2.0 * half,
            2.0 * half
        );
        assert!(svg.contains(&view), "{svg}");
    }

    #[test]
    fn hexagon_glyphs_are_equal() {
        let nu = EvenMeasure::uniform(3, 6.0).unwrap();
        let r = solve_log_minkowski(
            &nu,
            &FunctionalDescriptor::volume(),
            &SolveOptions::default(),
        )
        .unwrap();
        let svg = solve_svg(&r);
        assert_eq!(svg.matches("class=\"glyph\"").count(), 6);
        let lengths: Vec<f64> = svg
            .lines()
            .filter(|l| l.starts_with("<line"))
            .map(|l| {
                let num = |key: &str| -> f64 {
                    let s = &l[l.find(key).unwrap() + key.len()..];
                    s[..s.find('"').unwrap()].parse().unwrap()
                };
                (num("x2=\"") - num("x1=\"")).hypot(num("y2=\"") - num("y1=\""))
            })
            .collect();
        assert_eq!(lengths.len(), 12);
        for l in &lengths {
            assert!((l - lengths[0]).abs() < 1e-5);
        }
        assert_eq!(svg, solve_svg(&r));
        let json: serde_json::Value =
            serde_json::from_str(&solve_result_json(&r).unwrap()).unwrap();
        assert_eq!(json["table"].as_array().unwrap().len(), 3);
        assert!(json["residual_linf"].as_f64().unwrap() <= 1e-8);
        assert_eq!(json["body"]["dimension"], 2);
    }
}
