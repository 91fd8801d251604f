//! Text writers: SVG for plane figures, OBJ for solids, CSV tables.
//!
//! Numbers are printed with fixed precision so output is byte-stable.

use std::fmt::Write;

use wulffkit::{IntegrandSamples, Polytope, Vector};

fn num(x: f64) -> String {
    // Values that round to zero print without a sign.
    format!("{:.9}", if x.abs() < 5e-10 { 0.0 } else { x })
}

/// A polyline or point set in an SVG figure.
pub struct Layer {
    pub id: &'static str,
    pub points: Vec<Vector>,
    pub closed: bool,
    pub stroke: &'static str,
}

/// Vertices of a planar polytope in counter-clockwise order.
pub fn polygon(w: &Polytope) -> Vec<Vector> {
    let mut v = w.vertices().to_vec();
    v.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    v
}

/// Points sorted by the angle of their direction.
pub fn by_angle(mut pts: Vec<(f64, Vector)>) -> Vec<Vector> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.into_iter().map(|p| p.1).collect()
}

pub fn svg(layers: &[Layer], comments: &[String]) -> String {
    let r = layers
        .iter()
        .flat_map(|l| &l.points)
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max)
        * 1.1;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let (lo, side) = (num(-r), num(2.0 * r));
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{lo} {lo} {side} {side}\" width=\"512\" height=\"512\">"
    );
    for c in comments {
        let _ = writeln!(s, "<!-- {c} -->");
    }
    let width = num(r / 200.0);
    // SVG's y axis points down.
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\">\n");
    for l in layers {
        let pts: Vec<String> = l
            .points
            .iter()
            .map(|p| format!("{},{}", num(p[0]), num(p[1])))
            .collect();
        let tag = if l.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            "<{tag} id=\"{}\" stroke=\"{}\" stroke-width=\"{width}\" points=\"{}\"/>",
            l.id,
            l.stroke,
            pts.join(" ")
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// OBJ with one polygonal face per facet, plus optional point groups.
pub fn obj(w: &Polytope, clouds: &[(&str, Vec<Vector>)], comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    let vertex = |s: &mut String, v: &Vector| {
        let _ = writeln!(s, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
    };
    s.push_str("o body\n");
    for v in w.vertices() {
        vertex(&mut s, v);
    }
    for f in w.facets() {
        let idx: Vec<String> = f.ring.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "f {}", idx.join(" "));
    }
    let mut next = w.vertices().len() + 1;
    for (name, pts) in clouds {
        let _ = writeln!(s, "o {name}");
        for p in pts {
            vertex(&mut s, p);
        }
        let idx: Vec<String> = (next..next + pts.len()).map(|i| i.to_string()).collect();
        if !idx.is_empty() {
            let _ = writeln!(s, "p {}", idx.join(" "));
        }
        next += pts.len();
    }
    s
}

/// Vertex coordinates from the `v` lines of an OBJ file (2 or 3 per line).
pub fn read_obj_vertices(text: &str) -> Result<Vec<Vector>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut words = line.split_whitespace();
        if words.next() != Some("v") {
            continue;
        }
        let coords = words
            .map(str::parse::<f64>)
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        if !(2..=3).contains(&coords.len()) || coords.iter().any(|c| !c.is_finite()) {
            return Err(format!(
                "line {}: expected 2 or 3 finite coordinates",
                i + 1
            ));
        }
        if out
            .first()
            .is_some_and(|v: &Vector| v.dim() != coords.len())
        {
            return Err(format!("line {}: mixed vertex dimensions", i + 1));
        }
        out.push(Vector::new(&coords));
    }
    if out.is_empty() {
        return Err("no vertices".into());
    }
    Ok(out)
}

/// One row per direction: components, γ, γ_W, and whether they agree.
pub fn integrand_csv(gamma: &[f64], integrand: &IntegrandSamples, report_tol: f64) -> String {
    let dim = integrand.directions.first().map_or(0, |d| d.dim());
    let mut s = String::new();
    let axes = ["x", "y", "z"];
    let _ = writeln!(s, "{},gamma,gamma_w,equal", axes[..dim].join(","));
    for ((d, g), gw) in integrand
        .directions
        .iter()
        .zip(gamma)
        .zip(&integrand.values)
    {
        let comps: Vec<String> = d.as_slice().iter().map(|&c| num(c)).collect();
        let equal = (g - gw).abs() <= report_tol;
        let _ = writeln!(s, "{},{},{},{equal}", comps.join(","), num(*g), num(*gw));
    }
    s
}
