//! SVG figures.
//!
//! Drawings live in a y-down user space: a plane point `(u, v)` is drawn at `(u, −v)`, and the
//! `viewBox` is the bounding box of the drawing plus a margin. The second line is a version
//! comment; everything after it depends only on the input.

use std::fmt::Write;

use hivecurve::hive::TriangleIndex;
use hivecurve::patchwork::Chart;
use hivecurve::rational::q_to_f64;
use hivecurve::tropical::TropicalCurve;

struct Canvas {
    body: String,
    lo: [f64; 2],
    hi: [f64; 2],
}

fn num(x: f64) -> String {
    // avoid "-0.0000" so outputs diff cleanly
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

impl Canvas {
    fn new() -> Self {
        Canvas { body: String::new(), lo: [f64::INFINITY; 2], hi: [f64::NEG_INFINITY; 2] }
    }

    fn see(&mut self, p: [f64; 2]) -> [f64; 2] {
        let q = [p[0], -p[1]];
        for a in 0..2 {
            self.lo[a] = self.lo[a].min(q[a]);
            self.hi[a] = self.hi[a].max(q[a]);
        }
        q
    }

    fn line(&mut self, a: [f64; 2], b: [f64; 2], style: &str) {
        let (a, b) = (self.see(a), self.see(b));
        writeln!(self.body, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#, num(a[0]), num(a[1]), num(b[0]), num(b[1])).unwrap();
    }

    fn dot(&mut self, p: [f64; 2], r: f64, style: &str) {
        let p = self.see(p);
        writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#, num(p[0]), num(p[1]), num(r)).unwrap();
    }

    fn polygon(&mut self, pts: &[[f64; 2]], style: &str) {
        let pts: Vec<String> = pts.iter().map(|&p| self.see(p)).map(|p| format!("{},{}", num(p[0]), num(p[1]))).collect();
        writeln!(self.body, r#"<polygon points="{}" {style}/>"#, pts.join(" ")).unwrap();
    }

    fn finish(self, margin: f64) -> String {
        let (lo, hi) = if self.lo[0].is_finite() { (self.lo, self.hi) } else { ([0.0; 2], [0.0; 2]) };
        let w = (hi[0] - lo[0]) + 2.0 * margin;
        let h = (hi[1] - lo[1]) + 2.0 * margin;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- hivecurve {} -->\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"{}\">\n{}</svg>\n",
            env!("CARGO_PKG_VERSION"),
            num(lo[0] - margin),
            num(lo[1] - margin),
            num(w),
            num(h),
            (640.0 * h / w).round(),
            self.body
        )
    }
}

/// Bounding-box extent of the finite part of the curve, at least 1.
fn extent(c: &TropicalCurve) -> f64 {
    let xs: Vec<[f64; 2]> = c.vertices.iter().map(|v| [q_to_f64(&v.coords[0]), q_to_f64(&v.coords[1])]).collect();
    let span = |a: usize| {
        let lo = xs.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min);
        let hi = xs.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    if xs.is_empty() {
        1.0
    } else {
        span(0).max(span(1)).max(1.0)
    }
}

/// Honeycomb edges and rays; stroke width grows with multiplicity. Optional amoeba points.
pub fn honeycomb(c: &TropicalCurve, amoeba: Option<&[[f64; 2]]>) -> String {
    let ext = extent(c);
    let ray_len = 0.5 * ext;
    let w = 0.01 * ext;
    let mut cv = Canvas::new();
    let pt = |i: usize| [q_to_f64(&c.vertices[i].coords[0]), q_to_f64(&c.vertices[i].coords[1])];
    for e in &c.edges {
        cv.line(pt(e.from), pt(e.to), &format!(r#"stroke="black" stroke-width="{}""#, num(w * e.multiplicity as f64)));
    }
    for r in &c.rays {
        let p = pt(r.vertex);
        let d = [r.direction[0] as f64, r.direction[1] as f64];
        let s = ray_len / (d[0] * d[0] + d[1] * d[1]).sqrt();
        cv.line(p, [p[0] + s * d[0], p[1] + s * d[1]], &format!(r#"stroke="black" stroke-width="{}""#, num(w * r.multiplicity as f64)));
    }
    if let Some(points) = amoeba {
        let (lo, hi) = (cv.lo, cv.hi);
        for p in points {
            // keep the overlay to the frame of the honeycomb
            if p[0] >= lo[0] - ray_len && p[0] <= hi[0] + ray_len && -p[1] >= lo[1] - ray_len && -p[1] <= hi[1] + ray_len {
                cv.dot(*p, 0.4 * w, r##"fill="#3060c0" fill-opacity="0.5""##);
            }
        }
    }
    for i in 0..c.vertices.len() {
        cv.dot(pt(i), 1.5 * w, r#"fill="black""#);
    }
    cv.finish(0.05 * ext)
}

/// Scatter plot of amoeba points.
pub fn amoeba(points: &[[f64; 2]]) -> String {
    let mut cv = Canvas::new();
    for p in points {
        cv.see(*p);
    }
    let ext = (cv.hi[0] - cv.lo[0]).max(cv.hi[1] - cv.lo[1]).max(1.0);
    let mut cv = Canvas::new();
    for p in points {
        cv.dot(*p, 0.003 * ext, r##"fill="#3060c0""##);
    }
    cv.finish(0.05 * ext)
}

/// Viro's picture: quadrant ε (normalized to `ε₃ = +1`) puts `(i,j,k)` at `(ε₁i, ε₂j)`,
/// so the four charts tile the square `|u|+|v| ≤ n`.
pub fn patchwork(charts: &[Chart]) -> String {
    let mut cv = Canvas::new();
    let n = charts.first().map_or(1, |c| c.n).max(1) as f64;
    let w = 0.01 * n;
    for c in charts {
        let s = c.quadrant.map(|x| (x * c.quadrant[2]) as f64);
        let at = |p: TriangleIndex| [s[0] * p.i as f64, s[1] * p.j as f64];
        let mid = |e: &[TriangleIndex; 2]| {
            let (a, b) = (at(e[0]), at(e[1]));
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
        };
        for t in &c.triangles {
            cv.polygon(&t.map(at), &format!(r##"fill="none" stroke="#999999" stroke-width="{}""##, num(w)));
        }
        for seg in &c.segments {
            cv.line(mid(&seg[0]), mid(&seg[1]), &format!(r##"stroke="#c02020" stroke-width="{}" stroke-linecap="round""##, num(3.0 * w)));
        }
        for (p, sg) in hivecurve::hive::index_set(c.n).into_iter().zip(&c.signs) {
            let fill = if *sg > 0 { "black" } else { "white" };
            cv.dot(at(p), 4.0 * w, &format!(r#"fill="{fill}" stroke="black" stroke-width="{}""#, num(w)));
        }
    }
    cv.finish(0.1 * n)
}
