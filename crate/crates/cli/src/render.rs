//! Minimal SVG and PPM writers. SVG drawings use a y-up frame fitted to the
//! content with a 5% margin.

use std::fmt::Write;

use symtile::dynamics::Verdict;

pub struct Svg {
    min: [f64; 2],
    max: [f64; 2],
    body: String,
}

impl Svg {
    /// Frame fitted to `points`.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a [f64; 2]>) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        if !min[0].is_finite() {
            (min, max) = ([-1.0; 2], [1.0; 2]);
        }
        let side = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
        let margin = 0.05 * side;
        Svg {
            min: [min[0] - margin, min[1] - margin],
            max: [max[0] + margin, max[1] + margin],
            body: String::new(),
        }
    }

    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (self.min, self.max)
    }

    /// Stroke width scaled to the frame.
    pub fn stroke(&self) -> f64 {
        0.004 * (self.max[0] - self.min[0]).max(self.max[1] - self.min[1])
    }

    fn points(pts: &[[f64; 2]]) -> String {
        let mut s = String::new();
        for p in pts {
            let _ = write!(s, "{},{} ", p[0], -p[1]);
        }
        s.trim_end().to_string()
    }

    pub fn polyline(&mut self, pts: &[[f64; 2]], color: &str, width: f64, closed: bool) {
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="{width}" stroke-linejoin="round"/>"#,
            Self::points(pts)
        );
    }

    pub fn line(&mut self, p: [f64; 2], q: [f64; 2], color: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{width}"/>"#,
            p[0], -p[1], q[0], -q[1]
        );
    }

    pub fn dot(&mut self, p: [f64; 2], r: f64, color: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{r}" fill="{color}"/>"#, p[0], -p[1]);
    }

    pub fn open_group(&mut self, id: &str) {
        let _ = writeln!(self.body, r#"<g id="{id}">"#);
    }

    pub fn close_group(&mut self) {
        self.body.push_str("</g>\n");
    }

    pub fn finish(self) -> String {
        let (w, h) = (self.max[0] - self.min[0], self.max[1] - self.min[1]);
        let (x, y) = (self.min[0], -self.max[1]);
        let px = 800.0;
        let py = px * h / w;
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{px}" height="{py:.0}" viewBox="{x} {y} {w} {h}">"#,
                "\n",
                r#"<defs><clipPath id="frame"><rect x="{x}" y="{y}" width="{w}" height="{h}"/></clipPath></defs>"#,
                "\n",
                r#"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="white"/>"#,
                "\n",
                r#"<g clip-path="url(#frame)">"#,
                "\n{body}</g>\n</svg>\n"
            ),
            px = px,
            py = py,
            x = x,
            y = y,
            w = w,
            h = h,
            body = self.body
        )
    }
}

/// Color number `k` of `n` evenly spaced hues.
pub fn palette(k: usize, n: usize) -> String {
    format!("hsl({:.0}, 75%, 45%)", 360.0 * k as f64 / n.max(1) as f64)
}

pub fn verdict_color(v: Verdict) -> [u8; 3] {
    match v {
        Verdict::Periodic => [0, 170, 0],
        Verdict::UnboundedDrift => [220, 0, 0],
        Verdict::BoundedAttracted => [0, 0, 220],
        Verdict::Singular => [0, 0, 0],
        Verdict::Inconclusive => [128, 128, 128],
    }
}

/// Binary PPM with rows listed top to bottom.
pub fn ppm(width: usize, height: usize, rows_top_down: &[[u8; 3]]) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for px in rows_top_down {
        out.extend_from_slice(px);
    }
    out
}
