//! Minimal SVG emission: polylines, lines and markers in a fixed viewBox.

use std::fmt::Write;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Data-space rectangle mapped onto the square canvas with equal aspect.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Bounds {
    pub fn square(half: f64) -> Self {
        Bounds {
            x0: -half,
            x1: half,
            y0: -half,
            y1: half,
        }
    }

    /// Smallest square containing the points, padded by 5%.
    pub fn around<'a>(points: impl IntoIterator<Item = &'a (f64, f64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if x0 > x1 {
            return Bounds::square(1.0);
        }
        let half = (0.5 * (x1 - x0).max(y1 - y0)).max(1e-9) * 1.05;
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        Bounds {
            x0: cx - half,
            x1: cx + half,
            y0: cy - half,
            y1: cy + half,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let inner = SIZE - 2.0 * MARGIN;
        let sx = MARGIN + (x - self.x0) / (self.x1 - self.x0) * inner;
        let sy = MARGIN + (self.y1 - y) / (self.y1 - self.y0) * inner;
        (sx, sy)
    }
}

pub struct Svg {
    bounds: Bounds,
    body: String,
}

impl Svg {
    pub fn new(bounds: Bounds) -> Self {
        let mut svg = Svg {
            bounds,
            body: String::new(),
        };
        svg.axes();
        svg
    }

    fn axes(&mut self) {
        let b = self.bounds;
        if b.y0 < 0.0 && b.y1 > 0.0 {
            self.line((b.x0, 0.0), (b.x1, 0.0), "#bbbbbb", 1.0, None);
        }
        if b.x0 < 0.0 && b.x1 > 0.0 {
            self.line((0.0, b.y0), (0.0, b.y1), "#bbbbbb", 1.0, None);
        }
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, dash: Option<&str>) {
        let (ax, ay) = self.bounds.map(a.0, a.1);
        let (bx, by) = self.bounds.map(b.0, b.1);
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        writeln!(
            self.body,
            "<line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>"
        )
        .unwrap();
    }

    /// Line through the origin with direction `(dx, dy)`, spanning the view.
    pub fn through_origin(&mut self, dir: (f64, f64), stroke: &str) {
        let b = self.bounds;
        let reach = 2.0 * (b.x1 - b.x0).abs().max((b.y1 - b.y0).abs()) + b.x0.abs() + b.y0.abs();
        let n = dir.0.hypot(dir.1);
        let (dx, dy) = (reach * dir.0 / n, reach * dir.1 / n);
        self.line((-dx, -dy), (dx, dy), stroke, 1.0, Some("6 4"));
    }

    /// Polyline split into separate subpaths at the given indices; non-finite
    /// points also break the path.
    pub fn path(&mut self, points: &[(f64, f64)], breaks: &[usize], stroke: &str) {
        let mut d = String::new();
        let mut pen_up = true;
        for (i, &(x, y)) in points.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                pen_up = true;
                continue;
            }
            let (sx, sy) = self.bounds.map(x, y);
            let cmd = if pen_up || breaks.contains(&i) { 'M' } else { 'L' };
            write!(d, "{cmd}{sx:.2} {sy:.2} ").unwrap();
            pen_up = false;
        }
        if !d.is_empty() {
            writeln!(
                self.body,
                "<path d=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\" clip-path=\"url(#view)\"/>",
                d.trim_end()
            )
            .unwrap();
        }
    }

    pub fn marker(&mut self, p: (f64, f64), fill: &str) {
        let (sx, sy) = self.bounds.map(p.0, p.1);
        writeln!(
            self.body,
            "<circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"2.5\" fill=\"{fill}\" clip-path=\"url(#view)\"/>"
        )
        .unwrap();
    }

    pub fn label(&mut self, text: &str) {
        writeln!(
            self.body,
            "<text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            MARGIN - 5.0,
            escape(text)
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        let inner = SIZE - 2.0 * MARGIN;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\">\n\
             <defs><clipPath id=\"view\"><rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{inner}\" height=\"{inner}\"/></clipPath></defs>\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{inner}\" height=\"{inner}\" fill=\"none\" stroke=\"#888888\"/>\n\
             {}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_breaks_at_seams_and_gaps() {
        let mut svg = Svg::new(Bounds::square(2.0));
        let pts = [
            (0.0, 0.0),
            (1.0, 1.0),
            (f64::NAN, 0.0),
            (1.0, 0.0),
            (0.5, 0.5),
            (0.0, 1.0),
        ];
        svg.path(&pts, &[4], "black");
        let out = svg.finish();
        let d = out.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('M').count(), 3);
        assert_eq!(d.matches('L').count(), 2);
    }

    #[test]
    fn mapping_flips_y() {
        let b = Bounds::square(1.0);
        let (_, top) = b.map(0.0, 1.0);
        let (_, bottom) = b.map(0.0, -1.0);
        assert!(top < bottom);
        assert_eq!(b.map(-1.0, 1.0), (MARGIN, MARGIN));
    }

    #[test]
    fn bounds_are_square() {
        let b = Bounds::around(&[(0.0, 0.0), (4.0, 1.0)]);
        assert!(((b.x1 - b.x0) - (b.y1 - b.y0)).abs() < 1e-12);
        assert!(b.x0 < 0.0 && b.x1 > 4.0);
    }
}
