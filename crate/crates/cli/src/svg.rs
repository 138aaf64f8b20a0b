//! Minimal SVG writer with a data-to-canvas transform.

use std::fmt::Write;

pub struct Canvas {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    scale: (f64, f64),
    body: String,
}

impl Canvas {
    /// `equal_aspect` keeps one data unit the same length on both axes.
    pub fn new(width: f64, height: f64, x_range: (f64, f64), y_range: (f64, f64), equal_aspect: bool) -> Self {
        let margin = 40.0;
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let (x_range, y_range) = (pad(x_range), pad(y_range));
        let mut sx = (width - 2.0 * margin) / (x_range.1 - x_range.0);
        let mut sy = (height - 2.0 * margin) / (y_range.1 - y_range.0);
        if equal_aspect {
            sx = sx.min(sy);
            sy = sx;
        }
        Self { width, height, margin, x_range, y_range, scale: (sx, sy), body: String::new() }
    }

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.margin + (x - self.x_range.0) * self.scale.0, self.height - self.margin - (y - self.y_range.0) * self.scale.1)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&(x, y)| {
                let (px, py) = self.map(x, y);
                format!("{px:.3},{py:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        let p = self.points(pts);
        let _ = writeln!(self.body, r#"<polyline points="{p}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#);
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: Option<&str>) {
        let p = self.points(pts);
        let stroke = stroke.map_or_else(|| format!(r#"stroke="{fill}" stroke-width="0.3""#), |s| format!(r#"stroke="{s}""#));
        let _ = writeln!(self.body, r#"<polygon points="{p}" fill="{fill}" {stroke}/>"#);
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let (px, py) = self.map(x, y);
        let _ = writeln!(self.body, r#"<circle cx="{px:.3}" cy="{py:.3}" r="{r}" fill="{fill}"/>"#);
    }

    pub fn text(&mut self, px: f64, py: f64, size: f64, s: &str) {
        let s = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text x="{px:.1}" y="{py:.1}" font-family="sans-serif" font-size="{size}">{s}</text>"#);
    }

    pub fn title(&mut self, s: &str) {
        self.text(self.margin, 0.6 * self.margin, 14.0, s);
    }

    /// Frame around the plotting area with range labels.
    pub fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, y0) = (self.x_range.0, self.y_range.0);
        let (x1, y1) = (self.x_range.1, self.y_range.1);
        self.polyline(&[(x0, y0), (x1, y0)], "black", 1.0);
        self.polyline(&[(x0, y0), (x0, y1)], "black", 1.0);
        let (px0, py0) = self.map(x0, y0);
        let (px1, _) = self.map(x1, y0);
        let (_, py1) = self.map(x0, y1);
        self.text(px0, py0 + 15.0, 10.0, &format!("{x0:.3}"));
        self.text(px1 - 30.0, py0 + 15.0, 10.0, &format!("{x1:.3}"));
        self.text(0.5 * (px0 + px1), py0 + 30.0, 11.0, x_label);
        self.text(2.0, py0, 10.0, &format!("{y0:.3}"));
        self.text(2.0, py1 + 4.0, 10.0, &format!("{y1:.3}"));
        self.text(2.0, 0.5 * (py0 + py1), 11.0, y_label);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Piecewise-linear colour ramp from dark blue through teal to yellow, `t` in `[0, 1]`.
pub fn ramp(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 4] =
        [(0.0, [68.0, 1.0, 84.0]), (0.35, [49.0, 104.0, 142.0]), (0.7, [53.0, 183.0, 121.0]), (1.0, [253.0, 231.0, 37.0])];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let i = STOPS.windows(2).position(|w| t <= w[1].0).unwrap_or(STOPS.len() - 2);
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let f = (t - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3).map(|k| (a.1[k] + f * (b.1[k] - a.1[k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
        assert_eq!(ramp(f64::NAN), "#440154");
    }

    #[test]
    fn equal_aspect_maps_unit_lengths_equally() {
        let c = Canvas::new(400.0, 300.0, (0.0, 4.0), (0.0, 1.0), true);
        let (a, b) = (c.map(0.0, 0.0), c.map(1.0, 1.0));
        assert!(((b.0 - a.0) - (a.1 - b.1)).abs() < 1e-12);
    }
}
