//! Minimal standalone SVG plots on the unit square of p-values.

use std::fmt::Write as _;
use std::path::Path;

use super::PValueCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PlotStyle {
    pub title: String,
    pub width: f64,
    pub height: f64,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle { title: String::new(), width: 480.0, height: 360.0 }
    }
}

const MARGIN: f64 = 48.0;

/// Maps data coordinates with `x ∈ [0, x_max]`, `y ∈ [0, 1]` to pixels.
struct Frame {
    w: f64,
    h: f64,
    x_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + x / self.x_max * (self.w - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.h - MARGIN - y.clamp(0.0, 1.0) * (self.h - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(style: &PlotStyle, frame: &Frame, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    let (w, h) = (style.width, style.height);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if !style.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, w / 2.0, escape(&style.title));
    }
    let (x0, x1, y0, y1) = (frame.px(0.0), frame.px(frame.x_max), frame.py(0.0), frame.py(1.0));
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            frame.px(t * frame.x_max),
            y0 + 16.0,
            fmt_tick(t * frame.x_max)
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 6.0, frame.py(t) + 4.0, t);
    }
    let _ =
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, h - 8.0, x_label);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        y_label
    );
    s
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    r.to_string()
}

/// Sorted p-values against uniform plotting positions, with the diagonal.
/// Emits exactly one `<circle>` per point.
pub fn render_quantile_plot(points: &[(f64, f64)], style: &PlotStyle) -> String {
    let frame = Frame { w: style.width, h: style.height, x_max: 1.0 };
    let mut s = open(style, &frame, "uniform quantile", "ordered p-value");
    let _ = writeln!(
        s,
        r#"<line class="reference" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="grey" stroke-dasharray="4 3"/>"#,
        frame.px(0.0),
        frame.py(0.0),
        frame.px(1.0),
        frame.py(1.0)
    );
    for &(x, y) in points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#, frame.px(x), frame.py(y));
    }
    s.push_str("</svg>\n");
    s
}

/// P-values against `c` with a reference line at 0.05. Missing p-values are
/// skipped and break the connecting line.
pub fn render_pvalue_curve(curve: &PValueCurve, style: &PlotStyle) -> String {
    let x_max = curve.thresholds.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let frame = Frame { w: style.width, h: style.height, x_max };
    let mut s = open(style, &frame, "c", "p-value");
    let _ = writeln!(
        s,
        r#"<line class="reference" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="4 3"/>"#,
        frame.px(0.0),
        frame.py(0.05),
        frame.px(x_max),
        frame.py(0.05)
    );
    let mut d = String::new();
    let mut pen_down = false;
    for (&c, p) in curve.thresholds.iter().zip(&curve.p_values) {
        match p {
            Some(p) => {
                let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, frame.px(c), frame.py(*p));
                pen_down = true;
            }
            None => pen_down = false,
        }
    }
    if !d.is_empty() {
        let _ = writeln!(s, r#"<path class="curve" d="{}" fill="none" stroke="steelblue"/>"#, d.trim_end());
    }
    for (&c, p) in curve.thresholds.iter().zip(&curve.p_values) {
        if let Some(p) = p {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#, frame.px(c), frame.py(*p));
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn save_svg(svg: &str, path: &Path) -> Result<()> {
    std::fs::write(path, svg).map_err(|source| Error::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_skips_missing_points() {
        let curve = PValueCurve {
            thresholds: vec![0.1, 0.2, 0.3, 0.4],
            p_values: vec![Some(0.5), None, Some(0.01), Some(0.2)],
            dataset_fingerprint: 0,
        };
        let svg = render_pvalue_curve(&curve, &PlotStyle::default());
        assert_eq!(svg.matches("<circle").count(), 3);
        let path = svg.lines().find(|l| l.contains("class=\"curve\"")).unwrap();
        assert_eq!(path.matches('M').count(), 2);
        assert!(svg.contains("class=\"reference\""));
    }

    #[test]
    fn title_is_escaped() {
        let style = PlotStyle { title: "a<b & c".into(), ..PlotStyle::default() };
        let svg = render_quantile_plot(&[], &style);
        assert!(svg.contains("a&lt;b &amp; c"));
        assert_eq!(svg.matches("<circle").count(), 0);
    }
}
