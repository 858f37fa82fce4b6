//! Minimal line plots written as standalone SVG.

use std::fmt::Write;

use crate::numfmt::sig12;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
pub const TICKS: usize = 5;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 0.0 { 0.5 * lo.abs() } else { 0.5 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders `series` against shared linear axes with `TICKS` ticks each and
/// a legend. A series with one point is drawn as a dot.
pub fn render(title: &str, x_label: &str, series: &[Series]) -> String {
    let (x0, x1) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.0)));
    let (y0, y1) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.1)));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..TICKS {
        let t = k as f64 / (TICKS - 1) as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{b:.2}" x2="{px:.2}" y2="{b2:.2}" stroke="black"/><text x="{px:.2}" y="{ty:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            sig12(round_tick(xv)),
            b = TOP + ph,
            b2 = TOP + ph + 6.0,
            ty = TOP + ph + 22.0,
        );
        let _ = writeln!(
            out,
            r#"<line x1="{LEFT}" y1="{py:.2}" x2="{l2:.2}" y2="{py:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            sig12(round_tick(yv)),
            l2 = LEFT - 6.0,
            tx = LEFT - 10.0,
            ty = py + 4.0,
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );

    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        match s.points.as_slice() {
            [] => {}
            [(x, y)] => {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    sx(*x),
                    sy(*y)
                );
            }
            pts => {
                let coords: Vec<String> = pts
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                    coords.join(" ")
                );
            }
        }
        let ly = TOP + 20.0 + 22.0 * k as f64;
        let lx = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="13">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Drops float noise from tick labels.
fn round_tick(v: f64) -> f64 {
    if v.abs() < 1e-12 {
        0.0
    } else {
        let scale = 10f64.powi(6 - v.abs().log10().floor() as i32);
        (v * scale).round() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(name: &str, pts: &[(f64, f64)]) -> Series {
        Series {
            name: name.into(),
            points: pts.to_vec(),
        }
    }

    #[test]
    fn lines_ticks_and_legend() {
        let svg = render(
            "T",
            "x",
            &[
                series("TE", &[(0.0, 0.0), (1.0, 2.0)]),
                series("TG", &[(0.0, 1.5), (1.0, 0.0)]),
            ],
        );
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("text-anchor=\"end\"").count(), TICKS);
        assert!(svg.contains(">TE</text>") && svg.contains(">TG</text>"));
        assert!(!svg.contains("href"));
    }

    #[test]
    fn single_point_and_flat_series() {
        let svg = render("", "x", &[series("QG", &[(0.0, 0.0)])]);
        assert!(svg.contains("<circle"));
        assert!(!svg.contains("NaN"));
        let svg = render("", "x", &[series("QG", &[(0.0, 0.0), (1.0, 0.0)])]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn escapes_labels() {
        let svg = render("a<b", "x&y", &[series("\"q\"", &[(0.0, 1.0)])]);
        assert!(svg.contains("a&lt;b") && svg.contains("x&amp;y") && svg.contains("&quot;q&quot;"));
    }
}
