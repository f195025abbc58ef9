//! Minimal SVG renderings for eyeballing results. Styling is not stable.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use geophase::bloch::BlochPath;

use crate::sweep::SweepRow;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

/// Wrapped exact phases against T: perfect preparation as red dots,
/// imperfect as blue crosses.
pub fn phase_scatter(rows: &[SweepRow], title: &str) -> String {
    let mut out = String::new();
    header(&mut out, W, H);
    let (t0, t1) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(r.t), b.max(r.t))
        });
    let span = if t1 > t0 { t1 - t0 } else { 1.0 };
    let px = |t: f64| MARGIN + (W - 2.0 * MARGIN) * (t - t0) / span;
    let py = |g: f64| H - MARGIN - (H - 2.0 * MARGIN) * g / TAU;
    let _ = writeln!(
        out,
        r#"<path d="M{m} {m} V{b} H{r}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    for (g, label) in [(0.0, "0"), (TAU / 2.0, "pi"), (TAU, "2pi")] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{label}</text>"#,
            MARGIN - 6.0,
            py(g) + 4.0
        );
    }
    for t in [t0, t1] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{t:.3}</text>"#,
            px(t),
            H - MARGIN + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">T (us)</text>"#,
        W / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#,
        W / 2.0
    );
    for r in rows {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="red"/>"#,
            px(r.t),
            py(r.gp_perfect_exact)
        );
        let (x, y) = (px(r.t), py(r.gp_imperfect_exact));
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {:.2} l5 5 M{:.2} {:.2} l5 -5" stroke="blue"/>"#,
            x - 2.5,
            y - 2.5,
            x - 2.5,
            y + 2.5
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Orthographic view of the sphere from elevation 25 deg, azimuth 30 deg.
pub fn bloch_view(paths: &[(&BlochPath, &str)]) -> String {
    let size = 480.0;
    let r = 200.0;
    let c = size / 2.0;
    let (se, ce) = 25f64.to_radians().sin_cos();
    let (sa, ca) = 30f64.to_radians().sin_cos();
    let project = |x: f64, y: f64, z: f64| {
        let u = -sa * x + ca * y;
        let v = -se * (ca * x + sa * y) + ce * z;
        (c + r * u, c - r * v)
    };
    let mut out = String::new();
    header(&mut out, size, size);
    let _ = writeln!(
        out,
        r#"<circle cx="{c}" cy="{c}" r="{r}" stroke="gray" fill="none"/>"#
    );
    let mut equator = String::new();
    for k in 0..=96 {
        let phi = TAU * k as f64 / 96.0;
        let (x, y) = project(phi.cos(), phi.sin(), 0.0);
        let _ = write!(equator, "{}{x:.2} {y:.2} ", if k == 0 { "M" } else { "L" });
    }
    let _ = writeln!(
        out,
        r#"<path d="{equator}" stroke="lightgray" fill="none"/>"#
    );
    for (path, colour) in paths {
        let mut d = String::new();
        for (k, p) in path.points.iter().enumerate() {
            let (x, y) = project(p.x, p.y, p.z);
            let _ = write!(d, "{}{x:.2} {y:.2} ", if k == 0 { "M" } else { "L" });
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" stroke="{colour}" stroke-width="0.8" fill="none"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use geophase::bloch::latitude_circle;

    #[test]
    fn scatter_has_one_marker_pair_per_row() {
        let row = SweepRow {
            t: 1.0,
            gp_perfect_exact: 3.0,
            gp_imperfect_exact: 1.0,
            gp_perfect_numeric: None,
            gp_imperfect_numeric: None,
            gp_key_formula: 1.0,
            gp_approx22: 3.1,
            gp_approx23: 1.0,
            fidelity: 0.9,
            remainder_mag: 0.0,
        };
        let svg = phase_scatter(&[row.clone(), SweepRow { t: 2.0, ..row }], "x");
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn bloch_view_draws_each_path() {
        let p = latitude_circle(1.0, 64, 1).unwrap();
        let svg = bloch_view(&[(&p, "red"), (&p, "blue")]);
        assert_eq!(svg.matches("stroke-width=\"0.8\"").count(), 2);
    }
}
