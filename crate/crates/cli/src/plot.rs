//! Static SVG plots of radial profiles: `u(r)`, `v(r)` on top and the
//! gradient magnitudes below.

use std::fmt::Write as _;

use annulus_core::solver::RadialProfile;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 120.0;
const MARGIN_TOP: f64 = 34.0;
const GAP: f64 = 56.0;

const U_COLOR: &str = "#1f77b4";
const V_COLOR: &str = "#d62728";

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    ys: Vec<f64>,
}

pub fn profile_svg(title: &str, profile: &RadialProfile) -> String {
    let rs: Vec<f64> = profile.rows.iter().map(|r| r.r).collect();
    let top = [
        Series {
            label: "u(r)",
            color: U_COLOR,
            ys: profile.rows.iter().map(|r| r.u).collect(),
        },
        Series {
            label: "v(r)",
            color: V_COLOR,
            ys: profile.rows.iter().map(|r| r.v).collect(),
        },
    ];
    let bottom = [
        Series {
            label: "|grad u|",
            color: U_COLOR,
            ys: profile.rows.iter().map(|r| r.grad_u).collect(),
        },
        Series {
            label: "|grad v|",
            color: V_COLOR,
            ys: profile.rows.iter().map(|r| r.grad_v).collect(),
        },
    ];
    let height = MARGIN_TOP + 2.0 * PANEL_HEIGHT + GAP + 40.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    panel(&mut svg, MARGIN_TOP, &rs, &top);
    panel(&mut svg, MARGIN_TOP + PANEL_HEIGHT + GAP, &rs, &bottom);
    svg.push_str("</svg>\n");
    svg
}

fn panel(svg: &mut String, y0: f64, xs: &[f64], series: &[Series<'_>]) {
    let x0 = MARGIN_LEFT;
    let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let h = PANEL_HEIGHT;
    let (xlo, xhi) = range(xs.iter().copied());
    let (mut ylo, mut yhi) = range(series.iter().flat_map(|s| s.ys.iter().copied()));
    // flat data still gets a visible band
    let pad = ((yhi - ylo) * 0.05).max(1e-12 * yhi.abs().max(1.0));
    ylo -= pad;
    yhi += pad;
    let sx = |x: f64| x0 + (x - xlo) / (xhi - xlo) * w;
    let sy = |y: f64| y0 + h - (y - ylo) / (yhi - ylo) * h;

    let _ = writeln!(
        svg,
        r##"<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let x = xlo + f * (xhi - xlo);
        let y = ylo + f * (yhi - ylo);
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#444">{}</text>"##,
            sx(x),
            y0 + h + 16.0,
            tick(x)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" text-anchor="end" fill="#444">{}</text>"##,
            x0 - 6.0,
            sy(y) + 4.0,
            tick(y)
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#444">r</text>"##,
        x0 + w / 2.0,
        y0 + h + 32.0
    );
    for (k, s) in series.iter().enumerate() {
        let mut points = String::with_capacity(xs.len() * 16);
        for (x, y) in xs.iter().zip(&s.ys) {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            s.color,
            points.trim_end()
        );
        let ly = y0 + 16.0 + 18.0 * k as f64;
        let lx = x0 + w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#,
            lx + 18.0,
            s.color
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 24.0,
            ly + 4.0,
            escape(s.label)
        );
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(x: f64) -> String {
    if x == 0.0 || (1e-3..1e4).contains(&x.abs()) {
        let s = format!("{x:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.3e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
