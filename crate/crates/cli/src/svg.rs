//! Self-contained SVG line chart of `C_n` with reference lines at 1 and at
//! the limit `√2/e`.

use std::fmt::Write as _;

use crate::CnRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// A round tick step giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = (span / target).max(f64::MIN_POSITIVE);
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub(crate) fn chart(rows: &[CnRow], limit: &str) -> String {
    let limit_f: f64 = limit.parse().expect("decimal");
    let (x0, x1) = (f64::from(rows[0].n), f64::from(rows[rows.len() - 1].n));
    let x_span = (x1 - x0).max(1.0);
    let y_top = rows.iter().map(|r| r.approx).fold(1.0f64, f64::max);
    let y_step = tick_step(y_top, 6.0);
    let y_max = (y_top / y_step).ceil() * y_step;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / x_span * plot_w;
    let sy = |y: f64| TOP + (1.0 - y / y_max) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(w, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##).unwrap();
    writeln!(
        w,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">C_n for n = {} to {}</text>"#,
        WIDTH / 2.0,
        rows[0].n,
        rows[rows.len() - 1].n
    )
    .unwrap();

    // Axes and ticks.
    let (bx, by) = (sx(x0), sy(0.0));
    writeln!(w, r##"<line x1="{bx}" y1="{by}" x2="{}" y2="{by}" stroke="#000000"/>"##, sx(x1)).unwrap();
    writeln!(w, r##"<line x1="{bx}" y1="{by}" x2="{bx}" y2="{TOP}" stroke="#000000"/>"##).unwrap();
    let x_step = tick_step(x_span, 10.0).max(1.0);
    let mut t = (x0 / x_step).ceil() * x_step;
    while t <= x1 + 1e-9 {
        let x = trim(sx(t));
        writeln!(w, r##"<line x1="{x}" y1="{by}" x2="{x}" y2="{}" stroke="#000000"/>"##, by + 5.0).unwrap();
        writeln!(w, r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#, by + 20.0, trim(t)).unwrap();
        t += x_step;
    }
    let mut t = 0.0;
    while t <= y_max + 1e-9 {
        let y = trim(sy(t));
        writeln!(w, r##"<line x1="{}" y1="{y}" x2="{bx}" y2="{y}" stroke="#000000"/>"##, bx - 5.0).unwrap();
        writeln!(w, r#"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text>"#, bx - 8.0, trim(t))
            .unwrap();
        t += y_step;
    }
    writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#, LEFT + plot_w / 2.0, HEIGHT - 15.0).unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">C_n</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    // Reference lines.
    for (y, label, dash, color) in [
        (1.0, "1".to_string(), "6 4", "#b22222"),
        (limit_f, format!("sqrt(2)/e = {limit}"), "2 3", "#2e8b57"),
    ] {
        let yy = trim(sy(y));
        writeln!(
            w,
            r#"<line x1="{bx}" y1="{yy}" x2="{}" y2="{yy}" stroke="{color}" stroke-dasharray="{dash}"/>"#,
            sx(x1)
        )
        .unwrap();
        writeln!(w, r#"<text x="{}" y="{}" text-anchor="end" fill="{color}">{label}</text>"#, sx(x1), sy(y) - 5.0)
            .unwrap();
    }

    // Data.
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{}", trim(sx(f64::from(r.n))), trim(sy(r.approx))))
        .collect();
    writeln!(w, r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##, points.join(" "))
        .unwrap();
    if rows.len() <= 200 {
        for r in rows {
            writeln!(
                w,
                r##"<circle cx="{}" cy="{}" r="2.5" fill="#1f4e9c"><title>n = {}: {}</title></circle>"##,
                trim(sx(f64::from(r.n))),
                trim(sy(r.approx)),
                r.n,
                r.value
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(tick_step(33.0, 10.0), 5.0);
        assert_eq!(tick_step(3.7, 6.0), 1.0);
        assert_eq!(tick_step(1.0, 6.0), 0.2);
    }

    #[test]
    fn trims_zeros() {
        assert_eq!(trim(1.5), "1.5");
        assert_eq!(trim(2.0), "2");
        assert_eq!(trim(-0.0), "0");
    }
}
