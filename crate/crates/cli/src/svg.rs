//! Static line charts of trajectories.
//!
//! Output depends only on the data: fixed 800x500 canvas, fixed colours,
//! coordinates printed with two decimals.

use std::fmt::Write;

use digispace::solver::Trajectory;
use digispace::PointId;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const COLOURS: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// One polyline per label in `points`, `t` on the horizontal axis.
///
/// Labels missing from the trajectory are skipped.
pub fn plot(trajectory: &Trajectory, points: &[PointId], title: &str) -> String {
    let series: Vec<(PointId, Vec<f64>)> = points
        .iter()
        .filter_map(|&p| trajectory.series(p).map(|s| (p, s)))
        .collect();
    let t_max = trajectory.states.last().map_or(0, |s| s.t).max(1) as f64;
    let (mut lo, mut hi) = series
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + plot_w * t / t_max;
    let y = |v: f64| TOP + plot_h * (hi - v) / (hi - lo);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500" viewBox="0 0 800 500" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r##"<rect width="800" height="500" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="400" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        out,
        r##"<path d="M{:.2} {:.2}V{:.2}H{:.2}" fill="none" stroke="#000000"/>"##,
        LEFT,
        TOP,
        TOP + plot_h,
        LEFT + plot_w
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let t = t_max * frac;
        let v = lo + (hi - lo) * frac;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x(t),
            TOP + plot_h + 18.0,
            fmt_tick(t)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y(v) + 4.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    for (i, (label, values)) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let pts: Vec<String> = trajectory
            .states
            .iter()
            .zip(values)
            .map(|(s, &v)| format!("{:.2},{:.2}", x(s.t as f64), y(v)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
            lx,
            lx + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">f_{label}</text>"#,
            lx + 26.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
