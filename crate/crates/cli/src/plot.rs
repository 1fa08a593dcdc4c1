//! Static SVG rendering of a sweep: estimated correlations as points over the
//! predicted curve, with `b` on the horizontal axis and correlation in
//! `[-1, 1]` on the vertical axis.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use epr_core::{Angle, Mode, SweepResult};

use crate::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const CURVE_SAMPLES: usize = 400;

struct Frame {
    b_min: f64,
    b_max: f64,
}

impl Frame {
    fn x(&self, b: f64) -> f64 {
        LEFT + (b - self.b_min) / (self.b_max - self.b_min) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, corr: f64) -> f64 {
        let c = corr.clamp(-1.0, 1.0);
        TOP + (1.0 - c) / 2.0 * (HEIGHT - TOP - BOTTOM)
    }
}

fn title(result: &SweepResult) -> String {
    let setup = match result.mode {
        Mode::Joint => "joint sampling".to_owned(),
        Mode::Separated { rule, order } => {
            format!("separated sampling, rule = {rule}, order = {order}")
        }
    };
    format!(
        "Correlation vs b: {setup}; a = {:.4} rad, N = {} per point, seed = {}",
        result.a.radians(),
        result.n_trials,
        result.seed
    )
}

/// Tick label for a multiple of π/2.
fn pi_label(quarter_turns: i64) -> String {
    match quarter_turns {
        0 => "0".into(),
        1 => "π/2".into(),
        -1 => "-π/2".into(),
        2 => "π".into(),
        -2 => "-π".into(),
        q if q % 2 == 0 => format!("{}π", q / 2),
        q => format!("{q}π/2"),
    }
}

fn svg_document(result: &SweepResult) -> String {
    let (mut b_min, mut b_max) = result
        .b_values
        .iter()
        .map(|b| b.radians())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| {
            (lo.min(b), hi.max(b))
        });
    if b_max.partial_cmp(&b_min) != Some(std::cmp::Ordering::Greater) {
        b_min -= 1.0;
        b_max += 1.0;
    }
    let frame = Frame { b_min, b_max };
    let (x0, x1) = (frame.x(b_min), frame.x(b_max));
    let (y_top, y_bottom) = (frame.y(1.0), frame.y(-1.0));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        title(result)
    );

    // horizontal grid and y labels
    for tick in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = frame.y(tick);
        let stroke = if tick == 0.0 { "#999" } else { "#ddd" };
        let _ = writeln!(
            svg,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="{stroke}"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{tick}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }

    // vertical grid at multiples of π/2
    let first = (b_min / FRAC_PI_2).ceil() as i64;
    let last = (b_max / FRAC_PI_2 + 1e-9).floor() as i64;
    for q in first..=last {
        let x = frame.x(q as f64 * FRAC_PI_2);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y_top:.2}" x2="{x:.2}" y2="{y_bottom:.2}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y_bottom + 18.0,
            pi_label(q)
        );
    }

    let _ = writeln!(
        svg,
        r#"<rect x="{x0:.2}" y="{y_top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y_bottom - y_top
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">b (radians)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">correlation ⟨AB⟩</text>"#,
        (y_top + y_bottom) / 2.0,
        (y_top + y_bottom) / 2.0
    );

    // predicted curve, sampled densely from the closed form
    let points: Vec<String> = (0..=CURVE_SAMPLES)
        .map(|i| {
            let b = b_min + (b_max - b_min) * i as f64 / CURVE_SAMPLES as f64;
            let pred = result
                .mode
                .predicted_correlation(result.a, Angle::new(b).expect("finite"));
            format!("{:.2},{:.2}", frame.x(b), frame.y(pred))
        })
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
        points.join(" ")
    );

    for (b, est) in result.b_values.iter().zip(&result.estimates) {
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#d62728"/>"##,
            frame.x(b.radians()),
            frame.y(*est)
        );
    }

    // legend
    let lx = x1 - 170.0;
    let ly = y_top + 15.0;
    let _ = writeln!(
        svg,
        r##"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="#1f77b4" stroke-width="2"/>"##,
        lx + 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}">predicted</text>"#,
        lx + 26.0,
        ly + 4.0
    );
    let _ = writeln!(
        svg,
        r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#d62728"/>"##,
        lx + 10.0,
        ly + 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}">Monte-Carlo estimate</text>"#,
        lx + 26.0,
        ly + 22.0
    );
    svg.push_str("</svg>\n");
    svg
}

/// Writes the sweep as a self-contained SVG file.
pub fn render_plot(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    fs::write(path, svg_document(result)).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
