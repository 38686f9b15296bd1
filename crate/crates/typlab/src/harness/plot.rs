// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Static SVG rendering of an ensemble run: individual trajectories in gray,
//! the ensemble mean in black, and an inset with the sample variance against
//! the analytic bound.

use std::fmt::Write as _;

use super::output::{StatsTable, TrajectoryTable};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;

/// Axis-aligned plotting rectangle with data ranges.
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.left + (v - lo) / (hi - lo) * self.width
    }

    fn y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.top + self.height - (v - lo) / (hi - lo) * self.height
    }

    fn polyline(&self, xs: &[f64], ys: &[f64], style: &str) -> String {
        let mut points = String::new();
        for (&x, &y) in xs.iter().zip(ys) {
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{:.2},{:.2}", self.x(x), self.y(y));
        }
        format!("<polyline fill=\"none\" {style} points=\"{points}\"/>\n")
    }

    fn axes(&self, x_label: &str, y_label: &str, font: f64) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>",
            self.left, self.top, self.width, self.height
        );
        let ticks = [
            (self.x_range.0, self.left, self.top + self.height + font + 2.0, "middle"),
            (self.x_range.1, self.left + self.width, self.top + self.height + font + 2.0, "middle"),
        ];
        for (value, x, y, anchor) in ticks {
            let _ = writeln!(
                s,
                "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{font}\" text-anchor=\"{anchor}\">{}</text>",
                tick_label(value)
            );
        }
        for value in [self.y_range.0, self.y_range.1] {
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"{font}\" text-anchor=\"end\">{}</text>",
                self.left - 4.0,
                self.y(value) + font / 3.0,
                tick_label(value)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"{font}\" text-anchor=\"middle\">{x_label}</text>",
            self.left + self.width / 2.0,
            self.top + self.height + 2.0 * font + 4.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"{font}\" text-anchor=\"start\">{y_label}</text>",
            self.left + 4.0,
            self.top + font + 2.0
        );
        s
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn padded_range(values: impl Iterator<Item = f64>, include_zero: bool) -> (f64, f64) {
    let (mut lo, mut hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if include_zero {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let pad = hi.abs().max(1.0) * 0.05;
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Render the run. Output depends only on the inputs.
pub fn render_svg(stats: &StatsTable, trajectories: Option<&TrajectoryTable>) -> String {
    let t_first = stats.t.first().copied().unwrap_or(0.0);
    let t_last = stats.t.last().copied().unwrap_or(1.0);
    let t_range = if t_last > t_first {
        (t_first, t_last)
    } else {
        (t_first, t_first + 1.0)
    };
    let mut y_values: Vec<f64> = stats.mean.clone();
    if let Some(tr) = trajectories {
        y_values.extend(tr.series.iter().flatten().copied());
    }
    let main = Frame {
        left: 70.0,
        top: 20.0,
        width: WIDTH - 100.0,
        height: HEIGHT - 70.0,
        x_range: t_range,
        y_range: padded_range(y_values.into_iter(), true),
    };
    let inset = Frame {
        left: main.left + main.width * 0.55,
        top: main.top + 12.0,
        width: main.width * 0.4,
        height: main.height * 0.35,
        x_range: t_range,
        y_range: padded_range(
            stats.variance.iter().chain(stats.bound.iter()).copied(),
            true,
        ),
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    svg.push_str(&main.axes("t", "a(t)", 12.0));
    if let Some(tr) = trajectories {
        for series in &tr.series {
            svg.push_str(&main.polyline(&tr.t, series, "stroke=\"#999999\" stroke-width=\"0.8\""));
        }
    }
    svg.push_str(&main.polyline(&stats.t, &stats.mean, "stroke=\"black\" stroke-width=\"2.5\""));

    svg.push_str(&inset.axes("t", "variance", 10.0));
    svg.push_str(&inset.polyline(&stats.t, &stats.variance, "stroke=\"#1f5fbf\" stroke-width=\"1.2\""));
    svg.push_str(&inset.polyline(&stats.t, &stats.bound, "stroke=\"black\" stroke-width=\"1.5\""));
    svg.push_str("</svg>\n");
    svg
}
