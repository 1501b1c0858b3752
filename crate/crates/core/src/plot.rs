//! Dependency-free SVG line charts for training curves.
//!
//! Output is a deterministic function of the input: coordinates are
//! formatted with fixed precision and elements are emitted in a fixed
//! order, so equal inputs give byte-identical SVG.

use crate::error::{Error, Result};
use crate::harness::StepRecord;

/// One labeled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Chart geometry and axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Log-scale the y axis; every y value must then be positive.
    pub log_y: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            width: 880,
            height: 520,
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            log_y: false,
        }
    }
}

const PALETTE: [&str; 7] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];

/// Mean minibatch objective per epoch; x is the 1-based epoch number.
pub fn epoch_mean_series(label: &str, records: &[StepRecord]) -> Series {
    let mut sums: Vec<(u32, f64, u32)> = Vec::new();
    for r in records {
        match sums.last_mut() {
            Some((epoch, sum, count)) if *epoch == r.epoch => {
                *sum += r.f_t;
                *count += 1;
            }
            _ => sums.push((r.epoch, r.f_t, 1)),
        }
    }
    Series {
        label: label.to_string(),
        points: sums
            .iter()
            .map(|&(epoch, sum, count)| (epoch as f64 + 1.0, sum / count as f64))
            .collect(),
    }
}

/// Sorts so the legend lists best (lowest) final value first.
pub fn sort_series_by_final(series: &mut [Series]) {
    series.sort_by(|a, b| {
        let fa = a.points.last().map(|p| p.1).unwrap_or(f64::INFINITY);
        let fb = b.points.last().map(|p| p.1).unwrap_or(f64::INFINITY);
        fa.total_cmp(&fb).then_with(|| a.label.cmp(&b.label))
    });
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick label formatting: plain decimals in a moderate range, otherwise
/// two-digit scientific notation.
fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{v:.2e}")
    }
}

/// Renders the series as a line chart.
///
/// Fails on an empty series list, empty series, non-finite coordinates,
/// or non-positive y values under `log_y`.
pub fn line_chart_svg(series: &[Series], opts: &PlotOptions) -> Result<String> {
    if series.is_empty() {
        return Err(Error::Config("plot needs at least one series".into()));
    }
    for s in series {
        if s.points.is_empty() {
            return Err(Error::Config(format!("series {:?} has no points", s.label)));
        }
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Config(format!(
                    "series {:?} has a non-finite point ({x}, {y})",
                    s.label
                )));
            }
            if opts.log_y && y <= 0.0 {
                return Err(Error::Config(format!(
                    "log scale requires positive values; series {:?} has y = {y}",
                    s.label
                )));
            }
        }
    }

    let map_y = |y: f64| if opts.log_y { y.log10() } else { y };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(map_y(y));
            y_max = y_max.max(map_y(y));
        }
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let x_pad = 0.04 * (x_max - x_min);
    let y_pad = 0.04 * (y_max - y_min);
    let (x_lo, x_hi) = (x_min - x_pad, x_max + x_pad);
    let (y_lo, y_hi) = (y_min - y_pad, y_max + y_pad);

    let w = opts.width as f64;
    let h = opts.height as f64;
    let (ml, mr, mt, mb) = (72.0, 170.0, 42.0, 52.0);
    let px = |x: f64| ml + (x - x_lo) / (x_hi - x_lo) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y_lo) / (y_hi - y_lo) * (h - mt - mb);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        opts.width, opts.height, opts.width, opts.height
    ));
    svg.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        opts.width, opts.height
    ));
    if !opts.title.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            (ml + w - mr) / 2.0,
            escape_xml(&opts.title)
        ));
    }

    // Grid and ticks: five divisions per axis.
    for i in 0..=4u32 {
        let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let gx = px(fx);
        svg.push_str(&format!(
            "<line x1=\"{gx:.2}\" y1=\"{:.2}\" x2=\"{gx:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            py(y_lo),
            py(y_hi)
        ));
        let label = fmt_tick(fx);
        svg.push_str(&format!(
            "<text x=\"{gx:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            h - mb + 18.0,
            escape_xml(&label)
        ));

        let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let gy = py(fy);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{gy:.2}\" x2=\"{:.2}\" y2=\"{gy:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            px(x_lo),
            px(x_hi)
        ));
        let label = if opts.log_y {
            fmt_tick(10f64.powf(fy))
        } else {
            fmt_tick(fy)
        };
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            ml - 8.0,
            gy + 4.0,
            escape_xml(&label)
        ));
    }

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n",
        px(x_lo),
        py(y_lo),
        px(x_hi),
        py(y_lo)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n",
        px(x_lo),
        py(y_lo),
        px(x_lo),
        py(y_hi)
    ));
    if !opts.x_label.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            (ml + w - mr) / 2.0,
            h - 12.0,
            escape_xml(&opts.x_label)
        ));
    }
    if !opts.y_label.is_empty() {
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>\n",
            (mt + h - mb) / 2.0,
            (mt + h - mb) / 2.0,
            escape_xml(&opts.y_label)
        ));
    }

    // Curves.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(map_y(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
    }

    // Legend.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let ly = mt + 8.0 + i as f64 * 18.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2.5\"/>\n",
            w - mr + 12.0,
            w - mr + 34.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            w - mr + 40.0,
            ly + 4.0,
            escape_xml(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
