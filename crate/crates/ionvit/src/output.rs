//! CSV, JSON, and SVG emission.
//!
//! Numbers are written with Rust's shortest round-trip formatting, the header
//! is always present, fields are comma-separated, and lines end with LF, so
//! identical inputs produce byte-identical files. Pole rows keep their inputs
//! and the `pole` flag but leave every derived column empty.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SidebandCase;
use crate::spectra::SpectrumSeries;
use crate::sweep::{ResponseSeries, SweepDataset};

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Steady-state response CSV:
/// `delta,abs2_A,abs2_B,re_A,im_A,re_B,im_B,re_c,im_c,pole`.
pub fn render_response_csv(series: &ResponseSeries) -> String {
    let mut out = String::from("delta,abs2_A,abs2_B,re_A,im_A,re_B,im_B,re_c,im_c,pole\n");
    for r in &series.rows {
        if r.pole {
            out.push_str(&format!("{},,,,,,,,,true\n", fmt(r.delta)));
        } else {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},false\n",
                fmt(r.delta),
                fmt(r.abs2_a),
                fmt(r.abs2_b),
                fmt(r.re_a),
                fmt(r.im_a),
                fmt(r.re_b),
                fmt(r.im_b),
                fmt(r.re_c),
                fmt(r.im_c),
            ));
        }
    }
    out
}

pub fn emit_response_csv(series: &ResponseSeries, path: &Path) -> Result<()> {
    write_file(path, &render_response_csv(series))
}

/// Fluctuation-spectrum CSV: `omega,S_A,S_B,S_c`.
pub fn render_fluctuation_csv(series: &SpectrumSeries) -> String {
    let mut out = String::from("omega,S_A,S_B,S_c\n");
    for i in 0..series.omega.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(series.omega[i]),
            fmt(series.s_a[i]),
            fmt(series.s_b[i]),
            fmt(series.s_c[i]),
        ));
    }
    out
}

pub fn emit_fluctuation_csv(series: &SpectrumSeries, path: &Path) -> Result<()> {
    write_file(path, &render_fluctuation_csv(series))
}

/// Generic sweep CSV: `[axis2,]axis1,<quantity>,pole` with the axes named
/// after the swept inputs.
pub fn render_sweep_csv(ds: &SweepDataset) -> String {
    let mut out = String::new();
    match &ds.spec.axis2 {
        Some(axis2) => out.push_str(&format!(
            "{},{},{},pole\n",
            axis2.name,
            ds.spec.axis1.name,
            ds.spec.quantity.column()
        )),
        None => out.push_str(&format!(
            "{},{},pole\n",
            ds.spec.axis1.name,
            ds.spec.quantity.column()
        )),
    }
    for r in &ds.rows {
        if let Some(a2) = r.axis2 {
            out.push_str(&fmt(a2));
            out.push(',');
        }
        out.push_str(&fmt(r.axis1));
        out.push(',');
        if let Some(v) = r.value {
            out.push_str(&fmt(v));
        }
        out.push_str(if r.pole { ",true\n" } else { ",false\n" });
    }
    out
}

pub fn emit_sweep_csv(ds: &SweepDataset, path: &Path) -> Result<()> {
    write_file(path, &render_sweep_csv(ds))
}

/// One stability verdict at a probe detuning.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityRow {
    pub case: SidebandCase,
    pub delta: f64,
    pub max_real_eig: f64,
    pub stable: bool,
}

/// Stability CSV: `case,delta,max_real_eig,stable`.
pub fn render_stability_csv(rows: &[StabilityRow]) -> String {
    let mut out = String::from("case,delta,max_real_eig,stable\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.case,
            fmt(r.delta),
            fmt(r.max_real_eig),
            r.stable
        ));
    }
    out
}

pub fn emit_stability_csv(rows: &[StabilityRow], path: &Path) -> Result<()> {
    write_file(path, &render_stability_csv(rows))
}

/// Energy-level CSV: `index,energy`, ascending.
pub fn render_levels_csv(levels: &[f64]) -> String {
    let mut out = String::from("index,energy\n");
    for (i, e) in levels.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt(*e)));
    }
    out
}

pub fn emit_levels_csv(levels: &[f64], path: &Path) -> Result<()> {
    write_file(path, &render_levels_csv(levels))
}

/// Serialize any dataset as pretty JSON.
pub fn emit_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParams(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    write_file(path, &text)
}

/// One plotted curve.
#[derive(Debug, Clone)]
pub struct SvgSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A simple multi-series line plot.
#[derive(Debug, Clone)]
pub struct SvgPlot {
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<SvgSeries>,
}

const SVG_WIDTH: f64 = 840.0;
const SVG_HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 26.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085",
];

fn tick_label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl SvgPlot {
    /// Render to an SVG document string.
    pub fn render(&self) -> String {
        let finite: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        let (mut x_min, mut x_max) = finite
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| {
                (lo.min(*x), hi.max(*x))
            });
        let (mut y_min, mut y_max) = finite
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, y)| {
                (lo.min(*y), hi.max(*y))
            });
        if !x_min.is_finite() || !x_max.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
        }
        if !y_min.is_finite() || !y_max.is_finite() {
            y_min = 0.0;
            y_max = 1.0;
        }
        if x_min == x_max {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_min == y_max {
            y_min -= 0.5;
            y_max += 0.5;
        }
        let y_pad = 0.05 * (y_max - y_min);
        y_min -= y_pad;
        y_max += y_pad;

        let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_px = |x: f64, y: f64| {
            (
                MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
                MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h,
            )
        };

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

        // axes
        let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
        svg.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{MARGIN_TOP:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n"
        ));

        // ticks
        for k in 0..=4 {
            let fx = x_min + (x_max - x_min) * k as f64 / 4.0;
            let (px, _) = to_px(fx, y_min);
            svg.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
                y0 + 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                y0 + 20.0,
                tick_label(fx)
            ));
            let fy = y_min + (y_max - y_min) * k as f64 / 4.0;
            let (_, py) = to_px(x_min, fy);
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0:.2}\" y2=\"{py:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
                x0 - 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
                x0 - 8.0,
                py + 4.0,
                tick_label(fy)
            ));
        }

        // axis labels
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            SVG_HEIGHT - 12.0,
            self.x_label
        ));
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            self.y_label
        ));

        // curves; non-finite points break the polyline into segments
        for (si, series) in self.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let mut segment: Vec<String> = Vec::new();
            let flush = |seg: &mut Vec<String>, svg: &mut String| {
                if seg.len() >= 2 {
                    svg.push_str(&format!(
                        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                        seg.join(" ")
                    ));
                }
                seg.clear();
            };
            for &(x, y) in &series.points {
                if x.is_finite() && y.is_finite() {
                    let (px, py) = to_px(x, y);
                    segment.push(format!("{px:.2},{py:.2}"));
                } else {
                    flush(&mut segment, &mut svg);
                }
            }
            flush(&mut segment, &mut svg);
            // legend entry
            let ly = MARGIN_TOP + 16.0 + 18.0 * si as f64;
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
                MARGIN_LEFT + plot_w - 150.0,
                MARGIN_LEFT + plot_w - 120.0
            ));
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
                MARGIN_LEFT + plot_w - 112.0,
                ly + 4.0,
                series.label
            ));
        }

        svg.push_str("</svg>\n");
        svg
    }
}

/// Write a plot to `path`.
pub fn emit_svg(plot: &SvgPlot, path: &Path) -> Result<()> {
    let rendered = plot.render();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(rendered.as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Plot of the two response intensities against detuning.
pub fn response_plot(series: &ResponseSeries) -> SvgPlot {
    let pick = |f: fn(&crate::sweep::ResponseRow) -> f64| {
        series
            .rows
            .iter()
            .map(|r| {
                if r.pole {
                    (r.delta, f64::NAN)
                } else {
                    (r.delta, f(r))
                }
            })
            .collect()
    };
    SvgPlot {
        x_label: "delta".into(),
        y_label: "response intensity".into(),
        series: vec![
            SvgSeries {
                label: "|A_s/chi|^2".into(),
                points: pick(|r| r.abs2_a),
            },
            SvgSeries {
                label: "|B_s/chi|^2".into(),
                points: pick(|r| r.abs2_b),
            },
        ],
    }
}

/// Plot of the three fluctuation spectra against frequency.
pub fn fluctuation_plot(series: &SpectrumSeries) -> SvgPlot {
    let zip = |ys: &[f64]| {
        series
            .omega
            .iter()
            .copied()
            .zip(ys.iter().copied())
            .collect()
    };
    SvgPlot {
        x_label: "omega".into(),
        y_label: "fluctuation spectrum".into(),
        series: vec![
            SvgSeries {
                label: "S_A".into(),
                points: zip(&series.s_a),
            },
            SvgSeries {
                label: "S_B".into(),
                points: zip(&series.s_b),
            },
            SvgSeries {
                label: "S_c".into(),
                points: zip(&series.s_c),
            },
        ],
    }
}

/// Plot of a sweep dataset: one curve per axis2 value.
pub fn sweep_plot(ds: &SweepDataset) -> SvgPlot {
    let mut series: Vec<SvgSeries> = Vec::new();
    let quantity = ds.spec.quantity.column();
    match &ds.spec.axis2 {
        None => {
            series.push(SvgSeries {
                label: quantity.to_string(),
                points: ds
                    .rows
                    .iter()
                    .map(|r| (r.axis1, r.value.unwrap_or(f64::NAN)))
                    .collect(),
            });
        }
        Some(axis2) => {
            for block in ds.rows.chunks(ds.spec.axis1.n) {
                let a2 = block[0].axis2.expect("axis2 sweep rows carry axis2");
                series.push(SvgSeries {
                    label: format!("{}={}", axis2.name, tick_label(a2)),
                    points: block
                        .iter()
                        .map(|r| (r.axis1, r.value.unwrap_or(f64::NAN)))
                        .collect(),
                });
            }
        }
    }
    SvgPlot {
        x_label: ds.spec.axis1.name.to_string(),
        y_label: quantity.to_string(),
        series,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::spectra::{spectrum_series, uniform_grid};
    use crate::sweep::{response_series, run_sweep, AxisName, AxisSpec, Quantity, SweepSpec};

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("ionvit-output-tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn response_header_contract() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        let series = response_series(&p, &uniform_grid(-1.0, 1.0, 5).unwrap()).unwrap();
        let path = tmp("resp.csv");
        emit_response_csv(&series, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("delta,abs2_A,abs2_B,re_A,im_A,re_B,im_B,re_c,im_c,pole\n"));
        assert_eq!(text.lines().count(), 6);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn fluctuation_header_contract() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        let series = spectrum_series(&p, 0.0, &uniform_grid(-1.0, 1.0, 3).unwrap()).unwrap();
        let path = tmp("fluct.csv");
        emit_fluctuation_csv(&series, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("omega,S_A,S_B,S_c\n"));
    }

    #[test]
    fn pole_rows_leave_values_empty() {
        let p = ModelParams::blue(2.0, 1.0, 5.0, 5.0);
        let series = response_series(&p, &uniform_grid(-1.0, 1.0, 5).unwrap()).unwrap();
        let path = tmp("pole.csv");
        emit_response_csv(&series, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let pole_line = text.lines().find(|l| l.ends_with("true")).unwrap();
        assert_eq!(pole_line, "0,,,,,,,,,true");
    }

    #[test]
    fn emission_is_deterministic() {
        let spec = SweepSpec {
            base: ModelParams::red(2.0, 1.0, 5.0, 5.0),
            axis1: AxisSpec::new(AxisName::Delta, -5.0, 5.0, 101),
            axis2: Some(AxisSpec::new(AxisName::GA, 1.0, 3.0, 3)),
            quantity: Quantity::ResponseA,
            delta: 0.0,
            omega: 0.0,
        };
        let ds = run_sweep(&spec).unwrap();
        let p1 = tmp("sweep1.csv");
        let p2 = tmp("sweep2.csv");
        emit_sweep_csv(&ds, &p1).unwrap();
        emit_sweep_csv(&run_sweep(&spec).unwrap(), &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

        let s1 = tmp("sweep1.svg");
        let s2 = tmp("sweep2.svg");
        emit_svg(&sweep_plot(&ds), &s1).unwrap();
        emit_svg(&sweep_plot(&run_sweep(&spec).unwrap()), &s2).unwrap();
        assert_eq!(std::fs::read(&s1).unwrap(), std::fs::read(&s2).unwrap());
    }

    #[test]
    fn sweep_csv_headers() {
        let spec = SweepSpec {
            base: ModelParams::red(2.0, 1.0, 5.0, 5.0),
            axis1: AxisSpec::new(AxisName::Delta, -5.0, 5.0, 3),
            axis2: Some(AxisSpec::new(AxisName::GA, 1.0, 3.0, 2)),
            quantity: Quantity::ResponseA,
            delta: 0.0,
            omega: 0.0,
        };
        let path = tmp("sweep_hdr.csv");
        emit_sweep_csv(&run_sweep(&spec).unwrap(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("g_a,delta,abs2_A,pole\n"));
    }

    #[test]
    fn unwritable_path_reports_path() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        let series = response_series(&p, &uniform_grid(-1.0, 1.0, 5).unwrap()).unwrap();
        let bad = std::path::Path::new("/nonexistent-dir-xyz/out.csv");
        match emit_response_csv(&series, bad) {
            Err(Error::Io { path, .. }) => assert!(path.contains("nonexistent-dir-xyz")),
            other => panic!("expected io error, got {other:?}"),
        }
    }

    #[test]
    fn svg_is_wellformed() {
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let series = response_series(&p, &uniform_grid(-20.0, 20.0, 201).unwrap()).unwrap();
        let svg = response_plot(&series).render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("|A_s/chi|^2"));
    }

    #[test]
    fn json_roundtrip() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        let series = spectrum_series(&p, 0.0, &uniform_grid(-1.0, 1.0, 3).unwrap()).unwrap();
        let path = tmp("series.json");
        emit_json(&series, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["omega"].as_array().unwrap().len(), 3);
        assert_eq!(value["case"], "red");
    }
}
