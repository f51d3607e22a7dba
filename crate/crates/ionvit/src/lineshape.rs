//! Transparency-window counting and lineshape classification.
//!
//! A transparency window is a local minimum whose prominence (the smaller of
//! the rises to the nearest higher flanking maxima) exceeds a fraction of the
//! global maximum. The default fraction of 0.05 separates the weak windows of
//! the figure scenarios from numerical ripple on 2001-point grids.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default prominence threshold as a fraction of the global maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

/// Fraction of the baseline peak a lineshape must exceed to count as
/// absorption-enhanced.
pub const ABSORPTION_MARGIN: f64 = 0.05;

/// Dip floor (relative to the global maximum) separating deep double
/// transparency windows from a shallow three-peak structure.
const DEEP_WINDOW_FRACTION: f64 = 0.2;

/// Shape classes of a response or fluctuation lineshape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LineshapeClass {
    Lorentzian,
    SingleWindow,
    DoubleWindow,
    ThreePeak,
    AbsorptionEnhanced,
}

/// Classification result for one lineshape.
#[derive(Debug, Clone, Serialize)]
pub struct LineshapeReport {
    /// Count of transparency dips above the prominence threshold.
    pub n_windows: usize,
    pub class: LineshapeClass,
    /// Global maximum of the series.
    pub peak_value: f64,
    /// Global maximum of the uncoupled (g_a = g_b = 0) baseline series.
    pub baseline_value: f64,
}

fn dips_with_prominence(series: &[f64]) -> Vec<(usize, f64)> {
    let mut dips = Vec::new();
    for i in 1..series.len() - 1 {
        let v = series[i];
        if !(v < series[i - 1] && v < series[i + 1]) {
            continue;
        }
        // Rise to the nearest higher flanking maximum on each side: extend
        // until a sample below the dip value ends its basin (or the edge).
        let mut left_max = v;
        for j in (0..i).rev() {
            if series[j] < v {
                break;
            }
            left_max = left_max.max(series[j]);
        }
        let mut right_max = v;
        for &s in &series[i + 1..] {
            if s < v {
                break;
            }
            right_max = right_max.max(s);
        }
        dips.push((i, (left_max - v).min(right_max - v)));
    }
    dips
}

/// Number of transparency windows in `series` with prominence at least
/// `prominence` times the global maximum. Endpoints never count.
pub fn count_transparency_windows(series: &[f64], prominence: f64) -> Result<usize> {
    if series.len() < 5 {
        return Err(Error::InvalidGrid(format!(
            "window counting needs at least 5 points, got {}",
            series.len()
        )));
    }
    if !(prominence > 0.0 && prominence < 1.0) {
        return Err(Error::InvalidParams(format!(
            "prominence must lie in (0, 1), got {prominence}"
        )));
    }
    let global_max = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = prominence * global_max;
    Ok(dips_with_prominence(series)
        .into_iter()
        .filter(|&(_, p)| p >= threshold)
        .count())
}

/// Classify a lineshape against its uncoupled baseline.
///
/// `baseline` must be the same quantity evaluated with `g_a = g_b = 0`.
/// Shapes without windows are `AbsorptionEnhanced` when the peak exceeds the
/// baseline peak by more than [`ABSORPTION_MARGIN`], else `Lorentzian`.
/// Two-window shapes are `DoubleWindow` when the dips cut below
/// 20% of the peak (deep transparency) and `ThreePeak` otherwise.
pub fn classify_lineshape(
    series: &[f64],
    baseline: &[f64],
    prominence: f64,
) -> Result<LineshapeReport> {
    let n_windows = count_transparency_windows(series, prominence)?;
    let peak_value = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let baseline_value = baseline.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let class = match n_windows {
        0 => {
            if peak_value > baseline_value * (1.0 + ABSORPTION_MARGIN) {
                LineshapeClass::AbsorptionEnhanced
            } else {
                LineshapeClass::Lorentzian
            }
        }
        1 => LineshapeClass::SingleWindow,
        2 => {
            let global_max = peak_value;
            let threshold = prominence * global_max;
            let deep = dips_with_prominence(series)
                .into_iter()
                .filter(|&(_, p)| p >= threshold)
                .all(|(i, _)| series[i] <= DEEP_WINDOW_FRACTION * global_max);
            if deep {
                LineshapeClass::DoubleWindow
            } else {
                LineshapeClass::ThreePeak
            }
        }
        _ => LineshapeClass::ThreePeak,
    };
    Ok(LineshapeReport {
        n_windows,
        class,
        peak_value,
        baseline_value,
    })
}
