//! Parameter sweeps for figure scenarios.
//!
//! A sweep varies one or two named axes (detuning, frequency, couplings,
//! decay rates) around a base parameter set and evaluates a response
//! intensity or fluctuation spectrum per grid point. Rows are ordered
//! axis2-major, axis1-minor, evaluation is embarrassingly parallel with a
//! deterministic merge, and blue-case steady-state poles are flagged per row
//! instead of being interpolated over.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{response_intensity, steady_state};
use crate::params::ModelParams;
use crate::spectra::{spectrum_value, uniform_grid, validate_grid, SpectrumKind};

/// Sweepable inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Delta,
    Omega,
    GA,
    GB,
    GammaA,
    GammaB,
}

impl std::fmt::Display for AxisName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AxisName::Delta => "delta",
            AxisName::Omega => "omega",
            AxisName::GA => "g_a",
            AxisName::GB => "g_b",
            AxisName::GammaA => "gamma_a",
            AxisName::GammaB => "gamma_b",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "delta" => Ok(AxisName::Delta),
            "omega" => Ok(AxisName::Omega),
            "g_a" => Ok(AxisName::GA),
            "g_b" => Ok(AxisName::GB),
            "gamma_a" => Ok(AxisName::GammaA),
            "gamma_b" => Ok(AxisName::GammaB),
            other => Err(Error::InvalidParams(format!(
                "unknown axis '{other}' (expected delta, omega, g_a, g_b, gamma_a, gamma_b)"
            ))),
        }
    }
}

/// One sweep axis: `n` uniform points over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub name: AxisName,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(name: AxisName, lo: f64, hi: f64, n: usize) -> Self {
        AxisSpec { name, lo, hi, n }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "axis {} needs at least 2 points, got {}",
                self.name, self.n
            )));
        }
        if !(self.lo < self.hi && self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "axis {} needs lo < hi, got ({}, {})",
                self.name, self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        uniform_grid(self.lo, self.hi, self.n).expect("validated axis")
    }
}

/// What a sweep evaluates per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    ResponseA,
    ResponseB,
    SpectrumA,
    SpectrumB,
    SpectrumC,
}

impl Quantity {
    /// CSV column name of the quantity.
    pub fn column(&self) -> &'static str {
        match self {
            Quantity::ResponseA => "abs2_A",
            Quantity::ResponseB => "abs2_B",
            Quantity::SpectrumA => "S_A",
            Quantity::SpectrumB => "S_B",
            Quantity::SpectrumC => "S_c",
        }
    }

    fn is_response(&self) -> bool {
        matches!(self, Quantity::ResponseA | Quantity::ResponseB)
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "response-a" => Ok(Quantity::ResponseA),
            "response-b" => Ok(Quantity::ResponseB),
            "spectrum-a" => Ok(Quantity::SpectrumA),
            "spectrum-b" => Ok(Quantity::SpectrumB),
            "spectrum-c" => Ok(Quantity::SpectrumC),
            other => Err(Error::InvalidParams(format!(
                "unknown quantity '{other}' (expected response-a, response-b, spectrum-a, spectrum-b, spectrum-c)"
            ))),
        }
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
    pub quantity: Quantity,
    /// Probe detuning used when `delta` is not an axis.
    pub delta: f64,
    /// Spectrum frequency used when `omega` is not an axis.
    pub omega: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.name == self.axis1.name {
                return Err(Error::InvalidParams(format!(
                    "axis1 and axis2 both sweep {}",
                    axis2.name
                )));
            }
        }
        let sweeps_omega = self.axis1.name == AxisName::Omega
            || self
                .axis2
                .map(|a| a.name == AxisName::Omega)
                .unwrap_or(false);
        if self.quantity.is_response() && sweeps_omega {
            return Err(Error::InvalidParams(
                "response quantities do not depend on omega; sweep delta instead".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluated sweep point. `value` is absent on pole rows.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub axis2: Option<f64>,
    pub axis1: f64,
    pub value: Option<f64>,
    pub pole: bool,
}

/// Deterministically ordered sweep output.
#[derive(Debug, Clone, Serialize)]
pub struct SweepDataset {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

fn apply_axis(name: AxisName, value: f64, p: &mut ModelParams, delta: &mut f64, omega: &mut f64) {
    match name {
        AxisName::Delta => *delta = value,
        AxisName::Omega => *omega = value,
        AxisName::GA => p.g_a = value,
        AxisName::GB => p.g_b = value,
        AxisName::GammaA => p.gamma_a = value,
        AxisName::GammaB => p.gamma_b = value,
    }
}

fn eval_point(spec: &SweepSpec, a1: f64, a2: Option<f64>) -> SweepRow {
    let mut p = spec.base;
    let mut delta = spec.delta;
    let mut omega = spec.omega;
    if let (Some(axis2), Some(v2)) = (&spec.axis2, a2) {
        apply_axis(axis2.name, v2, &mut p, &mut delta, &mut omega);
    }
    apply_axis(spec.axis1.name, a1, &mut p, &mut delta, &mut omega);
    let (value, pole) = match spec.quantity {
        Quantity::ResponseA | Quantity::ResponseB => {
            let s = steady_state(&p, delta);
            if s.pole {
                (None, true)
            } else {
                let (ia, ib) = response_intensity(&s, p.chi);
                let v = if spec.quantity == Quantity::ResponseA {
                    ia
                } else {
                    ib
                };
                (Some(v), false)
            }
        }
        Quantity::SpectrumA => (
            Some(spectrum_value(&p, delta, omega, SpectrumKind::CollectiveA)),
            false,
        ),
        Quantity::SpectrumB => (
            Some(spectrum_value(&p, delta, omega, SpectrumKind::CollectiveB)),
            false,
        ),
        Quantity::SpectrumC => (
            Some(spectrum_value(&p, delta, omega, SpectrumKind::Vibrational)),
            false,
        ),
    };
    SweepRow {
        axis2: a2,
        axis1: a1,
        value,
        pole,
    }
}

/// Evaluate the sweep. Rows are axis2-major, axis1-minor; the parallel
/// evaluation merges by index, so worker count never changes the output.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepDataset> {
    spec.validate()?;
    let a1_values = spec.axis1.values();
    let a2_values: Vec<Option<f64>> = match &spec.axis2 {
        Some(axis2) => axis2.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let n1 = a1_values.len();
    let total = n1 * a2_values.len();
    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|idx| eval_point(spec, a1_values[idx % n1], a2_values[idx / n1]))
        .collect();
    Ok(SweepDataset {
        spec: spec.clone(),
        rows,
    })
}

/// One row of a response sweep over the probe detuning.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResponseRow {
    pub delta: f64,
    pub abs2_a: f64,
    pub abs2_b: f64,
    pub re_a: f64,
    pub im_a: f64,
    pub re_b: f64,
    pub im_b: f64,
    pub re_c: f64,
    pub im_c: f64,
    pub pole: bool,
}

/// Steady-state response evaluated on a detuning grid.
#[derive(Debug, Clone, Serialize)]
pub struct ResponseSeries {
    pub params: ModelParams,
    pub rows: Vec<ResponseRow>,
}

/// Evaluate the steady-state response on a strictly increasing detuning grid.
pub fn response_series(p: &ModelParams, grid: &[f64]) -> Result<ResponseSeries> {
    p.validate()?;
    validate_grid(grid)?;
    let rows = grid
        .iter()
        .map(|&delta| {
            let s = steady_state(p, delta);
            let (abs2_a, abs2_b) = response_intensity(&s, p.chi);
            ResponseRow {
                delta,
                abs2_a,
                abs2_b,
                re_a: s.a_s.re,
                im_a: s.a_s.im,
                re_b: s.b_s.re,
                im_b: s.b_s.im,
                re_c: s.c_s.re,
                im_c: s.c_s.im,
                pole: s.pole,
            }
        })
        .collect();
    Ok(ResponseSeries { params: *p, rows })
}
