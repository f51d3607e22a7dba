//! Steady-state response and quantum fluctuation spectra of two trapped-ion
//! ensembles coupled to a shared collective vibrational mode.
//!
//! The model is three coupled bosonic modes: the collective excitation modes
//! `A` (driven) and `B` of the two ensembles, and the vibrational mode `c`.
//! Depending on whether the addressing laser sits on the first red or blue
//! sideband, the vibration couples to the ensembles through a beam-splitter or
//! a parametric interaction, producing vibration-induced transparency (VIT)
//! windows or vibration-induced absorption (VIA) peaks in the driven
//! ensemble's response.
//!
//! The crate is organized in two layers that deliberately never share code
//! paths:
//!
//! * closed-form evaluation of steady states ([`model`]) and fluctuation
//!   spectra ([`spectra`]),
//! * an independent numerical layer ([`oracle`]) that builds the underlying
//!   linear drift systems and computes the same quantities by linear solves,
//!   eigendecomposition, RK4 integration, transfer matrices, and Lyapunov
//!   covariances.
//!
//! [`dressed`] reconstructs the few-excitation level structure by exact
//! diagonalization on truncated Fock bases, and [`sweep`]/[`lineshape`]/
//! [`output`] provide the parameter-sweep, lineshape-classification, and
//! CSV/JSON/SVG machinery used by the CLI.

pub mod dressed;
pub mod error;
pub mod lineshape;
pub mod model;
pub mod oracle;
pub mod output;
pub mod params;
pub mod quad;
pub mod spectra;
pub mod sweep;

pub use error::Error;
pub use model::{EffectiveQuantities, SteadyState};
pub use params::{MicroscopicParams, ModelParams, SidebandCase};
pub use spectra::SpectrumSeries;

/// Convenience alias used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Largest modulus among complex entries.
pub(crate) fn max_modulus<'a, I>(entries: I) -> f64
where
    I: IntoIterator<Item = &'a num_complex::Complex64>,
{
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}
