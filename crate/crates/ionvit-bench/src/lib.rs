//! Shared fixtures for the criterion benchmarks.

use ionvit::params::ModelParams;

/// Strong-coupling reference point with moderate decay.
pub fn strong_coupling_red() -> ModelParams {
    ModelParams::red(10.0, 10.0, 5.0, 5.0)
}

/// A stable blue-sideband point.
pub fn stable_blue() -> ModelParams {
    ModelParams::blue(1.0, 1.0, 5.0, 5.0)
}
