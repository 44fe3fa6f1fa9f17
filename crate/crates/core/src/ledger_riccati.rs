//! The Einstein constant of a harmonic space by two independent routes.
//!
//! Ledger's formula reads `Ric = -3 ω''(0)` off the volume density at the
//! centre. The Riccati route uses the shape operator `h` of geodesic spheres:
//! `Ric = -tr h' - tr h²` at any radius.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::principal_curvatures;
use crate::model_spaces::{omega, CurvatureSpectrum, ModelSpace};

/// Base step for the central differences at the origin.
pub const LEDGER_BASE_STEP: f64 = 1e-2;
/// Richardson levels applied on top of the plain central difference.
pub const LEDGER_LEVELS: usize = 2;

/// `f''(0)` for an even function from samples at positive radii.
///
/// Uses `D(h) = 2 (f(h) - f(0)) / h²` on `h, h/2, …` and removes the
/// `h², h⁴, …` error terms by Richardson extrapolation. Fails if the last two
/// extrapolated estimates disagree by more than `1e-6 · max(1, |f''|)`.
pub fn even_second_derivative_at_zero(
    f: impl Fn(f64) -> Result<f64>,
    base_step: f64,
    levels: usize,
) -> Result<f64> {
    if !(base_step > 0.0) {
        return Err(Error::validation(format!(
            "base step must be positive, got {base_step}"
        )));
    }
    let f0 = f(0.0)?;
    let mut table = Vec::with_capacity(levels + 1);
    let mut h = base_step;
    for _ in 0..=levels {
        table.push(2.0 * (f(h)? - f0) / (h * h));
        h /= 2.0;
    }
    // Column k eliminates the h^{2k} term.
    let mut previous_best = table[0];
    for k in 1..=levels {
        let factor = 4f64.powi(k as i32);
        previous_best = table[table.len() - 1];
        table = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    let best = table[0];
    let residual = (best - previous_best).abs();
    if !best.is_finite() || residual > 1e-6 * best.abs().max(1.0) {
        return Err(Error::Extrapolation { residual });
    }
    Ok(best)
}

/// `-3 ω''(0)` with `ω''(0)` from extrapolated central differences on the
/// even extension of `ω`.
pub fn ledger_ricci(space: &ModelSpace) -> Result<f64> {
    let second = even_second_derivative_at_zero(
        |r| Ok(omega(space, r)?.value),
        LEDGER_BASE_STEP,
        LEDGER_LEVELS,
    )?;
    Ok(-3.0 * second)
}

/// `-tr h' - tr h²` for an arbitrary curvature spectrum.
pub fn riccati_ricci_for_spectrum(spectrum: &CurvatureSpectrum, r: f64) -> Result<f64> {
    let mut trace_derivative = 0.0;
    let mut trace_square = 0.0;
    for p in principal_curvatures(spectrum, r)? {
        let m = f64::from(p.multiplicity);
        trace_derivative += m * p.derivative;
        trace_square += m * p.value * p.value;
    }
    Ok(-trace_derivative - trace_square)
}

/// `-tr h' - tr h²` on the geodesic sphere of radius `r`.
pub fn riccati_ricci(space: &ModelSpace, r: f64) -> Result<f64> {
    space.check_radius("riccati_ricci", r)?;
    riccati_ricci_for_spectrum(space.spectrum(), r)
}

/// `tr h² - (tr h)²/(d-1)` for an arbitrary spectrum.
///
/// Evaluated as `Σ mult (κ - κ̄)²` around the mean principal curvature `κ̄`,
/// which is the same quantity and is nonnegative in floating point.
pub fn umbilicity_defect_for_spectrum(spectrum: &CurvatureSpectrum, r: f64) -> Result<f64> {
    let curvatures = principal_curvatures(spectrum, r)?;
    let total = f64::from(spectrum.total_multiplicity());
    let mean = curvatures
        .iter()
        .map(|p| f64::from(p.multiplicity) * p.value)
        .sum::<f64>()
        / total;
    Ok(curvatures
        .iter()
        .map(|p| f64::from(p.multiplicity) * (p.value - mean).powi(2))
        .sum())
}

pub fn umbilicity_defect(space: &ModelSpace, r: f64) -> Result<f64> {
    space.check_radius("umbilicity_defect", r)?;
    umbilicity_defect_for_spectrum(space.spectrum(), r)
}

/// Both Ricci routes for one space, as printed by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct RicciComparison {
    pub space: String,
    pub einstein_constant: f64,
    pub ledger: f64,
    pub riccati_min: f64,
    pub riccati_max: f64,
    /// Largest `|ledger - riccati(r)|` over the grid.
    pub gap: f64,
}

pub fn compare_ricci(space: &ModelSpace, grid: &[f64]) -> Result<RicciComparison> {
    if grid.is_empty() {
        return Err(Error::validation("riccati grid is empty"));
    }
    let ledger = ledger_ricci(space)?;
    let values = grid
        .iter()
        .map(|&r| riccati_ricci(space, r))
        .collect::<Result<Vec<_>>>()?;
    let riccati_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let riccati_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gap = values
        .iter()
        .map(|v| (v - ledger).abs())
        .fold(0.0, f64::max);
    Ok(RicciComparison {
        space: space.name(),
        einstein_constant: space.einstein_constant(),
        ledger,
        riccati_min,
        riccati_max,
        gap,
    })
}
