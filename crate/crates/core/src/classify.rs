//! Match an observed radial profile against the model catalog.
//!
//! Equal mean curvature or equal volume density pins a harmonic manifold to a
//! model space only under the hypotheses of the classical rigidity theorems
//! (simply connected harmonic, plus Kähler or quaternionic Kähler for ℂHⁿ and
//! ℚHⁿ). The classifier reports which catalog profile the samples reproduce;
//! it cannot certify those hypotheses from samples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spaces::{density, make_model, omega, ModelSpace, RadialFunction, SpaceKind};
use crate::radial_ops::{mean_curvature, recover_mean_curvature, ClaimRhs};

pub const DEFAULT_THRESHOLD: f64 = 1e-6;
pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `H(r)`, compared directly.
    MeanCurvature,
    /// `Θ(r)`, compared on a log scale.
    Density,
    /// `ω(r)`, compared on a log scale.
    Omega,
}

impl Quantity {
    fn is_logarithmic(self) -> bool {
        !matches!(self, Quantity::MeanCurvature)
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::MeanCurvature => "mean_curvature",
            Quantity::Density => "density",
            Quantity::Omega => "omega",
        }
    }

    /// Catalog prediction for this quantity.
    pub fn predict(self, space: &ModelSpace, r: f64) -> Result<f64> {
        match self {
            Quantity::MeanCurvature => mean_curvature(space, r),
            Quantity::Density => Ok(density(space, r)?.value),
            Quantity::Omega => Ok(omega(space, r)?.value),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean_curvature" | "H" | "h" => Ok(Quantity::MeanCurvature),
            "density" | "theta" => Ok(Quantity::Density),
            "omega" => Ok(Quantity::Omega),
            other => Err(Error::validation(format!("unknown quantity '{other}'"))),
        }
    }
}

/// Validated samples of one radial quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedProfile {
    quantity: Quantity,
    samples: Vec<(f64, f64)>,
    dim: u32,
}

impl ObservedProfile {
    pub fn new(quantity: Quantity, samples: Vec<(f64, f64)>, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::validation(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(Error::validation(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        for (i, &(r, v)) in samples.iter().enumerate() {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::validation(format!(
                    "sample {i}: radius {r} is not positive"
                )));
            }
            if !v.is_finite() {
                return Err(Error::validation(format!(
                    "sample {i}: value {v} is not finite"
                )));
            }
            if quantity.is_logarithmic() && v <= 0.0 {
                return Err(Error::validation(format!(
                    "sample {i}: {quantity} must be positive, got {v}"
                )));
            }
            if i > 0 && r <= samples[i - 1].0 {
                return Err(Error::validation(format!(
                    "sample {i}: radii must be strictly increasing ({} then {r})",
                    samples[i - 1].0
                )));
            }
        }
        Ok(Self {
            quantity,
            samples,
            dim,
        })
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Samples of a catalog space's own profile.
    pub fn exact(quantity: Quantity, space: &ModelSpace, radii: &[f64]) -> Result<Self> {
        let samples = radii
            .iter()
            .map(|&r| Ok((r, quantity.predict(space, r)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(quantity, samples, space.dim())
    }
}

/// Catalog spaces of real dimension `d`, in catalog order.
pub fn candidates_for_dimension(d: u32) -> Vec<ModelSpace> {
    let mut out = Vec::new();
    if d < 2 {
        return out;
    }
    for kind in SpaceKind::ALL {
        let factor = kind.dim_factor();
        if d.is_multiple_of(factor) {
            if let Ok(space) = make_model(kind, d / factor) {
                out.push(space);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRef {
    pub id: SpaceKind,
    pub n: u32,
}

impl From<&ModelSpace> for SpaceRef {
    fn from(s: &ModelSpace) -> Self {
        SpaceRef {
            id: s.id(),
            n: s.n(),
        }
    }
}

impl SpaceRef {
    pub fn resolve(&self) -> Result<ModelSpace> {
        make_model(self.id, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResidual {
    pub space: SpaceRef,
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub best: Option<SpaceRef>,
    /// Smallest residual over the table.
    pub residual: f64,
    pub table: Vec<CandidateResidual>,
    pub threshold: f64,
}

fn candidate_residual(obs: &ObservedProfile, space: &ModelSpace) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(r, observed) in &obs.samples {
        let predicted = obs.quantity.predict(space, r)?;
        let gap = if obs.quantity.is_logarithmic() {
            (observed.ln() - predicted.ln()).abs()
        } else {
            (observed - predicted).abs()
        };
        // NaN compares false, so treat it as an infinite gap
        worst = if gap.is_nan() {
            f64::INFINITY
        } else {
            worst.max(gap)
        };
    }
    Ok(worst)
}

// First minimum wins, so ties resolve in catalog order.
fn argmin(table: &[CandidateResidual]) -> Option<&CandidateResidual> {
    table
        .iter()
        .fold(None, |acc: Option<&CandidateResidual>, c| match acc {
            Some(a) if a.residual <= c.residual => Some(a),
            _ => Some(c),
        })
}

/// Sup-norm residual against every admissible candidate; `best` is the
/// argmin when it does not exceed `threshold`. Ties go to the earlier
/// catalog entry. Sphere candidates are skipped when a sample reaches `π`.
pub fn classify_profile(obs: &ObservedProfile, threshold: f64) -> Result<ClassificationResult> {
    if !(threshold >= 0.0) {
        return Err(Error::validation(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }
    let r_last = obs.samples.last().map_or(0.0, |s| s.0);
    let mut table = Vec::new();
    for space in candidates_for_dimension(obs.dim) {
        if space.r_max().is_some_and(|m| r_last >= m) {
            continue;
        }
        table.push(CandidateResidual {
            space: SpaceRef::from(&space),
            name: space.name(),
            residual: candidate_residual(obs, &space)?,
        });
    }
    let winner = argmin(&table);
    let residual = winner.map_or(f64::INFINITY, |c| c.residual);
    let best = winner.filter(|c| c.residual <= threshold).map(|c| c.space);
    Ok(ClassificationResult {
        best,
        residual,
        table,
        threshold,
    })
}

/// Converts `Δf = rhs` into the mean-curvature profile it forces, then
/// classifies that profile.
pub fn classify_eigenclaim(
    f: &RadialFunction,
    rhs: ClaimRhs,
    dim: u32,
    grid: &[f64],
    threshold: f64,
) -> Result<ClassificationResult> {
    let samples = grid
        .iter()
        .map(|&r| Ok((r, recover_mean_curvature(f, rhs, r)?)))
        .collect::<Result<Vec<_>>>()?;
    let obs = ObservedProfile::new(Quantity::MeanCurvature, samples, dim)?;
    classify_profile(&obs, threshold)
}
