//! The five model geometries and their closed-form radial densities.
//!
//! Each [`ModelSpace`] is pinned by its family and the family parameter `n`.
//! The complex and quaternionic hyperbolic spaces use the normalization with
//! sectional curvature in `[-4, -1]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet2, JetError};

/// Model geometry families, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
    /// ℂHⁿ; Kähler, recorded as a label only.
    ComplexHyperbolic,
    /// ℚHⁿ; quaternionic Kähler, recorded as a label only.
    QuaternionicHyperbolic,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 5] = [
        SpaceKind::Euclidean,
        SpaceKind::Sphere,
        SpaceKind::Hyperbolic,
        SpaceKind::ComplexHyperbolic,
        SpaceKind::QuaternionicHyperbolic,
    ];

    /// Short command-line name.
    pub fn short_name(self) -> &'static str {
        match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Sphere => "sphere",
            SpaceKind::Hyperbolic => "hyperbolic",
            SpaceKind::ComplexHyperbolic => "chn",
            SpaceKind::QuaternionicHyperbolic => "qhn",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            SpaceKind::Euclidean => "R",
            SpaceKind::Sphere => "S",
            SpaceKind::Hyperbolic => "H",
            SpaceKind::ComplexHyperbolic => "CH",
            SpaceKind::QuaternionicHyperbolic => "QH",
        }
    }

    /// Smallest admissible family parameter.
    pub fn min_n(self) -> u32 {
        match self {
            SpaceKind::ComplexHyperbolic | SpaceKind::QuaternionicHyperbolic => 1,
            _ => 2,
        }
    }

    /// Real dimension per unit of `n`.
    pub fn dim_factor(self) -> u32 {
        match self {
            SpaceKind::ComplexHyperbolic => 2,
            SpaceKind::QuaternionicHyperbolic => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "rn" | "r" => Ok(SpaceKind::Euclidean),
            "sphere" | "sn" | "s" => Ok(SpaceKind::Sphere),
            "hyperbolic" | "hn" | "h" => Ok(SpaceKind::Hyperbolic),
            "chn" | "ch" | "complex_hyperbolic" => Ok(SpaceKind::ComplexHyperbolic),
            "qhn" | "qh" | "quaternionic_hyperbolic" => Ok(SpaceKind::QuaternionicHyperbolic),
            other => Err(Error::validation(format!("unknown space family '{other}'"))),
        }
    }
}

/// One eigenvalue of the radial Jacobi operator with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureLevel {
    pub curvature: f64,
    pub multiplicity: u32,
}

/// Sectional curvatures of the planes containing a radial direction.
///
/// Entries are sorted by curvature with no repeats; multiplicities sum to
/// `d - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CurvatureLevel>", into = "Vec<CurvatureLevel>")]
pub struct CurvatureSpectrum {
    levels: Vec<CurvatureLevel>,
}

impl CurvatureSpectrum {
    /// Builds a spectrum, sorting by curvature and merging repeated levels.
    /// Zero-multiplicity entries are dropped.
    pub fn new(levels: impl IntoIterator<Item = (f64, u32)>) -> Result<Self> {
        let mut sorted: Vec<CurvatureLevel> = Vec::new();
        for (curvature, multiplicity) in levels {
            if !curvature.is_finite() {
                return Err(Error::validation(format!(
                    "non-finite curvature {curvature}"
                )));
            }
            if multiplicity > 0 {
                sorted.push(CurvatureLevel {
                    curvature,
                    multiplicity,
                });
            }
        }
        sorted.sort_by(|a, b| a.curvature.total_cmp(&b.curvature));
        let mut merged: Vec<CurvatureLevel> = Vec::with_capacity(sorted.len());
        for level in sorted {
            match merged.last_mut() {
                Some(last) if last.curvature == level.curvature => {
                    last.multiplicity += level.multiplicity
                }
                _ => merged.push(level),
            }
        }
        if merged.is_empty() {
            return Err(Error::validation("curvature spectrum is empty"));
        }
        Ok(Self { levels: merged })
    }

    pub fn levels(&self) -> &[CurvatureLevel] {
        &self.levels
    }

    /// Sum of multiplicities, i.e. `d - 1`.
    pub fn total_multiplicity(&self) -> u32 {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// Radial Ricci curvature `Σ K·mult`.
    pub fn ricci(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.curvature * f64::from(l.multiplicity))
            .sum()
    }

    /// First conjugate distance `π/√K_max`, if any level is positive.
    pub fn conjugate_radius(&self) -> Option<f64> {
        let k_max = self.levels.last()?.curvature;
        (k_max > 0.0).then(|| PI / k_max.sqrt())
    }

    pub fn distinct_levels(&self) -> usize {
        self.levels.len()
    }
}

impl TryFrom<Vec<CurvatureLevel>> for CurvatureSpectrum {
    type Error = Error;

    fn try_from(levels: Vec<CurvatureLevel>) -> Result<Self> {
        Self::new(levels.into_iter().map(|l| (l.curvature, l.multiplicity)))
    }
}

impl From<CurvatureSpectrum> for Vec<CurvatureLevel> {
    fn from(s: CurvatureSpectrum) -> Self {
        s.levels
    }
}

/// A catalog geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelSpaceRecord")]
pub struct ModelSpace {
    id: SpaceKind,
    n: u32,
    #[serde(rename = "d")]
    dim: u32,
    spectrum: CurvatureSpectrum,
    /// `None` means unbounded.
    r_max: Option<f64>,
    einstein_constant: f64,
}

#[derive(Deserialize)]
struct ModelSpaceRecord {
    id: SpaceKind,
    n: u32,
    d: u32,
    spectrum: CurvatureSpectrum,
    r_max: Option<f64>,
    einstein_constant: f64,
}

impl TryFrom<ModelSpaceRecord> for ModelSpace {
    type Error = Error;

    fn try_from(rec: ModelSpaceRecord) -> Result<Self> {
        let space = make_model(rec.id, rec.n)?;
        let consistent = space.dim == rec.d
            && space.spectrum == rec.spectrum
            && space.r_max == rec.r_max
            && space.einstein_constant == rec.einstein_constant;
        if !consistent {
            return Err(Error::validation(format!(
                "record for {} disagrees with the catalog",
                space.name()
            )));
        }
        Ok(space)
    }
}

/// Looks up the catalog entry for a family and parameter.
pub fn make_model(id: SpaceKind, n: u32) -> Result<ModelSpace> {
    if n < id.min_n() {
        return Err(Error::validation(format!(
            "{id} requires n >= {}, got {n}",
            id.min_n()
        )));
    }
    let dim = n
        .checked_mul(id.dim_factor())
        .ok_or_else(|| Error::validation(format!("n = {n} overflows the dimension")))?;
    let levels = match id {
        SpaceKind::Euclidean => vec![(0.0, n - 1)],
        SpaceKind::Sphere => vec![(1.0, n - 1)],
        SpaceKind::Hyperbolic => vec![(-1.0, n - 1)],
        SpaceKind::ComplexHyperbolic => vec![(-1.0, 2 * n - 2), (-4.0, 1)],
        SpaceKind::QuaternionicHyperbolic => vec![(-1.0, 4 * n - 4), (-4.0, 3)],
    };
    let spectrum = CurvatureSpectrum::new(levels)?;
    let einstein_constant = match id {
        SpaceKind::Euclidean => 0.0,
        SpaceKind::Sphere => f64::from(n - 1),
        SpaceKind::Hyperbolic => -f64::from(n - 1),
        SpaceKind::ComplexHyperbolic => -f64::from(2 * n + 2),
        SpaceKind::QuaternionicHyperbolic => -f64::from(4 * n + 8),
    };
    let r_max = (id == SpaceKind::Sphere).then_some(PI);
    Ok(ModelSpace {
        id,
        n,
        dim,
        spectrum,
        r_max,
        einstein_constant,
    })
}

impl ModelSpace {
    pub fn id(&self) -> SpaceKind {
        self.id
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Real dimension.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn spectrum(&self) -> &CurvatureSpectrum {
        &self.spectrum
    }

    pub fn r_max(&self) -> Option<f64> {
        self.r_max
    }

    pub fn einstein_constant(&self) -> f64 {
        self.einstein_constant
    }

    pub fn is_compact(&self) -> bool {
        self.r_max.is_some()
    }

    /// Display name such as `S^3` or `CH^2`.
    pub fn name(&self) -> String {
        format!("{}^{}", self.id.symbol(), self.n)
    }

    pub fn contains(&self, r: f64) -> bool {
        r.is_finite() && r > 0.0 && self.r_max.is_none_or(|m| r < m)
    }

    pub(crate) fn domain_text(&self) -> String {
        match self.r_max {
            Some(m) => format!("(0, {m}) on {}", self.name()),
            None => format!("(0, inf) on {}", self.name()),
        }
    }

    pub(crate) fn check_radius(&self, what: &'static str, r: f64) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::Domain {
                what,
                r,
                domain: self.domain_text(),
            })
        }
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Jet of `Θ(r)`, the area element of the geodesic sphere per unit solid angle.
pub fn density(space: &ModelSpace, r: f64) -> Result<Jet2> {
    space.check_radius("density", r)?;
    let x = Jet2::variable(r);
    let n = space.n as i32;
    let theta = match space.id {
        SpaceKind::Euclidean => x.powi(space.dim as i32 - 1),
        SpaceKind::Sphere => x.sin().powi(n - 1),
        SpaceKind::Hyperbolic => x.sinh().powi(n - 1),
        SpaceKind::ComplexHyperbolic => x.sinh().powi(2 * n - 1).map(|s| s * x.cosh()),
        SpaceKind::QuaternionicHyperbolic => {
            let c3 = x.cosh().powi(3).map_err(Error::jet(r))?;
            x.sinh().powi(4 * n - 1).map(|s| s * c3)
        }
    };
    theta.map_err(Error::jet(r))
}

/// Jet of the volume density `ω(r) = Θ(r)/r^{d-1}`; `r = 0` is allowed.
pub fn omega(space: &ModelSpace, r: f64) -> Result<Jet2> {
    if r != 0.0 {
        space.check_radius("omega", r)?;
    }
    let x = Jet2::variable(r);
    let n = space.n as i32;
    let w = match space.id {
        SpaceKind::Euclidean => Ok(Jet2::constant(1.0)),
        SpaceKind::Sphere => x.sinc().powi(n - 1),
        SpaceKind::Hyperbolic => x.sinhc().powi(n - 1),
        SpaceKind::ComplexHyperbolic => x.sinhc().powi(2 * n - 1).map(|s| s * x.cosh()),
        SpaceKind::QuaternionicHyperbolic => {
            let c3 = x.cosh().powi(3).map_err(Error::jet(r))?;
            x.sinhc().powi(4 * n - 1).map(|s| s * c3)
        }
    };
    w.map_err(Error::jet(r))
}

type JetFn = dyn Fn(Jet2) -> std::result::Result<Jet2, JetError> + Send + Sync;

/// A labelled radial function `r ↦ (f, f', f'')`.
#[derive(Clone)]
pub struct RadialFunction {
    label: String,
    body: Arc<JetFn>,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl RadialFunction {
    /// Wraps a jet expression in the radial variable.
    pub fn new(
        label: impl Into<String>,
        body: impl Fn(Jet2) -> std::result::Result<Jet2, JetError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            body: Arc::new(body),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, r: f64) -> Result<Jet2> {
        let jet = (self.body)(Jet2::variable(r)).map_err(Error::jet(r))?;
        if !jet.is_finite() {
            return Err(Error::Domain {
                what: "radial function",
                r,
                domain: format!("finite values of {}", self.label),
            });
        }
        Ok(jet)
    }

    /// The distance function `r` itself.
    pub fn identity() -> Self {
        Self::new("r", Ok)
    }

    /// `r^k` by repeated multiplication.
    pub fn power(k: i32) -> Self {
        Self::new(format!("r^{k}"), move |x| x.powi(k))
    }

    pub fn log() -> Self {
        Self::new("log r", |x| x.ln())
    }

    pub fn cos() -> Self {
        Self::new("cos r", |x| Ok(x.cos()))
    }

    pub fn cosh() -> Self {
        Self::new("cosh r", |x| Ok(x.cosh()))
    }

    /// `1 + ((n+1)/n) sinh² r`, the radial eigenfunction on ℂHⁿ and ℚHⁿ.
    pub fn hypergeometric(n: u32) -> Self {
        let c = f64::from(n + 1) / f64::from(n);
        Self::new(format!("1 + ({}/{n}) sinh^2 r", n + 1), move |x| {
            let s = x.sinh();
            Ok(s * s * c + 1.0)
        })
    }
}
