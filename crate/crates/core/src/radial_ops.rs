//! Mean curvature of geodesic spheres and the radial Laplacian.
//!
//! On a harmonic manifold a radial function satisfies `Δf = f'' + H f'`
//! with `H = Θ'/Θ`. The sign convention is the geometer's: `Δcos r = -n cos r`
//! on the unit sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spaces::{density, ModelSpace, RadialFunction, SpaceKind};

/// Default cutoff below which `|f'|` is treated as a critical point.
pub const CRITICAL_SLOPE: f64 = 1e-12;

/// `H(r) = Θ'(r)/Θ(r)`.
pub fn mean_curvature(space: &ModelSpace, r: f64) -> Result<f64> {
    let theta = density(space, r)?;
    Ok(theta.d1 / theta.value)
}

/// `f''(r) + H(r) f'(r)`.
pub fn radial_laplacian(space: &ModelSpace, f: &RadialFunction, r: f64) -> Result<f64> {
    let h = mean_curvature(space, r)?;
    let jet = f.eval(r)?;
    Ok(jet.d2 + h * jet.d1)
}

/// Right-hand side of a claimed identity `Δf = ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimRhs {
    /// `Δf = λ f`.
    Eigen { lambda: f64 },
    /// `Δf = c`, as in `Δr² = 2n`.
    Constant { value: f64 },
}

impl ClaimRhs {
    pub fn eigen(lambda: f64) -> Self {
        ClaimRhs::Eigen { lambda }
    }

    /// Value of the right-hand side given `f(r)`.
    pub fn target(&self, f_value: f64) -> f64 {
        match *self {
            ClaimRhs::Eigen { lambda } => lambda * f_value,
            ClaimRhs::Constant { value } => value,
        }
    }
}

/// The radial identities verified in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimId {
    /// `Δr² = 2d`.
    RSquared,
    /// `Δr^{2-d} = 0` (`Δ log r = 0` when `d = 2`).
    GreenPower,
    /// `Δcos r = -d cos r`.
    Cos,
    /// `Δcosh r = d cosh r`.
    Cosh,
    /// `Δf = 4(n+1) f` on ℂHⁿ, `8(n+1) f` on ℚHⁿ, `f = 1 + ((n+1)/n) sinh² r`.
    Sinh2,
}

impl ClaimId {
    pub const ALL: [ClaimId; 5] = [
        ClaimId::RSquared,
        ClaimId::GreenPower,
        ClaimId::Cos,
        ClaimId::Cosh,
        ClaimId::Sinh2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::RSquared => "r2",
            ClaimId::GreenPower => "rpow",
            ClaimId::Cos => "cos",
            ClaimId::Cosh => "cosh",
            ClaimId::Sinh2 => "sinh2",
        }
    }

    /// The family on which this identity holds for the given dimension data.
    pub fn home_family(self) -> &'static [SpaceKind] {
        match self {
            ClaimId::RSquared | ClaimId::GreenPower => &[SpaceKind::Euclidean],
            ClaimId::Cos => &[SpaceKind::Sphere],
            ClaimId::Cosh => &[SpaceKind::Hyperbolic],
            ClaimId::Sinh2 => &[
                SpaceKind::ComplexHyperbolic,
                SpaceKind::QuaternionicHyperbolic,
            ],
        }
    }
}

impl std::str::FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown claim '{s}'")))
    }
}

/// A claimed identity `Δf = rhs` on a given space.
#[derive(Debug, Clone)]
pub struct EigenClaim {
    pub space: ModelSpace,
    pub f: RadialFunction,
    pub rhs: ClaimRhs,
}

impl EigenClaim {
    pub fn new(space: ModelSpace, f: RadialFunction, rhs: ClaimRhs) -> Result<Self> {
        let finite = match rhs {
            ClaimRhs::Eigen { lambda } => lambda.is_finite(),
            ClaimRhs::Constant { value } => value.is_finite(),
        };
        if !finite {
            return Err(Error::validation("claim right-hand side must be finite"));
        }
        Ok(Self { space, f, rhs })
    }

    /// Instantiates a catalog identity on `space`.
    ///
    /// The dimension entering `cos`, `cosh`, `r²` and `r^{2-d}` is the real
    /// dimension of `space`; `sinh2` is only defined on ℂHⁿ and ℚHⁿ.
    pub fn catalog(id: ClaimId, space: &ModelSpace) -> Result<Self> {
        let d = space.dim();
        let df = f64::from(d);
        let (f, rhs) = match id {
            ClaimId::RSquared => (
                RadialFunction::power(2),
                ClaimRhs::Constant { value: 2.0 * df },
            ),
            ClaimId::GreenPower if d == 2 => (RadialFunction::log(), ClaimRhs::eigen(0.0)),
            ClaimId::GreenPower => (RadialFunction::power(2 - d as i32), ClaimRhs::eigen(0.0)),
            ClaimId::Cos => (RadialFunction::cos(), ClaimRhs::eigen(-df)),
            ClaimId::Cosh => (RadialFunction::cosh(), ClaimRhs::eigen(df)),
            ClaimId::Sinh2 => {
                let scale = match space.id() {
                    SpaceKind::ComplexHyperbolic => 4.0,
                    SpaceKind::QuaternionicHyperbolic => 8.0,
                    other => {
                        return Err(Error::validation(format!(
                            "claim sinh2 is defined on chn and qhn only, not {other}"
                        )))
                    }
                };
                let n = space.n();
                (
                    RadialFunction::hypergeometric(n),
                    ClaimRhs::eigen(scale * f64::from(n + 1)),
                )
            }
        };
        Self::new(space.clone(), f, rhs)
    }
}

/// `|Δf(r) - rhs(r)|` at each grid point.
pub fn eigen_residuals(claim: &EigenClaim, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::validation("residual grid is empty"));
    }
    grid.iter()
        .map(|&r| {
            let lap = radial_laplacian(&claim.space, &claim.f, r)?;
            let f = claim.f.eval(r)?;
            Ok((lap - claim.rhs.target(f.value)).abs())
        })
        .collect()
}

/// Maximum of [`eigen_residuals`] over the grid.
pub fn eigen_residual(claim: &EigenClaim, grid: &[f64]) -> Result<f64> {
    Ok(eigen_residuals(claim, grid)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// The mean curvature a harmonic manifold must have for `Δf = rhs` to hold:
/// `(rhs - f'') / f'`.
pub fn recover_mean_curvature(f: &RadialFunction, rhs: ClaimRhs, r: f64) -> Result<f64> {
    recover_mean_curvature_with(f, rhs, r, CRITICAL_SLOPE)
}

pub fn recover_mean_curvature_with(
    f: &RadialFunction,
    rhs: ClaimRhs,
    r: f64,
    threshold: f64,
) -> Result<f64> {
    let jet = f.eval(r)?;
    if !(jet.d1.abs() >= threshold) {
        return Err(Error::CriticalPoint {
            r,
            slope: jet.d1.abs(),
            threshold,
        });
    }
    Ok((rhs.target(jet.value) - jet.d2) / jet.d1)
}

/// Evenly spaced grid on `[start, end]` including both ends.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        end
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::make_model;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid() -> Vec<f64> {
        linspace(0.05, 3.0, 200)
    }

    #[test]
    fn mean_curvature_examples() {
        for n in 2..=6 {
            let s = make_model(SpaceKind::Sphere, n).unwrap();
            for &r in &[0.3_f64, 1.0, 2.5] {
                assert_relative_eq!(
                    mean_curvature(&s, r).unwrap(),
                    f64::from(n - 1) / r.tan(),
                    max_relative = 1e-13
                );
            }
        }
        let s3 = make_model(SpaceKind::Sphere, 3).unwrap();
        assert!(mean_curvature(&s3, PI / 2.0).unwrap().abs() < 1e-15);
        for n in 1..=4 {
            let ch = make_model(SpaceKind::ComplexHyperbolic, n).unwrap();
            for &r in &[0.3_f64, 1.0, 2.5] {
                let expected = f64::from(2 * n - 1) / r.tanh() + r.tanh();
                assert_relative_eq!(
                    mean_curvature(&ch, r).unwrap(),
                    expected,
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        for n in 2..=6 {
            let nf = f64::from(n);
            let e = make_model(SpaceKind::Euclidean, n).unwrap();
            let s = make_model(SpaceKind::Sphere, n).unwrap();
            let h = make_model(SpaceKind::Hyperbolic, n).unwrap();
            for &r in &[0.2_f64, 1.0, 2.9] {
                let lap = radial_laplacian(&e, &RadialFunction::power(2), r).unwrap();
                assert_relative_eq!(lap, 2.0 * nf, max_relative = 1e-14);
                let lap = radial_laplacian(&s, &RadialFunction::cos(), r).unwrap();
                assert_relative_eq!(lap, -nf * r.cos(), max_relative = 1e-12, epsilon = 1e-14);
                let lap = radial_laplacian(&h, &RadialFunction::cosh(), r).unwrap();
                assert_relative_eq!(lap, nf * r.cosh(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn catalog_eigenfunctions_have_zero_residual() {
        for n in 1..=4 {
            let ch = make_model(SpaceKind::ComplexHyperbolic, n).unwrap();
            let claim = EigenClaim::new(
                ch,
                RadialFunction::hypergeometric(n),
                ClaimRhs::eigen(4.0 * f64::from(n + 1)),
            )
            .unwrap();
            let res = eigen_residuals(&claim, &grid()).unwrap();
            // residual relative to the size of λf
            for (r, e) in grid().iter().zip(res) {
                let scale = claim.f.eval(*r).unwrap().value * 4.0 * f64::from(n + 1);
                assert!(e <= 1e-10 * scale.max(1.0), "CH^{n} r={r}: {e}");
            }
            let qh = make_model(SpaceKind::QuaternionicHyperbolic, n).unwrap();
            let claim = EigenClaim::catalog(ClaimId::Sinh2, &qh).unwrap();
            assert_eq!(claim.rhs, ClaimRhs::eigen(8.0 * f64::from(n + 1)));
            assert!(eigen_residual(&claim, &linspace(0.05, 1.0, 50)).unwrap() < 1e-10);
        }
        for n in 2..=6 {
            let e = make_model(SpaceKind::Euclidean, n).unwrap();
            let claim = EigenClaim::catalog(ClaimId::GreenPower, &e).unwrap();
            assert!(eigen_residual(&claim, &linspace(0.5, 3.0, 50)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn sinh2_needs_a_hyperbolic_family() {
        let s = make_model(SpaceKind::Sphere, 4).unwrap();
        assert!(matches!(
            EigenClaim::catalog(ClaimId::Sinh2, &s),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let e = make_model(SpaceKind::Euclidean, 3).unwrap();
        let claim = EigenClaim::catalog(ClaimId::RSquared, &e).unwrap();
        assert!(matches!(
            eigen_residual(&claim, &[]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn wrong_claim_has_large_residual() {
        let s = make_model(SpaceKind::Sphere, 4).unwrap();
        let claim = EigenClaim::catalog(ClaimId::Cosh, &s).unwrap();
        assert!(eigen_residual(&claim, &linspace(0.1, 3.0, 200)).unwrap() > 1.0);
    }

    #[test]
    fn recovery_examples() {
        for n in 2..=6u32 {
            let nf = f64::from(n);
            for &r in &[0.3_f64, 1.0, 2.0] {
                let h = recover_mean_curvature(&RadialFunction::cosh(), ClaimRhs::eigen(nf), r)
                    .unwrap();
                // (n cosh - cosh)/sinh
                assert_relative_eq!(h, (nf - 1.0) / r.tanh(), max_relative = 1e-13);
                let h = recover_mean_curvature(&RadialFunction::cos(), ClaimRhs::eigen(-nf), r)
                    .unwrap();
                assert_relative_eq!(h, (nf - 1.0) / r.tan(), max_relative = 1e-12);
            }
        }
        for n in 1..=4u32 {
            let f = RadialFunction::hypergeometric(n);
            for &r in &[0.3_f64, 1.0, 2.0] {
                let h =
                    recover_mean_curvature(&f, ClaimRhs::eigen(4.0 * f64::from(n + 1)), r).unwrap();
                let expected = f64::from(2 * n - 1) / r.tanh() + r.tanh();
                assert_relative_eq!(h, expected, max_relative = 1e-12);
                let h =
                    recover_mean_curvature(&f, ClaimRhs::eigen(8.0 * f64::from(n + 1)), r).unwrap();
                let expected = f64::from(4 * n - 1) / r.tanh() + 3.0 * r.tanh();
                assert_relative_eq!(h, expected, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn recovery_reports_critical_points() {
        match recover_mean_curvature(&RadialFunction::cos(), ClaimRhs::eigen(-3.0), 0.0) {
            Err(Error::CriticalPoint { r, .. }) => assert_eq!(r, 0.0),
            other => panic!("unexpected {other:?}"),
        }
        let flat = RadialFunction::new("1", |_| Ok(crate::Jet2::constant(1.0)));
        assert!(matches!(
            recover_mean_curvature(&flat, ClaimRhs::eigen(0.0), 1.0),
            Err(Error::CriticalPoint { .. })
        ));
    }

    #[test]
    fn identity_laplacian_is_mean_curvature() {
        for kind in SpaceKind::ALL {
            let s = make_model(kind, 3).unwrap();
            for &r in &[0.1, 0.7, 2.2] {
                assert_eq!(
                    radial_laplacian(&s, &RadialFunction::identity(), r).unwrap(),
                    mean_curvature(&s, r).unwrap()
                );
            }
        }
    }

    #[test]
    fn recovery_inverts_the_laplacian_on_catalog_claims() {
        let pairs: Vec<(ModelSpace, ClaimId)> = (2..=6)
            .flat_map(|n| {
                [
                    (
                        make_model(SpaceKind::Euclidean, n).unwrap(),
                        ClaimId::RSquared,
                    ),
                    (
                        make_model(SpaceKind::Euclidean, n).unwrap(),
                        ClaimId::GreenPower,
                    ),
                    (make_model(SpaceKind::Sphere, n).unwrap(), ClaimId::Cos),
                    (make_model(SpaceKind::Hyperbolic, n).unwrap(), ClaimId::Cosh),
                ]
            })
            .chain((1..=4).flat_map(|n| {
                [
                    (
                        make_model(SpaceKind::ComplexHyperbolic, n).unwrap(),
                        ClaimId::Sinh2,
                    ),
                    (
                        make_model(SpaceKind::QuaternionicHyperbolic, n).unwrap(),
                        ClaimId::Sinh2,
                    ),
                ]
            }))
            .collect();
        for (space, id) in pairs {
            let claim = EigenClaim::catalog(id, &space).unwrap();
            for r in linspace(0.1, 3.0, 40) {
                let recovered = recover_mean_curvature(&claim.f, claim.rhs, r).unwrap();
                let h = mean_curvature(&space, r).unwrap();
                assert!(
                    (recovered - h).abs() <= 1e-9 * h.abs().max(1.0),
                    "{space} {id:?} r={r}"
                );
            }
        }
    }

    #[test]
    fn sphere_antipodal_symmetry() {
        for n in 2..=6 {
            let s = make_model(SpaceKind::Sphere, n).unwrap();
            for r in linspace(0.1, 1.5, 15) {
                let a = radial_laplacian(&s, &RadialFunction::cos(), r).unwrap();
                let b = radial_laplacian(&s, &RadialFunction::cos(), PI - r).unwrap();
                assert!((a + b).abs() < 1e-12, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.1, 3.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[199], 3.0);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
        assert!(linspace(1.0, 2.0, 0).is_empty());
    }

    fn test_functions() -> Vec<RadialFunction> {
        vec![
            RadialFunction::identity(),
            RadialFunction::power(2),
            RadialFunction::cos(),
            RadialFunction::cosh(),
            RadialFunction::hypergeometric(2),
            RadialFunction::new("r + sin r", |x| Ok(x + x.sin())),
        ]
    }

    proptest! {
        // Δ(f^k) = k(k-1) f^{k-2} |f'|² + k f^{k-1} Δf
        #[test]
        fn power_rule(kind_idx in 0usize..5, n in 1u32..6, k in 2i32..6, r in 0.1f64..3.0) {
            let kind = SpaceKind::ALL[kind_idx];
            let space = make_model(kind, n.max(kind.min_n())).unwrap();
            for f in test_functions() {
                let fk = {
                    let f = f.clone();
                    RadialFunction::new("f^k", move |x| {
                        let inner = f.eval(x.value).map_err(|_| crate::jets::JetError::ZeroDivision)?;
                        inner.powi(k)
                    })
                };
                let jet = f.eval(r).unwrap();
                let lhs = radial_laplacian(&space, &fk, r).unwrap();
                let kf = f64::from(k);
                let rhs = kf * (kf - 1.0) * jet.value.powi(k - 2) * jet.d1 * jet.d1
                    + kf * jet.value.powi(k - 1) * radial_laplacian(&space, &f, r).unwrap();
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs - rhs).abs() <= 1e-9 * scale, "{} {}: {lhs} vs {rhs}", space, f.label());
            }
        }

        #[test]
        fn green_power_is_harmonic_in_flat_space(n in 3u32..12, r in 0.05f64..10.0) {
            // r^{2-n} = (r²)^{1-n/2}
            let e = make_model(SpaceKind::Euclidean, n).unwrap();
            let lap = radial_laplacian(&e, &RadialFunction::power(2 - n as i32), r).unwrap();
            let scale = r.powi(-(n as i32));
            prop_assert!(lap.abs() <= 1e-12 * scale * f64::from(n * n));
        }
    }
}
