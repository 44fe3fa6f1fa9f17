//! Scalar Jacobi fields along a radial geodesic.
//!
//! In a model space the Jacobi operator is diagonal in a parallel frame, so
//! each curvature level `K` contributes the scalar solution `s_K` of
//! `y'' = -K y, y(0) = 0, y'(0) = 1`. The density is `Θ = Π s_K^mult` and the
//! principal curvatures of the geodesic sphere are `s_K'/s_K`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::Jet2;
use crate::model_spaces::CurvatureSpectrum;

fn check_radius(curvature: f64, r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain {
            what: "jacobi field",
            r,
            domain: "(0, inf)".to_string(),
        });
    }
    if curvature > 0.0 {
        let limit = PI / curvature.sqrt();
        if r >= limit {
            return Err(Error::ConjugatePoint {
                curvature,
                r,
                limit,
            });
        }
    }
    Ok(())
}

/// Jet of `s_K(r)`.
pub fn jacobi_solution(curvature: f64, r: f64) -> Result<Jet2> {
    check_radius(curvature, r)?;
    let jet = if curvature > 0.0 {
        let a = curvature.sqrt();
        let (s, c) = (a * r).sin_cos();
        Jet2::new(s / a, c, -a * s)
    } else if curvature < 0.0 {
        let a = (-curvature).sqrt();
        let (s, c) = ((a * r).sinh(), (a * r).cosh());
        Jet2::new(s / a, c, a * s)
    } else {
        Jet2::variable(r)
    };
    Ok(jet)
}

/// Jet of `Θ(r) = Π s_K(r)^mult`, the square root of the Jacobi Gram determinant.
pub fn theta_from_spectrum(spectrum: &CurvatureSpectrum, r: f64) -> Result<Jet2> {
    spectrum
        .levels()
        .iter()
        .try_fold(Jet2::constant(1.0), |acc, level| {
            let s = jacobi_solution(level.curvature, r)?;
            let p = s.powi(level.multiplicity as i32).map_err(Error::jet(r))?;
            Ok(acc * p)
        })
}

/// `y(r)` for `y'' = -K y, y(0) = 0, y'(0) = 1` by classical fixed-step RK4.
///
/// The step is shrunk to `r / ceil(r / step)` so the last step lands on `r`.
pub fn jacobi_integrate(curvature: f64, r: f64, step: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::validation(format!(
            "radius must be positive, got {r}"
        )));
    }
    if !(step > 0.0 && step <= r / 10.0) {
        return Err(Error::validation(format!(
            "step must lie in (0, r/10] = (0, {}], got {step}",
            r / 10.0
        )));
    }
    let steps = (r / step).ceil() as u64;
    let h = r / steps as f64;
    let accel = |y: f64| -curvature * y;
    let (mut y, mut v) = (0.0_f64, 1.0_f64);
    for _ in 0..steps {
        let (k1y, k1v) = (v, accel(y));
        let (k2y, k2v) = (v + 0.5 * h * k1v, accel(y + 0.5 * h * k1y));
        let (k3y, k3v) = (v + 0.5 * h * k2v, accel(y + 0.5 * h * k2y));
        let (k4y, k4v) = (v + h * k3v, accel(y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    Ok(y)
}

/// A principal curvature of the geodesic sphere with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrincipalCurvature {
    pub value: f64,
    /// `d/dr` of `value`.
    pub derivative: f64,
    pub multiplicity: u32,
}

/// Principal curvatures `s_K'/s_K` per spectrum level, with their radial derivatives.
pub fn principal_curvatures(
    spectrum: &CurvatureSpectrum,
    r: f64,
) -> Result<Vec<PrincipalCurvature>> {
    spectrum
        .levels()
        .iter()
        .map(|level| {
            let s = jacobi_solution(level.curvature, r)?;
            let value = s.d1 / s.value;
            // (s'/s)' = s''/s - (s'/s)²
            let derivative = s.d2 / s.value - value * value;
            Ok(PrincipalCurvature {
                value,
                derivative,
                multiplicity: level.multiplicity,
            })
        })
        .collect()
}

/// `(s_K'/s_K, mult)` for each level of the spectrum.
pub fn shape_eigenvalues(spectrum: &CurvatureSpectrum, r: f64) -> Result<Vec<(f64, u32)>> {
    Ok(principal_curvatures(spectrum, r)?
        .into_iter()
        .map(|p| (p.value, p.multiplicity))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solution_examples() {
        assert_eq!(jacobi_solution(0.0, 2.0).unwrap(), Jet2::new(2.0, 1.0, 0.0));
        let r = 0.8_f64;
        let s = jacobi_solution(1.0, r).unwrap();
        assert_eq!(s, Jet2::new(r.sin(), r.cos(), -r.sin()));
        let s = jacobi_solution(-4.0, r).unwrap();
        assert_relative_eq!(s.value, (2.0 * r).sinh() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(s.d1, (2.0 * r).cosh(), max_relative = 1e-15);
        assert_relative_eq!(s.d2, 2.0 * (2.0 * r).sinh(), max_relative = 1e-15);
    }

    #[test]
    fn solutions_satisfy_the_jacobi_equation() {
        for &k in &[-4.0, -1.0, -0.3, 0.0, 0.5, 1.0, 4.0] {
            for i in 1..20 {
                let r = 0.05 * f64::from(i);
                let s = jacobi_solution(k, r).unwrap();
                assert!((s.d2 + k * s.value).abs() < 1e-13 * (1.0 + s.value.abs()));
            }
        }
    }

    #[test]
    fn conjugate_point_detection() {
        assert!(jacobi_solution(1.0, PI - 1e-9).is_ok());
        match jacobi_solution(4.0, PI / 2.0) {
            Err(Error::ConjugatePoint { limit, .. }) => assert_relative_eq!(limit, PI / 2.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            jacobi_solution(-1.0, 0.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn theta_examples() {
        let r = 1.1_f64;
        for n in 1..=4u32 {
            let ch = CurvatureSpectrum::new([(-1.0, 2 * n - 2), (-4.0, 1)]).unwrap();
            let t = theta_from_spectrum(&ch, r).unwrap();
            assert_relative_eq!(
                t.value,
                r.sinh().powi(2 * n as i32 - 1) * r.cosh(),
                max_relative = 1e-14
            );
        }
        let s = CurvatureSpectrum::new([(1.0, 4)]).unwrap();
        assert_relative_eq!(
            theta_from_spectrum(&s, r).unwrap().value,
            r.sin().powi(4),
            max_relative = 1e-15
        );
        let e = CurvatureSpectrum::new([(0.0, 3)]).unwrap();
        assert_eq!(theta_from_spectrum(&e, r).unwrap().value, r.powi(3));
        let bad = CurvatureSpectrum::new([(-1.0, 2), (1.0, 1)]).unwrap();
        assert!(matches!(
            theta_from_spectrum(&bad, 3.5),
            Err(Error::ConjugatePoint { .. })
        ));
    }

    #[test]
    fn integration_examples() {
        assert!((jacobi_integrate(1.0, 1.0, 1e-3).unwrap() - 1f64.sin()).abs() < 1e-10);
        assert!((jacobi_integrate(0.0, 5.0, 1e-2).unwrap() - 5.0).abs() < 1e-12);
        assert!((jacobi_integrate(-4.0, 1.0, 1e-3).unwrap() - 2f64.sinh() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn integration_rejects_coarse_steps() {
        assert!(matches!(
            jacobi_integrate(1.0, 1.0, 0.2),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            jacobi_integrate(1.0, 1.0, 0.0),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            jacobi_integrate(1.0, -1.0, 0.01),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn integration_converges_at_fourth_order() {
        for &k in &[1.0, -1.0, -4.0] {
            let exact = jacobi_solution(k, 1.0).unwrap().value;
            let coarse = (jacobi_integrate(k, 1.0, 0.05).unwrap() - exact).abs();
            let fine = (jacobi_integrate(k, 1.0, 0.025).unwrap() - exact).abs();
            assert!(coarse / fine >= 15.0, "K = {k}: ratio {}", coarse / fine);
        }
    }

    #[test]
    fn small_radius_taylor_law() {
        // |s_K(r) - (r - K r³/6)| ~ C r⁵
        for &k in &[-4.0, -1.0, 1.0, 2.0] {
            let err =
                |r: f64| (jacobi_solution(k, r).unwrap().value - (r - k * r.powi(3) / 6.0)).abs();
            let (r1, r2) = (1e-2, 1e-3);
            let exponent = (err(r1) / err(r2)).log10() / (r1 / r2).log10();
            assert!(exponent >= 4.5, "K = {k}: exponent {exponent}");
            assert!(err(r1) <= (k * k / 120.0) * 1.01 * r1.powi(5) + 1e-18);
        }
    }

    #[test]
    fn shape_eigenvalue_examples() {
        let r = 0.9_f64;
        let s = CurvatureSpectrum::new([(1.0, 3)]).unwrap();
        let ev = shape_eigenvalues(&s, r).unwrap();
        assert_eq!(ev.len(), 1);
        assert_relative_eq!(ev[0].0, 1.0 / r.tan(), max_relative = 1e-15);
        assert_eq!(ev[0].1, 3);

        let n = 3u32;
        let ch = CurvatureSpectrum::new([(-1.0, 2 * n - 2), (-4.0, 1)]).unwrap();
        let ev = shape_eigenvalues(&ch, r).unwrap();
        // sorted by K: -4 first
        assert_relative_eq!(ev[0].0, 2.0 / (2.0 * r).tanh(), max_relative = 1e-15);
        assert_relative_eq!(ev[1].0, 1.0 / r.tanh(), max_relative = 1e-15);
        let trace: f64 = ev.iter().map(|&(v, m)| v * f64::from(m)).sum();
        let expected = f64::from(2 * n - 1) / r.tanh() + r.tanh();
        assert_relative_eq!(trace, expected, max_relative = 1e-14);

        let e = CurvatureSpectrum::new([(0.0, 4)]).unwrap();
        assert_eq!(shape_eigenvalues(&e, r).unwrap(), vec![(1.0 / r, 4)]);
    }

    #[test]
    fn principal_curvature_derivative_is_riccati() {
        // (s'/s)' = -K - (s'/s)²
        for &k in &[-4.0, -1.0, 0.0, 1.0] {
            let spec = CurvatureSpectrum::new([(k, 1)]).unwrap();
            let p = principal_curvatures(&spec, 0.7).unwrap()[0];
            assert_relative_eq!(
                p.derivative,
                -k - p.value * p.value,
                max_relative = 1e-13,
                epsilon = 1e-14
            );
        }
    }
}
