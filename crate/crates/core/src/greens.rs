//! Radial Green's functions.
//!
//! A radial `G` with `ΔG = δ_p` has unit flux through every geodesic sphere,
//! so `G'(r) = 1/vol(∂D_r) = 1/(d·ω_d·Θ(r))`. `G` itself is only fixed up to
//! a constant; [`green_value`] integrates `G'` from a caller-chosen reference
//! radius, using the classical closed form as the anchor on Euclidean space.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jets::Jet2;
use crate::model_spaces::{density, ModelSpace, SpaceKind};
use crate::quadrature;
use crate::radial_ops::mean_curvature;

/// Absolute tolerance for [`green_value`] quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Distance kept from the antipode when integrating on the sphere.
pub const ANTIPODE_MARGIN: f64 = 1e-3;

const MAX_SEGMENTS: usize = 4000;

/// `Γ(k/2)` for a positive integer `k`, from `Γ(1) = 1`, `Γ(1/2) = √π`
/// and `Γ(x + 1) = x Γ(x)`.
fn gamma_half_integer(k: u32) -> f64 {
    debug_assert!(k >= 1);
    let (mut x, mut g) = if k.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, PI.sqrt())
    };
    let target = f64::from(k) / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume `ω_d = π^{d/2} / Γ(d/2 + 1)` of the unit ball in ℝ^d.
pub fn unit_ball_volume(d: u32) -> f64 {
    let half_power = if d.is_multiple_of(2) {
        PI.powi((d / 2) as i32)
    } else {
        PI.powi((d / 2) as i32) * PI.sqrt()
    };
    half_power / gamma_half_integer(d + 2)
}

/// Area `d·ω_d` of the unit sphere `S^{d-1}`.
pub fn unit_sphere_area(d: u32) -> f64 {
    f64::from(d) * unit_ball_volume(d)
}

/// Jet of `G'` at `r`: `(G', G'', G''')`.
pub fn green_derivative_jet(space: &ModelSpace, r: f64) -> Result<Jet2> {
    let theta = density(space, r)?;
    let recip = theta.recip().map_err(Error::jet(r))?;
    Ok(recip.scale(1.0 / unit_sphere_area(space.dim())))
}

/// `G'(r) = 1 / (d·ω_d·Θ(r))`.
pub fn green_derivative(space: &ModelSpace, r: f64) -> Result<f64> {
    Ok(green_derivative_jet(space, r)?.value)
}

/// Closed-form Euclidean Green's function: `log r / 2π` for `d = 2`,
/// otherwise `r^{2-d} / ((2-d) d ω_d)`.
pub fn euclidean_green(d: u32, r: f64) -> f64 {
    if d == 2 {
        r.ln() / (2.0 * PI)
    } else {
        r.powi(2 - d as i32) / ((2.0 - f64::from(d)) * unit_sphere_area(d))
    }
}

fn anchor(space: &ModelSpace, r_ref: f64) -> f64 {
    match space.id() {
        SpaceKind::Euclidean => euclidean_green(space.dim(), r_ref),
        _ => 0.0,
    }
}

fn check_quadrature_radius(space: &ModelSpace, r: f64) -> Result<()> {
    space.check_radius("green_value", r)?;
    if let Some(m) = space.r_max() {
        if r > m - ANTIPODE_MARGIN {
            return Err(Error::Domain {
                what: "green_value",
                r,
                domain: format!("(0, {}] on {}", m - ANTIPODE_MARGIN, space.name()),
            });
        }
    }
    Ok(())
}

/// `G(r_ref) + ∫_{r_ref}^{r} G'`, where `G(r_ref)` is the Euclidean closed
/// form on ℝⁿ and zero elsewhere.
pub fn green_value(space: &ModelSpace, r: f64, r_ref: f64) -> Result<f64> {
    check_quadrature_radius(space, r)?;
    check_quadrature_radius(space, r_ref)?;
    let area = unit_sphere_area(space.dim());
    // density() cannot fail inside the checked interval
    let integrand = |s: f64| density(space, s).map_or(f64::NAN, |t| 1.0 / (area * t.value));
    let integral = quadrature::integrate(integrand, r_ref, r, QUADRATURE_TOL, MAX_SEGMENTS)?;
    Ok(anchor(space, r_ref) + integral)
}

/// `vol(∂D_r) · G'(r)`; identically one.
pub fn flux(space: &ModelSpace, r: f64) -> Result<f64> {
    let area = unit_sphere_area(space.dim());
    let theta = density(space, r)?;
    Ok(area * theta.value * green_derivative(space, r)?)
}

/// `|G'' + H G'|`, the radial Laplacian of `G` away from the pole.
pub fn green_harmonicity_residual(space: &ModelSpace, r: f64) -> Result<f64> {
    let g = green_derivative_jet(space, r)?;
    let h = mean_curvature(space, r)?;
    Ok((g.d1 + h * g.value).abs())
}

/// Green's function of one space anchored at `r_ref`, with memoized values.
///
/// The cache only grows. Mutation goes through `&mut self`, so concurrent
/// users must serialize writes themselves.
#[derive(Debug, Clone)]
pub struct GreenProfile {
    space: ModelSpace,
    r_ref: f64,
    values: BTreeMap<u64, f64>,
}

impl GreenProfile {
    pub fn new(space: ModelSpace, r_ref: f64) -> Result<Self> {
        check_quadrature_radius(&space, r_ref)?;
        let mut values = BTreeMap::new();
        values.insert(r_ref.to_bits(), anchor(&space, r_ref));
        Ok(Self {
            space,
            r_ref,
            values,
        })
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn r_ref(&self) -> f64 {
        self.r_ref
    }

    pub fn value(&mut self, r: f64) -> Result<f64> {
        // positive floats order the same as their bit patterns
        if let Some(&v) = self.values.get(&r.to_bits()) {
            return Ok(v);
        }
        let v = green_value(&self.space, r, self.r_ref)?;
        self.values.insert(r.to_bits(), v);
        Ok(v)
    }

    /// Cached `(r, G(r))` pairs in increasing `r`.
    pub fn cached(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (f64::from_bits(k), v))
    }
}
