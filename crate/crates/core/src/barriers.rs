//! Scalar margins that decide convexity of the lifted barrier hypersurfaces,
//! and the constants `C` and `R_k`.
//!
//! Each hypersurface margin is a positive multiple of the lifted mean
//! curvature, so its sign decides 3-convexity. Margins are returned raw;
//! callers compare them against radii thresholds themselves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::linalg::{is_finite_vec, orthonormal_complement};
use crate::potential::{phi_jet, Centre, PointConfiguration};
use crate::roots::{bisect_newton, poly_deriv, poly_eval};
use crate::surfaces::BarrierSurface;
use crate::{Error, Result, Vec3};

/// A line `point + s·direction` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Vec3,
    pub direction: Vec3,
}

impl Line {
    pub fn new(point: Vec3, direction: Vec3) -> Result<Self> {
        let n = direction.norm();
        if !is_finite_vec(&point) || !is_finite_vec(&direction) || n == 0.0 {
            return Err(Error::InvalidParams("axis needs a finite point and nonzero direction".into()));
        }
        Ok(Line {
            point,
            direction: direction / n,
        })
    }

    /// Component of `x - point` orthogonal to the line.
    pub fn radial(&self, x: &Vec3) -> Vec3 {
        let d = x - self.point;
        d - self.direction * d.dot(&self.direction)
    }

    pub fn distance(&self, x: &Vec3) -> f64 {
        self.radial(x).norm()
    }

    pub fn axial(&self, x: &Vec3) -> f64 {
        (x - self.point).dot(&self.direction)
    }
}

fn nonzero(x: &Vec3) -> Result<f64> {
    let n = x.norm();
    if n == 0.0 {
        return Err(Error::InvalidParams("margin is undefined at the origin".into()));
    }
    Ok(n)
}

/// `⟨∇φ, x⟩ + 4φ`; positive iff the lifted sphere through `x` (centred at the
/// origin) is strictly 3-convex there.
pub fn sphere_hyp_margin(config: &PointConfiguration, x: &Vec3) -> Result<f64> {
    nonzero(x)?;
    let jet = phi_jet(config, x)?;
    Ok(jet.gradient.dot(x) + 4.0 * jet.value)
}

/// `⟨∇φ, ν⟩ + 2φ/r` with `ν` the outward radial unit vector from `axis` and
/// `r` the distance to it.
pub fn cylinder_hyp_margin(config: &PointConfiguration, x: &Vec3, axis: &Line) -> Result<f64> {
    let radial = axis.radial(x);
    let r = radial.norm();
    if r <= 1e-12 * (1.0 + (x - axis.point).norm()) {
        return Err(Error::OnAxis);
    }
    let jet = phi_jet(config, x)?;
    Ok(jet.gradient.dot(&(radial / r)) + 2.0 * jet.value / r)
}

/// `-⟨∇φ, direction⟩`, for a plane whose normal `direction` points away from
/// the centres.
pub fn plane_hyp_margin(config: &PointConfiguration, x: &Vec3, direction: &Vec3) -> Result<f64> {
    let n = nonzero(direction)?;
    let jet = phi_jet(config, x)?;
    Ok(-jet.gradient.dot(direction) / n)
}

/// Rejects planes `⟨x, direction⟩ = offset` that do not leave every centre
/// strictly on the side opposite to `direction`.
pub fn check_plane_separates(config: &PointConfiguration, direction: &Vec3, offset: f64) -> Result<()> {
    let n = nonzero(direction)?;
    for (i, c) in config.centres().iter().enumerate() {
        if c.position.dot(direction) / n >= offset {
            return Err(Error::InvalidParams(format!(
                "centre {i} is not strictly behind the plane (normal must point away from all centres)"
            )));
        }
    }
    Ok(())
}

/// Sign data of the lifted sphere through `x` as a 2-dimensional barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Codim2Margins {
    /// `⟨∇φ, x⟩ + 2φ`.
    pub minor1: f64,
    /// `|∇φ|² + 2φ⟨∇φ, x⟩/|x|²`.
    pub det_aux: f64,
}

impl Codim2Margins {
    /// Lifted form positive definite iff `minor1 > 0` and `det_aux < 0`.
    pub fn convex(&self) -> bool {
        self.minor1 > 0.0 && self.det_aux < 0.0
    }

    /// `min(minor1, -det_aux)`: positive exactly on the convex sign pattern.
    pub fn margin(&self) -> f64 {
        self.minor1.min(-self.det_aux)
    }
}

pub fn sphere_codim2_margins(config: &PointConfiguration, x: &Vec3) -> Result<Codim2Margins> {
    let r = nonzero(x)?;
    let jet = phi_jet(config, x)?;
    let gx = jet.gradient.dot(x);
    Ok(Codim2Margins {
        minor1: gx + 2.0 * jet.value,
        det_aux: jet.gradient.norm_squared() + 2.0 * jet.value * gx / (r * r),
    })
}

/// Factors `(F₁, F₂)` with `det(lifted sphere form) = F₁·F₂`, where `F₁` is
/// the repeated tangential eigenvalue `φ^{-1/2} minor1 / (2φ|x|)` and
/// `F₂ = -det_aux / (4φ³)`.
pub fn sphere_codim2_factors(config: &PointConfiguration, x: &Vec3) -> Result<(f64, f64)> {
    let m = sphere_codim2_margins(config, x)?;
    let phi = phi_jet(config, x)?.value;
    let r = x.norm();
    Ok((m.minor1 / (phi.sqrt() * 2.0 * phi * r), -m.det_aux / (4.0 * phi.powi(3))))
}

/// The three scalars whose positivity is equivalent to strict convexity of
/// the lifted two-foci ellipsoid at chart point `(·, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidMargins {
    /// `2φ II(u,u) - ⟨∇φ, ν⟩`.
    pub e1: f64,
    /// `2φ II(v,v) - ⟨∇φ, ν⟩`.
    pub e2: f64,
    /// `E1·⟨∇φ, ν⟩ - ⟨∇φ, v⟩²`.
    pub e4: f64,
}

impl EllipsoidMargins {
    pub fn all_positive(&self) -> bool {
        self.e1 > 0.0 && self.e2 > 0.0 && self.e4 > 0.0
    }
}

/// Ellipsoid scalars for the unit-charge centres `(0, 0, ±a)` with mass `m`.
/// The values do not depend on the azimuth.
pub fn ellipsoid_inequalities(
    a: f64,
    m: f64,
    extra_centres: &[Centre],
    r: f64,
    beta: f64,
) -> Result<EllipsoidMargins> {
    if !extra_centres.is_empty() {
        return Err(Error::InvalidParams(
            "ellipsoid inequalities are derived for exactly the two foci as centres".into(),
        ));
    }
    let surface = BarrierSurface::two_foci_ellipsoid(a, r);
    surface.validate()?;
    let config = PointConfiguration::with_unit_centres(m, &[Vec3::new(0.0, 0.0, a), Vec3::new(0.0, 0.0, -a)])
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let data = surface.surface_point([0.0, beta])?;
    let jet = phi_jet(&config, &data.x)?;
    let g_nu = jet.gradient.dot(&data.nu);
    let g_v = jet.gradient.dot(&data.v);
    let e1 = 2.0 * jet.value * data.sff_r3[(0, 0)] - g_nu;
    let e2 = 2.0 * jet.value * data.sff_r3[(1, 1)] - g_nu;
    Ok(EllipsoidMargins {
        e1,
        e2,
        e4: e1 * g_nu - g_v * g_v,
    })
}

/// `-x³ + 4x² + 5x + 2`, ascending coefficients.
const C_POLY: [f64; 4] = [2.0, 5.0, 4.0, -1.0];

/// `-4x³ + 16x² + 2x + (k - 2)`, ascending coefficients.
pub fn rk_polynomial(k: usize) -> [f64; 4] {
    [k as f64 - 2.0, 2.0, 16.0, -4.0]
}

fn polished_root(coeffs: &[f64], lo: f64, hi: f64) -> f64 {
    bisect_newton(|x| poly_eval(coeffs, x), |x| poly_deriv(coeffs, x), lo, hi, 1e-8, 1e-15)
        .expect("bracket endpoints have opposite signs")
}

/// Real root of `-x³ + 4x² + 5x + 2` (≈ 5.065): spheres of radius above
/// `C·max|p_i|` lift to strictly convex 2-dimensional barriers.
pub fn constant_c() -> f64 {
    // p(5) = 2 > 0 > p(6) = -40
    polished_root(&C_POLY, 5.0, 6.0)
}

/// Positive root of `-4x³ + 16x² + 2x + (k - 2)`, which exceeds 4.
///
/// For `k = 2` the polynomial also has the roots 0 and `(16 - √288)/8 < 0`;
/// the positive one is returned. The cubic is decreasing on `[4, ∞)` and
/// positive at 4, so `[4, 4 + k]` brackets exactly that root.
pub fn constant_rk(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(polished_root(&rk_polynomial(k), 4.0, 4.0 + k as f64))
}

/// Which margin a [`margin_curve`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginFamily {
    /// Spheres `|x| = parameter`, hypersurface margin.
    Sphere,
    /// Cylinders of radius `parameter` around the axis.
    Cylinder(Line),
    /// Planes `⟨x, direction⟩ = parameter`.
    Plane(Vec3),
    /// Spheres `|x| = parameter`, margin `min(minor1, -det_aux)`.
    SphereCodim2,
}

/// Smallest sampled margin over one surface of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginSample {
    pub parameter: f64,
    pub min_margin: f64,
    pub argmin: [f64; 3],
    pub samples: usize,
    pub skipped: usize,
}

/// Largest distance of a centre from `axis`.
pub fn max_axial_radius(config: &PointConfiguration, axis: &Line) -> f64 {
    config
        .centres()
        .iter()
        .map(|c| axis.distance(&c.position))
        .fold(0.0, f64::max)
}

fn margin_at(config: &PointConfiguration, family: &MarginFamily, x: &Vec3) -> Result<f64> {
    match family {
        MarginFamily::Sphere => sphere_hyp_margin(config, x),
        MarginFamily::Cylinder(axis) => cylinder_hyp_margin(config, x, axis),
        MarginFamily::Plane(direction) => plane_hyp_margin(config, x, direction),
        MarginFamily::SphereCodim2 => Ok(sphere_codim2_margins(config, x)?.margin()),
    }
}

/// Draws a point on the family member with the given parameter.
///
/// Cylinders are sampled over the axial extent of the centres padded by the
/// radius plus the diameter; planes over a square of that size around the
/// projected centroid.
fn sample_point(config: &PointConfiguration, family: &MarginFamily, parameter: f64, rng: &mut ChaCha8Rng) -> Vec3 {
    let pad = parameter.abs() + config.diameter() + 1.0;
    match family {
        MarginFamily::Sphere | MarginFamily::SphereCodim2 => Vec3::from(UnitSphere.sample(rng)) * parameter,
        MarginFamily::Cylinder(axis) => {
            let (lo, hi) = config
                .centres()
                .iter()
                .map(|c| axis.axial(&c.position))
                .fold((0.0_f64, 0.0_f64), |(lo, hi), s| (lo.min(s), hi.max(s)));
            let s = rng.random_range(lo - pad..hi + pad);
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            let (e1, e2) = orthonormal_complement(&axis.direction);
            axis.point + axis.direction * s + (e1 * angle.cos() + e2 * angle.sin()) * parameter
        }
        MarginFamily::Plane(direction) => {
            let n = direction.normalize();
            let (e1, e2) = orthonormal_complement(&n);
            let c = config.centroid().unwrap_or_else(Vec3::zeros);
            let foot = c - n * c.dot(&n) + n * parameter;
            foot + e1 * rng.random_range(-pad..pad) + e2 * rng.random_range(-pad..pad)
        }
    }
}

/// Minimum of the family margin over `samples` random points of the member
/// with the given parameter. Singular samples are skipped and counted.
pub fn margin_curve(
    config: &PointConfiguration,
    family: &MarginFamily,
    parameters: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<MarginSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(parameters.len());
    for &parameter in parameters {
        if !parameter.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite parameter {parameter}")));
        }
        let mut best = (f64::INFINITY, Vec3::zeros());
        let mut skipped = 0;
        for _ in 0..samples {
            let x = sample_point(config, family, parameter, &mut rng);
            match margin_at(config, family, &x) {
                Ok(m) if m < best.0 => best = (m, x),
                Ok(_) => {}
                Err(Error::SingularPoint { .. }) | Err(Error::OnAxis) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        out.push(MarginSample {
            parameter,
            min_margin: best.0,
            argmin: best.1.into(),
            samples: samples - skipped,
            skipped,
        });
    }
    Ok(out)
}

/// Largest radius `r` of a geometric ladder from `1e-3·min nonzero |p_i|` up
/// to `r_max` such that every sphere up to `r` showed the convex codim-2
/// sign pattern and a positive hypersurface margin at all samples.
///
/// Returns `None` when the smallest radius already fails, or when all
/// centres sit at the origin.
pub fn empirical_small_radius(
    config: &PointConfiguration,
    r_max: f64,
    steps: usize,
    samples: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let min_norm = config
        .centres()
        .iter()
        .map(|c| c.position.norm())
        .filter(|n| *n > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min_norm.is_finite() || steps < 2 {
        return Ok(None);
    }
    let r_min = 1e-3 * min_norm;
    let ratio = (r_max / r_min).powf(1.0 / (steps - 1) as f64);
    let radii: Vec<f64> = (0..steps).map(|i| r_min * ratio.powi(i as i32)).collect();
    let hyp = margin_curve(config, &MarginFamily::Sphere, &radii, samples, seed)?;
    let codim2 = margin_curve(config, &MarginFamily::SphereCodim2, &radii, samples, seed)?;
    let mut last = None;
    for (h, c) in hyp.iter().zip(&codim2) {
        if h.min_margin > 0.0 && c.min_margin > 0.0 {
            last = Some(h.parameter);
        } else {
            break;
        }
    }
    Ok(last)
}
