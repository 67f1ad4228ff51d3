//! Barrier surfaces in `U` and the second fundamental form of the
//! circle-invariant hypersurfaces lying over them.
//!
//! Every family carries an *inward* Euclidean unit normal `ν` and a tangent
//! frame `(u, v)` with `u × v = ν`. Closed surfaces (spheres, ellipsoids)
//! point into the bounded component, cylinders toward the axis, and a plane
//! along its stored normal, which callers orient away from the centres so the
//! "interior" is the centre-free half-space.
//!
//! The lift to the total space uses the frame `(φ^{-1/2}u, φ^{-1/2}v, φ^{1/2}ξ)`
//! and the `g`-unit normal `ν̃ = φ^{-1/2}ν`.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::linalg::{is_finite_vec, orthonormal_complement};
use crate::potential::{phi_jet, PointConfiguration};
use crate::roots::bisect_newton;
use crate::{Error, Mat3, Result, Vec3};

fn origin() -> [f64; 3] {
    [0.0; 3]
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_extent() -> f64 {
    10.0
}

/// A parametrized surface family in `U`.
///
/// JSON form: `{ "family": "sphere" | "cylinder" | "plane" | "ellipsoid2" | "ellipsoidN", ... }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum BarrierSurface {
    /// `|x - centre| = r`. Chart `(azimuth, polar)`.
    #[serde(rename = "sphere")]
    Sphere {
        #[serde(default = "origin")]
        centre: [f64; 3],
        r: f64,
    },
    /// Points at distance `r` from the line `point + s·direction`.
    /// Chart `(angle, s)`, with `|s| ≤ half_length` used only for sampling.
    #[serde(rename = "cylinder")]
    Cylinder {
        #[serde(default = "origin")]
        point: [f64; 3],
        #[serde(default = "z_axis")]
        direction: [f64; 3],
        r: f64,
        #[serde(default = "default_extent")]
        half_length: f64,
    },
    /// `⟨x, normal⟩ = offset` (normal is normalized). Chart: in-plane
    /// coordinates, sampled over `[-half_width, half_width]²`.
    #[serde(rename = "plane")]
    Plane {
        normal: [f64; 3],
        offset: f64,
        #[serde(default = "default_extent")]
        half_width: f64,
    },
    /// `|x - (0,0,a)| + |x + (0,0,a)| = 2a cosh r`. Chart `(α, β)`.
    #[serde(rename = "ellipsoid2")]
    TwoFociEllipsoid { a: f64, r: f64 },
    /// `Σ |x - f_i| = level`, charted by shooting rays from the foci centroid
    /// in direction `(azimuth, polar)`.
    #[serde(rename = "ellipsoidN")]
    MultiFociEllipsoid { foci: Vec<[f64; 3]>, level: f64 },
}

/// Euclidean differential data of a surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePointData {
    pub x: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    /// Inward Euclidean unit normal, `u × v`.
    pub nu: Vec3,
    /// Euclidean second fundamental form with respect to `nu`, basis `(u, v)`.
    pub sff_r3: Matrix2<f64>,
    /// `⟨H^{R³}, ν⟩ = trace(sff_r3)`.
    pub mean_r3: f64,
}

/// Second fundamental form of the lifted hypersurface in the ordered basis
/// `(φ^{-1/2}u, φ^{-1/2}v, φ^{1/2}ξ)` with respect to `ν̃ = φ^{-1/2}ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptedSff {
    pub matrix: Mat3,
    /// `ν̃` written as a Euclidean vector.
    pub normal: Vec3,
    pub phi: f64,
}

/// How a chart coordinate is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamAxis {
    /// Half-open `[lo, hi)`, wrapping.
    Periodic(f64, f64),
    /// Closed `[lo, hi]`, uniform.
    Interval(f64, f64),
    /// Closed `[0, π]`; random samples are area-uniform (`acos(1 - 2u)`).
    Polar,
}

impl ParamAxis {
    /// `i`-th of `n` grid values.
    pub fn grid_value(&self, i: usize, n: usize) -> f64 {
        let closed = |lo: f64, hi: f64| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        match *self {
            ParamAxis::Periodic(lo, hi) => lo + (hi - lo) * i as f64 / n.max(1) as f64,
            ParamAxis::Interval(lo, hi) => closed(lo, hi),
            ParamAxis::Polar => closed(0.0, PI),
        }
    }

    /// Maps a uniform variate in `[0, 1)` to a parameter value.
    pub fn from_unit(&self, w: f64) -> f64 {
        match *self {
            ParamAxis::Periodic(lo, hi) | ParamAxis::Interval(lo, hi) => lo + (hi - lo) * w,
            ParamAxis::Polar => (1.0 - 2.0 * w).clamp(-1.0, 1.0).acos(),
        }
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive and finite, got {value}")))
    }
}

fn unit(name: &str, v: [f64; 3]) -> Result<Vec3> {
    let v = Vec3::from(v);
    let n = v.norm();
    if !is_finite_vec(&v) || n == 0.0 || !n.is_finite() {
        return Err(Error::InvalidParams(format!("{name} must be a finite nonzero vector")));
    }
    Ok(v / n)
}

fn finite_point(name: &str, v: [f64; 3]) -> Result<Vec3> {
    let v = Vec3::from(v);
    if !is_finite_vec(&v) {
        return Err(Error::InvalidParams(format!("{name} must be finite")));
    }
    Ok(v)
}

/// Sum of distances to the foci.
pub fn foci_distance_sum(foci: &[Vec3], x: &Vec3) -> f64 {
    foci.iter().map(|f| (x - f).norm()).sum()
}

fn check_polar(polar: f64) -> Result<()> {
    if !(0.0..=PI).contains(&polar) {
        return Err(Error::ChartDomain(format!("polar angle {polar} outside [0, π]")));
    }
    Ok(())
}

/// Frame `(u, v, ν)` of a sphere-like chart: `u = e_α` and `v = e_β`.
fn azimuth_frame(azimuth: f64, polar: f64) -> (Vec3, Vec3, Vec3) {
    let (sa, ca) = azimuth.sin_cos();
    let (sb, cb) = polar.sin_cos();
    let radial = Vec3::new(sb * ca, sb * sa, cb);
    let u = Vec3::new(-sa, ca, 0.0);
    let v = Vec3::new(cb * ca, cb * sa, -sb);
    (radial, u, v)
}

impl BarrierSurface {
    pub fn sphere(centre: Vec3, r: f64) -> Self {
        BarrierSurface::Sphere {
            centre: centre.into(),
            r,
        }
    }

    /// Cylinder around the line through `point` along `direction`.
    pub fn cylinder(point: Vec3, direction: Vec3, r: f64, half_length: f64) -> Self {
        BarrierSurface::Cylinder {
            point: point.into(),
            direction: direction.into(),
            r,
            half_length,
        }
    }

    pub fn plane(normal: Vec3, offset: f64, half_width: f64) -> Self {
        BarrierSurface::Plane {
            normal: normal.into(),
            offset,
            half_width,
        }
    }

    pub fn two_foci_ellipsoid(a: f64, r: f64) -> Self {
        BarrierSurface::TwoFociEllipsoid { a, r }
    }

    pub fn multi_foci_ellipsoid(foci: &[Vec3], level: f64) -> Self {
        BarrierSurface::MultiFociEllipsoid {
            foci: foci.iter().map(|f| (*f).into()).collect(),
            level,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            BarrierSurface::Sphere { .. } => "sphere",
            BarrierSurface::Cylinder { .. } => "cylinder",
            BarrierSurface::Plane { .. } => "plane",
            BarrierSurface::TwoFociEllipsoid { .. } => "ellipsoid2",
            BarrierSurface::MultiFociEllipsoid { .. } => "ellipsoidN",
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let surface: BarrierSurface = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParams(format!("malformed surface JSON: {e}")))?;
        surface.validate()?;
        Ok(surface)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BarrierSurface::Sphere { centre, r } => {
                finite_point("sphere centre", *centre)?;
                positive("sphere radius", *r)
            }
            BarrierSurface::Cylinder {
                point,
                direction,
                r,
                half_length,
            } => {
                finite_point("cylinder axis point", *point)?;
                unit("cylinder direction", *direction)?;
                positive("cylinder radius", *r)?;
                positive("cylinder half_length", *half_length)
            }
            BarrierSurface::Plane {
                normal,
                offset,
                half_width,
            } => {
                unit("plane normal", *normal)?;
                if !offset.is_finite() {
                    return Err(Error::InvalidParams("plane offset must be finite".into()));
                }
                positive("plane half_width", *half_width)
            }
            BarrierSurface::TwoFociEllipsoid { a, r } => {
                positive("ellipsoid focal half-distance a", *a)?;
                positive("ellipsoid parameter r", *r)
            }
            BarrierSurface::MultiFociEllipsoid { foci, level } => {
                if foci.is_empty() {
                    return Err(Error::InvalidParams("ellipsoidN needs at least one focus".into()));
                }
                let pts = foci
                    .iter()
                    .map(|f| finite_point("focus", *f))
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..pts.len() {
                    for j in 0..i {
                        if (pts[i] - pts[j]).norm() == 0.0 {
                            return Err(Error::InvalidParams(format!("foci {j} and {i} coincide")));
                        }
                    }
                }
                let centroid = pts.iter().sum::<Vec3>() / pts.len() as f64;
                let at_centroid = foci_distance_sum(&pts, &centroid);
                if !level.is_finite() || *level <= at_centroid {
                    return Err(Error::InvalidParams(format!(
                        "ellipsoidN level {level} must exceed the distance sum at the foci centroid ({at_centroid})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Sampling description of the two chart coordinates.
    pub fn chart_axes(&self) -> [ParamAxis; 2] {
        match self {
            BarrierSurface::Sphere { .. }
            | BarrierSurface::TwoFociEllipsoid { .. }
            | BarrierSurface::MultiFociEllipsoid { .. } => [ParamAxis::Periodic(0.0, TAU), ParamAxis::Polar],
            BarrierSurface::Cylinder { half_length, .. } => [
                ParamAxis::Periodic(0.0, TAU),
                ParamAxis::Interval(-half_length, *half_length),
            ],
            BarrierSurface::Plane { half_width, .. } => [
                ParamAxis::Interval(-half_width, *half_width),
                ParamAxis::Interval(-half_width, *half_width),
            ],
        }
    }

    /// Position, frame and Euclidean curvature at chart parameters `params`.
    pub fn surface_point(&self, params: [f64; 2]) -> Result<SurfacePointData> {
        if !(params[0].is_finite() && params[1].is_finite()) {
            return Err(Error::ChartDomain(format!("non-finite parameters {params:?}")));
        }
        match self {
            BarrierSurface::Sphere { centre, r } => {
                let [azimuth, polar] = params;
                check_polar(polar)?;
                let (radial, u, v) = azimuth_frame(azimuth, polar);
                let k = 1.0 / r;
                Ok(SurfacePointData {
                    x: Vec3::from(*centre) + radial * *r,
                    u,
                    v,
                    nu: u.cross(&v),
                    sff_r3: Matrix2::new(k, 0.0, 0.0, k),
                    mean_r3: 2.0 * k,
                })
            }
            BarrierSurface::Cylinder {
                point, direction, r, ..
            } => {
                let [angle, s] = params;
                let d = Vec3::from(*direction).normalize();
                let (e1, e2) = orthonormal_complement(&d);
                let (sn, cs) = angle.sin_cos();
                let radial = e1 * cs + e2 * sn;
                let u = -e1 * sn + e2 * cs;
                let v = -d;
                Ok(SurfacePointData {
                    x: Vec3::from(*point) + d * s + radial * *r,
                    u,
                    v,
                    nu: u.cross(&v),
                    sff_r3: Matrix2::new(1.0 / r, 0.0, 0.0, 0.0),
                    mean_r3: 1.0 / r,
                })
            }
            BarrierSurface::Plane { normal, offset, .. } => {
                let n = Vec3::from(*normal).normalize();
                let (u, v) = orthonormal_complement(&n);
                Ok(SurfacePointData {
                    x: n * *offset + u * params[0] + v * params[1],
                    u,
                    v,
                    nu: u.cross(&v),
                    sff_r3: Matrix2::zeros(),
                    mean_r3: 0.0,
                })
            }
            BarrierSurface::TwoFociEllipsoid { a, r } => two_foci_point(*a, *r, params),
            BarrierSurface::MultiFociEllipsoid { foci, level } => {
                let pts: Vec<Vec3> = foci.iter().map(|f| Vec3::from(*f)).collect();
                multi_foci_point(&pts, *level, params)
            }
        }
    }
}

fn two_foci_point(a: f64, r: f64, [alpha, beta]: [f64; 2]) -> Result<SurfacePointData> {
    check_polar(beta)?;
    let (sh, ch) = (r.sinh(), r.cosh());
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let x = Vec3::new(a * sh * sb * ca, a * sh * sb * sa, a * ch * cb);
    // A² = (cosh r - cos β)(cosh r + cos β); |∂_β x| = aA.
    let big_a = ((ch - cb) * (ch + cb)).sqrt();
    let u = Vec3::new(-sa, ca, 0.0);
    let v = Vec3::new(a * sh * cb * ca, a * sh * cb * sa, -a * ch * sb) / (a * big_a);
    let g_uu = ch / (a * big_a * sh);
    let g_vv = sh * ch / (a * big_a.powi(3));
    Ok(SurfacePointData {
        x,
        u,
        v,
        nu: u.cross(&v),
        sff_r3: Matrix2::new(g_uu, 0.0, 0.0, g_vv),
        mean_r3: g_uu + g_vv,
    })
}

fn multi_foci_point(foci: &[Vec3], level: f64, [azimuth, polar]: [f64; 2]) -> Result<SurfacePointData> {
    check_polar(polar)?;
    let centroid = foci.iter().sum::<Vec3>() / foci.len() as f64;
    let (dir, e_az, _) = azimuth_frame(azimuth, polar);
    let spread: f64 = foci.iter().map(|f| (f - centroid).norm()).sum();
    let k = foci.len() as f64;
    // F(c + t d) ≥ k t - Σ|f_i - c|, so this bracket always reaches the level.
    let t_hi = (level + spread) / k + 1e-9 * (1.0 + level);
    let along = |t: f64| foci_distance_sum(foci, &(centroid + dir * t)) - level;
    let slope = |t: f64| {
        let x = centroid + dir * t;
        foci.iter().map(|f| (x - f).normalize().dot(&dir)).sum::<f64>()
    };
    let scale = 1.0 + t_hi;
    let t = bisect_newton(along, slope, 0.0, t_hi, 1e-8 * scale, 1e-15 * scale)
        .map_err(|e| Error::SolverFailure(format!("ray ({azimuth}, {polar}): {e}")))?;
    let x = centroid + dir * t;

    let diameter = foci
        .iter()
        .flat_map(|p| foci.iter().map(move |q| (p - q).norm()))
        .fold(0.0, f64::max);
    let guard = 1e-9 * (1.0 + diameter);
    let mut grad = Vec3::zeros();
    let mut hess = Mat3::zeros();
    for (i, f) in foci.iter().enumerate() {
        let d = x - f;
        let dist = d.norm();
        if dist <= guard {
            return Err(Error::singular(&x, i, guard));
        }
        let dir_i = d / dist;
        grad += dir_i;
        hess += (Mat3::identity() - dir_i * dir_i.transpose()) / dist;
    }
    let grad_norm = grad.norm();
    if grad_norm <= 1e-12 {
        return Err(Error::SolverFailure("distance sum is critical on the level set".into()));
    }
    let nu = -grad / grad_norm;
    let projected = e_az - nu * nu.dot(&e_az);
    let u = if projected.norm() > 0.1 {
        projected.normalize()
    } else {
        orthonormal_complement(&nu).0
    };
    let v = nu.cross(&u);
    // Level-set formula: II = Hess F / |∇F| on the tangent plane.
    let sff = Matrix2::new(
        u.dot(&(hess * u)),
        u.dot(&(hess * v)),
        v.dot(&(hess * u)),
        v.dot(&(hess * v)),
    ) / grad_norm;
    let sff = (sff + sff.transpose()) * 0.5;
    Ok(SurfacePointData {
        x,
        u,
        v,
        nu: u.cross(&v),
        sff_r3: sff,
        mean_r3: sff.trace(),
    })
}

/// Lifted second fundamental form of `π⁻¹(Σ)` at `data.x`.
pub fn lifted_sff(config: &PointConfiguration, data: &SurfacePointData) -> Result<AdaptedSff> {
    let jet = phi_jet(config, &data.x)?;
    let phi = jet.value;
    let grad = jet.gradient;
    let inv_sqrt = phi.sqrt().recip();
    let normal = data.nu * inv_sqrt;
    let half_inv = 1.0 / (2.0 * phi);
    let radial = half_inv * grad.dot(&normal);
    let s = &data.sff_r3;

    let uu = inv_sqrt * s[(0, 0)] - radial;
    let vv = inv_sqrt * s[(1, 1)] - radial;
    let uv = inv_sqrt * 0.5 * (s[(0, 1)] + s[(1, 0)]);
    let u_fibre = -half_inv * data.u.cross(&grad).dot(&normal);
    let v_fibre = -half_inv * data.v.cross(&grad).dot(&normal);
    let matrix = Mat3::new(
        uu, uv, u_fibre, //
        uv, vv, v_fibre, //
        u_fibre, v_fibre, radial,
    );
    Ok(AdaptedSff { matrix, normal, phi })
}

/// Coefficient `h` with `H^X = h ν̃`, from
/// `H^X = -(1/(2φ²)) ∇^⊥φ + (1/φ) H^{R³}`.
pub fn lifted_mean_curvature(config: &PointConfiguration, data: &SurfacePointData) -> Result<f64> {
    let jet = phi_jet(config, &data.x)?;
    let phi = jet.value;
    let grad_perp = data.nu * jet.gradient.dot(&data.nu);
    let mean_vec = data.nu * data.mean_r3;
    let h_vec = -grad_perp / (2.0 * phi * phi) + mean_vec / phi;
    // g(H, ν̃) = φ ⟨H, φ^{-1/2}ν⟩ on horizontal vectors.
    Ok(phi * h_vec.dot(&(data.nu / phi.sqrt())))
}
