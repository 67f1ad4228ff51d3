//! Circle-invariant closed geodesics and invariant surface areas.
//!
//! The fibre over `x` is a closed geodesic exactly when `∇φ(x) = 0`, and its
//! length is `2π/√φ(x)`. Critical points are located by damped Newton
//! iteration from seeds spread over the convex hull of the centres.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::sym_eigenvalues;
use crate::potential::{phi_jet, PointConfiguration};
use crate::{Error, Result, Vec3};

/// Counts of positive, negative and (numerically) zero Hessian eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_saddle(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: [f64; 3],
    /// `|∇φ(x)|`.
    pub residual: f64,
    /// `2π/√φ(x)`.
    pub length: f64,
    pub in_hull: bool,
    pub hessian_signature: Signature,
    /// Set when the Hessian is numerically singular, which happens on
    /// positive-dimensional critical sets of symmetric configurations.
    pub degenerate: bool,
}

/// Seeds beyond the pairwise midpoints and triple centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedStrategy {
    /// Random convex combinations of the centres.
    pub random: usize,
    pub seed: u64,
}

impl Default for SeedStrategy {
    fn default() -> Self {
        SeedStrategy { random: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSearch {
    /// Distinct critical points in lexicographic order of coordinates.
    pub points: Vec<CriticalPoint>,
    pub seeds: usize,
    /// Seeds that ran away, hit a centre or stalled.
    pub non_converged: usize,
}

/// Length of the fibre over `x`.
pub fn circle_length(config: &PointConfiguration, x: &Vec3) -> Result<f64> {
    Ok(TAU / phi_jet(config, x)?.value.sqrt())
}

/// Area `2π|p_i - p_j|` of the invariant sphere over the segment `p_i p_j`.
pub fn invariant_surface_area(config: &PointConfiguration, i: usize, j: usize) -> Result<f64> {
    let n = config.len();
    if i >= n {
        return Err(Error::InvalidIndex(i));
    }
    if j >= n || j == i {
        return Err(Error::InvalidIndex(j));
    }
    let c = config.centres();
    Ok(TAU * (c[i].position - c[j].position).norm())
}

/// Residual tolerance `1e-10 · Σc_i / (2 diam²)` for accepting a critical point.
pub fn residual_tolerance(config: &PointConfiguration) -> f64 {
    let d = config.diameter().max(f64::MIN_POSITIVE);
    1e-10 * config.total_charge() as f64 / (2.0 * d * d)
}

fn seeds(config: &PointConfiguration, strategy: &SeedStrategy) -> Vec<Vec3> {
    let pts: Vec<Vec3> = config.centres().iter().map(|c| c.position).collect();
    let k = pts.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            out.push((pts[i] + pts[j]) * 0.5);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                out.push((pts[i] + pts[j] + pts[l]) / 3.0);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    for _ in 0..strategy.random {
        // Normalized exponentials are uniform on the simplex.
        let w: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = w.iter().sum();
        out.push(pts.iter().zip(&w).map(|(p, wi)| p * (wi / total)).sum());
    }
    out
}

/// Damped Newton on `∇φ = 0`. The Newton step is a descent direction for
/// `|∇φ|²/2`, so halving it until that decreases is always possible.
fn newton(config: &PointConfiguration, start: Vec3, tol: f64) -> Option<(Vec3, f64)> {
    let centroid = config.centroid()?;
    let bound = 10.0 * (config.diameter() + 1.0);
    let mut x = start;
    let mut jet = phi_jet(config, &x).ok()?;
    let mut g = jet.gradient.norm();
    for _ in 0..100 {
        if g <= 1e-3 * tol {
            break;
        }
        let step = jet.hessian.lu().solve(&(-jet.gradient))?;
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial = x + step * lambda;
            if let Ok(tj) = phi_jet(config, &trial) {
                let tg = tj.gradient.norm();
                if tg * tg <= g * g * (1.0 - 2e-4 * lambda) {
                    x = trial;
                    jet = tj;
                    g = tg;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved || (x - centroid).norm() > bound {
            break;
        }
    }
    (g <= tol && (x - centroid).norm() <= bound).then_some((x, g))
}

/// Finds the distinct zeros of `∇φ` reachable from the seeds.
///
/// Configurations with fewer than two centres have none.
pub fn find_critical_points(config: &PointConfiguration, strategy: &SeedStrategy) -> Result<CriticalPointSearch> {
    if config.len() < 2 {
        return Ok(CriticalPointSearch {
            points: Vec::new(),
            seeds: 0,
            non_converged: 0,
        });
    }
    let tol = residual_tolerance(config);
    let seeds = seeds(config, strategy);
    let results: Vec<Option<(Vec3, f64)>> = seeds.par_iter().map(|s| newton(config, *s, tol)).collect();
    let merge = 1e-6 * config.diameter();
    let mut distinct: Vec<(Vec3, f64)> = Vec::new();
    let mut non_converged = 0;
    for r in results {
        match r {
            Some((x, g)) => {
                if !distinct.iter().any(|(y, _)| (x - y).norm() <= merge) {
                    distinct.push((x, g));
                }
            }
            None => non_converged += 1,
        }
    }
    distinct.sort_by(|a, b| {
        a.0.x
            .total_cmp(&b.0.x)
            .then(a.0.y.total_cmp(&b.0.y))
            .then(a.0.z.total_cmp(&b.0.z))
    });
    let hull = HullTest::new(config);
    let points = distinct
        .into_iter()
        .map(|(x, residual)| {
            let jet = phi_jet(config, &x)?;
            let ev = sym_eigenvalues(&jet.hessian);
            let scale = ev.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
            let zero_tol = 1e-6 * scale;
            let signature = Signature {
                positive: ev.iter().filter(|e| **e > zero_tol).count(),
                negative: ev.iter().filter(|e| **e < -zero_tol).count(),
                zero: ev.iter().filter(|e| e.abs() <= zero_tol).count(),
            };
            Ok(CriticalPoint {
                x: x.into(),
                residual,
                length: TAU / jet.value.sqrt(),
                in_hull: hull.contains(&x),
                hessian_signature: signature,
                degenerate: signature.zero > 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalPointSearch {
        points,
        seeds: seeds.len(),
        non_converged,
    })
}

/// Closed convex hull membership with tolerance `1e-8 · diameter`.
///
/// The hull is described by its supporting hyperplanes inside the affine
/// span of the centres: pairs of points in a plane, triples in space.
#[derive(Debug, Clone)]
pub struct HullTest {
    origin: Vec3,
    /// Orthonormal basis of the affine span.
    span: Vec<Vec3>,
    /// `(point, unit normal)` with all centres on the non-positive side.
    facets: Vec<(Vec3, Vec3)>,
    /// Extent along the line for one-dimensional spans.
    interval: (f64, f64),
    tol: f64,
}

impl HullTest {
    pub fn new(config: &PointConfiguration) -> Self {
        let pts: Vec<Vec3> = config.centres().iter().map(|c| c.position).collect();
        let tol = 1e-8 * config.diameter().max(1e-300);
        let origin = pts[0];
        let mut span: Vec<Vec3> = Vec::new();
        // Gram-Schmidt on the farthest residual, up to three directions.
        for _ in 0..3 {
            let residual = |p: &Vec3| {
                let mut r = p - origin;
                for b in &span {
                    r -= b * r.dot(b);
                }
                r
            };
            let (best, norm) = pts
                .iter()
                .map(residual)
                .map(|r| (r, r.norm()))
                .fold((Vec3::zeros(), 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            if norm <= tol {
                break;
            }
            span.push(best / norm);
        }
        let mut facets = Vec::new();
        let mut interval = (0.0, 0.0);
        let keep = |normal: Vec3, base: Vec3, facets: &mut Vec<(Vec3, Vec3)>| {
            let side: Vec<f64> = pts.iter().map(|p| (p - base).dot(&normal)).collect();
            if side.iter().all(|s| *s <= tol) {
                facets.push((base, normal));
            } else if side.iter().all(|s| *s >= -tol) {
                facets.push((base, -normal));
            }
        };
        match span.len() {
            1 => {
                let s = pts.iter().map(|p| (p - origin).dot(&span[0]));
                interval = s.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            }
            2 => {
                let plane_normal = span[0].cross(&span[1]);
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        let n = plane_normal.cross(&(pts[j] - pts[i]));
                        if n.norm() > tol {
                            keep(n.normalize(), pts[i], &mut facets);
                        }
                    }
                }
            }
            3 => {
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        for l in j + 1..pts.len() {
                            let n = (pts[j] - pts[i]).cross(&(pts[l] - pts[i]));
                            if n.norm() > tol * tol.max(config.diameter()) {
                                keep(n.normalize(), pts[i], &mut facets);
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        HullTest {
            origin,
            span,
            facets,
            interval,
            tol,
        }
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let rel = x - self.origin;
        let mut off_span = rel;
        for b in &self.span {
            off_span -= b * rel.dot(b);
        }
        if off_span.norm() > self.tol {
            return false;
        }
        match self.span.len() {
            0 => true,
            1 => {
                let s = rel.dot(&self.span[0]);
                s >= self.interval.0 - self.tol && s <= self.interval.1 + self.tol
            }
            _ => self.facets.iter().all(|(p, n)| (x - p).dot(n) <= self.tol),
        }
    }
}
