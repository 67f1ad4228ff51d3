//! k-convexity: sums of smallest eigenvalues and surface-wide scans.
//!
//! A symmetric form `S` on a 3-space is k-convex when `Tr_W S ≥ 0` for every
//! k-plane `W`, and the infimum over the Grassmannian is `λ₁ + … + λ_k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{check_symmetric, sym_eigenvalues};
use crate::potential::PointConfiguration;
use crate::surfaces::{lifted_sff, BarrierSurface};
use crate::{Error, Mat3, Result, Vec3};

/// Relative margin below which a sampled eigensum is treated as zero.
pub const MARGIN_TOL: f64 = 1e-9;

fn check_k(k: usize) -> Result<()> {
    if (1..=3).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidK(k))
    }
}

/// `λ₁ + … + λ_k` for the ascending eigenvalues of `s`.
pub fn k_smallest_eigensum(s: &Mat3, k: usize) -> Result<f64> {
    check_k(k)?;
    check_symmetric(s)?;
    if k == 3 {
        // the full sum is the trace, exactly
        return Ok(s.trace());
    }
    Ok(sym_eigenvalues(s)[..k].iter().sum())
}

/// Spectral norm `max |λ_i|` of a symmetric matrix.
pub fn spectral_norm(s: &Mat3) -> f64 {
    sym_eigenvalues(s).iter().fold(0.0, |acc, l| acc.max(l.abs()))
}

/// True iff the three leading principal minors are positive.
pub fn sylvester_positive(s: &Mat3) -> Result<bool> {
    check_symmetric(s)?;
    let m1 = s[(0, 0)];
    let m2 = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
    let m3 = s.determinant();
    Ok(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)
}

/// Minimum of `Tr_W S` over `n` uniformly distributed k-planes `W`.
///
/// A line is drawn as a uniform unit vector and a 2-plane as the orthogonal
/// complement of one, so the samples for a fixed `seed` are nested in `n`.
/// This is an upper bound for [`k_smallest_eigensum`] converging from above.
pub fn brute_force_grassmannian_min(s: &Mat3, k: usize, n: usize, seed: u64) -> Result<f64> {
    check_k(k)?;
    check_symmetric(s)?;
    if n == 0 {
        return Err(Error::InvalidParams("sample count must be positive".into()));
    }
    let trace = s.trace();
    if k == 3 {
        return Ok(trace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..n {
        let w = Vec3::from(UnitSphere.sample(&mut rng));
        let q = w.dot(&(s * w));
        let value = if k == 1 { q } else { trace - q };
        best = best.min(value);
    }
    Ok(best)
}

/// Overall outcome of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every sample exceeds `MARGIN_TOL` times its spectral norm.
    StrictlyConvex,
    /// Some sample lies below `-MARGIN_TOL` times its spectral norm.
    Violated,
    Inconclusive,
}

/// Chart sampling: a regular grid plus seeded random parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub grid: [usize; 2],
    pub random: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            grid: [128, 128],
            random: 10_000,
            seed: 0,
        }
    }
}

impl Sampling {
    pub fn requested(&self) -> usize {
        self.grid[0] * self.grid[1] + self.random
    }

    /// Chart parameters in evaluation order: grid row-major, then random.
    pub fn parameters(&self, surface: &BarrierSurface) -> Vec<[f64; 2]> {
        let [ax0, ax1] = surface.chart_axes();
        let mut out = Vec::with_capacity(self.requested());
        for i in 0..self.grid[0] {
            for j in 0..self.grid[1] {
                out.push([ax0.grid_value(i, self.grid[0]), ax1.grid_value(j, self.grid[1])]);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            let w0: f64 = rng.random();
            let w1: f64 = rng.random();
            out.push([ax0.from_unit(w0), ax1.from_unit(w1)]);
        }
        out
    }
}

/// Location of the smallest sampled eigensum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Argmin {
    pub params: [f64; 2],
    pub x: [f64; 3],
}

/// One evaluated sample of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMargin {
    pub index: usize,
    pub params: [f64; 2],
    pub x: Vec3,
    pub eigensum: f64,
    /// Spectral norm of the lifted form at this sample.
    pub scale: f64,
}

impl SampleMargin {
    pub fn verdict(&self) -> Verdict {
        let tol = MARGIN_TOL * self.scale;
        if self.eigensum > tol {
            Verdict::StrictlyConvex
        } else if self.eigensum < -tol {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// `eigensum / scale`, or 0 for a vanishing form.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.eigensum / self.scale
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub k: usize,
    pub min_eigensum: f64,
    /// Smallest `eigensum / ‖S‖` over the samples.
    pub min_relative: f64,
    pub argmin: Option<Argmin>,
    pub samples: usize,
    pub skipped: usize,
    pub verdict: Verdict,
}

/// Evaluates the lifted k-eigensum at every sample. Samples whose surface
/// point or lifted form cannot be computed are returned as `None`.
pub fn scan_samples(
    config: &PointConfiguration,
    surface: &BarrierSurface,
    k: usize,
    sampling: &Sampling,
) -> Result<Vec<Option<SampleMargin>>> {
    check_k(k)?;
    surface.validate()?;
    let params = sampling.parameters(surface);
    params
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let Ok(data) = surface.surface_point(*p) else {
                return Ok(None);
            };
            let Ok(lift) = lifted_sff(config, &data) else {
                return Ok(None);
            };
            let eigensum = k_smallest_eigensum(&lift.matrix, k)?;
            Ok(Some(SampleMargin {
                index,
                params: *p,
                x: data.x,
                eigensum,
                scale: spectral_norm(&lift.matrix),
            }))
        })
        .collect()
}

/// Reduces per-sample margins to a report; ties keep the lowest index.
pub fn summarize(k: usize, samples: &[Option<SampleMargin>]) -> Result<ConvexityReport> {
    let requested = samples.len();
    let valid: Vec<&SampleMargin> = samples.iter().flatten().collect();
    if valid.is_empty() || 2 * valid.len() < requested {
        return Err(Error::TooFewSamples {
            valid: valid.len(),
            requested,
        });
    }
    let mut best = valid[0];
    let mut min_relative = f64::INFINITY;
    let mut any_violated = false;
    let mut all_strict = true;
    for s in &valid {
        if s.eigensum < best.eigensum {
            best = s;
        }
        min_relative = min_relative.min(s.relative());
        match s.verdict() {
            Verdict::Violated => {
                any_violated = true;
                all_strict = false;
            }
            Verdict::Inconclusive => all_strict = false,
            Verdict::StrictlyConvex => {}
        }
    }
    let verdict = if any_violated {
        Verdict::Violated
    } else if all_strict {
        Verdict::StrictlyConvex
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvexityReport {
        k,
        min_eigensum: best.eigensum,
        min_relative,
        argmin: Some(Argmin {
            params: best.params,
            x: best.x.into(),
        }),
        samples: valid.len(),
        skipped: requested - valid.len(),
        verdict,
    })
}

/// k-convexity of the lifted hypersurface over `surface`, by sampling.
pub fn convexity_scan(
    config: &PointConfiguration,
    surface: &BarrierSurface,
    k: usize,
    sampling: &Sampling,
) -> Result<ConvexityReport> {
    let samples = scan_samples(config, surface, k, sampling)?;
    summarize(k, &samples)
}
