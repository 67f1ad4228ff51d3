//! Gaussian curvature of the circle-invariant minimal sphere lying over the
//! straight segment between two centres.
//!
//! Over the segment the sphere is the union of circle fibres, and its Gauss
//! curvature is `K = -∂²_t (1/(2φ))` in the arclength coordinate `t` of the
//! segment. Writing `φ = a/(a² - t²) + φ̃` with the satellite potential
//! `φ̃ = m + Σ_{other centres} c_l/(2|x - p_l|)`, the curvature splits as
//! `K = -(M + N) / (2(a + φ̃(a² - t²))³)`.

use serde::{Deserialize, Serialize};

use crate::barriers::constant_rk;
use crate::potential::{phi_jet, raw_jet, Centre, PointConfiguration};
use crate::roots::bisect_newton;
use crate::{Error, Result, Vec3};

/// Relative endpoint exclusion: samples keep `|t| ≤ a(1 - 1e-6)`.
pub const ENDPOINT_EXCLUSION: f64 = 1e-6;

/// The segment joining two unit-charge centres `p_i` (at `t = a`) and `p_j`
/// (at `t = -a`).
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSurface {
    config: PointConfiguration,
    endpoints: (usize, usize),
    a: f64,
    midpoint: Vec3,
    direction: Vec3,
    satellites: Vec<Centre>,
}

impl SegmentSurface {
    /// Rejects equal or out-of-range indices, endpoints of multiplicity other
    /// than 1, and other centres lying on the closed segment.
    pub fn new(config: &PointConfiguration, i: usize, j: usize) -> Result<Self> {
        let n = config.len();
        if i >= n {
            return Err(Error::InvalidIndex(i));
        }
        if j >= n || j == i {
            return Err(Error::InvalidIndex(j));
        }
        let centres = config.centres();
        for idx in [i, j] {
            if centres[idx].multiplicity != 1 {
                return Err(Error::InvalidParams(format!(
                    "segment endpoint {idx} has multiplicity {}",
                    centres[idx].multiplicity
                )));
            }
        }
        let (p, q) = (centres[i].position, centres[j].position);
        let half = (p - q) * 0.5;
        let a = half.norm();
        let midpoint = (p + q) * 0.5;
        let direction = half / a;
        let satellites: Vec<Centre> = centres
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, c)| *c)
            .collect();
        for (k, c) in centres.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let rel = c.position - midpoint;
            let along = rel.dot(&direction).clamp(-a, a);
            if (rel - direction * along).norm() <= config.exclusion_radius() {
                return Err(Error::InvalidParams(format!("centre {k} lies on the segment")));
            }
        }
        Ok(SegmentSurface {
            config: config.clone(),
            endpoints: (i, j),
            a,
            midpoint,
            direction,
            satellites,
        })
    }

    /// Half the Euclidean length of the segment.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn endpoints(&self) -> (usize, usize) {
        self.endpoints
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn midpoint(&self) -> Vec3 {
        self.midpoint
    }

    /// Unit vector from `p_j` toward `p_i`.
    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn satellites(&self) -> &[Centre] {
        &self.satellites
    }

    pub fn point(&self, t: f64) -> Vec3 {
        self.midpoint + self.direction * t
    }

    fn check_t(&self, t: f64) -> Result<Vec3> {
        if !t.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite segment coordinate {t}")));
        }
        let x = self.point(t);
        let delta = ENDPOINT_EXCLUSION * self.a;
        if t.abs() > self.a - delta {
            let end = if t > 0.0 { self.endpoints.0 } else { self.endpoints.1 };
            return Err(Error::singular(&x, end, delta));
        }
        Ok(x)
    }
}

/// `K(t) = φ''/(2φ²) - φ'²/φ³`, derivatives taken along the segment.
pub fn gaussian_curvature_direct(seg: &SegmentSurface, t: f64) -> Result<f64> {
    let x = seg.check_t(t)?;
    let jet = phi_jet(&seg.config, &x)?;
    let d = seg.direction;
    let phi = jet.value;
    let d1 = jet.gradient.dot(&d);
    let d2 = d.dot(&(jet.hessian * d));
    Ok(d2 / (2.0 * phi * phi) - d1 * d1 / phi.powi(3))
}

/// Curvature and its `M + N` split at one point of the segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub t: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    /// The four summands of `M`:
    /// `2φ̃'²w³`, `8atφ̃'w`, `-aφ̃''w²`, `-φ̃φ̃''w³` with `w = a² - t²`.
    pub terms: [f64; 4],
}

pub fn mn_decomposition(seg: &SegmentSurface, t: f64) -> Result<CurvatureSample> {
    let x = seg.check_t(t)?;
    seg.config.check_regular(&x)?;
    let jet = raw_jet(seg.config.mass(), &seg.satellites, &x);
    let d = seg.direction;
    let f = jet.value;
    let f1 = jet.gradient.dot(&d);
    let f2 = d.dot(&(jet.hessian * d));
    let a = seg.a;
    let w = a * a - t * t;
    let terms = [
        2.0 * f1 * f1 * w.powi(3),
        8.0 * a * t * f1 * w,
        -a * f2 * w * w,
        -f * f2 * w.powi(3),
    ];
    let m: f64 = terms.iter().sum();
    let n = -(2.0 * a * a + 2.0 * a * f * w + 8.0 * a * f * t * t);
    let denom = a + f * w;
    Ok(CurvatureSample {
        t,
        k: -(m + n) / (2.0 * denom.powi(3)),
        m,
        n,
        terms,
    })
}

/// `n` Chebyshev nodes `(a - δ) cos((2j + 1)π / 2n)`, descending from near `a`.
pub fn chebyshev_nodes(a: f64, n: usize) -> Vec<f64> {
    let half = a * (1.0 - ENDPOINT_EXCLUSION);
    (0..n)
        .map(|j| half * ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect()
}

/// [`mn_decomposition`] at the Chebyshev nodes.
pub fn curvature_profile(seg: &SegmentSurface, n: usize) -> Result<Vec<CurvatureSample>> {
    chebyshev_nodes(seg.a, n).into_iter().map(|t| mn_decomposition(seg, t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityScan {
    pub min_k: f64,
    pub argmin_t: f64,
    pub samples: usize,
}

impl StabilityScan {
    /// Strong stability is equivalent to `K > 0` everywhere.
    pub fn strongly_stable(&self) -> bool {
        self.min_k > 0.0
    }
}

/// Minimum of the direct curvature over `n ≥ 100` Chebyshev nodes; ties keep
/// the first node.
pub fn strong_stability_scan(seg: &SegmentSurface, n: usize) -> Result<StabilityScan> {
    if n < 100 {
        return Err(Error::InvalidParams(format!("need at least 100 samples, got {n}")));
    }
    let mut best = (f64::INFINITY, 0.0);
    for t in chebyshev_nodes(seg.a, n) {
        let k = gaussian_curvature_direct(seg, t)?;
        if k < best.0 {
            best = (k, t);
        }
    }
    Ok(StabilityScan {
        min_k: best.0,
        argmin_t: best.1,
        samples: n,
    })
}

/// Outcome of the distance test for strong stability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientCondition {
    pub holds: bool,
    /// `min_l |midpoint - p_l| / a - 1` over the satellites (infinite if none).
    pub s: f64,
    pub threshold: f64,
    /// Total charge, counting each satellite with its multiplicity.
    pub k: usize,
}

/// Strong stability is guaranteed when every satellite lies further than
/// `(s + 1)a` from the midpoint with `s > max(√((k - 2)/2), R_k)`.
pub fn sufficient_condition(seg: &SegmentSurface) -> SufficientCondition {
    let k = 2 + seg.satellites.iter().map(|c| c.multiplicity as usize).sum::<usize>();
    let nearest = seg
        .satellites
        .iter()
        .map(|c| (c.position - seg.midpoint).norm())
        .fold(f64::INFINITY, f64::min);
    let s = nearest / seg.a - 1.0;
    let rk = constant_rk(k).expect("k is at least 2");
    let threshold = (((k - 2) as f64) / 2.0).sqrt().max(rk);
    SufficientCondition {
        holds: s > threshold,
        s,
        threshold,
        k,
    }
}

fn check_counterexample(a: f64, eps: f64, m: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0 && eps.is_finite() && eps > 0.0 && m.is_finite() && m >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "need a > 0, eps > 0, m ≥ 0 (got a={a}, eps={eps}, m={m})"
        )));
    }
    Ok(())
}

/// `(M + N)` at the midpoint for centres `(0,0,±a)` and a satellite at
/// `(0, ε, 0)`; a positive value means negative curvature there.
pub fn counterexample_closed_form(a: f64, eps: f64, m: f64) -> Result<f64> {
    check_counterexample(a, eps, m)?;
    Ok(-2.0 * a * a - 2.0 * a.powi(3) * m - a.powi(3) / eps + a.powi(5) / (2.0 * eps.powi(3))
        + m * a.powi(6) / (2.0 * eps.powi(3))
        + a.powi(6) / (4.0 * eps.powi(4)))
}

/// The three-centre configuration of [`counterexample_closed_form`], with
/// the segment between the first two centres.
pub fn counterexample_segment(a: f64, eps: f64, m: f64) -> Result<SegmentSurface> {
    check_counterexample(a, eps, m)?;
    let config = PointConfiguration::with_unit_centres(
        m,
        &[Vec3::new(0.0, 0.0, a), Vec3::new(0.0, 0.0, -a), Vec3::new(0.0, eps, 0.0)],
    )?;
    SegmentSurface::new(&config, 0, 1)
}

/// The satellite distance `ε` at which the midpoint curvature changes sign
/// (positive `M + N` below it, negative above).
pub fn counterexample_critical_eps(a: f64, m: f64) -> Result<f64> {
    check_counterexample(a, 1.0, m)?;
    let f = |e: f64| counterexample_closed_form(a, e, m).unwrap_or(f64::NAN);
    let mut lo = a;
    while f(lo) <= 0.0 {
        lo *= 0.5;
    }
    let mut hi = a;
    while f(hi) >= 0.0 {
        hi *= 2.0;
    }
    let h = 1e-7;
    let df = |e: f64| (f(e * (1.0 + h)) - f(e * (1.0 - h))) / (2.0 * h * e);
    bisect_newton(f, df, lo, hi, 1e-10 * hi, 1e-15 * hi)
}
