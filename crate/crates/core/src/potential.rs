//! Multi-centred Gibbons–Hawking potentials.
//!
//! `φ(x) = m + Σ c_i / (2|x - p_i|)` on `U = R³ \ {p_i}`, evaluated together
//! with its Euclidean gradient and Hessian.

use serde::{Deserialize, Serialize};

use crate::linalg::is_finite_vec;
use crate::{Error, Mat3, Result, Vec3};

/// A puncture `p_i` of `U` with integer multiplicity `c_i ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centre {
    pub position: Vec3,
    pub multiplicity: u32,
}

impl Centre {
    pub fn new(position: Vec3, multiplicity: u32) -> Self {
        Centre {
            position,
            multiplicity,
        }
    }

    pub fn unit(position: Vec3) -> Self {
        Centre::new(position, 1)
    }
}

/// Validated harmonic-potential data.
///
/// Construction rejects negative or non-finite mass, multiplicities below 1,
/// coincident centres and the empty massless configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    mass: f64,
    centres: Vec<Centre>,
    diameter: f64,
    exclusion: f64,
}

/// Value, gradient and Hessian of `φ` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialJet {
    pub value: f64,
    pub gradient: Vec3,
    pub hessian: Mat3,
}

impl PointConfiguration {
    pub fn new(mass: f64, centres: Vec<Centre>) -> Result<Self> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::InvalidConfiguration(format!(
                "mass must be finite and non-negative, got {mass}"
            )));
        }
        if centres.is_empty() && mass == 0.0 {
            return Err(Error::EmptyConfiguration);
        }
        for (i, c) in centres.iter().enumerate() {
            if !is_finite_vec(&c.position) {
                return Err(Error::InvalidConfiguration(format!(
                    "centre {i} has a non-finite coordinate"
                )));
            }
            if c.multiplicity < 1 {
                return Err(Error::InvalidConfiguration(format!(
                    "centre {i} has multiplicity {} < 1",
                    c.multiplicity
                )));
            }
        }
        let diameter = diameter(centres.iter().map(|c| &c.position));
        let exclusion = 1e-9 * (1.0 + diameter);
        for i in 0..centres.len() {
            for j in 0..i {
                if (centres[i].position - centres[j].position).norm() <= exclusion {
                    return Err(Error::InvalidConfiguration(format!(
                        "centres {j} and {i} coincide"
                    )));
                }
            }
        }
        Ok(PointConfiguration {
            mass,
            centres,
            diameter,
            exclusion,
        })
    }

    /// Multi-Eguchi–Hanson (`m = 0`) or multi-Taub–NUT (`m > 0`) space with
    /// unit multiplicities.
    pub fn with_unit_centres(mass: f64, points: &[Vec3]) -> Result<Self> {
        PointConfiguration::new(mass, points.iter().copied().map(Centre::unit).collect())
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn centres(&self) -> &[Centre] {
        &self.centres
    }

    pub fn len(&self) -> usize {
        self.centres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centres.is_empty()
    }

    /// Largest pairwise distance between centres (0 with fewer than two).
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Queries closer than this to a centre are rejected.
    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion
    }

    /// Sum of multiplicities.
    pub fn total_charge(&self) -> u64 {
        self.centres.iter().map(|c| c.multiplicity as u64).sum()
    }

    pub fn max_centre_norm(&self) -> f64 {
        self.centres
            .iter()
            .map(|c| c.position.norm())
            .fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Option<Vec3> {
        if self.centres.is_empty() {
            return None;
        }
        let sum: Vec3 = self.centres.iter().map(|c| c.position).sum();
        Some(sum / self.centres.len() as f64)
    }

    /// Index and distance of the nearest centre.
    pub fn nearest_centre(&self, x: &Vec3) -> Option<(usize, f64)> {
        self.centres
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (x - c.position).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn check_regular(&self, x: &Vec3) -> Result<()> {
        if !is_finite_vec(x) {
            return Err(Error::InvalidParams(format!("non-finite point {x:?}")));
        }
        if let Some((i, d)) = self.nearest_centre(x) {
            if d <= self.exclusion {
                return Err(Error::singular(x, i, self.exclusion));
            }
        }
        Ok(())
    }

    /// The same centres with a different mass.
    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        PointConfiguration::new(mass, self.centres.clone())
    }

    pub fn to_json(&self) -> ConfigurationFile {
        ConfigurationFile {
            m: self.mass,
            points: self
                .centres
                .iter()
                .map(|c| PointEntry {
                    p: [c.position.x, c.position.y, c.position.z],
                    c: c.multiplicity as i64,
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ConfigurationFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidConfiguration(format!("malformed configuration JSON: {e}")))?;
        file.validate()
    }
}

fn diameter<'a>(points: impl Iterator<Item = &'a Vec3>) -> f64 {
    let pts: Vec<&Vec3> = points.collect();
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in 0..i {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

/// On-disk configuration: `{ "m": number, "points": [ { "p": [x,y,z], "c": integer } ] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationFile {
    pub m: f64,
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub p: [f64; 3],
    #[serde(default = "unit_charge")]
    pub c: i64,
}

fn unit_charge() -> i64 {
    1
}

impl ConfigurationFile {
    pub fn validate(&self) -> Result<PointConfiguration> {
        let mut centres = Vec::with_capacity(self.points.len());
        for (i, entry) in self.points.iter().enumerate() {
            if entry.c < 1 || entry.c > u32::MAX as i64 {
                return Err(Error::InvalidConfiguration(format!(
                    "point {i}: multiplicity must be an integer >= 1, got {}",
                    entry.c
                )));
            }
            centres.push(Centre::new(Vec3::from(entry.p), entry.c as u32));
        }
        PointConfiguration::new(self.m, centres)
    }
}

/// Jet of `mass + Σ c_i/(2|x - p_i|)` without any validation; shared by
/// [`phi_jet`] and the satellite potentials of the stability module.
pub(crate) fn raw_jet(mass: f64, centres: &[Centre], x: &Vec3) -> PotentialJet {
    let mut value = mass;
    let mut gradient = Vec3::zeros();
    let mut hessian = Mat3::zeros();
    for c in centres {
        let d = x - c.position;
        let r2 = d.norm_squared();
        let r = r2.sqrt();
        let w = c.multiplicity as f64 * 0.5;
        let inv_r = 1.0 / r;
        let inv_r3 = inv_r / r2;
        value += w * inv_r;
        gradient -= d * (w * inv_r3);
        hessian += (d * d.transpose() * (3.0 / r2) - Mat3::identity()) * (w * inv_r3);
    }
    PotentialJet {
        value,
        gradient,
        hessian,
    }
}

/// `φ`, `∇φ` and `Hess φ` at `x`.
pub fn phi_jet(config: &PointConfiguration, x: &Vec3) -> Result<PotentialJet> {
    config.check_regular(x)?;
    Ok(raw_jet(config.mass, &config.centres, x))
}

/// Laplacian of `φ` at `x`; zero up to round-off away from the centres.
pub fn check_harmonic(config: &PointConfiguration, x: &Vec3) -> Result<f64> {
    Ok(phi_jet(config, x)?.hessian.trace())
}
