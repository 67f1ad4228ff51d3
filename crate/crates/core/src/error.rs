use thiserror::Error;

use crate::Vec3;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The query point lies within the exclusion radius of a centre.
    #[error("point {point:?} is within {radius:e} of centre {centre}")]
    SingularPoint {
        point: [f64; 3],
        centre: usize,
        radius: f64,
    },
    #[error("configuration has no centres and zero mass")]
    EmptyConfiguration,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("chart parameters outside the domain: {0}")]
    ChartDomain(String),
    #[error("surface point solver failed: {0}")]
    SolverFailure(String),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("k = {0} is out of range")]
    InvalidK(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point lies on the cylinder axis")]
    OnAxis,
    #[error("invalid centre index {0}")]
    InvalidIndex(usize),
    #[error("only {valid} of {requested} samples were evaluable")]
    TooFewSamples { valid: usize, requested: usize },
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

impl Error {
    pub(crate) fn singular(point: &Vec3, centre: usize, radius: f64) -> Self {
        Error::SingularPoint {
            point: [point.x, point.y, point.z],
            centre,
            radius,
        }
    }
}
