//! Numerical geometry of Gibbons–Hawking spaces.
//!
//! A multi-Eguchi–Hanson or multi-Taub–NUT space is the total space of a circle
//! bundle over `U = R³ \ {p_i}` with metric `g = φ⁻¹η² + φ g_R³`, where
//!
//! ```text
//! φ(x) = m + Σ c_i / (2|x - p_i|)
//! ```
//!
//! Everything here is expressed through Euclidean data on `U` and the jet of
//! `φ`:
//!
//! * [`potential`]: configurations of centres and the analytic jet of `φ`.
//! * [`frame`]: connection coefficients in the orthonormal frame `(φ^{1/2}ξ, φ^{-1/2}∂_i)`.
//! * [`surfaces`]: barrier surface families and the lift of their second
//!   fundamental form and mean curvature to the circle-invariant hypersurface.
//! * [`convexity`]: sums of smallest eigenvalues, a Grassmannian oracle and
//!   surface-wide k-convexity scans.
//! * [`barriers`]: the scalar margins each barrier reduces to, plus the
//!   constants `C` and `R_k`.
//! * [`stability`]: Gaussian curvature of invariant minimal spheres over a
//!   segment joining two centres.
//! * [`geodesics`]: circle-invariant closed geodesics as critical points of `φ`.

pub mod barriers;
pub mod convexity;
pub mod error;
pub mod frame;
pub mod geodesics;
pub mod linalg;
pub mod potential;
pub mod roots;
pub mod stability;
pub mod surfaces;

pub use error::{Error, Result};
pub use linalg::{Mat3, Vec3};
pub use potential::{Centre, PointConfiguration, PotentialJet};
pub use surfaces::{AdaptedSff, BarrierSurface, SurfacePointData};
pub use convexity::{ConvexityReport, Sampling, Verdict};
