//! Levi-Civita connection of the Gibbons–Hawking metric in the orthonormal
//! frame `e_0 = φ^{1/2} ξ`, `e_i = φ^{-1/2} ∂_i`.
//!
//! Index convention: `gamma[a][b][c] = ⟨∇_{e_a} e_b, e_c⟩`, i.e. (direction,
//! differentiated vector, component). Indices run over `0..4` with `0` the
//! fibre direction and `1..=3` the base directions.

use crate::potential::{phi_jet, PointConfiguration};
use crate::{Result, Vec3};

/// Permutation symbol on `{1, 2, 3}`; zero on repeated or out-of-range indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoefficients {
    pub gamma: [[[f64; 4]; 4]; 4],
}

impl ConnectionCoefficients {
    /// Component of `∇_{e_a} e_b` along `e_c`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[a][b][c]
    }

    /// `max |gamma[a][b][c] + gamma[a][c][b]|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    worst = worst.max((self.gamma[a][b][c] + self.gamma[a][c][b]).abs());
                }
            }
        }
        worst
    }

    /// `∇_X Y` for frame-coefficient vectors `X`, `Y` that are constant in the
    /// frame (only the connection part, no derivative of the coefficients).
    pub fn covariant_term(&self, x: &[f64; 4], y: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (xa, row) in x.iter().zip(&self.gamma) {
            for (yb, coeffs) in y.iter().zip(row) {
                let w = xa * yb;
                if w == 0.0 {
                    continue;
                }
                for (c, o) in out.iter_mut().enumerate() {
                    *o += w * coeffs[c];
                }
            }
        }
        out
    }
}

pub fn connection_coefficients(config: &PointConfiguration, x: &Vec3) -> Result<ConnectionCoefficients> {
    let jet = phi_jet(config, x)?;
    Ok(coefficients_from_gradient(jet.value, &jet.gradient))
}

// Index loops mirror the tensor notation of the frame formulas.
#[allow(clippy::needless_range_loop)]
pub(crate) fn coefficients_from_gradient(phi: f64, grad: &Vec3) -> ConnectionCoefficients {
    let s = 1.0 / (2.0 * phi.powf(1.5));
    // g[i] = ∂φ/∂x_i with 1-based i.
    let g = [0.0, grad.x, grad.y, grad.z];
    let mut gamma = [[[0.0; 4]; 4]; 4];

    for i in 1..=3 {
        // ∇_{e0} e0 = s Σ ∂_iφ e_i
        gamma[0][0][i] = s * g[i];
        // ∇_{e0} e_i = -s (∂_iφ e0 + Σ ε_ijk ∂_jφ e_k)
        gamma[0][i][0] = -s * g[i];
        for k in 1..=3 {
            let twist: f64 = (1..=3).map(|j| levi_civita(i, j, k) * g[j]).sum();
            // ∇_{e_i} e0 = -s Σ ε_ijk ∂_jφ e_k
            gamma[i][0][k] = -s * twist;
            gamma[0][i][k] = -s * twist;
        }
        for j in 1..=3 {
            // ∇_{e_i} e_j = s (∂_jφ e_i - Σ_k (ε_ijk ∂_kφ e0 + δ_ij ∂_kφ e_k))
            let twist: f64 = (1..=3).map(|k| levi_civita(i, j, k) * g[k]).sum();
            gamma[i][j][0] = -s * twist;
            for l in 1..=3 {
                let along_i = if l == i { g[j] } else { 0.0 };
                let radial = if i == j { g[l] } else { 0.0 };
                gamma[i][j][l] = s * (along_i - radial);
            }
        }
    }
    ConnectionCoefficients { gamma }
}
