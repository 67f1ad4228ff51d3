//! Small fixed-size linear algebra: symmetric 3×3 eigenvalues and frame helpers.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Relative asymmetry tolerance accepted by [`check_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Below this distance of `|r|` from 1 the trigonometric formula is replaced
/// by Jacobi rotations (acos is ill-conditioned near ±1).
const TRIG_DEGENERACY: f64 = 1e-6;

/// Largest absolute entry.
pub fn max_abs(s: &Mat3) -> f64 {
    s.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Rejects matrices whose asymmetry exceeds `1e-12 · max(1, max|S_ij|)`.
pub fn check_symmetric(s: &Mat3) -> Result<()> {
    let asym = (s - s.transpose()).iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if !asym.is_finite() || asym > SYMMETRY_TOL * max_abs(s).max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Eigenvalues of a symmetric 3×3 matrix in ascending order.
///
/// Uses the trigonometric closed form; near-repeated spectra fall back to
/// cyclic Jacobi rotations. Only the upper triangle is read.
pub fn sym_eigenvalues(s: &Mat3) -> [f64; 3] {
    let a = symmetrize_upper(s);
    let scale = max_abs(&a);
    if scale == 0.0 {
        return [0.0; 3];
    }
    let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    if p <= 1e-15 * scale {
        return [q; 3];
    }
    let b = (a - Mat3::identity() * q) / p;
    let r = b.determinant() / 2.0;
    if 1.0 - r.abs() < TRIG_DEGENERACY {
        return jacobi_eigenvalues(&a);
    }
    let angle = r.acos() / 3.0;
    let largest = q + 2.0 * p * angle.cos();
    let smallest = q + 2.0 * p * (angle + 2.0 * PI / 3.0).cos();
    let middle = 3.0 * q - largest - smallest;
    let mut out = [smallest, middle, largest];
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalues by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(s: &Mat3) -> [f64; 3] {
    let mut a = symmetrize_upper(s);
    let norm = a.norm();
    for _sweep in 0..64 {
        let off = a[(0, 1)].abs() + a[(0, 2)].abs() + a[(1, 2)].abs();
        if off <= f64::EPSILON * 1e-2 * norm {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Mat3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
        }
    }
    let mut out = [a[(0, 0)], a[(1, 1)], a[(2, 2)]];
    out.sort_by(f64::total_cmp);
    out
}

fn symmetrize_upper(s: &Mat3) -> Mat3 {
    let mut a = *s;
    a[(1, 0)] = a[(0, 1)];
    a[(2, 0)] = a[(0, 2)];
    a[(2, 1)] = a[(1, 2)];
    a
}

/// Two unit vectors completing `d` (assumed unit) to a right-handed
/// orthonormal frame `(e1, e2, d)`.
pub fn orthonormal_complement(d: &Vec3) -> (Vec3, Vec3) {
    let helper = if d.x.abs() <= d.y.abs() && d.x.abs() <= d.z.abs() {
        Vec3::x()
    } else if d.y.abs() <= d.z.abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    let e1 = (helper - d * d.dot(&helper)).normalize();
    let e2 = d.cross(&e1);
    (e1, e2)
}

pub fn is_finite_vec(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn reference(s: &Mat3) -> [f64; 3] {
        let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }

    #[test]
    fn diagonal_and_identity() {
        assert_eq!(sym_eigenvalues(&Mat3::identity()), [1.0; 3]);
        let d = Mat3::from_diagonal(&Vec3::new(3.0, 1.0, 2.0));
        let ev = sym_eigenvalues(&d);
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(sym_eigenvalues(&Mat3::zeros()), [0.0; 3]);
    }

    #[test]
    fn near_repeated_spectrum_uses_jacobi_accurately() {
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 0.7);
        let d = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, 1.0 + 1e-9));
        let s = rot.matrix() * d * rot.matrix().transpose();
        let ev = sym_eigenvalues(&s);
        assert!((ev[0] - 1.0).abs() < 1e-13);
        assert!((ev[2] - (1.0 + 1e-9)).abs() < 1e-13);
    }

    #[test]
    fn matches_nalgebra_on_rotated_spectra() {
        for (i, spec) in [[-2.0, 0.5, 7.0], [1e-8, 1.0, 1.0], [-3.0, -3.0, 4.0], [0.0, 0.0, 1e-3]]
            .iter()
            .enumerate()
        {
            let rot = Rotation3::from_euler_angles(0.2 * i as f64, 0.9, -0.4);
            let s = rot.matrix() * Mat3::from_diagonal(&Vec3::from(*spec)) * rot.matrix().transpose();
            let ev = sym_eigenvalues(&s);
            let want = reference(&s);
            for k in 0..3 {
                assert!((ev[k] - want[k]).abs() < 1e-12 * (1.0 + want[k].abs()), "{ev:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn asymmetry_is_rejected() {
        let mut s = Mat3::identity();
        s[(0, 1)] = 1e-6;
        assert!(matches!(check_symmetric(&s), Err(Error::NotSymmetric(_))));
        s[(1, 0)] = 1e-6;
        assert!(check_symmetric(&s).is_ok());
    }

    #[test]
    fn complement_is_right_handed() {
        for d in [Vec3::z(), Vec3::new(1.0, 2.0, -0.5).normalize(), -Vec3::x()] {
            let (e1, e2) = orthonormal_complement(&d);
            assert!(e1.dot(&d).abs() < 1e-15 && e2.dot(&d).abs() < 1e-15);
            assert!((e1.cross(&e2) - d).norm() < 1e-15);
        }
    }
}
