#![allow(dead_code)]

use ghk_core::{Centre, Mat3, PointConfiguration, Vec3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `k` unit centres uniform in `[-spread, spread]³`, pairwise at least
/// `min_sep` apart.
pub fn random_config(rng: &mut ChaCha8Rng, k: usize, mass: f64, spread: f64, min_sep: f64) -> PointConfiguration {
    let mut pts: Vec<Vec3> = Vec::with_capacity(k);
    while pts.len() < k {
        let p = Vec3::from_fn(|_, _| rng.random_range(-spread..spread));
        if pts.iter().all(|q| (p - q).norm() >= min_sep) {
            pts.push(p);
        }
    }
    PointConfiguration::with_unit_centres(mass, &pts).unwrap()
}

/// Like [`random_config`] but with multiplicities drawn from `1..=max_mult`.
pub fn random_charged_config(
    rng: &mut ChaCha8Rng,
    k: usize,
    mass: f64,
    spread: f64,
    min_sep: f64,
    max_mult: u32,
) -> PointConfiguration {
    let base = random_config(rng, k, mass, spread, min_sep);
    let centres = base
        .centres()
        .iter()
        .map(|c| Centre::new(c.position, rng.random_range(1..=max_mult)))
        .collect();
    PointConfiguration::new(mass, centres).unwrap()
}

/// Symmetric matrix with independent standard normal upper-triangle entries.
pub fn random_symmetric(rng: &mut ChaCha8Rng) -> Mat3 {
    use rand_distr::{Distribution, StandardNormal};
    let mut s = Mat3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let v: f64 = StandardNormal.sample(rng);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// A point in `[-box_half, box_half]³` at least `clearance` from every centre.
pub fn regular_point(rng: &mut ChaCha8Rng, config: &PointConfiguration, box_half: f64, clearance: f64) -> Vec3 {
    loop {
        let x = Vec3::from_fn(|_, _| rng.random_range(-box_half..box_half));
        if config.centres().iter().all(|c| (x - c.position).norm() >= clearance) {
            return x;
        }
    }
}

/// Central-difference gradient and Hessian of `f` at `x`.
pub fn fd_gradient_hessian(f: impl Fn(&Vec3) -> f64, x: &Vec3, hg: f64, hh: f64) -> (Vec3, Mat3) {
    let e = |i: usize| Vec3::from_fn(|r, _| if r == i { 1.0 } else { 0.0 });
    let grad = Vec3::from_fn(|i, _| (f(&(x + e(i) * hg)) - f(&(x - e(i) * hg))) / (2.0 * hg));
    let f0 = f(x);
    let mut hess = Mat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            hess[(i, j)] = if i == j {
                (f(&(x + e(i) * hh)) - 2.0 * f0 + f(&(x - e(i) * hh))) / (hh * hh)
            } else {
                (f(&(x + (e(i) + e(j)) * hh)) - f(&(x + (e(i) - e(j)) * hh)) - f(&(x + (e(j) - e(i)) * hh))
                    + f(&(x - (e(i) + e(j)) * hh)))
                    / (4.0 * hh * hh)
            };
        }
    }
    (grad, hess)
}

/// `Σ c_i / (2 r_i^p)`: the size of the individual terms of the `(p-1)`-th
/// derivative of `φ`, used to scale finite-difference errors.
pub fn term_scale(config: &PointConfiguration, x: &Vec3, p: i32) -> f64 {
    config
        .centres()
        .iter()
        .map(|c| c.multiplicity as f64 / (2.0 * (x - c.position).norm().powi(p)))
        .sum()
}
