//! Bracketed scalar root finding: bisection to a coarse tolerance, then a
//! Newton polish that is kept inside the bracket.

use crate::{Error, Result};

/// Plain bisection on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// Returns the final bracket. The endpoints must have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo * f_hi > 0.0 {
        return Err(Error::NoConvergence(format!(
            "[{lo}, {hi}] does not bracket a sign change (f = {f_lo}, {f_hi})"
        )));
    }
    if f_lo == 0.0 {
        return Ok((lo, lo));
    }
    if f_hi == 0.0 {
        return Ok((hi, hi));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok((mid, mid));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Bisection to `coarse_tol`, then Newton steps until `|Δx| ≤ fine_tol`.
///
/// A Newton step that leaves the coarse bracket falls back to the bracket
/// midpoint, so the result always lies in the original interval.
pub fn bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64, coarse_tol: f64, fine_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = bisect(&f, lo, hi, coarse_tol)?;
    if a == b {
        return Ok(a);
    }
    let f_a = f(a);
    let mut x = 0.5 * (a + b);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == (f_a > 0.0) {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next < a.min(b) || next > a.max(b) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= fine_tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence("Newton polish did not settle".into()))
}

/// Evaluates `Σ coeffs[i] x^i`.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Derivative of [`poly_eval`].
pub fn poly_deriv(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, c)| acc * x + i as f64 * c)
}
