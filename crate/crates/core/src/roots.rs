//! Scalar root finding on a bracket.

use crate::error::{Error, Result};

/// A root of an increasing `f` with `f(lo) ≤ 0 ≤ f(hi)`, by bisection,
/// stopped when the bracket is shorter than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    check_bracket(f(lo), f(hi))?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton's method on an increasing `f` kept inside the bracket `[lo, hi]`.
///
/// `f` returns the value and the derivative. A Newton step leaving the
/// current bracket is replaced by the midpoint. Stops when `|f| ≤ ftol` or
/// the bracket collapses.
pub fn newton_bracketed(
    mut f: impl FnMut(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    ftol: f64,
) -> Result<f64> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    check_bracket(flo, fhi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (fx, dfx) = f(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = x - fx / dfx;
        x = if dfx > 0.0 && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            return Ok(x);
        }
    }
    Ok(x)
}

fn check_bracket(flo: f64, fhi: f64) -> Result<()> {
    if flo.is_nan() || fhi.is_nan() || flo > 0.0 || fhi < 0.0 {
        return Err(Error::Invalid(format!("root not bracketed: f(lo) = {flo}, f(hi) = {fhi}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = newton_bracketed(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        // x³ has zero derivative at the root
        let r = newton_bracketed(|x| (x * x * x, 3.0 * x * x), -1.0, 3.0, 1e-30).unwrap();
        assert!(r.abs() < 1e-9);
    }

    #[test]
    fn unbracketed_is_an_error() {
        assert!(bisect(|x| x + 5.0, 0.0, 1.0, 1e-10).is_err());
        assert!(newton_bracketed(|x| (x - 5.0, 1.0), 0.0, 1.0, 1e-10).is_err());
    }
}
