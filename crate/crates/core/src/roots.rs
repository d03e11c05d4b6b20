//! Bracketing and bisection for monotone scalar equations.

use crate::error::{EsuError, Result};

/// Bisect `f` on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops when the bracket is no wider than `x_tol` (relative to the bracket
/// midpoint once that exceeds one) or when the midpoint is an exact root.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(EsuError::SolverFailure(format!(
            "bracket [{lo:e}, {hi:e}] does not enclose a sign change (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= x_tol * mid.abs().max(1.0) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_nan() {
            return Err(EsuError::SolverFailure(format!("function is NaN at {mid:e}")));
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Find `x > 0` bracketing a root of a strictly decreasing `f` on `(0, inf)`,
/// starting at `start` and doubling or halving at most `max_steps` times.
pub fn bracket_decreasing<F>(mut f: F, start: f64, max_steps: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut x = start;
    let v = f(x);
    if v.is_nan() {
        return Err(EsuError::SolverFailure(format!("function is NaN at {x:e}")));
    }
    if v > 0.0 {
        for _ in 0..max_steps {
            let next = 2.0 * x;
            if f(next) <= 0.0 {
                return Ok((x, next));
            }
            x = next;
        }
    } else {
        for _ in 0..max_steps {
            let next = 0.5 * x;
            if f(next) > 0.0 {
                return Ok((next, x));
            }
            x = next;
        }
    }
    Err(EsuError::SolverFailure(format!(
        "no sign change found within {max_steps} doublings from {start:e} (last x = {x:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100), Err(EsuError::SolverFailure(_))));
    }

    #[test]
    fn brackets_both_directions() {
        let (lo, hi) = bracket_decreasing(|x| 1e6 - x, 1.0, 200).unwrap();
        assert!(lo < 1e6 && hi >= 1e6);
        let (lo, hi) = bracket_decreasing(|x| 1.0 / x - 1e5, 1.0, 200).unwrap();
        assert!(lo < 1e-5 && hi >= 1e-5);
        assert!(bracket_decreasing(|_| 1.0, 1.0, 20).is_err());
    }
}
