//! Bisection for monotone predicates over one-parameter state families.

use crate::epr::TwoQubitState;
use crate::error::{Error, Result};

/// Locates the switch point of `predicate(family(t))` on `[lo, hi]`.
///
/// Stops once the bracket half-width is at most `tol` and returns its
/// midpoint. The predicate must be monotone on the interval.
pub fn threshold_scan<F, P>(family: F, predicate: P, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<TwoQubitState>,
    P: Fn(&TwoQubitState) -> Result<bool>,
{
    bisect(|t| predicate(&family(t)?), lo, hi, tol)
}

/// [`threshold_scan`] for a predicate on the parameter itself.
pub fn bisect<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<bool>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let at_lo = g(lo)?;
    if g(hi)? == at_lo {
        return Err(Error::NoBracket {
            lo,
            hi,
            value: at_lo,
        });
    }
    let (mut a, mut b) = (lo, hi);
    while 0.5 * (b - a) > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if g(mid)? == at_lo {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_step() {
        let t = bisect(|x| Ok(x <= 0.3), 0.0, 1.0, 1e-9).unwrap();
        assert!((t - 0.3).abs() <= 1e-9);
        let t = bisect(|x| Ok(x > 0.7), 0.0, 1.0, 1e-6).unwrap();
        assert!((t - 0.7).abs() <= 1e-6);
    }

    #[test]
    fn no_bracket() {
        assert!(matches!(
            bisect(|_| Ok(true), 0.0, 1.0, 1e-6),
            Err(Error::NoBracket { value: true, .. })
        ));
    }

    #[test]
    fn errors_propagate() {
        let r = bisect(
            |x| {
                if x > 0.5 {
                    Err(Error::Domain("x".into()))
                } else {
                    Ok(true)
                }
            },
            0.0,
            1.0,
            1e-3,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
