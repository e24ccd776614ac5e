//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{HwError, Result};
use crate::saddle::RootConfig;

/// Finds a zero of `f` on `[lo, hi]`, where `f` returns the value and the
/// derivative. Newton steps are taken when they stay strictly inside the
/// current bracket and at least halve the residual; otherwise the bracket is
/// bisected.
pub(crate) fn newton_bisect<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    guess: Option<f64>,
    cfg: &RootConfig,
    what: &'static str,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (flo, _) = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    let (fhi, _) = f(hi);
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || (flo < 0.0) == (fhi < 0.0) {
        return Err(HwError::NoRoot { what });
    }
    // neg is where f < 0, pos where f > 0
    let (mut neg, mut pos) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = match guess {
        Some(g) if g > lo && g < hi => g,
        _ => 0.5 * (lo + hi),
    };
    let mut last_residual = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let (a, b) = (neg.min(pos), neg.max(pos));
        let newton = x - fx / dfx;
        let inside = newton.is_finite() && newton > a && newton < b;
        // a Newton correction below tolerance is already quadratically
        // accurate, so stop on it rather than on a bisection midpoint
        if (newton - x).abs() <= cfg.abs_tol + cfg.rel_tol * x.abs() {
            return Ok(newton.clamp(a, b));
        }
        let progressing = fx.abs() <= 0.5 * last_residual;
        last_residual = fx.abs();
        x = if inside && progressing {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a <= cfg.abs_tol + cfg.rel_tol * x.abs() {
            return Ok(x);
        }
    }
    Err(HwError::Convergence {
        what,
        iterations: cfg.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root_of_two() {
        let cfg = RootConfig::default();
        let x = newton_bisect(
            |x| (x * x * x - 2.0, 3.0 * x * x),
            0.0,
            2.0,
            None,
            &cfg,
            "cube",
        )
        .unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn survives_a_useless_derivative() {
        let cfg = RootConfig::default();
        let x = newton_bisect(|x| (x - 0.3, 0.0), 0.0, 1.0, None, &cfg, "flat").unwrap();
        assert!((x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_a_bracket_without_sign_change() {
        let cfg = RootConfig::default();
        let err = newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, None, &cfg, "none");
        assert_eq!(err, Err(HwError::NoRoot { what: "none" }));
    }

    #[test]
    fn reports_exhausted_iterations() {
        let cfg = RootConfig {
            max_iter: 3,
            ..RootConfig::default()
        };
        let err = newton_bisect(|x| (x - 0.123456789, 0.0), 0.0, 1.0, None, &cfg, "slow");
        assert!(matches!(
            err,
            Err(HwError::Convergence { iterations: 3, .. })
        ));
    }
}
