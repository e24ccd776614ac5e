//! Reference evaluations of θ(r,t) that do not rely on the saddle-point
//! expansion.
//!
//! [`theta_numeric`] integrates the defining integral directly. Splitting
//! ξ at the zeros of sin(πξ/t), ξ = t(k + s), and using that ψ is odd,
//!
//! ```text
//! ∫₀^∞ ψ(ξ) sin(πξ/t) dξ = ½ t ∫₀¹ sin(πs) Σ_{j∈ℤ} (−1)^j ψ(t(j + s)) ds,
//! ψ(ξ) = e^{−ξ²/(2t) − r cosh ξ} sinh ξ.
//! ```
//!
//! For small t the two-sided alternating sum cancels by many orders of
//! magnitude (about 10²¹ at r = 0.5, t = 0.2), so it is accumulated in
//! double-double arithmetic. What is left is small and smooth in s and
//! goes through ordinary adaptive Gauss–Kronrod.

use std::f64::consts::{E, PI};

use crate::bessel::{bessel_i0, bessel_k0};
use crate::dd::Dd;
use crate::error::{require_positive, HwError, Result};
use crate::hw_core::theta_hat;
use crate::quad::{integrate, QuadOptions};
use crate::saddle::{gerhold_rho, solve_u0, Branch, RootConfig};

/// Relative rounding level of one double-double evaluation of ψ, with
/// headroom for the exponentials.
const DD_ROUNDING: f64 = 1e-30;

/// Outcome of [`theta_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Quadrature error estimate plus the rounding floor of the alternating
    /// sum, in the units of `value`.
    pub abs_err_est: f64,
    /// Largest number of half-periods summed at any node.
    pub n_halfperiods: usize,
    /// True when `abs_err_est ≤ tol·|value|` and no precision loss occurred.
    pub converged: bool,
    /// Cancellation left fewer than three significant digits.
    pub precision_loss: bool,
}

/// ψ(t·|n|) for the dd abscissa n = j + s, with e^{−r} factored out.
fn psi(r: f64, t: f64, n: Dd) -> Dd {
    let xi = n.mul_f64(t);
    let eh = xi.mul_f64(0.5).exp();
    let ehi = Dd::ONE / eh;
    let sh = (eh - ehi).mul_f64(0.5);
    let ch = (eh + ehi).mul_f64(0.5);
    let sinh_xi = (sh * ch).mul_f64(2.0);
    let cosh_m1 = (sh * sh).mul_f64(2.0);
    let expo = -((xi * xi).div_f64(2.0 * t) + cosh_m1.mul_f64(r));
    expo.exp() * sinh_xi
}

/// Two-sided alternating sum A(s) = Σ_{j∈ℤ} (−1)^j ψ(t(j + s)) and its
/// largest term. Pairing the phases s and 1 − s this way, rather than
/// summing j ≥ 0 only, keeps the cancellation inside one double-double
/// accumulation: A(s) is exponentially small while its terms are O(1).
pub(crate) fn bilateral_sum(r: f64, t: f64, s: f64) -> Result<(Dd, f64, usize)> {
    let mut sum = Dd::ZERO;
    let mut max_term = 0.0f64;
    let mut count = 0;
    // j ≥ 0 at abscissa j + s, then j < 0 at |j + s| = −j − s where ψ is odd
    for (sign_first, shift) in [(1.0, s), (-1.0, -s)] {
        let start = if sign_first > 0.0 { 0 } else { 1 };
        let mut prev = 0.0f64;
        let mut done = false;
        for m in start..start + 1_000_000usize {
            // samples exactly one half-period apart: n = m ± s without rounding
            let n = Dd::new(m as f64, shift);
            let term = psi(r, t, n);
            let mag = term.hi.abs();
            // (−1)^j with j = m (upper) or j = −m (lower); ψ odd adds −1 below
            let positive = (m % 2 == 0) == (sign_first > 0.0);
            sum = if positive { sum + term } else { sum - term };
            max_term = max_term.max(mag);
            count += 1;
            if m > start && mag <= prev && mag <= 1e-34 * max_term {
                done = true;
                break;
            }
            prev = mag;
        }
        if !done {
            return Err(HwError::Convergence {
                what: "half-period sum",
                iterations: 1_000_000,
            });
        }
    }
    Ok((sum, max_term, count))
}

/// θ(r,t) by direct quadrature of its defining integral.
///
/// `tol` is the requested relative accuracy. The result carries
/// `precision_loss = true` (and `converged = false`) when the alternating
/// cancellation exceeds what double-double arithmetic can resolve, which
/// happens for t ≲ 0.15 at r of order one.
///
/// # Errors
/// [`HwError::Domain`] for nonpositive r, t or tol.
pub fn theta_numeric(r: f64, t: f64, tol: f64) -> Result<QuadResult> {
    require_positive("r", r)?;
    require_positive("t", t)?;
    require_positive("tol", tol)?;
    let mut max_m = 0.0f64;
    let mut max_k = 0usize;
    let mut failure = None;
    // rough size of the summands, to stop the outer rule chasing rounding
    let (_, m_mid, _) = bilateral_sum(r, t, 0.5)?;
    let noise = DD_ROUNDING * m_mid;
    let opts = QuadOptions {
        abs_tol: 10.0 * noise,
        rel_tol: 0.1 * tol,
        max_intervals: 200,
    };
    let q = integrate(
        |s| {
            if s == 0.0 || s == 1.0 {
                return 0.0;
            }
            match bilateral_sum(r, t, s) {
                Ok((sum, m, k)) => {
                    let w = (PI * s).sin();
                    max_m = max_m.max(m * w);
                    max_k = max_k.max(k);
                    sum.to_f64() * w
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        &opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let rounding = DD_ROUNDING * max_m;
    // ∫₀¹ sin(πs) Σ_{j≥0} … ds = ½ ∫₀¹ sin(πs) A(s) ds
    let log_scale =
        r.ln() - 0.5 * (2.0 * PI.powi(3) * t).ln() + PI * PI / (2.0 * t) - r + (0.5 * t).ln();
    let scale = log_scale.exp();
    let value = if q.value == 0.0 {
        0.0
    } else {
        q.value.signum() * (log_scale + q.value.abs().ln()).exp()
    };
    let precision_loss = !(rounding <= 1e-3 * q.value.abs());
    let abs_err_est = scale * (q.abs_err + rounding);
    let converged = q.converged && !precision_loss && abs_err_est <= tol * value.abs();
    Ok(QuadResult {
        value,
        abs_err_est,
        n_halfperiods: max_k.max(1),
        converged,
        precision_loss,
    })
}

/// Outcome of [`theta_gerhold`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GerholdResult {
    pub u0: f64,
    /// θ_G, absent when the radicand is not positive.
    pub value: Option<f64>,
    /// log u₀ − 2 − 2ρ_G > 0, equivalently u₀ > e²r²/8.
    pub valid: bool,
    /// Largest t for which the formula is defined at this r.
    pub t_max: f64,
}

/// Largest t at which Gerhold's approximation is defined for this r:
/// the u₀ equation evaluated at u = e²r²/8.
pub fn gerhold_t_max(r: f64) -> f64 {
    let uc = E * E * r * r / 8.0;
    1.0 / (2.0 * uc).sqrt() + 0.25 / uc
}

/// Gerhold's fixed-r small-t approximation
/// θ_G = (√e/π)·√(u₀/(log u₀ − 2 − 2ρ_G))·e^{−t u₀ + √(2u₀)}.
///
/// # Errors
/// [`HwError::Domain`] for nonpositive input; [`HwError::NoRoot`] from the
/// u₀ solve.
pub fn theta_gerhold(r: f64, t: f64) -> Result<GerholdResult> {
    let u0 = solve_u0(r, t, &RootConfig::default())?;
    let radicand = u0.ln() - 2.0 - 2.0 * gerhold_rho(r);
    let valid = radicand > 0.0;
    let value =
        valid.then(|| E.sqrt() / PI * (u0 / radicand).sqrt() * (-t * u0 + (2.0 * u0).sqrt()).exp());
    Ok(GerholdResult {
        u0,
        value,
        valid,
        t_max: gerhold_t_max(r),
    })
}

/// Evaluator used by [`hw_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaEvaluator {
    Asym,
    Numeric,
}

/// The Hartman-Watson density θ(r,t)/I₀(r) in t.
///
/// # Errors
/// Evaluator errors; [`HwError::PrecisionLoss`] if the numeric evaluator
/// cannot resolve the integral.
pub fn hw_density(r: f64, t: f64, method: ThetaEvaluator, tol: f64) -> Result<f64> {
    let theta = match method {
        ThetaEvaluator::Asym => theta_hat(r, t, false)?.value,
        ThetaEvaluator::Numeric => {
            let q = theta_numeric(r, t, tol)?;
            if q.precision_loss {
                return Err(HwError::PrecisionLoss {
                    what: "theta_numeric",
                });
            }
            q.value
        }
    };
    Ok(theta / bessel_i0(r))
}

/// Large-t tail coefficient of θ(r,t) ~ c_r t^{−3/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCoeff {
    /// e^{−r}/(2√r), the coefficient implied by the expansion.
    pub approx: f64,
    /// K₀(r)/√(2π), the exact coefficient.
    pub exact: f64,
}

/// Both large-t tail coefficients at r.
///
/// # Errors
/// [`HwError::Domain`] if r ≤ 0.
pub fn theta_tail_coeff(r: f64) -> Result<TailCoeff> {
    require_positive("r", r)?;
    Ok(TailCoeff {
        approx: (-r).exp() / (2.0 * r.sqrt()),
        exact: bessel_k0(r)? / (2.0 * PI).sqrt(),
    })
}

/// One row of the θ(r,t) comparison table: the saddle data, θ̂, Gerhold's
/// approximation and the quadrature value side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub r: f64,
    pub t: f64,
    pub rho: f64,
    pub branch: Branch,
    /// x₁ for ρ < 1, y₁ for ρ > 1, 0 in the ρ ≈ 1 band.
    pub root: f64,
    pub f: f64,
    pub theta_hat: f64,
    pub gerhold: GerholdResult,
    pub numeric: QuadResult,
}

/// Evaluates every column of the comparison table at (r, t).
///
/// # Errors
/// Domain or solver errors from the underlying evaluators.
pub fn table_row(r: f64, t: f64, tol: f64) -> Result<TableRow> {
    let cfg = RootConfig::default();
    let rho = r * t;
    let core = crate::hw_core::eval(rho, &cfg)?;
    let root = match core.branch.branch {
        Branch::NearOne => 0.0,
        _ => core.branch.root.unwrap_or(0.0),
    };
    Ok(TableRow {
        r,
        t,
        rho,
        branch: core.branch.branch,
        root,
        f: core.f,
        theta_hat: crate::hw_core::assemble(&core, t, false).value,
        gerhold: theta_gerhold(r, t)?,
        numeric: theta_numeric(r, t, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn numeric_matches_high_precision_values() {
        let cases = [
            (0.5, 0.2, 1.173_344_555_915_731_3e-12),
            (0.5, 1.0, 0.268_545_467_607_239_18),
            (1.5, 0.3, 0.296_058_396_831_551_87),
            (0.5, 10.0, 0.015_121_084),
        ];
        for (r, t, want) in cases {
            let q = theta_numeric(r, t, 1e-10).unwrap();
            assert!(q.converged, "r={r} t={t}");
            let tol = if t == 10.0 { 1e-7 } else { 1e-9 };
            assert!(rel(q.value, want) < tol, "r={r} t={t}: {}", q.value);
            assert!(q.abs_err_est <= 1e-10 * q.value);
        }
    }

    #[test]
    fn numeric_flags_cancellation_below_the_floor() {
        let q = theta_numeric(0.5, 0.1, 1e-10).unwrap();
        assert!(q.precision_loss);
        assert!(!q.converged);
    }

    #[test]
    fn gerhold_table_values() {
        let g = theta_gerhold(0.5, 0.3).unwrap();
        assert!(g.valid);
        assert!(rel(g.u0, 89.713202) < 1e-7);
        assert!(rel(g.value.unwrap(), 2.7385006e-6) < 1e-6);
        let g = theta_gerhold(0.5, 2.0).unwrap();
        assert!(rel(g.value.unwrap(), 0.46905566) < 1e-7);
        let g = theta_gerhold(0.5, 2.6).unwrap();
        assert!(!g.valid && g.value.is_none());
        assert!((g.t_max - 2.5542).abs() < 1e-4);
    }

    #[test]
    fn validity_flips_at_t_max() {
        let tm = gerhold_t_max(1.0);
        assert!(theta_gerhold(1.0, tm * 0.999).unwrap().valid);
        assert!(!theta_gerhold(1.0, tm * 1.001).unwrap().valid);
    }

    #[test]
    fn density_methods_agree_within_the_bound() {
        let num = hw_density(0.5, 0.5, ThetaEvaluator::Numeric, 1e-10).unwrap();
        let asym = hw_density(0.5, 0.5, ThetaEvaluator::Asym, 1e-10).unwrap();
        assert!(rel(num, 0.011_282_249_513_293_658 / bessel_i0(0.5)) < 1e-9);
        assert!((asym / num - 1.0).abs() <= 0.5 / 70.0);
        assert!(hw_density(1.5, 1.0, ThetaEvaluator::Numeric, 1e-10).unwrap() > 0.0);
        assert!(matches!(
            hw_density(0.5, 0.1, ThetaEvaluator::Numeric, 1e-10),
            Err(HwError::PrecisionLoss { .. })
        ));
    }

    #[test]
    fn tail_coefficients_converge() {
        let c = theta_tail_coeff(50.0).unwrap();
        assert!((c.approx / c.exact - 1.0).abs() < 0.01);
        let c = theta_tail_coeff(0.5).unwrap();
        assert!(rel(c.exact, 0.924_419_071_227_665_9 / (2.0 * PI).sqrt()) < 1e-14);
    }
}
