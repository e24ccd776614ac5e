//! Saddle-point expansion of θ(r,t) at fixed ρ = r·t:
//!
//! ```text
//! θ(r,t) = G(ρ)/(2πt) · e^{−(F(ρ) − π²/2)/t} · (1 + ½ t g̃₂(ρ) + O(t²))
//! ```
//!
//! F, G and g̃₂ are closed forms in the saddle root x₁ (ρ < 1) or
//! y₁ (ρ > 1). Writing u = x₁² on one side and u = −(π − y₁)² on the other,
//! both branches are the same analytic function of u:
//!
//! ```text
//! d = x coth x − 1,   F = π²/2 − 1 + u/2 − d,   G = √(u/d),
//! g̃₂ = (5d − 2d² − 5(1 − ρ²)) / (12 d³)
//! ```
//!
//! Within [`EPS_SWITCH`] of ρ = 1 the roots degenerate and Taylor series in
//! ρ − 1 or 1/ρ − 1 are used instead.

use std::f64::consts::PI;

use num_rational::Rational64;

use crate::elementary::{g2_numerator_series, one_minus_zcot, poly, xcoth_m1};
use crate::error::{require_positive, HwError, Result};
use crate::saddle::{solve_x1, trig_root, Branch, RootConfig, SaddleBranch, EPS_SWITCH};

const PI2_2: f64 = PI * PI / 2.0;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// F(ρ) − π²/2 in powers of ρ − 1.
const F_NEAR_ONE: [f64; 9] = [
    -1.0,
    -1.0,
    3.0 / 2.0,
    -6.0 / 5.0,
    351.0 / 350.0,
    -108.0 / 125.0,
    256338.0 / 336875.0,
    -14918256.0 / 21896875.0,
    473496678.0 / 766390625.0,
];

/// G(ρ)/√3 in powers of 1/ρ − 1.
const G_NEAR_ONE: [f64; 6] = [
    1.0,
    1.0 / 5.0,
    -4.0 / 35.0,
    2.0 / 25.0,
    -1637.0 / 26950.0,
    2111059.0 / 43793750.0,
];

/// g̃₂(ρ) in powers of 1/ρ − 1. The linear term vanishes.
const G2_NEAR_ONE: [f64; 6] = [
    -1.0 / 35.0,
    0.0,
    144.0 / 67375.0,
    -11952.0 / 4379375.0,
    39204.0 / 13934375.0,
    -34985232.0 / 13028640625.0,
];

/// F, its first two derivatives, G and g̃₂ at one value of ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreEval {
    pub rho: f64,
    pub f: f64,
    pub fp: f64,
    /// F''(ρ), from implicit differentiation of the saddle equation.
    pub fpp: f64,
    pub g: f64,
    pub g2t: f64,
    pub branch: SaddleBranch,
}

/// Evaluates everything at ρ, switching to series inside the ρ ≈ 1 band.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0; root-solver failures otherwise.
pub fn eval(rho: f64, cfg: &RootConfig) -> Result<CoreEval> {
    require_positive("rho", rho)?;
    if (rho - 1.0).abs() <= EPS_SWITCH {
        Ok(eval_near_one(rho))
    } else {
        eval_direct(rho, cfg)
    }
}

/// Closed-form branch evaluation, ignoring the switching band.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0 or ρ = 1, where the closed forms are 0/0.
pub fn eval_direct(rho: f64, cfg: &RootConfig) -> Result<CoreEval> {
    require_positive("rho", rho)?;
    if rho == 1.0 {
        return Err(HwError::domain("rho", rho, "(0, 1) or (1, inf)"));
    }
    if rho < 1.0 {
        let x = solve_x1(rho, cfg)?;
        let u = x * x;
        let d = xcoth_m1(x);
        let num = if x < 1.0 {
            g2_numerator_series(u)
        } else {
            let w = 1.0 + d;
            -12.0 + 9.0 * w - 2.0 * w * w + 5.0 * rho * rho
        };
        let sinh_x = x / rho;
        Ok(CoreEval {
            rho,
            f: (PI2_2 - 1.0) + 0.5 * u - d,
            fp: -(1.0 + d) / rho,
            fpp: sinh_x * sinh_x / d,
            g: x / d.sqrt(),
            g2t: num / (12.0 * d * d * d),
            branch: SaddleBranch {
                branch: Branch::Below1,
                root: Some(x),
                rho,
            },
        })
    } else {
        let (y, z) = trig_root(rho, cfg)?;
        // dp = 1 + ρ cos y = 1 − z cot z
        let (dp, f, fp) = if rho <= 2.0 {
            let dp = one_minus_zcot(z);
            (dp, (PI2_2 - 1.0) - 0.5 * z * z + dp, -z.cos())
        } else {
            let c = rho * y.cos();
            (1.0 + c, PI * y - 0.5 * y * y + c, y.cos())
        };
        let g2t = if z < 1.0 {
            -g2_numerator_series(-z * z) / (12.0 * dp * dp * dp)
        } else {
            let c = dp - 1.0;
            (12.0 + 9.0 * c + 2.0 * c * c - 5.0 * rho * rho) / (12.0 * dp * dp * dp)
        };
        let sin_y = z / rho;
        Ok(CoreEval {
            rho,
            f,
            fp,
            fpp: sin_y * sin_y / dp,
            g: z / dp.sqrt(),
            g2t,
            branch: SaddleBranch {
                branch: Branch::Above1,
                root: Some(y),
                rho,
            },
        })
    }
}

/// Taylor-series evaluation around ρ = 1. Accurate to ~1e-16 inside the
/// switching band; degrades like (ρ − 1)⁶ outside it.
pub fn eval_near_one(rho: f64) -> CoreEval {
    let e = rho - 1.0;
    let v = 1.0 / rho - 1.0;
    let dcoef: Vec<f64> = (1..F_NEAR_ONE.len())
        .map(|k| k as f64 * F_NEAR_ONE[k])
        .collect();
    let ddcoef: Vec<f64> = (1..dcoef.len()).map(|k| k as f64 * dcoef[k]).collect();
    CoreEval {
        rho,
        f: PI2_2 + poly(&F_NEAR_ONE, e),
        fp: poly(&dcoef, e),
        fpp: poly(&ddcoef, e),
        g: SQRT3 * poly(&G_NEAR_ONE, v),
        g2t: poly(&G2_NEAR_ONE, v),
        branch: SaddleBranch {
            branch: Branch::NearOne,
            root: None,
            rho,
        },
    }
}

/// F(ρ), the exponent of the expansion. Minimal at ρ = π/2 with value 3π²/8.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0.
pub fn f(rho: f64) -> Result<f64> {
    eval(rho, &RootConfig::default()).map(|c| c.f)
}

/// F'(ρ): −cosh x₁ for ρ < 1, cos y₁ for ρ > 1.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0.
pub fn f_prime(rho: f64) -> Result<f64> {
    eval(rho, &RootConfig::default()).map(|c| c.fp)
}

/// F''(ρ): sinh²x₁/(ρ cosh x₁ − 1) for ρ < 1, sin²y₁/(1 + ρ cos y₁) for
/// ρ > 1, and 3 at ρ = 1.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0.
pub fn f_second(rho: f64) -> Result<f64> {
    eval(rho, &RootConfig::default()).map(|c| c.fpp)
}

/// G(ρ), the prefactor of the expansion; √3 at ρ = 1.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0.
pub fn g(rho: f64) -> Result<f64> {
    eval(rho, &RootConfig::default()).map(|c| c.g)
}

/// g̃₂(ρ), the relative O(t) correction; takes values in [−1/35, 0).
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 0.
pub fn g2_tilde(rho: f64) -> Result<f64> {
    eval(rho, &RootConfig::default()).map(|c| c.g2t)
}

/// Exact value g̃₂(1) = −1/35.
pub fn g2_tilde_at_one() -> Rational64 {
    Rational64::new(-1, 35)
}

/// Coefficients of 1, t, t² in θ(1/t, t)/θ̂(1/t, t).
///
/// The t² coefficient comes from carrying Watson's lemma one order further
/// at the degenerate saddle; it agrees with high-precision quadrature of the
/// integral (ratio − 1 + t/70 ≈ 6.3e-4·t² for t ≤ 0.2).
pub fn rho1_series_coefficients() -> [Rational64; 3] {
    [
        Rational64::from_integer(1),
        g2_tilde_at_one() / 2,
        Rational64::new(7, 11000),
    ]
}

/// Whether θ̂ could be represented as a finite nonzero double.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturation {
    None,
    Underflow,
    Overflow,
}

/// The assembled approximation θ̂(r,t), kept in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaApprox {
    /// log of G(ρ)/(2πt)·exp(−(F(ρ) − π²/2)/t).
    pub log_leading: f64,
    /// exp(log_value()), saturated to 0 or ∞ when not representable.
    pub value: f64,
    /// 1 + ½ t g̃₂(ρ).
    pub subleading_factor: f64,
    /// Relative error bound min(t/70, 1) on the leading term.
    pub error_bound: f64,
    pub with_subleading: bool,
    pub saturation: Saturation,
    pub rho: f64,
    pub t: f64,
}

impl ThetaApprox {
    /// log of the reported value, including the subleading factor when
    /// requested. −∞ if that factor is not positive (only possible for
    /// t ≥ 70).
    pub fn log_value(&self) -> f64 {
        if self.with_subleading {
            if self.subleading_factor > 0.0 {
                self.log_leading + self.subleading_factor.ln()
            } else {
                f64::NEG_INFINITY
            }
        } else {
            self.log_leading
        }
    }
}

/// θ̂(r,t) with optional subleading correction.
///
/// # Errors
/// [`HwError::Domain`] if r ≤ 0 or t ≤ 0.
pub fn theta_hat(r: f64, t: f64, with_subleading: bool) -> Result<ThetaApprox> {
    theta_hat_with(r, t, with_subleading, &RootConfig::default())
}

/// [`theta_hat`] with explicit solver settings.
///
/// # Errors
/// As [`theta_hat`].
pub fn theta_hat_with(
    r: f64,
    t: f64,
    with_subleading: bool,
    cfg: &RootConfig,
) -> Result<ThetaApprox> {
    require_positive("r", r)?;
    require_positive("t", t)?;
    let rho = r * t;
    let c = eval(rho, cfg)?;
    Ok(assemble(&c, t, with_subleading))
}

/// Builds θ̂ from an already computed [`CoreEval`] at ρ = r·t.
pub fn assemble(c: &CoreEval, t: f64, with_subleading: bool) -> ThetaApprox {
    let log_leading = -(c.f - PI2_2) / t + c.g.ln() - (2.0 * PI * t).ln();
    let mut out = ThetaApprox {
        log_leading,
        value: 0.0,
        subleading_factor: 1.0 + 0.5 * t * c.g2t,
        error_bound: (t / 70.0).min(1.0),
        with_subleading,
        saturation: Saturation::None,
        rho: c.rho,
        t,
    };
    let lv = out.log_value();
    out.value = lv.exp();
    if out.value == 0.0 && lv.is_finite() {
        out.saturation = Saturation::Underflow;
    } else if out.value.is_infinite() {
        out.saturation = Saturation::Overflow;
    }
    out
}

/// θ(1/t, t) from the ρ = 1 series truncated after `order` powers of t.
///
/// # Errors
/// [`HwError::Domain`] if t ≤ 0 or order > 2.
pub fn theta_rho1_series(t: f64, order: usize) -> Result<f64> {
    require_positive("t", t)?;
    if order > 2 {
        return Err(HwError::domain("order", order as f64, "{0, 1, 2}"));
    }
    let coeffs = rho1_series_coefficients();
    let mut sum = 0.0;
    let mut tk = 1.0;
    for c in &coeffs[..=order] {
        sum += (*c.numer() as f64 / *c.denom() as f64) * tk;
        tk *= t;
    }
    Ok(SQRT3 / (2.0 * PI * t) * (1.0 / t).exp() * sum)
}

/// ½L² + L log 2L − L + ½log²(2L) + π²/2 with L = log(1/ρ); residual
/// decays like log²L/L as ρ → 0.
pub fn f_asymptotic_small_rho(rho: f64) -> f64 {
    let l = -rho.ln();
    let l2 = (2.0 * l).ln();
    0.5 * l * l + l * l2 - l + 0.5 * l2 * l2 + PI2_2
}

/// ρ + π²/(2(1 + ρ)), with O(ρ⁻³) error as ρ → ∞.
pub fn f_asymptotic_large_rho(rho: f64) -> f64 {
    rho + PI2_2 / (1.0 + rho)
}

/// √L − ρ²√L + (log 2L + 1)/(2√L) with L = log(1/ρ).
pub fn g_asymptotic_small_rho(rho: f64) -> f64 {
    let l = -rho.ln();
    let sl = l.sqrt();
    sl - rho * rho * sl + ((2.0 * l).ln() + 1.0) / (2.0 * sl)
}

/// πρ/(1 + ρ)^{3/2}, with O(ρ^{−5/2}) error as ρ → ∞.
pub fn g_asymptotic_large_rho(rho: f64) -> f64 {
    PI * rho / (1.0 + rho).powf(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cfg() -> RootConfig {
        RootConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn tabulated_exponents() {
        assert!(rel(f(0.1).unwrap(), 10.55839) < 1e-6);
        assert!(rel(f(0.5).unwrap(), 5.0711697) < 1e-7);
        assert!(rel(f(1.25).unwrap(), 3.7630277) < 1e-7);
        assert!(rel(f(5.0).unwrap(), 5.8392939) < 1e-7);
    }

    #[test]
    fn exact_constants() {
        assert!((f(1.0).unwrap() - (PI2_2 - 1.0)).abs() < 1e-15);
        assert!((f(FRAC_PI_2).unwrap() - 3.0 * PI * PI / 8.0).abs() < 1e-14);
        assert!((g(1.0).unwrap() - SQRT3).abs() < 1e-15);
        assert!((g2_tilde(1.0).unwrap() + 1.0 / 35.0).abs() < 1e-16);
        assert!((f_prime(1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(f_prime(FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((f_second(1.0).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &rho in &[0.1, 0.5, 0.9, 1.2, 3.0] {
            let h = 1e-5 * rho;
            let fd = (f(rho + h).unwrap() - f(rho - h).unwrap()) / (2.0 * h);
            assert!(rel(f_prime(rho).unwrap(), fd) < 1e-8, "F' at {rho}");
            let fd2 = (f_prime(rho + h).unwrap() - f_prime(rho - h).unwrap()) / (2.0 * h);
            assert!(rel(f_second(rho).unwrap(), fd2) < 1e-7, "F'' at {rho}");
        }
    }

    #[test]
    fn series_agrees_with_direct_at_band_edges() {
        for &rho in &[1.0 - EPS_SWITCH, 1.0 + EPS_SWITCH] {
            let d = eval_direct(rho, &cfg()).unwrap();
            let s = eval_near_one(rho);
            assert!(rel(d.f, s.f) < 1e-14);
            assert!(rel(d.fp, s.fp) < 1e-12);
            assert!(rel(d.fpp, s.fpp) < 1e-10);
            assert!(rel(d.g, s.g) < 1e-12);
            assert!(rel(d.g2t, s.g2t) < 1e-11);
        }
    }

    #[test]
    fn theta_hat_table_values() {
        assert!(
            rel(
                theta_hat(0.5, 0.2, false).unwrap().value,
                1.1760629371483917e-12
            ) < 1e-9
        );
        assert!(
            rel(
                theta_hat(0.5, 1.0, false).unwrap().value,
                0.27218391648840764
            ) < 1e-9
        );
        assert!(rel(theta_hat(0.5, 10.0, false).unwrap().value, 0.01643438) < 1e-6);
    }

    #[test]
    fn theta_hat_saturates_in_log_space() {
        let th = theta_hat(0.5, 1e-4, false).unwrap();
        assert_eq!(th.saturation, Saturation::Underflow);
        assert_eq!(th.value, 0.0);
        assert!(th.log_leading.is_finite() && th.log_leading < -700.0);
        let th = theta_hat(1.0 / 1e-3, 1e-3, false).unwrap();
        assert_eq!(th.saturation, Saturation::Overflow);
    }

    #[test]
    fn rho_one_series_reduces_to_theta_hat() {
        let t = 0.3;
        let lead = theta_rho1_series(t, 0).unwrap();
        assert!(rel(lead, theta_hat(1.0 / t, t, false).unwrap().value) < 1e-14);
        let one = theta_rho1_series(t, 1).unwrap();
        assert!(rel(one, theta_hat(1.0 / t, t, true).unwrap().value) < 1e-14);
        assert!(theta_rho1_series(t, 3).is_err());
    }

    #[test]
    fn asymptotic_helpers_track_the_exact_functions() {
        for &rho in &[20.0, 50.0, 100.0] {
            let gap = (f(rho).unwrap() - f_asymptotic_large_rho(rho)).abs();
            assert!(gap * rho.powi(3) < 200.0);
            let ratio = g(rho).unwrap() / g_asymptotic_large_rho(rho);
            assert!((ratio - 1.0).abs() < 3.0 / rho);
        }
        let mut last = f64::INFINITY;
        for &rho in &[1e-4, 1e-8, 1e-16, 1e-32, 1e-64] {
            let gap = (f(rho).unwrap() - f_asymptotic_small_rho(rho)).abs();
            assert!(gap < last);
            last = gap;
            assert!((g(rho).unwrap() - g_asymptotic_small_rho(rho)).abs() < 0.01);
        }
    }
}
