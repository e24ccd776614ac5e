//! Small-t density of the time average a = (1/t)∫₀ᵗ e^{2(B_s + μs)} ds:
//!
//! ```text
//! P(a ∈ da) = g(a,μ)/√(2πt) · e^{−J(a)/t} · da/a · (1 + O(t))
//! ```
//!
//! obtained by the Laplace method from the exact representation
//!
//! ```text
//! P(a ∈ da) = e^{−μ²t/2} da/a ∫₀^∞ (aρ)^μ e^{−(1+a²ρ²)/(2at)} θ(ρ/t, t) dρ/ρ
//! ```
//!
//! with θ replaced by its saddle-point expansion. The exponent is
//! minimized at ρ*(a), where H(ρ) = (1 + a²ρ²)/(2a) − π²/2 + F(ρ) attains
//! J(a) = H(ρ*), and J(a) equals a quarter of the Black-Scholes
//! large-deviations rate 𝒥_BS(a).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::elementary::{tan_minus, x_minus_tanh};
use crate::error::{require_finite, require_positive, HwError, Result};
use crate::hw_core::{self, theta_hat_with};
use crate::hw_reference::theta_numeric;
use crate::quad::{try_integrate_points, QuadOptions};
use crate::saddle::{rho_star_root, solve_beta, xi_pair, RateRoot, RootConfig};

/// Half-width in log a of the band where the prefactor uses its series.
pub const LOG_A_SWITCH: f64 = 1e-3;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateBranch {
    /// a ≥ 1, ρ* ≤ 1.
    AGe1,
    /// a < 1, ρ* > 1.
    ALe1,
}

/// The rate function and the saddle data at one a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEval {
    pub a: f64,
    pub j: f64,
    pub rho_star: f64,
    /// H''(ρ*) = F''(ρ*) + a.
    pub h_dd: f64,
    pub branch: RateBranch,
}

/// J(a) = ½x̂² − ½x̂ tanh x̂ for a ≥ 1 (sinh 2x̂/2x̂ = a), and
/// ½ζ tan ζ − ½ζ² for a < 1 (sin 2ζ/2ζ = a).
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0.
pub fn rate_j(a: f64) -> Result<RateEval> {
    let cfg = RootConfig::default();
    let (rho_star, root) = rho_star_root(a, &cfg)?;
    let (j, branch) = match root {
        RateRoot::Hyperbolic(x) => (0.5 * x * x_minus_tanh(x), RateBranch::AGe1),
        RateRoot::Trig(z, gap) => (0.5 * z * tan_minus_pair(z, gap), RateBranch::ALe1),
    };
    let h_dd = hw_core::eval(rho_star, &cfg)?.fpp + a;
    Ok(RateEval {
        a,
        j,
        rho_star,
        h_dd,
        branch,
    })
}

/// Black-Scholes rate function: ½β² − β tanh(β/2) for x ≥ 1
/// (sinh β/β = x), 2ξ(tan ξ − ξ) for x < 1 (sin 2ξ/2ξ = x).
///
/// # Errors
/// [`HwError::Domain`] if x ≤ 0.
pub fn rate_jbs(x: f64) -> Result<f64> {
    require_positive("x", x)?;
    let cfg = RootConfig::default();
    if x >= 1.0 {
        let b = solve_beta(x, &cfg)?;
        Ok(b * x_minus_tanh(0.5 * b))
    } else {
        let (xi, gap) = xi_pair(x, &cfg, "xi")?;
        Ok(2.0 * xi * tan_minus_pair(xi, gap))
    }
}

/// tan ζ − ζ given ζ and π/2 − ζ; the cotangent of the gap is used once ζ
/// is near π/2.
fn tan_minus_pair(z: f64, gap: f64) -> f64 {
    if gap < 0.5 {
        1.0 / gap.tan() - z
    } else {
        tan_minus(z)
    }
}

/// Third-order Taylor polynomial 3/2 u² − 3/10 u³ + 109/1400 u⁴ of
/// 𝒥_BS(e^u).
pub fn rate_jbs_taylor(u: f64) -> f64 {
    u * u * (1.5 + u * (-0.3 + u * 109.0 / 1400.0))
}

/// Minimum of H found by golden-section search, independent of the root
/// formulas behind [`rate_j`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfOracle {
    pub j: f64,
    pub rho_min: f64,
}

/// inf over ρ ∈ (0, π/2] of (1 + a²ρ²)/(2a) − π²/2 + F(ρ).
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0; [`HwError::Convergence`] if the search
/// does not shrink the interval below 1e-12.
pub fn j_inf_oracle(a: f64) -> Result<InfOracle> {
    require_positive("a", a)?;
    let cfg = RootConfig::default();
    let h = |rho: f64| -> Result<f64> {
        Ok((1.0 + a * a * rho * rho) / (2.0 * a) - PI * PI / 2.0 + hw_core::eval(rho, &cfg)?.f)
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-9, FRAC_PI_2);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (h(x1)?, h(x2)?);
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            let rho_min = 0.5 * (lo + hi);
            return Ok(InfOracle {
                j: h(rho_min)?,
                rho_min,
            });
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = h(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = h(x2)?;
        }
    }
    Err(HwError::Convergence {
        what: "golden-section search",
        iterations: 200,
    })
}

/// g(a,μ) = (aρ*)^μ G(ρ*)/(ρ*√H''(ρ*)) from the saddle data.
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0.
pub fn prefactor_g_direct(a: f64, mu: f64) -> Result<f64> {
    let rate = rate_j(a)?;
    let rs = rate.rho_star;
    let gr = hw_core::eval(rs, &RootConfig::default())?.g;
    Ok((mu * (a * rs).ln() + gr.ln() - 0.5 * rate.h_dd.ln() - rs.ln()).exp())
}

/// (√3/2)·exp(c₁ log a + c₂ log² a) with c₁ = ¾(μ+1) − 4/5 and
/// c₂ = −3/80 (μ+1) + 57/1400; relative error O(log³ a).
pub fn prefactor_g_series(a: f64, mu: f64) -> f64 {
    let l = a.ln();
    let c1 = 0.75 * (mu + 1.0) - 0.8;
    let c2 = -3.0 / 80.0 * (mu + 1.0) + 57.0 / 1400.0;
    SQRT3_2 * (c1 * l + c2 * l * l).exp()
}

/// g(a,μ), using the series within [`LOG_A_SWITCH`] of a = 1.
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0.
pub fn prefactor_g(a: f64, mu: f64) -> Result<f64> {
    require_positive("a", a)?;
    if a.ln().abs() <= LOG_A_SWITCH {
        Ok(prefactor_g_series(a, mu))
    } else {
        prefactor_g_direct(a, mu)
    }
}

/// One point of the asymptotic density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub a: f64,
    pub mu: f64,
    pub t: f64,
    /// −½log(2πt) + log g − J/t − log a.
    pub log_density: f64,
    pub g_val: f64,
    pub j_val: f64,
    /// t/70, the bound inherited from the θ expansion.
    pub err_rel_bound: f64,
    /// Quadrature value of the same density, when computed.
    pub oracle: Option<f64>,
}

impl DensityPoint {
    pub fn density(&self) -> f64 {
        self.log_density.exp()
    }
}

/// Leading small-t density of the time average at a.
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0, t ≤ 0 or μ is not finite.
pub fn density_asym(a: f64, mu: f64, t: f64) -> Result<DensityPoint> {
    require_positive("t", t)?;
    require_finite("mu", mu)?;
    let rate = rate_j(a)?;
    let g_val = prefactor_g(a, mu)?;
    let log_density = -0.5 * (2.0 * PI * t).ln() + g_val.ln() - rate.j / t - a.ln();
    Ok(DensityPoint {
        a,
        mu,
        t,
        log_density,
        g_val,
        j_val: rate.j,
        err_rel_bound: t / 70.0,
        oracle: None,
    })
}

/// How θ is evaluated inside [`density_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaMethod {
    /// θ̂·(1 + ½t g̃₂), usable at any t.
    AsymSubleading,
    /// [`theta_numeric`], usable for t ≳ 0.15 only.
    Numeric,
}

/// Density at a from adaptive quadrature of the exact ρ-integral.
///
/// The integrand is concentrated within a few √(t/H'') of ρ*; the window
/// ρ* ± 12√(t/H''(ρ*)), clipped to (0, π/2 + 5], is integrated.
///
/// # Errors
/// [`HwError::Domain`] on nonpositive a, t or tol;
/// [`HwError::PrecisionLoss`] if the numeric θ cannot be resolved;
/// [`HwError::Convergence`] if the quadrature misses `tol`.
pub fn density_numeric(a: f64, mu: f64, t: f64, method: ThetaMethod, tol: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_finite("mu", mu)?;
    require_positive("tol", tol)?;
    let cfg = RootConfig::default();
    let rate = rate_j(a)?;
    let rs = rate.rho_star;
    let width = 12.0 * (t / rate.h_dd).sqrt();
    let lo = (rs - width).max(1e-12);
    let hi = (rs + width).min(FRAC_PI_2 + 5.0);
    let base =
        |rho: f64| mu * (a * rho).ln() - (1.0 + a * a * rho * rho) / (2.0 * a * t) - rho.ln();
    let reference = base(rs) + theta_hat_with(rs / t, t, false, &cfg)?.log_leading;
    let integrand = |rho: f64| -> Result<f64> {
        match method {
            ThetaMethod::AsymSubleading => {
                let th = theta_hat_with(rho / t, t, true, &cfg)?;
                Ok((base(rho) + th.log_value() - reference).exp())
            }
            ThetaMethod::Numeric => {
                // Far in the tails θ itself is below what the quadrature
                // resolves; there the asymptotic weight decides whether the
                // point matters at all.
                let th = theta_hat_with(rho / t, t, true, &cfg)?;
                let weight = (base(rho) + th.log_value() - reference).exp();
                if weight < 1e-3 * tol {
                    return Ok(weight);
                }
                let q = theta_numeric(rho / t, t, tol)?;
                if q.precision_loss {
                    return Err(HwError::PrecisionLoss {
                        what: "theta_numeric",
                    });
                }
                Ok((base(rho) - reference).exp() * q.value)
            }
        }
    };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: tol,
        max_intervals: 500,
    };
    let q = try_integrate_points(integrand, &[lo, rs, hi], &opts)?;
    if !q.converged {
        return Err(HwError::Convergence {
            what: "density quadrature",
            iterations: opts.max_intervals,
        });
    }
    Ok((-0.5 * mu * mu * t + reference).exp() / a * q.value)
}

/// ∫ density_asym(a) da over a > 0, reported as a diagnostic; the
/// asymptotic density is not normalized exactly.
///
/// # Errors
/// [`HwError::Domain`] if t ≤ 0; [`HwError::Convergence`].
pub fn asymptotic_mass(mu: f64, t: f64, tol: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_positive("tol", tol)?;
    // in v = log a the integrand is g e^{−J/t}/√(2πt); cut where J/t > 60
    let edge = |dir: f64| -> Result<f64> {
        let mut v = dir * 0.05;
        while rate_j(v.exp())?.j / t < 60.0 {
            v *= 1.5;
            if v.abs() > 50.0 {
                break;
            }
        }
        Ok(v)
    };
    let (vlo, vhi) = (edge(-1.0)?, edge(1.0)?);
    let f = |v: f64| -> Result<f64> { Ok(density_asym(v.exp(), mu, t)?.density() * v.exp()) };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: tol,
        max_intervals: 500,
    };
    let q = try_integrate_points(f, &[vlo, 0.0, vhi], &opts)?;
    if !q.converged {
        return Err(HwError::Convergence {
            what: "density mass",
            iterations: opts.max_intervals,
        });
    }
    Ok(q.value)
}
