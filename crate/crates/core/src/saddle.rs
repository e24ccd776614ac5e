//! Root solvers for the transcendental equations behind the expansion.
//!
//! | equation                          | solver            |
//! |-----------------------------------|-------------------|
//! | ρ·sinh x / x = 1, ρ < 1           | [`solve_x1`]      |
//! | y + ρ·sin y = π, ρ > 1            | [`solve_y1`]      |
//! | sinh β / β = a, a ≥ 1             | [`solve_beta`]    |
//! | sin 2ξ / 2ξ = a, a ≤ 1            | [`solve_xi`]      |
//! | F'(ρ) + a·ρ = 0                   | [`solve_rho_star`]|
//! | Gerhold's saddle equation for u₀  | [`solve_u0`]      |
//!
//! Near a degenerate root (ρ → 1, a → 1) the equations are rewritten in
//! terms of sinh x/x − 1 or 1 − sin z/z so that the root keeps full
//! relative accuracy.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::elementary::{sinc_defect, sinhc_m1};
use crate::error::{HwError, Result};
use crate::roots::newton_bisect;

/// Half-width of the band around ρ = 1 handled by series expansions.
pub const EPS_SWITCH: f64 = 1e-3;

/// Tolerances for every root solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    /// Validated constructor.
    ///
    /// # Errors
    /// [`HwError::Domain`] if `rel_tol ≤ 0`, `abs_tol < 0` or `max_iter = 0`.
    pub fn new(rel_tol: f64, abs_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(HwError::domain("rel_tol", rel_tol, "(0, inf)"));
        }
        if !(abs_tol >= 0.0) {
            return Err(HwError::domain("abs_tol", abs_tol, "[0, inf)"));
        }
        if max_iter == 0 {
            return Err(HwError::domain("max_iter", 0.0, "[1, inf)"));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_iter,
        })
    }
}

/// Which saddle governs the expansion at a given ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Below1,
    NearOne,
    Above1,
}

/// Classification of ρ together with its saddle root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleBranch {
    pub branch: Branch,
    /// x₁ on `Below1`, y₁ on `Above1`, absent on `NearOne`.
    pub root: Option<f64>,
    pub rho: f64,
}

impl SaddleBranch {
    /// # Errors
    /// [`HwError::Domain`] for ρ ≤ 0; root-solver errors otherwise.
    pub fn classify(rho: f64, cfg: &RootConfig) -> Result<Self> {
        crate::error::require_positive("rho", rho)?;
        let (branch, root) = if (rho - 1.0).abs() <= EPS_SWITCH {
            (Branch::NearOne, None)
        } else if rho < 1.0 {
            (Branch::Below1, Some(solve_x1(rho, cfg)?))
        } else {
            (Branch::Above1, Some(solve_y1(rho, cfg)?))
        };
        Ok(Self { branch, root, rho })
    }
}

/// Solves sinh(x)/x = T for x ≥ 0, given T − 1 and log T separately so that
/// neither loses accuracy when T is close to 1 or huge.
fn sinhc_root(
    target_m1: f64,
    log_target: f64,
    cfg: &RootConfig,
    what: &'static str,
) -> Result<f64> {
    if target_m1 == 0.0 {
        return Ok(0.0);
    }
    let l = log_target;
    let mut hi = l + (1.0 + 2.0 * l).ln() + 2.0;
    if l > 1.0 {
        // log form: log(sinh x / x) = log T
        let lsh = |x: f64| {
            if x < 2.0 {
                sinhc_m1(x).ln_1p()
            } else {
                x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - x.ln()
            }
        };
        while lsh(hi) < l {
            hi *= 2.0;
        }
        let guess = l + (2.0 * l).ln();
        newton_bisect(
            |x| (lsh(x) - l, 1.0 / x.tanh() - 1.0 / x),
            0.0,
            hi,
            Some(guess),
            cfg,
            what,
        )
    } else {
        while sinhc_m1(hi) < target_m1 {
            hi *= 2.0;
        }
        let guess = (6.0 * target_m1).sqrt();
        newton_bisect(
            |x| {
                let d = if x < 1e-4 {
                    x / 3.0
                } else {
                    (x * x.cosh() - x.sinh()) / (x * x)
                };
                (sinhc_m1(x) - target_m1, d)
            },
            0.0,
            hi,
            Some(guess),
            cfg,
            what,
        )
    }
}

/// Solves sin(w)/w = a for w ∈ [0, π), given 1 − a and a.
fn sinc_root(one_minus_a: f64, a: f64, cfg: &RootConfig, what: &'static str) -> Result<(f64, f64)> {
    if one_minus_a == 0.0 {
        return Ok((0.0, PI));
    }
    if a >= 0.5 {
        let guess = (6.0 * one_minus_a).sqrt().min(3.0);
        let w = newton_bisect(
            |w| {
                let d = if w < 1e-4 {
                    w / 3.0
                } else {
                    (w.sin() - w * w.cos()) / (w * w)
                };
                (sinc_defect(w) - one_minus_a, d)
            },
            0.0,
            PI,
            Some(guess),
            cfg,
            what,
        )?;
        Ok((w, PI - w))
    } else {
        // w is close to π here, so solve for v = π − w, which keeps its
        // relative accuracy as a → 0.
        let v = newton_bisect(
            |v| (v.sin() - a * (PI - v), v.cos() + a),
            0.0,
            PI - 1.5,
            Some(a * PI / (1.0 + a)),
            cfg,
            what,
        )?;
        Ok((PI - v, v))
    }
}

/// Root x₁ > 0 of ρ·sinh(x)/x = 1 for 0 < ρ < 1.
///
/// # Errors
/// [`HwError::Domain`] if ρ ∉ (0, 1); [`HwError::Convergence`] if the
/// iteration budget is exhausted.
pub fn solve_x1(rho: f64, cfg: &RootConfig) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(HwError::domain("rho", rho, "(0, 1)"));
    }
    sinhc_root((1.0 - rho) / rho, -rho.ln(), cfg, "x1")
}

/// Both forms of the trigonometric saddle for ρ > 1: y₁ and z = π − y₁.
/// Whichever is smaller is computed directly so that neither loses digits.
pub(crate) fn trig_root(rho: f64, cfg: &RootConfig) -> Result<(f64, f64)> {
    if rho <= 2.0 {
        let (z, _) = sinc_root((rho - 1.0) / rho, 1.0 / rho, cfg, "y1")?;
        Ok((PI - z, z))
    } else {
        let lo = 0.5 * PI / (1.0 + rho);
        let y = newton_bisect(
            |y| (y + rho * y.sin() - PI, 1.0 + rho * y.cos()),
            lo,
            FRAC_PI_2,
            Some(PI / (1.0 + rho)),
            cfg,
            "y1",
        )?;
        Ok((y, PI - y))
    }
}

/// Root y₁ ∈ (0, π) of y + ρ·sin(y) = π for ρ > 1.
///
/// # Errors
/// [`HwError::Domain`] if ρ ≤ 1; [`HwError::Convergence`].
pub fn solve_y1(rho: f64, cfg: &RootConfig) -> Result<f64> {
    if !(rho > 1.0) || rho.is_infinite() {
        return Err(HwError::domain("rho", rho, "(1, inf)"));
    }
    trig_root(rho, cfg).map(|(y, _)| y)
}

/// Root β ≥ 0 of sinh(β)/β = a for a ≥ 1 (β = 0 at a = 1).
///
/// # Errors
/// [`HwError::Domain`] if a < 1.
pub fn solve_beta(a: f64, cfg: &RootConfig) -> Result<f64> {
    if !(a >= 1.0) || a.is_infinite() {
        return Err(HwError::domain("a", a, "[1, inf)"));
    }
    sinhc_root(a - 1.0, a.ln(), cfg, "beta")
}

/// Root ξ ∈ [0, π/2) of sin(2ξ)/(2ξ) = a for 0 < a ≤ 1 (ξ = 0 at a = 1).
///
/// # Errors
/// [`HwError::Domain`] if a ∉ (0, 1].
pub fn solve_xi(a: f64, cfg: &RootConfig) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(HwError::domain("a", a, "(0, 1]"));
    }
    xi_pair(a, cfg, "xi").map(|(xi, _)| xi)
}

/// ξ with sin(2ξ)/(2ξ) = a together with π/2 − ξ, each to full relative
/// accuracy.
pub(crate) fn xi_pair(a: f64, cfg: &RootConfig, what: &'static str) -> Result<(f64, f64)> {
    sinc_root(1.0 - a, a, cfg, what).map(|(w, v)| (0.5 * w, 0.5 * v))
}

/// Saddle root behind ρ*(a), kept so the rate function can be assembled
/// from the same root without a second solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RateRoot {
    /// x̂ with sinh(2x̂)/(2x̂) = a, a ≥ 1.
    Hyperbolic(f64),
    /// ζ = π − ŷ with sin(2ζ)/(2ζ) = a, a < 1, and π/2 − ζ.
    Trig(f64, f64),
}

pub(crate) fn rho_star_root(a: f64, cfg: &RootConfig) -> Result<(f64, RateRoot)> {
    crate::error::require_positive("a", a)?;
    if a >= 1.0 {
        let x = 0.5 * sinhc_root(a - 1.0, a.ln(), cfg, "rho_star")?;
        Ok((x.cosh() / a, RateRoot::Hyperbolic(x)))
    } else {
        let (zeta, gap) = xi_pair(a, cfg, "rho_star")?;
        Ok((gap.sin() / a, RateRoot::Trig(zeta, gap)))
    }
}

/// Minimizer ρ* ∈ (0, π/2] of H(ρ) = (1 + a²ρ²)/(2a) − π²/2 + F(ρ).
///
/// For a ≥ 1, ρ* = cosh(x̂)/a with sinh(2x̂)/(2x̂) = a; for a < 1,
/// ρ* = cos(ζ)/a with sin(2ζ)/(2ζ) = a.
///
/// # Errors
/// [`HwError::Domain`] if a ≤ 0.
pub fn solve_rho_star(a: f64, cfg: &RootConfig) -> Result<f64> {
    rho_star_root(a, cfg).map(|(rho, _)| rho)
}

/// log(r/(2√2)), the constant entering Gerhold's saddle equation.
pub fn gerhold_rho(r: f64) -> f64 {
    (r / (2.0 * std::f64::consts::SQRT_2)).ln()
}

/// Right-hand side of the u₀ equation and its derivative in s = log u.
fn u0_rhs(s: f64, grho: f64) -> (f64, f64) {
    let u = s.exp();
    let sq = (2.0 * u).sqrt();
    let val = (s - 2.0 * grho) / (2.0 * sq) + 0.25 / u;
    // d/ds = u·d/du
    let du = (2.0 - s + 2.0 * grho) / (4.0 * std::f64::consts::SQRT_2 * u.sqrt()) - 0.25 / u;
    (val, du)
}

/// Largest root u₀ of t = log u/(2√(2u)) − ρ_G/√(2u) + 1/(4u),
/// ρ_G = log(r/(2√2)).
///
/// The right-hand side tends to +∞ as u → 0 and to 0⁺ as u → ∞, so a root
/// exists for every t > 0. The search starts from the small-t approximant
/// u ≈ log²(1/t)/(2t²) and expands geometrically.
///
/// # Errors
/// [`HwError::Domain`] on nonpositive input; [`HwError::NoRoot`] if the
/// bracket search leaves the representable range.
pub fn solve_u0(r: f64, t: f64, cfg: &RootConfig) -> Result<f64> {
    crate::error::require_positive("r", r)?;
    crate::error::require_positive("t", t)?;
    let grho = gerhold_rho(r);
    let seed = if t < 0.5 {
        (t.recip().ln().powi(2) / (2.0 * t * t)).ln()
    } else {
        0.0
    };
    let f = |s: f64| u0_rhs(s, grho).0 - t;
    let step = 4f64.ln();
    let mut hi = seed;
    while f(hi) >= 0.0 {
        hi += step;
        if hi > 700.0 {
            return Err(HwError::NoRoot { what: "u0" });
        }
    }
    let mut lo = hi - step;
    while f(lo) <= 0.0 {
        lo -= step;
        if lo < -700.0 {
            return Err(HwError::NoRoot { what: "u0" });
        }
    }
    let s = newton_bisect(
        |s| {
            let (v, d) = u0_rhs(s, grho);
            (v - t, d)
        },
        lo,
        hi,
        None,
        cfg,
        "u0",
    )?;
    Ok(s.exp())
}
