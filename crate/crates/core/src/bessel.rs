//! Modified Bessel functions I₀ and K₀ of real argument.

use std::f64::consts::PI;

use crate::error::{HwError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Power series Σ (x²/4)^k/(k!)²; all terms are positive, so it is accurate
/// for any x at the cost of ~x terms.
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// e^x/√(2πx)·Σ ((2k−1)!!)²/(k!·(8x)^k), summed until the terms stop
/// shrinking. Relative error ≈ e^{−2x}.
fn i0_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (kf * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    // split the exponential so that e^x/√x survives up to x ≈ 1400
    let h = (0.5 * x).exp();
    h * (h / (2.0 * PI * x).sqrt()) * sum
}

/// I₀(x) for x ≥ 0 (even in x, so negative arguments are accepted too).
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 25.0 {
        i0_series(x)
    } else {
        i0_asymptotic(x)
    }
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        harmonic += 1.0 / k;
        let add = term * harmonic;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0_series(x) + sum
}

/// Steed's continued fraction for K₀ (Temme's CF2 with ν = 0).
fn k0_continued_fraction(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

/// K₀(x) for x > 0.
///
/// # Errors
/// [`HwError::Domain`] if x ≤ 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(HwError::domain("x", x, "(0, inf)"));
    }
    Ok(if x <= 2.0 {
        k0_series(x)
    } else {
        k0_continued_fraction(x)
    })
}
