//! Cancellation-free forms of the elementary combinations that appear in the
//! saddle-point formulas. Each switches to a Taylor series for small
//! arguments, where the closed form subtracts nearly equal numbers.

/// Coefficients of x·coth x = Σ cₙ x²ⁿ, cₙ = 2²ⁿ B₂ₙ/(2n)!.
pub(crate) const XCOTH: [f64; 22] = [
    1.0,
    0.3333333333333333,
    -0.022222222222222223,
    0.0021164021164021165,
    -0.00021164021164021165,
    2.1377799155576935e-05,
    -2.1644042808063972e-06,
    2.1925947851873778e-07,
    -2.2214608789979678e-08,
    2.2507846516808994e-09,
    -2.2805151204592183e-10,
    2.3106432599002624e-11,
    -2.3411706819824882e-12,
    2.3721017400233653e-13,
    -2.4034415333307705e-14,
    2.4351954029183367e-15,
    -2.4673688045172075e-16,
    2.499967277122081e-17,
    -2.532996435740635e-18,
    2.566461970282629e-19,
    -2.6003696460137274e-20,
    2.63472530441538e-21,
];

/// Power series in u of N(u) = 5d − 2d² − 5(1 − ρ²), the numerator of g̃₂,
/// where u = x² (or −z² on the trigonometric side), d = x·coth x − 1 and
/// ρ = x/sinh x. The first three coefficients vanish identically.
pub(crate) const G2_NUMERATOR: [f64; 22] = [
    0.0,
    0.0,
    0.0,
    -0.012698412698412698,
    0.0025396825396825397,
    -0.0003848003848003848,
    5.194570273935353e-05,
    -6.5777843555621335e-06,
    7.997259164392685e-07,
    -9.453295537059777e-08,
    1.0946472578204248e-08,
    -1.2477473603461418e-09,
    1.404702409189493e-10,
    -1.565587148415421e-11,
    1.7304779039981548e-12,
    -1.8994524142763027e-13,
    2.072589795794454e-14,
    -2.249970549409873e-15,
    2.4316765783110094e-16,
    -2.6177912096882812e-17,
    2.8083992176948255e-18,
    -3.0035868470335332e-19,
];

/// Horner evaluation of Σ coeffs[k]·u^k.
pub(crate) fn poly(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// sinh(x)/x − 1.
pub(crate) fn sinhc_m1(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let u = x * x;
        let mut term = u / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= u / (2.0 * k * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.sinh() / x - 1.0
    }
}

/// 1 − sin(z)/z.
pub(crate) fn sinc_defect(z: f64) -> f64 {
    if z.abs() < 1.0 {
        let u = z * z;
        let mut term = u / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -u / (2.0 * k * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        1.0 - z.sin() / z
    }
}

/// x·coth(x) − 1.
pub(crate) fn xcoth_m1(x: f64) -> f64 {
    if x.abs() < 1.0 {
        poly(&XCOTH[1..], x * x) * x * x
    } else {
        x / x.tanh() - 1.0
    }
}

/// 1 − z·cot(z), for 0 ≤ z < π.
pub(crate) fn one_minus_zcot(z: f64) -> f64 {
    if z.abs() < 1.0 {
        let u = -z * z;
        -poly(&XCOTH[1..], u) * u
    } else {
        1.0 - z / z.tan()
    }
}

/// The g̃₂ numerator N(u) for |u| < 1, where the closed form cancels to O(u³).
pub(crate) fn g2_numerator_series(u: f64) -> f64 {
    poly(&G2_NUMERATOR, u)
}

const TANH_ODD: [f64; 6] = [
    1.0 / 3.0,
    2.0 / 15.0,
    17.0 / 315.0,
    62.0 / 2835.0,
    1382.0 / 155925.0,
    21844.0 / 6081075.0,
];

/// x − tanh(x).
pub(crate) fn x_minus_tanh(x: f64) -> f64 {
    if x.abs() < 0.05 {
        let u = x * x;
        x * u * poly(&TANH_ODD, -u)
    } else {
        x - x.tanh()
    }
}

/// tan(z) − z.
pub(crate) fn tan_minus(z: f64) -> f64 {
    if z.abs() < 0.05 {
        let u = z * z;
        z * u * poly(&TANH_ODD, u)
    } else {
        z.tan() - z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn series_and_closed_forms_meet_at_the_switch() {
        for &x in &[0.999_999, 1.0, 1.000_001] {
            assert!(rel(sinhc_m1(x), x.sinh() / x - 1.0) < 1e-14);
            assert!(rel(sinc_defect(x), 1.0 - x.sin() / x) < 1e-14);
            assert!(rel(xcoth_m1(x), x / x.tanh() - 1.0) < 1e-14);
            assert!(rel(one_minus_zcot(x), 1.0 - x / x.tan()) < 1e-14);
        }
        for &x in &[0.049_999, 0.05] {
            assert!(rel(x_minus_tanh(x), x - x.tanh()) < 1e-12);
            assert!(rel(tan_minus(x), x.tan() - x) < 1e-12);
        }
    }

    #[test]
    fn small_arguments_keep_relative_accuracy() {
        let x = 1e-5;
        assert!(rel(sinhc_m1(x), x * x / 6.0 + x.powi(4) / 120.0) < 1e-15);
        assert!(rel(sinc_defect(x), x * x / 6.0 - x.powi(4) / 120.0) < 1e-15);
        assert!(rel(xcoth_m1(x), x * x / 3.0 - x.powi(4) / 45.0) < 1e-15);
        assert!(rel(one_minus_zcot(x), x * x / 3.0 + x.powi(4) / 45.0) < 1e-15);
        assert!(rel(x_minus_tanh(x), x.powi(3) / 3.0) < 1e-9);
        assert!(rel(tan_minus(x), x.powi(3) / 3.0) < 1e-9);
    }

    #[test]
    fn numerator_series_matches_closed_form_at_moderate_u() {
        // at u = 0.81 the closed form has lost only a few digits
        let x: f64 = 0.9;
        let d = x / x.tanh() - 1.0;
        let rho = x / x.sinh();
        let closed = 5.0 * d - 2.0 * d * d - 5.0 * (1.0 - rho * rho);
        assert!(rel(g2_numerator_series(x * x), closed) < 1e-11);
        let z: f64 = 0.9;
        let dz = z / z.tan() - 1.0;
        let rz = z / z.sin();
        let closed = 5.0 * dz - 2.0 * dz * dz - 5.0 * (1.0 - rz * rz);
        assert!(rel(g2_numerator_series(-z * z), closed) < 1e-11);
    }
}
