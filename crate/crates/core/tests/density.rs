//! Time-average density against frozen high-precision Laplace integrals.

use hartman_watson::gbm_density::{
    asymptotic_mass, density_asym, density_numeric, rate_j, ThetaMethod,
};
use hartman_watson::HwError;

/// (a, μ, t, density from 30-digit integration of the θ̂-with-subleading
/// kernel)
const FROZEN: [(f64, f64, f64, f64); 9] = [
    (0.8, 0.0, 0.1, 1.137665233740608),
    (0.8, 0.0, 0.2, 0.8884200399187556),
    (0.8, 0.0, 0.4, 0.6615192436347178),
    (0.8, 1.0, 0.1, 0.90712312855829),
    (0.8, 1.0, 0.2, 0.6691622856539848),
    (0.8, 1.0, 0.4, 0.4448928680784068),
    (1.25, 0.0, 0.1, 0.7242701199865288),
    (1.25, 0.0, 0.4, 0.4162261657131687),
    (1.25, 1.0, 0.2, 0.5902614034989547),
];

#[test]
fn numeric_density_matches_frozen_values() {
    for (a, mu, t, want) in FROZEN {
        let got = density_numeric(a, mu, t, ThetaMethod::AsymSubleading, 1e-10).unwrap();
        assert!(
            (got / want - 1.0).abs() < 1e-11,
            "a={a} mu={mu} t={t} got={got}"
        );
    }
}

#[test]
fn asymptotic_density_is_laplace_form() {
    for (a, mu, t, _) in FROZEN {
        let p = density_asym(a, mu, t).unwrap();
        let j = rate_j(a).unwrap().j;
        assert_eq!(p.j_val, j);
        let rebuilt = p.g_val / (2.0 * std::f64::consts::PI * t).sqrt() * (-j / t).exp() / a;
        assert!((p.density() / rebuilt - 1.0).abs() < 1e-12, "a={a}");
    }
}

#[test]
fn numeric_theta_kernel_agrees_where_quadrature_is_reliable() {
    let asym = density_numeric(1.0, 0.0, 0.4, ThetaMethod::AsymSubleading, 1e-10).unwrap();
    let num = density_numeric(1.0, 0.0, 0.4, ThetaMethod::Numeric, 1e-10).unwrap();
    assert!((asym / num - 1.0).abs() < 0.4 * 0.4 / 70.0 * 2.0);
}

#[test]
fn mass_is_close_to_one_for_small_t() {
    let m = asymptotic_mass(0.0, 0.05, 1e-8).unwrap();
    assert!((m - 1.0).abs() < 0.05, "mass {m}");
}

#[test]
fn domain_errors() {
    assert!(matches!(
        density_asym(0.0, 0.0, 0.1),
        Err(HwError::Domain { .. })
    ));
    assert!(matches!(
        density_asym(1.0, f64::NAN, 0.1),
        Err(HwError::Domain { .. })
    ));
    assert!(matches!(
        density_asym(1.0, 0.0, -0.1),
        Err(HwError::Domain { .. })
    ));
}
