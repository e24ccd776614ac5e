//! Adaptive 15-point Gauss–Kronrod quadrature on finite intervals.
//!
//! Each panel is integrated with the K15 rule and the embedded G7 rule; the
//! panel with the largest error estimate is bisected until the total error
//! estimate meets the tolerance.

use std::convert::Infallible;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gk15<F, E>(f: &mut F, a: f64, b: f64) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kron.abs();
    let mut fv = [0.0; 14];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kron * h;
    resabs *= h.abs();
    resasc *= h.abs();
    // QUADPACK's scaling of the Kronrod–Gauss difference
    let mut err = ((kron - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value, err })
}

/// Integrates a fallible integrand over consecutive panels delimited by
/// `points` (at least two, increasing). The first error returned by `f`
/// aborts the integration.
pub fn try_integrate_points<F, E>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadEstimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut panels = Vec::with_capacity(opts.max_intervals.max(points.len()));
    for w in points.windows(2) {
        panels.push(gk15(&mut f, w[0], w[1])?);
    }
    let mut evaluations = 15 * panels.len();
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if !(err.is_finite() && value.is_finite()) {
            return Ok(QuadEstimate {
                value,
                abs_err: err,
                evaluations,
                converged: false,
            });
        }
        if err <= target {
            return Ok(QuadEstimate {
                value,
                abs_err: err,
                evaluations,
                converged: true,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        let too_narrow = (p.b - p.a).abs() <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if panels.len() + 2 > opts.max_intervals || too_narrow {
            panels.push(p);
            let value: f64 = panels.iter().map(|p| p.value).sum();
            return Ok(QuadEstimate {
                value,
                abs_err: err,
                evaluations,
                converged: false,
            });
        }
        panels.push(gk15(&mut f, p.a, mid)?);
        panels.push(gk15(&mut f, mid, p.b)?);
        evaluations += 30;
    }
}

/// Integrates `f` over [a, b].
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadEstimate
where
    F: FnMut(f64) -> f64,
{
    match try_integrate_points(|x| Ok::<f64, Infallible>(f(x)), &[a, b], opts) {
        Ok(q) => q,
        Err(never) => match never {},
    }
}
