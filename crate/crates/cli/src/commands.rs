//! The subcommands, each producing one [`OutputRecord`].

use hartman_watson::gbm_density::{density_asym, density_numeric, rate_j, ThetaMethod};
use hartman_watson::hw_core::{self, theta_hat};
use hartman_watson::hw_reference::{table_row, theta_gerhold, theta_numeric};
use hartman_watson::saddle::Branch;
use hartman_watson::HwError;

use crate::grid::Grid;
use crate::record::{Cell, OutputRecord};
use crate::CliError;

/// Smallest t at which the quadrature oracle is trusted in sweeps.
pub const ORACLE_T_FLOOR: f64 = 0.2;

pub const TABLE1_T: [f64; 10] = [0.1, 0.2, 0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ThetaMethodArg {
    Asym,
    Asym2,
    Gerhold,
    Numeric,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DensityMethodArg {
    Asym,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    #[value(name = "g2tilde")]
    G2tilde,
    #[value(name = "theta_vs_t")]
    ThetaVsT,
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Below1 => "below1",
        Branch::NearOne => "near_one",
        Branch::Above1 => "above1",
    }
}

/// Numeric θ as a cell: empty with a flag when cancellation makes the
/// quadrature unreliable, an error when it simply fails to converge.
fn numeric_cell(
    rec: &mut OutputRecord,
    r: f64,
    t: f64,
    tol: f64,
) -> Result<(Cell, Cell), CliError> {
    let q = theta_numeric(r, t, tol)?;
    if q.precision_loss {
        rec.flag(format!("precision-loss: theta_num at r={r} t={t}"));
        return Ok((Cell::Missing, Cell::Missing));
    }
    if !q.converged {
        return Err(HwError::Convergence {
            what: "theta_numeric",
            iterations: q.n_halfperiods,
        }
        .into());
    }
    Ok((q.value.into(), q.abs_err_est.into()))
}

pub fn theta(r: f64, t: f64, method: ThetaMethodArg, tol: f64) -> Result<OutputRecord, CliError> {
    let mut rec = OutputRecord::new(
        "theta",
        &[
            "method",
            "r",
            "t",
            "rho",
            "value",
            "error_bound",
            "valid",
            "abs_err_est",
        ],
    );
    rec.input_f64("r", r);
    rec.input_f64("t", t);
    rec.input("method", format!("{method:?}").to_lowercase());
    rec.input_f64("tol", tol);
    let wanted = |m| method == m || method == ThetaMethodArg::All;
    let rho = r * t;
    for (m, sub) in [(ThetaMethodArg::Asym, false), (ThetaMethodArg::Asym2, true)] {
        if wanted(m) {
            let th = theta_hat(r, t, sub)?;
            let name = if sub { "asym2" } else { "asym" };
            rec.push(vec![
                name.into(),
                r.into(),
                t.into(),
                rho.into(),
                th.value.into(),
                th.error_bound.into(),
                Cell::Missing,
                Cell::Missing,
            ]);
        }
    }
    if wanted(ThetaMethodArg::Gerhold) {
        let g = theta_gerhold(r, t)?;
        if !g.valid {
            rec.flag(format!(
                "domain-invalid: gerhold at r={r} t={t} (t_max={})",
                g.t_max
            ));
        }
        rec.push(vec![
            "gerhold".into(),
            r.into(),
            t.into(),
            rho.into(),
            g.value.into(),
            Cell::Missing,
            g.valid.into(),
            Cell::Missing,
        ]);
    }
    if wanted(ThetaMethodArg::Numeric) {
        let (value, err) = numeric_cell(&mut rec, r, t, tol)?;
        rec.push(vec![
            "numeric".into(),
            r.into(),
            t.into(),
            rho.into(),
            value,
            Cell::Missing,
            Cell::Missing,
            err,
        ]);
    }
    Ok(rec)
}

pub fn table1(r: f64, ts: &[f64], tol: f64) -> Result<OutputRecord, CliError> {
    let mut rec = OutputRecord::new(
        "table1",
        &[
            "t",
            "rho",
            "branch",
            "root",
            "F",
            "theta_hat",
            "u0",
            "theta_G",
            "theta_num",
        ],
    );
    rec.input_f64("r", r);
    rec.input("t", Grid(ts.to_vec()).describe());
    rec.input_f64("tol", tol);
    for &t in ts {
        let row = table_row(r, t, tol)?;
        if !row.gerhold.valid {
            rec.flag(format!(
                "domain-invalid: theta_G at t={t} (t_max={})",
                row.gerhold.t_max
            ));
        }
        let num = if row.numeric.precision_loss {
            rec.flag(format!("precision-loss: theta_num at t={t}"));
            Cell::Missing
        } else if !row.numeric.converged {
            return Err(HwError::Convergence {
                what: "theta_numeric",
                iterations: row.numeric.n_halfperiods,
            }
            .into());
        } else {
            row.numeric.value.into()
        };
        rec.push(vec![
            t.into(),
            row.rho.into(),
            branch_name(row.branch).into(),
            row.root.into(),
            row.f.into(),
            row.theta_hat.into(),
            row.gerhold.u0.into(),
            row.gerhold.value.into(),
            num,
        ]);
    }
    Ok(rec)
}

pub fn density(
    a_grid: &Grid,
    mu: f64,
    t: f64,
    method: DensityMethodArg,
    tol: f64,
) -> Result<OutputRecord, CliError> {
    let mut cols = vec!["a", "J", "g", "log_density", "density", "rho_star"];
    if method == DensityMethodArg::Quadrature {
        cols.extend(["oracle", "rel_gap"]);
    }
    let mut rec = OutputRecord::new("density", &cols);
    rec.input("a", a_grid.describe());
    rec.input_f64("mu", mu);
    rec.input_f64("t", t);
    rec.input("method", format!("{method:?}").to_lowercase());
    rec.input_f64("tol", tol);
    for &a in &a_grid.0 {
        let p = density_asym(a, mu, t)?;
        let rho_star = rate_j(a)?.rho_star;
        let mut row: Vec<Cell> = vec![
            a.into(),
            p.j_val.into(),
            p.g_val.into(),
            p.log_density.into(),
            p.density().into(),
            rho_star.into(),
        ];
        if method == DensityMethodArg::Quadrature {
            let oracle = density_numeric(a, mu, t, ThetaMethod::AsymSubleading, tol)?;
            row.push(oracle.into());
            row.push((p.density() / oracle - 1.0).into());
        }
        rec.push(row);
    }
    Ok(rec)
}

pub fn errorsweep(r_grid: &Grid, t_grid: &Grid, tol: f64) -> Result<OutputRecord, CliError> {
    let mut rec = OutputRecord::new(
        "errorsweep",
        &[
            "r",
            "t",
            "rho",
            "theta_hat",
            "theta_num",
            "observed",
            "bound",
            "pass",
        ],
    );
    rec.input_f64("tol", tol);
    for &t in &t_grid.0 {
        if t < ORACLE_T_FLOOR {
            return Err(HwError::Domain {
                name: "t",
                value: t,
                domain: "[0.2, inf) for the quadrature oracle",
            }
            .into());
        }
    }
    for &r in &r_grid.0 {
        for &t in &t_grid.0 {
            let hat = theta_hat(r, t, false)?.value;
            let (num, _) = numeric_cell(&mut rec, r, t, tol)?;
            let Cell::Num(num) = num else {
                rec.push(vec![
                    r.into(),
                    t.into(),
                    (r * t).into(),
                    hat.into(),
                    Cell::Missing,
                    Cell::Missing,
                    (t / 70.0).into(),
                    Cell::Missing,
                ]);
                continue;
            };
            let observed = num / hat - 1.0;
            let bound = t / 70.0;
            let pass = observed.abs() <= bound + 10.0 * tol;
            rec.push(vec![
                r.into(),
                t.into(),
                (r * t).into(),
                hat.into(),
                num.into(),
                observed.into(),
                bound.into(),
                pass.into(),
            ]);
        }
    }
    Ok(rec)
}

pub fn plotdata(
    figure: Figure,
    grid: Option<&Grid>,
    r_grid: &Grid,
    tol: f64,
) -> Result<OutputRecord, CliError> {
    let default = |spec: &str| spec.parse::<Grid>().expect("built-in grid");
    match figure {
        Figure::F | Figure::G | Figure::G2tilde => {
            let rho = grid.cloned().unwrap_or_else(|| default("1e-3:1e3:241:log"));
            let (name, cols): (&str, &[&str]) = match figure {
                Figure::F => ("F", &["rho", "F", "F_small_rho", "F_large_rho"]),
                Figure::G => ("G", &["rho", "G", "G_small_rho", "G_large_rho"]),
                _ => ("g2tilde", &["rho", "g2tilde"]),
            };
            let mut rec = OutputRecord::new("plotdata", cols);
            rec.input("figure", name);
            rec.input("rho", rho.describe());
            for &x in &rho.0 {
                let row: Vec<Cell> = match figure {
                    Figure::F => vec![
                        x.into(),
                        hw_core::f(x)?.into(),
                        (x < 1.0).then(|| hw_core::f_asymptotic_small_rho(x)).into(),
                        hw_core::f_asymptotic_large_rho(x).into(),
                    ],
                    Figure::G => vec![
                        x.into(),
                        hw_core::g(x)?.into(),
                        (x < 1.0).then(|| hw_core::g_asymptotic_small_rho(x)).into(),
                        hw_core::g_asymptotic_large_rho(x).into(),
                    ],
                    _ => vec![x.into(), hw_core::g2_tilde(x)?.into()],
                };
                rec.push(row);
            }
            Ok(rec)
        }
        Figure::ThetaVsT => {
            let ts = grid.cloned().unwrap_or_else(|| default("0.2:3:29:lin"));
            let mut rec = OutputRecord::new(
                "plotdata",
                &[
                    "r",
                    "t",
                    "theta_hat",
                    "theta_hat2",
                    "theta_num",
                    "ratio_minus_1",
                    "band_lo",
                    "band_hi",
                ],
            );
            rec.input("figure", "theta_vs_t");
            rec.input("r", r_grid.describe());
            rec.input("t", ts.describe());
            for &r in &r_grid.0 {
                for &t in &ts.0 {
                    let hat = theta_hat(r, t, false)?.value;
                    let hat2 = theta_hat(r, t, true)?.value;
                    let (num, _) = numeric_cell(&mut rec, r, t, tol)?;
                    let ratio = match num {
                        Cell::Num(v) => Cell::Num(v / hat - 1.0),
                        _ => Cell::Missing,
                    };
                    rec.push(vec![
                        r.into(),
                        t.into(),
                        hat.into(),
                        hat2.into(),
                        num,
                        ratio,
                        (-t / 70.0).into(),
                        (t / 70.0).into(),
                    ]);
                }
            }
            Ok(rec)
        }
    }
}
