//! Oracle sweeps comparing truncated series with the numeric Floquet data.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::limit::lattice_for;
use crate::dispersion::small::{printed_small_dispersion, PrintedWaveFunction};
use crate::dispersion::{
    dispersion_from_periods, eval_scalar_series, eval_series, refloquet_wavefunction,
    ExponentSeries,
};
use crate::elliptic::EllipticParams;
use crate::error::Result;
use crate::param::{Bindings, ParamPoly, Var};
use crate::riccati::{lame_potential, large_energy_densities, mathieu_potential, ProblemId};
use crate::rings::{EvalContext, FunctionRing};
use crate::series::TruncatedSeries;

use super::{
    oracle_report, symmetric_shooting, wavefunction_error, ErrorReport, Exponent, Parity,
    PeriodPath, PotentialFn,
};

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `lambda(nu)` with `N` corrections `nu^-2 .. nu^-2N` kept, plus the first dropped coefficient.
#[derive(Clone, Debug)]
pub struct TruncatedLambda {
    pub kept: TruncatedSeries<ParamPoly>,
    pub omitted: ParamPoly,
    pub orders: usize,
}

impl TruncatedLambda {
    fn from_series(full: &TruncatedSeries<ParamPoly>, orders: usize) -> Result<Self> {
        let last = 2 * orders as i64;
        Ok(Self {
            kept: full.truncate(last + 1)?,
            omitted: full.coeff(last + 2)?,
            orders,
        })
    }

    pub fn eval(&self, nu: f64, b: &Bindings) -> Result<C> {
        eval_scalar_series(&self.kept, c(1.0 / nu), b)
    }

    /// Shift in `nu` produced by the first dropped term: `|c| nu^-(2N+2) / (2 nu)`.
    pub fn omitted_nu_shift(&self, nu: f64, b: &Bindings) -> Result<f64> {
        let p = 2 * self.orders as i32 + 3;
        Ok(self.omitted.eval(b)?.norm() / (2.0 * nu.powi(p)))
    }
}

fn lambda_series<R: FunctionRing>(u: &R, orders: usize) -> Result<TruncatedLambda> {
    let v = large_energy_densities(u, 2 * orders + 4)?;
    let d = dispersion_from_periods(&v, 1)?;
    TruncatedLambda::from_series(&d.lambda.series, orders)
}

pub fn mathieu_lambda(orders: usize) -> Result<TruncatedLambda> {
    lambda_series(&mathieu_potential().potential, orders)
}

pub fn lame_lambda(orders: usize) -> Result<TruncatedLambda> {
    lambda_series(&lame_potential().potential, orders)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceSweep {
    pub problem: String,
    pub orders: usize,
    pub reports: Vec<ErrorReport>,
    /// Least-squares slope of `ln |err|` against `ln nu`.
    pub fitted_slope: f64,
    /// `-(2N + 3)`, the slope of the first omitted term.
    pub predicted_slope: f64,
    /// `max |err| / omitted_term_bound`.
    pub max_constant: f64,
}

impl ConvergenceSweep {
    fn new(problem: String, orders: usize, reports: Vec<ErrorReport>) -> Self {
        let xs: Vec<f64> = reports.iter().map(|r| r.nu_series.ln()).collect();
        let ys: Vec<f64> = reports.iter().map(|r| r.abs_err.ln()).collect();
        let max_constant = reports
            .iter()
            .map(|r| r.abs_err / r.omitted_term_bound)
            .fold(0.0, f64::max);
        Self {
            problem,
            orders,
            fitted_slope: least_squares_slope(&xs, &ys),
            predicted_slope: -(2.0 * orders as f64 + 3.0),
            reports,
            max_constant,
        }
    }

    /// Relative deviation of the fitted slope from the prediction.
    pub fn slope_deviation(&self) -> f64 {
        ((self.fitted_slope - self.predicted_slope) / self.predicted_slope).abs()
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn sweep(
    name: String,
    lam: &TruncatedLambda,
    b: &Bindings,
    u: &PotentialFn,
    path: &PeriodPath,
    nus: &[f64],
    tol: f64,
) -> Result<ConvergenceSweep> {
    let lambda_of_nu = |nu: f64| lam.eval(nu, b);
    let reports = nus
        .par_iter()
        .map(|&nu| {
            oracle_report(
                u,
                &lambda_of_nu,
                nu,
                lam.omitted_nu_shift(nu, b)?,
                path,
                tol,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceSweep::new(name, lam.orders, reports))
}

/// Mathieu `u = 2h cos 2x` on the real period `pi`.
pub fn mathieu_convergence(
    h: f64,
    nus: &[f64],
    orders: usize,
    tol: f64,
) -> Result<ConvergenceSweep> {
    let lam = mathieu_lambda(orders)?;
    let mut b = Bindings::new();
    b.insert(Var::H, c(h));
    let u = move |x: C| Ok(c(2.0 * h) * (x * 2.0).cos());
    sweep(
        format!("mathieu h={h}"),
        &lam,
        &b,
        &u,
        &PeriodPath::real(PI),
        nus,
        tol,
    )
}

/// Bindings for the Lame dispersion coefficients on a given lattice.
pub fn lame_bindings(ell: &EllipticParams, alpha: f64) -> Bindings {
    let mut b = Bindings::new();
    b.insert(Var::Alpha, c(alpha));
    b.insert(Var::G2, ell.g2);
    b.insert(Var::G3, ell.g3);
    b.insert(Var::Zeta1, ell.zeta1);
    b
}

/// Lame `u = alpha wp~(x)` with `omega1 = pi/2` and nome `q`, integrated along `Im x = Im omega2`.
pub fn lame_convergence(
    alpha: f64,
    q: f64,
    nus: &[f64],
    orders: usize,
    tol: f64,
) -> Result<ConvergenceSweep> {
    let lam = lame_lambda(orders)?;
    let ell = lattice_for(FRAC_PI_2, q)?;
    let b = lame_bindings(&ell, alpha);
    let path = PeriodPath::shifted(ell.omega2, PI);
    let u = |x: C| Ok(ell.wp_tilde(x)? * alpha);
    sweep(
        format!("lame alpha={alpha} q={q}"),
        &lam,
        &b,
        &u,
        &path,
        nus,
        tol,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallEnergyPoint {
    pub h: f64,
    pub lambda_series: f64,
    pub lambda_oracle: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallEnergySweep {
    pub nu: f64,
    pub points: Vec<SmallEnergyPoint>,
    /// `err(h_j) / err(h_{j+1})`.
    pub ratios: Vec<f64>,
    /// `(h_{j+1} / h_j)^{3/2}`: the first order past the printed `h^-1` term.
    pub predicted_ratios: Vec<f64>,
}

/// `lambda = 2h + delta(nu)` from the printed strong-coupling table at `x* = pi/2`.
pub fn minpi2_lambda(h: f64, nu: f64) -> Result<f64> {
    let d = printed_small_dispersion(ProblemId::MathieuMinPi2).expect("printed table");
    let mut b = Bindings::new();
    b.insert(Var::Nu, c(nu));
    Ok(2.0 * h + eval_scalar_series(&d.series, c(h.powf(-0.5)), &b)?.re)
}

/// Band-edge eigenvalue of the state at `x* = pi/2` with `nu = m + 1/2`, by symmetric shooting to `x = pi`.
pub fn minpi2_oracle(h: f64, nu: f64, tol: f64) -> Result<f64> {
    let m = (nu - 0.5).round() as i64;
    let parity = if m % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    // u + 2h = 4h cos^2 x keeps the well bottom free of cancellation
    let u = move |x: C| Ok(x.cos().powu(2) * (4.0 * h));
    let guess = minpi2_lambda(h, nu)? - 2.0 * h;
    Ok(2.0 * h + symmetric_shooting(&u, FRAC_PI_2, PI, parity, guess, tol)?)
}

pub fn small_energy_sweep(hs: &[f64], nu: f64, tol: f64) -> Result<SmallEnergySweep> {
    let points = hs
        .par_iter()
        .map(|&h| {
            let s = minpi2_lambda(h, nu)?;
            let o = minpi2_oracle(h, nu, tol)?;
            Ok(SmallEnergyPoint {
                h,
                lambda_series: s,
                lambda_oracle: o,
                abs_err: (s - o).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios = points
        .windows(2)
        .map(|w| w[0].abs_err / w[1].abs_err)
        .collect();
    let predicted_ratios = hs.windows(2).map(|w| (w[1] / w[0]).powf(1.5)).collect();
    Ok(SmallEnergySweep {
        nu,
        points,
        ratios,
        predicted_ratios,
    })
}

/// Max residual of the `nu`-form log-derivative at `x* = pi/2` on a grid, for each `h`.
///
/// The log-derivative keeps every order through `h^-3/2`; the dispersion stops at the printed
/// `h^-1` term, so the residual starts at `h^-3/2`.
pub fn small_energy_residuals(
    hs: &[f64],
    nu: f64,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let series = PrintedWaveFunction::MathieuMinPi2Nu
        .derived_series(1, 7)?
        .truncate(4)?;
    let d_series = series.map(|e| e.diff());
    let mut b = Bindings::new();
    b.insert(Var::Nu, c(nu));
    let ctx = EvalContext::new(b);
    let pts: Vec<C> = grid.iter().map(|&x| c(x)).collect();
    hs.iter()
        .map(|&h| {
            let t = c(h.powf(-0.5));
            let lambda = c(minpi2_lambda(h, nu)?);
            let e = Exponent::LogDerivative(Box::new(|x: C| {
                Ok([
                    eval_series(&series, x, t, &ctx)?,
                    eval_series(&d_series, x, t, &ctx)?,
                ])
            }));
            let u = move |x: C| Ok(c(2.0 * h) * (x * 2.0).cos());
            Ok((
                h,
                wavefunction_error(&e, &u, lambda, &pts, tol)?.max_residual,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WavefunctionSweep {
    pub orders: usize,
    /// `(nu, relative error at the far grid point)`.
    pub errors: Vec<(f64, f64)>,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
}

/// Large-energy Mathieu `psi_+` truncated after `nu^-N`, against the ODE from `x = 0` to `x_end`.
pub fn mathieu_wavefunction_sweep(
    h: f64,
    nus: &[f64],
    orders: usize,
    x_end: f64,
    tol: f64,
) -> Result<WavefunctionSweep> {
    let v = large_energy_densities(&mathieu_potential().potential, orders + 8)?;
    let disp = dispersion_from_periods(&v, 1)?;
    let psi = refloquet_wavefunction(&ExponentSeries::from_densities(&v, 1)?, &disp)?
        .truncate(orders as i64 + 1)?;
    let d1 = psi.map(|e| e.diff());
    let d2 = d1.map(|e| e.diff());
    let mut b = Bindings::new();
    b.insert(Var::H, c(h));
    let ctx = EvalContext::new(b.clone());
    let lam = &disp.lambda.series;
    let grid: Vec<C> = (0..=4).map(|j| c(x_end * j as f64 / 4.0)).collect();
    let errors = nus
        .iter()
        .map(|&nu| {
            let w = c(1.0 / nu);
            let lambda = eval_scalar_series(lam, w, &b)?;
            let e = Exponent::Exact(Box::new(|x: C| {
                Ok([
                    eval_series(&psi, x, w, &ctx)?,
                    eval_series(&d1, x, w, &ctx)?,
                    eval_series(&d2, x, w, &ctx)?,
                ])
            }));
            let u = move |x: C| Ok(c(2.0 * h) * (x * 2.0).cos());
            let r = wavefunction_error(&e, &u, lambda, &grid, tol)?;
            Ok((nu, r.points.last().expect("grid").rel_err))
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = errors.iter().map(|e| e.0.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.1.ln()).collect();
    Ok(WavefunctionSweep {
        orders,
        fitted_slope: least_squares_slope(&xs, &ys),
        predicted_slope: -(orders as f64 + 1.0),
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mathieu_oracle_at_nu_ten() {
        let s = mathieu_convergence(1.0, &[10.0], 3, 1e-13).unwrap();
        let r = &s.reports[0];
        assert!(r.abs_err < 1e-6, "{r:?}");
        assert!(r.wronskian_defect < 1e-9);
        assert!(r.abs_err < 10.0 * r.omitted_term_bound, "{r:?}");
    }

    #[test]
    fn mathieu_off_edge_matches() {
        let s = mathieu_convergence(1.0, &[7.5], 3, 1e-13).unwrap();
        assert!(
            s.reports[0].abs_err < 10.0 * s.reports[0].omitted_term_bound,
            "{s:?}"
        );
    }

    #[test]
    fn lame_oracle_at_nu_eight() {
        let s = lame_convergence(6.0, 0.05, &[8.0], 3, 1e-13).unwrap();
        let r = &s.reports[0];
        assert!(r.abs_err < 10.0 * r.omitted_term_bound, "{r:?}");
    }

    #[test]
    fn shooting_tracks_the_series() {
        let o = minpi2_oracle(100.0, 0.5, 1e-13).unwrap();
        let s = minpi2_lambda(100.0, 0.5).unwrap();
        assert!((o - s).abs() < 1e-4, "{o} {s}");
    }

    #[test]
    fn small_energy_residual_drops_by_eight() {
        let r = small_energy_residuals(&[400.0, 1600.0], 0.5, &[0.3, 0.7, 1.1], 1e-12).unwrap();
        let ratio = r[0].1 / r[1].1;
        assert!((ratio / 8.0 - 1.0).abs() < 0.25, "{r:?}");
    }

    #[test]
    fn large_energy_wavefunction_slope() {
        let w = mathieu_wavefunction_sweep(1.0, &[10.0, 20.0, 40.0], 3, 1.0, 1e-13).unwrap();
        assert!(
            (w.fitted_slope / w.predicted_slope - 1.0).abs() < 0.15,
            "{w:?}"
        );
    }
}
