//! The `q -> 0` limit from the Lame to the Mathieu problem.
//!
//! With `chi = pi x / (2 omega1)`, `s = pi / (2 omega1)` and the shifted argument `x + omega2`,
//! `alpha wp~` degenerates to `2h s^2 cos 2chi` when `alpha q^{1/2} -> -h/4`.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{Additive, Module, Ring};
use crate::elliptic::{tau_from_q, EllipticParams};
use crate::error::Result;
use crate::param::{pc, pv, Bindings, ParamPoly, Var};
use crate::riccati::{lame_potential, large_energy_densities, mathieu_potential};
use crate::rings::{EvalContext, FourierElem, FunctionRing};

use super::{dispersion_from_periods, refloquet_wavefunction, ExponentSeries};

type C = Complex64;

/// Printed `q^{j/2}` coefficients (j = 1, 2, 3) of `wp~(x + omega2) / s^2` as functions of `chi`.
pub fn printed_wp_shift() -> Vec<FourierElem> {
    let n = |v: i64| ParamPoly::int(v);
    vec![
        FourierElem::cos(2, n(-8)),
        FourierElem::cos(4, n(-16)),
        FourierElem::cos(2, n(-8)).add(&FourierElem::cos(6, n(-24))),
    ]
}

/// Printed `q^{j/2}` coefficients of `zeta~(x + omega2) / s`, up to the constant `-i`.
pub fn printed_zeta_shift() -> Vec<FourierElem> {
    let n = |v: i64| ParamPoly::int(v);
    vec![
        FourierElem::sin(2, n(4)),
        FourierElem::sin(4, n(4)),
        FourierElem::sin(2, n(4)).add(&FourierElem::sin(6, n(4))),
    ]
}

/// `q^2` coefficients from the Lambert series of `theta4'/theta4`, used to model the remainder.
pub fn q2_wp_shift() -> FourierElem {
    FourierElem::cos(8, ParamPoly::int(-32))
}

pub fn q2_zeta_shift() -> FourierElem {
    FourierElem::sin(8, ParamPoly::int(4))
}

/// `alpha * (q^{1/2} coefficient)` under `alpha q^{1/2} = -h/4`: the limiting potential in `chi`.
pub fn limit_potential() -> FourierElem {
    printed_wp_shift()[0].scale(&pv(Var::H).mul(&pc(-1, 4)))
}

/// Lattice with the given `omega1` and nome `q`.
pub fn lattice_for(omega1: f64, q: f64) -> Result<EllipticParams> {
    let tau = tau_from_q(C::new(q, 0.0))?;
    EllipticParams::new(C::new(omega1, 0.0), tau * omega1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftRemainder {
    pub q: f64,
    /// `max |exact - printed|` over the sample points.
    pub wp_remainder: f64,
    pub zeta_remainder: f64,
    /// `max |exact - printed - q^2 c_2|`.
    pub wp_after_q2: f64,
    pub zeta_after_q2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientLimit {
    pub q: f64,
    /// Relative error per compared coefficient.
    pub rel_err: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub shift: Vec<ShiftRemainder>,
    pub eigenvalue: Vec<CoefficientLimit>,
    pub wavefunction: Vec<CoefficientLimit>,
}

fn eval_fourier(f: &FourierElem, chi: f64) -> Result<C> {
    f.eval(C::new(chi, 0.0), &EvalContext::default())
}

fn sum_printed(coeffs: &[FourierElem], chi: f64, q: f64) -> Result<C> {
    let mut acc = C::new(0.0, 0.0);
    for (j, c) in coeffs.iter().enumerate() {
        acc += eval_fourier(c, chi)? * q.powf((j + 1) as f64 / 2.0);
    }
    Ok(acc)
}

/// Compares `wp~(x + omega2)` and `zeta~(x + omega2)` with their printed small-`q` expansions.
pub fn shift_remainders(omega1: f64, q: f64, chis: &[f64]) -> Result<ShiftRemainder> {
    let ell = lattice_for(omega1, q)?;
    let s = ell.scale();
    let mut out = ShiftRemainder {
        q,
        wp_remainder: 0.0,
        zeta_remainder: 0.0,
        wp_after_q2: 0.0,
        zeta_after_q2: 0.0,
    };
    for &chi in chis {
        let x = C::new(chi, 0.0) / s + ell.omega2;
        let wp = ell.wp_tilde(x)?;
        let zeta = ell.zeta_tilde(x)? + C::new(0.0, 1.0) * s;
        let rw = wp - s * s * sum_printed(&printed_wp_shift(), chi, q)?;
        let rz = zeta - s * sum_printed(&printed_zeta_shift(), chi, q)?;
        out.wp_remainder = out.wp_remainder.max(rw.norm());
        out.zeta_remainder = out.zeta_remainder.max(rz.norm());
        out.wp_after_q2 = out
            .wp_after_q2
            .max((rw - s * s * q * q * eval_fourier(&q2_wp_shift(), chi)?).norm());
        out.zeta_after_q2 = out
            .zeta_after_q2
            .max((rz - s * q * q * eval_fourier(&q2_zeta_shift(), chi)?).norm());
    }
    Ok(out)
}

/// Coefficients of `nu^-2j`, j = 1..=orders, of the derived Lame and Mathieu dispersions.
fn dispersion_coeffs(orders: usize) -> Result<(Vec<ParamPoly>, Vec<ParamPoly>)> {
    let n = 2 * orders + 1;
    let vl = large_energy_densities(&lame_potential().potential, n)?;
    let vm = large_energy_densities(&mathieu_potential().potential, n)?;
    let dl = dispersion_from_periods(&vl, 1)?;
    let dm = dispersion_from_periods(&vm, 1)?;
    let pick = |s: &crate::series::TruncatedSeries<ParamPoly>| -> Result<Vec<ParamPoly>> {
        (1..=orders).map(|j| s.coeff(2 * j as i64)).collect()
    };
    Ok((pick(&dl.lambda.series)?, pick(&dm.lambda.series)?))
}

fn lame_bindings(ell: &EllipticParams, h: f64, q: f64) -> Bindings {
    let mut b = Bindings::new();
    b.insert(Var::Alpha, C::new(-h / (4.0 * q.sqrt()), 0.0));
    b.insert(Var::G2, ell.g2);
    b.insert(Var::G3, ell.g3);
    b.insert(Var::Zeta1, ell.zeta1);
    b
}

/// Relative error of `c_{2j}^Lame / s^{2j+2}` against the Mathieu `c_{2j}` at each `q`.
pub fn eigenvalue_limit(
    omega1: f64,
    h: f64,
    qs: &[f64],
    orders: usize,
) -> Result<Vec<CoefficientLimit>> {
    let (cl, cm) = dispersion_coeffs(orders)?;
    let mut bm = Bindings::new();
    bm.insert(Var::H, C::new(h, 0.0));
    let mut out = Vec::new();
    for &q in qs {
        let ell = lattice_for(omega1, q)?;
        let s = ell.scale();
        let b = lame_bindings(&ell, h, q);
        let mut rel = Vec::new();
        for (j, (l, m)) in cl.iter().zip(&cm).enumerate() {
            let lame = l.eval(&b)? / s.powi(2 * (j as i32 + 1) + 2);
            let mat = m.eval(&bm)?;
            rel.push((lame - mat).norm() / mat.norm());
        }
        out.push(CoefficientLimit { q, rel_err: rel });
    }
    Ok(out)
}

/// Relative error of the Lame wave-function coefficients of `nu~^-j` (j = 1..=orders) at `x + omega2`,
/// measured against `x_ref + omega2` so that normalization constants drop out.
pub fn wavefunction_limit(
    omega1: f64,
    h: f64,
    qs: &[f64],
    orders: usize,
    chi: f64,
    chi_ref: f64,
) -> Result<Vec<CoefficientLimit>> {
    let n = orders + 2;
    let vl = large_energy_densities(&lame_potential().potential, n)?;
    let vm = large_energy_densities(&mathieu_potential().potential, n)?;
    let psi_l = refloquet_wavefunction(
        &ExponentSeries::from_densities(&vl, 1)?,
        &dispersion_from_periods(&vl, 1)?,
    )?;
    let psi_m = refloquet_wavefunction(
        &ExponentSeries::from_densities(&vm, 1)?,
        &dispersion_from_periods(&vm, 1)?,
    )?;
    let mut bm = Bindings::new();
    bm.insert(Var::H, C::new(h, 0.0));
    let ctx_m = EvalContext::new(bm);
    let mut out = Vec::new();
    for &q in qs {
        let ell = lattice_for(omega1, q)?;
        let s = ell.scale();
        let ctx = EvalContext::new(lame_bindings(&ell, h, q)).with_elliptic(ell.clone());
        let at = |c: f64| C::new(c, 0.0) / s + ell.omega2;
        let mut rel = Vec::new();
        for j in 1..=orders as i64 {
            let cl = psi_l.coeff(j)?;
            let cm = psi_m.coeff(j)?;
            let lame = (cl.eval(at(chi), &ctx)? - cl.eval(at(chi_ref), &ctx)?) / s.powi(j as i32);
            let mat = cm.eval(C::new(chi, 0.0), &ctx_m)? - cm.eval(C::new(chi_ref, 0.0), &ctx_m)?;
            rel.push((lame - mat).norm() / mat.norm());
        }
        out.push(CoefficientLimit { q, rel_err: rel });
    }
    Ok(out)
}

/// Full limit suite on a list of `q` samples.
pub fn lame_to_mathieu_limit(
    omega1: f64,
    h: f64,
    qs: &[f64],
    check_order: usize,
) -> Result<LimitReport> {
    let chis = [0.3, 0.7, 1.1, 2.0];
    let shift = qs
        .iter()
        .map(|&q| shift_remainders(omega1, q, &chis))
        .collect::<Result<_>>()?;
    Ok(LimitReport {
        shift,
        eigenvalue: eigenvalue_limit(omega1, h, qs, check_order)?,
        wavefunction: wavefunction_limit(omega1, h, qs, check_order, 0.4, 0.0)?,
    })
}

/// Fitted exponent `p` in `r ~ q^p` between consecutive samples.
pub fn fitted_slopes(qs: &[f64], r: &[f64]) -> Vec<f64> {
    qs.windows(2)
        .zip(r.windows(2))
        .map(|(q, r)| (r[0] / r[1]).ln() / (q[0] / q[1]).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_zero_potential_is_mathieu() {
        assert_eq!(limit_potential(), mathieu_potential().potential);
    }

    #[test]
    fn printed_expansions_are_consistent() {
        // wp~ = -d/dx zeta~, i.e. wp/s^2 = -d/dchi (zeta/s)
        for (w, z) in printed_wp_shift().iter().zip(printed_zeta_shift()) {
            assert_eq!(*w, z.diff().neg());
        }
        assert_eq!(q2_wp_shift(), q2_zeta_shift().diff().neg());
    }

    #[test]
    fn shift_remainder_scales_like_q_squared() {
        let qs = [1e-3, 1e-4];
        let r: Vec<_> = qs
            .iter()
            .map(|&q| shift_remainders(1.0, q, &[0.3, 1.2]).unwrap())
            .collect();
        let slope = fitted_slopes(&qs, &[r[0].wp_remainder, r[1].wp_remainder])[0];
        assert!((slope - 2.0).abs() < 0.3, "slope {slope}");
        assert!(r[1].wp_after_q2 < r[1].wp_remainder * 0.1, "{r:?}");
    }

    #[test]
    fn eigenvalue_coefficients_converge() {
        let r = eigenvalue_limit(std::f64::consts::FRAC_PI_2, 1.0, &[1e-3, 1e-5], 2).unwrap();
        for j in 0..2 {
            assert!(r[1].rel_err[j] < r[0].rel_err[j], "{r:?}");
        }
        assert!(r[1].rel_err[0] < 1e-3);
    }
}
