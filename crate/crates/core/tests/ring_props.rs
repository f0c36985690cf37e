use std::f64::consts::PI;

use floquet_forge::algebra::{Additive, Module, Ring};
use floquet_forge::elliptic::EllipticParams;
use floquet_forge::param::{pc, pv, Bindings, ParamPoly, Var};
use floquet_forge::rings::{
    EvalContext, FourierElem, FunctionRing, JacobiElem, JacobiMode, Parity, WeierstrassElem,
};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = ParamPoly> {
    (-5i64..=5, 1i64..=3, 0u32..=1).prop_map(|(p, q, hpow)| pc(p, q).mul(&pv(Var::H).pow(hpow)))
}

fn fourier() -> impl Strategy<Value = FourierElem> {
    prop::collection::vec((0u32..5, any::<bool>(), coeff()), 0..5).prop_map(|terms| {
        terms.into_iter().fold(FourierElem::zero(), |acc, (n, s, c)| {
            let p = if s && n > 0 { Parity::Sin } else { Parity::Cos };
            acc.add(&FourierElem::mode(n, p, c))
        })
    })
}

fn weierstrass() -> impl Strategy<Value = WeierstrassElem> {
    prop::collection::vec((0usize..4, coeff()), 1..4).prop_map(|terms| {
        terms.into_iter().fold(WeierstrassElem::zero(), |acc, (k, c)| {
            acc.add(&WeierstrassElem::wp_tilde_deriv(k, c))
        })
    })
}

fn jacobi() -> impl Strategy<Value = JacobiElem> {
    prop::collection::vec((0i32..3, 0i32..3, 0u32..2, coeff()), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(JacobiElem::zero_in(JacobiMode::Formal), |acc, (a, b, d, c)| {
                acc.try_add(&JacobiElem::monomial(JacobiMode::Formal, c, a, b, d))
                    .unwrap()
            })
    })
}

fn bindings() -> Bindings {
    let mut b = Bindings::new();
    b.insert(Var::H, C::new(0.7, 0.0));
    b
}

fn lattice() -> EllipticParams {
    EllipticParams::new(C::new(PI / 2.0, 0.0), C::new(0.2, 1.1)).unwrap()
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// `eval(a b) = eval(a) eval(b)`, additivity, and `eval(a')` against a central difference.
fn homomorphism<R: FunctionRing>(a: &R, b: &R, x: C, ctx: &EvalContext) -> Result<(), String> {
    let ea = a.eval(x, ctx).map_err(|e| e.to_string())?;
    let eb = b.eval(x, ctx).map_err(|e| e.to_string())?;
    let prod = a.try_mul(b).map_err(|e| e.to_string())?;
    let ep = prod.eval(x, ctx).map_err(|e| e.to_string())?;
    if !close(ep, ea * eb, 1e-10) {
        return Err(format!("product {ep} vs {}", ea * eb));
    }
    let es = a.add(b).eval(x, ctx).map_err(|e| e.to_string())?;
    if !close(es, ea + eb, 1e-10) {
        return Err(format!("sum {es} vs {}", ea + eb));
    }
    let h = 1e-5;
    let fd = (a.eval(x + h, ctx).unwrap() - a.eval(x - h, ctx).unwrap()) / (2.0 * h);
    let d = a.diff().eval(x, ctx).map_err(|e| e.to_string())?;
    if !close(d, fd, 1e-6) {
        return Err(format!("derivative {d} vs finite difference {fd}"));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_diff_inverts_antiderivative(a in fourier()) {
        let big_a = a.antiderivative().unwrap();
        prop_assert_eq!(big_a.diff(), a);
    }

    #[test]
    fn fourier_diff_keeps_secular_free(a in fourier()) {
        prop_assert!(a.diff().secular().is_zero());
        prop_assert!(a.coeff(0, Parity::Sin).is_zero());
    }

    #[test]
    fn fourier_period_integral_is_secular(a in fourier()) {
        let big_a = a.antiderivative().unwrap();
        let ctx = EvalContext::new(bindings());
        let span = big_a.eval(C::new(2.0 * PI, 0.0), &ctx).unwrap() - big_a.eval(C::new(0.0, 0.0), &ctx).unwrap();
        let sec = big_a.secular().eval(&bindings()).unwrap() * (2.0 * PI);
        prop_assert!(close(span, sec, 1e-12));
        prop_assert!(close(sec, a.constant_part().eval(&bindings()).unwrap() * (2.0 * PI), 1e-12));
    }

    #[test]
    fn fourier_eval_is_a_homomorphism(a in fourier(), b in fourier(), xr in -3.0f64..3.0, xi in -0.5f64..0.5) {
        let ctx = EvalContext::new(bindings());
        prop_assert!(homomorphism(&a, &b, C::new(xr, xi), &ctx).is_ok());
    }

    #[test]
    fn weierstrass_diff_inverts_antiderivative(a in weierstrass()) {
        let big_a = a.antiderivative().unwrap();
        prop_assert_eq!(big_a.diff(), a);
    }

    #[test]
    fn weierstrass_eval_is_a_homomorphism(a in weierstrass(), b in weierstrass(), xr in 0.25f64..1.3, xi in -0.4f64..0.4) {
        let ctx = EvalContext::new(bindings()).with_elliptic(lattice());
        let r = homomorphism(&a, &b, C::new(xr, xi), &ctx);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn weierstrass_square_reduction(w1 in 0.8f64..2.0, re2 in -0.5f64..0.5, im2 in 0.7f64..2.0, t in 0.2f64..0.8) {
        let ell = EllipticParams::new(C::new(w1, 0.0), C::new(re2, im2)).unwrap();
        let x = C::new(t * w1, 0.1 * im2);
        let ctx = EvalContext::new(Bindings::new()).with_elliptic(ell);
        let wp = WeierstrassElem::wp_tilde(ParamPoly::one());
        let sq = wp.try_mul(&wp).unwrap().eval(x, &ctx).unwrap();
        let v = wp.eval(x, &ctx).unwrap();
        prop_assert!(close(sq, v * v, 1e-10));
    }

    #[test]
    fn jacobi_eval_is_a_homomorphism(a in jacobi(), b in jacobi(), xr in 0.1f64..1.5, xi in -0.3f64..0.3) {
        let ell = EllipticParams::from_modulus(C::new(0.6, 0.0)).unwrap();
        let ctx = EvalContext::new(bindings()).with_elliptic(ell);
        let r = homomorphism(&a, &b, C::new(xr, xi), &ctx);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn reflection_is_x_parity(a in fourier(), xr in -3.0f64..3.0) {
        let ctx = EvalContext::new(bindings());
        let x = C::new(xr, 0.0);
        prop_assert!(close(a.reflect().eval(-x, &ctx).unwrap(), a.eval(x, &ctx).unwrap(), 1e-12));
    }
}

#[test]
fn cos2_squared() {
    let c2 = FourierElem::cos(2, ParamPoly::one());
    let want = FourierElem::constant(pc(1, 2)).add(&FourierElem::cos(4, pc(1, 2)));
    assert_eq!(c2.try_mul(&c2).unwrap(), want);
}

#[test]
fn weierstrass_square_in_derivative_basis() {
    let wp = WeierstrassElem::wp_tilde(ParamPoly::one());
    let z1 = pv(Var::Zeta1);
    let want = WeierstrassElem::wp_tilde_deriv(2, pc(1, 6))
        .add(&WeierstrassElem::wp_tilde(z1.scale(&ParamPoly::int(2))))
        .add(&WeierstrassElem::constant(
            pv(Var::G2).mul(&pc(1, 12)).sub(&z1.pow(2)),
        ));
    assert_eq!(wp.try_mul(&wp).unwrap(), want);
}

#[test]
fn weierstrass_products_need_the_subring() {
    let z = WeierstrassElem::zeta_tilde(ParamPoly::one());
    let wp = WeierstrassElem::wp_tilde(ParamPoly::one());
    assert!(z.try_mul(&wp).is_err());
    assert!(WeierstrassElem::coordinate().unwrap().try_mul(&wp).is_err());
}

#[test]
fn dn_squared_is_reduced() {
    let dn = JacobiElem::dn(JacobiMode::Formal);
    let sq = dn.try_mul(&dn).unwrap();
    let k2 = pv(Var::K).pow(2);
    let want = JacobiElem::constant_in(JacobiMode::Formal, ParamPoly::one())
        .try_add(&JacobiElem::monomial(JacobiMode::Formal, k2.neg(), 2, 0, 0))
        .unwrap();
    assert_eq!(sq, want);
}
