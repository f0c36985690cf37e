use std::f64::consts::{FRAC_PI_2, PI};

use floquet_forge::algebra::Additive;
use floquet_forge::dispersion::limit::lattice_for;
use floquet_forge::dispersion::{dispersion_from_periods, refloquet_wavefunction, ExponentSeries};
use floquet_forge::elliptic::{eisenstein_e2, tau_from_q, theta4_product, theta_derivs, EllipticParams};
use floquet_forge::hill::monodromy;
use floquet_forge::hill::sweeps::{lame_convergence, mathieu_convergence};
use floquet_forge::instanton::{divisor_checks, log_theta4_matrix, product_vs_sum_defect};
use floquet_forge::param::{Bindings, Var};
use floquet_forge::riccati::{
    lame_jacobi_potential, lame_potential, large_energy_densities, mathieu_potential,
};
use floquet_forge::rings::{EvalContext, FunctionRing};
use floquet_forge::series::TruncatedSeries;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn branches<R: FunctionRing>(u: &R, n: usize) -> (TruncatedSeries<R>, TruncatedSeries<R>) {
    let v = large_energy_densities(u, n).unwrap();
    let psi = |sign| {
        let d = dispersion_from_periods(&v, sign).unwrap();
        refloquet_wavefunction(&ExponentSeries::from_densities(&v, sign).unwrap(), &d).unwrap()
    };
    (psi(1), psi(-1).alternate())
}

fn assert_mirror<R: FunctionRing>(plus: &TruncatedSeries<R>, minus: &TruncatedSeries<R>) {
    let top = plus.order().min(minus.order());
    assert!(top >= 4);
    for e in -1..top {
        assert_eq!(minus.coeff(e).unwrap(), plus.coeff(e).unwrap().reflect(), "order {e}");
    }
}

#[test]
fn lame_branches_are_mirror_images() {
    let (plus, minus) = branches(&lame_potential().potential, 6);
    assert_mirror(&plus, &minus);
}

#[test]
fn mathieu_branches_are_mirror_images_at_high_order() {
    let (plus, minus) = branches(&mathieu_potential().potential, 9);
    assert_mirror(&plus, &minus);
}

#[test]
fn refloquet_coefficients_are_secular_free() {
    let (m, _) = branches(&mathieu_potential().potential, 10);
    for e in 0..m.order() {
        assert!(m.coeff(e).unwrap().secular().is_zero(), "Mathieu order {e}");
    }
    let (l, _) = branches(&lame_potential().potential, 7);
    for e in 0..l.order() {
        assert!(l.coeff(e).unwrap().secular().is_zero(), "Lame order {e}");
    }
}

#[test]
fn lame_sign_choice_gives_same_dispersion() {
    let v = large_energy_densities(&lame_potential().potential, 7).unwrap();
    let plus = dispersion_from_periods(&v, 1).unwrap().lambda.series;
    let minus = dispersion_from_periods(&v, -1).unwrap().lambda.series;
    assert!(plus.same_as(&minus));
    assert_eq!(plus.coeff(-2).unwrap().to_string(), "-1");
}

#[test]
fn zeta1_matches_theta_quotient_and_e2() {
    for &q in &[1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.3] {
        let omega1 = 1.3;
        let ell = lattice_for(omega1, q).unwrap();
        let d = theta_derivs(1, C::new(0.0, 0.0), ell.tau, 3);
        let s = PI / (2.0 * omega1);
        let from_theta = -s * s * d[3] / (3.0 * d[1]);
        // E2 = 1 - 24 sum sigma_1(n) q^n, summed independently
        let mut e2 = 1.0;
        for n in 1..400u32 {
            let sigma: u32 = (1..=n).filter(|d| n % d == 0).sum();
            e2 -= 24.0 * sigma as f64 * q.powi(n as i32);
        }
        let legendre = PI * PI / (12.0 * omega1 * omega1) * e2;
        assert!((ell.zeta1 - from_theta).norm() < 1e-11, "q = {q}");
        assert!((ell.zeta1.re - legendre).abs() < 1e-11, "q = {q}");
        assert!((eisenstein_e2(C::new(q, 0.0)).unwrap().re - e2).abs() < 1e-12);
    }
}

#[test]
fn lattice_invariants() {
    for &(w1, w2) in &[(1.0, C::new(0.1, 0.9)), (FRAC_PI_2, C::new(0.0, 2.0)), (0.7, C::new(-0.3, 0.5))] {
        let ell = EllipticParams::new(C::new(w1, 0.0), w2).unwrap();
        assert!((ell.e1 + ell.e2 + ell.e3).norm() < 1e-12);
        let g2 = (ell.e1 * ell.e1 + ell.e2 * ell.e2 + ell.e3 * ell.e3) * 2.0;
        assert!((ell.g2 - g2).norm() < 1e-12 * g2.norm().max(1.0));
        assert!((ell.k * ell.k + ell.kp * ell.kp - 1.0).norm() < 1e-12);
    }
    assert!(EllipticParams::new(C::new(1.0, 0.0), C::new(2.0, 0.0)).is_err());
}

/// `x = (z + iK') / sqrt(e1 - e2)` carries `alpha wp~(x) - alpha (e2 + zeta1)` to
/// `(e1 - e2) alpha k^2 sn^2 z`.
#[test]
fn weierstrass_to_jacobi_map() {
    let alpha = 6.0;
    for &(w1, w2) in &[(1.0, C::new(0.1, 0.9)), (FRAC_PI_2, C::new(0.0, 1.7))] {
        let ell = EllipticParams::new(C::new(w1, 0.0), w2).unwrap();
        let mut b = Bindings::new();
        b.insert(Var::Alpha, C::new(alpha, 0.0));
        let ctx = EvalContext::new(b).with_elliptic(ell.clone());
        let s = (ell.e1 - ell.e2).sqrt();
        assert!((s * ell.omega2 - C::new(0.0, 1.0) * ell.big_kp).norm() < 1e-12);
        for &z in &[C::new(0.3, 0.05), C::new(0.8, -0.1), C::new(1.4, 0.2)] {
            let x = (z + C::new(0.0, 1.0) * ell.big_kp) / s;
            let uw = lame_potential().potential.eval(x, &ctx).unwrap();
            let uj = lame_jacobi_potential().potential.eval(z, &ctx).unwrap();
            let mapped = (uw - (ell.e2 + ell.zeta1) * alpha) / (s * s);
            assert!((mapped - uj).norm() < 1e-10 * uj.norm().max(1.0), "z = {z}");
        }
    }
}

#[test]
fn oracle_constant_is_moderate() {
    let nus = [6.0, 8.0, 10.0, 12.0];
    let m = mathieu_convergence(1.0, &nus, 3, 1e-13).unwrap();
    let l = lame_convergence(6.0, 0.05, &nus, 3, 1e-13).unwrap();
    assert!(m.max_constant < 10.0, "Mathieu C = {}", m.max_constant);
    assert!(l.max_constant < 10.0, "Lame C = {}", l.max_constant);
    for r in m.reports.iter().chain(&l.reports) {
        assert!(r.wronskian_defect < 1e-9);
    }
}

#[test]
fn theta4_matrix_symmetries() {
    let m = log_theta4_matrix(0, 22);
    assert!(m.is_symmetric());
    assert!(m.has_parity_symmetry());
    assert!(product_vs_sum_defect(&m, 0.03, 0.04).unwrap() < 1e-12);
    let d = divisor_checks(100, 4, 64).unwrap();
    assert!(d.divisor_closure);
    assert!(d.passed());
}

#[test]
fn theta4_product_matches_sum() {
    let (z, q) = (C::new(0.3, 0.0), C::new(0.05, 0.02));
    let half = (C::new(0.0, PI) * tau_from_q(q).unwrap()).exp();
    let mut sum = C::new(1.0, 0.0);
    for n in 1..30 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += 2.0 * sign * half.powi(n * n) * (z * 2.0 * n as f64).cos();
    }
    assert!((theta4_product(z, q).unwrap() - sum).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn monodromy_is_unimodular_and_reflection_invariant(
        h in 0.1f64..3.0,
        lr in -30.0f64..5.0,
        li in -2.0f64..2.0,
    ) {
        let lambda = C::new(lr, li);
        let u = move |x: C| Ok((x * 2.0).cos() * (2.0 * h) + (x * 4.0).sin() * 0.3);
        let ur = move |x: C| u(-x);
        let m = monodromy(&u, lambda, PI, 1e-12).unwrap();
        let r = monodromy(&ur, lambda, PI, 1e-12).unwrap();
        prop_assert!(m.wronskian_defect < 1e-9);
        prop_assert!((m.trace - r.trace).norm() < 1e-8 * m.trace.norm().max(1.0));
        prop_assert_eq!(m.nu_pair[0], -m.nu_pair[1]);
    }
}
