//! Surface-operator coefficients against the Lame wave function and eigenvalue.

use floquet_forge::instanton::gauge::{
    g_coefficient, g_resummation_check, lambda_from_f, lambda_from_f_check, wavefunction_g_check,
    n_from_alpha, GaugeParams, OMEGA1,
};

fn main() -> floquet_forge::Result<()> {
    let (nu, alpha, q) = (10.0, 6.0, 0.02);
    let g = GaugeParams::from_spectral(nu, n_from_alpha(alpha), OMEGA1, 1.0);
    println!("a = {:.6}, m = {:.6}", g.a, g.m);
    if let Some(c) = g_coefficient(2, 2, 0) {
        println!("G_2 coefficient of x1^2: {c}");
    }

    let r = g_resummation_check(3, 2)?;
    println!("resummation window: {} orders, passed {}", r.lines.len(), r.passed());
    let w = wavefunction_g_check(nu, alpha, q, &[0.3, 0.55, 0.8])?;
    println!("wave function: passed {}", w.passed());
    println!("lambda from F: {:.12}", lambda_from_f(nu, alpha, q, OMEGA1)?);
    println!("eigenvalue check: passed {}", lambda_from_f_check(nu, alpha, q)?.passed());
    Ok(())
}
