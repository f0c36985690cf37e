//! Lame operator `-d^2 + alpha wp~(x)`: the dispersion coefficients are quasi-modular in the lattice.

use floquet_forge::dispersion::limit::lattice_for;
use floquet_forge::dispersion::{dispersion_from_periods, eval_scalar_series};
use floquet_forge::hill::sweeps::lame_bindings;
use floquet_forge::riccati::{lame_potential, large_energy_densities};
use num_complex::Complex64;

fn main() -> floquet_forge::Result<()> {
    let v = large_energy_densities(&lame_potential().potential, 6)?;
    let d = dispersion_from_periods(&v, 1)?;
    let lam = &d.lambda.series;
    for e in lam.lead()..lam.order() {
        println!("nu^{:<3} {}", -e, lam.coeff(e)?);
    }

    let (alpha, q, nu) = (6.0, 0.05, 10.0);
    let ell = lattice_for(std::f64::consts::FRAC_PI_2, q)?;
    let b = lame_bindings(&ell, alpha);
    let value = eval_scalar_series(lam, Complex64::new(1.0 / nu, 0.0), &b)?;
    println!("\nalpha = {alpha}, q = {q}, nu = {nu}: lambda = {:.12}", value.re);
    Ok(())
}
