//! Lattice data from theta series and the `q -> 0` degeneration of Lame into Mathieu.

use floquet_forge::cli::limit_verdict;
use floquet_forge::dispersion::limit::lattice_for;
use num_complex::Complex64 as C;

fn main() -> floquet_forge::Result<()> {
    let ell = lattice_for(std::f64::consts::FRAC_PI_2, 0.05)?;
    println!("e = {:.10} {:.10} {:.10}", ell.e1, ell.e2, ell.e3);
    println!("g2 = {:.10}, g3 = {:.10}, zeta1 = {:.10}", ell.g2, ell.g3, ell.zeta1);
    println!("k = {:.10}, K = {:.10}", ell.k, ell.big_k);
    let x = C::new(0.4, 0.3);
    println!("wp~({x}) = {:.10}, sn = {:.10}", ell.wp_tilde(x)?, ell.sn(x)?);

    let v = limit_verdict(1.0, &[1e-3, 1e-4, 1e-5])?;
    println!("\n{}", v.summary);
    for row in &v.report.eigenvalue {
        println!("q = {:.0e}: relative errors {:?}", row.q, row.rel_err.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>());
    }
    Ok(())
}
