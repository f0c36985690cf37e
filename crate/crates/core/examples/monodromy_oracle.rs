//! Numeric Floquet exponents from the monodromy matrix, against the truncated series.

use floquet_forge::hill::monodromy;
use floquet_forge::hill::sweeps::{lame_convergence, mathieu_convergence};
use num_complex::Complex64 as C;

fn main() -> floquet_forge::Result<()> {
    let h = 1.0;
    let u = move |x: C| Ok((x * 2.0).cos() * (2.0 * h));
    let m = monodromy(&u, C::new(-30.0, 0.0), std::f64::consts::PI, 1e-12)?;
    println!("lambda = -30: trace {:.10}, nu {:.10}, det defect {:.1e}", m.trace, m.nu, m.wronskian_defect);

    let nus = [6.0, 8.0, 10.0, 12.0];
    for s in [mathieu_convergence(h, &nus, 3, 1e-13)?, lame_convergence(6.0, 0.05, &nus, 3, 1e-13)?] {
        println!("\n{}: fitted slope {:.3}, predicted {}", s.problem, s.fitted_slope, s.predicted_slope);
        for r in &s.reports {
            println!("  nu = {:<4} |nu_oracle - nu| = {:.3e}", r.nu_series, r.abs_err);
        }
    }
    Ok(())
}
