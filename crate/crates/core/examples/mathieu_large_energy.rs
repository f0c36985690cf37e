//! Large-energy dispersion and wave function of the Mathieu operator `-d^2 + 2h cos 2x`.

use floquet_forge::dispersion::{dispersion_from_periods, refloquet_wavefunction, ExponentSeries};
use floquet_forge::riccati::{large_energy_densities, mathieu_potential};

fn main() -> floquet_forge::Result<()> {
    let u = mathieu_potential().potential;
    let v = large_energy_densities(&u, 6)?;
    for (l, vl) in v.iter().enumerate().take(4) {
        println!("v_{} = {vl}", l + 1);
    }
    let d = dispersion_from_periods(&v, 1)?;
    println!("\nlambda(nu):");
    for e in d.lambda.series.lead()..d.lambda.series.order() {
        println!("  nu^{:<3} {}", -e, d.lambda.series.coeff(e)?);
    }
    let psi = refloquet_wavefunction(&ExponentSeries::from_densities(&v, 1)?, &d)?;
    println!("\nln psi_+ in powers of 1/nu:");
    for e in psi.lead()..4 {
        println!("  nu^{:<3} {}", -e, psi.coeff(e)?);
    }
    Ok(())
}
