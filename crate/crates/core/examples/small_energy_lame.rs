//! Small-energy Lame expansions in Jacobi form around `z = 0` and `z = K`.

use floquet_forge::dispersion::small::{PrintedWaveFunction, CLOSED_FORM_DENSITIES};
use floquet_forge::riccati::{lame_z0, lame_zk, small_energy_densities};

fn main() -> floquet_forge::Result<()> {
    for p in [lame_z0(), lame_zk()] {
        println!("{}", p.id);
        for (l, w) in small_energy_densities(&p, 3)?.iter().enumerate() {
            println!("  v_{} = {w}", l as i64 - 1);
        }
    }
    for w in PrintedWaveFunction::ALL.iter().filter(|w| w.name().starts_with("lame")) {
        for sign in [1, -1] {
            let r = w.verify(sign, CLOSED_FORM_DENSITIES)?;
            println!("{:<28} {sign:+}  {}", w.name(), if r.passed() { "matches" } else { "differs" });
        }
    }
    Ok(())
}
