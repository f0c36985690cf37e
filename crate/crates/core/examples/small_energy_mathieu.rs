//! Strong-coupling expansion of Mathieu around both minima, with the printed closed forms checked.

use floquet_forge::dispersion::small::{printed_small_dispersion, PrintedWaveFunction, CLOSED_FORM_DENSITIES};
use floquet_forge::riccati::{mathieu_min0, mathieu_minpi2, small_energy_densities, ProblemId};

fn main() -> floquet_forge::Result<()> {
    for p in [mathieu_min0(), mathieu_minpi2()] {
        println!("{}", p.id);
        for (l, w) in small_energy_densities(&p, 3)?.iter().enumerate() {
            println!("  v_{} = {w}", l as i64 - 1);
        }
    }
    if let Some(d) = printed_small_dispersion(ProblemId::MathieuMinPi2) {
        println!("\nx* = pi/2 dispersion: {}", d.series);
    }
    for w in PrintedWaveFunction::ALL.iter().filter(|w| w.name().starts_with("mathieu")) {
        let r = w.verify(1, CLOSED_FORM_DENSITIES)?;
        println!("{:<28} {}", w.name(), if r.passed() { "matches" } else { "differs" });
    }
    Ok(())
}
