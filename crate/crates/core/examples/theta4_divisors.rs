//! Exact coefficients of `-ln theta_4` in the counting parameters and their divisor structure.

use floquet_forge::instanton::{compare_with_printed, divisor_checks, log_theta4_matrix, sigma};

fn main() -> floquet_forge::Result<()> {
    let m = log_theta4_matrix(0, 10);
    for i in 0..m.dim {
        let row: Vec<String> = (0..m.dim).map(|j| m.get(i, j).to_string()).collect();
        println!("{}", row.join("\t"));
    }
    for n in 1..10 {
        println!("sigma_-1({n}) = {}", sigma(-1, n));
    }
    let full = log_theta4_matrix(0, 22);
    println!("22x22 differences from the printed table: {}", compare_with_printed(&full)?.len());
    println!("divisor checks n <= 200: {}", divisor_checks(200, 4, 64)?.passed());
    Ok(())
}
