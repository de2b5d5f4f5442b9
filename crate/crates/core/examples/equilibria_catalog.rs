//! Equilibrium configurations for small N.
//!
//! Every ordering of the Hermite zeros (real or imaginary) is an equilibrium
//! of the coefficient system; its roots are an equilibrium of the particles.
//!
//! ```text
//! cargo run --example equilibria_catalog -- 3
//! ```

use goldfish::equilibria::catalog_to_json;
use goldfish::{hermite_zeros, newgold_equilibria};

fn main() -> goldfish::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);

    println!("Hermite zeros for N = {n}: {:?}", hermite_zeros(n));
    let catalog = newgold_equilibria(n, 1.0)?;
    println!("{} distinct equilibria\n", catalog.len());

    for (j, entry) in catalog.entries.iter().enumerate() {
        let pts: Vec<String> = entry
            .configuration
            .iter()
            .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
            .collect();
        println!(
            "({:>2}) {:<9} perm {:>2}  residual {:.1e}  [{}]",
            j + 1,
            format!("{:?}", entry.family).to_lowercase(),
            entry.permutation_index,
            entry.residual,
            pts.join(", ")
        );
    }

    if std::env::args().any(|a| a == "--json") {
        println!("{}", catalog_to_json(&catalog));
    }
    Ok(())
}
