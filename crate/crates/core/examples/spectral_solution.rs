//! Exact solution through the spectral route: propagate the coefficient
//! matrix, take its eigenvalues, solve the polynomial, track the roots.

use goldfish::spectral::solve_newgold_detailed;
use goldfish::{build_spectral, coefficients_at, uniform_grid, SystemConfig, C64};

fn main() -> goldfish::Result<()> {
    let cfg = SystemConfig::new(
        1.0,
        vec![
            C64::new(0.497225, -1.07661),
            C64::new(0.82384, 0.222154),
            C64::new(-1.02106, 0.854451),
        ],
        vec![C64::new(0.1, 0.0); 3],
    )?;

    let sd = build_spectral(&cfg)?;
    println!("C(0) diagonal: {:?}", sd.c0_diag());
    // eigenvalues only, unordered
    println!(
        "eigenvalues of C(T/4): {:?}\n",
        coefficients_at(&sd, cfg.period() / 4.0)?
    );

    let times = uniform_grid(cfg.period(), 12);
    let sol = solve_newgold_detailed(&cfg, &times)?;
    println!("{:>8}  positions", "t");
    for (t, row) in times.iter().zip(&sol.positions.samples) {
        let pts: Vec<String> = row.iter().map(|z| format!("{:+.5}{:+.5}i", z.re, z.im)).collect();
        println!("{t:8.4}  {}", pts.join("  "));
    }
    if let Some(p) = &sol.positions.closure_permutation {
        println!("\nlabels after one period: {:?}", p.as_slice());
    }
    Ok(())
}
