//! Writes SVG figures: a trajectory with its nearest equilibrium and the
//! N = 3 equilibrium catalog.
//!
//! ```text
//! cargo run --example figures -- /tmp/figs
//! ```

use std::fs;
use std::path::PathBuf;

use goldfish::cli::nearest_equilibrium;
use goldfish::plot::{catalog_svg, trajectory_svg};
use goldfish::{newgold_equilibria, solve_newgold, uniform_grid, SystemConfig, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    fs::create_dir_all(&dir)?;

    let cfg = SystemConfig::new(
        1.0,
        vec![
            C64::new(0.497225, -1.07661),
            C64::new(0.82384, 0.222154),
            C64::new(-1.02106, 0.854451),
        ],
        vec![C64::new(0.1, 0.0); 3],
    )?;
    let traj = solve_newgold(&cfg, &uniform_grid(cfg.period(), 1000))?;
    let eq = nearest_equilibrium(cfg.z0())?;
    fs::write(dir.join("trajectory.svg"), trajectory_svg(&traj, Some(&eq), true))?;

    let catalog = newgold_equilibria(3, 1.0)?;
    fs::write(dir.join("catalog.svg"), catalog_svg(&catalog))?;

    println!(
        "wrote {}/trajectory.svg and {}/catalog.svg",
        dir.display(),
        dir.display()
    );
    Ok(())
}
