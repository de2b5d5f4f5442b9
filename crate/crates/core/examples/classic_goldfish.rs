//! The classic isochronous goldfish: closed-form positions, a check against
//! integration, and the Hamiltonian that generates the motion.

use goldfish::classic::{canonical_flow, momenta_for_velocities};
use goldfish::{
    hamiltonian_isogold, integrate_at, isogold_path, uniform_grid, OdeOptions, OdeSystem, PhaseState, SystemConfig, C64,
};

fn main() -> goldfish::Result<()> {
    let cfg = SystemConfig::new(
        1.0,
        vec![C64::new(1.0, 0.2), C64::new(-0.5, 0.6), C64::new(-0.3, -0.8)],
        vec![C64::new(0.0, 0.4), C64::new(0.3, -0.1), C64::new(-0.2, 0.0)],
    )?;
    let times = uniform_grid(cfg.period(), 500);

    let closed = isogold_path(&cfg, &times)?;
    let ode = integrate_at(
        OdeSystem::IsoGold,
        &PhaseState::new(cfg.z0().to_vec(), cfg.v0().to_vec()),
        cfg.omega(),
        &times,
        &OdeOptions::default(),
    )?;
    println!("closed form vs ode: {:.2e}", closed.max_deviation(&ode));
    println!(
        "return after T:     {:.2e}",
        goldfish::multiset_distance(closed.last(), cfg.z0())
    );

    // momenta that reproduce the initial velocities
    let zeta = momenta_for_velocities(cfg.z0(), cfg.v0());
    let (zdot, _) = canonical_flow(&zeta, cfg.z0(), cfg.omega())?;
    let gap = zdot
        .iter()
        .zip(cfg.v0())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("H(ζ, z) = {:.6}", hamiltonian_isogold(&zeta, cfg.z0(), cfg.omega())?);
    println!("canonical ż vs v0: {gap:.2e}");
    Ok(())
}
