//! Exact solution against brute-force integration of the equations of motion.
//!
//! Tightening the integrator tolerance should shrink the gap until it hits
//! the accuracy of the root tracking.

use goldfish::{integrate_at, solve_newgold, uniform_grid, OdeOptions, OdeSystem, PhaseState, SystemConfig, C64};

fn main() -> goldfish::Result<()> {
    let cfg = SystemConfig::new(
        1.0,
        vec![
            C64::new(0.6, -0.3),
            C64::new(-0.4, 0.5),
            C64::new(0.1, 0.9),
            C64::new(-0.7, -0.6),
        ],
        vec![
            C64::new(0.2, 0.1),
            C64::new(-0.1, 0.0),
            C64::new(0.0, -0.25),
            C64::new(0.15, 0.05),
        ],
    )?;
    let times = uniform_grid(cfg.period(), 1000);
    let exact = solve_newgold(&cfg, &times)?;
    let start = PhaseState::new(cfg.z0().to_vec(), cfg.v0().to_vec());

    println!("{:>8}  {:>12}", "rtol", "max |Δz|");
    for rtol in [1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
        let ode = integrate_at(
            OdeSystem::NewGold,
            &start,
            cfg.omega(),
            &times,
            &OdeOptions::default().with_rtol(rtol),
        )?;
        println!("{rtol:8.0e}  {:12.3e}", exact.max_deviation(&ode));
    }
    Ok(())
}
