//! Exact solution, simulation and verification of a solvable goldfish-type
//! many-body problem in the complex plane.
//!
//! The particle positions `z_n(t)` are the zeros of a monic polynomial whose
//! coefficients obey the Calogero system with a harmonic term. Those
//! coefficients are the eigenvalues of an explicit matrix
//! `C(0) cos ωt + Ċ(0) sin(ωt)/ω`, so the motion is obtained by propagating
//! a matrix, extracting its spectrum, and tracking polynomial roots by
//! continuity. Every exact solver has a direct ODE integration alongside it
//! in [`oracle`] for cross-checking.
//!
//! ```
//! use goldfish::{solve_newgold, uniform_grid, SystemConfig, C64};
//!
//! let cfg = SystemConfig::new(
//!     1.0,
//!     vec![C64::new(0.5, -0.8), C64::new(0.4, 0.7)],
//!     vec![C64::new(0.01, 0.0), C64::new(-0.01, 0.0)],
//! )
//! .unwrap();
//! let traj = solve_newgold(&cfg, &uniform_grid(cfg.period(), 200)).unwrap();
//! assert_eq!(traj.len(), 201);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classic;
pub mod cli;
pub mod equilibria;
pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod plot;
pub mod roots;
pub mod spectral;
pub mod symmetry;

pub use classic::{hamiltonian_isogold, isogold_path, solve_isogold};
pub use equilibria::{calogero_equilibria, hermite_zeros, newgold_equilibria};
pub use error::{Error, Result};
pub use model::{
    load_config, parse_config, period, uniform_grid, CatalogEntry, EquilibriumCatalog, EquilibriumFamily,
    MonicPolynomial, Permutation, SystemConfig, Trajectory, C64,
};
pub use ode::OdeOptions;
pub use oracle::{integrate, integrate_at, rhs_calogero, rhs_isogold, rhs_newgold, OdeSystem, PhaseState};
pub use roots::{match_labels, multiset_distance, roots_of_monic, track_roots};
pub use spectral::{build_spectral, coefficients_at, solve_newgold, SpectralData};
pub use symmetry::{coeff_velocities, coeffs_from_roots, eval_monic};
