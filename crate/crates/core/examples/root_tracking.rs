//! Labeling roots by continuity along an arbitrary coefficient path.
//!
//! The path below swaps two roots around each other, so the labels come back
//! exchanged even though the polynomial is the same at both ends.

use goldfish::roots::linear_refiner;
use goldfish::{coeffs_from_roots, track_roots, C64};

fn main() -> goldfish::Result<()> {
    let steps = 64;
    let path: Vec<(f64, Vec<C64>)> = (0..=steps)
        .map(|k| {
            let s = k as f64 / steps as f64;
            let a = C64::from_polar(0.5, std::f64::consts::PI * s);
            (s, coeffs_from_roots(&[a, -a, C64::new(0.0, 1.5)]))
        })
        .collect();

    let traj = track_roots(&path, linear_refiner(&path))?;
    let show = |row: &[C64]| {
        row.iter()
            .map(|z| format!("{:+.3}{:+.3}i", z.re, z.im))
            .collect::<Vec<_>>()
            .join("  ")
    };
    println!("start: {}", show(traj.first()));
    println!("end:   {}", show(traj.last()));
    println!(
        "closure permutation: {:?}",
        traj.closure_permutation.as_ref().map(|p| p.as_slice())
    );
    Ok(())
}
