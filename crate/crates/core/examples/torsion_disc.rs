//! Torsion log-Minkowski problem for the uniform measure of total mass
//! pi/8 on 64 pairs; the solution approximates the unit disc.

use logmink::geometry::hausdorff_to_disc;
use logmink::{solve_log_minkowski, EvenMeasure, FunctionalDescriptor, SolveOptions};

fn main() -> logmink::Result<()> {
    let nu = EvenMeasure::uniform(64, std::f64::consts::PI / 8.0)?;
    let r = solve_log_minkowski(
        &nu,
        &FunctionalDescriptor::torsion(),
        &SolveOptions::default(),
    )?;
    println!("status {:?}, {} iterations", r.status, r.iterations);
    println!(
        "tau(K0) = {:.8} (disc {:.8})",
        r.f_value,
        std::f64::consts::PI / 8.0
    );
    println!("residual {:.2e}", r.residual_linf);
    println!(
        "Hausdorff distance to the unit disc {:.2e}",
        hausdorff_to_disc(&r.body, 1.0)
    );
    Ok(())
}
