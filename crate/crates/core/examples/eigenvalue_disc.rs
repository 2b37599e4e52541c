//! Eigenvalue log-Minkowski problem for the uniform measure of total mass
//! j^2 on 64 pairs, with j the first zero of J0.

use logmink::geometry::hausdorff_to_disc;
use logmink::oracles::bessel_j0_first_zero;
use logmink::{solve_log_minkowski, EvenMeasure, FunctionalDescriptor, SolveOptions};

fn main() -> logmink::Result<()> {
    let j = bessel_j0_first_zero();
    let nu = EvenMeasure::uniform(64, j * j)?;
    let r = solve_log_minkowski(
        &nu,
        &FunctionalDescriptor::eigenvalue(),
        &SolveOptions::default(),
    )?;
    println!("status {:?}, {} iterations", r.status, r.iterations);
    println!("lambda(K0) = {:.8} (disc {:.8})", r.f_value, j * j);
    println!("residual {:.2e}", r.residual_linf);
    println!(
        "Hausdorff distance to the unit disc {:.2e}",
        hausdorff_to_disc(&r.body, 1.0)
    );
    // a nonuniform measure gives a genuinely polygonal body
    let skew = EvenMeasure::uniform(4, 4.0)?;
    let skew = EvenMeasure::new(skew.pairs().to_vec(), vec![1.6, 0.8, 0.8, 0.8])?;
    let r = solve_log_minkowski(
        &skew,
        &FunctionalDescriptor::eigenvalue(),
        &SolveOptions::default(),
    )?;
    println!(
        "skewed: supports {:?}, residual {:.2e}",
        r.body.support(),
        r.residual_linf
    );
    Ok(())
}
