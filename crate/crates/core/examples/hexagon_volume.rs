//! Volume log-Minkowski problem with three uniform pairs of mass 2. The
//! solution is the regular hexagon with every support value equal to 3^{1/4}.

use logmink::oracles::brute_force_volume_logmink;
use logmink::{solve_log_minkowski, EvenMeasure, FunctionalDescriptor, SolveOptions};

fn main() -> logmink::Result<()> {
    let nu = EvenMeasure::uniform(3, 6.0)?;
    let r = solve_log_minkowski(
        &nu,
        &FunctionalDescriptor::volume(),
        &SolveOptions::default(),
    )?;
    println!("status {:?} after {} iterations", r.status, r.iterations);
    for (d, h) in r.body.pairs().iter().zip(r.body.support()) {
        println!("theta {:.6}  h {:.12}", d.theta(), h);
    }
    println!("expected h {:.12}", 3f64.powf(0.25));
    println!("residual {:.2e}", r.residual_linf);
    let brute = brute_force_volume_logmink(&nu)?;
    println!(
        "objective {:.10} (grid search {:.10})",
        r.objective, brute.objective.value
    );
    Ok(())
}
