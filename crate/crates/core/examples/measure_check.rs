//! The strict subspace concentration condition on a few measures.

use logmink::geometry::uniform_pairs;
use logmink::measure::check_sscc;
use logmink::EvenMeasure;

fn main() -> logmink::Result<()> {
    for mass in [
        vec![1.0, 1.0],
        vec![1.0, 1.0, 1.0],
        vec![3.0, 1.0, 1.0],
        vec![1.0, 0.5, 0.5, 0.9],
    ] {
        let nu = EvenMeasure::new(uniform_pairs(mass.len(), 0.0), mass.clone())?;
        println!("{mass:?}: {}", check_sscc(&nu).describe());
    }
    Ok(())
}
