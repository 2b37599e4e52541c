//! Volume, torsion and eigenvalue of a few polygons, with the surface
//! density and the variational measure per normal pair.

use logmink::geometry::SymmetricPolygon;
use logmink::oracles::{rect_eigen, rect_torsion};
use logmink::{FunctionalDescriptor, FunctionalKind};

fn main() -> logmink::Result<()> {
    let rect = SymmetricPolygon::rectangle(1.0, 0.5)?;
    println!(
        "2x1 rectangle: series tau {:.6}, lambda {:.6}",
        rect_torsion(2.0, 1.0).value,
        rect_eigen(2.0, 1.0).value
    );
    for p in [rect, SymmetricPolygon::regular(3, 1.0)?] {
        for kind in [
            FunctionalKind::Volume,
            FunctionalKind::Torsion,
            FunctionalKind::Eigenvalue,
        ] {
            let f = FunctionalDescriptor::new(kind);
            let a = f.analyze(&p)?;
            let v = a.variational_masses(f.alpha());
            println!(
                "{kind:>10} F = {:.6}  sum V = {:.6}",
                a.value,
                v.iter().sum::<f64>()
            );
            for ((d, s), v) in p.pairs().iter().zip(&a.density).zip(&v) {
                println!(
                    "           theta {:.4}  density {:.6}  V {:.6}",
                    d.theta(),
                    s,
                    v
                );
            }
        }
    }
    Ok(())
}
