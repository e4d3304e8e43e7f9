//! Axiom suites with witnesses, and Desargues in a non-Desarguesian plane.

use planelab::verify::{check_algebra_axioms, check_plane_axioms, configuration_test, replay, AlgebraClass, ConfigKind};

fn main() {
    let good = check_plane_axioms(&"moulton:k=2".parse().unwrap(), 1000, 7, 1e-8);
    println!("moulton plane axioms: passed {}, max residual {:.1e}", good.passed, good.max_residual);

    let broken = check_plane_axioms(&"tschet:r=3:boundary=0.1".parse().unwrap(), 1000, 7, 1e-8);
    println!("broken fixture: passed {}", broken.passed);
    if let Some(w) = broken.witnesses.first() {
        println!("  witness #{} ({}) residual {:.3e}, replayed {:.3e}", w.index, w.check, w.residual, replay(&broken, w).unwrap());
    }

    let skew = check_algebra_axioms(&"mutation-h:mu=0.75".parse().unwrap(), AlgebraClass::Skewfield, 500, 7, 1e-9);
    println!("mutation as skew field: passed {}, first failing check {:?}", skew.passed, skew.witnesses.first().map(|w| &w.check));

    let d = configuration_test(&"moulton:k=2".parse().unwrap(), ConfigKind::Desargues, None, 100, 7).unwrap();
    println!("moulton Desargues: max discrepancy {:.3e}", d.max_discrepancy);
}
