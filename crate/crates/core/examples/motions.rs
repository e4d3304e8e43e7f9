//! Motions of a polarity: closed-form membership against commutation.

use planelab::collineation::{dimension_audit, motion_test, recover_unital_motion, Collineation, SemifieldSigma};
use planelab::plane::ProjectivePoint as Point;
use planelab::polarity::Polarity;
use planelab::sampling::rng_for;
use planelab::{Algebra, AlgebraElement as El};

fn main() {
    let pol = Polarity::catalog(&"mutation-h:mu=0.75".parse().unwrap(), "rho-bar").unwrap();
    let m = El::quat(0.0, 1.0, 0.0, 0.0);
    let mut g = SemifieldSigma::identity(Algebra::H);
    g.q = m.conj();
    g.m = m;
    g.n = El::quat(0.5, 0.0, 5.0, 0.0);
    let rep = motion_test(&pol, &Collineation::Semifield(g.clone()), 100, 1).unwrap();
    println!("sigma: membership {}, commutes {}", rep.condition_membership, rep.commutes);
    g.s = 2.0;
    let rep = motion_test(&pol, &Collineation::Semifield(g), 100, 1).unwrap();
    println!("s = 2: membership {}, commutes {}", rep.condition_membership, rep.commutes);

    let u = pol.sample_unital_point(&mut rng_for(3, 0)).unwrap();
    let c = recover_unital_motion(&pol, &u).unwrap();
    let zero = El::zero(Algebra::H);
    println!("origin maps to the sampled unital point within {:.1e}", c.apply_point(&pol.plane, &Point::Affine(zero, zero)).distance(&u));

    let audit = dimension_audit(0.75, "rho-bar", 1).unwrap();
    println!("motion family: {} parameters, rank {}, dimension {}", audit.parameters, audit.constraint_rank, audit.dimension);
}
