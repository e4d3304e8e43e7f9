//! Sample the ρ̄ unital of a mutation plane and probe its dimension.

use planelab::polarity::Polarity;
use planelab::sampling::rng_for;

fn main() {
    let plane = "mutation-h:mu=0.75".parse().unwrap();
    let pol = Polarity::catalog(&plane, "rho-bar").unwrap();
    for i in 0..3 {
        let p = pol.sample_unital_point(&mut rng_for(1, i)).unwrap();
        println!("{:?}  residual {:.1e}", p.flat().unwrap(), pol.absolute_residual(&p));
    }
    let probe = pol.unital_probe(10, 1).unwrap();
    println!("local dimensions {:?}, majority {}", probe.dimensions, probe.local_dimension);
}
