//! Joins and meets in the Moulton plane and a Tschetweruchin plane.

use planelab::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use planelab::{Algebra, AlgebraElement as El};

fn r(v: f64) -> El {
    El::real(Algebra::R, v)
}

fn main() {
    for id in ["moulton:k=2", "tschet:r=3"] {
        let plane: PlaneModel = id.parse().unwrap();
        let p = Point::Affine(r(-2.0), r(1.0));
        let q = Point::Affine(r(1.0), r(-1.0));
        let l = plane.join(&p, &q).unwrap();
        println!("{id}: join = {l:?}");
        if let Line::NonVertical(s, t) = &l {
            for x in [-2.0, -1.0, 0.0, 1.0] {
                println!("  y({x}) = {:.6}", plane.eval_line(s, t, &r(x)).re());
            }
        }
        let m = plane.join(&Point::Affine(r(-1.0), r(-1.0)), &Point::Affine(r(2.0), r(2.0))).unwrap();
        println!("  meets y = x at {:?}", plane.meet(&l, &m).unwrap());
    }
}
