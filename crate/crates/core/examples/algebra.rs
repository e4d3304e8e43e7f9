//! Octonion arithmetic and the mutated product.

use planelab::structures::CoordinateStructure;
use planelab::{Algebra, AlgebraElement as El, Morphism};

fn main() {
    let a = El::octo([1.0, 2.0, 0.0, -1.0, 0.5, 0.0, 3.0, 1.0]);
    let b = El::octo([0.0, 1.0, 1.0, 0.0, -2.0, 1.0, 0.0, 0.5]);
    let ab = a * b;
    println!("ab = {:?}", ab.coords());
    println!("|ab| = {:.12}, |a||b| = {:.12}", ab.norm(), a.norm() * b.norm());
    println!("flexible law (ab)a - a(ba) = {:.3e}", ((a * b) * a).dist(&(a * (b * a))));

    let lambda = Morphism::Lambda;
    let lhs = lambda.apply(&ab);
    let rhs = lambda.apply(&b) * lambda.apply(&a);
    println!("lambda(ab) - lambda(b)lambda(a) = {:.3e}", lhs.dist(&rhs));

    let mutation: CoordinateStructure = "mutation-h:mu=0.75".parse().unwrap();
    let i = El::basis(Algebra::H, 1);
    let j = El::basis(Algebra::H, 2);
    println!("i∘j = {:?}, j∘i = {:?}", mutation.multiply(&i, &j).coords(), mutation.multiply(&j, &i).coords());
}
