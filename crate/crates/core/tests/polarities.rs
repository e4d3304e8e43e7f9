use planelab::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use planelab::polarity::{catalog_names, LineClass, Polarity};
use planelab::sampling::rng_for;
use planelab::{Algebra, AlgebraElement as El};

const PLANES: &[&str] = &[
    "classical-r",
    "classical-c",
    "classical-h",
    "classical-o",
    "mutation-h:mu=0.75",
    "mutation-o:mu=0.75",
    "rees:theta=1.0471975511965976",
    "spin:r=0.5",
    "distorted-h:rho=power:2",
    "distorted-h:rho=quadmean",
    "distorted-o:rho=quadmean",
    "moulton:k=2",
    "shift-cosh",
];

fn all_polarities() -> Vec<Polarity> {
    let mut out = Vec::new();
    for id in PLANES {
        let plane: PlaneModel = id.parse().unwrap();
        for name in catalog_names(&plane) {
            out.push(Polarity::catalog(&plane, name).unwrap());
        }
    }
    out
}

#[test]
fn involution_and_duality_law() {
    for pol in all_polarities() {
        let plane = &pol.plane;
        for i in 0..300u64 {
            let mut rng = rng_for(11, i);
            let p = plane.random_point(&mut rng);
            let q = plane.random_point(&mut rng);
            let back = pol.polar_line(&pol.polar_point(&p));
            assert!(back.distance(&p) < 1e-10, "{} {}: involution at {p}", plane, pol.name);
            // a point on the polar of p: its polar must pass through p
            let l = pol.polar_point(&p);
            if let Line::NonVertical(..) = l {
                let Point::Affine(x, _) = q else { unreachable!() };
                let on = plane.point_on(&l, &x).unwrap();
                let r = plane.incidence_residual(&p, &pol.polar_point(&on));
                assert!(r < 1e-9, "{} {}: duality law residual {r}", plane, pol.name);
            }
        }
    }
}

#[test]
fn predicate_agrees_with_self_incidence() {
    for pol in all_polarities() {
        if pol.name == "elliptic" {
            continue;
        }
        for i in 0..200u64 {
            let mut rng = rng_for(5, i);
            let p = pol.sample_unital_point(&mut rng).unwrap();
            assert!(pol.absolute_residual(&p) < 1e-10);
            assert!(pol.is_absolute(&p, 1e-9), "{} {}: closed form rejects {p}", pol.plane, pol.name);
            let q = pol.plane.random_point(&mut rng);
            assert_eq!(pol.is_absolute(&q, 1e-9), pol.absolute_residual(&q) < 1e-9);
        }
    }
}

#[test]
fn unital_dimensions() {
    let expected = [
        ("mutation-h:mu=0.75", "rho-bar", 7),
        ("mutation-h:mu=0.75", "pi", 5),
        ("spin:r=0.5", "kappa-hat", 5),
        ("spin:r=0.5", "pi", 5),
        ("distorted-h:rho=quadmean", "rho", 7),
        ("distorted-h:rho=quadmean", "kappa", 5),
        ("mutation-o:mu=0.75", "rho-bar", 15),
        ("mutation-o:mu=0.75", "pi", 11),
        ("distorted-o:rho=quadmean", "pi", 15),
        ("distorted-o:rho=quadmean", "kappa", 11),
        ("rees:theta=1.0471975511965976", "kappa-hat", 5),
        ("moulton:k=2", "pi", 1),
        ("shift-cosh", "pi", 1),
    ];
    for (plane, name, d) in expected {
        let pol = Polarity::catalog(&plane.parse().unwrap(), name).unwrap();
        let probe = pol.unital_probe(10, 3).unwrap();
        assert!(probe.agreeing(d) >= 9, "{plane} {name}: {:?}", probe.dimensions);
    }
}

#[test]
fn shift_unital_lies_on_doubled_graph() {
    let pol = Polarity::catalog(&"shift-cosh".parse().unwrap(), "pi").unwrap();
    let probe = pol.unital_probe(20, 1).unwrap();
    for p in &probe.samples {
        let (x, y) = p.affine().unwrap();
        assert!((2.0 * y.re() - ((2.0 * x.re()).cosh() - 1.0)).abs() < 1e-9);
    }
}

#[test]
fn spin_pi_expansion() {
    // y + k∘(k conj y) against the expanded form y - conj y + 2 r y_1
    let plane: PlaneModel = "spin:r=0.5".parse().unwrap();
    let cs = plane.structure().unwrap();
    let k = El::basis(Algebra::H, 3);
    for i in 0..100u64 {
        let mut rng = rng_for(9, i);
        let y = El::sample_normal(Algebra::H, &mut rng);
        let lhs = y + cs.multiply(&k, &(k * y.conj()));
        let rhs = y - y.conj() + El::real(Algebra::H, 2.0 * 0.5 * y[1]);
        assert!(lhs.dist(&rhs) < 1e-12);
    }
}

#[test]
fn line_classification_examples() {
    let pol = Polarity::catalog(&"mutation-h:mu=0.75".parse().unwrap(), "rho-bar").unwrap();
    match pol.classify_line(&Line::Vertical(El::zero(Algebra::H)), 8, 1) {
        LineClass::Secant { dimension, .. } => assert_eq!(dimension, 3),
        other => panic!("{other:?}"),
    }
    let r = |v: f64| El::real(Algebra::R, v);
    let moulton = Polarity::catalog(&"moulton:k=2".parse().unwrap(), "pi").unwrap();
    let tangent = moulton.classify_line(&Line::NonVertical(r(1.0), r(-0.5)), 8, 1);
    let LineClass::Tangent(p) = tangent else { panic!("{tangent:?}") };
    assert!(p.distance(&Point::Affine(r(1.0), r(0.5))) < 1e-9);
    let elliptic = Polarity::catalog(&"classical-r".parse().unwrap(), "elliptic").unwrap();
    assert_eq!(elliptic.classify_line(&Line::NonVertical(r(0.3), r(2.0)), 8, 1), LineClass::Exterior);
}

/// Exact roots of the piecewise quadratic `x∘x = 2(s∘x + t)` in the Moulton plane.
fn moulton_roots(k: f64, s: f64, t: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    // x >= 0: x^2 - 2 s x - 2t; x < 0: k x^2 - 2 s' x - 2t with s' = k s for s < 0
    for (a, b, neg) in [(1.0, -2.0 * s, false), (k, -2.0 * if s < 0.0 { k * s } else { s }, true)] {
        let disc = b * b + 8.0 * a * t;
        if disc < 0.0 {
            continue;
        }
        for sg in [-1.0, 1.0] {
            let x = (-b + sg * disc.sqrt()) / (2.0 * a);
            if (x < 0.0) == neg && !roots.iter().any(|r: &f64| (r - x).abs() < 1e-12) {
                roots.push(x);
            }
        }
    }
    roots
}

#[test]
fn moulton_secants_match_discriminant_oracle() {
    let pol = Polarity::catalog(&"moulton:k=2".parse().unwrap(), "pi").unwrap();
    let r = |v: f64| El::real(Algebra::R, v);
    for i in 0..50u64 {
        let mut rng = rng_for(21, i);
        let Line::NonVertical(s, t) = pol.plane.random_line(&mut rng) else { unreachable!() };
        let exact = moulton_roots(2.0, s.re(), t.re());
        match pol.classify_line(&Line::NonVertical(s, t), 16, i) {
            LineClass::Secant { points, .. } => {
                assert_eq!(points.len(), exact.len(), "[{s}, {t}]");
                for p in points {
                    let x = p.affine().unwrap().0.re();
                    assert!(exact.iter().any(|e| (e - x).abs() < 1e-6));
                }
            }
            LineClass::Tangent(_) => assert_eq!(exact.len(), 1),
            LineClass::Indeterminate => assert!(exact.is_empty() || exact.len() == 1, "missed {exact:?}"),
            LineClass::Exterior => panic!("exterior is never claimed here"),
        }
        let _ = r;
    }
}
