use proptest::prelude::*;

use planelab::morphism::Variance;
use planelab::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use planelab::polarity::{catalog_names, Polarity};
use planelab::radial::RadialSpec;
use planelab::sampling::rng_for;
use planelab::{Algebra, AlgebraElement as El, Morphism};

fn element(alg: Algebra) -> impl Strategy<Value = El> {
    prop::collection::vec(-10.0..10.0f64, alg.dim()).prop_map(move |v| El::from_slice(alg, &v).unwrap())
}

fn unit(alg: Algebra) -> impl Strategy<Value = El> {
    element(alg).prop_filter("nonzero", |e| e.norm() > 1e-3).prop_map(|e| e.unit().unwrap())
}

fn pure_unit(alg: Algebra) -> impl Strategy<Value = El> {
    element(alg).prop_map(|e| e.pure()).prop_filter("nonzero", |e| e.norm() > 1e-3).prop_map(|e| e.unit().unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

const STRUCTURES: &[&str] = &[
    "classical-r",
    "classical-c",
    "classical-h",
    "classical-o",
    "mutation-h:mu=0.75",
    "mutation-o:mu=0.75",
    "rees:theta=1.0471975511965976",
    "lenz5:alpha=0.7853981633974483",
    "andre:beta=1",
    "andre:phi=spline",
    "haehl:rho=quadmean",
    "distorted-h:rho=power:2",
    "distorted-o:rho=quadmean",
    "spin:r=0.5",
    "moulton:k=2",
    "tschet:r=3",
    "tschet-dual:r=3",
];

const POLARITY_PLANES: &[&str] = &[
    "classical-r",
    "classical-c",
    "classical-h",
    "mutation-h:mu=0.75",
    "mutation-o:mu=0.75",
    "rees:theta=1.0471975511965976",
    "spin:r=0.5",
    "distorted-h:rho=quadmean",
    "distorted-o:rho=power:2",
    "moulton:k=2",
    "shift-cosh",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(alg in prop::sample::select(vec![Algebra::H, Algebra::O]), seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let a = El::sample_normal(alg, &mut rng);
        let b = El::sample_normal(alg, &mut rng);
        prop_assert!(rel((a * b).norm(), a.norm() * b.norm()) < 1e-12);
    }

    #[test]
    fn norm_vanishes_only_at_zero(a in element(Algebra::O)) {
        prop_assert!(a.norm() >= 0.0);
        prop_assert_eq!(a.norm() == 0.0, a.coords().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn octonions_are_alternative(a in element(Algebra::O), b in element(Algebra::O)) {
        let l = (a * a) * b;
        let r = a * (a * b);
        prop_assert!(l.dist(&r) <= 1e-12 * (1.0 + l.norm()));
    }

    #[test]
    fn quaternion_morphisms_respect_variance(
        g in pure_unit(Algebra::H),
        h in unit(Algebra::H),
        a in element(Algebra::H),
        b in element(Algebra::H),
    ) {
        for m in [Morphism::Conjugation, Morphism::TwistedConj(g), Morphism::Inner(h), Morphism::Identity] {
            let lhs = m.apply(&(a * b));
            let rhs = match m.variance() {
                Variance::Automorphism => m.apply(&a) * m.apply(&b),
                Variance::AntiAutomorphism => m.apply(&b) * m.apply(&a),
            };
            prop_assert!(lhs.dist(&rhs) <= 1e-12 * (1.0 + lhs.norm()), "{:?}", m);
            let back = m.inverse().apply(&m.apply(&a));
            prop_assert!(back.dist(&a) <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn octonion_morphisms_respect_variance(
        p in unit(Algebra::H),
        u in unit(Algebra::H),
        a in element(Algebra::O),
        b in element(Algebra::O),
    ) {
        for m in [Morphism::Conjugation, Morphism::HalfFlip, Morphism::Lambda, Morphism::PairAuto { p, u }] {
            let lhs = m.apply(&(a * b));
            let rhs = match m.variance() {
                Variance::Automorphism => m.apply(&a) * m.apply(&b),
                Variance::AntiAutomorphism => m.apply(&b) * m.apply(&a),
            };
            prop_assert!(lhs.dist(&rhs) <= 1e-12 * (1.0 + lhs.norm()), "{:?}", m);
            let back = m.inverse().apply(&m.apply(&a));
            prop_assert!(back.dist(&a) <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn one_is_a_two_sided_unit(id in prop::sample::select(STRUCTURES), seed in any::<u64>()) {
        let plane: PlaneModel = id.parse().unwrap();
        let cs = plane.structure().unwrap();
        let x = plane.random_scalar(&mut rng_for(seed, 0));
        let one = cs.one();
        let zero = cs.zero();
        prop_assert!(cs.ternary(&one, &x, &zero).dist(&x) <= 1e-12 * (1.0 + x.norm()));
        prop_assert!(cs.ternary(&x, &one, &zero).dist(&x) <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn radial_specs_are_monotone_and_invertible(
        spec in prop::sample::select(vec![
            RadialSpec::Identity,
            RadialSpec::Power(0.5),
            RadialSpec::Power(3.0),
            RadialSpec::QuadMean,
            RadialSpec::default_spline(),
        ]),
        x in 0.0..50.0f64,
        dx in 1e-6..1.0f64,
    ) {
        prop_assert_eq!(spec.eval(0.0), 0.0);
        prop_assert!((spec.eval(1.0) - 1.0).abs() < 1e-15);
        prop_assert!(spec.eval(x + dx) > spec.eval(x));
        let y = spec.eval(x);
        prop_assert!((spec.inv_bisect(y).unwrap() - x).abs() <= 1e-12 * (1.0 + x));
    }

    #[test]
    fn lines_contain_their_points(id in prop::sample::select(STRUCTURES), seed in any::<u64>()) {
        let plane: PlaneModel = id.parse().unwrap();
        let mut rng = rng_for(seed, 0);
        let l = plane.random_line(&mut rng);
        let x = plane.random_scalar(&mut rng);
        let p = plane.point_on(&l, &x).unwrap();
        prop_assert!(plane.incidence_residual(&p, &l) < 1e-12);
        let Line::NonVertical(s, _) = l else { unreachable!() };
        prop_assert_eq!(plane.incidence_residual(&Point::Slope(s), &l), 0.0);
        prop_assert_eq!(plane.incidence_residual(&Point::Slope(s), &Line::AtInfinity), 0.0);
        prop_assert!(plane.incidence_residual(&Point::Affine(x, x), &Line::Vertical(x)) == 0.0);
    }

    #[test]
    fn polarities_are_involutive_dualities(id in prop::sample::select(POLARITY_PLANES), seed in any::<u64>()) {
        let plane: PlaneModel = id.parse().unwrap();
        let mut rng = rng_for(seed, 0);
        for name in catalog_names(&plane) {
            let pol = Polarity::catalog(&plane, name).unwrap();
            let p = plane.random_point(&mut rng);
            let q = plane.random_point(&mut rng);
            prop_assert!(pol.polar_line(&pol.polar_point(&p)).distance(&p) < 1e-10, "{} {}", id, name);
            for ideal in [Point::Infinity, Point::Slope(plane.random_scalar(&mut rng))] {
                prop_assert!(pol.polar_line(&pol.polar_point(&ideal)).distance(&ideal) < 1e-10);
            }
            // p on q^pol iff q on p^pol; put p on q^pol and check the converse
            if let Some(on) = plane.point_on(&pol.polar_point(&q), &plane.random_scalar(&mut rng)) {
                prop_assert!(plane.incidence_residual(&q, &pol.polar_point(&on)) < 1e-8, "{} {}", id, name);
            }
        }
    }
}
