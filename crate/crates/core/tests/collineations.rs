use planelab::collineation::{
    dimension_audit, make_special, motion_test, random_double_flag_draw, random_semifield_draw, recover_unital_motion,
    unital_constraint_residual, verify_collineation, Collineation, SemifieldSigma, SpecialKind,
};
use planelab::plane::{PlaneModel, ProjectivePoint as Point};
use planelab::polarity::Polarity;
use planelab::sampling::{coin, rng_for, uniform};
use planelab::{Algebra, AlgebraElement as El};

fn pol(plane: &str, name: &str) -> Polarity {
    Polarity::catalog(&plane.parse().unwrap(), name).unwrap()
}

fn r(v: f64) -> El {
    El::real(Algebra::R, v)
}

#[test]
fn semifield_draws_are_collineations() {
    for (plane, name) in [("mutation-h:mu=0.75", "rho-bar"), ("mutation-h:mu=0.75", "pi"), ("mutation-o:mu=0.75", "pi"), ("classical-o", "rho-bar")] {
        let p = pol(plane, name);
        for i in 0..40u64 {
            let mut rng = rng_for(2, i);
            let c = random_semifield_draw(&p, &mut rng, i % 2 == 0);
            let rep = verify_collineation(&p.plane, &c, 50, i, 1e-8).unwrap();
            assert!(rep.passed, "{plane}: {} at {:?}", rep.max_residual, rep.witness);
        }
    }
}

#[test]
fn broken_coupling_is_rejected() {
    let plane: PlaneModel = "mutation-h:mu=0.75".parse().unwrap();
    let m = El::quat(0.3, -1.0, 0.5, 2.0);
    let mut g = SemifieldSigma::identity(Algebra::H);
    g.q = m.conj();
    g.m = m;
    g.line_q = Some(m.conj() + El::quat(0.0, 0.0, 1.0, 0.0));
    let rep = verify_collineation(&plane, &Collineation::Semifield(g), 100, 1, 1e-8).unwrap();
    assert!(!rep.passed);
    assert!(rep.witness.is_some());
}

#[test]
fn double_flag_and_spin_maps_are_collineations() {
    let d = pol("distorted-h:rho=quadmean", "rho");
    for i in 0..20u64 {
        let mut rng = rng_for(3, i);
        let c = random_double_flag_draw(&d, &mut rng, false);
        assert!(verify_collineation(&d.plane, &c, 50, i, 1e-8).unwrap().passed);
    }
    let spin: PlaneModel = "spin:r=0.5".parse().unwrap();
    for i in 0..20u64 {
        let mut rng = rng_for(4, i);
        let a = El::sample_unit(Algebra::H, &mut rng);
        let c = El::quat(uniform(&mut rng, 0.5, 2.0), uniform(&mut rng, -1.0, 1.0), 0.0, 0.0);
        let coll = Collineation::SpinNabla { a, c, d: uniform(&mut rng, 0.5, 2.0) };
        let rep = verify_collineation(&spin, &coll, 50, i, 1e-8).unwrap();
        assert!(rep.passed, "{} {:?}", rep.max_residual, rep.witness);
    }
}

#[test]
fn closed_form_conditions_match_commutation() {
    let cases = [
        ("mutation-h:mu=0.75", "rho-bar"),
        ("mutation-h:mu=0.75", "pi"),
        ("mutation-o:mu=0.75", "rho-bar"),
        ("mutation-o:mu=0.75", "pi"),
        ("distorted-h:rho=quadmean", "rho"),
        ("distorted-h:rho=quadmean", "kappa"),
    ];
    for (plane, name) in cases {
        let p = pol(plane, name);
        let (mut members, mut others) = (0, 0);
        for i in 0..200u64 {
            let mut rng = rng_for(8, i);
            let want = coin(&mut rng);
            let c = if plane.starts_with("distorted") {
                random_double_flag_draw(&p, &mut rng, want)
            } else {
                random_semifield_draw(&p, &mut rng, want)
            };
            let rep = motion_test(&p, &c, 20, i).unwrap();
            assert_eq!(rep.condition_membership, rep.commutes, "{plane} {name} draw {i}: {c:?} {}", rep.max_commutator);
            if rep.commutes {
                members += 1;
            } else {
                others += 1;
            }
        }
        assert!(members > 0 && others > 0, "{plane} {name}: {members}/{others}");
    }
}

#[test]
fn spin_stabilizer_conditions_match_commutation() {
    for name in ["kappa-hat", "pi"] {
        let p = pol("spin:r=0.5", name);
        let mut members = 0;
        for i in 0..200u64 {
            let mut rng = rng_for(12, i);
            // mostly draws from the candidate circles, where motions live
            let t = uniform(&mut rng, 0.0, std::f64::consts::TAU);
            let a = match i % 3 {
                0 => El::quat(t.cos(), 0.0, 0.0, t.sin()),
                1 => El::quat(0.0, t.cos(), t.sin(), 0.0),
                _ => El::sample_unit(Algebra::H, &mut rng),
            };
            let c = if coin(&mut rng) { El::quat(1.0, 0.0, 0.0, 0.0) } else { El::quat(0.0, 1.0, 0.0, 0.0) };
            let d = if coin(&mut rng) { 1.0 } else { -1.0 } * if i % 5 == 0 { 2.0 } else { 1.0 };
            let coll = Collineation::SpinNabla { a, c, d };
            let rep = motion_test(&p, &coll, 20, i).unwrap();
            assert_eq!(rep.condition_membership, rep.commutes, "{name} {coll:?}");
            members += rep.commutes as usize;
        }
        assert!(members > 0, "{name}: no motions drawn");
    }
}

#[test]
fn unital_motions_recover_points() {
    for (plane, name) in [("mutation-h:mu=0.75", "rho-bar"), ("mutation-h:mu=0.75", "pi"), ("spin:r=0.5", "kappa-hat"), ("rees:theta=1.0471975511965976", "kappa-hat")] {
        let p = pol(plane, name);
        let zero = El::zero(Algebra::H);
        for i in 0..30u64 {
            let mut rng = rng_for(6, i);
            let u = p.sample_unital_point(&mut rng).unwrap();
            let (m, n) = u.affine().unwrap();
            assert!(unital_constraint_residual(&p, &m, &n) < 1e-9);
            let c = recover_unital_motion(&p, &u).unwrap();
            assert!(c.apply_point(&p.plane, &Point::Affine(zero, zero)).distance(&u) < 1e-9);
            assert!(verify_collineation(&p.plane, &c, 30, i, 1e-8).unwrap().passed);
            let rep = motion_test(&p, &c, 30, i);
            if let Ok(rep) = rep {
                assert!(rep.commutes, "{plane} {name}: {}", rep.max_commutator);
            }
            // the unital is mapped to itself
            let v = p.sample_unital_point(&mut rng).unwrap();
            assert!(p.absolute_residual(&c.apply_point(&p.plane, &v)) < 1e-8);
        }
    }
}

#[test]
fn constraint_violations_are_reported() {
    let p = pol("mutation-h:mu=0.75", "rho-bar");
    let bad = Point::Affine(El::quat(1.0, 0.0, 0.0, 0.0), El::quat(0.0, 1.0, 0.0, 0.0));
    assert!(recover_unital_motion(&p, &bad).is_err());
}

#[test]
fn family_dimensions() {
    assert_eq!(dimension_audit(0.75, "rho-bar", 1).unwrap().dimension, 11);
    assert_eq!(dimension_audit(0.75, "pi-c", 1).unwrap().dimension, 7);
    assert_eq!(dimension_audit(0.75, "pi-perp", 1).unwrap().dimension, 7);
}

#[test]
fn special_maps() {
    for plane in ["tschet:r=3", "tschet-dual:r=3", "moulton:k=2"] {
        let plane: PlaneModel = plane.parse().unwrap();
        let h = make_special(&plane, SpecialKind::Homology, &[r(1.5), r(2.0)]).unwrap();
        let rep = verify_collineation(&plane, &h, 200, 1, 1e-8).unwrap();
        assert!(rep.passed, "{plane}: {} {:?}", rep.max_residual, rep.witness);
    }
    let dual: PlaneModel = "tschet-dual:r=3".parse().unwrap();
    let swap = make_special(&dual, SpecialKind::Reflection, &[]).unwrap();
    assert!(verify_collineation(&dual, &swap, 200, 2, 1e-8).unwrap().passed);
    let tschet: PlaneModel = "tschet:r=3".parse().unwrap();
    assert!(make_special(&tschet, SpecialKind::Reflection, &[]).is_err());
    assert!(make_special(&tschet, SpecialKind::Translation, &[r(1.0), r(0.0)]).is_err());
    let shift: PlaneModel = "shift-cosh".parse().unwrap();
    let s = make_special(&shift, SpecialKind::Shift, &[r(0.7), r(-1.2)]).unwrap();
    assert!(verify_collineation(&shift, &s, 200, 3, 1e-8).unwrap().passed);
}

#[test]
fn compositions_of_motions_are_motions() {
    let p = pol("mutation-h:mu=0.75", "pi");
    for i in 0..20u64 {
        let mut rng = rng_for(14, i);
        let a = random_semifield_draw(&p, &mut rng, true);
        let b = random_semifield_draw(&p, &mut rng, true);
        let c = Collineation::Compose(vec![a, b]);
        assert!(verify_collineation(&p.plane, &c, 30, i, 1e-8).unwrap().passed);
        let plane = &p.plane;
        let mut rng = rng_for(15, i);
        for _ in 0..10 {
            let q = plane.random_point(&mut rng);
            let l1 = p.polar_point(&c.apply_point(plane, &q));
            let l2 = c.apply_line(plane, &p.polar_point(&q));
            assert!(l1.distance(&l2) < 1e-8);
        }
    }
}
