use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use planelab::plane::PlaneModel;
use planelab::polarity::{Polarity, PolarityRule, UnitalPredicate};
use planelab::structures::{CoordinateStructure as CS, Locus};
use planelab::verify::{
    check_algebra_axioms, check_plane_axioms, check_polarity, configuration_test, replay, replay_configuration, sample_disks,
    smoothness_probe, AlgebraClass, ConfigKind, Region, DESARGUES_FAIL,
};
use planelab::Morphism;

fn plane(id: &str) -> PlaneModel {
    id.parse().unwrap()
}

fn cs(id: &str) -> CS {
    id.parse().unwrap()
}

#[test]
fn plane_axioms_small_runs() {
    for id in ["classical-h", "tschet:r=3", "moulton:k=2", "tschet-dual:r=3", "shift-cosh", "distorted-o:rho=quadmean"] {
        let p = plane(id);
        let tol = if p.is_iterative() { 1e-6 } else { 1e-8 };
        let rep = check_plane_axioms(&p, 500, 1, tol);
        assert!(rep.passed, "{id}: {:?}", rep.witnesses);
    }
}

#[test]
fn corrupted_tschet_fails_plane_axioms() {
    let rep = check_plane_axioms(&plane("tschet:r=3:boundary=0.1"), 2000, 1, 1e-8);
    assert!(!rep.passed);
    let w = &rep.witnesses[0];
    let again = replay(&rep, w).unwrap();
    assert!((again - w.residual).abs() <= 1e-12 || (again.is_infinite() && w.residual.is_infinite()));
}

#[test]
fn algebra_class_examples() {
    let mutation = cs("mutation-h:mu=0.75");
    assert!(check_algebra_axioms(&mutation, AlgebraClass::Semifield, 1000, 1, 1e-9).passed);
    let rep = check_algebra_axioms(&mutation, AlgebraClass::Skewfield, 1000, 1, 1e-9);
    assert!(!rep.passed);
    assert!(rep.witnesses.iter().all(|w| w.check == "associative"));
    let w = &rep.witnesses[0];
    assert!((replay(&rep, w).unwrap() - w.residual).abs() <= 1e-12);
    assert!(check_algebra_axioms(&cs("andre:beta=1"), AlgebraClass::Nearfield, 1000, 1, 1e-9).passed);
    let spline = cs("andre:phi=spline");
    assert!(check_algebra_axioms(&spline, AlgebraClass::Quasifield, 1000, 1, 1e-9).passed);
    assert!(!check_algebra_axioms(&spline, AlgebraClass::Nearfield, 1000, 1, 1e-9).passed);
    assert!(check_algebra_axioms(&cs("classical-h"), AlgebraClass::Skewfield, 1000, 1, 1e-9).passed);
    // tschet is not even Cartesian
    assert!(!check_algebra_axioms(&cs("tschet:r=3"), AlgebraClass::Cartesian, 100, 1, 1e-9).passed);
}

#[test]
fn corrupted_polarity_fails() {
    let p = plane("mutation-h:mu=0.75");
    let good = Polarity::catalog(&p, "rho-bar").unwrap();
    assert!(check_polarity(&good, 500, 1, 1e-9).passed);
    // negating one coordinate is not an anti-automorphism of the mutation
    let bad = Polarity::new(p, "corrupt", PolarityRule::ReesKappa, UnitalPredicate::RhoBar).unwrap();
    assert!(!check_polarity(&bad, 500, 1, 1e-9).passed);
    let lambda = Polarity::new(plane("classical-o"), "corrupt", PolarityRule::AntiAuto(Morphism::Conjugation), UnitalPredicate::Lambda).unwrap();
    assert!(!check_polarity(&lambda, 200, 1, 1e-9).passed);
}

#[test]
fn desargues_in_classical_planes() {
    for id in ["classical-r", "classical-c", "classical-h"] {
        let rep = configuration_test(&plane(id), ConfigKind::Desargues, None, 100, 3).unwrap();
        assert!(rep.max_discrepancy < 1e-9, "{id}: {}", rep.max_discrepancy);
        assert!(rep.skipped < 10);
    }
    let pappus = configuration_test(&plane("classical-c"), ConfigKind::Pappus, None, 100, 3).unwrap();
    assert!(pappus.max_discrepancy < 1e-9);
    let skew = configuration_test(&plane("classical-h"), ConfigKind::Pappus, None, 100, 3).unwrap();
    assert!(skew.max_discrepancy > 1e-3);
}

/// Exact Moulton plane over the rationals: lines `y = s x + t`, with the
/// slope multiplied by `k` where `s < 0` and `x < 0`.
mod exact {
    use super::*;

    pub type Q = BigRational;

    #[derive(Clone, Debug)]
    pub enum L {
        Slope(Q, Q),
        Vertical(Q),
    }

    pub fn q(v: f64) -> Q {
        Q::from_f64(v).unwrap()
    }

    pub fn eval(k: &Q, l: &L, x: &Q) -> Q {
        let L::Slope(s, t) = l else { panic!("vertical") };
        if s.is_negative() && x.is_negative() {
            k * s * x + t
        } else {
            s * x + t
        }
    }

    pub fn join(k: &Q, p: &(Q, Q), r: &(Q, Q)) -> L {
        if p.0 == r.0 {
            return L::Vertical(p.0.clone());
        }
        let (a, b) = if p.0 < r.0 { (p, r) } else { (r, p) };
        let straight = (&b.1 - &a.1) / (&b.0 - &a.0);
        let s = if !straight.is_negative() || !a.0.is_negative() {
            straight
        } else if b.0.is_negative() {
            straight / k
        } else {
            // a.0 < 0 <= b.0 and the line is bent at the y-axis
            (&b.1 - &a.1) / (&b.0 - k * &a.0)
        };
        let t = &a.1 - eval(k, &L::Slope(s.clone(), Q::zero()), &a.0);
        L::Slope(s, t)
    }

    pub fn meet(k: &Q, l: &L, m: &L) -> (Q, Q) {
        match (l, m) {
            (L::Vertical(c), other) | (other, L::Vertical(c)) => (c.clone(), eval(k, other, c)),
            (L::Slope(s, t), L::Slope(u, v)) => {
                // try both half planes
                for neg in [false, true] {
                    let fs = if neg && s.is_negative() { k * s } else { s.clone() };
                    let fu = if neg && u.is_negative() { k * u } else { u.clone() };
                    if fs == fu {
                        continue;
                    }
                    let x = (v - t) / (&fs - &fu);
                    if x.is_negative() == neg {
                        return (x.clone(), eval(k, l, &x));
                    }
                }
                panic!("no meet")
            }
        }
    }
}

#[test]
fn moulton_desargues_witness_is_exact() {
    use exact::*;
    let window = Region::Window { xmin: -2.0, xmax: 2.0, ymin: -2.0, ymax: 2.0 };
    let rep = configuration_test(&plane("moulton:k=2"), ConfigKind::Desargues, Some(window), 100, 5).unwrap();
    assert!(rep.max_discrepancy > DESARGUES_FAIL);
    let w = rep.witness.clone().unwrap();
    assert!((replay_configuration(&rep).unwrap() - w.discrepancy).abs() <= 1e-12);
    // recompute the configuration exactly from its defining points
    let k = q(2.0);
    let pts: Vec<(Q, Q)> = w
        .points
        .iter()
        .map(|p| {
            let (x, y) = p.affine().unwrap();
            (q(x.re()), q(y.re()))
        })
        .collect();
    let [_, a, b, c, a2, b2, c2] = [0, 1, 2, 3, 4, 5, 6].map(|i| pts[i].clone());
    let p = meet(&k, &join(&k, &a, &b), &join(&k, &a2, &b2));
    let qq = meet(&k, &join(&k, &a, &c), &join(&k, &a2, &c2));
    let bc = join(&k, &b, &c);
    let r = meet(&k, &bc, &join(&k, &b2, &c2));
    let r_star = meet(&k, &join(&k, &p, &qq), &bc);
    let dx = (&r.0 - &r_star.0).to_f64().unwrap();
    let dy = (&r.1 - &r_star.1).to_f64().unwrap();
    let exact = dx.hypot(dy);
    assert!((exact - w.discrepancy).abs() < 1e-9 * (1.0 + exact), "exact {exact} vs {}", w.discrepancy);
    assert!(exact > DESARGUES_FAIL);
}

#[test]
fn tschet_fails_desargues_in_every_disk() {
    let reports = sample_disks(&plane("tschet:r=2"), ConfigKind::Desargues, 20, 200, 11).unwrap();
    for rep in reports {
        assert!(rep.max_discrepancy > DESARGUES_FAIL, "{:?}: {}", rep.region, rep.max_discrepancy);
    }
}

#[test]
fn smoothness_examples() {
    let moulton = cs("moulton:k=2");
    let rep = smoothness_probe(&moulton, Locus::SlopeSign, 1).unwrap();
    let at = rep.probes.iter().find(|p| p.fixed == -1.0).unwrap();
    assert!((at.left + 2.0).abs() < 1e-6 && (at.right + 1.0).abs() < 1e-6);
    assert!((at.jump - 1.0).abs() < 1e-6);
    assert!(rep.jump_detected);
    let classical = smoothness_probe(&cs("classical-r"), Locus::SlopeSign, 1).unwrap();
    assert_eq!(classical.note, "smooth: no locus");
    assert!(!classical.jump_detected);
    let tschet = smoothness_probe(&cs("tschet:r=3"), Locus::SlopeSign, 1).unwrap();
    assert!(tschet.jump_detected);
    for p in tschet.probes.iter().filter(|p| p.fixed < 0.0) {
        assert!(p.jump > 0.2, "{p:?}");
    }
    // the dual glues along x = 0
    assert!(smoothness_probe(&cs("tschet-dual:r=3"), Locus::XSign, 1).unwrap().jump_detected);
}

#[test]
fn witnesses_replay_from_reports() {
    let rep = check_plane_axioms(&plane("tschet:r=3:boundary=0.1"), 2000, 9, 1e-8);
    for w in &rep.witnesses {
        let r = replay(&rep, w).unwrap();
        assert!(r == w.residual || (r - w.residual).abs() <= 1e-12);
    }
}
