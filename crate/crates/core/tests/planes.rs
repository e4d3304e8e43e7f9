use planelab::collineation::{motion_test, random_flag, unital_motion, verify_collineation, Collineation, SemifieldSigma};
use planelab::plane::{dualize, PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point, TschetInversion};
use planelab::polarity::Polarity;
use planelab::sampling::rng_for;
use planelab::structures::CoordinateStructure as CS;
use planelab::{Algebra, AlgebraElement as El, Morphism};

/// Independent Cayley-Dickson product on plain vectors, by recursion on the
/// halves: (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
fn cd_conj(v: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = v.iter().map(|x| -x).collect();
    w[0] = v[0];
    w
}

fn cd_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let sub = |u: Vec<f64>, v: Vec<f64>| u.iter().zip(&v).map(|(p, q)| p - q).collect::<Vec<_>>();
    let add = |u: Vec<f64>, v: Vec<f64>| u.iter().zip(&v).map(|(p, q)| p + q).collect::<Vec<_>>();
    let first = sub(cd_mul(a, c), cd_mul(&cd_conj(d), b));
    let second = add(cd_mul(d, a), cd_mul(b, &cd_conj(c)));
    [first, second].concat()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(p, q)| (p - q).abs() <= tol * (1.0 + q.abs()))
}

fn plane(id: &str) -> PlaneModel {
    id.parse().unwrap()
}

fn r(v: f64) -> El {
    El::real(Algebra::R, v)
}

#[test]
fn octonion_table_matches_oracle() {
    for i in 0..8 {
        for j in 0..8 {
            let got = El::basis(Algebra::O, i) * El::basis(Algebra::O, j);
            let want = cd_mul(El::basis(Algebra::O, i).coords(), El::basis(Algebra::O, j).coords());
            assert_eq!(got.coords(), &want[..], "e{i} e{j}");
        }
    }
    // quaternion units sit in the first half
    assert_eq!(El::quat(0.0, 1.0, 0.0, 0.0) * El::quat(0.0, 0.0, 1.0, 0.0), El::quat(0.0, 0.0, 0.0, 1.0));
}

#[test]
fn products_match_oracle_on_samples() {
    for alg in [Algebra::C, Algebra::H, Algebra::O] {
        for i in 0..200 {
            let mut rng = rng_for(5, i);
            let a = El::sample_normal(alg, &mut rng);
            let b = El::sample_normal(alg, &mut rng);
            assert!(close((a * b).coords(), &cd_mul(a.coords(), b.coords()), 1e-12));
        }
    }
}

#[test]
fn mutation_product_matches_oracle() {
    for (id, alg) in [("mutation-h:mu=0.75", Algebra::H), ("mutation-o:mu=0.75", Algebra::O)] {
        let cs = plane(id).structure().unwrap().clone();
        for i in 0..100 {
            let mut rng = rng_for(6, i);
            let c = El::sample_normal(alg, &mut rng);
            let z = El::sample_normal(alg, &mut rng);
            let (cz, zc) = (cd_mul(c.coords(), z.coords()), cd_mul(z.coords(), c.coords()));
            let want: Vec<f64> = cz.iter().zip(&zc).map(|(p, q)| 0.75 * p + 0.25 * q).collect();
            assert!(close(cs.multiply(&c, &z).coords(), &want, 1e-12));
        }
    }
}

#[test]
fn spin_product_example() {
    // j∘k = jk + 2r(s2 x3 - s3 x2) = i + 1 at r = 1/2
    let cs = plane("spin:r=0.5").structure().unwrap().clone();
    let p = cs.multiply(&El::quat(0.0, 0.0, 1.0, 0.0), &El::quat(0.0, 0.0, 0.0, 1.0));
    assert!(close(p.coords(), &[1.0, 1.0, 0.0, 0.0], 1e-15));
}

#[test]
fn tschet_examples() {
    let t = plane("tschet:r=3");
    let cs = t.structure().unwrap();
    assert_eq!(cs.ternary(&r(-1.0), &r(-1.0), &r(0.0)).re(), 1.0);
    assert_eq!(cs.add(&r(-1.0), &r(2.0)).re(), 1.0);
    let d = plane("tschet-dual:r=3");
    let ds = d.structure().unwrap();
    assert!((ds.add(&r(-1.0), &r(2.0)).re() - 7f64.cbrt()).abs() < 1e-12);
    assert!(t.incident(&Point::Affine(r(-1.0), r(1.0)), &Line::NonVertical(r(-1.0), r(0.0)), 1e-12));
    let p = t.meet(&Line::NonVertical(r(-1.0), r(1.0)), &Line::NonVertical(r(0.0), r(0.0))).unwrap();
    assert!(p.distance(&Point::Affine(r(1.0), r(0.0))) < 1e-9);
    assert_eq!(dualize(&t).unwrap(), d);
}

#[test]
fn tschet_dual_lines_obey_cubed_equation() {
    let d = plane("tschet-dual:r=3");
    for i in 0..500 {
        let mut rng = rng_for(7, i);
        let Line::NonVertical(s, t) = d.random_line(&mut rng) else { unreachable!() };
        let x = -d.random_scalar(&mut rng).re().abs() - 1e-3;
        let Some(Point::Affine(_, y)) = d.point_on(&Line::NonVertical(s, t), &r(x)) else { unreachable!() };
        let (s, t, y) = (s.re(), t.re(), y.re());
        let lhs = s.powi(3) * x.powi(3) + t.powi(3);
        assert!((lhs - y.powi(3)).abs() <= 1e-9 * (1.0 + lhs.abs()), "{s} {t} {x}");
    }
}

#[test]
fn tschet_inversion_preserves_incidence() {
    let src = plane("tschet-dual:r=3");
    let inv = TschetInversion::new(&src).unwrap();
    assert_eq!(inv.target(), &plane("tschet-dual:r=0.3333333333333333"));
    let mut worst = 0.0f64;
    for i in 0..10_000usize {
        let mut rng = rng_for(8, i as u64);
        let (p, l) = random_flag(&src, &mut rng, i);
        worst = worst.max(inv.target().incidence_residual(&inv.apply_point(&p), &inv.apply_line(&l)));
    }
    assert!(worst < 1e-8, "{worst}");
    assert!(TschetInversion::new(&plane("tschet:r=3")).is_err());
    // every signed power is odd, so r = 2 inverts to r = 1/2
    assert_eq!(TschetInversion::new(&plane("tschet-dual:r=2")).unwrap().target(), &plane("tschet-dual:r=0.5"));
}

#[test]
fn tschet_homology_example() {
    let t = plane("tschet:r=3");
    let h = Collineation::Scale { a: 1.0, b: 2.0 };
    assert_eq!(h.apply_point(&t, &Point::Affine(r(1.0), r(1.0))), Point::Affine(r(1.0), r(2.0)));
}

#[test]
fn tschet_reflection_in_homogeneous_form() {
    // (x, y, 1) <-> (1, y, x) is (x, y) -> (1/x, y/x)
    let s = plane("tschet-dual:r=3");
    let a = Collineation::Swap;
    assert_eq!(a.apply_point(&s, &Point::Affine(r(2.0), r(3.0))), Point::Affine(r(0.5), r(1.5)));
    assert!(verify_collineation(&s, &a, 2000, 9, 1e-8).unwrap().passed);
}

fn mutation_sigma(r: f64, s: f64, m: El, n: El) -> Collineation {
    let mut g = SemifieldSigma::identity(Algebra::H);
    g.gamma = Morphism::Identity;
    g.r = r;
    g.s = s;
    g.q = m.conj();
    g.m = m;
    g.n = n;
    Collineation::Semifield(g)
}

#[test]
fn mutation_sigma_examples() {
    let p = Polarity::catalog(&plane("mutation-h:mu=0.75"), "rho-bar").unwrap();
    let i = El::quat(0.0, 1.0, 0.0, 0.0);
    let sigma = mutation_sigma(1.0, 1.0, i, El::quat(0.5, 0.0, 1.0, 0.0));
    let zero = El::zero(Algebra::H);
    let img = sigma.apply_point(&p.plane, &Point::Affine(zero, zero));
    assert!(img.distance(&Point::Affine(i, El::quat(0.5, 0.0, 1.0, 0.0))) < 1e-15);

    let rep = motion_test(&p, &mutation_sigma(1.0, 1.0, i, El::quat(0.5, 0.0, 5.0, 0.0)), 100, 1).unwrap();
    assert!(rep.condition_membership && rep.commutes);
    let rep = motion_test(&p, &mutation_sigma(1.0, 2.0, zero, zero), 100, 1).unwrap();
    assert!(!rep.condition_membership && !rep.commutes);
}

#[test]
fn double_flag_example() {
    let p = Polarity::catalog(&plane("distorted-h:rho=quadmean"), "rho").unwrap();
    let k = El::quat(0.0, 0.0, 0.0, 1.0);
    let coll = Collineation::DoubleFlag { a: El::quat(0.0, 1.0, 0.0, 0.0), b: k.conj(), c: k, n: El::quat(0.0, 0.0, 1.0, 0.0) };
    let rep = motion_test(&p, &coll, 100, 2).unwrap();
    assert!(rep.condition_membership && rep.commutes);
}

#[test]
fn classical_unital_motion_example() {
    let p = Polarity::catalog(&plane("classical-h"), "rho-bar").unwrap();
    let m = unital_motion(&p, &El::real(Algebra::H, 1.0), &El::real(Algebra::H, 0.5)).unwrap();
    let zero = El::zero(Algebra::H);
    let img = m.apply_point(&p.plane, &Point::Affine(zero, zero));
    assert!(img.distance(&Point::Affine(El::real(Algebra::H, 1.0), El::real(Algebra::H, 0.5))) < 1e-15);
    assert!(unital_motion(&p, &El::real(Algebra::H, 1.0), &El::real(Algebra::H, 0.2)).is_err());
}

#[test]
fn structures_parse_and_validate() {
    for bad in ["mutation-h:mu=0.4", "rees:theta=4", "lenz5:alpha=2", "moulton:k=0.5", "spin:r=-1", "tschet:r=0"] {
        assert!(bad.parse::<PlaneModel>().is_err(), "{bad}");
    }
    assert!(matches!(plane("moulton:k=2").structure(), Some(CS::Moulton { .. })));
    assert_eq!(plane("moulton:k=2").to_string(), "moulton:k=2");
}
