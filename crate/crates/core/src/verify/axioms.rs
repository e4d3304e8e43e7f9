use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{run_suite, Outcome, Sampler, VerificationReport};
use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use crate::polarity::{Polarity, PolarityRule};
use crate::sampling::rng_for;
use crate::structures::CoordinateStructure as CS;

type El = AlgebraElement;

/// Lines whose meet or join lies further out are not scanned.
const SCAN_RANGE: f64 = 100.0;
const SCAN_POINTS: usize = 801;

fn flat(e: &[&El]) -> Vec<f64> {
    e.iter().flat_map(|v| v.coords().iter().copied()).collect()
}

fn point_data(ps: &[&Point]) -> Vec<f64> {
    ps.iter().flat_map(|p| p.flat().unwrap_or_default()).collect()
}

fn rel(a: &El, b: &El) -> f64 {
    a.dist(b) / (1.0 + a.norm().max(b.norm()))
}

/// Strict sign changes of `f` over a grid `tan(theta)` covering the line.
fn sign_changes(f: impl Fn(f64) -> f64) -> usize {
    let mut count = 0;
    let mut prev: Option<f64> = None;
    for k in 1..SCAN_POINTS {
        let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / SCAN_POINTS as f64;
        let v = f(theta.tan());
        if v == 0.0 {
            continue;
        }
        if let Some(p) = prev {
            if (p < 0.0) != (v < 0.0) {
                count += 1;
            }
        }
        prev = Some(v);
    }
    count
}

pub(crate) fn plane_sampler(plane: &PlaneModel, seed: u64) -> Sampler<'_> {
    let scan = plane.algebra().dim() == 1;
    Box::new(move |i| {
        let mut rng = rng_for(seed, i);
        let p = plane.random_point(&mut rng);
        let q = plane.random_point(&mut rng);
        let (l, m) = (plane.random_line(&mut rng), plane.random_line(&mut rng));
        let r = plane.random_point(&mut rng);
        let extra = plane.random_point(&mut rng);
        let mut out = Vec::new();

        // unique join
        let data = point_data(&[&p, &q]);
        match (plane.join(&p, &q), plane.join(&q, &p)) {
            (Ok(a), Ok(b)) => {
                let res = plane.incidence_residual(&p, &a).max(plane.incidence_residual(&q, &a));
                out.push(Outcome::new("join-incidence", res, data.clone()));
                out.push(Outcome::new("join-symmetry", a.distance(&b), data.clone()));
                if let (true, Line::NonVertical(s, _)) = (scan, a) {
                    if s.re().abs() < SCAN_RANGE {
                        let (x1, y1, x2, y2) = match (p, q) {
                            (Point::Affine(a, b), Point::Affine(c, d)) => (a, b, c, d),
                            _ => unreachable!("random points are affine"),
                        };
                        // lines through p, as a function of the slope, against q
                        let count = sign_changes(|s| {
                            let s = El::real(x1.algebra(), s);
                            match plane.solve_intercept(&s, &x1, &y1) {
                                Ok(t) => (plane.eval_line(&s, &t, &x2) - y2).re(),
                                Err(_) => f64::NAN,
                            }
                        });
                        out.push(Outcome::new("join-count", (count as f64 - 1.0).abs(), data.clone()));
                    }
                }
            }
            (Err(_), _) | (_, Err(_)) => out.push(Outcome::new("join-incidence", f64::INFINITY, data)),
        }

        // unique meet of lines with different slopes
        let ldata = [l, m].iter().flat_map(line_data).collect::<Vec<_>>();
        match (plane.meet(&l, &m), plane.meet(&m, &l)) {
            (Ok(a), Ok(b)) => {
                let res = plane.incidence_residual(&a, &l).max(plane.incidence_residual(&a, &m));
                out.push(Outcome::new("meet-incidence", res, ldata.clone()));
                out.push(Outcome::new("meet-symmetry", a.distance(&b), ldata.clone()));
                if let (true, Point::Affine(x, _), Line::NonVertical(s, t), Line::NonVertical(u, v)) = (scan, a, l, m) {
                    if x.re().abs() < SCAN_RANGE {
                        let count = sign_changes(|x| {
                            let x = El::real(s.algebra(), x);
                            (plane.eval_line(&s, &t, &x) - plane.eval_line(&u, &v, &x)).re()
                        });
                        out.push(Outcome::new("meet-count", (count as f64 - 1.0).abs(), ldata.clone()));
                    }
                }
            }
            _ => out.push(Outcome::new("meet-incidence", f64::INFINITY, ldata)),
        }

        // parallel through a point, disjoint from the line
        if let (Line::NonVertical(s, t), Point::Affine(x, y)) = (l, r) {
            let data = [line_data(&l), r.flat().unwrap_or_default()].concat();
            match plane.solve_intercept(&s, &x, &y) {
                Ok(t2) => {
                    let par = Line::NonVertical(s, t2);
                    out.push(Outcome::new("parallel-incidence", plane.incidence_residual(&r, &par), data.clone()));
                    if scan && (t2 - t).norm() > 1e-6 {
                        let count = sign_changes(|x| {
                            let x = El::real(s.algebra(), x);
                            (plane.eval_line(&s, &t, &x) - plane.eval_line(&s, &t2, &x)).re()
                        });
                        out.push(Outcome::new("parallel-disjoint", count as f64, data));
                    }
                }
                Err(_) => out.push(Outcome::new("parallel-incidence", f64::INFINITY, data)),
            }
        }

        // a quadrangle: no three of four random points collinear
        let pts = [p, q, r, extra];
        let mut collinear = 0.0;
        for a in 0..4 {
            for b in a + 1..4 {
                for c in 0..4 {
                    if c == a || c == b {
                        continue;
                    }
                    match plane.join(&pts[a], &pts[b]) {
                        Ok(j) if plane.incidence_residual(&pts[c], &j) > 1e-9 => {}
                        _ => collinear = 1.0,
                    }
                }
            }
        }
        out.push(Outcome::new("quadrangle", collinear, point_data(&[&p, &q, &r, &extra])));
        Some(out)
    })
}

fn line_data(l: &Line) -> Vec<f64> {
    match l {
        Line::NonVertical(s, t) => flat(&[s, t]),
        Line::Vertical(c) => flat(&[c]),
        Line::AtInfinity => vec![],
    }
}

/// Join/meet existence and uniqueness, parallels and a quadrangle on `n` samples.
pub fn check_plane_axioms(plane: &PlaneModel, n: usize, seed: u64, tol: f64) -> VerificationReport {
    run_suite("plane-axioms".into(), plane.to_string(), seed, tol, n, &plane_sampler(plane, seed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraClass {
    Cartesian,
    Quasifield,
    Semifield,
    Nearfield,
    Skewfield,
}

impl AlgebraClass {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::Cartesian => "cartesian",
            AlgebraClass::Quasifield => "quasifield",
            AlgebraClass::Semifield => "semifield",
            AlgebraClass::Nearfield => "nearfield",
            AlgebraClass::Skewfield => "skewfield",
        }
    }

    fn left_distributive(self) -> bool {
        self != AlgebraClass::Cartesian
    }

    fn right_distributive(self) -> bool {
        matches!(self, AlgebraClass::Semifield | AlgebraClass::Skewfield)
    }

    fn associative(self) -> bool {
        matches!(self, AlgebraClass::Nearfield | AlgebraClass::Skewfield)
    }
}

impl FromStr for AlgebraClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cartesian" => AlgebraClass::Cartesian,
            "quasifield" => AlgebraClass::Quasifield,
            "semifield" => AlgebraClass::Semifield,
            "nearfield" => AlgebraClass::Nearfield,
            "skewfield" => AlgebraClass::Skewfield,
            other => return Err(Error::Parse(format!("unknown algebra class {other:?}"))),
        })
    }
}

pub(crate) fn algebra_sampler(cs: CS, class: AlgebraClass, seed: u64) -> Sampler<'static> {
    Box::new(move |i| {
        let mut rng = rng_for(seed, i);
        let alg = cs.algebra();
        let mut draw = || El::sample_normal(alg, &mut rng);
        let (s, x, y, t) = (draw(), draw(), draw(), draw());
        let data = flat(&[&s, &x, &y, &t]);
        let (zero, one) = (cs.zero(), cs.one());
        let m = |a: &El, b: &El| cs.multiply(a, b);
        let mut out = vec![
            // (H, +) is the vector group and tau(s, x, t) = s∘x + t
            Outcome::new("addition", rel(&cs.add(&x, &t), &(x + t)), data.clone()),
            Outcome::new("linearity", rel(&cs.ternary(&s, &x, &t), &(m(&s, &x) + t)), data.clone()),
            Outcome::new("identity", rel(&m(&one, &x), &x).max(rel(&m(&x, &one), &x)), data.clone()),
            Outcome::new("zero", m(&zero, &x).norm().max(m(&x, &zero).norm()), data.clone()),
        ];
        let w = m(&s, &x);
        let solve_s = cs.solve_slope(&x, &w).map(|s2| rel(&m(&s2, &x), &w)).unwrap_or(f64::INFINITY);
        let solve_x = cs.solve_point(&s, &w).map(|x2| rel(&m(&s, &x2), &w)).unwrap_or(f64::INFINITY);
        out.push(Outcome::new("solvability", solve_s.max(solve_x), data.clone()));
        if class.left_distributive() {
            out.push(Outcome::new("left-distributive", rel(&m(&s, &(x + y)), &(m(&s, &x) + m(&s, &y))), data.clone()));
        }
        if class.right_distributive() {
            out.push(Outcome::new("right-distributive", rel(&m(&(s + t), &x), &(m(&s, &x) + m(&t, &x))), data.clone()));
        }
        if class.associative() {
            out.push(Outcome::new("associative", rel(&m(&m(&s, &x), &y), &m(&s, &m(&x, &y))), data));
        }
        Some(out)
    })
}

/// Test the laws of `class` on `n` samples of `cs`.
pub fn check_algebra_axioms(cs: &CS, class: AlgebraClass, n: usize, seed: u64, tol: f64) -> VerificationReport {
    run_suite(format!("algebra:{}", class.name()), cs.to_string(), seed, tol, n, &algebra_sampler(cs.clone(), class, seed))
}

pub(crate) fn polarity_sampler(pol: Polarity, seed: u64) -> Sampler<'static> {
    Box::new(move |i| {
        let plane = &pol.plane;
        let mut rng = rng_for(seed, i);
        let p = plane.random_point(&mut rng);
        let l = plane.random_line(&mut rng);
        let Point::Affine(x, _) = plane.random_point(&mut rng) else { unreachable!() };
        let data = [p.flat().unwrap_or_default(), line_data(&l)].concat();
        let mut out = vec![
            Outcome::new("involution-points", pol.polar_line(&pol.polar_point(&p)).distance(&p), data.clone()),
            Outcome::new("involution-lines", pol.polar_point(&pol.polar_line(&l)).distance(&l), data.clone()),
        ];
        // q on the polar of p forces p on the polar of q
        let polar = pol.polar_point(&p);
        let q = match polar {
            Line::NonVertical(..) => plane.point_on(&polar, &x),
            Line::Vertical(_) => Some(Point::Infinity),
            Line::AtInfinity => None,
        };
        if let Some(q) = q {
            out.push(Outcome::new("duality", plane.incidence_residual(&p, &pol.polar_point(&q)), data.clone()));
        }
        if pol.rule != PolarityRule::Elliptic {
            match pol.sample_unital_point(&mut rng) {
                Ok(u) => {
                    let (a, b) = u.affine().expect("affine");
                    out.push(Outcome::new("predicate", pol.predicate_residual(&a, &b), u.flat().unwrap_or_default()));
                }
                Err(_) => out.push(Outcome::new("predicate", f64::INFINITY, data.clone())),
            }
            let agree = pol.is_absolute(&p, 1e-9) == (pol.absolute_residual(&p) < 1e-9);
            out.push(Outcome::new("predicate-agreement", if agree { 0.0 } else { 1.0 }, data));
        }
        Some(out)
    })
}

/// Involution, duality law and the closed-form absolute-point predicate.
pub fn check_polarity(pol: &Polarity, n: usize, seed: u64, tol: f64) -> VerificationReport {
    run_suite(format!("polarity:{}", pol.name), pol.plane.to_string(), seed, tol, n, &polarity_sampler(pol.clone(), seed))
}
