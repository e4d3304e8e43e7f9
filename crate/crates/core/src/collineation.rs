//! Collineation families, incidence checks and motion conditions.

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::morphism::{Morphism, Variance};
use crate::numeric::{jacobian, numerical_rank};
use crate::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use crate::polarity::{Polarity, PolarityRule};
use crate::sampling::{coin, rng_for, SampleRng};
use crate::structures::CoordinateStructure as CS;

type El = AlgebraElement;

/// `(a, b) -> (g(a) s + m, r g(b) s + q∘(g(a) s) + n)` on a semifield plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemifieldSigma {
    pub gamma: Morphism,
    pub r: f64,
    pub s: f64,
    pub q: El,
    pub m: El,
    pub n: El,
    /// Replaces `q` in the line action; only for broken fixtures.
    pub line_q: Option<El>,
}

impl SemifieldSigma {
    pub fn identity(alg: Algebra) -> SemifieldSigma {
        let z = El::zero(alg);
        SemifieldSigma { gamma: Morphism::Identity, r: 1.0, s: 1.0, q: z, m: z, n: z, line_q: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Collineation {
    Identity,
    Semifield(SemifieldSigma),
    /// Distorted quaternions: `(x, y) -> (a x c, b y c + n)` with unit `a, b, c`.
    DoubleFlag { a: El, b: El, c: El, n: El },
    /// Spin planes: `(x, y) -> (c^-1 x a, conj(a)∘(y a d))`, `a` unit, `c` complex, `d` real.
    SpinNabla { a: El, c: El, d: f64 },
    /// `(x, y) -> (x + m, y + n)` on planes whose product is additive in `x`.
    Translation { m: El, n: El },
    /// `(x, y) -> (a x, b y)` on the real planes with a multiplicative `rho`.
    Scale { a: f64, b: f64 },
    /// `(x, y, z) <-> (z, y, x)` in homogeneous coordinates.
    Swap,
    /// Shift-plane translation `z -> z + (dx, dy)`.
    Shift { dx: El, dy: El },
    /// Apply the maps in order.
    Compose(Vec<Collineation>),
}

fn real(v: f64) -> El {
    El::real(Algebra::R, v)
}

fn product(plane: &PlaneModel, a: &El, b: &El) -> El {
    match plane {
        PlaneModel::Ternary(cs) => cs.multiply(a, b),
        PlaneModel::Shift(_) => *a * *b,
    }
}

impl Collineation {
    /// Check the parameters against the family's domain on `plane`.
    pub fn validate(&self, plane: &PlaneModel) -> Result<()> {
        let alg = plane.algebra();
        let unit = |e: &El, what: &str| {
            if (e.norm() - 1.0).abs() > 1e-9 {
                Err(Error::Parameter(format!("{what} must be a unit")))
            } else {
                Ok(())
            }
        };
        let cs = plane.structure();
        match self {
            Collineation::Identity => Ok(()),
            Collineation::Semifield(p) => {
                let ok = matches!(
                    cs,
                    Some(CS::Classical(_) | CS::MutationH { .. } | CS::MutationO { .. } | CS::Rees { .. } | CS::Lenz5 { .. } | CS::Spin { .. })
                );
                if !ok {
                    return Err(Error::Unsupported(format!("semifield maps need a semifield plane, got {plane}")));
                }
                if p.r == 0.0 || p.s == 0.0 {
                    return Err(Error::Parameter("r and s must be nonzero".into()));
                }
                if p.gamma.variance() != Variance::Automorphism {
                    return Err(Error::Parameter("gamma must be an automorphism".into()));
                }
                p.gamma.validate(alg)
            }
            Collineation::DoubleFlag { a, b, c, .. } => {
                if !matches!(cs, Some(CS::DistortedH(_))) {
                    return Err(Error::Unsupported("double-flag maps act on distorted quaternions".into()));
                }
                unit(a, "a")?;
                unit(b, "b")?;
                unit(c, "c")
            }
            Collineation::SpinNabla { a, c, d } => {
                if !matches!(cs, Some(CS::Spin { .. })) {
                    return Err(Error::Unsupported("spin maps act on spin planes".into()));
                }
                unit(a, "a")?;
                if c[2] != 0.0 || c[3] != 0.0 || c.is_zero() || *d == 0.0 {
                    return Err(Error::Parameter("c must be a nonzero complex number and d nonzero".into()));
                }
                Ok(())
            }
            Collineation::Translation { .. } => match cs {
                Some(cs) if cs.linear_in_x() => Ok(()),
                _ => Err(Error::Unsupported(format!("translations need a product additive in x, got {plane}"))),
            },
            Collineation::Scale { a, b } => match cs {
                Some(CS::Tschet { rho, boundary }) if rho.is_multiplicative() && *boundary == 0.0 => {
                    if *a > 0.0 && *b > 0.0 {
                        Ok(())
                    } else {
                        Err(Error::Parameter("tschet scalings need a, b > 0".into()))
                    }
                }
                Some(CS::TschetDual { rho }) if rho.is_multiplicative() => {
                    if *a > 0.0 && *b != 0.0 {
                        Ok(())
                    } else {
                        Err(Error::Parameter("need a > 0 and b != 0".into()))
                    }
                }
                Some(CS::Moulton { .. }) | Some(CS::Classical(Algebra::R)) => {
                    if *a > 0.0 && *b > 0.0 {
                        Ok(())
                    } else {
                        Err(Error::Parameter("need a, b > 0".into()))
                    }
                }
                _ => Err(Error::Unsupported(format!("no scaling family on {plane}"))),
            },
            Collineation::Swap => match cs {
                Some(CS::TschetDual { rho }) if rho.is_multiplicative() => Ok(()),
                Some(CS::Classical(Algebra::R)) => Ok(()),
                _ => Err(Error::Unsupported(format!("the swap is not a collineation of {plane}"))),
            },
            Collineation::Shift { .. } => match plane {
                PlaneModel::Shift(_) => Ok(()),
                _ => Err(Error::Unsupported("shifts act on shift planes".into())),
            },
            Collineation::Compose(list) => list.iter().try_for_each(|c| c.validate(plane)),
        }
    }

    pub fn apply_point(&self, plane: &PlaneModel, p: &Point) -> Point {
        match self {
            Collineation::Identity => *p,
            Collineation::Semifield(g) => match p {
                Point::Affine(a, b) => {
                    let ga = g.gamma.apply(a) * g.s;
                    let y = g.gamma.apply(b) * (g.r * g.s) + product(plane, &g.q, &ga) + g.n;
                    Point::Affine(ga + g.m, y)
                }
                Point::Slope(c) => Point::Slope(g.gamma.apply(c) * g.r + g.q),
                Point::Infinity => Point::Infinity,
            },
            Collineation::DoubleFlag { a, b, c, n } => match p {
                Point::Affine(x, y) => Point::Affine(*a * *x * *c, *b * *y * *c + *n),
                Point::Slope(s) => Point::Slope(*b * *s * a.conj()),
                Point::Infinity => Point::Infinity,
            },
            Collineation::SpinNabla { a, c, d } => match p {
                Point::Affine(x, y) => {
                    let ci = c.inverse().expect("validated");
                    Point::Affine(ci * *x * *a, product(plane, &a.conj(), &(*y * *a * *d)))
                }
                Point::Slope(s) => Point::Slope(a.conj() * *s * *c * *d),
                Point::Infinity => Point::Infinity,
            },
            Collineation::Translation { m, n } => match p {
                Point::Affine(x, y) => Point::Affine(*x + *m, *y + *n),
                other => *other,
            },
            Collineation::Scale { a, b } => match p {
                Point::Affine(x, y) => Point::Affine(*x * *a, *y * *b),
                Point::Slope(s) => Point::Slope(*s * (b / a)),
                Point::Infinity => Point::Infinity,
            },
            Collineation::Swap => match p {
                Point::Affine(x, y) if x.re() == 0.0 => Point::Slope(*y),
                Point::Affine(x, y) => Point::Affine(real(1.0 / x.re()), real(y.re() / x.re())),
                Point::Slope(s) => Point::Affine(real(0.0), *s),
                Point::Infinity => Point::Infinity,
            },
            Collineation::Shift { dx, dy } => match p {
                Point::Affine(x, y) => Point::Affine(*x + *dx, *y + *dy),
                Point::Slope(a) => Point::Slope(*a + *dx),
                Point::Infinity => Point::Infinity,
            },
            Collineation::Compose(list) => list.iter().fold(*p, |q, c| c.apply_point(plane, &q)),
        }
    }

    pub fn apply_line(&self, plane: &PlaneModel, l: &Line) -> Line {
        match self {
            Collineation::Identity => *l,
            Collineation::Semifield(g) => match l {
                Line::NonVertical(c, d) => {
                    let q = g.line_q.unwrap_or(g.q);
                    let slope = g.gamma.apply(c) * g.r + q;
                    let t = g.gamma.apply(d) * (g.r * g.s) - product(plane, &slope, &g.m) + g.n;
                    Line::NonVertical(slope, t)
                }
                Line::Vertical(c) => Line::Vertical(g.gamma.apply(c) * g.s + g.m),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::DoubleFlag { a, b, c, n } => match l {
                Line::NonVertical(s, t) => Line::NonVertical(*b * *s * a.conj(), *b * *t * *c + *n),
                Line::Vertical(v) => Line::Vertical(*a * *v * *c),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::SpinNabla { a, c, d } => match l {
                Line::NonVertical(s, t) => {
                    Line::NonVertical(a.conj() * *s * *c * *d, product(plane, &a.conj(), &(*t * *a * *d)))
                }
                Line::Vertical(v) => Line::Vertical(c.inverse().expect("validated") * *v * *a),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::Translation { m, n } => match l {
                Line::NonVertical(s, t) => {
                    let cs = plane.structure().expect("validated");
                    Line::NonVertical(*s, *t + *n - cs.multiply(s, m))
                }
                Line::Vertical(c) => Line::Vertical(*c + *m),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::Scale { a, b } => match l {
                Line::NonVertical(s, t) => Line::NonVertical(*s * (b / a), *t * *b),
                Line::Vertical(c) => Line::Vertical(*c * *a),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::Swap => match l {
                Line::NonVertical(s, t) => Line::NonVertical(*t, *s),
                Line::Vertical(c) if c.re() == 0.0 => Line::AtInfinity,
                Line::Vertical(c) => Line::Vertical(real(1.0 / c.re())),
                Line::AtInfinity => Line::Vertical(real(0.0)),
            },
            Collineation::Shift { dx, dy } => match l {
                Line::NonVertical(a, b) => Line::NonVertical(*a + *dx, *b + *dy),
                Line::Vertical(c) => Line::Vertical(*c + *dx),
                Line::AtInfinity => Line::AtInfinity,
            },
            Collineation::Compose(list) => list.iter().fold(*l, |m, c| c.apply_line(plane, &m)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollineationReport {
    pub samples: usize,
    pub max_residual: f64,
    pub passed: bool,
    /// Sample index and the incident pair whose images are not incident.
    pub witness: Option<(usize, Point, Line)>,
}

/// A random incident point-line pair; ideal cases are mixed in.
pub fn random_flag(plane: &PlaneModel, rng: &mut SampleRng, index: usize) -> (Point, Line) {
    let p = plane.random_point(rng);
    let Point::Affine(x, _) = p else { unreachable!("random points are affine") };
    match index % 10 {
        0 => (p, Line::Vertical(x)),
        1 => {
            let Line::NonVertical(s, t) = plane.random_line(rng) else { unreachable!() };
            (Point::Slope(s), Line::NonVertical(s, t))
        }
        2 => (Point::Infinity, Line::Vertical(x)),
        3 => {
            let Line::NonVertical(s, _) = plane.random_line(rng) else { unreachable!() };
            (Point::Slope(s), Line::AtInfinity)
        }
        _ => {
            let l = plane.random_line(rng);
            (plane.point_on(&l, &x).expect("non-vertical"), l)
        }
    }
}

/// Check that incident pairs stay incident under `coll`.
pub fn verify_collineation(plane: &PlaneModel, coll: &Collineation, n: usize, seed: u64, tol: f64) -> Result<CollineationReport> {
    coll.validate(plane)?;
    let mut max_residual = 0.0f64;
    let mut witness = None;
    for i in 0..n {
        let mut rng = rng_for(seed, i as u64);
        let (p, l) = random_flag(plane, &mut rng, i);
        let r = plane.incidence_residual(&coll.apply_point(plane, &p), &coll.apply_line(plane, &l));
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if r > tol && witness.is_none() {
            witness = Some((i, p, l));
        }
        max_residual = max_residual.max(r);
    }
    Ok(CollineationReport { samples: n, max_residual, passed: max_residual <= tol, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct MotionReport {
    /// The closed-form membership conditions.
    pub condition_membership: bool,
    /// Whether the map commutes with the polarity on the samples.
    pub commutes: bool,
    pub max_commutator: f64,
}

/// Compare the closed-form motion conditions with sampled commutation.
pub fn motion_test(pol: &Polarity, coll: &Collineation, n: usize, seed: u64) -> Result<MotionReport> {
    let plane = &pol.plane;
    coll.validate(plane)?;
    let condition_membership = membership(pol, coll)?;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut rng = rng_for(seed, i as u64);
        let (p, l) = random_flag(plane, &mut rng, i);
        let a = pol.polar_point(&coll.apply_point(plane, &p));
        let b = coll.apply_line(plane, &pol.polar_point(&p));
        let c = pol.polar_line(&coll.apply_line(plane, &l));
        let d = coll.apply_point(plane, &pol.polar_line(&l));
        worst = worst.max(a.distance(&b)).max(c.distance(&d));
    }
    Ok(MotionReport { condition_membership, commutes: worst <= 1e-8, max_commutator: worst })
}

fn close(a: &El, b: &El) -> bool {
    a.dist(b) <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

fn close_r(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// The closed-form conditions for `coll` to commute with `pol`.
pub fn membership(pol: &Polarity, coll: &Collineation) -> Result<bool> {
    let plane = &pol.plane;
    let unsupported = || Error::Unsupported(format!("no closed-form motion conditions for {} on {}", pol.name, plane));
    match (plane.structure(), pol.name.as_str(), coll) {
        (_, _, Collineation::Identity) => Ok(true),
        (Some(CS::MutationH { .. } | CS::Classical(Algebra::H)), "rho-bar", Collineation::Semifield(g)) => {
            let (Morphism::Inner(_) | Morphism::Identity) = g.gamma else { return Err(unsupported()) };
            Ok(g.line_q.is_none() && close_r(g.r, g.s) && close(&g.q, &g.m.conj()) && close_r(g.m.norm_sq(), 2.0 * g.n.re()))
        }
        (Some(CS::MutationH { .. } | CS::Classical(Algebra::H)), "pi", Collineation::Semifield(g)) => {
            let h = match g.gamma {
                Morphism::Inner(h) => h,
                Morphism::Identity => El::one(Algebra::H),
                _ => return Err(unsupported()),
            };
            let in_c = h[2].abs() < 1e-9 && h[3].abs() < 1e-9;
            let perp_c = h[0].abs() < 1e-9 && h[1].abs() < 1e-9;
            let i = El::basis(Algebra::H, 1);
            let mi = Morphism::TwistedConj(i).apply(&g.m);
            let ni = Morphism::TwistedConj(i).apply(&g.n);
            let lhs = product(plane, &mi, &g.m);
            Ok(g.line_q.is_none() && (in_c || perp_c) && close_r(g.r, g.s) && close(&g.q, &mi) && close(&lhs, &(g.n + ni)))
        }
        (Some(CS::MutationO { .. } | CS::Classical(Algebra::O)), "rho-bar", Collineation::Semifield(g)) => {
            Ok(g.line_q.is_none() && close_r(g.r, g.s) && close(&g.q, &g.m.conj()) && close_r(g.m.norm_sq(), 2.0 * g.n.re()))
        }
        (Some(CS::MutationO { .. } | CS::Classical(Algebra::O)), "pi", Collineation::Semifield(g)) => {
            if !preserves_h(&g.gamma) {
                return Ok(false);
            }
            let ml = Morphism::Lambda.apply(&g.m);
            let nl = Morphism::Lambda.apply(&g.n);
            let lhs = product(plane, &ml, &g.m);
            Ok(g.line_q.is_none() && close_r(g.r, g.s) && close(&g.q, &ml) && close(&(g.n + nl), &lhs))
        }
        (Some(CS::DistortedH(_)), "rho", Collineation::DoubleFlag { b, c, n, .. }) => Ok(close(b, &c.conj()) && n.re().abs() <= 1e-9),
        (Some(CS::DistortedH(_)), "kappa", Collineation::DoubleFlag { a, b, c, n }) => {
            // c k = e k conj(b), k a = e a k, conj(n) k = conj(k) n for one sign e
            let k = El::basis(Algebra::H, 3);
            let sign_ok = |e: f64| close(&(*c * k), &(k * b.conj() * e)) && close(&(k * *a), &(*a * k * e));
            Ok((sign_ok(1.0) || sign_ok(-1.0)) && close(&(n.conj() * k), &(k.conj() * *n)))
        }
        (Some(CS::Spin { .. }), "kappa-hat" | "pi", Collineation::SpinNabla { .. }) => spin_membership(pol, coll),
        _ => Err(unsupported()),
    }
}

/// `H^gamma = H` for the implemented octonion automorphisms.
fn preserves_h(gamma: &Morphism) -> bool {
    (0..4).all(|k| {
        let img = gamma.apply(&El::basis(Algebra::O, k));
        img.coords()[4..].iter().all(|v| v.abs() < 1e-12)
    })
}

/// Spin-plane stabilizer maps: commutation reduces to conditions on the
/// first coordinate and on `d`, checked on the basis.
fn spin_membership(pol: &Polarity, coll: &Collineation) -> Result<bool> {
    let Collineation::SpinNabla { a, c, d } = coll else { unreachable!() };
    let plane = &pol.plane;
    let (ci, ca) = (c.inverse()?, a.conj());
    // first coordinates: phi(c^-1 x a) = conj(a) phi(x) c d for all x
    let first = (0..4).all(|k| {
        let x = El::basis(Algebra::H, k);
        close(&pol.phi(&(ci * x * *a)), &(ca * pol.phi(&x) * *c * *d))
    });
    // second coordinates: psi(conj(a)∘(y a d)) = conj(a)∘(psi(y) a d)
    let second = (0..4).all(|k| {
        let y = El::basis(Algebra::H, k);
        let lhs = pol.psi(&product(plane, &ca, &(y * *a * *d)));
        let rhs = product(plane, &ca, &(pol.psi(&y) * *a * *d));
        close(&lhs, &rhs)
    });
    Ok(first && second)
}

/// The unital motion `(a, b) -> (a + m, b + m^i∘a + n)` for an anti-automorphism
/// polarity on a semifield plane; needs `m^i∘m = n + n^i`.
pub fn unital_motion(pol: &Polarity, m: &El, n: &El) -> Result<Collineation> {
    if !matches!(pol.rule, PolarityRule::AntiAuto(_) | PolarityRule::ReesKappa) {
        return Err(Error::Unsupported(format!("no unital motions for {}", pol.name)));
    }
    let plane = &pol.plane;
    let mi = pol.phi(m);
    let lhs = product(plane, &mi, m);
    let rhs = *n + pol.phi(n);
    let residual = lhs.dist(&rhs);
    if residual > 1e-9 * (1.0 + lhs.norm()) {
        return Err(Error::Parameter(format!("constraint m^i∘m = n + n^i violated by {residual:e}")));
    }
    let mut g = SemifieldSigma::identity(plane.algebra());
    g.q = mi;
    g.m = *m;
    g.n = *n;
    let c = Collineation::Semifield(g);
    c.validate(plane)?;
    Ok(c)
}

/// The unital motion taking the origin to the affine absolute point `u`.
pub fn recover_unital_motion(pol: &Polarity, u: &Point) -> Result<Collineation> {
    let (m, n) = u.affine().ok_or_else(|| Error::Parameter("target must be affine".into()))?;
    unital_motion(pol, &m, &n)
}

/// Constraint residual `m^i∘m - n - n^i` of a unital motion.
pub fn unital_constraint_residual(pol: &Polarity, m: &El, n: &El) -> f64 {
    let mi = pol.phi(m);
    product(&pol.plane, &mi, m).dist(&(*n + pol.phi(n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    Translation,
    Reflection,
    Homology,
    Shift,
}

/// Build a special collineation; `params` are read per kind:
/// translation `[m, n]`, homology `[a, b]` (real), shift `[dx, dy]`.
pub fn make_special(plane: &PlaneModel, kind: SpecialKind, params: &[El]) -> Result<Collineation> {
    let need = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::Parameter(format!("{kind:?} needs {k} parameters, got {}", params.len())))
        }
    };
    let coll = match kind {
        SpecialKind::Translation => {
            need(2)?;
            Collineation::Translation { m: params[0], n: params[1] }
        }
        SpecialKind::Homology => {
            need(2)?;
            Collineation::Scale { a: params[0].re(), b: params[1].re() }
        }
        SpecialKind::Reflection => {
            need(0)?;
            Collineation::Swap
        }
        SpecialKind::Shift => {
            need(2)?;
            Collineation::Shift { dx: params[0], dy: params[1] }
        }
    };
    coll.validate(plane)?;
    Ok(coll)
}

/// Exponential chart of the unit quaternions at 1.
pub fn quat_exp(v: &[f64]) -> El {
    let t = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if t == 0.0 {
        return El::one(Algebra::H);
    }
    let f = t.sin() / t;
    El::quat(t.cos(), f * v[0], f * v[1], f * v[2])
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionAudit {
    pub family: String,
    pub parameters: usize,
    pub constraint_rank: usize,
    pub dimension: usize,
}

/// Count the free dimensions of a motion family of a mutation plane.
///
/// Parameters are `h` (exponential chart), `r`, `s`, `q`, `m`, `n`; the rank of
/// the constraint map is taken at a random member.
pub fn dimension_audit(mu: f64, family: &str, seed: u64) -> Result<DimensionAudit> {
    let plane = PlaneModel::Ternary(CS::MutationH { mu });
    let cs = plane.structure().expect("ternary").clone();
    let h4 = |v: &[f64]| El::from_slice(Algebra::H, v).expect("four coordinates");
    let i = El::basis(Algebra::H, 1);
    let iota = |z: &El| Morphism::TwistedConj(i).apply(z);
    let mut rng = rng_for(seed, 0);
    let mut p = vec![0.0; 17];
    for v in p.iter_mut() {
        *v = crate::sampling::normal(&mut rng);
    }
    // place the sample on the family
    let m = h4(&p[9..13]);
    p[4] = p[3];
    let constraints: Box<dyn Fn(&[f64]) -> Vec<f64>> = match family {
        "rho-bar" => {
            let q = m.conj();
            p[5..9].copy_from_slice(q.coords());
            p[13] = 0.5 * m.norm_sq();
            Box::new(move |v: &[f64]| {
                let (q, m, n) = (h4(&v[5..9]), h4(&v[9..13]), h4(&v[13..17]));
                let mut out = vec![v[3] - v[4]];
                out.extend_from_slice((q - m.conj()).coords());
                out.push(m.norm_sq() - 2.0 * n.re());
                out
            })
        }
        "pi-c" | "pi-perp" => {
            let perp = family == "pi-perp";
            if perp {
                let ang = p[1].atan2(p[2]);
                p[0] = 0.0;
                p[1] = std::f64::consts::FRAC_PI_2 * ang.sin();
                p[2] = std::f64::consts::FRAC_PI_2 * ang.cos();
            } else {
                p[1] = 0.0;
                p[2] = 0.0;
            }
            let mi = iota(&m);
            p[5..9].copy_from_slice(mi.coords());
            let w = cs.multiply(&mi, &m);
            let z = h4(&p[13..17]);
            let n = w * 0.5 + (z - iota(&z)) * 0.5;
            p[13..17].copy_from_slice(n.coords());
            Box::new(move |v: &[f64]| {
                let h = quat_exp(&v[0..3]);
                let (q, m, n) = (h4(&v[5..9]), h4(&v[9..13]), h4(&v[13..17]));
                let mut out = if perp { vec![h[0], h[1]] } else { vec![h[2], h[3]] };
                out.push(v[3] - v[4]);
                out.extend_from_slice((q - iota(&m)).coords());
                out.extend_from_slice((cs.multiply(&iota(&m), &m) - n - iota(&n)).coords());
                out
            })
        }
        other => return Err(Error::NotFound(format!("no audit for family {other:?}"))),
    };
    let value = constraints(&p);
    if value.iter().any(|v| v.abs() > 1e-9) {
        return Err(Error::Solver { context: "audit base point off the family".into(), best_residual: value.iter().fold(0.0, |a, b| a.max(b.abs())) });
    }
    let rank = numerical_rank(&jacobian(&constraints, &p, 1e-6), 1e-6);
    Ok(DimensionAudit { family: family.to_string(), parameters: 17, constraint_rank: rank, dimension: 17 - rank })
}

/// Random mutation-plane map that is a motion of `pol` when `motion` is set,
/// and breaks exactly one condition otherwise.
pub fn random_semifield_draw(pol: &Polarity, rng: &mut SampleRng, motion: bool) -> Collineation {
    let alg = pol.algebra();
    let plane = &pol.plane;
    let gamma = random_gamma(pol, rng, motion);
    let m = El::sample_normal(alg, rng);
    let r = crate::sampling::uniform(rng, 0.5, 2.0) * if coin(rng) { 1.0 } else { -1.0 };
    let mi = pol.phi(&m);
    let w = product(plane, &mi, &m);
    let z = El::sample_normal(alg, rng);
    let n = w * 0.5 + (z - pol.phi(&z)) * 0.5;
    let mut g = SemifieldSigma { gamma, r, s: r, q: mi, m, n, line_q: None };
    if !motion {
        match crate::sampling::uniform(rng, 0.0, 3.0) as usize {
            0 => g.s = r * crate::sampling::uniform(rng, 1.2, 2.0),
            1 => g.q += El::sample_normal(alg, rng) * 0.5,
            _ => g.n += El::real(alg, crate::sampling::uniform(rng, 0.2, 1.0)),
        }
    }
    Collineation::Semifield(g)
}

fn random_gamma(pol: &Polarity, rng: &mut SampleRng, motion: bool) -> Morphism {
    let alg = pol.algebra();
    match alg {
        Algebra::H => {
            let h = if pol.name == "pi" && motion {
                // h in C or h orthogonal to C
                let t = crate::sampling::uniform(rng, 0.0, std::f64::consts::TAU);
                if coin(rng) {
                    El::quat(t.cos(), t.sin(), 0.0, 0.0)
                } else {
                    El::quat(0.0, 0.0, t.cos(), t.sin())
                }
            } else {
                El::sample_unit(Algebra::H, rng)
            };
            Morphism::Inner(h)
        }
        Algebra::O => match crate::sampling::uniform(rng, 0.0, 3.0) as usize {
            0 => Morphism::Identity,
            1 => Morphism::HalfFlip,
            _ => Morphism::PairAuto { p: El::sample_unit(Algebra::H, rng), u: El::sample_unit(Algebra::H, rng) },
        },
        _ => Morphism::Identity,
    }
}

/// Random double-flag map; a motion of `pol` when `motion` is set.
pub fn random_double_flag_draw(pol: &Polarity, rng: &mut SampleRng, motion: bool) -> Collineation {
    let unit = |rng: &mut SampleRng| El::sample_unit(Algebra::H, rng);
    let k = El::basis(Algebra::H, 3);
    let (a, b, c, n) = match (pol.name.as_str(), motion) {
        ("rho", true) => {
            let c = unit(rng);
            (unit(rng), c.conj(), c, El::sample_normal(Algebra::H, rng).pure())
        }
        ("kappa", true) => {
            // k a = e a k: a in span(1, k) for e = 1, in span(i, j) for e = -1
            let e = if coin(rng) { 1.0 } else { -1.0 };
            let t = crate::sampling::uniform(rng, 0.0, std::f64::consts::TAU);
            let a = if e > 0.0 { El::quat(t.cos(), 0.0, 0.0, t.sin()) } else { El::quat(0.0, t.cos(), t.sin(), 0.0) };
            let b = unit(rng);
            // c = e k conj(b) k^-1
            let c = k * b.conj() * k.conj() * e;
            // conj(n) k = conj(k) n forces n in R k
            let n = El::quat(0.0, 0.0, 0.0, crate::sampling::normal(rng));
            (a, b, c, n)
        }
        _ => (unit(rng), unit(rng), unit(rng), El::sample_normal(Algebra::H, rng)),
    };
    Collineation::DoubleFlag { a, b, c, n }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_parameters_fix_everything() {
        let plane: PlaneModel = "mutation-h:mu=0.75".parse().unwrap();
        let id = Collineation::Semifield(SemifieldSigma::identity(Algebra::H));
        let mut rng = rng_for(1, 0);
        let p = plane.random_point(&mut rng);
        assert_eq!(id.apply_point(&plane, &p), p);
    }

    #[test]
    fn homology_example() {
        let plane: PlaneModel = "tschet:r=3".parse().unwrap();
        let h = make_special(&plane, SpecialKind::Homology, &[real(1.0), real(2.0)]).unwrap();
        assert_eq!(h.apply_point(&plane, &Point::Affine(real(1.0), real(1.0))), Point::Affine(real(1.0), real(2.0)));
    }

    #[test]
    fn vertical_translation_moves_intercepts() {
        let plane: PlaneModel = "mutation-h:mu=0.75".parse().unwrap();
        let t = El::quat(0.0, 1.0, 2.0, 0.0);
        let c = make_special(&plane, SpecialKind::Translation, &[El::zero(Algebra::H), t]).unwrap();
        let (s, u) = (El::quat(1.0, 0.0, 0.0, 2.0), El::quat(0.5, 0.0, 1.0, 0.0));
        assert_eq!(c.apply_line(&plane, &Line::NonVertical(s, u)), Line::NonVertical(s, u + t));
    }
}
