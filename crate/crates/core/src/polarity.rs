//! Polarities of the catalog planes, their unitals and secant structure.
//!
//! Every catalog polarity except the elliptic one has the form
//! `(x, y) -> [phi(x), psi(y)]` with real-linear `phi`, `psi`; lines go back by
//! `[s, t] -> (phi^-1(s), psi^-1(t))`, the vertical `[c]` goes to the slope
//! `(phi(c))`, and `(inf)` is swapped with `[inf]`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::numeric::{from_vector, gauss_newton, jacobian, matrix_of, numerical_rank, to_vector};
use crate::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point, ShiftFunction};
use crate::sampling::{rng_for, SampleRng};
use crate::structures::CoordinateStructure as CS;

type El = AlgebraElement;

/// Finite-difference step and relative rank threshold for dimension probes.
pub const PROBE_STEP: f64 = 1e-5;
pub const RANK_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PolarityRule {
    /// `(x, y) -> [x^i, -y^i]` for an involutory anti-automorphism `i`.
    AntiAuto(Morphism),
    /// Rees planes: `kappa(a, b) = (a, conj(b))` in place of `i`.
    ReesKappa,
    /// Spin planes: `(x, y) -> [conj(x) k, -k∘(k conj(y))]`.
    SpinPi,
    /// Distorted quaternions: `(x, y) -> [k conj(x) k, k conj(y) k]`.
    DoubleFlagKappa,
    /// Shift planes: `z <-> L - z`.
    Shift,
    /// The elliptic polarity of the real projective plane, no absolute points.
    Elliptic,
}

/// Closed-form membership equations for the affine absolute points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum UnitalPredicate {
    /// `|a|^2 = 2 b_0`.
    RhoBar,
    /// `|a'|^2 - |a''|^2 = 2 b_0` and `(mu conj(a') + (1 - mu) a') a'' = b''`.
    MutationPi { mu: f64 },
    /// `b = (1/2 (a^2 + e^{i theta} c^2), re(conj(a) c) + i r)` for `a = (a, c)`.
    Rees { theta: f64 },
    /// `a^kappa∘a = 2(b_0 + b_1 i + b_2 j)`.
    SpinKappaHat { r: f64 },
    /// `conj(x) k∘x = y - conj(y) + 2 r y_1`.
    SpinPi { r: f64 },
    /// `conj(x)∘x = 2 y_0` with the distorted product.
    DistortedConj,
    /// `k conj(x) k∘x = 2(y - y_3 k)`.
    DoubleFlagKappa,
    /// `x^lambda∘x = 2(re y' + y'' l)`.
    Lambda,
    /// `x∘x = 2y` in a commutative plane.
    Parabola,
    /// `2y = f(2x)`.
    ShiftGraph,
    Empty,
}

#[derive(Clone, Debug)]
pub struct Polarity {
    pub plane: PlaneModel,
    pub name: String,
    pub rule: PolarityRule,
    pub predicate: UnitalPredicate,
    phi_inv: Option<DMatrix<f64>>,
    psi_inv: Option<DMatrix<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LineClass {
    /// Meets the unital in more than one point; `dimension` is the local
    /// dimension of the affine intersection at the points found.
    Secant { dimension: usize, points: Vec<Point> },
    Tangent(Point),
    Exterior,
    /// Nothing conclusive within the budget.
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitalProbe {
    pub samples: Vec<Point>,
    /// Local dimension at each probe point.
    pub dimensions: Vec<usize>,
    /// The most frequent local dimension.
    pub local_dimension: usize,
    pub skipped: usize,
}

impl UnitalProbe {
    /// Number of probe points whose local dimension equals `d`.
    pub fn agreeing(&self, d: usize) -> usize {
        self.dimensions.iter().filter(|v| **v == d).count()
    }
}

fn k_unit() -> El {
    El::basis(Algebra::H, 3)
}

fn rees_kappa(z: &El) -> El {
    let mut w = *z;
    w.coords_mut()[3] = -w[3];
    w
}

/// Names of the catalog polarities available on `plane`.
pub fn catalog_names(plane: &PlaneModel) -> Vec<&'static str> {
    match plane {
        PlaneModel::Shift(_) => vec!["pi"],
        PlaneModel::Ternary(cs) => match cs {
            CS::Classical(Algebra::R) => vec!["elliptic", "pi"],
            CS::Classical(Algebra::C) => vec!["rho-bar", "pi"],
            CS::Classical(_) | CS::MutationH { .. } | CS::MutationO { .. } => vec!["rho-bar", "pi"],
            CS::Rees { .. } => vec!["kappa-hat"],
            CS::Spin { .. } => vec!["kappa-hat", "pi"],
            CS::DistortedH(_) => vec!["rho", "kappa"],
            CS::DistortedO(_) => vec!["pi", "kappa"],
            CS::Moulton { .. } => vec!["pi"],
            _ => vec![],
        },
    }
}

impl Polarity {
    /// Look up a named polarity of `plane`.
    pub fn catalog(plane: &PlaneModel, name: &str) -> Result<Polarity> {
        use PolarityRule as R;
        use UnitalPredicate as U;
        let h = |k| El::basis(Algebra::H, k);
        let missing = || Error::NotFound(format!("no polarity {name:?} on {plane}"));
        let (rule, predicate) = match plane {
            PlaneModel::Shift(_) if name == "pi" => (R::Shift, U::ShiftGraph),
            PlaneModel::Shift(_) => return Err(missing()),
            PlaneModel::Ternary(cs) => match (cs, name) {
                (CS::Classical(Algebra::R), "elliptic") => (R::Elliptic, U::Empty),
                (CS::Classical(Algebra::R | Algebra::C), "pi") => (R::AntiAuto(Morphism::Identity), U::Parabola),
                (CS::Classical(Algebra::C), "rho-bar") => (R::AntiAuto(Morphism::Conjugation), U::RhoBar),
                (CS::Classical(Algebra::H), "rho-bar") => (R::AntiAuto(Morphism::Conjugation), U::RhoBar),
                (CS::Classical(Algebra::H), "pi") => (R::AntiAuto(Morphism::TwistedConj(h(1))), U::MutationPi { mu: 1.0 }),
                (CS::MutationH { .. }, "rho-bar") => (R::AntiAuto(Morphism::Conjugation), U::RhoBar),
                (CS::MutationH { mu }, "pi") => (R::AntiAuto(Morphism::TwistedConj(h(1))), U::MutationPi { mu: *mu }),
                (CS::Classical(Algebra::O) | CS::MutationO { .. }, "rho-bar") => (R::AntiAuto(Morphism::Conjugation), U::RhoBar),
                (CS::Classical(Algebra::O) | CS::MutationO { .. }, "pi") => (R::AntiAuto(Morphism::Lambda), U::Lambda),
                (CS::Rees { theta }, "kappa-hat") => (R::ReesKappa, U::Rees { theta: *theta }),
                (CS::Spin { r }, "kappa-hat") => (R::AntiAuto(Morphism::TwistedConj(h(3))), U::SpinKappaHat { r: *r }),
                (CS::Spin { r }, "pi") => (R::SpinPi, U::SpinPi { r: *r }),
                (CS::DistortedH(_), "rho") | (CS::DistortedO(_), "pi") => (R::AntiAuto(Morphism::Conjugation), U::DistortedConj),
                (CS::DistortedH(_), "kappa") => (R::DoubleFlagKappa, U::DoubleFlagKappa),
                (CS::DistortedO(_), "kappa") => (R::AntiAuto(Morphism::Lambda), U::Lambda),
                (CS::Moulton { .. }, "pi") => (R::AntiAuto(Morphism::Identity), U::Parabola),
                _ => return Err(missing()),
            },
        };
        Polarity::new(plane.clone(), name, rule, predicate)
    }

    /// Build a polarity from a rule; the inverse maps are precomputed.
    pub fn new(plane: PlaneModel, name: &str, rule: PolarityRule, predicate: UnitalPredicate) -> Result<Polarity> {
        let mut pol = Polarity { plane, name: name.to_string(), rule, predicate, phi_inv: None, psi_inv: None };
        if let PolarityRule::AntiAuto(m) = &pol.rule {
            m.validate(pol.plane.algebra())?;
        }
        if pol.rule != PolarityRule::Elliptic {
            let alg = pol.plane.algebra();
            let inv = |m: DMatrix<f64>| m.try_inverse().ok_or_else(|| Error::Degenerate("polarity map is singular".into()));
            pol.phi_inv = Some(inv(matrix_of(alg, |x| pol.phi(x)))?);
            pol.psi_inv = Some(inv(matrix_of(alg, |y| pol.psi(y)))?);
        }
        Ok(pol)
    }

    pub fn algebra(&self) -> Algebra {
        self.plane.algebra()
    }

    /// First-coordinate map: `(x, y)` goes to a line of slope `phi(x)`.
    pub fn phi(&self, x: &El) -> El {
        match &self.rule {
            PolarityRule::AntiAuto(m) => m.apply(x),
            PolarityRule::ReesKappa => rees_kappa(x),
            PolarityRule::SpinPi => x.conj() * k_unit(),
            PolarityRule::DoubleFlagKappa => k_unit() * x.conj() * k_unit(),
            PolarityRule::Shift => -*x,
            PolarityRule::Elliptic => unreachable!("elliptic polarity has no coordinate form"),
        }
    }

    /// Second-coordinate map: `(x, y)` goes to a line with intercept `psi(y)`.
    pub fn psi(&self, y: &El) -> El {
        match &self.rule {
            PolarityRule::AntiAuto(m) => -m.apply(y),
            PolarityRule::ReesKappa => -rees_kappa(y),
            PolarityRule::SpinPi => {
                let k = k_unit();
                -self.product(&k, &(k * y.conj()))
            }
            PolarityRule::DoubleFlagKappa => k_unit() * y.conj() * k_unit(),
            PolarityRule::Shift => -*y,
            PolarityRule::Elliptic => unreachable!("elliptic polarity has no coordinate form"),
        }
    }

    fn product(&self, a: &El, b: &El) -> El {
        match &self.plane {
            PlaneModel::Ternary(cs) => cs.multiply(a, b),
            PlaneModel::Shift(_) => *a * *b,
        }
    }

    fn apply_inv(&self, m: &Option<DMatrix<f64>>, v: &El) -> El {
        let m = m.as_ref().expect("inverse present for coordinate polarities");
        from_vector(self.algebra(), &(m * to_vector(v)))
    }

    pub fn phi_inv(&self, s: &El) -> El {
        self.apply_inv(&self.phi_inv, s)
    }

    pub fn psi_inv(&self, t: &El) -> El {
        self.apply_inv(&self.psi_inv, t)
    }

    pub fn polar_point(&self, p: &Point) -> Line {
        if self.rule == PolarityRule::Elliptic {
            return elliptic_point(p);
        }
        match p {
            Point::Affine(x, y) => Line::NonVertical(self.phi(x), self.psi(y)),
            Point::Slope(s) => Line::Vertical(self.phi_inv(s)),
            Point::Infinity => Line::AtInfinity,
        }
    }

    pub fn polar_line(&self, l: &Line) -> Point {
        if self.rule == PolarityRule::Elliptic {
            return elliptic_line(l);
        }
        match l {
            Line::NonVertical(s, t) => Point::Affine(self.phi_inv(s), self.psi_inv(t)),
            Line::Vertical(c) => Point::Slope(self.phi(c)),
            Line::AtInfinity => Point::Infinity,
        }
    }

    /// Residual of the closed-form unital equation at an affine point.
    pub fn predicate_residual(&self, x: &El, y: &El) -> f64 {
        let alg = self.algebra();
        let scale = 1.0 + x.norm_sq() + y.norm();
        let diff = |a: El, b: El| a.dist(&b) / scale;
        match &self.predicate {
            UnitalPredicate::Empty => f64::INFINITY,
            UnitalPredicate::RhoBar => (x.norm_sq() - 2.0 * y.re()).abs() / scale,
            UnitalPredicate::MutationPi { mu } => {
                let (a1, a2) = x.halves();
                let (_, b2) = y.halves();
                let r0 = (a1.norm_sq() - a2.norm_sq() - 2.0 * y.re()).abs();
                let lhs = (a1.conj() * *mu + a1 * (1.0 - mu)) * a2;
                (r0 + lhs.dist(&b2)) / scale
            }
            UnitalPredicate::Rees { theta } => {
                let (a, c) = x.halves();
                let (d1, d2) = y.halves();
                let e = El::complex(theta.cos(), theta.sin());
                let first = (a * a + e * c * c) * 0.5;
                let second = (a.conj() * c).re();
                (first.dist(&d1) + (second - d2.re()).abs()) / scale
            }
            UnitalPredicate::SpinKappaHat { r } => {
                let k = k_unit();
                let ak = k.conj() * x.conj() * k;
                let lhs = spin_product(*r, &ak, x);
                diff(lhs, El::quat(2.0 * y[0], 2.0 * y[1], 2.0 * y[2], 0.0))
            }
            UnitalPredicate::SpinPi { r } => {
                let lhs = spin_product(*r, &(x.conj() * k_unit()), x);
                let rhs = *y - y.conj() + El::real(alg, 2.0 * r * y[1]);
                diff(lhs, rhs)
            }
            UnitalPredicate::DistortedConj => {
                let lhs = self.product(&x.conj(), x);
                diff(lhs, El::real(alg, 2.0 * y.re()))
            }
            UnitalPredicate::DoubleFlagKappa => {
                let k = k_unit();
                let lhs = self.product(&(k * x.conj() * k), x);
                diff(lhs, El::quat(2.0 * y[0], 2.0 * y[1], 2.0 * y[2], 0.0))
            }
            UnitalPredicate::Lambda => {
                let (x1, x2) = x.halves();
                let xl = El::from_halves(&x1.conj(), &x2);
                let lhs = self.product(&xl, x);
                let (y1, y2) = y.halves();
                let rhs = El::from_halves(&El::real(Algebra::H, 2.0 * y1.re()), &(y2 * 2.0));
                diff(lhs, rhs)
            }
            UnitalPredicate::Parabola => {
                let lhs = self.product(x, x);
                diff(lhs, *y * 2.0)
            }
            UnitalPredicate::ShiftGraph => {
                let PlaneModel::Shift(f) = &self.plane else { return f64::INFINITY };
                diff(f.eval(&(*x * 2.0)), *y * 2.0)
            }
        }
    }

    /// Closed-form absolute-point test; ideal points are decided symbolically.
    pub fn is_absolute(&self, p: &Point, tol: f64) -> bool {
        match p {
            Point::Affine(x, y) => self.predicate_residual(x, y) <= tol,
            Point::Infinity => self.rule != PolarityRule::Elliptic,
            Point::Slope(_) => false,
        }
    }

    /// Incidence residual of `p` with its own polar.
    pub fn absolute_residual(&self, p: &Point) -> f64 {
        self.plane.incidence_residual(p, &self.polar_point(p))
    }

    /// `F(x, y) = tau(phi(x), x, psi(y)) - y`; its zeros are the affine absolute points.
    pub fn unital_equation(&self, x: &El, y: &El) -> El {
        self.plane.eval_line(&self.phi(x), &self.psi(y), x) - *y
    }

    fn unital_fn(&self) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
        let alg = self.algebra();
        let n = alg.dim();
        move |v: &[f64]| {
            let x = El::from_slice(alg, &v[..n]).expect("dimension");
            let y = El::from_slice(alg, &v[n..]).expect("dimension");
            self.unital_equation(&x, &y).coords().to_vec()
        }
    }

    /// An affine absolute point above a random `x`.
    pub fn sample_unital_point(&self, rng: &mut SampleRng) -> Result<Point> {
        if self.rule == PolarityRule::Elliptic {
            return Err(Error::Unsupported("the elliptic polarity has no absolute points".into()));
        }
        let alg = self.algebra();
        let x = El::sample_normal(alg, rng);
        let y0 = El::sample_normal(alg, rng);
        let g = |v: &[f64]| {
            let y = El::from_slice(alg, v).expect("dimension");
            self.unital_equation(&x, &y).coords().to_vec()
        };
        let scale = 1.0 + x.norm_sq();
        let (y, r) = gauss_newton(g, y0.coords(), 1e-14 * scale, 100);
        if r > 1e-11 * scale {
            return Err(crate::error::solver_err("unital sample", r));
        }
        Ok(Point::Affine(x, El::from_slice(alg, &y)?))
    }

    /// Local dimension of the unital at an affine absolute point.
    pub fn local_dimension(&self, p: &Point) -> Option<usize> {
        let v = p.flat()?;
        let jac = jacobian(self.unital_fn(), &v, PROBE_STEP);
        Some(v.len() - numerical_rank(&jac, RANK_THRESHOLD))
    }

    /// Sample `n` absolute points and measure the local dimension at each.
    pub fn unital_probe(&self, n: usize, seed: u64) -> Result<UnitalProbe> {
        let mut samples = Vec::with_capacity(n);
        let mut dimensions = Vec::with_capacity(n);
        let mut skipped = 0;
        for i in 0..n {
            let mut rng = rng_for(seed, i as u64);
            match self.sample_unital_point(&mut rng) {
                Ok(p) => {
                    dimensions.push(self.local_dimension(&p).expect("affine sample"));
                    samples.push(p);
                }
                Err(Error::Unsupported(m)) => return Err(Error::Unsupported(m)),
                Err(_) => skipped += 1,
            }
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for d in &dimensions {
            *counts.entry(*d).or_default() += 1;
        }
        let local_dimension = counts.iter().max_by_key(|(d, c)| (**c, usize::MAX - **d)).map(|(d, _)| *d).unwrap_or(0);
        Ok(UnitalProbe { samples, dimensions, local_dimension, skipped })
    }

    /// Local dimension of `L ∩ U` at the affine point of `L` above `x`
    /// (or, on a vertical, at height `x`).
    pub fn intersection_dimension(&self, l: &Line, at: &El) -> Option<usize> {
        let g = self.restricted(l)?;
        let jac = jacobian(g, at.coords(), PROBE_STEP);
        Some(at.dim() - numerical_rank(&jac, RANK_THRESHOLD))
    }

    /// The unital equation along an affine line, as a map of its parameter.
    fn restricted(&self, l: &Line) -> Option<Box<dyn Fn(&[f64]) -> Vec<f64> + '_>> {
        let alg = self.algebra();
        match *l {
            Line::NonVertical(s, t) => Some(Box::new(move |v: &[f64]| {
                let x = El::from_slice(alg, v).expect("dimension");
                let y = self.plane.eval_line(&s, &t, &x);
                self.unital_equation(&x, &y).coords().to_vec()
            })),
            Line::Vertical(c) => Some(Box::new(move |v: &[f64]| {
                let y = El::from_slice(alg, v).expect("dimension");
                self.unital_equation(&c, &y).coords().to_vec()
            })),
            Line::AtInfinity => None,
        }
    }

    fn point_at(&self, l: &Line, v: &El) -> Point {
        match l {
            Line::NonVertical(s, t) => Point::Affine(*v, self.plane.eval_line(s, t, v)),
            Line::Vertical(c) => Point::Affine(*c, *v),
            Line::AtInfinity => Point::Infinity,
        }
    }

    /// Classify `l` against the unital using `budget` solver starts.
    pub fn classify_line(&self, l: &Line, budget: usize, seed: u64) -> LineClass {
        if self.rule == PolarityRule::Elliptic {
            return LineClass::Exterior;
        }
        let Some(g) = self.restricted(l) else {
            // slopes are never absolute, so [inf] meets the unital only in (inf)
            return LineClass::Tangent(Point::Infinity);
        };
        let alg = self.algebra();
        let pole = self.polar_line(l);
        let pole_on_line = self.plane.incident(&pole, l, 1e-9);
        let mut starts: Vec<El> = Vec::new();
        if let (true, Point::Affine(x, y)) = (pole_on_line, pole) {
            starts.push(if matches!(l, Line::Vertical(_)) { y } else { x });
        }
        for i in 0..budget {
            let mut rng = rng_for(seed, i as u64);
            // spread the starts over several scales
            starts.push(El::sample_normal(alg, &mut rng) * (1 << (i % 4)) as f64);
        }
        let mut roots: Vec<El> = Vec::new();
        for s in starts {
            let scale = 1.0 + s.norm_sq();
            let (v, r) = gauss_newton(&g, s.coords(), 1e-15 * scale, 200);
            let v = El::from_slice(alg, &v).expect("dimension");
            if r <= 1e-11 * (1.0 + v.norm_sq()) && !roots.iter().any(|w| w.dist(&v) <= 1e-4 * (1.0 + v.norm())) {
                roots.push(v);
            }
        }
        let on_vertical = matches!(l, Line::Vertical(_));
        if roots.is_empty() {
            if on_vertical && self.linear_along(&*g, alg) {
                // the restricted equation is affine, so least squares settles it
                return LineClass::Tangent(Point::Infinity);
            }
            return if pole_on_line { LineClass::Tangent(pole) } else { LineClass::Indeterminate };
        }
        let dims: Vec<usize> = roots
            .iter()
            .map(|v| alg.dim() - numerical_rank(&jacobian(&g, v.coords(), PROBE_STEP), RANK_THRESHOLD))
            .collect();
        let points: Vec<Point> = roots.iter().map(|v| self.point_at(l, v)).collect();
        let dimension = dims.iter().copied().max().unwrap_or(0);
        if !on_vertical && roots.len() == 1 && pole_on_line && points[0].distance(&pole) < 1e-4 {
            return LineClass::Tangent(pole);
        }
        if on_vertical || roots.len() > 1 || dimension > 0 {
            let mut points = points;
            if on_vertical {
                points.push(Point::Infinity);
            }
            return LineClass::Secant { dimension, points };
        }
        LineClass::Indeterminate
    }

    fn linear_along(&self, g: &dyn Fn(&[f64]) -> Vec<f64>, alg: Algebra) -> bool {
        let mut rng = rng_for(0x5eed, 0);
        let a = El::sample_normal(alg, &mut rng);
        let b = El::sample_normal(alg, &mut rng);
        let m = (a + b) * 0.5;
        let (ga, gb, gm) = (g(a.coords()), g(b.coords()), g(m.coords()));
        ga.iter().zip(&gb).zip(&gm).all(|((u, v), w)| (0.5 * (u + v) - w).abs() <= 1e-9 * (1.0 + u.abs() + v.abs()))
    }
}

/// Spin product written out independently of the structure catalog.
fn spin_product(r: f64, c: &El, z: &El) -> El {
    let mut p = *c * *z;
    p.coords_mut()[0] += 2.0 * r * (c[2] * z[3] - c[3] * z[2]);
    p
}

/// Homogeneous coordinates: point `(x, y, 1)` goes to the line `xX + yY + Z = 0`.
fn elliptic_point(p: &Point) -> Line {
    let r = |v: f64| El::real(Algebra::R, v);
    let (a, b, c) = match p {
        Point::Affine(x, y) => (x.re(), y.re(), 1.0),
        Point::Slope(s) => (1.0, s.re(), 0.0),
        Point::Infinity => (0.0, 1.0, 0.0),
    };
    // aX + bY + cZ = 0
    if b != 0.0 {
        Line::NonVertical(r(-a / b), r(-c / b))
    } else if a != 0.0 {
        Line::Vertical(r(-c / a))
    } else {
        Line::AtInfinity
    }
}

fn elliptic_line(l: &Line) -> Point {
    let r = |v: f64| El::real(Algebra::R, v);
    // the line's coefficient vector read as a point
    let (a, b, c) = match l {
        Line::NonVertical(s, t) => (s.re(), -1.0, t.re()),
        Line::Vertical(c) => (1.0, 0.0, -c.re()),
        Line::AtInfinity => (0.0, 0.0, 1.0),
    };
    if c != 0.0 {
        Point::Affine(r(a / c), r(b / c))
    } else if a != 0.0 {
        Point::Slope(r(b / a))
    } else {
        Point::Infinity
    }
}

impl ShiftFunction {
    /// Absolute points of the shift polarity: `2y = f(2x)`.
    pub fn unital_point(&self, x: &El) -> Point {
        Point::Affine(*x, self.eval(&(*x * 2.0)) * 0.5)
    }
}
