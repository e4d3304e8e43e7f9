//! Projective planes over coordinate structures and shift functions.
//!
//! Affine points are pairs `(x, y)`, lines are `[s, t]` (the set
//! `y = tau(s, x, t)`) or verticals `[c]`. Ideal points are slopes `(s)` and
//! the vertical direction `(inf)`; they make up the line `[inf]`.
//!
//! In a shift plane the non-vertical lines are translates `L + (a, b)` of the
//! graph `L` of `f`, written `[a, b]` and meaning `y = f(x - a) + b`; lines with
//! the same `a` are parallel, so `(a)` plays the role of a slope.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{solver_err, Error, Result};
use crate::numeric::{bisect_line, gauss_newton};
use crate::sampling::{normal, SampleRng};
use crate::structures::{split_identifier, CoordinateStructure, Params, SignedRho};
use crate::radial::RadialSpec;

type El = AlgebraElement;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProjectivePoint {
    Affine(El, El),
    Slope(El),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProjectiveLine {
    NonVertical(El, El),
    Vertical(El),
    AtInfinity,
}

pub use ProjectiveLine as Line;
pub use ProjectivePoint as Point;

fn rel(a: &El, b: &El) -> f64 {
    a.dist(b) / (1.0 + a.norm().max(b.norm()))
}

impl ProjectivePoint {
    /// Relative coordinate distance, infinite between different kinds.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (Point::Affine(x, y), Point::Affine(u, v)) => rel(x, u).max(rel(y, v)),
            (Point::Slope(s), Point::Slope(u)) => rel(s, u),
            (Point::Infinity, Point::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn affine(&self) -> Option<(El, El)> {
        match self {
            Point::Affine(x, y) => Some((*x, *y)),
            _ => None,
        }
    }

    /// Coordinates flattened as `x ++ y` (affine points only).
    pub fn flat(&self) -> Option<Vec<f64>> {
        self.affine().map(|(x, y)| x.coords().iter().chain(y.coords()).cloned().collect())
    }
}

impl ProjectiveLine {
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (Line::NonVertical(s, t), Line::NonVertical(u, v)) => rel(s, u).max(rel(t, v)),
            (Line::Vertical(c), Line::Vertical(d)) => rel(c, d),
            (Line::AtInfinity, Line::AtInfinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
            Point::Slope(s) => write!(f, "({s})"),
            Point::Infinity => write!(f, "(inf)"),
        }
    }
}

impl fmt::Display for ProjectiveLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::NonVertical(s, t) => write!(f, "[{s}, {t}]"),
            Line::Vertical(c) => write!(f, "[{c}]"),
            Line::AtInfinity => write!(f, "[inf]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShiftFunction {
    /// `f(x) = cosh(x) - 1` over R.
    Cosh,
    /// `f(z) = z^2 |z|^c` over C with complex exponent `c`.
    ComplexPower { c_re: f64, c_im: f64 },
    /// `f(x + iy) = xy - x^3/3 + i(y^2/2 - x^4/12)`; an unconfirmed reading,
    /// only available behind an explicit flag.
    Knarr,
}

impl ShiftFunction {
    pub fn algebra(&self) -> Algebra {
        match self {
            ShiftFunction::Cosh => Algebra::R,
            _ => Algebra::C,
        }
    }

    pub fn eval(&self, z: &El) -> El {
        match self {
            ShiftFunction::Cosh => El::real(Algebra::R, z.re().cosh() - 1.0),
            ShiftFunction::ComplexPower { c_re, c_im } => {
                let r = z.norm();
                if r == 0.0 {
                    return El::zero(Algebra::C);
                }
                let lr = r.ln();
                let m = (c_re * lr).exp();
                let pw = El::complex(m * (c_im * lr).cos(), m * (c_im * lr).sin());
                *z * *z * pw
            }
            ShiftFunction::Knarr => {
                let (x, y) = (z[0], z[1]);
                El::complex(x * y - x.powi(3) / 3.0, 0.5 * y * y - x.powi(4) / 12.0)
            }
        }
    }

    /// The `u` with `f(u) - f(u + d) = w` for `d != 0`.
    pub fn solve_difference(&self, d: &El, w: &El) -> Result<El> {
        if d.is_zero() {
            return Err(Error::Degenerate("shift difference needs d != 0".into()));
        }
        match self {
            ShiftFunction::Cosh => {
                let (d, w) = (d.re(), w.re());
                let g = |u: f64| (u.cosh() - (u + d).cosh()) - w;
                let u = bisect_line(g, -0.5 * d, d < 0.0)?;
                Ok(El::real(Algebra::R, u))
            }
            _ => {
                let f = |v: &[f64]| -> Vec<f64> {
                    let u = El::complex(v[0], v[1]);
                    let r = self.eval(&u) - self.eval(&(u + *d)) - *w;
                    vec![r[0], r[1]]
                };
                // the z^2 solution seeds the search
                let guess = (-(*w + *d * *d)) * (*d * 2.0).inverse()?;
                let scale = 1.0 + w.norm() + d.norm();
                let starts = [guess, guess + El::complex(0.5, 0.5), guess - El::complex(0.5, -0.3)];
                let mut found: Vec<El> = Vec::new();
                let mut best = f64::INFINITY;
                for s in starts {
                    let (x, r) = gauss_newton(f, &[s[0], s[1]], 1e-13 * scale, 100);
                    best = best.min(r);
                    if r <= 1e-10 * scale {
                        found.push(El::complex(x[0], x[1]));
                    }
                }
                let Some(first) = found.first().copied() else {
                    return Err(solver_err("shift difference", best));
                };
                let spread = found.iter().map(|u| u.dist(&first)).fold(0.0, f64::max);
                if spread > 1e-8 * (1.0 + first.norm()) {
                    return Err(Error::NonUnique { context: "shift difference".into(), spread });
                }
                Ok(first)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PlaneModel {
    Ternary(CoordinateStructure),
    Shift(ShiftFunction),
}

impl From<CoordinateStructure> for PlaneModel {
    fn from(cs: CoordinateStructure) -> Self {
        PlaneModel::Ternary(cs)
    }
}

impl PlaneModel {
    pub fn algebra(&self) -> Algebra {
        match self {
            PlaneModel::Ternary(cs) => cs.algebra(),
            PlaneModel::Shift(f) => f.algebra(),
        }
    }

    pub fn structure(&self) -> Option<&CoordinateStructure> {
        match self {
            PlaneModel::Ternary(cs) => Some(cs),
            PlaneModel::Shift(_) => None,
        }
    }

    /// Whether join or meet go through an iterative solver somewhere.
    pub fn is_iterative(&self) -> bool {
        match self {
            PlaneModel::Ternary(cs) => matches!(
                cs,
                CoordinateStructure::Haehl(_)
                    | CoordinateStructure::DistortedH(_)
                    | CoordinateStructure::DistortedO(_)
                    | CoordinateStructure::Tschet { .. }
                    | CoordinateStructure::TschetDual { .. }
            ),
            PlaneModel::Shift(_) => true,
        }
    }

    pub fn zero(&self) -> El {
        El::zero(self.algebra())
    }

    /// The `y` of the point of `[s, t]` above `x`.
    pub fn eval_line(&self, s: &El, t: &El, x: &El) -> El {
        match self {
            PlaneModel::Ternary(cs) => cs.ternary(s, x, t),
            PlaneModel::Shift(f) => f.eval(&(*x - *s)) + *t,
        }
    }

    /// The `t` with `(x, y)` on `[s, t]`.
    pub fn solve_intercept(&self, s: &El, x: &El, y: &El) -> Result<El> {
        match self {
            PlaneModel::Shift(f) => Ok(*y - f.eval(&(*x - *s))),
            PlaneModel::Ternary(cs) => match cs {
                CoordinateStructure::Tschet { rho, boundary } => {
                    let (s, x, y) = (s.re(), x.re(), y.re());
                    Ok(El::real(Algebra::R, if s >= *boundary { y - s * x } else { rho.inv(rho.f(y) - rho.f(s) * rho.f(x)) }))
                }
                CoordinateStructure::TschetDual { rho } => {
                    let (s, x, y) = (s.re(), x.re(), y.re());
                    Ok(El::real(Algebra::R, if x >= 0.0 { y - s * x } else { rho.inv(rho.f(y) - rho.f(s) * rho.f(x)) }))
                }
                _ => Ok(*y - cs.multiply(s, x)),
            },
        }
    }

    /// Residual of `p` on `L`: 0 or infinity for symbolic cases.
    pub fn incidence_residual(&self, p: &Point, l: &Line) -> f64 {
        match (p, l) {
            (Point::Affine(x, y), Line::NonVertical(s, t)) => {
                let v = self.eval_line(s, t, x);
                v.dist(y) / (1.0 + y.norm())
            }
            (Point::Affine(x, _), Line::Vertical(c)) => x.dist(c) / (1.0 + c.norm()),
            (Point::Slope(a), Line::NonVertical(s, _)) => a.dist(s) / (1.0 + s.norm()),
            (Point::Slope(_), Line::AtInfinity) | (Point::Infinity, Line::AtInfinity) | (Point::Infinity, Line::Vertical(_)) => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn incident(&self, p: &Point, l: &Line, tol: f64) -> bool {
        self.incidence_residual(p, l) <= tol
    }

    pub fn join(&self, p: &Point, q: &Point) -> Result<Line> {
        match (p, q) {
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                if x1 == x2 {
                    if y1 == y2 {
                        return Err(Error::Degenerate("join of a point with itself".into()));
                    }
                    return Ok(Line::Vertical(*x1));
                }
                self.join_affine(x1, y1, x2, y2)
            }
            (Point::Affine(x, y), Point::Slope(s)) | (Point::Slope(s), Point::Affine(x, y)) => {
                Ok(Line::NonVertical(*s, self.solve_intercept(s, x, y)?))
            }
            (Point::Affine(x, _), Point::Infinity) | (Point::Infinity, Point::Affine(x, _)) => Ok(Line::Vertical(*x)),
            (Point::Slope(a), Point::Slope(b)) if a == b => Err(Error::Degenerate("join of a point with itself".into())),
            (Point::Infinity, Point::Infinity) => Err(Error::Degenerate("join of a point with itself".into())),
            _ => Ok(Line::AtInfinity),
        }
    }

    fn join_affine(&self, x1: &El, y1: &El, x2: &El, y2: &El) -> Result<Line> {
        let alg = self.algebra();
        let r = |v: f64| El::real(Algebra::R, v);
        match self {
            PlaneModel::Shift(f) => {
                let u = f.solve_difference(&(*x2 - *x1), &(*y1 - *y2))?;
                let a = *x1 - u;
                Ok(Line::NonVertical(a, *y1 - f.eval(&u)))
            }
            PlaneModel::Ternary(CoordinateStructure::Tschet { rho, boundary }) => {
                let (x1, y1, x2, y2) = (x1.re(), y1.re(), x2.re(), y2.re());
                let straight = (y2 - y1) / (x2 - x1);
                let sigma = (rho.f(y2) - rho.f(y1)) / (rho.f(x2) - rho.f(x1));
                let curved = rho.inv(sigma);
                let ok_straight = straight >= *boundary;
                let ok_curved = curved < *boundary;
                match (ok_straight, ok_curved) {
                    (true, false) => Ok(Line::NonVertical(r(straight), r(y1 - straight * x1))),
                    (false, true) => Ok(Line::NonVertical(r(curved), r(rho.inv(rho.f(y1) - sigma * rho.f(x1))))),
                    (true, true) => Err(Error::NonUnique { context: "tschet join: two lines".into(), spread: (straight - curved).abs() }),
                    (false, false) => Err(solver_err("tschet join: no line", f64::NAN)),
                }
            }
            PlaneModel::Ternary(CoordinateStructure::TschetDual { rho }) => {
                let (x1, y1, x2, y2) = (x1.re(), y1.re(), x2.re(), y2.re());
                let s = tschet_dual_join(rho, x1, y1, x2, y2)?;
                let t = self.solve_intercept(&r(s), &r(x1), &r(y1))?;
                Ok(Line::NonVertical(r(s), t))
            }
            PlaneModel::Ternary(cs) => {
                let s = cs.solve_slope_diff(x1, x2, &(*y1 - *y2))?;
                let t = *y1 - cs.multiply(&s, x1);
                debug_assert_eq!(s.algebra(), alg);
                Ok(Line::NonVertical(s, t))
            }
        }
    }

    pub fn meet(&self, l: &Line, m: &Line) -> Result<Point> {
        match (l, m) {
            (Line::NonVertical(s, t), Line::NonVertical(u, v)) => {
                if s == u {
                    if t == v {
                        return Err(Error::Degenerate("meet of a line with itself".into()));
                    }
                    return Ok(Point::Slope(*s));
                }
                let x = self.meet_x(s, t, u, v)?;
                Ok(Point::Affine(x, self.eval_line(s, t, &x)))
            }
            (Line::NonVertical(s, t), Line::Vertical(c)) | (Line::Vertical(c), Line::NonVertical(s, t)) => {
                Ok(Point::Affine(*c, self.eval_line(s, t, c)))
            }
            (Line::NonVertical(s, _), Line::AtInfinity) | (Line::AtInfinity, Line::NonVertical(s, _)) => Ok(Point::Slope(*s)),
            (Line::Vertical(a), Line::Vertical(b)) if a == b => Err(Error::Degenerate("meet of a line with itself".into())),
            (Line::AtInfinity, Line::AtInfinity) => Err(Error::Degenerate("meet of a line with itself".into())),
            _ => Ok(Point::Infinity),
        }
    }

    fn meet_x(&self, s: &El, t: &El, u: &El, v: &El) -> Result<El> {
        let r = |v: f64| El::real(Algebra::R, v);
        match self {
            PlaneModel::Shift(f) => {
                let w = f.solve_difference(&(*s - *u), &(*v - *t))?;
                Ok(w + *s)
            }
            PlaneModel::Ternary(CoordinateStructure::Tschet { rho, boundary }) => {
                let (s, t, u, v) = (s.re(), t.re(), u.re(), v.re());
                let b = *boundary;
                let x = match (s >= b, u >= b) {
                    (true, true) => (v - t) / (s - u),
                    (false, false) => rho.inv((rho.f(v) - rho.f(t)) / (rho.f(s) - rho.f(u))),
                    (true, false) => mixed_meet(rho, s, t, u, v)?,
                    (false, true) => mixed_meet(rho, u, v, s, t)?,
                };
                Ok(r(x))
            }
            PlaneModel::Ternary(CoordinateStructure::TschetDual { rho }) => {
                let (s, t, u, v) = (s.re(), t.re(), u.re(), v.re());
                let straight = (v - t) / (s - u);
                let curved = rho.inv((rho.f(v) - rho.f(t)) / (rho.f(s) - rho.f(u)));
                match (straight >= 0.0, curved < 0.0) {
                    (true, false) => Ok(r(straight)),
                    (false, true) => Ok(r(curved)),
                    (true, true) => Err(Error::NonUnique { context: "tschet-dual meet".into(), spread: (straight - curved).abs() }),
                    (false, false) => Err(solver_err("tschet-dual meet: no point", f64::NAN)),
                }
            }
            PlaneModel::Ternary(cs) => cs.solve_point_diff(s, u, &(*v - *t)),
        }
    }

    /// Random affine point with standard normal coordinates.
    pub fn random_point(&self, rng: &mut SampleRng) -> Point {
        let alg = self.algebra();
        Point::Affine(El::sample_normal(alg, rng), El::sample_normal(alg, rng))
    }

    /// Random non-vertical line.
    pub fn random_line(&self, rng: &mut SampleRng) -> Line {
        let alg = self.algebra();
        Line::NonVertical(El::sample_normal(alg, rng), El::sample_normal(alg, rng))
    }

    /// Point of `l` above `x` (non-vertical lines only).
    pub fn point_on(&self, l: &Line, x: &El) -> Option<Point> {
        match l {
            Line::NonVertical(s, t) => Some(Point::Affine(*x, self.eval_line(s, t, x))),
            _ => None,
        }
    }

    pub fn random_scalar(&self, rng: &mut SampleRng) -> El {
        let alg = self.algebra();
        let mut e = El::zero(alg);
        for v in e.coords_mut() {
            *v = normal(rng);
        }
        e
    }
}

/// `x` with `s x + t = tau(u, x, v)`, for `s` on the straight and `u` on the
/// curved branch; the difference is increasing in `x`.
fn mixed_meet(rho: &SignedRho, s: f64, t: f64, u: f64, v: f64) -> Result<f64> {
    let g = |x: f64| rho.f(s * x + t) - rho.f(u) * rho.f(x) - rho.f(v);
    bisect_line(g, 0.0, true)
}

fn tschet_dual_join(rho: &SignedRho, x1: f64, y1: f64, x2: f64, y2: f64) -> Result<f64> {
    match (x1 >= 0.0, x2 >= 0.0) {
        (true, true) => Ok((y2 - y1) / (x2 - x1)),
        (false, false) => Ok(rho.inv((rho.f(y2) - rho.f(y1)) / (rho.f(x2) - rho.f(x1)))),
        _ => {
            let ((xa, ya), (xb, yb)) = if x1 < 0.0 { ((x1, y1), (x2, y2)) } else { ((x2, y2), (x1, y1)) };
            // t = yb - s xb on the straight side; match the curved side at xa
            let h = |s: f64| rho.f(s) * rho.f(xa) + rho.f(yb - s * xb) - rho.f(ya);
            bisect_line(h, 0.0, false)
        }
    }
}

/// Replace a Tschetweruchin plane by its dual: `tau~(s, x, t) = tau(x, s, t)`.
/// Requires an odd `rho`.
pub fn dualize(plane: &PlaneModel) -> Result<PlaneModel> {
    match plane {
        PlaneModel::Ternary(CoordinateStructure::Tschet { rho, boundary }) => {
            if !rho.is_odd() {
                return Err(Error::Unsupported("dualization needs an odd rho".into()));
            }
            if *boundary != 0.0 {
                return Err(Error::Unsupported("dualization needs the branch boundary at 0".into()));
            }
            Ok(PlaneModel::Ternary(CoordinateStructure::TschetDual { rho: rho.clone() }))
        }
        PlaneModel::Ternary(CoordinateStructure::TschetDual { rho }) => {
            Ok(PlaneModel::Ternary(CoordinateStructure::Tschet { rho: rho.clone(), boundary: 0.0 }))
        }
        _ => Err(Error::Unsupported("only Tschetweruchin planes are dualized".into())),
    }
}

/// The incidence-reversing correspondence between a Tschetweruchin plane and
/// its dual: point `(x, y)` goes to line `[x, -y]`, line `[s, t]` to point
/// `(s, -t)`. The same formulas work in both directions.
pub fn dual_line_of(p: &Point) -> Line {
    match p {
        Point::Affine(x, y) => Line::NonVertical(*x, -*y),
        Point::Slope(s) => Line::Vertical(*s),
        Point::Infinity => Line::AtInfinity,
    }
}

pub fn dual_point_of(l: &Line) -> Point {
    match l {
        Line::NonVertical(s, t) => Point::Affine(*s, -*t),
        Line::Vertical(c) => Point::Slope(*c),
        Line::AtInfinity => Point::Infinity,
    }
}

/// The isomorphism from the dual plane with `rho(x) = x^r` to the one with
/// exponent `1/r`: `(x, y) -> (-rho(x), rho(y))`, which swaps the straight and
/// curved half planes.
#[derive(Clone, Debug, PartialEq)]
pub struct TschetInversion {
    rho: SignedRho,
    target: PlaneModel,
}

impl TschetInversion {
    pub fn new(plane: &PlaneModel) -> Result<TschetInversion> {
        match plane {
            PlaneModel::Ternary(CoordinateStructure::TschetDual { rho }) => match rho.radial {
                RadialSpec::Power(r) if rho.is_odd() => Ok(TschetInversion {
                    rho: rho.clone(),
                    target: PlaneModel::Ternary(CoordinateStructure::tschet_dual(1.0 / r)),
                }),
                _ => Err(Error::Unsupported("the inversion needs an odd power rho".into())),
            },
            _ => Err(Error::Unsupported("the inversion acts on dual Tschetweruchin planes".into())),
        }
    }

    pub fn target(&self) -> &PlaneModel {
        &self.target
    }

    fn map(&self, v: &El) -> El {
        El::real(Algebra::R, self.rho.f(v.re()))
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        match p {
            Point::Affine(x, y) => Point::Affine(-self.map(x), self.map(y)),
            Point::Slope(s) => Point::Slope(-self.map(s)),
            Point::Infinity => Point::Infinity,
        }
    }

    pub fn apply_line(&self, l: &Line) -> Line {
        match l {
            Line::NonVertical(s, t) => Line::NonVertical(-self.map(s), self.map(t)),
            Line::Vertical(c) => Line::Vertical(-self.map(c)),
            Line::AtInfinity => Line::AtInfinity,
        }
    }
}

impl fmt::Display for ShiftFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftFunction::Cosh => write!(f, "shift-cosh"),
            ShiftFunction::ComplexPower { c_re, c_im } if *c_im == 0.0 => write!(f, "shift-power:c={c_re}"),
            ShiftFunction::ComplexPower { c_re, c_im } => write!(f, "shift-power:c={c_re}:ci={c_im}"),
            ShiftFunction::Knarr => write!(f, "shift-knarr:nonstandard=1"),
        }
    }
}

impl fmt::Display for PlaneModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneModel::Ternary(cs) => cs.fmt(f),
            PlaneModel::Shift(s) => s.fmt(f),
        }
    }
}

impl FromStr for PlaneModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if !s.starts_with("shift") {
            return Ok(PlaneModel::Ternary(s.parse()?));
        }
        let (family, map) = split_identifier(s)?;
        let mut p = Params::new(map, s);
        let f = match family.as_str() {
            "shift-cosh" => ShiftFunction::Cosh,
            "shift-power" => ShiftFunction::ComplexPower { c_re: p.num("c")?, c_im: p.opt_num("ci")?.unwrap_or(0.0) },
            "shift-knarr" => {
                if p.opt_num("nonstandard")? != Some(1.0) {
                    return Err(Error::Parse("shift-knarr is a nonstandard reading; pass nonstandard=1".into()));
                }
                ShiftFunction::Knarr
            }
            other => return Err(Error::Parse(format!("unknown shift family {other:?}"))),
        };
        p.finish()?;
        Ok(PlaneModel::Shift(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> El {
        El::real(Algebra::R, v)
    }

    fn plane(id: &str) -> PlaneModel {
        id.parse().unwrap()
    }

    #[test]
    fn incidence_examples() {
        let p = plane("classical-r");
        assert!(p.incident(&Point::Affine(r(2.0), r(5.0)), &Line::NonVertical(r(2.0), r(1.0)), 1e-9));
        let t = plane("tschet:r=3");
        assert!(t.incident(&Point::Affine(r(-1.0), r(1.0)), &Line::NonVertical(r(-1.0), r(0.0)), 1e-9));
        assert!(!p.incident(&Point::Infinity, &Line::NonVertical(r(0.0), r(0.0)), 1e-9));
    }

    #[test]
    fn join_and_meet_examples() {
        let p = plane("classical-r");
        let m = p.meet(&Line::NonVertical(r(1.0), r(0.0)), &Line::NonVertical(r(-1.0), r(0.0))).unwrap();
        assert!(m.distance(&Point::Affine(r(0.0), r(0.0))) < 1e-15);
        assert_eq!(p.meet(&Line::NonVertical(r(2.0), r(0.0)), &Line::NonVertical(r(2.0), r(1.0))).unwrap(), Point::Slope(r(2.0)));
        assert_eq!(p.join(&Point::Slope(r(1.0)), &Point::Infinity).unwrap(), Line::AtInfinity);

        let t = plane("tschet:r=3");
        let m = t.meet(&Line::NonVertical(r(-1.0), r(1.0)), &Line::NonVertical(r(0.0), r(0.0))).unwrap();
        assert!(m.distance(&Point::Affine(r(1.0), r(0.0))) < 1e-12);

        let mo = plane("moulton:k=2");
        let (a, b) = (Point::Affine(r(-1.0), r(2.0)), Point::Affine(r(1.0), r(-2.0)));
        let l = mo.join(&a, &b).unwrap();
        let Line::NonVertical(s, _) = l else { panic!() };
        // s < 0 branch: 2 = -2s + t and -2 = s + t give s = -4/3
        assert!((s.re() + 4.0 / 3.0).abs() < 1e-12);
        assert!(mo.incident(&a, &l, 1e-12) && mo.incident(&b, &l, 1e-12));
    }

    #[test]
    fn degenerate_inputs() {
        let p = plane("classical-c");
        let a = Point::Affine(El::complex(1.0, 0.0), El::complex(0.0, 1.0));
        assert!(matches!(p.join(&a, &a), Err(Error::Degenerate(_))));
        let l = Line::Vertical(El::complex(0.0, 0.0));
        assert!(matches!(p.meet(&l, &l), Err(Error::Degenerate(_))));
    }

    #[test]
    fn dualize_rules() {
        assert!(dualize(&plane("tschet:r=3:neg=2")).is_err());
        assert_eq!(dualize(&plane("tschet:r=3")).unwrap(), plane("tschet-dual:r=3"));
        assert!(dualize(&plane("moulton:k=2")).is_err());
    }

    #[test]
    fn shift_identifiers() {
        for id in ["shift-cosh", "shift-power:c=0.5", "shift-knarr:nonstandard=1"] {
            assert_eq!(plane(id).to_string(), id);
        }
        assert!("shift-knarr".parse::<PlaneModel>().is_err());
    }
}
