//! Ternary fields coordinatizing the planes in the catalog.
//!
//! Every structure evaluates `tau(s, x, t)`; all but the two Tschetweruchin
//! families are Cartesian, i.e. `tau(s, x, t) = s∘x + t` with ordinary vector
//! addition. The `solve_*` kernels invert the product and are what join and
//! meet are built on.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{solver_err, Error, Result};
use crate::numeric::{bisect_half_line, linear_solve, matrix_of};
use crate::radial::{parse_knots, RadialSpec};

type El = AlgebraElement;

/// Angle law for André systems: `phi(r) = exp(i * psi(ln r))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AndreSpec {
    /// `psi(sigma) = beta * sigma`, a homomorphism `(R_{>0}, *) -> U(1)`.
    Homomorphic { beta: f64 },
    /// Piecewise linear `psi` through the knots `(sigma, angle)`; must pass `(0, 0)`.
    Spline(Vec<(f64, f64)>),
}

impl AndreSpec {
    pub fn default_spline() -> AndreSpec {
        AndreSpec::Spline(vec![(-2.0, -1.0), (-1.0, 0.2), (0.0, 0.0), (1.0, 0.9), (2.0, 0.7)])
    }

    fn angle(&self, r: f64) -> f64 {
        let sigma = r.ln();
        match self {
            AndreSpec::Homomorphic { beta } => beta * sigma,
            AndreSpec::Spline(k) => {
                let n = k.len();
                let mut seg = n - 2;
                for s in 0..n - 1 {
                    if sigma <= k[s + 1].0 {
                        seg = s;
                        break;
                    }
                }
                let ((x0, y0), (x1, y1)) = (k[seg], k[seg + 1]);
                y0 + (sigma - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// `phi(r)` as a unit quaternion in `C`.
    pub fn phi(&self, r: f64) -> El {
        let a = self.angle(r);
        El::quat(a.cos(), a.sin(), 0.0, 0.0)
    }
}

/// A homeomorphism `x -> x^rho` of the real line fixing 0 and 1:
/// `rho(x)` for `x >= 0` and `-neg * rho(-x)` for `x < 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedRho {
    pub radial: RadialSpec,
    pub neg: f64,
}

impl SignedRho {
    pub fn power(r: f64) -> SignedRho {
        SignedRho { radial: RadialSpec::Power(r), neg: 1.0 }
    }

    pub fn f(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.radial.eval(x)
        } else {
            -self.neg * self.radial.eval(-x)
        }
    }

    pub fn inv(&self, y: f64) -> f64 {
        if y >= 0.0 {
            self.radial.inv(y)
        } else {
            -self.radial.inv(-y / self.neg)
        }
    }

    pub fn is_odd(&self) -> bool {
        self.neg == 1.0
    }

    /// Odd and multiplicative, so `(xy)^rho = x^rho y^rho` on the whole line.
    pub fn is_multiplicative(&self) -> bool {
        self.is_odd() && self.radial.is_multiplicative()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CoordinateStructure {
    Classical(Algebra),
    MutationH { mu: f64 },
    MutationO { mu: f64 },
    Rees { theta: f64 },
    Lenz5 { alpha: f64 },
    Andre(AndreSpec),
    Haehl(RadialSpec),
    DistortedH(RadialSpec),
    DistortedO(RadialSpec),
    Spin { r: f64 },
    Moulton { k: f64 },
    /// Lines of slope `s >= boundary` are straight; `boundary` is 0 except in
    /// deliberately broken fixtures.
    Tschet { rho: SignedRho, boundary: f64 },
    TschetDual { rho: SignedRho },
}

use CoordinateStructure as CS;

impl CoordinateStructure {
    pub fn tschet(r: f64) -> CS {
        CS::Tschet { rho: SignedRho::power(r), boundary: 0.0 }
    }

    pub fn tschet_dual(r: f64) -> CS {
        CS::TschetDual { rho: SignedRho::power(r) }
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            CS::Classical(a) => *a,
            CS::MutationO { .. } | CS::DistortedO(_) => Algebra::O,
            CS::Moulton { .. } | CS::Tschet { .. } | CS::TschetDual { .. } => Algebra::R,
            _ => Algebra::H,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        match self {
            CS::MutationH { mu } | CS::MutationO { mu } if !(*mu > 0.5) => {
                bad(format!("mutation parameter must exceed 1/2, got {mu}"))
            }
            CS::Rees { theta } if !(*theta > 0.0 && *theta < PI) => {
                bad(format!("rees angle must lie in (0, pi), got {theta}"))
            }
            CS::Lenz5 { alpha } if !(*alpha > 0.0 && *alpha < PI / 2.0) => {
                bad(format!("lenz5 angle must lie in (0, pi/2), got {alpha}"))
            }
            CS::Spin { r } if !(*r > 0.0) => bad(format!("spin parameter must be positive, got {r}")),
            CS::Moulton { k } if !(*k > 1.0) => bad(format!("moulton k must exceed 1, got {k}")),
            CS::Andre(AndreSpec::Spline(k)) => {
                if k.len() < 2 || !k.windows(2).all(|w| w[1].0 > w[0].0) {
                    return bad("andre spline knots need increasing abscissae".into());
                }
                if !k.contains(&(0.0, 0.0)) {
                    return bad("andre spline must pass through (0, 0)".into());
                }
                Ok(())
            }
            CS::Haehl(r) | CS::DistortedH(r) | CS::DistortedO(r) => r.validate(),
            CS::Tschet { rho, .. } | CS::TschetDual { rho } => {
                rho.radial.validate()?;
                if !(rho.neg > 0.0) {
                    return bad("negative-branch factor must be positive".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `tau(s, x, t) = s∘x + t` holds identically.
    pub fn is_cartesian(&self) -> bool {
        !matches!(self, CS::Tschet { .. } | CS::TschetDual { .. })
    }

    /// `x -> s∘x` is real-linear for every `s` (one distributive law).
    pub fn linear_in_x(&self) -> bool {
        !matches!(
            self,
            CS::DistortedH(_) | CS::DistortedO(_) | CS::Moulton { .. } | CS::Tschet { .. } | CS::TschetDual { .. }
        )
    }

    /// `s -> s∘x` is real-linear for every `x` (the other distributive law).
    pub fn linear_in_s(&self) -> bool {
        matches!(
            self,
            CS::Classical(_) | CS::MutationH { .. } | CS::MutationO { .. } | CS::Rees { .. } | CS::Lenz5 { .. } | CS::Spin { .. }
        )
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self, CS::Classical(Algebra::R) | CS::Classical(Algebra::C) | CS::Moulton { .. })
    }

    pub fn zero(&self) -> El {
        El::zero(self.algebra())
    }

    pub fn one(&self) -> El {
        El::one(self.algebra())
    }

    /// Product `s∘x`, i.e. `tau(s, x, 0)`.
    pub fn multiply(&self, s: &El, x: &El) -> El {
        match self {
            CS::Classical(_) => *s * *x,
            CS::MutationH { mu } | CS::MutationO { mu } => (*s * *x) * *mu + (*x * *s) * (1.0 - mu),
            CS::Rees { theta } => {
                let (a, b) = s.halves();
                let (x1, y1) = x.halves();
                let e = El::complex(theta.cos(), theta.sin());
                let first = a * x1 + e * y1 * b.conj();
                let second = x1 * b + a.conj() * y1;
                El::from_halves(&first, &second)
            }
            CS::Lenz5 { alpha } => {
                let (sigma, frak) = lenz_split(*alpha, s);
                let a = El::quat(alpha.cos(), alpha.sin(), 0.0, 0.0);
                *x * sigma + frak * *x * a
            }
            CS::Andre(spec) => {
                let r = s.norm();
                if r == 0.0 {
                    return El::zero(Algebra::H);
                }
                let g = spec.phi(r);
                *s * (g.conj() * *x * g)
            }
            CS::Haehl(rho) => {
                let r = s.norm();
                if r == 0.0 {
                    return El::zero(Algebra::H);
                }
                let phi = rho.eval(r) / r;
                *s * (El::real(Algebra::H, x.re()) + x.pure() * phi)
            }
            CS::DistortedH(rho) | CS::DistortedO(rho) => {
                let (nc, nz) = (s.norm(), x.norm());
                if nc == 0.0 || nz == 0.0 {
                    return El::zero(s.algebra());
                }
                let p = *s * *x;
                p * (rho.star(nc, nz) / p.norm())
            }
            CS::Spin { r } => {
                let mut p = *s * *x;
                p.coords_mut()[0] += 2.0 * r * (s[2] * x[3] - s[3] * x[2]);
                p
            }
            CS::Moulton { k } => {
                let (a, b) = (s.re(), x.re());
                El::real(Algebra::R, if a < 0.0 && b < 0.0 { k * a * b } else { a * b })
            }
            CS::Tschet { .. } | CS::TschetDual { .. } => self.ternary(s, x, &self.zero()),
        }
    }

    /// The ternary operation `tau(s, x, t)`.
    pub fn ternary(&self, s: &El, x: &El, t: &El) -> El {
        match self {
            CS::Tschet { rho, boundary } => El::real(Algebra::R, tschet_tau(rho, *boundary, s.re(), x.re(), t.re())),
            CS::TschetDual { rho } => El::real(Algebra::R, tschet_tau(rho, 0.0, x.re(), s.re(), t.re())),
            _ => self.multiply(s, x) + *t,
        }
    }

    /// `x + t := tau(1, x, t)`.
    pub fn add(&self, x: &El, t: &El) -> El {
        self.ternary(&self.one(), x, t)
    }

    /// The `s` with `s∘x = w`.
    pub fn solve_slope(&self, x: &El, w: &El) -> Result<El> {
        if x.is_zero() {
            return Err(Error::Degenerate("solve_slope needs x != 0".into()));
        }
        let alg = self.algebra();
        let s = match self {
            CS::Classical(_) => *w * x.inverse()?,
            CS::MutationH { .. } | CS::MutationO { .. } | CS::Rees { .. } | CS::Lenz5 { .. } | CS::Spin { .. } => {
                linear_solve(matrix_of(alg, |s| self.multiply(s, x)), w)?
            }
            CS::Andre(spec) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let g = spec.phi(w.norm() / x.norm());
                *w * (g.conj() * *x * g).inverse()?
            }
            CS::Haehl(rho) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let (x0, xp) = (x.re(), x.pure());
                let target = w.norm_sq();
                let r = radial_root(|r| r * r * x0 * x0 + rho.eval(r).powi(2) * xp.norm_sq() - target, "haehl slope")?;
                let inner = El::real(alg, x0) + xp * (rho.eval(r) / r);
                *w * inner.inverse()?
            }
            CS::DistortedH(rho) | CS::DistortedO(rho) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let r = rho.inv(rho.eval(w.norm()) / rho.eval(x.norm()));
                (w.unit()? * x.unit()?.inverse()?) * r
            }
            CS::Moulton { k } => {
                let (x, w) = (x.re(), w.re());
                let s = pick_branch(
                    &[(Some(w / x), &|s: f64| !(s < 0.0 && x < 0.0)), (Some(w / (k * x)), &|s: f64| s < 0.0 && x < 0.0)],
                    "moulton slope",
                )?;
                El::real(alg, s)
            }
            CS::Tschet { rho, boundary } => {
                let (x, w) = (x.re(), w.re());
                let b = *boundary;
                let straight = w / x;
                let curved = rho.inv(rho.f(w) / rho.f(x));
                El::real(alg, pick2(straight, straight >= b, curved, curved < b, "tschet slope")?)
            }
            CS::TschetDual { rho } => {
                let (x, w) = (x.re(), w.re());
                let s = if x >= 0.0 { w / x } else { rho.inv(rho.f(w) / rho.f(x)) };
                El::real(alg, s)
            }
        };
        Ok(s)
    }

    /// The `x` with `s∘x = w`.
    pub fn solve_point(&self, s: &El, w: &El) -> Result<El> {
        if s.is_zero() {
            return Err(Error::Degenerate("solve_point needs s != 0".into()));
        }
        let alg = self.algebra();
        let x = match self {
            CS::Classical(_) => s.inverse()? * *w,
            CS::MutationH { .. } | CS::MutationO { .. } | CS::Rees { .. } | CS::Lenz5 { .. } | CS::Spin { .. } => {
                linear_solve(matrix_of(alg, |x| self.multiply(s, x)), w)?
            }
            CS::Andre(spec) => {
                let g = spec.phi(s.norm());
                g * (s.inverse()? * *w) * g.conj()
            }
            CS::Haehl(rho) => {
                let r = s.norm();
                let y = s.inverse()? * *w;
                El::real(alg, y.re()) + y.pure() * (r / rho.eval(r))
            }
            CS::DistortedH(rho) | CS::DistortedO(rho) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let r = rho.inv(rho.eval(w.norm()) / rho.eval(s.norm()));
                (s.unit()?.inverse()? * w.unit()?) * r
            }
            CS::Moulton { k } => {
                let (s, w) = (s.re(), w.re());
                let x = pick_branch(
                    &[(Some(w / s), &|x: f64| !(x < 0.0 && s < 0.0)), (Some(w / (k * s)), &|x: f64| x < 0.0 && s < 0.0)],
                    "moulton point",
                )?;
                El::real(alg, x)
            }
            CS::Tschet { rho, boundary } => {
                let (s, w) = (s.re(), w.re());
                El::real(alg, if s >= *boundary { w / s } else { rho.inv(rho.f(w) / rho.f(s)) })
            }
            CS::TschetDual { rho } => {
                let (s, w) = (s.re(), w.re());
                let straight = w / s;
                let curved = rho.inv(rho.f(w) / rho.f(s));
                El::real(alg, pick2(straight, straight >= 0.0, curved, curved < 0.0, "tschet-dual point")?)
            }
        };
        Ok(x)
    }

    /// The `s` with `s∘x1 - s∘x2 = w` (Cartesian families).
    pub fn solve_slope_diff(&self, x1: &El, x2: &El, w: &El) -> Result<El> {
        self.require_cartesian()?;
        if x1 == x2 {
            return Err(Error::Degenerate("solve_slope_diff needs x1 != x2".into()));
        }
        if self.linear_in_x() {
            return self.solve_slope(&(*x1 - *x2), w);
        }
        let alg = self.algebra();
        match self {
            CS::DistortedH(rho) | CS::DistortedO(rho) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let dir = |x: &El| x.unit().unwrap_or(El::zero(alg));
                let (u1, u2) = (dir(x1), dir(x2));
                let (n1, n2) = (x1.norm(), x2.norm());
                let v = |sig: f64| u1 * rho.star(sig, n1) - u2 * rho.star(sig, n2);
                let target = w.norm();
                let sig = radial_root(|sig| v(sig).norm() - target, "distorted join")?;
                let vv = v(sig);
                Ok((*w * vv.inverse()?) * sig)
            }
            CS::Moulton { k } => {
                let (a, b, w) = (x1.re(), x2.re(), w.re());
                let ka = if a < 0.0 { *k } else { 1.0 };
                let kb = if b < 0.0 { *k } else { 1.0 };
                let s = pick_branch(
                    &[(safe_div(w, a - b), &|s: f64| s >= 0.0), (safe_div(w, ka * a - kb * b), &|s: f64| s < 0.0)],
                    "moulton join",
                )?;
                Ok(El::real(alg, s))
            }
            _ => unreachable!("non-Cartesian handled above"),
        }
    }

    /// The `x` with `s1∘x - s2∘x = w` (Cartesian families).
    pub fn solve_point_diff(&self, s1: &El, s2: &El, w: &El) -> Result<El> {
        self.require_cartesian()?;
        if s1 == s2 {
            return Err(Error::Degenerate("solve_point_diff needs s1 != s2".into()));
        }
        let alg = self.algebra();
        if let CS::Classical(_) = self {
            return Ok((*s1 - *s2).inverse()? * *w);
        }
        if self.linear_in_x() {
            return linear_solve(matrix_of(alg, |x| self.multiply(s1, x) - self.multiply(s2, x)), w);
        }
        match self {
            CS::DistortedH(rho) | CS::DistortedO(rho) => {
                if w.is_zero() {
                    return Ok(El::zero(alg));
                }
                let dir = |x: &El| x.unit().unwrap_or(El::zero(alg));
                let (u1, u2) = (dir(s1), dir(s2));
                let (n1, n2) = (s1.norm(), s2.norm());
                let v = |r: f64| u1 * rho.star(n1, r) - u2 * rho.star(n2, r);
                let target = w.norm();
                let r = radial_root(|r| v(r).norm() - target, "distorted meet")?;
                Ok((v(r).inverse()? * *w) * r)
            }
            CS::Moulton { k } => {
                let (a, b, w) = (s1.re(), s2.re(), w.re());
                let ka = if a < 0.0 { *k } else { 1.0 };
                let kb = if b < 0.0 { *k } else { 1.0 };
                let x = pick_branch(
                    &[(safe_div(w, a - b), &|x: f64| x >= 0.0), (safe_div(w, ka * a - kb * b), &|x: f64| x < 0.0)],
                    "moulton meet",
                )?;
                Ok(El::real(alg, x))
            }
            _ => unreachable!("non-Cartesian handled above"),
        }
    }

    fn require_cartesian(&self) -> Result<()> {
        if self.is_cartesian() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{self} is not a Cartesian field")))
        }
    }

    /// Loci where `tau` is glued from different formulas.
    pub fn gluing_loci(&self) -> Vec<Locus> {
        match self {
            CS::Moulton { .. } => vec![Locus::SlopeSign, Locus::XSign],
            CS::Tschet { .. } => vec![Locus::SlopeSign],
            CS::TschetDual { .. } => vec![Locus::XSign],
            _ => vec![],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Locus {
    /// `s = 0`.
    SlopeSign,
    /// `x = 0`.
    XSign,
}

fn tschet_tau(rho: &SignedRho, boundary: f64, s: f64, x: f64, t: f64) -> f64 {
    if s >= boundary {
        s * x + t
    } else {
        rho.inv(rho.f(s) * rho.f(x) + rho.f(t))
    }
}

/// `s = sigma + frak * a` with `sigma` real and `frak` pure.
fn lenz_split(alpha: f64, s: &El) -> (f64, El) {
    let (c, sn) = (alpha.cos(), alpha.sin());
    let p1 = s[1] / c;
    let sigma = s[0] + p1 * sn;
    let p2 = c * s[2] - sn * s[3];
    let p3 = sn * s[2] + c * s[3];
    (sigma, El::quat(0.0, p1, p2, p3))
}

fn safe_div(a: f64, b: f64) -> Option<f64> {
    if b == 0.0 {
        None
    } else {
        Some(a / b)
    }
}

/// Choose the unique candidate consistent with its own branch.
fn pick_branch(cands: &[(Option<f64>, &dyn Fn(f64) -> bool)], ctx: &str) -> Result<f64> {
    let valid: Vec<f64> = cands.iter().filter_map(|(v, ok)| v.filter(|v| v.is_finite() && ok(*v))).collect();
    match valid.as_slice() {
        [v] => Ok(*v),
        [] => Err(solver_err(format!("{ctx}: no branch consistent"), f64::NAN)),
        [a, rest @ ..] => {
            if rest.iter().all(|b| (a - b).abs() <= 1e-12 * (1.0 + a.abs())) {
                Ok(*a)
            } else {
                Err(Error::NonUnique { context: ctx.into(), spread: rest.iter().map(|b| (a - b).abs()).fold(0.0, f64::max) })
            }
        }
    }
}

fn pick2(a: f64, a_ok: bool, b: f64, b_ok: bool, ctx: &str) -> Result<f64> {
    match (a_ok && a.is_finite(), b_ok && b.is_finite()) {
        (true, false) => Ok(a),
        (false, true) => Ok(b),
        (true, true) if (a - b).abs() <= 1e-12 * (1.0 + a.abs()) => Ok(a),
        (true, true) => Err(Error::NonUnique { context: ctx.into(), spread: (a - b).abs() }),
        (false, false) => Err(solver_err(format!("{ctx}: no branch consistent"), f64::NAN)),
    }
}

/// Root of `g` on `[0, inf)` with `g(0) < 0`, from three bracket scales that
/// must agree.
pub(crate) fn radial_root(g: impl Fn(f64) -> f64, ctx: &str) -> Result<f64> {
    let mut roots = [0.0; 3];
    for (k, start) in [0.25, 1.0, 8.0].iter().enumerate() {
        roots[k] = bisect_half_line(&g, *start).map_err(|e| match e {
            Error::Solver { best_residual, .. } => solver_err(ctx, best_residual),
            e => e,
        })?;
    }
    let spread = roots.iter().map(|r| (r - roots[0]).abs()).fold(0.0, f64::max);
    if spread > 1e-9 * (1.0 + roots[0]) {
        return Err(Error::NonUnique { context: ctx.into(), spread });
    }
    Ok(roots[0])
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for SignedRho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radial {
            RadialSpec::Power(r) => write!(f, "r={}", fmt_num(*r))?,
            other => write!(f, "rho={other}")?,
        }
        if self.neg != 1.0 {
            write!(f, ":neg={}", fmt_num(self.neg))?;
        }
        Ok(())
    }
}

impl fmt::Display for CoordinateStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CS::Classical(a) => write!(f, "classical-{}", format!("{a:?}").to_lowercase()),
            CS::MutationH { mu } => write!(f, "mutation-h:mu={}", fmt_num(*mu)),
            CS::MutationO { mu } => write!(f, "mutation-o:mu={}", fmt_num(*mu)),
            CS::Rees { theta } => write!(f, "rees:theta={}", fmt_num(*theta)),
            CS::Lenz5 { alpha } => write!(f, "lenz5:alpha={}", fmt_num(*alpha)),
            CS::Andre(AndreSpec::Homomorphic { beta }) => write!(f, "andre:beta={}", fmt_num(*beta)),
            CS::Andre(spec) if *spec == AndreSpec::default_spline() => write!(f, "andre:phi=spline"),
            CS::Andre(AndreSpec::Spline(k)) => {
                let parts: Vec<String> = k.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "andre:phi=spline:{}", parts.join(";"))
            }
            CS::Haehl(r) => write!(f, "haehl:rho={r}"),
            CS::DistortedH(r) => write!(f, "distorted-h:rho={r}"),
            CS::DistortedO(r) => write!(f, "distorted-o:rho={r}"),
            CS::Spin { r } => write!(f, "spin:r={}", fmt_num(*r)),
            CS::Moulton { k } => write!(f, "moulton:k={}", fmt_num(*k)),
            CS::Tschet { rho, boundary } => {
                write!(f, "tschet:{rho}")?;
                if *boundary != 0.0 {
                    write!(f, ":boundary={}", fmt_num(*boundary))?;
                }
                Ok(())
            }
            CS::TschetDual { rho } => write!(f, "tschet-dual:{rho}"),
        }
    }
}

/// Split `family(:key=value)*`; a segment without `=` continues the previous
/// value, so `rho=power:2` reads as one value.
pub(crate) fn split_identifier(s: &str) -> Result<(String, BTreeMap<String, String>)> {
    let mut parts = s.split(':');
    let family = parts.next().unwrap_or_default().trim().to_string();
    if family.is_empty() {
        return Err(Error::Parse("empty identifier".into()));
    }
    let mut map = BTreeMap::new();
    let mut last: Option<String> = None;
    for seg in parts {
        match seg.split_once('=') {
            Some((k, v)) => {
                if k.is_empty() || k.chars().any(|c| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')) {
                    return Err(Error::Parse(format!("bad key {k:?} in {s:?}")));
                }
                if map.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(Error::Parse(format!("duplicate key {k:?} in {s:?}")));
                }
                last = Some(k.to_string());
            }
            None => {
                let key = last.clone().ok_or_else(|| Error::Parse(format!("segment {seg:?} has no key in {s:?}")))?;
                let v = map.get_mut(&key).expect("key just inserted");
                v.push(':');
                v.push_str(seg);
            }
        }
    }
    Ok((family, map))
}

pub(crate) struct Params {
    map: BTreeMap<String, String>,
    id: String,
}

impl Params {
    pub(crate) fn new(map: BTreeMap<String, String>, id: &str) -> Params {
        Params { map, id: id.to_string() }
    }

    pub(crate) fn num(&mut self, key: &str) -> Result<f64> {
        let v = self.map.remove(key).ok_or_else(|| Error::Parse(format!("{} needs {key}=", self.id)))?;
        v.parse().map_err(|_| Error::Parse(format!("{key}={v:?} is not a number")))
    }

    pub(crate) fn opt_num(&mut self, key: &str) -> Result<Option<f64>> {
        if self.map.contains_key(key) {
            self.num(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub(crate) fn text(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub(crate) fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(Error::Parse(format!("unknown key {k:?} in {}", self.id))),
            None => Ok(()),
        }
    }
}

fn parse_rho1(p: &mut Params) -> Result<SignedRho> {
    let radial = match (p.opt_num("r")?, p.text("rho")) {
        (Some(r), None) => RadialSpec::Power(r),
        (None, Some(spec)) => spec.parse()?,
        (None, None) => return Err(Error::Parse("tschet needs r= or rho=".into())),
        (Some(_), Some(_)) => return Err(Error::Parse("give only one of r= and rho=".into())),
    };
    Ok(SignedRho { radial, neg: p.opt_num("neg")?.unwrap_or(1.0) })
}

impl FromStr for CoordinateStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, map) = split_identifier(s)?;
        let mut p = Params::new(map, s);
        let radial = |p: &mut Params| -> Result<RadialSpec> {
            p.text("rho").ok_or_else(|| Error::Parse(format!("{s} needs rho=")))?.parse()
        };
        let cs = match family.as_str() {
            "classical-r" => CS::Classical(Algebra::R),
            "classical-c" => CS::Classical(Algebra::C),
            "classical-h" => CS::Classical(Algebra::H),
            "classical-o" => CS::Classical(Algebra::O),
            "mutation-h" => CS::MutationH { mu: p.num("mu")? },
            "mutation-o" => CS::MutationO { mu: p.num("mu")? },
            "rees" => CS::Rees { theta: p.num("theta")? },
            "lenz5" => CS::Lenz5 { alpha: p.num("alpha")? },
            "andre" => match (p.opt_num("beta")?, p.text("phi")) {
                (Some(beta), None) => CS::Andre(AndreSpec::Homomorphic { beta }),
                (None, Some(phi)) if phi == "spline" => CS::Andre(AndreSpec::default_spline()),
                (None, Some(phi)) => match phi.strip_prefix("spline:") {
                    Some(list) => CS::Andre(AndreSpec::Spline(parse_knots(list)?)),
                    None => return Err(Error::Parse(format!("unknown andre phi {phi:?}"))),
                },
                _ => return Err(Error::Parse("andre needs exactly one of beta= and phi=".into())),
            },
            "haehl" => CS::Haehl(radial(&mut p)?),
            "distorted-h" => CS::DistortedH(radial(&mut p)?),
            "distorted-o" => CS::DistortedO(radial(&mut p)?),
            "spin" => CS::Spin { r: p.num("r")? },
            "moulton" => CS::Moulton { k: p.num("k")? },
            "tschet" => {
                let rho = parse_rho1(&mut p)?;
                CS::Tschet { rho, boundary: p.opt_num("boundary")?.unwrap_or(0.0) }
            }
            "tschet-dual" => CS::TschetDual { rho: parse_rho1(&mut p)? },
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        p.finish()?;
        cs.validate()?;
        Ok(cs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> El {
        El::real(Algebra::R, v)
    }

    fn h(k: usize) -> El {
        El::basis(Algebra::H, k)
    }

    #[test]
    fn ternary_examples() {
        let t3 = CS::tschet(3.0);
        assert!((t3.ternary(&r(-1.0), &r(-1.0), &r(0.0)).re() - 1.0).abs() < 1e-12);
        let m = CS::Moulton { k: 2.0 };
        assert_eq!(m.ternary(&r(-1.0), &r(-2.0), &r(1.0)).re(), 5.0);
        let d = CS::tschet_dual(3.0);
        assert!((d.add(&r(-1.0), &r(2.0)).re() - 7f64.cbrt()).abs() < 1e-12);
        assert!((t3.add(&r(-1.0), &r(2.0)).re() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moulton_slope_branches() {
        let m = CS::Moulton { k: 2.0 };
        assert_eq!(m.solve_slope(&r(-1.0), &r(3.0)).unwrap().re(), -1.5);
    }

    #[test]
    fn classical_solves() {
        let c = CS::Classical(Algebra::H);
        assert!(c.solve_slope(&h(2), &h(3)).unwrap().dist(&h(1)) < 1e-15);
        let cc = CS::Classical(Algebra::C);
        let x = cc.solve_point(&El::complex(0.0, 2.0), &El::complex(2.0, 0.0)).unwrap();
        assert!(x.dist(&El::complex(0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn identifiers_parse_and_print() {
        for id in [
            "mutation-h:mu=0.75",
            "moulton:k=2",
            "tschet:r=3",
            "distorted-h:rho=power:2",
            "spin:r=0.5",
            "rees:theta=1.0471975512",
            "andre:phi=spline",
            "andre:beta=0.5",
            "haehl:rho=quadmean",
            "tschet-dual:rho=quadmean:neg=2",
            "classical-o",
        ] {
            let cs: CS = id.parse().unwrap();
            assert_eq!(cs.to_string(), id);
        }
        assert!("mutation-h:mu=0.4".parse::<CS>().is_err());
        assert!("moulton:k=2:z=1".parse::<CS>().is_err());
        assert!("moulton".parse::<CS>().is_err());
        assert!("rees:theta=4".parse::<CS>().is_err());
    }
}
