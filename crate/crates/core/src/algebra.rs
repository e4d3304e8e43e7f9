//! The four real composition algebras R, C, H and O.
//!
//! Elements are stored as fixed arrays of eight coordinates with a tag that
//! says how many are live. Quaternions use the basis `1, i, j, k`; a
//! quaternion `c' + c'' j` with complex halves `c', c''` has coordinates
//! `(c'_0, c'_1, c''_0, c''_1)`. Octonions are pairs of quaternions
//! `c' + c'' l` under the Cayley–Dickson rule
//! `(a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{normal, SampleRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    R,
    C,
    H,
    O,
}

impl Algebra {
    pub fn dim(self) -> usize {
        match self {
            Algebra::R => 1,
            Algebra::C => 2,
            Algebra::H => 4,
            Algebra::O => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Result<Algebra> {
        match dim {
            1 => Ok(Algebra::R),
            2 => Ok(Algebra::C),
            4 => Ok(Algebra::H),
            8 => Ok(Algebra::O),
            _ => Err(Error::Structural(format!("no composition algebra of dimension {dim}"))),
        }
    }

    /// The algebra this one is the Cayley–Dickson double of.
    pub fn half(self) -> Option<Algebra> {
        match self {
            Algebra::R => None,
            Algebra::C => Some(Algebra::R),
            Algebra::H => Some(Algebra::C),
            Algebra::O => Some(Algebra::H),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    alg: Algebra,
    c: [f64; 8],
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.alg, self.coords())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["", "i", "j", "k", "l", "il", "jl", "kl"];
        const CNAMES: [&str; 2] = ["", "i"];
        let names: &[&str] = if self.alg == Algebra::C { &CNAMES } else { &NAMES };
        let mut first = true;
        for (k, v) in self.coords().iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            if !first {
                write!(f, "{}", if *v < 0.0 { " - " } else { " + " })?;
            } else if *v < 0.0 {
                write!(f, "-")?;
            }
            write!(f, "{}{}", v.abs(), names[k])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl AlgebraElement {
    pub fn zero(alg: Algebra) -> Self {
        AlgebraElement { alg, c: [0.0; 8] }
    }

    pub fn one(alg: Algebra) -> Self {
        Self::real(alg, 1.0)
    }

    pub fn real(alg: Algebra, r: f64) -> Self {
        let mut e = Self::zero(alg);
        e.c[0] = r;
        e
    }

    /// The `k`-th basis unit (`1, i, j, k, l, il, jl, kl` in order).
    pub fn basis(alg: Algebra, k: usize) -> Self {
        assert!(k < alg.dim(), "basis index {k} out of range for {alg:?}");
        let mut e = Self::zero(alg);
        e.c[k] = 1.0;
        e
    }

    pub fn from_slice(alg: Algebra, coords: &[f64]) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(Error::Structural(format!(
                "{alg:?} needs {} coordinates, got {}",
                alg.dim(),
                coords.len()
            )));
        }
        let mut e = Self::zero(alg);
        e.c[..coords.len()].copy_from_slice(coords);
        Ok(e)
    }

    /// Build from a slice whose length picks the algebra.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        Self::from_slice(Algebra::from_dim(coords.len())?, coords)
    }

    pub fn quat(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        AlgebraElement { alg: Algebra::H, c: [c0, c1, c2, c3, 0.0, 0.0, 0.0, 0.0] }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        AlgebraElement { alg: Algebra::C, c: [re, im, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0] }
    }

    pub fn octo(c: [f64; 8]) -> Self {
        AlgebraElement { alg: Algebra::O, c }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.alg.dim()]
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        let d = self.alg.dim();
        &mut self.c[..d]
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// The pure (imaginary) part.
    pub fn pure(&self) -> Self {
        let mut e = *self;
        e.c[0] = 0.0;
        e
    }

    pub fn conj(&self) -> Self {
        let mut e = -*self;
        e.c[0] = self.c[0];
        e
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords().iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|v| *v == 0.0)
    }

    pub fn scale(&self, r: f64) -> Self {
        let mut e = *self;
        e.c.iter_mut().for_each(|v| *v *= r);
        e
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    /// `self / |self|`.
    pub fn unit(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(1.0 / n))
    }

    /// Split into Cayley–Dickson halves `(c', c'')` with `self = c' + c'' e`.
    pub fn halves(&self) -> (Self, Self) {
        let half = self.alg.half().expect("R has no Cayley-Dickson halves");
        let d = half.dim();
        let mut a = Self::zero(half);
        let mut b = Self::zero(half);
        a.c[..d].copy_from_slice(&self.c[..d]);
        b.c[..d].copy_from_slice(&self.c[d..2 * d]);
        (a, b)
    }

    /// Inverse of [`halves`](Self::halves).
    pub fn from_halves(a: &Self, b: &Self) -> Self {
        assert_eq!(a.alg, b.alg, "halves must share an algebra");
        let alg = match a.alg {
            Algebra::R => Algebra::C,
            Algebra::C => Algebra::H,
            Algebra::H => Algebra::O,
            Algebra::O => panic!("O cannot be doubled"),
        };
        let d = a.alg.dim();
        let mut e = Self::zero(alg);
        e.c[..d].copy_from_slice(a.coords());
        e.c[d..2 * d].copy_from_slice(b.coords());
        e
    }

    /// Re-tag a lower-dimensional element inside a larger algebra.
    pub fn embed(&self, alg: Algebra) -> Self {
        assert!(alg.dim() >= self.dim());
        AlgebraElement { alg, c: self.c }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.alg != other.alg {
            return Err(Error::Structural(format!(
                "cannot multiply {:?} by {:?}",
                self.alg, other.alg
            )));
        }
        Ok(mul_raw(self, other))
    }

    pub fn sample_normal(alg: Algebra, rng: &mut SampleRng) -> Self {
        let mut e = Self::zero(alg);
        for v in e.coords_mut() {
            *v = normal(rng);
        }
        e
    }

    /// Uniform point on the unit sphere; draws with `|v| < 1e-6` are rejected.
    pub fn sample_unit(alg: Algebra, rng: &mut SampleRng) -> Self {
        loop {
            let v = Self::sample_normal(alg, rng);
            let n = v.norm();
            if n >= 1e-6 {
                return v.scale(1.0 / n);
            }
        }
    }

    /// Uniform unit with vanishing real part (needs `dim >= 2`).
    pub fn sample_pure_unit(alg: Algebra, rng: &mut SampleRng) -> Self {
        loop {
            let v = Self::sample_normal(alg, rng).pure();
            let n = v.norm();
            if n >= 1e-6 {
                return v.scale(1.0 / n);
            }
        }
    }
}

fn mul_raw(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let (x, y) = (&a.c, &b.c);
    let mut out = AlgebraElement::zero(a.alg);
    match a.alg {
        Algebra::R => out.c[0] = x[0] * y[0],
        Algebra::C => {
            out.c[0] = x[0] * y[0] - x[1] * y[1];
            out.c[1] = x[0] * y[1] + x[1] * y[0];
        }
        Algebra::H => {
            let q = qmul(&x[..4], &y[..4]);
            out.c[..4].copy_from_slice(&q);
        }
        Algebra::O => {
            // (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))
            let (qa, qb) = (&x[..4], &x[4..]);
            let (qc, qd) = (&y[..4], &y[4..]);
            let ac = qmul(qa, qc);
            let db = qmul(&qconj(qd), qb);
            let da = qmul(qd, qa);
            let bc = qmul(qb, &qconj(qc));
            for k in 0..4 {
                out.c[k] = ac[k] - db[k];
                out.c[4 + k] = da[k] + bc[k];
            }
        }
    }
    out
}

fn qmul(p: &[f64], q: &[f64]) -> [f64; 4] {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

fn qconj(p: &[f64]) -> [f64; 4] {
    [p[0], -p[1], -p[2], -p[3]]
}

impl Index<usize> for AlgebraElement {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.coords()[k]
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.alg, o.alg);
        let mut e = self;
        for k in 0..8 {
            e.c[k] += o.c[k];
        }
        e
    }
}

impl AddAssign for AlgebraElement {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.alg, o.alg);
        let mut e = self;
        for k in 0..8 {
            e.c[k] -= o.c[k];
        }
        e
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Algebra product. Panics on mismatched tags; use
/// [`AlgebraElement::try_mul`] for a checked version.
impl Mul for AlgebraElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.alg, o.alg, "mismatched algebra tags");
        mul_raw(&self, &o)
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = Self;
    fn mul(self, r: f64) -> Self {
        self.scale(r)
    }
}

/// `mul(a, b)` as a free function; errors on mismatched tags.
pub fn mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.try_mul(b)
}
