//! Small numerical kernels: bracketing, linear solves, numerical rank.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{solver_err, Error, Result};

pub const BISECTION_STEPS: usize = 200;

/// Root of a continuous `f` on `[lo, hi]` with a sign change.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(solver_err("no sign change on bracket", flo.abs().min(fhi.abs())));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of `f` on `[0, inf)` where `f(0) < 0` and `f` eventually turns positive.
pub fn bisect_half_line(mut f: impl FnMut(f64) -> f64, start: f64) -> Result<f64> {
    let f0 = f(0.0);
    if f0 >= 0.0 {
        return if f0 == 0.0 { Ok(0.0) } else { Err(solver_err("f(0) > 0 on half line", f0)) };
    }
    let mut hi = start.max(1e-300);
    for _ in 0..2100 {
        let v = f(hi);
        if v >= 0.0 {
            return bisect(f, 0.0, hi);
        }
        if !v.is_finite() {
            break;
        }
        hi *= 2.0;
    }
    Err(solver_err("no bracket on half line", f0.abs()))
}

/// Root of an increasing `f` on the whole line (bracket grows geometrically).
pub fn bisect_line(mut f: impl FnMut(f64) -> f64, center: f64, increasing: bool) -> Result<f64> {
    let sgn = if increasing { 1.0 } else { -1.0 };
    let mut g = |x: f64| sgn * f(x);
    let mut w = 1.0;
    for _ in 0..1100 {
        let (lo, hi) = (center - w, center + w);
        let (a, b) = (g(lo), g(hi));
        if a <= 0.0 && b >= 0.0 {
            return bisect(g, lo, hi);
        }
        if !(a.is_finite() && b.is_finite()) {
            break;
        }
        w *= 2.0;
    }
    Err(solver_err("no bracket on line", f64::NAN))
}

/// Matrix of a real-linear map on an algebra, columns are images of basis units.
pub fn matrix_of(alg: Algebra, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> DMatrix<f64> {
    let d = alg.dim();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        let img = f(&AlgebraElement::basis(alg, k));
        for r in 0..d {
            m[(r, k)] = img[r];
        }
    }
    m
}

pub fn to_vector(e: &AlgebraElement) -> DVector<f64> {
    DVector::from_column_slice(e.coords())
}

pub fn from_vector(alg: Algebra, v: &DVector<f64>) -> AlgebraElement {
    AlgebraElement::from_slice(alg, v.as_slice()).expect("vector length matches algebra")
}

/// Solve `m v = w` for a square nonsingular `m`.
pub fn linear_solve(m: DMatrix<f64>, w: &AlgebraElement) -> Result<AlgebraElement> {
    let alg = w.algebra();
    let lu = m.lu();
    let v = lu
        .solve(&to_vector(w))
        .ok_or_else(|| Error::Degenerate("singular linear map".into()))?;
    Ok(from_vector(alg, &v))
}

/// Numerical rank: singular values above `threshold * max(1, sigma_max)`.
pub fn numerical_rank(m: &DMatrix<f64>, threshold: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    sv.iter().filter(|s| **s > threshold * top).count()
}

/// Central-difference Jacobian of `f: R^n -> R^m`.
pub fn jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], step: f64) -> DMatrix<f64> {
    let n = x.len();
    let f0 = f(x);
    let m = f0.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    for k in 0..n {
        xp[k] = x[k] + step;
        let fp = f(&xp);
        xp[k] = x[k] - step;
        let fm = f(&xp);
        xp[k] = x[k];
        for r in 0..m {
            jac[(r, k)] = (fp[r] - fm[r]) / (2.0 * step);
        }
    }
    jac
}

/// Damped Gauss–Newton on `f: R^n -> R^m` from `x0`, least-squares steps via SVD.
pub fn gauss_newton(
    f: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut x = x0.to_vec();
    let mut r = norm(&f(&x));
    for _ in 0..max_iter {
        if r <= tol {
            break;
        }
        let jac = jacobian(&f, &x, 1e-7);
        let fx = DVector::from_vec(f(&x));
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&fx, 1e-12) else { break };
        let mut lam = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - lam * s).collect();
            let rc = norm(&f(&cand));
            if rc < r {
                x = cand;
                r = rc;
                improved = true;
                break;
            }
            lam *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (x, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        let r = bisect_half_line(|x| x * x * x - 1000.0, 1.0).unwrap();
        assert!((r - 10.0).abs() < 1e-12);
        let r = bisect_line(|x| -x + 7.0, 0.0, false).unwrap();
        assert!((r - 7.0).abs() < 1e-12);
    }

    #[test]
    fn rank_of_rank_one_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(numerical_rank(&m, 1e-6), 1);
    }

    #[test]
    fn gauss_newton_projects_onto_circle() {
        let (x, r) = gauss_newton(|v| vec![v[0] * v[0] + v[1] * v[1] - 1.0], &[2.0, 1.0], 1e-13, 100);
        assert!(r < 1e-12);
        assert!(((x[0] * x[0] + x[1] * x[1]) - 1.0).abs() < 1e-12);
    }
}
