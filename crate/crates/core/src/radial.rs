//! Monotone homeomorphisms of `[0, inf)` fixing 0 and 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::bisect_half_line;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RadialSpec {
    Identity,
    Power(f64),
    /// `(x + x^2) / 2`.
    QuadMean,
    /// Piecewise linear through the knots, extended linearly past the last one.
    Spline(Vec<(f64, f64)>),
}

impl RadialSpec {
    /// Knots used by the `spline` identifier.
    pub fn default_spline() -> RadialSpec {
        RadialSpec::Spline(vec![(0.0, 0.0), (0.5, 0.3), (1.0, 1.0), (2.0, 2.6), (4.0, 5.0)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RadialSpec::Power(r) if !(*r > 0.0 && r.is_finite()) => {
                Err(Error::Parameter(format!("power exponent must be positive, got {r}")))
            }
            RadialSpec::Spline(k) => {
                if k.len() < 2 || k[0] != (0.0, 0.0) {
                    return Err(Error::Parameter("spline knots must start at (0,0)".into()));
                }
                if !k.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                    return Err(Error::Parameter("spline knots must be strictly increasing".into()));
                }
                if (self.eval(1.0) - 1.0).abs() > 1e-12 {
                    return Err(Error::Parameter("spline must fix 1".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Value at `x >= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RadialSpec::Identity => x,
            RadialSpec::Power(r) => x.powf(*r),
            RadialSpec::QuadMean => 0.5 * (x + x * x),
            RadialSpec::Spline(k) => piecewise(k, x, false),
        }
    }

    /// Inverse at `y >= 0`.
    pub fn inv(&self, y: f64) -> f64 {
        match self {
            RadialSpec::Identity => y,
            RadialSpec::Power(r) => y.powf(1.0 / r),
            RadialSpec::QuadMean => 0.5 * (-1.0 + (1.0 + 8.0 * y).sqrt()),
            RadialSpec::Spline(k) => piecewise(k, y, true),
        }
    }

    /// Inverse by bisection; used as an independent check of [`inv`](Self::inv).
    pub fn inv_bisect(&self, y: f64) -> Result<f64> {
        bisect_half_line(|x| self.eval(x) - y, 1.0)
    }

    /// Odd extension to the real line.
    pub fn signed(&self, x: f64) -> f64 {
        x.signum() * self.eval(x.abs())
    }

    pub fn signed_inv(&self, y: f64) -> f64 {
        y.signum() * self.inv(y.abs())
    }

    /// `|r| * |s|` under the distorted product `rho^-1(rho(r) rho(s))` with signs.
    pub fn star(&self, r: f64, s: f64) -> f64 {
        if r == 0.0 || s == 0.0 {
            return 0.0;
        }
        r.signum() * s.signum() * self.inv(self.eval(r.abs()) * self.eval(s.abs()))
    }

    /// True when `rho(xy) = rho(x) rho(y)`.
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, RadialSpec::Identity | RadialSpec::Power(_))
    }
}

/// Parse `a/b;c/d;...` into knot pairs.
pub(crate) fn parse_knots(list: &str) -> Result<Vec<(f64, f64)>> {
    let bad = |pair: &str| Error::Parse(format!("bad knot {pair:?}"));
    list.split(';')
        .map(|pair| {
            let (a, b) = pair.split_once('/').ok_or_else(|| bad(pair))?;
            Ok((a.parse().map_err(|_| bad(pair))?, b.parse().map_err(|_| bad(pair))?))
        })
        .collect()
}

fn piecewise(knots: &[(f64, f64)], v: f64, inverse: bool) -> f64 {
    let pick = |p: &(f64, f64)| if inverse { (p.1, p.0) } else { *p };
    let n = knots.len();
    let mut seg = n - 2;
    for s in 0..n - 1 {
        if v <= pick(&knots[s + 1]).0 {
            seg = s;
            break;
        }
    }
    let (x0, y0) = pick(&knots[seg]);
    let (x1, y1) = pick(&knots[seg + 1]);
    y0 + (v - x0) * (y1 - y0) / (x1 - x0)
}

impl fmt::Display for RadialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialSpec::Identity => write!(f, "identity"),
            RadialSpec::Power(r) => write!(f, "power:{r}"),
            RadialSpec::QuadMean => write!(f, "quadmean"),
            RadialSpec::Spline(k) if *self == RadialSpec::default_spline() => {
                let _ = k;
                write!(f, "spline")
            }
            RadialSpec::Spline(k) => {
                let parts: Vec<String> = k.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "spline:{}", parts.join(";"))
            }
        }
    }
}

impl FromStr for RadialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let spec = match (name, arg) {
            ("identity", None) => RadialSpec::Identity,
            ("quadmean", None) => RadialSpec::QuadMean,
            ("power", Some(r)) => RadialSpec::Power(
                r.parse().map_err(|_| Error::Parse(format!("bad power exponent {r:?}")))?,
            ),
            ("spline", None) => RadialSpec::default_spline(),
            ("spline", Some(list)) => RadialSpec::Spline(parse_knots(list)?),
            _ => return Err(Error::Parse(format!("unknown radial spec {s:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_agree_with_bisection() {
        for spec in [
            RadialSpec::Identity,
            RadialSpec::Power(3.0),
            RadialSpec::Power(0.4),
            RadialSpec::QuadMean,
            RadialSpec::default_spline(),
        ] {
            assert_eq!(spec.eval(0.0), 0.0);
            assert!((spec.eval(1.0) - 1.0).abs() < 1e-15);
            for y in [0.01, 0.3, 1.0, 2.5, 17.0] {
                let a = spec.inv(y);
                let b = spec.inv_bisect(y).unwrap();
                assert!((a - b).abs() < 1e-12 * (1.0 + a), "{spec} at {y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn quadmean_star() {
        // x with (x + x^2)/2 = 9, found by bisection independent of the closed form
        let oracle = crate::numeric::bisect(|x| 0.5 * (x + x * x) - 9.0, 0.0, 10.0).unwrap();
        assert!((RadialSpec::QuadMean.star(2.0, 2.0) - oracle).abs() < 1e-12);
        assert!((oracle - 3.772001872658765).abs() < 1e-12);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["identity", "power:2", "quadmean", "spline", "spline:0/0;1/1;3/2"] {
            let spec: RadialSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("spline:0/0;2/1".parse::<RadialSpec>().is_err());
        assert!("power:-1".parse::<RadialSpec>().is_err());
    }
}
