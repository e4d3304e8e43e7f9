//! Automorphisms and anti-automorphisms of H and O used to build polarities.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::sampling::rng_for;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variance {
    Automorphism,
    AntiAutomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Morphism {
    /// `z -> conj(z)`.
    Conjugation,
    /// `z -> g^-1 conj(z) g` for a pure unit `g` (associative algebras only).
    TwistedConj(AlgebraElement),
    /// On O: `z' + z'' l -> z' - z'' l`.
    HalfFlip,
    /// On O: conjugation followed by the half flip, `z' + z'' l -> conj(z') + z'' l`.
    Lambda,
    /// `z -> conj(h) z h` for a unit `h` (associative algebras only).
    Inner(AlgebraElement),
    /// On O: `(a, b) -> (p a conj(p), u p b conj(p))` for unit quaternions `p, u`.
    PairAuto { p: AlgebraElement, u: AlgebraElement },
    Identity,
}

impl Morphism {
    pub fn variance(&self) -> Variance {
        match self {
            Morphism::Conjugation | Morphism::TwistedConj(_) | Morphism::Lambda => {
                Variance::AntiAutomorphism
            }
            _ => Variance::Automorphism,
        }
    }

    /// Check the map makes sense on `alg`.
    pub fn validate(&self, alg: Algebra) -> Result<()> {
        let unit = |e: &AlgebraElement, what: &str| -> Result<()> {
            if (e.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Parameter(format!("{what} must be a unit, |{what}| = {}", e.norm())));
            }
            Ok(())
        };
        match self {
            Morphism::Conjugation | Morphism::Identity => Ok(()),
            Morphism::HalfFlip | Morphism::Lambda | Morphism::PairAuto { .. }
                if alg != Algebra::O =>
            {
                Err(Error::Structural(format!("{self:?} acts on O only")))
            }
            Morphism::HalfFlip | Morphism::Lambda => Ok(()),
            Morphism::PairAuto { p, u } => {
                if p.algebra() != Algebra::H || u.algebra() != Algebra::H {
                    return Err(Error::Structural("pair automorphism needs quaternion p, u".into()));
                }
                unit(p, "p")?;
                unit(u, "u")
            }
            Morphism::TwistedConj(g) | Morphism::Inner(g) => {
                if alg == Algebra::O || g.algebra() != alg {
                    return Err(Error::Structural(format!("{self:?} needs an associative algebra matching g")));
                }
                unit(g, "g")?;
                if matches!(self, Morphism::TwistedConj(_)) && g.re().abs() > 1e-9 {
                    return Err(Error::Parameter("twisted conjugation needs a pure unit".into()));
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, z: &AlgebraElement) -> AlgebraElement {
        match self {
            Morphism::Identity => *z,
            Morphism::Conjugation => z.conj(),
            Morphism::TwistedConj(g) => g.conj() * z.conj() * *g,
            Morphism::Inner(h) => h.conj() * *z * *h,
            Morphism::HalfFlip => {
                let (a, b) = z.halves();
                AlgebraElement::from_halves(&a, &-b)
            }
            Morphism::Lambda => {
                let (a, b) = z.halves();
                AlgebraElement::from_halves(&a.conj(), &b)
            }
            Morphism::PairAuto { p, u } => {
                let (a, b) = z.halves();
                let pc = p.conj();
                AlgebraElement::from_halves(&(*p * a * pc), &(*u * *p * b * pc))
            }
        }
    }

    /// A morphism undoing `self`.
    pub fn inverse(&self) -> Morphism {
        match self {
            Morphism::Inner(h) => Morphism::Inner(h.conj()),
            Morphism::PairAuto { p, u } => {
                let q = *u * *p;
                let pi = p.conj();
                // (a, b) -> (p' a conj(p'), u' p' b conj(p')) with p' = conj(p), u' p' = conj(q)
                Morphism::PairAuto { p: pi, u: q.conj() * *p }
            }
            m => *m,
        }
    }

    pub fn compose_after(&self, first: &Morphism, z: &AlgebraElement) -> AlgebraElement {
        self.apply(&first.apply(z))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismReport {
    pub declared: Variance,
    pub samples: usize,
    pub law_residual: f64,
    pub inverse_residual: f64,
    pub passed: bool,
    /// A sampled pair `(x, y)` violating the declared law.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Check the (anti)homomorphism law and the inverse law on random pairs.
///
/// `declared` overrides the catalog variance so a wrongly declared map can be
/// tested.
pub fn morphism_verify(
    m: &Morphism,
    alg: Algebra,
    declared: Option<Variance>,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<MorphismReport> {
    m.validate(alg)?;
    let declared = declared.unwrap_or(m.variance());
    let inv = m.inverse();
    let mut law = 0.0f64;
    let mut invr = 0.0f64;
    let mut witness = None;
    for n in 0..n_samples {
        let mut rng = rng_for(seed, n as u64);
        let x = AlgebraElement::sample_normal(alg, &mut rng);
        let y = AlgebraElement::sample_normal(alg, &mut rng);
        let lhs = m.apply(&(x * y));
        let rhs = match declared {
            Variance::Automorphism => m.apply(&x) * m.apply(&y),
            Variance::AntiAutomorphism => m.apply(&y) * m.apply(&x),
        };
        let scale = 1.0 + x.norm() * y.norm();
        let r = lhs.dist(&rhs) / scale;
        if r > tol && witness.is_none() {
            witness = Some((x.coords().to_vec(), y.coords().to_vec()));
        }
        law = law.max(r);
        invr = invr.max(inv.apply(&m.apply(&x)).dist(&x) / (1.0 + x.norm()));
    }
    Ok(MorphismReport {
        declared,
        samples: n_samples,
        law_residual: law,
        inverse_residual: invr,
        passed: law <= tol && invr <= tol,
        witness,
    })
}
