//! Sampling-based axiom suites, configuration tests and smoothness probes.
//!
//! Every sample `i` of a suite draws from `rng_for(seed, i)`, so a witness is
//! replayed from the report alone.

mod axioms;
mod config;
mod smooth;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::PlaneModel;
use crate::polarity::Polarity;

pub use axioms::{check_algebra_axioms, check_plane_axioms, check_polarity, AlgebraClass};
pub use config::{configuration_test, replay_configuration, sample_disks, ConfigKind, ConfigWitness, ConfigurationReport, Region, DEGENERACY, DESARGUES_FAIL};
pub use smooth::{smoothness_probe, Probe, SmoothnessReport, JUMP_THRESHOLD};

/// Coordinates of a failing sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub check: String,
    pub residual: f64,
    pub data: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub plane: String,
    pub seed: u64,
    pub tol: f64,
    pub attempted: usize,
    pub passed_samples: usize,
    pub skipped: usize,
    pub max_residual: f64,
    /// The first few failures and the worst one.
    pub witnesses: Vec<Witness>,
    pub passed: bool,
}

/// One check evaluated on one sample.
pub(crate) struct Outcome {
    pub check: &'static str,
    pub residual: f64,
    pub data: Vec<f64>,
}

impl Outcome {
    pub fn new(check: &'static str, residual: f64, data: Vec<f64>) -> Outcome {
        // errors and NaN count as failures
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        Outcome { check, residual, data }
    }
}

/// `None` marks a skipped (degenerate) draw.
pub(crate) type Sampler<'a> = Box<dyn Fn(u64) -> Option<Vec<Outcome>> + Sync + 'a>;

const KEPT_WITNESSES: usize = 5;

pub(crate) fn run_suite(suite: String, plane: String, seed: u64, tol: f64, n: usize, sampler: &Sampler) -> VerificationReport {
    let mut report = VerificationReport {
        suite,
        plane,
        seed,
        tol,
        attempted: n,
        passed_samples: 0,
        skipped: 0,
        max_residual: 0.0,
        witnesses: Vec::new(),
        passed: true,
    };
    let mut worst: Option<Witness> = None;
    for i in 0..n as u64 {
        let Some(outcomes) = sampler(i) else {
            report.skipped += 1;
            continue;
        };
        let mut ok = true;
        for o in outcomes {
            report.max_residual = report.max_residual.max(o.residual);
            if o.residual > tol {
                ok = false;
                let w = Witness { index: i, check: o.check.to_string(), residual: o.residual, data: o.data };
                if worst.as_ref().is_none_or(|b| w.residual > b.residual) {
                    worst = Some(w.clone());
                }
                if report.witnesses.len() < KEPT_WITNESSES {
                    report.witnesses.push(w);
                }
            }
        }
        if ok {
            report.passed_samples += 1;
        }
    }
    if let Some(w) = worst {
        if !report.witnesses.contains(&w) {
            report.witnesses.push(w);
        }
    }
    report.passed = report.passed_samples + report.skipped == n;
    report
}

/// Recompute the residual of a stored witness.
pub fn replay(report: &VerificationReport, witness: &Witness) -> Result<f64> {
    let plane: PlaneModel = report.plane.parse()?;
    let sampler: Sampler = match report.suite.split_once(':') {
        None if report.suite == "plane-axioms" => axioms::plane_sampler(&plane, report.seed),
        Some(("algebra", class)) => {
            let cs = plane.structure().ok_or_else(|| Error::Unsupported("algebra suites need a ternary plane".into()))?.clone();
            axioms::algebra_sampler(cs, class.parse()?, report.seed)
        }
        Some(("polarity", name)) => {
            let pol = Polarity::catalog(&plane, name)?;
            axioms::polarity_sampler(pol, report.seed)
        }
        _ => return Err(Error::Unsupported(format!("cannot replay suite {:?}", report.suite))),
    };
    let outcomes = sampler(witness.index).ok_or_else(|| Error::Degenerate("witness sample is now skipped".into()))?;
    outcomes
        .into_iter()
        .find(|o| o.check == witness.check)
        .map(|o| o.residual)
        .ok_or_else(|| Error::NotFound(format!("check {:?} not produced on replay", witness.check)))
}
