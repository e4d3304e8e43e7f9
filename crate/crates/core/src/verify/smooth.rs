use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::structures::{CoordinateStructure as CS, Locus};

type El = AlgebraElement;

/// A one-sided derivative gap above this counts as a jump.
pub const JUMP_THRESHOLD: f64 = 1e-4;
const FIRST_ORDER_STEPS: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];
// second differences lose too many digits below 1e-4
const SECOND_ORDER_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Intercept used along the probe lines.
const PROBE_T: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    /// The coordinate held fixed (x for the slope locus, s for the x locus).
    pub fixed: f64,
    pub left: f64,
    pub right: f64,
    /// Smallest gap over the step sweep.
    pub jump: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub structure: String,
    pub locus: Option<Locus>,
    pub order: u8,
    pub probes: Vec<Probe>,
    pub max_jump: f64,
    pub jump_detected: bool,
    pub note: String,
}

fn one_sided(g: &dyn Fn(f64) -> f64, order: u8, h: f64) -> (f64, f64) {
    let g0 = g(0.0);
    match order {
        1 => ((g0 - g(-h)) / h, (g(h) - g0) / h),
        _ => ((g0 - 2.0 * g(-h) + g(-2.0 * h)) / (h * h), (g(2.0 * h) - 2.0 * g(h) + g0) / (h * h)),
    }
}

/// One-sided derivatives of `tau` across a gluing locus at 20 probe lines.
pub fn smoothness_probe(cs: &CS, locus: Locus, order: u8) -> Result<SmoothnessReport> {
    if !(1..=2).contains(&order) {
        return Err(Error::Parameter(format!("order must be 1 or 2, got {order}")));
    }
    let structure = cs.to_string();
    if !cs.gluing_loci().contains(&locus) {
        return Ok(SmoothnessReport {
            structure,
            locus: None,
            order,
            probes: vec![],
            max_jump: 0.0,
            jump_detected: false,
            note: "smooth: no locus".into(),
        });
    }
    let r = |v: f64| El::real(Algebra::R, v);
    let steps: &[f64] = if order == 1 { &FIRST_ORDER_STEPS } else { &SECOND_ORDER_STEPS };
    let mut probes = Vec::new();
    // fixed values -2.5, ..., -0.25, 0.25, ..., 2.5
    for i in (-10..=10).filter(|i| *i != 0) {
        let fixed = 0.25 * i as f64;
        let g = |v: f64| match locus {
            Locus::SlopeSign => cs.ternary(&r(v), &r(fixed), &r(PROBE_T)).re(),
            Locus::XSign => cs.ternary(&r(fixed), &r(v), &r(PROBE_T)).re(),
        };
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for h in steps {
            let (left, right) = one_sided(&g, order, *h);
            let gap = (right - left).abs();
            if gap < best.0 {
                best = (gap, left, right);
            }
        }
        probes.push(Probe { fixed, left: best.1, right: best.2, jump: best.0 });
    }
    let max_jump = probes.iter().fold(0.0f64, |a, p| a.max(p.jump));
    let jump_detected = max_jump > JUMP_THRESHOLD;
    let note = if jump_detected { format!("order-{order} jump across {locus:?}") } else { "no jump found".into() };
    Ok(SmoothnessReport { structure, locus: Some(locus), order, probes, max_jump, jump_detected, note })
}
