use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use crate::sampling::{rng_for, uniform, SampleRng};

type El = AlgebraElement;

/// Minimal separation of points and slopes inside a configuration.
pub const DEGENERACY: f64 = 1e-4;
/// Discrepancy above which a configuration counts as failing.
pub const DESARGUES_FAIL: f64 = 1e-3;
/// Intermediate points further out than this are treated as degenerate.
const FAR: f64 = 1e3;
const RETRIES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Window { xmin: f64, xmax: f64, ymin: f64, ymax: f64 },
    Disk { cx: f64, cy: f64, radius: f64 },
}

impl Region {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Region::Window { xmin, xmax, ymin, ymax } => (xmin..=xmax).contains(&x) && (ymin..=ymax).contains(&y),
            Region::Disk { cx, cy, radius } => (x - cx).hypot(y - cy) <= radius,
        }
    }

    fn x_range(&self) -> (f64, f64) {
        match *self {
            Region::Window { xmin, xmax, .. } => (xmin, xmax),
            Region::Disk { cx, radius, .. } => (cx - radius, cx + radius),
        }
    }

    fn y_range(&self) -> (f64, f64) {
        match *self {
            Region::Window { ymin, ymax, .. } => (ymin, ymax),
            Region::Disk { cy, radius, .. } => (cy - radius, cy + radius),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Region::Window { xmin, xmax, ymin, ymax } => xmin < xmax && ymin < ymax,
            Region::Disk { radius, .. } => radius > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("empty region {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigKind {
    Desargues,
    Pappus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigWitness {
    pub trial: u64,
    /// Desargues: `o, a, b, c, a', b', c'`; Pappus: `a1, b1, c1, a2, b2, c2`.
    pub points: Vec<Point>,
    /// The closing point and its prediction on the closing line.
    pub closing: (Point, Point),
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub kind: ConfigKind,
    pub plane: String,
    pub seed: u64,
    pub region: Option<Region>,
    pub trials: usize,
    /// Trials that found no nondegenerate configuration within the retries.
    pub skipped: usize,
    pub max_discrepancy: f64,
    pub witness: Option<ConfigWitness>,
}

fn coords(p: &Point) -> Option<Vec<f64>> {
    p.flat()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

struct Builder<'a> {
    plane: &'a PlaneModel,
    region: Option<Region>,
}

impl Builder<'_> {
    fn point(&self, rng: &mut SampleRng) -> Point {
        match self.region {
            None => self.plane.random_point(rng),
            Some(region) => loop {
                let (x0, x1) = region.x_range();
                let (y0, y1) = region.y_range();
                let (x, y) = (uniform(rng, x0, x1), uniform(rng, y0, y1));
                if region.contains(x, y) {
                    return Point::Affine(El::real(Algebra::R, x), El::real(Algebra::R, y));
                }
            },
        }
    }

    /// A random point of `l` inside the region.
    fn point_on(&self, l: &Line, rng: &mut SampleRng) -> Option<Point> {
        let alg = self.plane.algebra();
        for _ in 0..20 {
            let p = match (l, self.region) {
                (Line::NonVertical(..), None) => self.plane.point_on(l, &El::sample_normal(alg, rng))?,
                (Line::Vertical(c), None) => Point::Affine(*c, El::sample_normal(alg, rng)),
                (Line::NonVertical(..), Some(r)) => {
                    let (x0, x1) = r.x_range();
                    self.plane.point_on(l, &El::real(alg, uniform(rng, x0, x1)))?
                }
                (Line::Vertical(c), Some(r)) => {
                    let (y0, y1) = r.y_range();
                    Point::Affine(*c, El::real(alg, uniform(rng, y0, y1)))
                }
                (Line::AtInfinity, _) => return None,
            };
            let inside = match (self.region, p) {
                (Some(r), Point::Affine(x, y)) => r.contains(x.re(), y.re()),
                _ => true,
            };
            if inside {
                return Some(p);
            }
        }
        None
    }

    fn join(&self, p: &Point, q: &Point) -> Option<Line> {
        let (a, b) = (coords(p)?, coords(q)?);
        if euclid(&a, &b) < DEGENERACY {
            return None;
        }
        self.plane.join(p, q).ok()
    }

    /// Affine meet of two lines that are clearly not parallel.
    fn meet(&self, l: &Line, m: &Line) -> Option<Point> {
        if let (Line::NonVertical(s, _), Line::NonVertical(u, _)) = (l, m) {
            if s.dist(u) < DEGENERACY {
                return None;
            }
        }
        let p = self.plane.meet(l, m).ok()?;
        let c = coords(&p)?;
        (c.iter().all(|v| v.abs() < FAR)).then_some(p)
    }

    /// `p` is clearly off `l`.
    fn off(&self, p: &Point, l: &Line) -> bool {
        self.plane.incidence_residual(p, l) > DEGENERACY
    }

    fn desargues(&self, rng: &mut SampleRng) -> Option<(Vec<Point>, Point, Point)> {
        let o = self.point(rng);
        let (a, b, c) = (self.point(rng), self.point(rng), self.point(rng));
        let (oa, ob, oc) = (self.join(&o, &a)?, self.join(&o, &b)?, self.join(&o, &c)?);
        if !self.off(&b, &oa) || !self.off(&c, &oa) || !self.off(&c, &ob) {
            return None;
        }
        let (a2, b2, c2) = (self.point_on(&oa, rng)?, self.point_on(&ob, rng)?, self.point_on(&oc, rng)?);
        for (u, v) in [(&a2, &o), (&b2, &o), (&c2, &o), (&a2, &a), (&b2, &b), (&c2, &c)] {
            if euclid(&coords(u)?, &coords(v)?) < DEGENERACY {
                return None;
            }
        }
        let p = self.meet(&self.join(&a, &b)?, &self.join(&a2, &b2)?)?;
        let q = self.meet(&self.join(&a, &c)?, &self.join(&a2, &c2)?)?;
        let bc = self.join(&b, &c)?;
        let r = self.meet(&bc, &self.join(&b2, &c2)?)?;
        let r_star = self.meet(&self.join(&p, &q)?, &bc)?;
        Some((vec![o, a, b, c, a2, b2, c2], r, r_star))
    }

    fn pappus(&self, rng: &mut SampleRng) -> Option<(Vec<Point>, Point, Point)> {
        let l1 = self.join(&self.point(rng), &self.point(rng))?;
        let l2 = self.join(&self.point(rng), &self.point(rng))?;
        let mut pts = Vec::new();
        for l in [&l1, &l2] {
            for _ in 0..3 {
                pts.push(self.point_on(l, rng)?);
            }
        }
        for (i, u) in pts.iter().enumerate() {
            for v in &pts[i + 1..] {
                if euclid(&coords(u)?, &coords(v)?) < DEGENERACY {
                    return None;
                }
            }
        }
        let [a1, b1, c1, a2, b2, c2] = [pts[0], pts[1], pts[2], pts[3], pts[4], pts[5]];
        if !self.off(&a1, &l2) || !self.off(&a2, &l1) {
            return None;
        }
        let x = self.meet(&self.join(&a1, &b2)?, &self.join(&a2, &b1)?)?;
        let y = self.meet(&self.join(&a1, &c2)?, &self.join(&a2, &c1)?)?;
        let b1c2 = self.join(&b1, &c2)?;
        let z = self.meet(&b1c2, &self.join(&b2, &c1)?)?;
        let z_star = self.meet(&self.join(&x, &y)?, &b1c2)?;
        Some((pts, z, z_star))
    }
}

/// One trial: redraw from the trial's stream until nondegenerate.
fn trial(builder: &Builder, kind: ConfigKind, seed: u64, index: u64) -> Option<ConfigWitness> {
    let mut rng = rng_for(seed, index);
    for _ in 0..RETRIES {
        let built = match kind {
            ConfigKind::Desargues => builder.desargues(&mut rng),
            ConfigKind::Pappus => builder.pappus(&mut rng),
        };
        if let Some((points, r, r_star)) = built {
            let discrepancy = euclid(&coords(&r)?, &coords(&r_star)?);
            return Some(ConfigWitness { trial: index, points, closing: (r, r_star), discrepancy });
        }
    }
    None
}

/// Random Desargues or Pappus configurations; the discrepancy is the distance
/// between the closing point and where the closing line meets its partner.
pub fn configuration_test(plane: &PlaneModel, kind: ConfigKind, region: Option<Region>, trials: usize, seed: u64) -> Result<ConfigurationReport> {
    if let Some(r) = region {
        r.validate()?;
        if plane.algebra() != Algebra::R {
            return Err(Error::Unsupported("regions are only available on 2-dimensional planes".into()));
        }
    }
    let builder = Builder { plane, region };
    let mut report = ConfigurationReport {
        kind,
        plane: plane.to_string(),
        seed,
        region,
        trials,
        skipped: 0,
        max_discrepancy: 0.0,
        witness: None,
    };
    for i in 0..trials as u64 {
        match trial(&builder, kind, seed, i) {
            None => report.skipped += 1,
            Some(w) => {
                if report.witness.as_ref().is_none_or(|b| w.discrepancy > b.discrepancy) {
                    report.max_discrepancy = w.discrepancy;
                    report.witness = Some(w);
                }
            }
        }
    }
    Ok(report)
}

/// Rebuild the witness configuration of a report and return its discrepancy.
pub fn replay_configuration(report: &ConfigurationReport) -> Result<f64> {
    let w = report.witness.as_ref().ok_or_else(|| Error::NotFound("report has no witness".into()))?;
    let plane: PlaneModel = report.plane.parse()?;
    let builder = Builder { plane: &plane, region: report.region };
    trial(&builder, report.kind, report.seed, w.trial)
        .map(|w| w.discrepancy)
        .ok_or_else(|| Error::Degenerate("witness trial became degenerate".into()))
}

/// `count` unit disks with centers uniform in `[-5, 5]^2`, each searched with
/// up to `trials` configurations.
pub fn sample_disks(plane: &PlaneModel, kind: ConfigKind, count: usize, trials: usize, seed: u64) -> Result<Vec<ConfigurationReport>> {
    let mut rng = rng_for(seed, u64::MAX);
    (0..count)
        .map(|k| {
            let region = Region::Disk { cx: uniform(&mut rng, -5.0, 5.0), cy: uniform(&mut rng, -5.0, 5.0), radius: 1.0 };
            configuration_test(plane, kind, Some(region), trials, seed.wrapping_add(k as u64 + 1))
        })
        .collect()
}
