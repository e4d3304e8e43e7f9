//! SVG pictures of 2-dimensional planes.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::export::write_atomic;
use crate::numeric::gauss_newton;
use crate::plane::PlaneModel;
use crate::polarity::{Polarity, PolarityRule};

type El = AlgebraElement;

pub const SAMPLES_PER_LINE: usize = 256;
const SIZE: f64 = 512.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub plane: PlaneModel,
    /// `(xmin, xmax, ymin, ymax)`.
    pub window: (f64, f64, f64, f64),
    /// Number of slopes and of intercepts in the line grid.
    pub slopes: usize,
    pub intercepts: usize,
    /// Name of a catalog polarity whose unital is drawn on top.
    pub overlay: Option<String>,
    pub out: Option<PathBuf>,
}

impl RenderSpec {
    pub fn new(plane: PlaneModel, window: (f64, f64, f64, f64)) -> RenderSpec {
        RenderSpec { plane, window, slopes: 9, intercepts: 7, overlay: None, out: None }
    }

    fn validate(&self) -> Result<()> {
        let (x0, x1, y0, y1) = self.window;
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::Parameter(format!("empty window {:?}", self.window)));
        }
        if self.slopes == 0 || self.intercepts == 0 {
            return Err(Error::Parameter("grid counts must be at least 1".into()));
        }
        if self.plane.algebra() != Algebra::R {
            return Err(Error::Unsupported(format!("{} is not 2-dimensional", self.plane)));
        }
        Ok(())
    }
}

struct Canvas {
    window: (f64, f64, f64, f64),
    body: String,
}

impl Canvas {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.window;
        ((x - x0) / (x1 - x0) * SIZE, (y1 - y) / (y1 - y0) * SIZE)
    }

    /// Polyline through the points, broken where the curve leaves the window.
    fn curve(&mut self, pts: &[(f64, f64)], style: &str) {
        let (_, _, y0, y1) = self.window;
        let margin = 0.1 * (y1 - y0);
        let mut run: Vec<(f64, f64)> = Vec::new();
        let flush = |run: &mut Vec<(f64, f64)>, body: &mut String| {
            if run.len() > 1 {
                let coords: Vec<String> = run.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
                let _ = writeln!(body, r#"<polyline points="{}" {style}/>"#, coords.join(" "));
            }
            run.clear();
        };
        for &(x, y) in pts {
            if y.is_finite() && y >= y0 - margin && y <= y1 + margin {
                run.push(self.px(x, y));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }
}

fn xs(window: (f64, f64, f64, f64)) -> impl Iterator<Item = f64> {
    let (x0, x1, ..) = window;
    (0..SAMPLES_PER_LINE).map(move |k| x0 + (x1 - x0) * k as f64 / (SAMPLES_PER_LINE - 1) as f64)
}

/// The affine unital above `x`, if the equation has a root in `y` there.
fn unital_y(pol: &Polarity, x: f64) -> Option<f64> {
    let r = |v: f64| El::real(Algebra::R, v);
    let f = |v: &[f64]| vec![pol.unital_equation(&r(x), &r(v[0])).re()];
    let (y, res) = gauss_newton(f, &[0.0], 1e-12, 60);
    (res < 1e-9).then_some(y[0])
}

/// Render the spec to an SVG string.
pub fn render_svg_string(spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let plane = &spec.plane;
    let r = |v: f64| El::real(Algebra::R, v);
    let (x0, x1, y0, y1) = spec.window;
    let mut c = Canvas { window: spec.window, body: String::new() };

    // axes
    let (ax, ay) = c.px(0.0, 0.0);
    let _ = writeln!(c.body, r##"<line x1="0" y1="{ay:.2}" x2="{SIZE}" y2="{ay:.2}" stroke="#bbb" stroke-width="1"/>"##);
    let _ = writeln!(c.body, r##"<line x1="{ax:.2}" y1="0" x2="{ax:.2}" y2="{SIZE}" stroke="#bbb" stroke-width="1"/>"##);

    let line_style = r##"fill="none" stroke="#246" stroke-width="0.8""##;
    for i in 0..spec.slopes {
        let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * (i as f64 + 0.5) / spec.slopes as f64;
        let s = theta.tan();
        for j in 0..spec.intercepts {
            let t = y0 + (y1 - y0) * (j as f64 + 0.5) / spec.intercepts as f64;
            let pts: Vec<(f64, f64)> = xs(spec.window).map(|x| (x, plane.eval_line(&r(s), &r(t), &r(x)).re())).collect();
            c.curve(&pts, line_style);
        }
    }
    if let Some(name) = &spec.overlay {
        let pol = Polarity::catalog(plane, name)?;
        if pol.rule != PolarityRule::Elliptic {
            let pts: Vec<(f64, f64)> = xs(spec.window).map(|x| (x, unital_y(&pol, x).unwrap_or(f64::NAN))).collect();
            c.curve(&pts, r##"fill="none" stroke="#c22" stroke-width="2""##);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{} on [{x0}, {x1}] x [{y0}, {y1}]</title>", plane);
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    out.push_str(&c.body);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Render and write atomically to `spec.out`.
pub fn render_svg(spec: &RenderSpec) -> Result<String> {
    let svg = render_svg_string(spec)?;
    let path = spec.out.as_ref().ok_or_else(|| Error::Parameter("no output path".into()))?;
    write_atomic(path, svg.as_bytes())?;
    Ok(svg)
}
