//! Sample export to JSON and CSV.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::{PlaneModel, ProjectiveLine as Line, ProjectivePoint as Point};
use crate::polarity::Polarity;
use crate::sampling::rng_for;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}, expected json or csv"))),
        }
    }
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Parameter(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents)?;
    f.sync_all()?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitalExport {
    pub plane: String,
    pub polarity: String,
    pub seed: u64,
    pub tool_version: String,
    /// `x` coordinates followed by `y` coordinates.
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Incidence {
    pub point: Vec<f64>,
    /// `s` then `t` coordinates of a non-vertical line.
    pub line: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncidenceExport {
    pub plane: String,
    pub seed: u64,
    pub tool_version: String,
    pub incidences: Vec<Incidence>,
}

/// `n` affine unital points; sample `i` draws from `rng_for(seed, i)`.
pub fn sample_unital(pol: &Polarity, n: usize, seed: u64) -> Result<UnitalExport> {
    let points = (0..n as u64)
        .map(|i| pol.sample_unital_point(&mut rng_for(seed, i)).map(|p| p.flat().expect("affine")))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitalExport { plane: pol.plane.to_string(), polarity: pol.name.clone(), seed, tool_version: TOOL_VERSION.into(), points })
}

/// `n` random flags: a random point on a random non-vertical line.
pub fn sample_incidences(plane: &PlaneModel, n: usize, seed: u64) -> IncidenceExport {
    let incidences = (0..n as u64)
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let l = plane.random_line(&mut rng);
            let x = plane.random_scalar(&mut rng);
            let p = plane.point_on(&l, &x).expect("non-vertical");
            let Line::NonVertical(s, t) = l else { unreachable!() };
            Incidence { point: p.flat().expect("affine"), line: [s.coords(), t.coords()].concat() }
        })
        .collect();
    IncidenceExport { plane: plane.to_string(), seed, tool_version: TOOL_VERSION.into(), incidences }
}

fn header(prefixes: &[char], dim: usize) -> Vec<String> {
    prefixes.iter().flat_map(|p| (0..dim).map(move |k| format!("{p}{k}"))).collect()
}

fn csv_bytes(meta: &str, head: Vec<String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut out = format!("# {meta}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&head)?;
        for r in rows {
            w.write_record(r.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
    }
    Ok(out)
}

pub fn unital_bytes(data: &UnitalExport, dim: usize, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(data)?),
        Format::Csv => {
            let meta = format!("plane={} polarity={} seed={} version={}", data.plane, data.polarity, data.seed, data.tool_version);
            csv_bytes(&meta, header(&['x', 'y'], dim), data.points.iter().cloned())
        }
    }
}

pub fn incidence_bytes(data: &IncidenceExport, dim: usize, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(data)?),
        Format::Csv => {
            let meta = format!("plane={} seed={} version={}", data.plane, data.seed, data.tool_version);
            let rows = data.incidences.iter().map(|i| [i.point.clone(), i.line.clone()].concat());
            csv_bytes(&meta, header(&['x', 'y', 's', 't'], dim), rows)
        }
    }
}

pub fn export_unital(pol: &Polarity, n: usize, seed: u64, format: Format, path: &Path) -> Result<UnitalExport> {
    let data = sample_unital(pol, n, seed)?;
    write_atomic(path, &unital_bytes(&data, pol.algebra().dim(), format)?)?;
    Ok(data)
}

pub fn export_incidences(plane: &PlaneModel, n: usize, seed: u64, format: Format, path: &Path) -> Result<IncidenceExport> {
    let data = sample_incidences(plane, n, seed);
    write_atomic(path, &incidence_bytes(&data, plane.algebra().dim(), format)?)?;
    Ok(data)
}

/// Read unital points back from either format.
pub fn read_unital_points(path: &Path, format: Format) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    match format {
        Format::Json => Ok(serde_json::from_str::<UnitalExport>(&text)?.points),
        Format::Csv => {
            let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
            r.records()
                .map(|rec| {
                    rec?.iter()
                        .map(|v| v.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {v:?}"))))
                        .collect()
                })
                .collect()
        }
    }
}

/// Split flat coordinates back into an affine point.
pub fn point_from_flat(plane: &PlaneModel, v: &[f64]) -> Result<Point> {
    let alg = plane.algebra();
    let d = alg.dim();
    if v.len() != 2 * d {
        return Err(Error::Parse(format!("expected {} coordinates, got {}", 2 * d, v.len())));
    }
    Ok(Point::Affine(crate::AlgebraElement::from_slice(alg, &v[..d])?, crate::AlgebraElement::from_slice(alg, &v[d..])?))
}
