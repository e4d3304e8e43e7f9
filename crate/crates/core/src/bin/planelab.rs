use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use planelab::collineation::{dimension_audit, motion_test, random_double_flag_draw, random_semifield_draw};
use planelab::export::{export_incidences, export_unital, incidence_bytes, sample_incidences, sample_unital, unital_bytes, write_atomic, Format};
use planelab::facts::{self, FixedConfiguration, GroupClass};
use planelab::polarity::{catalog_names, Polarity};
use planelab::render::{render_svg, render_svg_string, RenderSpec};
use planelab::sampling::{coin, rng_for};
use planelab::structures::CoordinateStructure as CS;
use planelab::verify::{
    check_algebra_axioms, check_plane_axioms, check_polarity, configuration_test, sample_disks, smoothness_probe, AlgebraClass, ConfigKind, Region,
    DESARGUES_FAIL,
};
use planelab::{PlaneModel, Result};

#[derive(Parser, Debug)]
#[command(name = "planelab", version, about = "Sampling checks, unitals and pictures for compact projective planes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run axiom suites; exits nonzero iff a suite fails.
    Verify {
        #[arg(long)]
        plane: String,
        /// `plane`, `algebra:<class>`, `polarity:<name>`, `polarities` or `smoothness`.
        #[arg(long = "suite", default_value = "plane")]
        suites: Vec<String>,
    },
    /// Sample affine points of a polar unital.
    Unital {
        #[arg(long)]
        plane: String,
        #[arg(long)]
        polarity: String,
    },
    /// Export random point-line flags.
    Incidences {
        #[arg(long)]
        plane: String,
    },
    /// Draw a 2-dimensional plane as SVG.
    Render {
        #[arg(long)]
        plane: String,
        /// `xmin,xmax,ymin,ymax`.
        #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 9)]
        slopes: usize,
        #[arg(long, default_value_t = 7)]
        intercepts: usize,
        /// Polarity whose unital is drawn on top.
        #[arg(long)]
        overlay: Option<String>,
    },
    /// Random Desargues (or Pappus) configurations.
    Desargues {
        #[arg(long)]
        plane: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        pappus: bool,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Search this many random unit disks instead of one region.
        #[arg(long)]
        disks: Option<usize>,
    },
    /// Compare closed-form motion conditions with commutation on random draws.
    Motions {
        #[arg(long)]
        plane: String,
        #[arg(long)]
        polarity: String,
    },
    /// Query the dimension-bound table.
    Facts {
        #[arg(long)]
        fix: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Print the unital summaries instead.
        #[arg(long)]
        unitals: bool,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| planelab::Error::Parse(format!("bad window {s:?}"))))
        .collect::<Result<_>>()?;
    match v.as_slice() {
        [a, b, c, d] => Ok((*a, *b, *c, *d)),
        _ => Err(planelab::Error::Parse(format!("window needs four numbers, got {s:?}"))),
    }
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(g: &Global, value: &T) -> Result<()> {
    emit(g, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn data_format(g: &Global) -> Format {
    if g.format == OutFormat::Csv {
        Format::Csv
    } else {
        Format::Json
    }
}

fn structure(plane: &PlaneModel) -> Result<&CS> {
    plane.structure().ok_or_else(|| planelab::Error::Unsupported(format!("{plane} has no ternary field")))
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { plane, suites } => {
            let plane: PlaneModel = plane.parse()?;
            let mut reports = Vec::new();
            let mut smooth = Vec::new();
            for suite in suites {
                match suite.split_once(':') {
                    None if suite == "plane" => reports.push(check_plane_axioms(&plane, g.samples, g.seed, g.tol)),
                    None if suite == "polarities" => {
                        for name in catalog_names(&plane) {
                            reports.push(check_polarity(&Polarity::catalog(&plane, name)?, g.samples, g.seed, g.tol));
                        }
                    }
                    None if suite == "smoothness" => {
                        let cs = structure(&plane)?;
                        for locus in cs.gluing_loci() {
                            smooth.push(smoothness_probe(cs, locus, 1)?);
                        }
                    }
                    Some(("algebra", class)) => {
                        reports.push(check_algebra_axioms(structure(&plane)?, class.parse::<AlgebraClass>()?, g.samples, g.seed, g.tol))
                    }
                    Some(("polarity", name)) => reports.push(check_polarity(&Polarity::catalog(&plane, name)?, g.samples, g.seed, g.tol)),
                    _ => return Err(planelab::Error::Parse(format!("unknown suite {suite:?}"))),
                }
            }
            let ok = reports.iter().all(|r| r.passed);
            if g.format == OutFormat::Json {
                emit_json(g, &serde_json::json!({ "reports": reports, "smoothness": smooth }))?;
            } else {
                let mut text = String::new();
                for r in &reports {
                    text += &format!(
                        "{} {} {}: {}/{} passed, {} skipped, max residual {:.3e}\n",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.suite,
                        r.plane,
                        r.passed_samples,
                        r.attempted,
                        r.skipped,
                        r.max_residual
                    );
                    for w in &r.witnesses {
                        text += &format!("  witness #{} {}: residual {:.3e} at {:?}\n", w.index, w.check, w.residual, w.data);
                    }
                }
                for s in &smooth {
                    text += &format!("smoothness {} {:?}: {} (max jump {:.3e})\n", s.structure, s.locus, s.note, s.max_jump);
                }
                emit(g, &text)?;
            }
            Ok(ok)
        }
        Command::Unital { plane, polarity } => {
            let pol = Polarity::catalog(&plane.parse()?, polarity)?;
            let fmt = data_format(g);
            match &g.out {
                Some(path) => {
                    export_unital(&pol, g.samples, g.seed, fmt, path)?;
                }
                None => emit(g, &String::from_utf8_lossy(&unital_bytes(&sample_unital(&pol, g.samples, g.seed)?, pol.algebra().dim(), fmt)?))?,
            }
            Ok(true)
        }
        Command::Incidences { plane } => {
            let plane: PlaneModel = plane.parse()?;
            let fmt = data_format(g);
            match &g.out {
                Some(path) => {
                    export_incidences(&plane, g.samples, g.seed, fmt, path)?;
                }
                None => emit(g, &String::from_utf8_lossy(&incidence_bytes(&sample_incidences(&plane, g.samples, g.seed), plane.algebra().dim(), fmt)?))?,
            }
            Ok(true)
        }
        Command::Render { plane, window, slopes, intercepts, overlay } => {
            let mut spec = RenderSpec::new(plane.parse()?, parse_window(window)?);
            spec.slopes = *slopes;
            spec.intercepts = *intercepts;
            spec.overlay = overlay.clone();
            spec.out = g.out.clone();
            if spec.out.is_some() {
                render_svg(&spec)?;
            } else {
                print!("{}", render_svg_string(&spec)?);
            }
            Ok(true)
        }
        Command::Desargues { plane, trials, pappus, window, disks } => {
            let plane: PlaneModel = plane.parse()?;
            let kind = if *pappus { ConfigKind::Pappus } else { ConfigKind::Desargues };
            let reports = match disks {
                Some(count) => sample_disks(&plane, kind, *count, *trials, g.seed)?,
                None => {
                    let region = window
                        .as_deref()
                        .map(parse_window)
                        .transpose()?
                        .map(|(xmin, xmax, ymin, ymax)| Region::Window { xmin, xmax, ymin, ymax });
                    vec![configuration_test(&plane, kind, region, *trials, g.seed)?]
                }
            };
            if g.format == OutFormat::Json {
                emit_json(g, &reports)?;
            } else {
                let mut text = String::new();
                for r in &reports {
                    let verdict = if r.max_discrepancy > DESARGUES_FAIL { "failing configuration found" } else { "no failure sampled" };
                    text += &format!(
                        "{:?} {} region {:?}: max discrepancy {:.3e} over {} trials ({} skipped), {verdict}\n",
                        r.kind, r.plane, r.region, r.max_discrepancy, r.trials, r.skipped
                    );
                }
                emit(g, &text)?;
            }
            Ok(true)
        }
        Command::Motions { plane, polarity } => {
            let pol = Polarity::catalog(&plane.parse()?, polarity)?;
            let distorted = matches!(pol.plane.structure(), Some(CS::DistortedH(_)));
            let (mut agree, mut members) = (0, 0);
            let mut disagreements = Vec::new();
            for i in 0..g.samples as u64 {
                let mut rng = rng_for(g.seed, i);
                let want = coin(&mut rng);
                let coll = if distorted { random_double_flag_draw(&pol, &mut rng, want) } else { random_semifield_draw(&pol, &mut rng, want) };
                let rep = motion_test(&pol, &coll, 20, i)?;
                if rep.condition_membership == rep.commutes {
                    agree += 1;
                } else {
                    disagreements.push(i);
                }
                members += rep.commutes as usize;
            }
            let audit = match (pol.plane.structure(), pol.name.as_str()) {
                (Some(CS::MutationH { mu }), "rho-bar") => Some(dimension_audit(*mu, "rho-bar", g.seed)?),
                _ => None,
            };
            let summary = serde_json::json!({
                "plane": pol.plane.to_string(), "polarity": pol.name, "seed": g.seed, "draws": g.samples,
                "agreements": agree, "motions": members, "disagreements": disagreements, "dimension_audit": audit,
            });
            if g.format == OutFormat::Json {
                emit_json(g, &summary)?;
            } else {
                let mut text = format!(
                    "{} {}: {agree}/{} draws agree ({members} motions)\n",
                    pol.plane, pol.name, g.samples
                );
                if let Some(a) = audit {
                    text += &format!("motion family dimension: {} parameters - rank {} = {}\n", a.parameters, a.constraint_rank, a.dimension);
                }
                emit(g, &text)?;
            }
            Ok(disagreements.is_empty())
        }
        Command::Facts { fix, group, unitals } => {
            if *unitals {
                if g.format == OutFormat::Json {
                    emit_json(g, &facts::UNITALS)?;
                } else {
                    let text: String = facts::UNITALS
                        .iter()
                        .map(|u| format!("{:>2}  {:<12} {}  {:<14} {}\n", u.plane_dimension, u.planes, u.classes, u.unitals, u.motion_dimensions))
                        .collect();
                    emit(g, &text)?;
                }
                return Ok(true);
            }
            let fix = fix.as_deref().map(str::parse::<FixedConfiguration>).transpose()?;
            let group = group.as_deref().map(str::parse::<GroupClass>).transpose()?;
            let rows: Vec<_> = match (fix, group) {
                (Some(f), Some(gc)) => vec![facts::lookup(f, gc)?],
                _ => facts::rows()
                    .into_iter()
                    .filter(|r| fix.is_none_or(|f| r.fixed_configuration == f) && group.is_none_or(|gc| r.group_class == gc))
                    .collect(),
            };
            if g.format == OutFormat::Json {
                emit_json(g, &rows)?;
            } else {
                let mut text: String = rows.iter().map(|r| format!("{r}\n")).collect();
                let notes: Vec<u8> = rows.iter().flat_map(|r| r.footnotes.clone()).collect();
                for n in facts::FOOTNOTES.iter().filter(|n| notes.contains(&n.id)) {
                    text += &format!("{}) {}  {}\n", n.id, n.statement, n.source);
                }
                emit(g, &text)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    eprintln!("# planelab {} (seed {})", args.join(" "), cli.global.seed);
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
