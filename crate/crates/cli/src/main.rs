#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod export;
mod spec;

use std::fs;
use std::io::{self, Read, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wulffkit::analysis::{
    default_levels, pedal, pedal_integrand_deviation, regularity_crosscheck, AnalysisConfig,
    AnalysisReport, Verdict,
};
use wulffkit::hull::convex_hull;
use wulffkit::spherical::{dual_oracle_check, dual_wulff, DualOracleReport};
use wulffkit::verify::{check_names, run_verify, VerifyConfig, SCHEMA};
use wulffkit::wulff::{convex_integrand_at, wulff_shape};
use wulffkit::{GammaField, Polytope, Tolerance, Vector};

use export::Layer;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric error: {0}")]
    Numeric(#[from] wulffkit::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Failed(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "wulffkit",
    version,
    about = "Wulff shapes, convex integrands and dual Wulff shapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Wulff shape of a γ spec (SVG for n = 1, OBJ for n = 2).
    Build {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate γ and the convex integrand of its Wulff shape as CSV.
    Integrand {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the dual Wulff shape of a γ spec or of the hull of an OBJ
    /// mesh, and print the oracle residuals as JSON.
    Dual {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run both regularity detectors and report whether they agree.
    Analyze {
        spec: PathBuf,
        /// Comma-separated mesh levels, coarse to fine.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Pedal of the Wulff shape with respect to an interior point.
    Pedal {
        spec: PathBuf,
        /// Base point, comma-separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        point: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full verification battery.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// Direction counts on the circle, coarse to fine.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        /// Icosphere subdivision levels, coarse to fine.
        #[arg(long, value_delimiter = ',')]
        sphere_levels: Option<Vec<usize>>,
        /// Acceptance band for reported identities.
        #[arg(long)]
        tol: Option<f64>,
        /// Random probes per membership check.
        #[arg(long)]
        probes: Option<usize>,
        /// Check to skip; may be repeated.
        #[arg(long)]
        skip: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Mesh level: direction count on the circle, subdivisions on the sphere.
    #[arg(long)]
    mesh: Option<usize>,
    /// Acceptance band for reported identities.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Obj,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wulffkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Build { spec, common } => build(&spec, &common),
        Command::Integrand { spec, common } => integrand(&spec, &common),
        Command::Dual { input, common } => dual(&input, &common),
        Command::Analyze {
            spec,
            levels,
            seed,
            common,
        } => analyze(&spec, levels, seed, &common),
        Command::Pedal {
            spec,
            point,
            common,
        } => pedal_cmd(&spec, &point, &common),
        Command::Verify {
            seed,
            levels,
            sphere_levels,
            tol,
            probes,
            skip,
            out,
        } => {
            let mut cfg = VerifyConfig {
                seed: resolve_seed(seed)?.unwrap_or(VerifyConfig::default().seed),
                ..VerifyConfig::default()
            };
            if let Some(t) = tol {
                cfg.tol = tolerance(Some(t))?;
            }
            if let Some(l) = levels {
                cfg.circle_levels = increasing(l, "--levels")?;
            }
            if let Some(l) = sphere_levels {
                cfg.sphere_levels = increasing(l, "--sphere-levels")?;
            }
            if let Some(p) = probes {
                cfg.probes = p;
            }
            let names = check_names();
            if let Some(bad) = skip.iter().find(|s| !names.contains(&s.as_str())) {
                return Err(CliError::Usage(format!(
                    "--skip: unknown check {bad:?}; known: {}",
                    names.join(", ")
                )));
            }
            cfg.skip = skip;
            verify(&cfg, out.as_deref())
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<Option<u64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("WULFFKIT_SEED") {
        Ok(s) => {
            s.trim().parse().map(Some).map_err(|_| {
                CliError::Usage(format!("WULFFKIT_SEED: not an unsigned integer: {s:?}"))
            })
        }
        Err(_) => Ok(None),
    }
}

fn tolerance(report_tol: Option<f64>) -> Result<Tolerance, CliError> {
    let t = Tolerance::default();
    match report_tol {
        None => Ok(t),
        Some(r) => t
            .with_report_tol(r)
            .map_err(|e| CliError::Usage(format!("--tol: {e}"))),
    }
}

fn increasing(levels: Vec<usize>, flag: &str) -> Result<Vec<usize>, CliError> {
    if levels.len() < 2 || levels.windows(2).any(|w| w[0] >= w[1]) || levels[0] == 0 {
        return Err(CliError::Usage(format!(
            "{flag}: expected at least two increasing positive levels"
        )));
    }
    Ok(levels)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path, tol: &Tolerance) -> Result<GammaField, CliError> {
    spec::parse_spec(&read_input(path)?, tol).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// The figure format for an `n`-dimensional body: explicit flag, then the
/// output extension, then SVG for curves and OBJ for surfaces.
fn figure_format(n: usize, common: &Common) -> Result<Format, CliError> {
    let from_ext = common
        .out
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| match e.to_str()? {
            "svg" => Some(Format::Svg),
            "obj" => Some(Format::Obj),
            _ => None,
        });
    let want = if n == 1 { Format::Svg } else { Format::Obj };
    match common.format.or(from_ext) {
        None => Ok(want),
        Some(f) if f == want => Ok(f),
        Some(f) => Err(CliError::Usage(format!(
            "format {f:?} does not fit n = {n}; use {}",
            if n == 1 { "svg" } else { "obj" }
        ))),
    }
}

fn only_format(common: &Common, allowed: Format) -> Result<(), CliError> {
    match common.format {
        Some(f) if f != allowed => Err(CliError::Usage(format!(
            "this command writes {allowed:?} only"
        ))),
        _ => Ok(()),
    }
}

fn mesh_level(n: usize, common: &Common) -> Result<usize, CliError> {
    match common.mesh {
        Some(0) => Err(CliError::Usage("--mesh: must be positive".into())),
        Some(l) if n == 1 && l < 3 => Err(CliError::Usage(
            "--mesh: need at least 3 directions on the circle".into(),
        )),
        Some(l) => Ok(l),
        None => Ok(if n == 1 { 256 } else { 3 }),
    }
}

fn body_figure(w: &Polytope, common: &Common, comments: &[String]) -> Result<String, CliError> {
    Ok(match figure_format(w.dim() - 1, common)? {
        Format::Svg => export::svg(
            &[Layer {
                id: "body",
                points: export::polygon(w),
                closed: true,
                stroke: "black",
            }],
            comments,
        ),
        _ => export::obj(w, &[], comments),
    })
}

fn build(path: &Path, common: &Common) -> Result<(), CliError> {
    let tol = tolerance(common.tol)?;
    let gamma = load(path, &tol)?;
    let level = mesh_level(gamma.n(), common)?;
    let w = wulff_shape(&gamma, level, &tol)?;
    let text = body_figure(&w, common, &[format!("wulff shape, mesh level {level}")])?;
    emit(common.out.as_deref(), &text)
}

fn integrand(path: &Path, common: &Common) -> Result<(), CliError> {
    only_format(common, Format::Csv)?;
    let tol = tolerance(common.tol)?;
    let gamma = load(path, &tol)?;
    let level = mesh_level(gamma.n(), common)?;
    let w = wulff_shape(&gamma, level, &tol)?;
    let gw = convex_integrand_at(&w, level, &tol)?;
    let g = gamma.eval_all(&gw.directions)?;
    emit(
        common.out.as_deref(),
        &export::integrand_csv(&g, &gw, tol.report_tol),
    )
}

#[derive(Serialize)]
struct DualBlock {
    schema: &'static str,
    report_tol: f64,
    vertices: usize,
    facets: usize,
    dual_vertices: usize,
    dual_facets: usize,
    /// Smallest and largest distance from the origin to the dual boundary.
    dual_inradius: f64,
    dual_circumradius: f64,
    #[serde(flatten)]
    oracle: DualOracleReport,
    within_tol: bool,
}

fn dual(path: &Path, common: &Common) -> Result<(), CliError> {
    let tol = tolerance(common.tol)?;
    let w = if path.extension().is_some_and(|e| e == "obj") {
        let pts = export::read_obj_vertices(&read_input(path)?)
            .map_err(|m| CliError::Parse(format!("{}: {m}", path.display())))?;
        let dim = pts[0].dim();
        convex_hull(&pts, dim, tol.hull_tol)?
    } else {
        let gamma = load(path, &tol)?;
        wulff_shape(&gamma, mesh_level(gamma.n(), common)?, &tol)?
    };
    let d = dual_wulff(&w, &tol)?;
    let oracle = dual_oracle_check(&w, &tol)?;
    let block = DualBlock {
        schema: SCHEMA,
        report_tol: tol.report_tol,
        vertices: w.vertices().len(),
        facets: w.facets().len(),
        dual_vertices: d.vertices().len(),
        dual_facets: d.facets().len(),
        dual_inradius: d.min_facet_offset(),
        dual_circumradius: d.max_vertex_norm(),
        within_tol: oracle.oracle_distance <= tol.report_tol
            && oracle.involution_distance <= tol.report_tol,
        oracle,
    };
    let figure = body_figure(&d, common, &["dual wulff shape".to_string()])?;
    match &common.out {
        Some(p) => {
            emit(Some(p), &figure)?;
            emit(None, &json(&block))
        }
        None => Err(CliError::Usage(
            "dual: --out is required for the mesh; the JSON block goes to standard output".into(),
        )),
    }
}

#[derive(Serialize)]
struct AnalysisEnvelope<'a> {
    schema: &'static str,
    analysis: &'a AnalysisReport,
}

fn analyze(
    path: &Path,
    levels: Option<Vec<usize>>,
    seed: Option<u64>,
    common: &Common,
) -> Result<(), CliError> {
    only_format(common, Format::Json)?;
    if common.mesh.is_some() {
        return Err(CliError::Usage("analyze takes --levels, not --mesh".into()));
    }
    let tol = tolerance(common.tol)?;
    let gamma = load(path, &tol)?;
    let levels = match levels {
        Some(l) => increasing(l, "--levels")?,
        None => default_levels(gamma.n()),
    };
    let mut report = regularity_crosscheck(&gamma, &levels, &tol, &AnalysisConfig::default())?;
    report.seed = resolve_seed(seed)?;
    emit(
        common.out.as_deref(),
        &json(&AnalysisEnvelope {
            schema: SCHEMA,
            analysis: &report,
        }),
    )?;
    if report.verdict == Verdict::Inconsistent {
        return Err(CliError::Failed("detectors disagree".into()));
    }
    Ok(())
}

fn pedal_cmd(path: &Path, point: &[f64], common: &Common) -> Result<(), CliError> {
    let tol = tolerance(common.tol)?;
    let gamma = load(path, &tol)?;
    if point.len() != gamma.ambient_dim() {
        return Err(CliError::Usage(format!(
            "--point: expected {} coordinates",
            gamma.ambient_dim()
        )));
    }
    let level = mesh_level(gamma.n(), common)?;
    let w = wulff_shape(&gamma, level, &tol)?;
    let p = Vector::new(point);
    let feet = pedal(&w, &p, &tol)?;
    let at_origin = p.norm() == 0.0;
    let mut comments = vec![format!(
        "pedal from ({}), mesh level {level}",
        point
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )];
    let graph = if at_origin {
        comments.push(format!(
            "max |pedal radius - integrand| = {:e}",
            pedal_integrand_deviation(&w, &tol)?
        ));
        let gw = convex_integrand_at(&w, level, &tol)?;
        gw.directions
            .iter()
            .zip(&gw.values)
            .map(|(d, &v)| (d.angle(), d.scale(v)))
            .collect()
    } else {
        Vec::new()
    };
    let text = match figure_format(gamma.n(), common)? {
        Format::Svg => {
            let mut layers = vec![
                Layer {
                    id: "body",
                    points: export::polygon(&w),
                    closed: true,
                    stroke: "black",
                },
                Layer {
                    id: "pedal",
                    points: export::by_angle(
                        feet.iter()
                            .map(|f| (f.direction.angle(), f.point))
                            .collect(),
                    ),
                    closed: true,
                    stroke: "red",
                },
            ];
            if at_origin {
                layers.push(Layer {
                    id: "integrand",
                    points: export::by_angle(graph),
                    closed: true,
                    stroke: "blue",
                });
            }
            export::svg(&layers, &comments)
        }
        _ => {
            let mut clouds = vec![("pedal", feet.iter().map(|f| f.point).collect())];
            if at_origin {
                clouds.push(("integrand", graph.into_iter().map(|g| g.1).collect()));
            }
            export::obj(&w, &clouds, &comments)
        }
    };
    emit(common.out.as_deref(), &text)
}

fn verify(cfg: &VerifyConfig, out: Option<&Path>) -> Result<(), CliError> {
    let report = run_verify(cfg);
    for c in &report.checks {
        let status = match &c.verdict {
            wulffkit::verify::CheckVerdict::Pass => "PASS",
            wulffkit::verify::CheckVerdict::Fail => "FAIL",
            wulffkit::verify::CheckVerdict::Skipped { .. } => "SKIP",
        };
        eprintln!("{status} {}", c.name);
    }
    emit(out, &json(&report))?;
    if !report.all_pass {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::Failed(format!(
            "failed checks: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}
