//! Command-line front end: one subcommand per toolkit capability.
//!
//! Exit status contract: 0 on success, 1 when any verdict fails (or a
//! computation fails at run time), 2 on usage errors — unknown flags, type
//! mismatches, and parameter precondition violations, each named after the
//! offending flag. Usage errors never write to the report directory.
//!
//! `--config FILE` supplies INI-style `key = value` defaults using the flag
//! spellings (`dim`, `eps`, `mesh-out`, ...); explicit flags override them.
//! All floating-point output is printed with 12 significant digits.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steklov::error::Error as LibError;
use steklov::exact;
use steklov::experiments as exp;
use steklov::experiments::format_significant;
use steklov::fem;
use steklov::geometry::{make_profile, ProfileKind, ProfileParams};
use steklov::mesh::{self, generate_mesh, validate_mesh, Feature, Mesh2D, MeshParams};
use steklov::spectrum::Spectrum;

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "steklov",
    version,
    about = "Steklov eigenvalues of balls, shells, and tube-drilled shells"
)]
struct Cli {
    /// INI-style key=value defaults; explicit flags override
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spectra of the model domains
    Exact {
        #[command(subcommand)]
        cmd: ExactCmd,
    },
    /// Print the normalized first-eigenvalue upper bound for a dimension
    Bound(BoundArgs),
    /// Axisymmetric finite element solver (three dimensions)
    Fem {
        #[command(subcommand)]
        cmd: FemCmd,
    },
    /// Meridian mesh generation and validation
    Mesh {
        #[command(subcommand)]
        cmd: MeshCmd,
    },
    /// Experiment drivers; reports land under the --out directory
    Exp {
        #[command(subcommand)]
        cmd: ExpCmd,
    },
}

#[derive(Subcommand)]
enum ExactCmd {
    /// Unit ball: sigma_k = k with spherical harmonic multiplicity
    Ball(ExactBallArgs),
    /// Spherical shell with inner radius eps
    Annulus(ExactAnnulusArgs),
}

#[derive(Args)]
struct ExactBallArgs {
    /// Ambient dimension (n >= 2)
    #[arg(long)]
    dim: Option<u32>,
    /// Nonzero distinct eigenvalues to print (zero is always included)
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ExactAnnulusArgs {
    /// Ambient dimension (n >= 3)
    #[arg(long)]
    dim: Option<u32>,
    /// Inner radius, in (0, 1)
    #[arg(long)]
    eps: Option<f64>,
    /// Nonzero distinct eigenvalues to print (zero is always included)
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct BoundArgs {
    /// Ambient dimension (n >= 2)
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum FemCmd {
    /// Solve the Steklov problem on a meridian mesh
    Solve(FemSolveArgs),
}

#[derive(Args)]
struct FemSolveArgs {
    /// Inner radius: alone it selects the shell, with --delta the tube domain
    #[arg(long)]
    eps: Option<f64>,
    /// Neck radius of the drilled tube (requires --eps)
    #[arg(long)]
    delta: Option<f64>,
    /// Target mesh edge length
    #[arg(long)]
    h: Option<f64>,
    /// Highest azimuthal Fourier mode (defaults to count + 1)
    #[arg(long)]
    modes: Option<u32>,
    /// Nonzero distinct eigenvalues to print (zero is always included)
    #[arg(long)]
    count: Option<usize>,
    /// Solve on this SMESH file instead of generating a mesh
    #[arg(long, value_name = "FILE")]
    mesh_in: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum MeshCmd {
    /// Generate a meridian mesh and write it as SMESH v1
    Gen(MeshGenArgs),
    /// Validate an SMESH file and print its quality diagnostics
    Check(MeshCheckArgs),
}

#[derive(Args)]
struct MeshGenArgs {
    /// Inner radius: alone it selects the shell, with --delta the tube domain
    #[arg(long)]
    eps: Option<f64>,
    /// Neck radius of the drilled tube (requires --eps)
    #[arg(long)]
    delta: Option<f64>,
    /// Target mesh edge length
    #[arg(long)]
    h: Option<f64>,
    /// Output SMESH file (required)
    #[arg(long, value_name = "FILE")]
    mesh_out: Option<PathBuf>,
}

#[derive(Args)]
struct MeshCheckArgs {
    /// SMESH file to validate (required)
    #[arg(long, value_name = "FILE")]
    mesh_in: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExpCmd {
    /// Error order of the small-eps eigenvalue asymptotic
    Asymptotic(GridArgs),
    /// Normalized annulus-vs-ball comparison on a grid
    Compare(GridArgs),
    /// Tube family: recovery of the annulus value and ball exceedance
    TubeLimit(TubeArgs),
    /// Maximize the normalized first eigenvalue over the annulus family
    Optimize(DimArgs),
    /// Decay of the first eigenfunction's tube-wall trace mass
    Neck(TubeArgs),
    /// Audit normalized first eigenvalues against the Euclidean bound
    Audit(DimArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Dimensions, comma separated
    #[arg(long, value_delimiter = ',')]
    dim: Vec<u32>,
    /// Distinct eigenvalue indices, comma separated
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    /// Inner radii, comma separated
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Parent directory for report run directories
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TubeArgs {
    /// Inner radius of the shell
    #[arg(long)]
    eps: Option<f64>,
    /// Neck radii, comma separated, strictly decreasing
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    /// Target mesh edge length away from the graded tube wall
    #[arg(long)]
    h: Option<f64>,
    /// Parent directory for report run directories
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DimArgs {
    /// Ambient dimension
    #[arg(long)]
    dim: Option<u32>,
    /// Parent directory for report run directories
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected `csv` or `json`, got `{other}`")),
        }
    }
}

/// Failures split by exit status: usage errors exit 2, run failures exit 1.
enum AppError {
    Usage(String),
    Run(String),
}

impl From<LibError> for AppError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::InvalidParam { .. } => AppError::Usage(e.to_string()),
            other => AppError::Run(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(cfg) => cfg,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    match dispatch(cli.command, &cfg) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    match command {
        Command::Exact { cmd } => run_exact(cmd, cfg),
        Command::Bound(args) => run_bound(args, cfg),
        Command::Fem { cmd: FemCmd::Solve(args) } => run_fem_solve(args, cfg),
        Command::Mesh { cmd } => run_mesh(cmd, cfg),
        Command::Exp { cmd } => run_exp(cmd, cfg),
    }
}

fn run_exact(cmd: ExactCmd, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    match cmd {
        ExactCmd::Ball(args) => {
            let dim = cfg.scalar(args.dim, "dim", 3u32).map_err(usage)?;
            let count = cfg.scalar(args.count, "count", 4usize).map_err(usage)?;
            let format = cfg.scalar(args.format, "format", Format::Csv).map_err(usage)?;
            let spectrum = exact::ball_spectrum(dim, count)?;
            print_spectrum(&spectrum, format, &[("n", dim.to_string())], None);
        }
        ExactCmd::Annulus(args) => {
            let dim = cfg.scalar(args.dim, "dim", 3u32).map_err(usage)?;
            let eps = cfg.scalar(args.eps, "eps", 0.5).map_err(usage)?;
            let count = cfg.scalar(args.count, "count", 4usize).map_err(usage)?;
            let format = cfg.scalar(args.format, "format", Format::Csv).map_err(usage)?;
            let spectrum = exact::annulus_spectrum(dim, eps, count)?;
            print_spectrum(
                &spectrum,
                format,
                &[("n", dim.to_string()), ("eps", format_significant(eps, 12))],
                None,
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bound(args: BoundArgs, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    let dim = cfg.scalar(args.dim, "dim", 3u32).map_err(usage)?;
    let format = cfg.scalar(args.format, "format", Format::Csv).map_err(usage)?;
    let bound = exact::euclidean_bound(dim)?;
    match format {
        Format::Csv => println!("{}", format_significant(bound, 12)),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "schema": "steklov-bound/v1",
                "n": dim,
                "bound": bound,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_fem_solve(args: FemSolveArgs, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    let count = cfg.scalar(args.count, "count", 4usize).map_err(usage)?;
    let modes = cfg
        .scalar(args.modes, "modes", count as u32 + 1)
        .map_err(usage)?;
    let format = cfg.scalar(args.format, "format", Format::Csv).map_err(usage)?;
    let mesh = obtain_mesh(
        cfg.optional(args.mesh_in, "mesh-in").map_err(usage)?,
        cfg.optional(args.eps, "eps").map_err(usage)?,
        cfg.optional(args.delta, "delta").map_err(usage)?,
        cfg.scalar(args.h, "h", 0.05).map_err(usage)?,
    )?;
    // the zero mode occupies one cluster, so ask for count + 1
    let result = fem::full_spectrum(&mesh, modes, count + 1)?;
    if let Some(warning) = &result.truncation_warning {
        eprintln!("warning: {warning}");
    }
    print_spectrum(
        &result.spectrum,
        format,
        &[("nodes", mesh.node_count().to_string())],
        result.truncation_warning.as_deref(),
    );
    Ok(ExitCode::SUCCESS)
}

fn run_mesh(cmd: MeshCmd, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    match cmd {
        MeshCmd::Gen(args) => {
            let out = cfg
                .optional(args.mesh_out, "mesh-out")
                .map_err(usage)?
                .ok_or_else(|| usage("flag `mesh-out` is required for mesh gen"))?;
            let mesh = obtain_mesh(
                None,
                cfg.optional(args.eps, "eps").map_err(usage)?,
                cfg.optional(args.delta, "delta").map_err(usage)?,
                cfg.scalar(args.h, "h", 0.05).map_err(usage)?,
            )?;
            mesh::write_mesh(&mesh, &out)?;
            println!(
                "wrote {}: {} nodes, {} triangles",
                out.display(),
                mesh.node_count(),
                mesh.triangle_count()
            );
            Ok(ExitCode::SUCCESS)
        }
        MeshCmd::Check(args) => {
            let path = cfg
                .optional(args.mesh_in, "mesh-in")
                .map_err(usage)?
                .ok_or_else(|| usage("flag `mesh-in` is required for mesh check"))?;
            let mesh = mesh::read_mesh(&path)?;
            let diag = validate_mesh(&mesh);
            println!("nodes {}", diag.node_count);
            println!("triangles {}", diag.triangle_count);
            println!("boundary_edges {}", diag.boundary_edge_count);
            println!("euler_characteristic {}", diag.euler_characteristic);
            println!("min_angle_deg {}", format_significant(diag.min_angle_deg, 12));
            println!("min_area {}", format_significant(diag.min_area, 12));
            println!("total_area {}", format_significant(diag.total_area, 12));
            println!("min_edge {}", format_significant(diag.min_edge, 12));
            println!("max_edge {}", format_significant(diag.max_edge, 12));
            println!("boundary_closed {}", diag.boundary_closed);
            println!("pass {}", diag.pass);
            for failure in &diag.failures {
                println!("failure {failure}");
            }
            Ok(if diag.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_exp(cmd: ExpCmd, cfg: &FileConfig) -> Result<ExitCode, AppError> {
    match cmd {
        ExpCmd::Asymptotic(args) => {
            let dims = cfg.list(args.dim, "dim", &[3, 4, 5]).map_err(usage)?;
            let ks = cfg.list(args.k, "k", &[1, 2, 3]).map_err(usage)?;
            let eps = cfg
                .list(args.eps, "eps", &[0.02, 0.04, 0.08])
                .map_err(usage)?;
            let out = out_dir(cfg, args.out)?;
            let report = exp::run_asymptotic_validation(&dims, &ks, &eps)?;
            emit_reports(&[report], &out)
        }
        ExpCmd::Compare(args) => {
            let dims = cfg.list(args.dim, "dim", &[3, 4, 5, 6]).map_err(usage)?;
            let ks = cfg.list(args.k, "k", &[1, 2, 3]).map_err(usage)?;
            let eps = cfg.list(args.eps, "eps", &[0.05, 0.1]).map_err(usage)?;
            let out = out_dir(cfg, args.out)?;
            let report = exp::run_normalized_comparison(&dims, &ks, &eps)?;
            emit_reports(&[report], &out)
        }
        ExpCmd::TubeLimit(args) => {
            let (eps, deltas, params, out) = tube_inputs(args, cfg)?;
            let report = exp::run_tube_limit(eps, &deltas, &params)?;
            emit_reports(&[report], &out)
        }
        ExpCmd::Neck(args) => {
            let (eps, deltas, params, out) = tube_inputs(args, cfg)?;
            let report = exp::run_neck_concentration(eps, &deltas, &params)?;
            emit_reports(&[report], &out)
        }
        ExpCmd::Optimize(args) => {
            let dim = cfg.scalar(args.dim, "dim", 3u32).map_err(usage)?;
            let out = out_dir(cfg, args.out)?;
            let report = exp::run_annulus_optimizer(dim)?;
            emit_reports(&[report], &out)
        }
        ExpCmd::Audit(args) => {
            let dim = cfg.scalar(args.dim, "dim", 3u32).map_err(usage)?;
            let out = out_dir(cfg, args.out)?;
            let mut reports = vec![
                exp::run_normalized_comparison(&[3, 4, 5, 6], &[1, 2, 3], &[0.05, 0.1])?,
                exp::run_annulus_optimizer(dim)?,
            ];
            let audit = exp::run_bound_audit(&reports)?;
            reports.push(audit);
            emit_reports(&reports, &out)
        }
    }
}

fn tube_inputs(
    args: TubeArgs,
    cfg: &FileConfig,
) -> Result<(f64, Vec<f64>, MeshParams, PathBuf), AppError> {
    let eps = cfg.scalar(args.eps, "eps", 0.2).map_err(usage)?;
    let deltas = cfg
        .list(args.delta, "delta", &[0.02, 0.01, 0.005])
        .map_err(usage)?;
    let h = cfg.scalar(args.h, "h", 0.05).map_err(usage)?;
    let out = out_dir(cfg, args.out)?;
    Ok((eps, deltas, MeshParams::uniform(h), out))
}

fn out_dir(cfg: &FileConfig, flag: Option<PathBuf>) -> Result<PathBuf, AppError> {
    Ok(cfg
        .optional(flag, "out")
        .map_err(usage)?
        .unwrap_or_else(|| PathBuf::from("reports")))
}

/// Writes each report into its own run directory under `parent`, prints all
/// summaries, and folds the verdicts into the exit status.
fn emit_reports(reports: &[exp::ExperimentReport], parent: &Path) -> Result<ExitCode, AppError> {
    let mut all_pass = true;
    for report in reports {
        let dir = report.write(parent)?;
        print!("{}", report.summary());
        println!("  report: {}", dir.display());
        all_pass &= report.all_pass();
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Reads `mesh_in` when given; otherwise meshes the domain selected by the
/// flags: --eps alone is the shell, --eps with --delta the tube-drilled
/// shell (wall graded to delta / 3), neither is the ball.
fn obtain_mesh(
    mesh_in: Option<PathBuf>,
    eps: Option<f64>,
    delta: Option<f64>,
    h: f64,
) -> Result<Mesh2D, AppError> {
    if let Some(path) = mesh_in {
        return Ok(mesh::read_mesh(&path)?);
    }
    let (kind, params) = match (eps, delta) {
        (Some(e), Some(d)) => (
            ProfileKind::AnnulusWithTube,
            ProfileParams::tube(e, d, 0.0),
        ),
        (Some(e), None) => (ProfileKind::Annulus, ProfileParams::annulus(e)),
        (None, Some(_)) => {
            return Err(usage("flag `delta` needs `eps` to define the tube domain"))
        }
        (None, None) => (ProfileKind::Ball, ProfileParams::default()),
    };
    let profile = make_profile(kind, params)?;
    let mut mesh_params = MeshParams::uniform(h);
    if let Some(d) = delta {
        mesh_params = mesh_params.with_grading(Feature::TubeWall, d / 3.0);
    }
    Ok(generate_mesh(&profile, &mesh_params)?)
}

/// CSV prints `value,multiplicity` rows at 12 significant digits; JSON adds
/// labels and the extra context fields.
fn print_spectrum(
    spectrum: &Spectrum,
    format: Format,
    extra: &[(&str, String)],
    warning: Option<&str>,
) {
    match format {
        Format::Csv => {
            println!("value,multiplicity");
            for e in spectrum.entries() {
                println!("{},{}", format_significant(e.value, 12), e.multiplicity);
            }
        }
        Format::Json => {
            let mut obj = serde_json::json!({
                "schema": "steklov-spectrum/v1",
                "spectrum": spectrum,
            });
            let map = obj.as_object_mut().expect("object literal");
            for (key, value) in extra {
                map.insert((*key).to_string(), parse_extra(value));
            }
            if let Some(w) = warning {
                map.insert(
                    "truncation_warning".to_string(),
                    serde_json::Value::String(w.to_string()),
                );
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("spectrum json"));
        }
    }
}

fn parse_extra(value: &str) -> serde_json::Value {
    value
        .parse::<i64>()
        .map(serde_json::Value::from)
        .or_else(|_| value.parse::<f64>().map(serde_json::Value::from))
        .unwrap_or_else(|_| serde_json::Value::String(value.to_string()))
}
