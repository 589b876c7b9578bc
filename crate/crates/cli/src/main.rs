mod commands;
mod json;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minitori::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "minitori", version, about = "Minimal tori in R^4: construction, verification and certificates")]
pub struct Cli {
    /// Seed for every randomized choice (sample points, starts, projections).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory for file artifacts (meshes, CSV).
    #[arg(long, global = true, env = "MINITORI_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice invariants g2, g3, eta1, eta2.
    Invariants(InvariantsArgs),
    /// Solve the Type-II system in closed form.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Conformality, period and ODE residuals of an immersion.
    Residuals(ResidualsArgs),
    /// Certify negativity of the solvability expression on an interval.
    Certify(CertifyArgs),
    /// Regime bounds on the hundredths subintervals of [1.05, 1.15].
    Table(TableArgs),
    /// Type-I residual along rectangular lattices.
    #[command(name = "scan-type1")]
    ScanType1(ScanArgs),
    /// Multi-start refinement and classification on a lattice.
    Uniqueness(UniquenessArgs),
    /// Sample a mesh and write OBJ and CSV files.
    Mesh(MeshArgs),
    /// Writhe at infinity of the end, with its braid.
    Writhe(WritheArgs),
    /// Solve, residuals, curvature and end order in one run.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    /// Rectangular lattice tau = R i (q-series route).
    #[arg(long = "R", conflicts_with = "tau")]
    pub r: Option<f64>,
    /// General tau as "re,im" (lattice-sum route).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub tau: Option<Complex64>,
}

#[derive(Subcommand, Debug)]
pub enum SolveCommand {
    /// Rectangular lattice tau = R i.
    Rect {
        #[arg(long = "R")]
        r: f64,
    },
    /// Square lattice family with parameter lambda ("re,im").
    Square {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "1,0")]
        lambda: Complex64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Rectangular modulus.
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Square family or Enneper node parameter, "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub lambda: Option<Complex64>,
    /// Parameter of the embedded Enneper surface.
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Rect,
    Square,
    Enneper3d,
    Nodes,
    Embedded,
    Quintic,
}

#[derive(Args, Debug)]
pub struct ResidualsArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Tolerance for conformality and ODE residuals.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Tolerance for period residuals.
    #[arg(long, default_value_t = 1e-8)]
    pub period_tol: f64,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 1.001)]
    pub from: f64,
    #[arg(long, default_value_t = 20.0)]
    pub to: f64,
    /// Spacing of the dense sampling grid; omit to check regimes only.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Range of k as "a..b" (inclusive).
    #[arg(long, default_value = "5..14", value_parser = parse_range)]
    pub k: (u32, u32),
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Also write the table to this file name inside the output directory.
    #[arg(long)]
    pub save: Option<String>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub from: f64,
    #[arg(long, default_value_t = 5.0)]
    pub to: f64,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct UniquenessArgs {
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    /// Lattice parameter "re,im"; defaults to the square lattice.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0,1")]
    pub tau: Complex64,
    /// Scale of the random starting points.
    #[arg(long, default_value_t = 0.3)]
    pub scale: f64,
    /// Residual tolerance for classification.
    #[arg(long, default_value_t = 1e-3)]
    pub classify_tol: f64,
    /// Include every start in the output.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionArg {
    Drop1,
    Drop2,
    Drop3,
    Drop4,
    Stereo,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Pole-disk radius (tori) or half-width of the square (planar kinds).
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum, default_value_t = ProjectionArg::Drop4)]
    pub projection: ProjectionArg,
    /// File stem for the OBJ and CSV files.
    #[arg(long, default_value = "mesh")]
    pub stem: String,
    /// Scan the mesh for double points.
    #[arg(long)]
    pub double_points: bool,
}

#[derive(Args, Debug)]
pub struct WritheArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Domain radius of the boundary circle.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Number of curve samples.
    #[arg(long, default_value_t = 2048)]
    pub m: usize,
    /// Expected value; a mismatch is a verification failure.
    #[arg(long, allow_hyphen_values = true)]
    pub expect: Option<i64>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Rectangular modulus; omit and pass --lambda for the square family.
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, conflicts_with = "r")]
    pub lambda: Option<Complex64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected \"re\" or \"re,im\", got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or(format!("expected a..b, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            println!("{}", out.stdout);
            if let Some(msg) = &out.failure {
                eprintln!("verification failed: {msg}");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
