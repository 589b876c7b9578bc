use crate::json;
use crate::{
    CertifyArgs, Cli, Command, InvariantsArgs, Kind, MeshArgs, ProjectionArg, ReportArgs, ResidualsArgs, ScanArgs,
    SolveCommand, SurfaceArgs, TableArgs, TableFormat, UniquenessArgs, WritheArgs,
};
use minitori::certify::{certify_negativity, table, TableRow};
use minitori::elliptic::{general_invariants, rectangular_invariants};
use minitori::geometry::{
    build_immersion, curvature_report, end_order, export_mesh, sample_mesh, self_intersection_scan, DoublePoint,
    EndReport, PeriodResiduals, Projection,
};
use minitori::knots::{braid_of_end, writhe_at_infinity, WritheReport};
use minitori::solver::{multi_start, solve_rectangular, square_family, type_i_scan, type_ii_residual, RefineOptions};
use minitori::{
    BraidDiagram, Complex64, CurvatureReport, EllipticInvariants, Immersion, ImmersionKind, Lattice,
    RectangularSolution, SeriesConfig, TypeIIParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

pub struct Output {
    pub stdout: String,
    /// Set when the command ran but a verification step did not hold.
    pub failure: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(minitori::Error),
    Json(serde_json::Error),
    Io(std::io::Error),
}

impl CliError {
    /// 1 for bad input, 2 for computations that could not be carried out or
    /// verified.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(minitori::Error::Domain(_) | minitori::Error::WrongLattice(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "serialization: {e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<minitori::Error> for CliError {
    fn from(e: minitori::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn emit<T: Serialize>(value: &T, failures: Vec<String>) -> Result<Output> {
    Ok(Output {
        stdout: json::to_string(value)?,
        failure: if failures.is_empty() { None } else { Some(failures.join("; ")) },
    })
}

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Solve(SolveCommand::Rect { r }) => solve_rect(*r),
        Command::Solve(SolveCommand::Square { lambda }) => solve_square(*lambda),
        Command::Residuals(a) => residuals(a, cli.seed),
        Command::Certify(a) => certify(a),
        Command::Table(a) => table_cmd(a, cli),
        Command::ScanType1(a) => scan(a),
        Command::Uniqueness(a) => uniqueness(a, cli.seed),
        Command::Mesh(a) => mesh(a, cli),
        Command::Writhe(a) => writhe(a, cli.seed),
        Command::Report(a) => report(a, cli.seed),
    }
}

fn invariants_of(tau: Complex64) -> Result<EllipticInvariants> {
    Ok(if tau.re == 0.0 {
        rectangular_invariants(tau.im, &cfg())?
    } else {
        general_invariants(tau, &cfg())?
    })
}

#[derive(Serialize)]
struct InvariantsOut {
    route: &'static str,
    #[serde(with = "minitori::serde_complex")]
    tau: Complex64,
    invariants: EllipticInvariants,
    legendre_residual: f64,
}

fn invariants(a: &InvariantsArgs) -> Result<Output> {
    let (route, tau, inv) = match (a.r, a.tau) {
        (Some(r), None) => ("q-series", Complex64::new(0.0, r), rectangular_invariants(r, &cfg())?),
        (None, Some(tau)) => ("lattice-sum", tau, general_invariants(tau, &cfg())?),
        _ => return Err(CliError::Usage("pass exactly one of --R or --tau".into())),
    };
    let out = InvariantsOut {
        route,
        tau,
        invariants: inv,
        legendre_residual: inv.legendre_residual(tau),
    };
    let fail = if out.legendre_residual > 1e-10 {
        vec![format!("Legendre residual {:e} above 1e-10", out.legendre_residual)]
    } else {
        vec![]
    };
    emit(&out, fail)
}

/// Rectangular moduli below one describe the same torus as `1/R`.
fn effective_r(r: f64) -> Result<(f64, Option<String>)> {
    if !r.is_finite() || r <= 0.0 {
        return Err(CliError::Usage(format!("--R must be positive, got {r}")));
    }
    if r == 1.0 {
        return Err(CliError::Usage(
            "R = 1 is the square lattice; use `solve square` or `report --lambda`".into(),
        ));
    }
    if r < 1.0 {
        Ok((1.0 / r, Some(format!("R = {r} solved as the conformally equivalent R = {}", 1.0 / r))))
    } else {
        Ok((r, None))
    }
}

#[derive(Serialize)]
struct SolveRectOut {
    requested_r: f64,
    solved_r: f64,
    note: Option<String>,
    solution: RectangularSolution,
    params: TypeIIParams,
    max_residual: f64,
}

fn solve_rect_inner(r: f64) -> Result<SolveRectOut> {
    let (solved, note) = effective_r(r)?;
    let inv = rectangular_invariants(solved, &cfg())?;
    let sol = solve_rectangular(solved, &inv)?;
    let params = sol.params();
    let max_residual = type_ii_residual(&params, &inv, Complex64::new(0.0, solved)).max_abs();
    Ok(SolveRectOut {
        requested_r: r,
        solved_r: solved,
        note,
        solution: sol,
        params,
        max_residual,
    })
}

fn solve_rect(r: f64) -> Result<Output> {
    let out = solve_rect_inner(r)?;
    let fail = if out.max_residual > 1e-9 {
        vec![format!("Type-II residual {:e} above 1e-9", out.max_residual)]
    } else {
        vec![]
    };
    emit(&out, fail)
}

#[derive(Serialize)]
struct SolveSquareOut {
    #[serde(with = "minitori::serde_complex")]
    lambda: Complex64,
    a_squared: f64,
    lies_in_r3: bool,
    params: TypeIIParams,
    max_residual: f64,
}

fn solve_square(lambda: Complex64) -> Result<Output> {
    let inv = rectangular_invariants(1.0, &cfg())?;
    let fam = square_family(lambda, &inv)?;
    let params = fam.params();
    let out = SolveSquareOut {
        lambda,
        a_squared: fam.a_squared(),
        lies_in_r3: fam.lies_in_r3(),
        params,
        max_residual: type_ii_residual(&params, &inv, Complex64::i()).max_abs(),
    };
    let fail = if out.max_residual > 1e-9 {
        vec![format!("Type-II residual {:e} above 1e-9", out.max_residual)]
    } else {
        vec![]
    };
    emit(&out, fail)
}

fn surface_kind(s: &SurfaceArgs) -> Result<(ImmersionKind, Option<String>)> {
    let need = |name: &str| CliError::Usage(format!("this --kind needs --{name}"));
    Ok(match s.kind {
        Kind::Rect => {
            let (r, note) = effective_r(s.r.ok_or_else(|| need("R"))?)?;
            (ImmersionKind::Rectangular { r }, note)
        }
        Kind::Square => (
            ImmersionKind::Square {
                lambda: s.lambda.unwrap_or(Complex64::new(1.0, 0.0)),
            },
            None,
        ),
        Kind::Enneper3d => (ImmersionKind::Enneper3D, None),
        Kind::Nodes => (
            ImmersionKind::Enneper4DNodes {
                lambda: s.lambda.unwrap_or(Complex64::new(2.0, 0.0)),
            },
            None,
        ),
        Kind::Embedded => (ImmersionKind::Enneper4DEmbedded { s: s.s.unwrap_or(1.0) }, None),
        Kind::Quintic => (ImmersionKind::Quintic, None),
    })
}

#[derive(Serialize)]
struct ResidualsOut {
    kind: ImmersionKind,
    note: Option<String>,
    samples: usize,
    max_conformality: f64,
    periods: Option<PeriodResiduals>,
    max_period: Option<f64>,
    /// `|℘′² − 4℘³ + g₂℘ + g₃| / (1 + |℘|³)`.
    max_ode: Option<f64>,
    max_translation_defect: Option<f64>,
    max_laplacian: f64,
}

fn residual_suite(imm: &Immersion, samples: usize, seed: u64, note: Option<String>) -> Result<ResidualsOut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_conformality = imm.max_conformality_residual(samples, &mut rng)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let points: Vec<Complex64> = (0..samples).map(|_| imm.random_point(&mut rng)).collect();
    let mut max_laplacian: f64 = 0.0;
    for z in points.iter().take(20) {
        max_laplacian = max_laplacian.max(imm.discrete_laplacian(*z, 1e-3)?);
    }
    let (periods, max_ode, max_translation_defect) = match imm.weierstrass() {
        Some(wp) => {
            let mut ode: f64 = 0.0;
            let mut defect: f64 = 0.0;
            for z in &points {
                let v = wp.eval(*z)?;
                ode = ode.max(wp.ode_residual(&v) / (1.0 + v.p.norm().powi(3)));
            }
            for z in points.iter().take(20) {
                for c in [minitori::Cycle::Gamma1, minitori::Cycle::Gamma2] {
                    defect = defect.max(imm.translation_defect(*z, c)?);
                }
            }
            (Some(imm.period_residuals()?), Some(ode), Some(defect))
        }
        None => (None, None, None),
    };
    Ok(ResidualsOut {
        kind: imm.kind,
        note,
        samples,
        max_conformality,
        max_period: periods.as_ref().map(|p| p.max_abs()),
        periods,
        max_ode,
        max_translation_defect,
        max_laplacian,
    })
}

fn residual_failures(out: &ResidualsOut, tol: f64, period_tol: f64) -> Vec<String> {
    let mut fail = Vec::new();
    if out.max_conformality > tol {
        fail.push(format!("conformality residual {:e} above {tol:e}", out.max_conformality));
    }
    if let Some(p) = out.max_period.filter(|&p| p > period_tol) {
        fail.push(format!("period residual {p:e} above {period_tol:e}"));
    }
    if let Some(o) = out.max_ode.filter(|&o| o > tol) {
        fail.push(format!("ODE residual {o:e} above {tol:e}"));
    }
    fail
}

fn residuals(a: &ResidualsArgs, seed: u64) -> Result<Output> {
    let (kind, note) = surface_kind(&a.surface)?;
    let imm = build_immersion(kind, &cfg())?;
    let out = residual_suite(&imm, a.samples, seed, note)?;
    let fail = residual_failures(&out, a.tol, a.period_tol);
    emit(&out, fail)
}

fn certify(a: &CertifyArgs) -> Result<Output> {
    let rep = certify_negativity(a.from, a.to, a.step)?;
    let mut fail = Vec::new();
    if !rep.all_negative {
        fail.push("solvability expression not certified negative".to_string());
    }
    if !rep.grid_failures.is_empty() {
        fail.push(format!("{} grid points failed", rep.grid_failures.len()));
    }
    if !rep.uncertified_gaps.is_empty() {
        fail.push(format!("uncovered intervals {:?}", rep.uncertified_gaps));
    }
    emit(&rep, fail)
}

fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("k,r1,r2,bound,printed,matches_printed,negative\n");
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{:.16e},{},{},{}\n",
            r.k,
            r.r1,
            r.r2,
            r.bound,
            opt(r.printed.map(|p| p.to_string())),
            opt(r.matches_printed.map(|m| m.to_string())),
            r.negative
        ));
    }
    s
}

fn table_cmd(a: &TableArgs, cli: &Cli) -> Result<Output> {
    let rows = table(a.k.0..=a.k.1)?;
    let text = match a.format {
        TableFormat::Csv => table_csv(&rows),
        TableFormat::Json => json::to_string(&rows)?,
    };
    if let Some(name) = &a.save {
        std::fs::create_dir_all(&cli.out_dir)?;
        std::fs::write(cli.out_dir.join(name), &text)?;
    }
    let fail: Vec<String> = rows
        .iter()
        .filter(|r| !r.negative)
        .map(|r| format!("bound on k = {} is not negative", r.k))
        .collect();
    Ok(Output {
        stdout: text.trim_end().to_string(),
        failure: if fail.is_empty() { None } else { Some(fail.join("; ")) },
    })
}

fn scan(a: &ScanArgs) -> Result<Output> {
    let rep = type_i_scan(a.from, a.to, a.points, &cfg())?;
    let fail = if rep.sign_changes.is_empty() {
        vec![]
    } else {
        vec![format!("Type-I residual changes sign on {:?}", rep.sign_changes)]
    };
    emit(&rep, fail)
}

#[derive(Serialize)]
struct UniquenessOut {
    #[serde(with = "minitori::serde_complex")]
    tau: Complex64,
    seed: u64,
    starts: usize,
    converged: usize,
    cg_family: usize,
    rectangular: usize,
    other: usize,
    outcomes: Option<Vec<minitori::solver::StartOutcome>>,
}

fn uniqueness(a: &UniquenessArgs, seed: u64) -> Result<Output> {
    if a.tau.im <= 0.0 {
        return Err(CliError::Usage(format!("tau must lie in the upper half-plane, got {}", a.tau)));
    }
    let inv = invariants_of(a.tau)?;
    let rep = multi_start(a.starts, seed, a.scale, a.tau, &inv, &RefineOptions::default(), a.classify_tol);
    let fail = if rep.other > 0 {
        vec![format!("{} convergent runs are neither CG family nor rectangular", rep.other)]
    } else {
        vec![]
    };
    let out = UniquenessOut {
        tau: a.tau,
        seed,
        starts: rep.starts,
        converged: rep.converged,
        cg_family: rep.cg_family,
        rectangular: rep.rectangular,
        other: rep.other,
        outcomes: a.verbose.then_some(rep.outcomes),
    };
    emit(&out, fail)
}

#[derive(Serialize)]
struct MeshOut {
    kind: ImmersionKind,
    note: Option<String>,
    n: usize,
    radius: f64,
    vertices: usize,
    faces: usize,
    obj: String,
    csv: String,
    double_points: Option<Vec<DoublePoint>>,
    signed_double_points: Option<i64>,
}

fn mesh(a: &MeshArgs, cli: &Cli) -> Result<Output> {
    let (kind, note) = surface_kind(&a.surface)?;
    let imm = build_immersion(kind, &cfg())?;
    let radius = a.radius.unwrap_or(if imm.is_torus() { 0.05 } else { 2.0 });
    let m = sample_mesh(&imm, a.n, radius)?;
    if !m.is_finite() {
        return Err(minitori::Error::Degenerate("mesh has non-finite vertices".into()).into());
    }
    let projection = match a.projection {
        ProjectionArg::Drop1 => Projection::Drop(0),
        ProjectionArg::Drop2 => Projection::Drop(1),
        ProjectionArg::Drop3 => Projection::Drop(2),
        ProjectionArg::Drop4 => Projection::Drop(3),
        ProjectionArg::Stereo => Projection::Stereographic,
    };
    let (obj, csv) = export_mesh(&m, projection, &cli.out_dir, &a.stem)?;
    let double_points = if a.double_points {
        Some(self_intersection_scan(&imm, &m)?)
    } else {
        None
    };
    let out = MeshOut {
        kind,
        note,
        n: a.n,
        radius,
        vertices: m.vertices.len(),
        faces: m.faces.len(),
        obj: obj.display().to_string(),
        csv: csv.display().to_string(),
        signed_double_points: double_points.as_ref().map(|d| d.iter().map(|p| p.sign as i64).sum()),
        double_points,
    };
    emit(&out, vec![])
}

#[derive(Serialize)]
struct WritheOut {
    kind: ImmersionKind,
    writhe: WritheReport,
    braid: Option<BraidDiagram>,
    braid_error: Option<String>,
}

/// Boundary radius at which the leading term of the end dominates.
fn default_end_radius(kind: &ImmersionKind) -> f64 {
    match kind {
        ImmersionKind::Enneper4DEmbedded { .. } => 20.0,
        k if k.is_torus() => 0.02,
        _ => 10.0,
    }
}

fn writhe(a: &WritheArgs, seed: u64) -> Result<Output> {
    let (kind, _) = surface_kind(&a.surface)?;
    let imm = build_immersion(kind, &cfg())?;
    let r = a.radius.unwrap_or_else(|| default_end_radius(&kind));
    let rep = writhe_at_infinity(&imm, r, a.m, seed)?;
    let (braid, braid_error) = match braid_of_end(&imm, r, a.m, seed) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut fail = Vec::new();
    if let Some(w) = a.expect.filter(|&w| w != rep.value) {
        fail.push(format!("writhe {} differs from the expected {w}", rep.value));
    }
    if let Some(b) = braid.as_ref().filter(|b| b.algebraic_length != rep.value) {
        fail.push(format!("braid length {} differs from the writhe {}", b.algebraic_length, rep.value));
    }
    let out = WritheOut {
        kind,
        writhe: rep,
        braid,
        braid_error,
    };
    emit(&out, fail)
}

#[derive(Serialize)]
struct ReportOut {
    kind: ImmersionKind,
    note: Option<String>,
    params: TypeIIParams,
    type_ii_residual: f64,
    residuals: ResidualsOut,
    curvature: CurvatureReport,
    end: EndReport,
    failures: Vec<String>,
}

fn report(a: &ReportArgs, seed: u64) -> Result<Output> {
    let (kind, note, params, res) = match (a.r, a.lambda) {
        (Some(r), None) => {
            let s = solve_rect_inner(r)?;
            (ImmersionKind::Rectangular { r: s.solved_r }, s.note, s.params, s.max_residual)
        }
        (None, Some(lambda)) => {
            let inv = rectangular_invariants(1.0, &cfg())?;
            let p = square_family(lambda, &inv)?.params();
            (ImmersionKind::Square { lambda }, None, p, type_ii_residual(&p, &inv, Lattice::square().tau()).max_abs())
        }
        _ => return Err(CliError::Usage("pass exactly one of --R or --lambda".into())),
    };
    let imm = build_immersion(kind, &cfg())?;
    let residuals = residual_suite(&imm, 100, seed, None)?;
    let curvature = curvature_report(&imm)?;
    let end = end_order(&imm)?;

    let mut failures = Vec::new();
    if res > a.tol {
        failures.push(format!("Type-II residual {res:e} above {:e}", a.tol));
    }
    failures.extend(residual_failures(&residuals, a.tol, 1e-8));
    for (name, d) in [("d+", curvature.d_plus), ("d-", curvature.d_minus)] {
        if (d - d.round()).abs() > 0.01 {
            failures.push(format!("{name} = {d} is not within 0.01 of an integer"));
        }
    }
    if curvature.jorge_meeks_gap() > 1e-3 * curvature.total_kt.abs() {
        failures.push(format!(
            "total curvature {} misses the end-order value {}",
            curvature.total_kt, curvature.jorge_meeks
        ));
    }
    if end.n != 3 {
        failures.push(format!("end order {} instead of 3", end.n));
    }
    let fail = failures.clone();
    let out = ReportOut {
        kind,
        note,
        params,
        type_ii_residual: res,
        residuals,
        curvature,
        end,
        failures,
    };
    emit(&out, fail)
}
