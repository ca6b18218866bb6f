//! Command-line front end. The binary only forwards `argv` to [`main_with`];
//! every command is an ordinary function from a resolved [`RunConfig`] to
//! an exit code and a report string.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::beltrami::{laplacian_vector, verify_gauss_identity, Form, VectorField};
use crate::error::{Error, Result};
use crate::finitetype::{
    collect_samples, fit_coordinate_matrix, theorem_check_tube, A33Evidence, Axis, FitReport, Grid, TubeCase,
};
use crate::frenet::{frenet_frame, Curve, CurveSpec};
use crate::geom::{Domain, Surface, SurfaceSpec};
use crate::tolerance::EPS_BAND;
use crate::tubes::TubeSpec;

type V3 = Vector3<f64>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_VANISHING_CURVATURE: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;

pub const SCHEMA: u32 = 1;
const DEFAULT_COUNTS: GridSize = GridSize { nu: 32, nv: 32 };

const FRENET_HELP: &str = "CSV columns: u, t1, t2, t3, h1, h2, h3, b1, b2, b3, kappa, tau.
The spec is a curve ({\"family\": ...}) or a tube surface; --grid N[xM] sets N rows.";
const REPORT_HELP: &str = "CSV columns: u, phi, delta, beta, K, H, N1, N2, N3, res_first, res_second, \
res_K, res_N, res_laplacian_components, res_laplacian_operator.
The last two are empty inside the singular band |cos phi| <= eps-band.";
const VERIFY_HELP: &str = "CSV columns: identity, status, max_residual, tolerance, worst_v1, worst_v2, points.
Exit status 1 if any identity fails, 4 if a sample lands in the singular band.";
const FIT_HELP: &str = "CSV columns: id, v1, v2, N1, N2, N3, LN1, LN2, LN3, residual.
Tube specs with --form II run the full tube check (case split and a33 evidence).";
const EXPORT_HELP: &str = "CSV columns: v1, v2, x, y, z, N1, N2, N3, K, H.";

#[derive(Debug, Parser)]
#[command(name = "tubular", version, about = "Fundamental forms, Beltrami operators and finite-type fits on tube surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the Frenet frame, curvature and torsion along a curve.
    #[command(after_help = FRENET_HELP)]
    Frenet(CommonArgs),
    /// Closed-form tube invariants and their residuals against the generic engine, per grid point.
    #[command(after_help = REPORT_HELP)]
    TubeReport(CommonArgs),
    /// Run the identity suite over a grid.
    #[command(after_help = VERIFY_HELP)]
    Verify(CommonArgs),
    /// Fit the constant matrix A in the finite-type condition for the Gauss map.
    #[command(after_help = FIT_HELP)]
    Fit(CommonArgs),
    /// Export positions, normals and curvatures on a grid.
    #[command(after_help = EXPORT_HELP)]
    GridExport(CommonArgs),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Frenet(_) => CommandKind::Frenet,
            Command::TubeReport(_) => CommandKind::TubeReport,
            Command::Verify(_) => CommandKind::Verify,
            Command::Fit(_) => CommandKind::Fit,
            Command::GridExport(_) => CommandKind::GridExport,
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Frenet(a)
            | Command::TubeReport(a)
            | Command::Verify(a)
            | Command::Fit(a)
            | Command::GridExport(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON surface or curve spec, or a run config with a "surface"/"curve" key.
    #[arg(long)]
    pub spec: PathBuf,
    /// Fundamental form for the operator: I, II or III.
    #[arg(long)]
    pub form: Option<Form>,
    /// Lattice counts, e.g. 32x32.
    #[arg(long)]
    pub grid: Option<GridSize>,
    /// Half-width in |cos phi| of the excluded band around cos phi = 0.
    #[arg(long)]
    pub eps_band: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Frenet,
    TubeReport,
    Verify,
    Fit,
    GridExport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub nu: usize,
    pub nv: usize,
}

impl FromStr for GridSize {
    type Err = Error;

    /// `NxM`, or a single `N` for both axes.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("grid {s:?} is not of the form NxM"));
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(GridSize { nu: parse(a)?, nv: parse(b)? }),
            None => {
                let n = parse(s)?;
                Ok(GridSize { nu: n, nv: n })
            }
        }
    }
}

/// Pass/fail thresholds of the `verify` suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub third_form: f64,
    pub weingarten: f64,
    pub gauss_map_identity: f64,
    pub closed_forms: f64,
    /// Relative.
    pub closed_curvature: f64,
    pub closed_normal: f64,
    /// Relative to `1 + |Δᴵᴵ N|`.
    pub laplacian: f64,
    pub rewrite: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            third_form: 1e-8,
            weingarten: 1e-8,
            gauss_map_identity: 1e-6,
            closed_forms: 1e-9,
            closed_curvature: 1e-9,
            closed_normal: 1e-10,
            laplacian: 1e-6,
            rewrite: 1e-10,
        }
    }
}

/// What the spec file describes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Target {
    Surface(SurfaceSpec),
    Curve(CurveSpec),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    surface: Option<SurfaceSpec>,
    curve: Option<CurveSpec>,
    form: Option<Form>,
    grid: Option<GridFile>,
    eps_band: Option<f64>,
    tolerances: Option<Tolerances>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    u: Option<[f64; 2]>,
    v: Option<[f64; 2]>,
    counts: Option<[usize; 2]>,
}

/// Fully resolved inputs of one command; embedded verbatim in JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub spec: Target,
    pub form: Form,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn parse_spec_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let context = |e: serde_json::Error| invalid(format!("{}: {e}", path.display()));
    if value.get("kind").is_some() {
        Ok(ConfigFile { surface: Some(serde_json::from_value(value).map_err(context)?), ..Default::default() })
    } else if value.get("family").is_some() {
        Ok(ConfigFile { curve: Some(serde_json::from_value(value).map_err(context)?), ..Default::default() })
    } else {
        serde_json::from_value(value).map_err(context)
    }
}

impl RunConfig {
    /// Merges flags over the spec file over defaults.
    pub fn resolve(command: CommandKind, args: &CommonArgs) -> Result<Self> {
        let file = parse_spec_file(&args.spec)?;
        let spec = match (file.surface, file.curve) {
            (Some(s), None) => Target::Surface(s),
            (None, Some(c)) => Target::Curve(c),
            (Some(_), Some(_)) => return Err(invalid("give either \"surface\" or \"curve\", not both")),
            (None, None) => return Err(invalid("spec names neither a surface nor a curve")),
        };
        let grid_file = file.grid.unwrap_or_default();
        let counts = args
            .grid
            .or(grid_file.counts.map(|[nu, nv]| GridSize { nu, nv }))
            .unwrap_or(DEFAULT_COUNTS);
        let eps_band = args.eps_band.or(file.eps_band).unwrap_or(EPS_BAND);
        let default_domain = match &spec {
            Target::Surface(s) => Surface::new(s.clone())?.sampling_domain(),
            Target::Curve(c) => {
                let range = Curve::new(c.clone())?.default_range();
                Domain { v1: range, v2: [0.0, std::f64::consts::TAU] }
            }
        };
        let [u0, u1] = grid_file.u.unwrap_or(default_domain.v1);
        let [v0, v1] = grid_file.v.unwrap_or(default_domain.v2);
        let grid = Grid {
            u: Axis { min: u0, max: u1, count: counts.nu },
            v: Axis { min: v0, max: v1, count: counts.nv },
            eps_band,
        };
        let config = RunConfig {
            command,
            spec,
            form: args.form.or(file.form).unwrap_or(Form::Second),
            grid,
            tolerances: file.tolerances.unwrap_or_default(),
            format: args.format.unwrap_or(match command {
                CommandKind::Frenet | CommandKind::GridExport => Format::Csv,
                _ => Format::Json,
            }),
            out: args.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [("u", self.grid.u), ("v", self.grid.v)] {
            if a.count < 2 {
                return Err(invalid(format!("grid count along {name} must be at least 2, got {}", a.count)));
            }
            if !(a.min.is_finite() && a.max.is_finite() && a.max > a.min) {
                return Err(invalid(format!("grid range along {name} is empty: [{}, {}]", a.min, a.max)));
            }
        }
        let e = self.grid.eps_band;
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&e) {
            return Err(invalid(format!("eps-band {e} outside [0, pi/2)")));
        }
        Ok(())
    }

    fn surface(&self) -> Result<Surface> {
        match &self.spec {
            Target::Surface(s) => Surface::new(s.clone()),
            Target::Curve(_) => Err(invalid(format!("{:?} needs a surface spec, got a curve", self.command))),
        }
    }
}

/// Exit status and report text of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    /// Diagnostic for stderr, if any.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Self { code: EXIT_OK, report, message: None }
    }

    fn error(e: &Error) -> Self {
        Self { code: exit_code(e), report: String::new(), message: Some(e.to_string()) }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VanishingCurvature { .. } => EXIT_VANISHING_CURVATURE,
        Error::SingularForm { .. }
        | Error::SingularBand { .. }
        | Error::DegenerateParametrization { .. }
        | Error::NonFinite(_) => EXIT_SINGULAR,
        _ => EXIT_INVALID_INPUT,
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(config: &RunConfig, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, config, body }).expect("report serializes");
    s.push('\n');
    s
}

fn csv_row(out: &mut String, fields: impl IntoIterator<Item = String>) {
    let line: Vec<String> = fields.into_iter().collect();
    out.push_str(&line.join(","));
    out.push('\n');
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn vec3(v: &V3) -> impl Iterator<Item = String> + '_ {
    v.iter().map(|x| num(*x))
}

/// Runs one command against a resolved config.
pub fn execute(config: &RunConfig) -> Outcome {
    let result = match config.command {
        CommandKind::Frenet => cmd_frenet(config),
        CommandKind::TubeReport => cmd_tube_report(config),
        CommandKind::Verify => cmd_verify(config),
        CommandKind::Fit => cmd_fit(config),
        CommandKind::GridExport => cmd_grid_export(config),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

#[derive(Serialize)]
struct FrenetRow {
    u: f64,
    t: V3,
    h: V3,
    b: V3,
    kappa: f64,
    tau: f64,
}

pub fn cmd_frenet(config: &RunConfig) -> Result<Outcome> {
    let curve = match &config.spec {
        Target::Curve(c) => Curve::new(c.clone())?,
        Target::Surface(SurfaceSpec::Tube { curve, .. }) => Curve::new(curve.clone())?,
        Target::Surface(_) => return Err(invalid("frenet needs a curve or a tube spec")),
    };
    let rows = config
        .grid
        .u
        .nodes()
        .into_iter()
        .map(|u| {
            let f = frenet_frame(&curve, u)?;
            Ok(FrenetRow { u, t: f.t, h: f.h, b: f.b, kappa: f.kappa, tau: f.tau })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                rows: Vec<FrenetRow>,
            }
            json(config, Body { rows })
        }
        Format::Csv => {
            let mut out = String::new();
            csv_row(&mut out, ["u", "t1", "t2", "t3", "h1", "h2", "h3", "b1", "b2", "b3", "kappa", "tau"].map(String::from));
            for r in &rows {
                let fields = std::iter::once(num(r.u))
                    .chain(vec3(&r.t))
                    .chain(vec3(&r.h))
                    .chain(vec3(&r.b))
                    .chain([num(r.kappa), num(r.tau)]);
                csv_row(&mut out, fields);
            }
            out
        }
    };
    Ok(Outcome::ok(report))
}

#[derive(Serialize)]
struct ReportResiduals {
    first_form: f64,
    second_form: f64,
    gauss_curvature: f64,
    gauss_map: f64,
    /// `None` inside the singular band.
    laplacian_components: Option<f64>,
    laplacian_operator: Option<f64>,
}

#[derive(Serialize)]
struct ReportPoint {
    u: f64,
    phi: f64,
    delta: f64,
    beta: f64,
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "N")]
    n: V3,
    in_band: bool,
    residuals: ReportResiduals,
}

fn max_form_diff(a: &crate::geom::FormMatrix, b: &crate::geom::FormMatrix) -> f64 {
    [(0, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(s, t)| (a.get(s, t) - b.get(s, t)).abs())
        .fold(0.0, f64::max)
}

pub fn cmd_tube_report(config: &RunConfig) -> Result<Outcome> {
    let surface = config.surface()?;
    let tube = surface.as_tube().ok_or_else(|| invalid("tube-report needs a tube spec"))?;
    let mut points = Vec::new();
    for (u, phi) in config.grid.points(false)? {
        let geo = surface.local(u, phi)?;
        let p = geo.point();
        let tp = tube.point(u, phi)?;
        let (first, second) = tube.forms_closed(u, phi)?;
        let k = tube.gauss_curvature(u, phi)?;
        let in_band = surface.check_band(u, phi, Form::Second, config.grid.eps_band).is_err();
        let (components, operator) = if in_band {
            (None, None)
        } else {
            let ln = laplacian_vector(&geo, &VectorField::gauss_map(), Form::Second)?;
            let closed = tube.laplacian_gauss_ambient(u, phi, config.grid.eps_band)?;
            let via_op = tube
                .laplacian_coeffs(u, phi, config.grid.eps_band)?
                .apply_vec(&tube.gauss_map_jet(u, phi)?);
            (Some((closed - ln).norm()), Some((via_op - ln).norm()))
        };
        points.push(ReportPoint {
            u,
            phi,
            delta: tp.delta,
            beta: tp.beta,
            k: p.gauss_curvature,
            h: p.mean_curvature,
            n: p.normal,
            in_band,
            residuals: ReportResiduals {
                first_form: max_form_diff(&first, &p.first),
                second_form: max_form_diff(&second, &p.second),
                gauss_curvature: (k - p.gauss_curvature).abs(),
                gauss_map: (tube.gauss_map(u, phi)? - p.normal).norm(),
                laplacian_components: components,
                laplacian_operator: operator,
            },
        });
    }
    let report = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                points: Vec<ReportPoint>,
            }
            json(config, Body { points })
        }
        Format::Csv => {
            let mut out = String::new();
            let header = [
                "u", "phi", "delta", "beta", "K", "H", "N1", "N2", "N3", "res_first", "res_second", "res_K", "res_N",
                "res_laplacian_components", "res_laplacian_operator",
            ];
            csv_row(&mut out, header.map(String::from));
            for p in &points {
                let r = &p.residuals;
                let fields = [p.u, p.phi, p.delta, p.beta, p.k, p.h]
                    .map(num)
                    .into_iter()
                    .chain(vec3(&p.n))
                    .chain([r.first_form, r.second_form, r.gauss_curvature, r.gauss_map].map(num))
                    .chain([opt(r.laplacian_components), opt(r.laplacian_operator)]);
                csv_row(&mut out, fields);
            }
            out
        }
    };
    Ok(Outcome::ok(report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Worst residual of one identity over the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    /// `(v1, v2)` of the largest residual.
    pub worst: Option<[f64; 2]>,
    pub points: usize,
}

impl IdentityCheck {
    fn new(identity: &'static str, tolerance: f64) -> Self {
        Self { identity, status: Status::Skipped, max_residual: 0.0, tolerance, worst: None, points: 0 }
    }

    fn record(&mut self, residual: f64, v1: f64, v2: f64) {
        // NaN counts as the worst possible value
        if self.worst.is_none() || !(residual <= self.max_residual) {
            if !(self.max_residual.is_nan()) {
                self.max_residual = residual;
                self.worst = Some([v1, v2]);
            }
        }
        self.points += 1;
    }

    fn finish(&mut self) {
        if self.points > 0 {
            self.status = if self.max_residual <= self.tolerance { Status::Pass } else { Status::Fail };
        }
    }
}

/// Runs every applicable identity at every grid point.
pub fn identity_suite(surface: &Surface, grid: &Grid, tol: &Tolerances) -> Result<Vec<IdentityCheck>> {
    let tube = surface.as_tube();
    // K vanishes identically on these, so nothing built on the second form applies
    let developable = matches!(surface.spec(), SurfaceSpec::Plane | SurfaceSpec::Cylinder { .. });
    let mut third = IdentityCheck::new("third_form", tol.third_form);
    let mut weingarten = IdentityCheck::new("weingarten", tol.weingarten);
    let mut gauss = IdentityCheck::new("gauss_map_identity", tol.gauss_map_identity);
    let mut forms = IdentityCheck::new("closed_forms", tol.closed_forms);
    let mut curvature = IdentityCheck::new("closed_gauss_curvature", tol.closed_curvature);
    let mut normal = IdentityCheck::new("closed_gauss_map", tol.closed_normal);
    let mut operator = IdentityCheck::new("laplacian_operator", tol.laplacian);
    let mut components = IdentityCheck::new("laplacian_components", tol.laplacian);
    let mut rewrite = IdentityCheck::new("rewritten_condition", tol.rewrite);

    for (v1, v2) in grid.points(surface.has_singular_band(Form::Second))? {
        if !developable {
            surface.check_band(v1, v2, Form::Second, grid.eps_band)?;
        }
        let geo = surface.local(v1, v2)?;
        let p = geo.point();
        let gm = geo.gauss_map();
        let r = [geo.tangents[0].value(), geo.tangents[1].value()];
        let (k, h) = (p.gauss_curvature, p.mean_curvature);
        let (mut e3, mut ew) = (0.0f64, 0.0f64);
        for s in 0..2 {
            for t in 0..2 {
                e3 = e3.max((p.third.get(s, t) - (2.0 * h * p.second.get(s, t) - k * p.first.get(s, t))).abs());
                ew = ew.max((gm.dn[s].dot(&r[t]) + p.second.get(s, t)).abs());
            }
        }
        third.record(e3, v1, v2);
        weingarten.record(ew, v1, v2);
        if developable {
            continue;
        }
        gauss.record(verify_gauss_identity(&geo)?.norm(), v1, v2);

        let Some(tube) = tube else { continue };
        let (first, second) = tube.forms_closed(v1, v2)?;
        forms.record(max_form_diff(&first, &p.first).max(max_form_diff(&second, &p.second)), v1, v2);
        let kc = tube.gauss_curvature(v1, v2)?;
        curvature.record((kc - k).abs() / kc.abs().max(1e-3), v1, v2);
        normal.record((tube.gauss_map(v1, v2)? - p.normal).norm(), v1, v2);

        let ln = laplacian_vector(&geo, &VectorField::gauss_map(), Form::Second)?;
        let scale = 1.0 + ln.norm();
        let via_op = tube.laplacian_coeffs(v1, v2, grid.eps_band)?.apply_vec(&tube.gauss_map_jet(v1, v2)?);
        operator.record((via_op - ln).norm() / scale, v1, v2);
        let closed = tube.laplacian_gauss_ambient(v1, v2, grid.eps_band)?;
        components.record((closed - ln).norm() / scale, v1, v2);

        let c = tube.laplacian_gauss_closed(v1, v2, grid.eps_band)?;
        let w = tube.rewritten_coefficients(v1, v2)?;
        let kappa = tube.curve().kappa_derivatives(v1)[0];
        let f = 2.0 * tube.radius() * kappa * tube.point(v1, v2)?.delta.powi(2) * v2.cos();
        let rw = [(c.t, w.t), (c.h, w.h), (c.b, w.b)]
            .iter()
            .map(|(x, y)| (x * f - y).abs() / (1.0 + y.abs()))
            .fold(0.0, f64::max);
        rewrite.record(rw, v1, v2);
    }
    let mut all = vec![third, weingarten, gauss];
    if tube.is_some() {
        all.extend([forms, curvature, normal, operator, components, rewrite]);
    }
    for c in &mut all {
        c.finish();
    }
    Ok(all)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome> {
    let surface = config.surface()?;
    let checks = identity_suite(&surface, &config.grid, &config.tolerances)?;
    let failed: Vec<&IdentityCheck> = checks.iter().filter(|c| c.status == Status::Fail).collect();
    let passed = failed.is_empty();
    let report = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                passed: bool,
                identities: &'a [IdentityCheck],
            }
            json(config, Body { passed, identities: &checks })
        }
        Format::Csv => {
            let mut out = String::new();
            let header = ["identity", "status", "max_residual", "tolerance", "worst_v1", "worst_v2", "points"];
            csv_row(&mut out, header.map(String::from));
            for c in &checks {
                let status = serde_json::to_value(c.status).expect("status serializes");
                csv_row(
                    &mut out,
                    [
                        c.identity.to_string(),
                        status.as_str().unwrap_or_default().to_string(),
                        num(c.max_residual),
                        num(c.tolerance),
                        opt(c.worst.map(|w| w[0])),
                        opt(c.worst.map(|w| w[1])),
                        c.points.to_string(),
                    ],
                );
            }
            out
        }
    };
    if passed {
        return Ok(Outcome::ok(report));
    }
    let mut message = String::new();
    for c in failed {
        let [v1, v2] = c.worst.unwrap_or([f64::NAN; 2]);
        let _ = writeln!(
            message,
            "{} failed: max residual {:e} > {:e} at ({v1}, {v2})",
            c.identity, c.max_residual, c.tolerance
        );
    }
    Ok(Outcome { code: EXIT_IDENTITY_FAILURE, report, message: Some(message.trim_end().to_string()) })
}

#[derive(Serialize)]
struct FitBody {
    #[serde(flatten)]
    fit: FitReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<TubeCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a33_spread: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a33: Option<A33Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_witness: Option<(f64, f64)>,
}

pub fn cmd_fit(config: &RunConfig) -> Result<Outcome> {
    let surface = config.surface()?;
    let samples = collect_samples(&surface, config.form, &config.grid)?;
    let body = match (surface.spec(), config.form) {
        (SurfaceSpec::Tube { curve, radius }, Form::Second) => {
            let spec = TubeSpec { curve: curve.clone(), radius: *radius };
            let t = theorem_check_tube(&spec, &config.grid)?;
            FitBody {
                case: Some(t.case),
                a33_spread: t.a33.map(|a| a.spread),
                a33: t.a33,
                max_abs_beta: Some(t.max_abs_beta),
                beta_witness: Some(t.beta_witness),
                fit: t.fit,
            }
        }
        _ => FitBody {
            fit: fit_coordinate_matrix(&samples)?,
            case: None,
            a33_spread: None,
            a33: None,
            max_abs_beta: None,
            beta_witness: None,
        },
    };
    let report = match config.format {
        Format::Json => json(config, body),
        Format::Csv => {
            let mut out = String::new();
            let header = ["id", "v1", "v2", "N1", "N2", "N3", "LN1", "LN2", "LN3", "residual"];
            csv_row(&mut out, header.map(String::from));
            let a = body.fit.matrix();
            for s in &samples.samples {
                let fields = std::iter::once(s.id.to_string())
                    .chain([num(s.v1), num(s.v2)])
                    .chain(vec3(&s.normal))
                    .chain(vec3(&s.image))
                    .chain(std::iter::once(num((s.image - a * s.normal).norm())));
                csv_row(&mut out, fields);
            }
            out
        }
    };
    Ok(Outcome::ok(report))
}

pub fn cmd_grid_export(config: &RunConfig) -> Result<Outcome> {
    let surface = config.surface()?;
    let points = config
        .grid
        .points(false)?
        .into_iter()
        .map(|(v1, v2)| surface.point(v1, v2))
        .collect::<Result<Vec<_>>>()?;
    let report = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                points: Vec<crate::geom::SurfacePoint>,
            }
            json(config, Body { points })
        }
        Format::Csv => {
            let mut out = String::new();
            csv_row(&mut out, ["v1", "v2", "x", "y", "z", "N1", "N2", "N3", "K", "H"].map(String::from));
            for p in &points {
                let fields = [num(p.v1), num(p.v2)]
                    .into_iter()
                    .chain(vec3(&p.position))
                    .chain(vec3(&p.normal))
                    .chain([num(p.gauss_curvature), num(p.mean_curvature)]);
                csv_row(&mut out, fields);
            }
            out
        }
    };
    Ok(Outcome::ok(report))
}

/// Parses, resolves and runs; never touches stdout or the filesystem.
pub fn run(cli: &Cli) -> Outcome {
    match RunConfig::resolve(cli.command.kind(), cli.command.args()) {
        Ok(config) => execute(&config),
        Err(e) => Outcome::error(&e),
    }
}

/// Entry point of the binary: parses `args`, runs, writes the report and
/// returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = run(&cli);
    if let Some(m) = &outcome.message {
        eprintln!("tubular: {m}");
    }
    if !outcome.report.is_empty() {
        let written = match &cli.command.args().out {
            Some(path) => std::fs::write(path, &outcome.report)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                use std::io::Write;
                match std::io::stdout().write_all(outcome.report.as_bytes()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                    _ => Ok(()),
                }
            }
        };
        if let Err(m) = written {
            eprintln!("tubular: {m}");
            return EXIT_INVALID_INPUT;
        }
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size_parsing() {
        assert_eq!("32x16".parse::<GridSize>().unwrap(), GridSize { nu: 32, nv: 16 });
        assert_eq!("8".parse::<GridSize>().unwrap(), GridSize { nu: 8, nv: 8 });
        assert!("8x".parse::<GridSize>().is_err());
        assert!("axb".parse::<GridSize>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::VanishingCurvature { u: 0.0, kappa: 0.0 }), 3);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), 2);
        let band = Error::SingularBand { u: 0.0, phi: 1.5, cos_phi: 0.07, eps_band: 0.15 };
        assert_eq!(exit_code(&band), 4);
    }

    #[test]
    fn nan_residual_is_recorded_as_worst() {
        let mut c = IdentityCheck::new("x", 1.0);
        c.record(0.5, 0.0, 0.0);
        c.record(f64::NAN, 1.0, 1.0);
        c.record(0.7, 2.0, 2.0);
        c.finish();
        assert!(c.max_residual.is_nan());
        assert_eq!(c.worst, Some([1.0, 1.0]));
        assert_eq!(c.status, Status::Fail);
    }
}
