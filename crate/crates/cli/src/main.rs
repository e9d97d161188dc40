//! `revolve`: build surfaces of revolution, run the condition checkers and
//! export half periods, geodesics and cut loci as CSV or JSON.
//!
//! Exit status: 0 pass, 1 check failed or inconclusive, 2 numerical
//! failure, 64 usage error.

mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{linspace, parse_grid, FamilyArg, Settings};
use output::{emit, json_text, Csv};
use revolve_core::constructors::lambda0_bound;
use revolve_core::cutlocus::{cut_locus, verify_gvm, CutOptions};
use revolve_core::geodesic::{half_period_derivative, half_periods, shoot, HalfPeriod};
use revolve_core::profile::{check_conditions, total_curvature, ConditionSet, Verdict};
use revolve_core::{Domain, SurfaceKind};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

macro_rules! numeric {
    ($e:expr) => {
        $e.map_err(|e| Failure::Numeric(e.to_string()))
    };
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
}

#[derive(Parser, Debug)]
#[command(name = "revolve", version, about = "Geodesics and cut loci on surfaces of revolution")]
struct Cli {
    #[command(flatten)]
    surface: SurfaceArgs,

    /// JSON file with any of the long options as keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[arg(long, global = true, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    n0: Option<u32>,
    /// Serialized profile, as written by `build`
    #[arg(long, global = true)]
    profile: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the profile: critical radii, limits, total curvature
    Profile,
    /// Run a condition checker and write its JSON report
    Check {
        /// M1-M4, M5M6, A1A3 or empty-cutlocus
        #[arg(long)]
        set: Option<String>,
    },
    /// Tabulate φ, ψ and their derivatives
    HalfPeriod {
        /// ν-grid as a:b:n
        #[arg(long)]
        nu: Option<String>,
    },
    /// Shoot one geodesic and write its samples
    Geodesic {
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta0: Option<f64>,
        /// Angle with the outward meridian
        #[arg(long, allow_negative_numbers = true)]
        angle: Option<f64>,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Cut locus of the point (r0, 0)
    CutLocus {
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        fan: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Integrator tolerance for the fan
        #[arg(long)]
        ode_tol: Option<f64>,
    },
    /// Check that cut loci from several radii lie on the opposite meridian
    VerifyGvm {
        /// Comma separated radii
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long)]
        fan: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Integrator tolerance for the fan
        #[arg(long)]
        ode_tol: Option<f64>,
    },
    /// Build a profile and write it as JSON
    Build {
        #[arg(value_enum)]
        what: BuildKind,
    },
    /// Sufficient bound λ₀(α) for the sphere family
    Lambda0,
    /// Plot-ready CSV
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        fan: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    MAlpha,
    Oscillating,
    Sphere,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlotKind {
    ProfileCurve,
    HalfPeriod,
    CutLocus,
    Curvature,
}

impl Cli {
    fn settings(&self) -> Settings {
        let mut s = Settings {
            family: self.surface.family,
            alpha: self.surface.alpha,
            lambda: self.surface.lambda,
            n0: self.surface.n0,
            profile: self.surface.profile.clone(),
            out: self.out.clone(),
            ..Settings::default()
        };
        match &self.cmd {
            Command::Check { set } => s.set = set.clone(),
            Command::HalfPeriod { nu } => s.nu = nu.clone(),
            Command::Geodesic { r0, theta0, angle, length, tol } => {
                (s.r0, s.theta0, s.angle, s.length, s.tol) = (*r0, *theta0, *angle, *length, *tol);
            }
            Command::CutLocus { r0, fan, tol, ode_tol } => (s.r0, s.fan, s.tol, s.ode_tol) = (*r0, *fan, *tol, *ode_tol),
            Command::VerifyGvm { radii, fan, tol, ode_tol } => {
                (s.radii, s.fan, s.tol, s.ode_tol) = (radii.clone(), *fan, *tol, *ode_tol);
            }
            Command::Plot { x_min, x_max, points, nu, r0, fan, .. } => {
                (s.x_min, s.x_max, s.points, s.nu, s.r0, s.fan) = (*x_min, *x_max, *points, nu.clone(), *r0, *fan);
            }
            Command::Profile | Command::Build { .. } | Command::Lambda0 => {}
        }
        s
    }
}

fn cut_options(s: &Settings) -> CutOptions {
    let mut o = CutOptions::default();
    if let Some(f) = s.fan {
        o.fan_size = f;
    }
    if let Some(t) = s.tol {
        o.tol = t;
    }
    if let Some(t) = s.ode_tol {
        o.ode_tol = t;
    }
    o
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut s = cli.settings();
    if let Some(path) = &cli.config {
        s = s.merged_over(Settings::load(path)?);
    }
    s.validate()?;
    let out = s.out.clone();

    match &cli.cmd {
        Command::Profile => {
            let surface = s.build_surface()?;
            let p = &surface.profile;
            let tc = match surface.kind {
                SurfaceKind::Plane => total_curvature(&surface).ok(),
                SurfaceKind::Sphere => None,
            };
            let v = json!({
                "profile": p.to_json(),
                "kind": surface.kind,
                "peak_radius": p.peak_radius(),
                "second_critical": p.second_critical(),
                "limit_slope": p.limit_slope(),
                "limit_value": p.limit_value(),
                "total_curvature": tc.map(|t| json!({"value": t.value, "truncated": t.truncated, "x_max": t.x_max, "tail_bound": t.tail_bound})),
            });
            emit(out.as_deref(), &json_text(&v))?;
            Ok(Outcome::Pass)
        }
        Command::Check { .. } => {
            let name = Settings::need(s.set.as_deref(), "set")?;
            let set = ConditionSet::parse(name).ok_or_else(|| Failure::Usage(format!("unknown condition set {name:?}")))?;
            let surface = s.build_surface()?;
            let report = check_conditions(&surface, set).map_err(|e| match e {
                revolve_core::ProfileError::KindMismatch => Failure::Usage(format!("{name} needs a different surface kind")),
                e => Failure::Numeric(e.to_string()),
            })?;
            emit(out.as_deref(), &json_text(&report))?;
            Ok(if report.verdict == Verdict::Pass { Outcome::Pass } else { Outcome::Fail })
        }
        Command::HalfPeriod { .. } => {
            let surface = s.build_surface()?;
            let grid = match &s.nu {
                Some(g) => parse_grid(g)?,
                None => default_nu_grid(&surface)?,
            };
            emit(out.as_deref(), &half_period_table(&surface.profile, &grid)?)?;
            Ok(Outcome::Pass)
        }
        Command::Geodesic { .. } => {
            let surface = s.build_surface()?;
            let start = (Settings::need(s.r0, "r0")?, s.theta0.unwrap_or(0.0));
            let angle = Settings::need(s.angle, "angle")?;
            let path = numeric!(shoot(&surface, start, angle, s.length.unwrap_or(10.0), s.tol.unwrap_or(1e-9)))?;
            emit(out.as_deref(), &path.to_csv())?;
            Ok(Outcome::Pass)
        }
        Command::CutLocus { .. } => {
            let surface = s.build_surface()?;
            let r0 = Settings::need(s.r0, "r0")?;
            let locus = numeric!(cut_locus(&surface, r0, &cut_options(&s)))?;
            emit(out.as_deref(), &json_text(&locus))?;
            Ok(Outcome::Pass)
        }
        Command::VerifyGvm { .. } => {
            let surface = s.build_surface()?;
            let radii = s.radii.clone().ok_or_else(|| Failure::Usage("missing --radii".into()))?;
            let report = numeric!(verify_gvm(&surface, &radii, &cut_options(&s)))?;
            emit(out.as_deref(), &json_text(&report))?;
            Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Build { what } => {
            s.family = Some(match what {
                BuildKind::MAlpha => FamilyArg::MAlpha,
                BuildKind::Oscillating => FamilyArg::Oscillating,
                BuildKind::Sphere => FamilyArg::Sphere,
            });
            s.profile = None;
            let p = s.build_profile()?;
            if let BuildKind::Oscillating = what {
                // pin the constants of the first nine bumps in the file
                let n0 = s.n0.unwrap_or(0);
                for n in n0..=n0 + 8 {
                    let _ = p.value(2.0 * n as f64);
                }
            }
            emit(out.as_deref(), &json_text(&p.to_json()))?;
            Ok(Outcome::Pass)
        }
        Command::Lambda0 => {
            let alpha = Settings::need(s.alpha, "alpha")?;
            let l0 = lambda0_bound(alpha).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(out.as_deref(), &json_text(&json!({ "alpha": alpha, "lambda0": l0 })))?;
            Ok(Outcome::Pass)
        }
        Command::Plot { kind, .. } => {
            let surface = s.build_surface()?;
            let text = plot(&surface, *kind, &s)?;
            emit(out.as_deref(), &text)?;
            Ok(Outcome::Pass)
        }
    }
}

fn default_nu_grid(surface: &revolve_core::SurfaceOfRevolution) -> Result<Vec<f64>, Failure> {
    let p = &surface.profile;
    let peak = p.peak_radius().ok_or_else(|| Failure::Numeric("profile has no critical parallel".into()))?;
    let top = p.value(peak);
    let n = 41;
    Ok((1..=n).map(|i| top * i as f64 / (n + 1) as f64).collect())
}

fn half_period_table(profile: &revolve_core::ProfileFunction, grid: &[f64]) -> Result<String, Failure> {
    let mut csv = Csv::new(&["nu", "phi", "psi", "dphi", "dpsi"]);
    for &nu in grid {
        let hp = numeric!(half_periods(profile, nu))?;
        let dphi = half_period_derivative(profile, nu, HalfPeriod::Phi).ok().map(|d| d.value);
        let dpsi = hp.psi.and_then(|_| half_period_derivative(profile, nu, HalfPeriod::Psi).ok()).map(|d| d.value);
        csv.row_opt(&[Some(nu), Some(hp.phi), hp.psi, dphi, dpsi]);
    }
    Ok(csv.finish())
}

fn plot(surface: &revolve_core::SurfaceOfRevolution, kind: PlotKind, s: &Settings) -> Result<String, Failure> {
    let p = &surface.profile;
    let (lo, hi) = match p.domain() {
        Domain::HalfLine => (0.0, 10.0),
        Domain::Sphere => (0.0, std::f64::consts::PI),
    };
    let xs = || linspace(s.x_min.unwrap_or(lo), s.x_max.unwrap_or(hi), s.points.unwrap_or(1001));
    match kind {
        PlotKind::ProfileCurve => {
            let mut csv = Csv::new(&["x", "m", "dm"]);
            for x in xs() {
                let j = p.jet(x);
                csv.row(&[x, j.d(0), j.d(1)]);
            }
            Ok(csv.finish())
        }
        PlotKind::Curvature => {
            let mut csv = Csv::new(&["x", "K", "dK"]);
            for x in xs() {
                let k = numeric!(p.curvature(x))?;
                let dk = if x > 0.0 && x < p.upper_end() { p.curvature_derivative(x) } else { f64::NAN };
                csv.row(&[x, k, dk]);
            }
            Ok(csv.finish())
        }
        PlotKind::HalfPeriod => {
            let grid = match &s.nu {
                Some(g) => parse_grid(g)?,
                None => default_nu_grid(surface)?,
            };
            let mut csv = Csv::new(&["nu", "phi", "psi"]);
            for nu in grid {
                let hp = numeric!(half_periods(p, nu))?;
                csv.row_opt(&[Some(nu), Some(hp.phi), hp.psi]);
            }
            Ok(csv.finish())
        }
        PlotKind::CutLocus => {
            let r0 = Settings::need(s.r0, "r0")?;
            let locus = numeric!(cut_locus(surface, r0, &cut_options(s)))?;
            let mut csv = Csv::new(&["r", "theta"]);
            for c in &locus.points {
                csv.row(&[c.r, c.theta]);
            }
            Ok(csv.finish())
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("REVOLVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("REVOLVE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Numeric(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let result = init_threads().and_then(|_| run(&cli));
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(64)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
