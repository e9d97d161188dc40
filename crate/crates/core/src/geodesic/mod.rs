//! Unit-speed geodesics, half-period functions and conjugate points.

mod conjugate;
mod halfperiod;

pub use conjugate::{
    conjugate_height, conjugate_height_beta, conjugate_height_slope, conjugate_point_jacobi, phi_psi_diagnostic, HeightRegime, JacobiOutcome,
    PhiPsi,
};
pub use halfperiod::{half_period, half_period_derivative, half_period_derivative_tol, half_periods, Derivative, HalfPeriod, HalfPeriodSample};

use crate::jet::Jet;
use crate::ode::{DenseStep, Dopri5, OdeError, Tolerances};
use crate::profile::{ProfileError, ProfileFunction, SurfaceKind, SurfaceOfRevolution};
use crate::quadrature::QuadError;
use crate::roots::brent;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("start point must be interior (r = {r})")]
    StartAtPole { r: f64 },
    #[error("length must be positive, got {0}")]
    BadLength(f64),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("nu = {nu} outside the admissible range ({lo}, {hi})")]
    NuOutOfRange { nu: f64, lo: f64, hi: f64 },
    #[error("finite-difference stencil leaves the admissible range at nu = {nu}")]
    StencilOutOfRange { nu: f64 },
    #[error("no sign change for the conjugate height in ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("regime mismatch: {0}")]
    Regime(String),
    #[error("step budget exhausted at t = {t}")]
    StepBudget { t: f64 },
}

/// γ-type: initial angle with ∂/∂r at least π/2 (inward); β-type otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Gamma,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathSample {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub r_prime: f64,
    pub theta_prime: f64,
    pub jacobi: f64,
    pub jacobi_prime: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathEvent {
    Turning { t: f64, r: f64 },
    Conjugate { t: f64, r: f64, theta: f64 },
    PolePassage { t: f64, pole: f64 },
    ThetaCrossing { t: f64, r: f64, theta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathEnd {
    Length,
    PoleHit { t: f64, pole: f64 },
    Theta { t: f64 },
    Conjugate { t: f64 },
}

#[derive(Clone, Debug)]
pub struct ShootOptions {
    pub tol: f64,
    pub h_max: f64,
    /// Continue meridians through a pole (θ jumps by π).
    pub pass_through_poles: bool,
    /// Stop when θ first reaches this value.
    pub stop_theta: Option<f64>,
    pub stop_at_conjugate: bool,
    pub keep_dense: bool,
    pub max_steps: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            tol: 1e-9,
            h_max: 0.25,
            pass_through_poles: false,
            stop_theta: None,
            stop_at_conjugate: false,
            keep_dense: true,
            max_steps: 2_000_000,
        }
    }
}

/// A sampled geodesic with its Jacobi field `y'' + G y = 0`, `y(0) = 0, y'(0) = 1`.
#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub start: (f64, f64),
    pub angle: f64,
    pub nu: f64,
    pub orientation: Orientation,
    pub samples: Vec<PathSample>,
    pub events: Vec<PathEvent>,
    pub end: PathEnd,
    steps: Option<Vec<DenseStep<5>>>,
}

pub(crate) struct Rhs<'a> {
    pub profile: &'a ProfileFunction,
    pub nu: f64,
    pub pole_curvature: [f64; 2],
}

impl<'a> Rhs<'a> {
    pub fn new(surface: &'a SurfaceOfRevolution, nu: f64) -> Self {
        let p = &surface.profile;
        let g0 = p.curvature(0.0).unwrap_or(f64::NAN);
        let g1 = if surface.kind == SurfaceKind::Sphere { p.curvature(PI).unwrap_or(f64::NAN) } else { f64::NAN };
        Rhs { profile: p, nu, pole_curvature: [g0, g1] }
    }

    fn curvature(&self, r: f64, j: &Jet) -> f64 {
        if r.abs() < 1e-7 {
            return self.pole_curvature[0];
        }
        if (r - PI).abs() < 1e-7 && self.pole_curvature[1].is_finite() {
            return self.pole_curvature[1];
        }
        -j.d(2) / j.d(0)
    }

    pub fn eval(&self, y: &[f64; 5]) -> [f64; 5] {
        let j = self.profile.jet(y[0]);
        let (m, m1) = (j.d(0), j.d(1));
        let (rpp, thp) = if self.nu == 0.0 {
            (0.0, 0.0)
        } else {
            let inv = 1.0 / m;
            let thp = self.nu * inv * inv;
            (self.nu * self.nu * m1 * inv * inv * inv, thp)
        };
        let g = self.curvature(y[0], &j);
        [y[1], rpp, thp, y[4], -g * y[3]]
    }

    pub fn theta_prime(&self, r: f64) -> f64 {
        if self.nu == 0.0 {
            0.0
        } else {
            let m = self.profile.value(r);
            self.nu / (m * m)
        }
    }
}

fn locate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    brent(&f, a, b, 1e-14 * b.abs().max(1.0), 200).unwrap_or(b)
}

fn sample(t: f64, y: &[f64; 5], rhs: &Rhs) -> PathSample {
    PathSample { t, r: y[0], theta: y[2], r_prime: y[1], theta_prime: rhs.theta_prime(y[0]), jacobi: y[3], jacobi_prime: y[4] }
}

/// Clairaut constant and orientation of the geodesic leaving `r0` at `angle`.
pub fn clairaut_constant(profile: &ProfileFunction, r0: f64, angle: f64) -> f64 {
    let s = angle.sin();
    // meridian directions up to the rounding of π
    if s.abs() < 1e-14 {
        0.0
    } else {
        profile.value(r0) * s
    }
}

pub fn shoot(surface: &SurfaceOfRevolution, start: (f64, f64), angle: f64, length: f64, tol: f64) -> Result<GeodesicPath, GeodesicError> {
    shoot_with(surface, start, angle, length, &ShootOptions { tol, ..ShootOptions::default() })
}

/// Integrate the geodesic from `start = (r, θ)` leaving at `angle` from ∂/∂r.
pub fn shoot_with(
    surface: &SurfaceOfRevolution,
    start: (f64, f64),
    angle: f64,
    length: f64,
    opts: &ShootOptions,
) -> Result<GeodesicPath, GeodesicError> {
    let (r0, th0) = start;
    let profile = &surface.profile;
    profile.check_domain(r0)?;
    if surface.poles().iter().any(|&p| (r0 - p).abs() < 1e-12) {
        return Err(GeodesicError::StartAtPole { r: r0 });
    }
    if !(length > 0.0) {
        return Err(GeodesicError::BadLength(length));
    }
    let nu = clairaut_constant(profile, r0, angle);
    let orientation = if angle.cos() <= 1e-15 { Orientation::Gamma } else { Orientation::Beta };
    let rhs = Rhs::new(surface, nu);
    let f = |_t: f64, y: &[f64; 5]| rhs.eval(y);
    let y0 = [r0, angle.cos(), th0, 0.0, 1.0];
    let tol = Tolerances { rtol: opts.tol, atol: opts.tol, h_max: opts.h_max };
    let mut ode = Dopri5::new(&f, 0.0, y0, tol);
    let mut samples = vec![sample(0.0, &y0, &rhs)];
    let mut events = Vec::new();
    let mut steps = if opts.keep_dense { Some(Vec::new()) } else { None };
    let mut end = PathEnd::Length;
    let mut conj_found = false;
    let mut theta_found = false;
    let upper_pole = if surface.kind == SurfaceKind::Sphere { Some(PI) } else { None };
    let mut count = 0usize;

    while ode.t() < length {
        count += 1;
        if count > opts.max_steps {
            return Err(GeodesicError::StepBudget { t: ode.t() });
        }
        let st = ode.step(&f, length)?;
        let b = st.y1;
        let mut cut_at: Option<f64> = None;

        // pole crossing
        let below = b[0] <= 0.0;
        let above = upper_pole.map(|p| b[0] >= p).unwrap_or(false);
        if below || above {
            let pole = if below { 0.0 } else { PI };
            let tp = locate(|t| st.eval_component(0, t) - pole, st.t0, st.t1());
            if opts.pass_through_poles && nu == 0.0 {
                let mut y = st.eval(tp);
                push_events(&st, st.t0, tp, &mut events, &mut conj_found, &mut theta_found, opts, &rhs);
                y[0] = pole;
                y[1] = -y[1];
                y[2] += PI;
                events.push(PathEvent::PolePassage { t: tp, pole });
                events.push(PathEvent::Turning { t: tp, r: pole });
                samples.push(sample(tp, &y, &rhs));
                if let Some(s) = steps.as_mut() {
                    s.push(truncate(&st, tp));
                }
                ode.reset(&f, tp, y);
                if let Some(stop) = check_stops(&events, opts) {
                    end = stop;
                    break;
                }
                continue;
            }
            push_events(&st, st.t0, tp, &mut events, &mut conj_found, &mut theta_found, opts, &rhs);
            let y = st.eval(tp);
            samples.push(sample(tp, &[pole, y[1], y[2], y[3], y[4]], &rhs));
            if let Some(s) = steps.as_mut() {
                s.push(truncate(&st, tp));
            }
            end = check_stops(&events, opts).unwrap_or(PathEnd::PoleHit { t: tp, pole });
            break;
        }

        push_events(&st, st.t0, st.t1(), &mut events, &mut conj_found, &mut theta_found, opts, &rhs);
        if let Some(stop) = check_stops(&events, opts) {
            cut_at = Some(match stop {
                PathEnd::Theta { t } | PathEnd::Conjugate { t } => t,
                _ => st.t1(),
            });
            end = stop;
        }
        match cut_at {
            Some(t) => {
                let y = st.eval(t);
                samples.push(sample(t, &y, &rhs));
                if let Some(s) = steps.as_mut() {
                    s.push(truncate(&st, t));
                }
                break;
            }
            None => {
                samples.push(sample(st.t1(), &b, &rhs));
                if let Some(s) = steps.as_mut() {
                    s.push(st.clone());
                }
            }
        }
    }
    Ok(GeodesicPath { start, angle, nu, orientation, samples, events, end, steps })
}

fn truncate(st: &DenseStep<5>, t: f64) -> DenseStep<5> {
    // keep the original interpolant; callers never evaluate past `t`
    let mut s = st.clone();
    s.y1 = st.eval(t);
    s
}

#[allow(clippy::too_many_arguments)]
fn push_events(
    st: &DenseStep<5>,
    t0: f64,
    t1: f64,
    events: &mut Vec<PathEvent>,
    conj_found: &mut bool,
    theta_found: &mut bool,
    opts: &ShootOptions,
    rhs: &Rhs,
) {
    let ya = st.eval(t0);
    let yb = st.eval(t1);
    let mut found: Vec<(f64, PathEvent)> = Vec::new();
    if ya[1] != 0.0 && ya[1].signum() != yb[1].signum() && rhs.nu != 0.0 {
        let t = locate(|t| st.eval_component(1, t), t0, t1);
        found.push((t, PathEvent::Turning { t, r: st.eval_component(0, t) }));
    }
    if !*conj_found && t0 > 0.0 && ya[3] != 0.0 && ya[3].signum() != yb[3].signum() {
        let t = locate(|t| st.eval_component(3, t), t0, t1);
        let y = st.eval(t);
        found.push((t, PathEvent::Conjugate { t, r: y[0], theta: y[2] }));
        *conj_found = true;
    } else if !*conj_found && t0 == 0.0 {
        // skip the initial zero of the Jacobi field
        let probe = t0 + 1e-6 * (t1 - t0);
        let yp = st.eval(probe);
        if yp[3] != 0.0 && yp[3].signum() != yb[3].signum() {
            let t = locate(|t| st.eval_component(3, t), probe, t1);
            let y = st.eval(t);
            found.push((t, PathEvent::Conjugate { t, r: y[0], theta: y[2] }));
            *conj_found = true;
        }
    }
    if let Some(th) = opts.stop_theta {
        if !*theta_found && (ya[2] - th) * (yb[2] - th) <= 0.0 && yb[2] != ya[2] {
            let t = locate(|t| st.eval_component(2, t) - th, t0, t1);
            found.push((t, PathEvent::ThetaCrossing { t, r: st.eval_component(0, t), theta: th }));
            *theta_found = true;
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    events.extend(found.into_iter().map(|(_, e)| e));
}

fn check_stops(events: &[PathEvent], opts: &ShootOptions) -> Option<PathEnd> {
    let mut best: Option<PathEnd> = None;
    let mut best_t = f64::INFINITY;
    for e in events {
        match *e {
            PathEvent::ThetaCrossing { t, .. } if opts.stop_theta.is_some() && t < best_t => {
                best = Some(PathEnd::Theta { t });
                best_t = t;
            }
            PathEvent::Conjugate { t, .. } if opts.stop_at_conjugate && t < best_t => {
                best = Some(PathEnd::Conjugate { t });
                best_t = t;
            }
            _ => {}
        }
    }
    best
}

impl GeodesicPath {
    pub fn length(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    /// State at arclength `t` from the dense output, when retained.
    pub fn state_at(&self, profile: &ProfileFunction, t: f64) -> Option<PathSample> {
        let steps = self.steps.as_ref()?;
        if t < 0.0 || t > self.length() {
            return None;
        }
        let i = steps.partition_point(|s| s.t1() < t).min(steps.len().saturating_sub(1));
        let st = steps.get(i)?;
        let y = st.eval(t);
        let theta_prime = if self.nu == 0.0 { 0.0 } else { self.nu / profile.value(y[0]).powi(2) };
        Some(PathSample { t, r: y[0], theta: y[2], r_prime: y[1], theta_prime, jacobi: y[3], jacobi_prime: y[4] })
    }

    /// First arclength where the unwrapped θ reaches `target`, with the radius there.
    ///
    /// Only meaningful for ν > 0, where θ increases along the path.
    pub fn theta_crossing(&self, target: f64) -> Option<(f64, f64)> {
        let steps = self.steps.as_ref()?;
        let first = self.samples.first()?;
        if target <= first.theta {
            return (target == first.theta).then_some((0.0, first.r));
        }
        let i = steps.partition_point(|s| s.y1[2] < target);
        let st = steps.get(i)?;
        if st.y0[2] > target {
            return None;
        }
        let t = if st.y1[2] == target {
            st.t1()
        } else {
            locate(|t| st.eval_component(2, t) - target, st.t0, st.t1())
        };
        Some((t, st.eval_component(0, t)))
    }

    pub fn first_conjugate(&self) -> Option<(f64, f64, f64)> {
        self.events.iter().find_map(|e| match *e {
            PathEvent::Conjugate { t, r, theta } => Some((t, r, theta)),
            _ => None,
        })
    }

    pub fn turning_points(&self) -> Vec<(f64, f64)> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                PathEvent::Turning { t, r } => Some((t, r)),
                _ => None,
            })
            .collect()
    }

    /// `max |m² θ' − ν|` over the samples.
    pub fn max_clairaut_drift(&self, profile: &ProfileFunction) -> f64 {
        self.samples
            .iter()
            .map(|s| {
                let m = profile.value(s.r);
                (m * m * s.theta_prime - self.nu).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max |r'² + m² θ'² − 1|` over the samples.
    pub fn max_speed_defect(&self, profile: &ProfileFunction) -> f64 {
        self.samples
            .iter()
            .map(|s| {
                let m = profile.value(s.r);
                (s.r_prime * s.r_prime + m * m * s.theta_prime * s.theta_prime - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// CSV with columns `t,r,theta,rprime,thetaprime,nu`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,r,theta,rprime,thetaprime,nu\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{},{},{},{}", s.t, s.r, s.theta, s.r_prime, s.theta_prime, self.nu);
        }
        out
    }
}
