//! Cut loci of points on surfaces of revolution by geodesic-fan shooting.
//!
//! Base points sit on θ = 0. The upper half fan σ ∈ [0, π] is shot once; the
//! lower half is its mirror image. A point `(r, θ)` is reached by a ray of the
//! upper fan at unwrapped angle `Θ = ±θ + 2πk`, and since θ increases along
//! every ray with ν > 0, the arrival radius `R_Θ(σ)` is a continuous function
//! of σ wherever the ray gets that far.

use crate::geodesic::{shoot_with, GeodesicError, GeodesicPath, PathEnd, ShootOptions};
use crate::profile::{SurfaceKind, SurfaceOfRevolution};
use crate::roots::brent;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutLocusError {
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error("fan size {0} below the minimum of 64")]
    FanTooSmall(usize),
    #[error("no fan geodesic reaches the target; best bound {best}")]
    Unreached { best: f64 },
    #[error("point r = {r} is not admissible here")]
    BadPoint { r: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutOptions {
    pub fan_size: usize,
    /// Length tolerance for comparing competing geodesics.
    pub tol: f64,
    pub ode_tol: f64,
    /// Angular tolerance for "on the opposite meridian".
    pub angular_tol: f64,
    /// Radial extent below which a cut locus counts as a single point.
    pub point_resolution: f64,
    pub k_wrap: i32,
    /// Overrides the default horizon.
    pub horizon: Option<f64>,
}

impl Default for CutOptions {
    fn default() -> Self {
        CutOptions {
            fan_size: 512,
            tol: 1e-6,
            ode_tol: 1e-10,
            angular_tol: 1e-3,
            point_resolution: 1e-4,
            k_wrap: 3,
            horizon: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Empty,
    SinglePoint,
    OppositeMeridianSubarc,
    Other,
}

impl Classification {
    pub fn is_gvm(self) -> bool {
        !matches!(self, Classification::Other)
    }
}

/// Why a geodesic stops minimizing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    /// Meets its mirror image on θ = π.
    MirrorPair,
    Conjugate,
    /// A shorter fan geodesic reaches the same point.
    Competitor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutPoint {
    pub r: f64,
    pub theta: f64,
    pub t: f64,
    pub nu: f64,
    pub sigma: f64,
    pub mechanism: Mechanism,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutTime {
    /// None when minimal up to the horizon.
    pub t: Option<f64>,
    pub horizon: f64,
    pub mechanism: Option<Mechanism>,
    /// `(r, θ)` of the cut point, θ in (−π, π].
    pub point: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasePoint {
    pub r: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialExtent {
    pub r_min: f64,
    pub r_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutLocusResult {
    pub base: BasePoint,
    pub classification: Classification,
    pub points: Vec<CutPoint>,
    pub horizon: f64,
    pub subarc: Option<RadialExtent>,
    /// Rays still minimal at the horizon.
    pub uncut_rays: usize,
    /// Cut points off the opposite meridian, if any.
    pub offending: Vec<CutPoint>,
}

impl CutLocusResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GvmReport {
    pub pass: bool,
    pub results: Vec<CutLocusResult>,
}

fn default_horizon(surface: &SurfaceOfRevolution, r0: f64) -> f64 {
    match surface.kind {
        SurfaceKind::Sphere => 2.0 * PI,
        SurfaceKind::Plane => 20.0 * (r0 + surface.profile.peak_radius().unwrap_or(1.0)),
    }
}

/// θ reduced to (−π, π].
fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

struct Ray {
    sigma: f64,
    nu: f64,
    path: GeodesicPath,
    t_pi: Option<f64>,
    t_conj: Option<f64>,
}

impl Ray {
    fn meridian(&self) -> bool {
        self.nu == 0.0
    }

    fn crossing(&self, target: f64) -> Option<(f64, f64)> {
        if self.meridian() {
            return None;
        }
        self.path.theta_crossing(target)
    }
}

struct Fan<'a> {
    surface: &'a SurfaceOfRevolution,
    r0: f64,
    horizon: f64,
    opts: &'a CutOptions,
    rays: Vec<Ray>,
}

impl<'a> Fan<'a> {
    fn new(surface: &'a SurfaceOfRevolution, r0: f64, opts: &'a CutOptions) -> Result<Self, CutLocusError> {
        if opts.fan_size < 64 {
            return Err(CutLocusError::FanTooSmall(opts.fan_size));
        }
        let horizon = opts.horizon.unwrap_or_else(|| default_horizon(surface, r0));
        let n = opts.fan_size;
        let shoot_opts = ShootOptions { tol: opts.ode_tol, pass_through_poles: true, ..ShootOptions::default() };
        let rays: Result<Vec<Ray>, GeodesicError> = (0..=n)
            .into_par_iter()
            .map(|j| {
                let sigma = PI * j as f64 / n as f64;
                let path = shoot_with(surface, (r0, 0.0), sigma, horizon, &shoot_opts)?;
                Ok(Self::ray(sigma, path))
            })
            .collect();
        Ok(Fan { surface, r0, horizon, opts, rays: rays? })
    }

    fn ray(sigma: f64, path: GeodesicPath) -> Ray {
        let nu = path.nu;
        let t_pi = if nu == 0.0 { None } else { path.theta_crossing(PI).map(|(t, _)| t) };
        let t_conj = path.first_conjugate().map(|(t, _, _)| t);
        Ray { sigma, nu, path, t_pi, t_conj }
    }

    fn shoot_to(&self, sigma: f64, target: f64) -> Option<(f64, f64)> {
        let o = ShootOptions { tol: self.opts.ode_tol, stop_theta: Some(target), keep_dense: false, ..ShootOptions::default() };
        let path = shoot_with(self.surface, (self.r0, 0.0), sigma, self.horizon, &o).ok()?;
        match path.end {
            PathEnd::Theta { t } => path.samples.last().map(|s| (t, s.r)),
            _ => None,
        }
    }

    /// Lengths of meridian routes from the base point to `(r, θ)`.
    fn meridian_routes(&self, r: f64, theta: f64) -> Vec<f64> {
        let w = wrap(theta).abs();
        let tol = self.opts.angular_tol.min(1e-9);
        let mut out = Vec::new();
        if w <= tol {
            out.push((r - self.r0).abs());
        }
        if (PI - w) <= tol {
            out.push(self.r0 + r);
            if self.surface.kind == SurfaceKind::Sphere {
                out.push((PI - self.r0) + (PI - r));
            }
        }
        out
    }

    fn targets(&self, theta: f64) -> Vec<f64> {
        let w = wrap(theta);
        let mut out = Vec::new();
        for k in -self.opts.k_wrap..=self.opts.k_wrap {
            for s in [w, -w] {
                let v = s + 2.0 * PI * k as f64;
                if v > 0.0 && !out.iter().any(|&o: &f64| (o - v).abs() < 1e-15) {
                    out.push(v);
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// Shortest fan route to `(r, θ)` other than `exclude = (σ, t)`, when it
    /// is shorter than `below` (or any route when `below` is infinite).
    fn shortest(&self, r: f64, theta: f64, exclude: Option<(f64, f64)>, below: f64) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        let consider = |best: &mut Option<(f64, f64)>, len: f64, sigma: f64| {
            if len < below && best.map(|b| len < b.0).unwrap_or(true) {
                *best = Some((len, sigma));
            }
        };
        for len in self.meridian_routes(r, theta) {
            let skip = exclude.map(|(s, t)| (s == 0.0 || s == PI) && (len - t).abs() <= self.opts.tol).unwrap_or(false);
            if !skip {
                consider(&mut best, len, if len == (r - self.r0).abs() { 0.0 } else { PI });
            }
        }
        let is_self = |sigma: f64, len: f64| match exclude {
            Some((s, t)) => (sigma - s).abs() < 1e-7 && (len - t).abs() <= 10.0 * self.opts.tol,
            None => false,
        };
        for target in self.targets(theta) {
            let hits: Vec<Option<(f64, f64)>> = self.rays.iter().map(|ray| ray.crossing(target)).collect();
            for i in 0..self.rays.len() - 1 {
                let (Some((ta, ra)), Some((tb, rb))) = (hits[i], hits[i + 1]) else { continue };
                let (ga, gb) = (ra - r, rb - r);
                if ga * gb > 0.0 {
                    continue;
                }
                let (sa, sb) = (self.rays[i].sigma, self.rays[i + 1].sigma);
                let w = if ga == gb { 0.5 } else { ga / (ga - gb) };
                let sigma_est = sa + w * (sb - sa);
                let len_est = ta + w * (tb - ta);
                if is_self(sigma_est, len_est) {
                    continue;
                }
                let slack = 0.1 * (ta - tb).abs() + 1e-12 * ta.abs().max(1.0);
                let bar = best.map(|b| b.0).unwrap_or(below).min(below);
                if len_est - slack >= bar {
                    continue;
                }
                if let Some((len, sigma)) = self.refine(sa, sb, ga, gb, r, target) {
                    if !is_self(sigma, len) {
                        consider(&mut best, len, sigma);
                    }
                }
            }
        }
        best
    }

    /// Root of `R_Θ(σ) = r` in [sa, sb] by re-shooting.
    fn refine(&self, sa: f64, sb: f64, ga: f64, gb: f64, r: f64, target: f64) -> Option<(f64, f64)> {
        if ga == 0.0 {
            return self.shoot_to(sa, target).map(|(t, _)| (t, sa));
        }
        if gb == 0.0 {
            return self.shoot_to(sb, target).map(|(t, _)| (t, sb));
        }
        let failed = std::cell::Cell::new(false);
        let g = |s: f64| match self.shoot_to(s, target) {
            Some((_, rr)) => rr - r,
            None => {
                failed.set(true);
                f64::NAN
            }
        };
        let root = brent(g, sa, sb, 1e-13, 100)?;
        if failed.get() {
            return None;
        }
        self.shoot_to(root, target).map(|(t, _)| (t, root))
    }

    fn cut_time(&self, ray: &Ray) -> CutTime {
        let mut t_star = self.horizon.min(ray.path.length());
        let mut mech = None;
        if let Some(t) = ray.t_pi {
            if t < t_star {
                t_star = t;
                mech = Some(Mechanism::MirrorPair);
            }
        }
        if let Some(t) = ray.t_conj {
            if t < t_star - self.opts.tol || (mech.is_none() && t <= t_star) {
                t_star = t;
                mech = Some(Mechanism::Conjugate);
            }
        }
        let beaten = |t: f64| -> bool {
            if t <= 0.0 {
                return false;
            }
            let Some(s) = ray.path.state_at(&self.surface.profile, t) else { return false };
            self.shortest(s.r, s.theta, Some((ray.sigma, t)), t - self.opts.tol).is_some()
        };
        if beaten(t_star) {
            let (mut lo, mut hi) = (0.0, t_star);
            while hi - lo > 0.1 * self.opts.tol {
                let mid = 0.5 * (lo + hi);
                if beaten(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            t_star = hi;
            mech = Some(Mechanism::Competitor);
        }
        match mech {
            None => CutTime { t: None, horizon: self.horizon, mechanism: None, point: None },
            Some(m) => {
                let s = ray.path.state_at(&self.surface.profile, t_star);
                let point = s.map(|s| (s.r, wrap(s.theta)));
                CutTime { t: Some(t_star), horizon: self.horizon, mechanism: Some(m), point }
            }
        }
    }
}

fn check_base(surface: &SurfaceOfRevolution, r0: f64) -> Result<(), CutLocusError> {
    surface.profile.check_domain(r0).map_err(|_| CutLocusError::BadPoint { r: r0 })
}

fn is_pole(surface: &SurfaceOfRevolution, r: f64) -> bool {
    surface.poles().iter().any(|&p| (r - p).abs() < 1e-12)
}

/// Fan-shooting distance between `p = (r, θ)` and `q = (r, θ)`.
pub fn distance(surface: &SurfaceOfRevolution, p: (f64, f64), q: (f64, f64), opts: &CutOptions) -> Result<f64, CutLocusError> {
    check_base(surface, p.0)?;
    check_base(surface, q.0)?;
    if is_pole(surface, p.0) {
        return Ok((q.0 - p.0).abs());
    }
    if is_pole(surface, q.0) {
        return Ok((q.0 - p.0).abs());
    }
    let fan = Fan::new(surface, p.0, opts)?;
    let theta = q.1 - p.1;
    fan.shortest(q.0, theta, None, f64::INFINITY).map(|(l, _)| l).ok_or(CutLocusError::Unreached { best: f64::INFINITY })
}

/// Largest t for which the geodesic from `p` at `angle` stays minimal.
pub fn cut_time(surface: &SurfaceOfRevolution, p: (f64, f64), angle: f64, opts: &CutOptions) -> Result<CutTime, CutLocusError> {
    check_base(surface, p.0)?;
    if is_pole(surface, p.0) {
        return Err(CutLocusError::BadPoint { r: p.0 });
    }
    let fan = Fan::new(surface, p.0, opts)?;
    // fold the angle into [0, π] by the reflection symmetry
    let a = wrap(angle).abs();
    let shoot_opts = ShootOptions { tol: opts.ode_tol, pass_through_poles: true, ..ShootOptions::default() };
    let path = shoot_with(surface, (p.0, 0.0), a, fan.horizon, &shoot_opts)?;
    let mut ct = fan.cut_time(&Fan::ray(a, path));
    if let Some((r, th)) = ct.point {
        let th = if wrap(angle) < 0.0 { -th } else { th };
        ct.point = Some((r, wrap(th + p.1)));
    }
    Ok(ct)
}

fn classify(points: &[CutPoint], opts: &CutOptions) -> (Classification, Option<RadialExtent>, Vec<CutPoint>) {
    if points.is_empty() {
        return (Classification::Empty, None, Vec::new());
    }
    let off: Vec<CutPoint> = points
        .iter()
        .filter(|c| {
            let on_meridian = (PI - c.theta.abs()) <= opts.angular_tol;
            !on_meridian && c.r > 1e-9
        })
        .copied()
        .collect();
    let r_min = points.iter().map(|c| c.r).fold(f64::INFINITY, f64::min);
    let r_max = points.iter().map(|c| c.r).fold(f64::NEG_INFINITY, f64::max);
    let extent = Some(RadialExtent { r_min, r_max });
    if !off.is_empty() {
        return (Classification::Other, extent, off);
    }
    if r_max - r_min <= opts.point_resolution {
        (Classification::SinglePoint, extent, off)
    } else {
        (Classification::OppositeMeridianSubarc, extent, off)
    }
}

/// Cut locus of the base point `(r0, 0)`.
pub fn cut_locus(surface: &SurfaceOfRevolution, r0: f64, opts: &CutOptions) -> Result<CutLocusResult, CutLocusError> {
    check_base(surface, r0)?;
    let base = BasePoint { r: r0, theta: 0.0 };
    if is_pole(surface, r0) {
        let horizon = opts.horizon.unwrap_or_else(|| default_horizon(surface, r0));
        let points = if surface.kind == SurfaceKind::Sphere {
            let r = PI - r0;
            vec![CutPoint { r, theta: PI, t: PI, nu: 0.0, sigma: 0.0, mechanism: Mechanism::Conjugate }]
        } else {
            Vec::new()
        };
        let (classification, subarc, offending) = classify(&points, opts);
        return Ok(CutLocusResult { base, classification, points, horizon, subarc, uncut_rays: 0, offending });
    }
    let fan = Fan::new(surface, r0, opts)?;
    let times: Vec<CutTime> = fan.rays.par_iter().map(|ray| fan.cut_time(ray)).collect();
    let mut points = Vec::new();
    let mut uncut = 0;
    for (ray, ct) in fan.rays.iter().zip(&times) {
        match (ct.t, ct.point, ct.mechanism) {
            (Some(t), Some((r, theta)), Some(mechanism)) => {
                points.push(CutPoint { r, theta, t, nu: ray.nu, sigma: ray.sigma, mechanism })
            }
            _ => uncut += 1,
        }
    }
    let (classification, subarc, offending) = classify(&points, opts);
    Ok(CutLocusResult { base, classification, points, horizon: fan.horizon, subarc, uncut_rays: uncut, offending })
}

/// Cut loci at each base radius; passes when none is classified `other`.
pub fn verify_gvm(surface: &SurfaceOfRevolution, radii: &[f64], opts: &CutOptions) -> Result<GvmReport, CutLocusError> {
    let mut results = Vec::with_capacity(radii.len());
    for &r in radii {
        results.push(cut_locus(surface, r, opts)?);
    }
    let pass = results.iter().all(|r| r.classification.is_gvm());
    Ok(GvmReport { pass, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::make_m0;
    use crate::profile::ProfileFunction;
    use std::f64::consts::FRAC_PI_2;

    fn small() -> CutOptions {
        CutOptions { fan_size: 128, ..CutOptions::default() }
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert!((wrap(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn sphere_antipodal_distance() {
        let s = SurfaceOfRevolution::from_profile(ProfileFunction::round_sphere());
        let d = distance(&s, (FRAC_PI_2, 0.0), (FRAC_PI_2, PI), &small()).unwrap();
        assert!((d - PI).abs() < 1e-6, "{d}");
    }

    #[test]
    fn euclidean_distance_through_vertex() {
        let e = SurfaceOfRevolution::from_profile(ProfileFunction::euclidean());
        let d = distance(&e, (1.0, 0.0), (1.0, PI), &small()).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
        let d = distance(&e, (1.0, 0.0), (1.0, FRAC_PI_2), &small()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-7, "{d}");
    }

    #[test]
    fn sphere_cut_time_is_pi() {
        let s = SurfaceOfRevolution::from_profile(ProfileFunction::round_sphere());
        let c = cut_time(&s, (1.0, 0.0), 0.8, &small()).unwrap();
        assert!((c.t.unwrap() - PI).abs() < 1e-4, "{c:?}");
    }

    #[test]
    fn euclidean_never_cut() {
        let e = SurfaceOfRevolution::from_profile(ProfileFunction::euclidean());
        let c = cut_time(&e, (1.0, 0.0), 1.0, &small()).unwrap();
        assert_eq!(c.t, None);
        let l = cut_locus(&e, 1.0, &small()).unwrap();
        assert_eq!(l.classification, Classification::Empty);
    }

    #[test]
    fn m0_vertex_is_empty() {
        let m = SurfaceOfRevolution::from_profile(make_m0());
        let l = cut_locus(&m, 0.0, &small()).unwrap();
        assert_eq!(l.classification, Classification::Empty);
    }

    #[test]
    fn m0_cut_locus_on_opposite_meridian() {
        let m = SurfaceOfRevolution::from_profile(make_m0());
        let l = cut_locus(&m, 2.0, &small()).unwrap();
        assert_eq!(l.classification, Classification::OppositeMeridianSubarc, "{:?}", l.offending);
    }

    #[test]
    fn fan_size_floor() {
        let m = SurfaceOfRevolution::from_profile(make_m0());
        let o = CutOptions { fan_size: 8, ..CutOptions::default() };
        assert_eq!(cut_locus(&m, 1.0, &o).unwrap_err(), CutLocusError::FanTooSmall(8));
    }
}
