//! Quadrature for Clairaut integrands.
//!
//! `de_quad` is a tanh-sinh rule. Integrands receive the abscissa together with
//! its distances to both endpoints, computed without cancellation, so that
//! inverse-square-root endpoint singularities keep full relative accuracy.

use crate::jet::Jet;
use crate::profile::{Branch, ProfileError, ProfileFunction};
use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge within {nodes} nodes (estimate {value}, error {error})")]
    NoConvergence { value: f64, error: f64, nodes: usize },
    #[error("integrand not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("m(x) <= nu at interior point x = {x}")]
    InteriorTurningPoint { x: f64 },
    #[error("turning point at or inside [{x0}, {x1}]: f_nu is not integrable there")]
    TurningPointInRange { x0: f64, x1: f64 },
    #[error("nu = {nu} outside the admissible range ({lo}, {hi})")]
    NuOutOfRange { nu: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Which endpoints may carry an integrable singularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EndpointFlags {
    pub left: bool,
    pub right: bool,
}

impl EndpointFlags {
    pub const NONE: EndpointFlags = EndpointFlags { left: false, right: false };
    pub const BOTH: EndpointFlags = EndpointFlags { left: true, right: true };
}

pub const DEFAULT_TOL: f64 = 1e-10;
const NODE_BUDGET: usize = 1 << 14;
const T_MAX: f64 = 4.0;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (&'static [f64], &'static [f64]) {
    static CACHE: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    let table = CACHE.get_or_init(|| (0..=32).map(compute_gauss_legendre).collect());
    let (x, w) = &table[n];
    (x, w)
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 0 {
                break;
            }
            let p = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Tanh-sinh quadrature of `f(x, x - a, b - x)` over `[a, b]`.
pub fn de_quad<F>(f: F, a: f64, b: f64, flags: EndpointFlags, tol: f64) -> Result<QuadResult, QuadError>
where
    F: Fn(f64, f64, f64) -> f64,
{
    de_quad_dyn(&f, a, b, flags, tol)
}

fn de_quad_dyn(f: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64, flags: EndpointFlags, tol: f64) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, nodes_used: 0 });
    }
    if b < a {
        let r = de_quad_dyn(&|x, dl, dr| f(x, dr, dl), b, a, EndpointFlags { left: flags.right, right: flags.left }, tol)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    let d = 0.5 * (b - a);
    let mut nodes = 0usize;
    let eval = |t: f64, nodes: &mut usize| -> Result<f64, QuadError> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = d * FRAC_PI_2 * t.cosh() / (cu * cu);
        // distance to the nearer endpoint without cancellation
        let near = d * (-u.abs()).exp() / cu;
        let far = 2.0 * d - near;
        let (dl, dr) = if u >= 0.0 { (far, near) } else { (near, far) };
        if near <= 0.0 || w == 0.0 {
            return Ok(0.0);
        }
        let x = if u >= 0.0 { b - dr } else { a + dl };
        *nodes += 1;
        let v = f(x, dl, dr);
        if v.is_finite() {
            return Ok(w * v);
        }
        let singular_side = if u >= 0.0 { flags.right } else { flags.left };
        if singular_side && t.abs() > 3.0 {
            Ok(0.0)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };

    let mut h = 1.0;
    let mut sum = eval(0.0, &mut nodes)?;
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
        k += 1;
    }
    let mut prev = sum * h;
    let mut level = 0;
    loop {
        h *= 0.5;
        level += 1;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).abs();
        let target = tol * cur.abs().max(1.0);
        if level >= 3 && diff <= target {
            return Ok(QuadResult { value: cur, error_estimate: diff, nodes_used: nodes });
        }
        if nodes >= NODE_BUDGET {
            return Err(QuadError::NoConvergence { value: cur, error: diff, nodes });
        }
        prev = cur;
    }
}

/// Which Clairaut integrand to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// `f = ν / (m √(m² − ν²))`
    F,
    /// `f_ν = m (m² − ν²)^{-3/2}`
    FNu,
}

/// A Clairaut integrand with optional turning radii used as expansion anchors.
#[derive(Clone, Debug)]
pub struct ClairautIntegrand<'a> {
    pub profile: &'a ProfileFunction,
    pub nu: f64,
    pub which: Which,
    anchors: Vec<(f64, Jet)>,
}

const ANCHOR_RADIUS: f64 = 1e-4;

impl<'a> ClairautIntegrand<'a> {
    pub fn new(profile: &'a ProfileFunction, nu: f64, which: Which) -> Self {
        ClairautIntegrand { profile, nu, which, anchors: Vec::new() }
    }

    /// Register a radius where `m = ν`; nearby differences `m − ν` are then
    /// taken from the Taylor jet at that radius.
    pub fn with_anchor(mut self, x: f64) -> Self {
        self.anchors.push((x, self.profile.jet(x)));
        self
    }

    /// `m(x) − ν` and `m(x)` at `x = base + off`, where `off` is small.
    fn gap(&self, base: f64, off: f64) -> (f64, f64) {
        let x = base + off;
        for (xa, j) in &self.anchors {
            let delta = (base - xa) + off;
            if delta.abs() < ANCHOR_RADIUS {
                let [_, d1, d2, d3] = j.derivs();
                let diff = delta * (d1 + delta * (0.5 * d2 + delta * d3 / 6.0));
                return (diff, self.nu + diff);
            }
        }
        let m = self.profile.value(x);
        (m - self.nu, m)
    }

    /// Evaluate at `x = base + off`.
    pub fn eval_at(&self, base: f64, off: f64) -> f64 {
        let (g, m) = self.gap(base, off);
        let s = g * (m + self.nu);
        match self.which {
            Which::F => self.nu / (m * s.sqrt()),
            Which::FNu => m / (s * s.sqrt()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_at(x, 0.0)
    }

    /// Integrate over [x0, x1] (x0 <= x1) with the given endpoint flags.
    pub fn integrate(&self, x0: f64, x1: f64, flags: EndpointFlags, tol: f64) -> Result<QuadResult, QuadError> {
        let bad = Cell::new(None);
        let r = de_quad(
            |x, dl, dr| {
                let (base, off) = if dl <= dr { (x0, dl) } else { (x1, -dr) };
                let (g, _) = self.gap(base, off);
                if g <= 0.0 {
                    if bad.get().is_none() {
                        bad.set(Some(x));
                    }
                    return 0.0;
                }
                self.eval_at(base, off)
            },
            x0,
            x1,
            flags,
            tol,
        )?;
        if let Some(x) = bad.get() {
            let (ga, gb) = (self.gap(x0, 0.0).0, self.gap(x1, 0.0).0);
            // points numerically at a flagged turning endpoint are harmless
            let near_end = (flags.left && (x - x0).abs() < 1e-9 * x0.abs().max(1.0) && ga.abs() < 1e-12)
                || (flags.right && (x1 - x).abs() < 1e-9 * x1.abs().max(1.0) && gb.abs() < 1e-12);
            if !near_end {
                return Err(QuadError::InteriorTurningPoint { x });
            }
        }
        Ok(r)
    }
}

fn is_turning(profile: &ProfileFunction, nu: f64, x: f64) -> bool {
    (profile.value(x) - nu).abs() <= 1e-12 * nu.max(1e-300).max(1.0) && nu > 0.0
}

/// θ-advance `∫_{x0}^{x1} f(x, ν) dx`; endpoints may be turning points.
pub fn clairaut_angle(profile: &ProfileFunction, nu: f64, x0: f64, x1: f64) -> Result<f64, QuadError> {
    clairaut_angle_tol(profile, nu, x0, x1, DEFAULT_TOL)
}

pub fn clairaut_angle_tol(profile: &ProfileFunction, nu: f64, x0: f64, x1: f64, tol: f64) -> Result<f64, QuadError> {
    if x0 == x1 || nu == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if x0 < x1 { (x0, x1, 1.0) } else { (x1, x0, -1.0) };
    profile.check_domain(lo)?;
    profile.check_domain(hi)?;
    let flags = EndpointFlags { left: is_turning(profile, nu, lo), right: is_turning(profile, nu, hi) };
    let mut integrand = ClairautIntegrand::new(profile, nu, Which::F);
    if flags.left {
        integrand = integrand.with_anchor(lo);
    }
    if flags.right {
        integrand = integrand.with_anchor(hi);
    }
    Ok(sign * integrand.integrate(lo, hi, flags, tol)?.value)
}

/// `∫_{x0}^{x1} f_ν(x, ν) dx` on an interval free of turning points.
///
/// `anchors` lists nearby turning radii (m = ν) outside the interval; they
/// keep `m − ν` accurate when an endpoint sits very close to one.
pub fn fnu_integral_anchored(
    profile: &ProfileFunction,
    nu: f64,
    x0: f64,
    x1: f64,
    anchors: &[f64],
    tol: f64,
) -> Result<f64, QuadError> {
    if x0 == x1 {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if x0 < x1 { (x0, x1, 1.0) } else { (x1, x0, -1.0) };
    profile.check_domain(lo)?;
    profile.check_domain(hi)?;
    let mut integrand = ClairautIntegrand::new(profile, nu, Which::FNu);
    for &a in anchors {
        integrand = integrand.with_anchor(a);
    }
    let (glo, ghi) = (integrand.gap(lo, 0.0).0, integrand.gap(hi, 0.0).0);
    if glo <= 0.0 || ghi <= 0.0 {
        return Err(QuadError::TurningPointInRange { x0, x1 });
    }
    Ok(sign * integrand.integrate(lo, hi, EndpointFlags::NONE, tol)?.value)
}

pub fn fnu_integral(profile: &ProfileFunction, nu: f64, x0: f64, x1: f64) -> Result<f64, QuadError> {
    fnu_integral_anchored(profile, nu, x0, x1, &[], DEFAULT_TOL)
}

/// `A_f(x) = √(a² − f(x)²) / f'(x)` on the decreasing branch, with its
/// removable limit at the peak.
fn a_transform(profile: &ProfileFunction, peak: f64, a: f64, peak_jet: &Jet, x: f64) -> f64 {
    let d = x - peak;
    let f2 = peak_jet.d(2);
    if d.abs() < 1e-4 {
        let a0 = -(a / -f2).sqrt();
        return a0 * (1.0 - peak_jet.d(3) * d / (3.0 * f2));
    }
    let j = profile.jet(x);
    let (f, fp) = (j.d(0), j.d(1));
    ((a - f) * (a + f)).max(0.0).sqrt() / fp
}

/// Upper half period ψ(ν) through the singularity-free transform.
///
/// With `τ = tan(s)/a` the τ-integral becomes
/// `ψ = −(2/a) ∫_0^{π/2} A_f(η(√u)) ds`, `√u = ν a / √(a² cos² s + ν² sin² s)`.
pub fn half_period_via_transform(profile: &ProfileFunction, nu: f64) -> Result<f64, QuadError> {
    half_period_via_transform_tol(profile, nu, DEFAULT_TOL)
}

pub fn half_period_via_transform_tol(profile: &ProfileFunction, nu: f64, tol: f64) -> Result<f64, QuadError> {
    let peak = profile.peak_radius().ok_or(ProfileError::NoCriticalParallel)?;
    let a = profile.value(peak);
    let lo = profile.lower_psi_bound();
    if !(nu > lo && nu < a) {
        return Err(QuadError::NuOutOfRange { nu, lo, hi: a });
    }
    let pj = profile.jet(peak);
    let failure = Cell::new(None);
    let r = de_quad(
        |s, _dl, dr| {
            let (sn, cs) = if dr < 0.5 { (dr.cos(), dr.sin()) } else { (s.sin(), s.cos()) };
            let y = nu * a / (a * a * cs * cs + nu * nu * sn * sn).sqrt();
            let x = if y >= a {
                peak
            } else {
                match profile.branch_inverse(Branch::Decreasing, y) {
                    Ok(x) => x,
                    Err(e) => {
                        failure.set(Some(e));
                        return 0.0;
                    }
                }
            };
            a_transform(profile, peak, a, &pj, x)
        },
        0.0,
        FRAC_PI_2,
        EndpointFlags::NONE,
        tol,
    )?;
    if let Some(e) = failure.take() {
        return Err(e.into());
    }
    Ok(-2.0 / a * r.value)
}
