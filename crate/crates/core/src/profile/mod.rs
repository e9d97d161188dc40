//! Profile functions `m(r)` of surfaces of revolution `dr² + m(r)² dθ²`.

mod conditions;
mod serial;

pub use conditions::{check_conditions, check_conditions_with, CheckOptions, ConditionReport, ConditionResult, ConditionSet, Verdict, Witness};

use crate::constructors::{Oscillating, SphereProfileData};
use crate::jet::Jet;
use crate::roots::brent;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("x = {x} outside the profile domain")]
    OutOfDomain { x: f64 },
    #[error("derivative order {order} not available (max 3)")]
    OrderTooHigh { order: usize },
    #[error("profile has no critical parallel (m' never vanishes)")]
    NoCriticalParallel,
    #[error("nu = {nu} outside the branch range [{lo}, {hi}]")]
    NuOutOfBranch { nu: f64, lo: f64, hi: f64 },
    #[error("profile evaluation not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("total curvature is only defined here for plane-kind surfaces")]
    SphereKind,
    #[error("surface kind does not match the profile domain")]
    KindMismatch,
    #[error("m' does not settle: |m'(X) - m'(inf)| = {gap} at X = {x}")]
    NonConvergentDerivative { x: f64, gap: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("malformed profile description: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    HalfLine,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    Plane,
    Sphere,
}

/// The closed-form families.
#[derive(Debug)]
pub enum Family {
    Euclidean,
    RoundSphere,
    M0,
    MAlpha { alpha: f64 },
    Oscillating(Oscillating),
    SphereProfile(SphereProfileData),
    /// `x ↦ m(λx)/λ`
    Scaled { inner: ProfileFunction, lambda: f64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Euclidean => "euclidean",
            Family::RoundSphere => "round-sphere",
            Family::M0 => "m0",
            Family::MAlpha { .. } => "m-alpha",
            Family::Oscillating(_) => "oscillating",
            Family::SphereProfile(_) => "sphere-profile",
            Family::Scaled { .. } => "scaled",
        }
    }
}

#[derive(Debug)]
struct Inner {
    family: Family,
    second_critical: OnceLock<Option<f64>>,
}

/// Immutable, cheaply clonable profile.
#[derive(Clone)]
pub struct ProfileFunction(Arc<Inner>);

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProfileFunction({})", self.to_json())
    }
}

impl PartialEq for ProfileFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.to_json() == other.to_json()
    }
}

/// Radius beyond which plane profiles are treated as "at infinity" by scans.
const FAR_SCAN: f64 = 1e6;

impl ProfileFunction {
    pub fn from_family(family: Family) -> Self {
        ProfileFunction(Arc::new(Inner { family, second_critical: OnceLock::new() }))
    }

    pub fn euclidean() -> Self {
        Self::from_family(Family::Euclidean)
    }

    pub fn round_sphere() -> Self {
        Self::from_family(Family::RoundSphere)
    }

    /// `x ↦ m(λx)/λ`; nested scalings collapse.
    pub fn scaled(inner: &ProfileFunction, lambda: f64) -> Result<Self, ProfileError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ProfileError::InvalidParameter(format!("scale must be positive, got {lambda}")));
        }
        if inner.domain() == Domain::Sphere {
            return Err(ProfileError::InvalidParameter("sphere profiles cannot be rescaled".into()));
        }
        if let Family::Scaled { inner: deeper, lambda: mu } = inner.family() {
            let combined = lambda * mu;
            if (combined - 1.0).abs() < 1e-14 {
                return Ok(deeper.clone());
            }
            return Ok(Self::from_family(Family::Scaled { inner: deeper.clone(), lambda: combined }));
        }
        Ok(Self::from_family(Family::Scaled { inner: inner.clone(), lambda }))
    }

    pub fn family(&self) -> &Family {
        &self.0.family
    }

    pub fn domain(&self) -> Domain {
        match self.family() {
            Family::RoundSphere | Family::SphereProfile(_) => Domain::Sphere,
            _ => Domain::HalfLine,
        }
    }

    pub fn upper_end(&self) -> f64 {
        match self.domain() {
            Domain::HalfLine => f64::INFINITY,
            Domain::Sphere => PI,
        }
    }

    pub fn check_domain(&self, x: f64) -> Result<(), ProfileError> {
        if x.is_nan() || x < 0.0 || x > self.upper_end() || x.is_infinite() {
            Err(ProfileError::OutOfDomain { x })
        } else {
            Ok(())
        }
    }

    fn jet_in_domain(&self, x: f64) -> Jet {
        match self.family() {
            Family::Euclidean => Jet::var(x),
            Family::RoundSphere => Jet::var(x).sin(),
            Family::M0 => m0_jet(x),
            Family::MAlpha { alpha } => m_alpha_jet(*alpha, x),
            Family::Oscillating(o) => o.jet(x),
            Family::SphereProfile(d) => d.jet(x),
            Family::Scaled { inner, lambda } => {
                let j = inner.jet(lambda * x);
                Jet::from_derivs([j.d(0) / lambda, j.d(1), j.d(2) * lambda, j.d(3) * lambda * lambda])
            }
        }
    }

    /// Taylor jet of m at `x`. Slightly out-of-domain points are answered by
    /// the odd extension through the pole, which keeps integrators smooth.
    pub fn jet(&self, x: f64) -> Jet {
        let reflect = |j: Jet| Jet::from_derivs([-j.d(0), j.d(1), -j.d(2), j.d(3)]);
        if x < 0.0 {
            return reflect(self.jet_in_domain(-x));
        }
        if self.domain() == Domain::Sphere && x > PI {
            return reflect(self.jet_in_domain(2.0 * PI - x));
        }
        self.jet_in_domain(x)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).value()
    }

    /// `m^(order)(x)` from the closed forms.
    pub fn eval(&self, x: f64, order: usize) -> Result<f64, ProfileError> {
        if order > 3 {
            return Err(ProfileError::OrderTooHigh { order });
        }
        self.check_domain(x)?;
        let v = self.jet(x).d(order);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ProfileError::NonFinite { x })
        }
    }

    /// Radius of the first zero of m'.
    pub fn peak_radius(&self) -> Option<f64> {
        match self.family() {
            Family::Euclidean => None,
            Family::RoundSphere => Some(FRAC_PI_2),
            Family::M0 | Family::MAlpha { .. } => Some(1.0),
            Family::Oscillating(o) => o.base().peak_radius(),
            Family::SphereProfile(d) => Some(d.r_e),
            Family::Scaled { inner, lambda } => inner.peak_radius().map(|p| p / lambda),
        }
    }

    /// Second zero `r₁` of m' on a plane profile, if finite.
    pub fn second_critical(&self) -> Option<f64> {
        if self.domain() == Domain::Sphere {
            return None;
        }
        *self.0.second_critical.get_or_init(|| match self.family() {
            Family::Euclidean | Family::M0 => None,
            Family::Scaled { inner, lambda } => inner.second_critical().map(|r| r / lambda),
            _ => self.scan_second_critical(),
        })
    }

    fn scan_second_critical(&self) -> Option<f64> {
        let p = self.peak_radius()?;
        let d1 = |x: f64| self.jet(x).d(1);
        let mut a = p * (1.0 + 1e-6);
        let mut step = 0.01 * p.max(1.0);
        while a < FAR_SCAN {
            let b = a + step;
            if d1(a) < 0.0 && d1(b) >= 0.0 {
                return brent(d1, a, b, 1e-15 * b, 200);
            }
            a = b;
            if a > 50.0 * p.max(1.0) {
                step = 0.01 * a;
            }
        }
        None
    }

    /// `m'(∞)` for plane profiles.
    pub fn limit_slope(&self) -> Option<f64> {
        match self.family() {
            Family::Euclidean => Some(1.0),
            Family::M0 => Some(0.0),
            Family::MAlpha { alpha } => Some(*alpha),
            Family::Oscillating(o) => o.base().limit_slope(),
            Family::Scaled { inner, .. } => inner.limit_slope(),
            Family::RoundSphere | Family::SphereProfile(_) => None,
        }
    }

    /// `lim_{x→∞} m(x)` for plane profiles (may be infinite).
    pub fn limit_value(&self) -> Option<f64> {
        match self.family() {
            Family::M0 => Some(0.0),
            Family::Scaled { inner, lambda } => inner.limit_value().map(|v| v / lambda),
            Family::Oscillating(o) => o.base().limit_value(),
            Family::RoundSphere | Family::SphereProfile(_) => None,
            _ => match self.limit_slope() {
                Some(s) if s > 0.0 => Some(f64::INFINITY),
                _ => None,
            },
        }
    }

    /// Lower end `m(r₁)` of the ν-range of the upper half period.
    pub fn lower_psi_bound(&self) -> f64 {
        if self.domain() == Domain::Sphere {
            return 0.0;
        }
        match self.second_critical() {
            Some(r1) => self.value(r1),
            None => self.limit_value().unwrap_or(0.0).min(self.peak_radius().map(|p| self.value(p)).unwrap_or(0.0)),
        }
    }

    /// A radius `t₀` with `m'' > 0` on `[t₀, ∞)`, when known in closed form.
    pub fn convex_from(&self) -> Option<f64> {
        match self.family() {
            Family::M0 | Family::MAlpha { .. } => Some(SQRT7),
            Family::Scaled { inner, lambda } => inner.convex_from().map(|t| t / lambda),
            Family::Oscillating(o) => Some(o.t0()),
            _ => None,
        }
    }

    /// Range of ν for which the branch inverse exists.
    pub fn branch_range(&self, branch: Branch) -> Result<(f64, f64), ProfileError> {
        let p = match self.peak_radius() {
            Some(p) => p,
            None => {
                return match (branch, self.family()) {
                    (Branch::Increasing, _) => Ok((0.0, f64::INFINITY)),
                    _ => Err(ProfileError::NoCriticalParallel),
                }
            }
        };
        let top = self.value(p);
        match branch {
            Branch::Increasing => Ok((0.0, top)),
            Branch::Decreasing => Ok((self.lower_psi_bound(), top)),
        }
    }

    /// ξ(ν) (increasing branch) or η(ν) (decreasing branch).
    pub fn branch_inverse(&self, branch: Branch, nu: f64) -> Result<f64, ProfileError> {
        let (lo, hi) = self.branch_range(branch)?;
        let p = self.peak_radius();
        if let Some(p) = p {
            if nu == hi {
                return Ok(p);
            }
        }
        let strict_low = branch == Branch::Decreasing && self.domain() == Domain::HalfLine;
        let below = if strict_low { nu <= lo } else { nu < lo };
        if nu.is_nan() || below || nu > hi {
            return Err(ProfileError::NuOutOfBranch { nu, lo, hi });
        }
        if nu == 0.0 && branch == Branch::Increasing {
            return Ok(0.0);
        }
        if nu == 0.0 && self.domain() == Domain::Sphere {
            return Ok(PI);
        }
        let g = |x: f64| self.value(x) - nu;
        let (a, b) = match (branch, p) {
            (Branch::Increasing, Some(p)) => (0.0, p),
            (Branch::Increasing, None) => {
                let mut b = nu.max(1.0);
                while g(b) < 0.0 && b < 1e300 {
                    b *= 2.0;
                }
                (0.0, b)
            }
            (Branch::Decreasing, Some(p)) => match (self.domain(), self.second_critical()) {
                (Domain::Sphere, _) => (p, PI),
                (_, Some(r1)) => (p, r1),
                (_, None) => {
                    let mut b = 2.0 * p;
                    while g(b) > 0.0 {
                        b *= 2.0;
                        if b > 1e300 {
                            return Err(ProfileError::Numerical("decreasing branch never reaches nu".into()));
                        }
                    }
                    (p, b)
                }
            },
            (Branch::Decreasing, None) => return Err(ProfileError::NoCriticalParallel),
        };
        let mut x = brent(g, a, b, 0.0, 300).ok_or_else(|| ProfileError::Numerical(format!("no bracket for nu = {nu}")))?;
        // Newton polish, kept inside the bracket
        for _ in 0..3 {
            let j = self.jet(x);
            if j.d(1) == 0.0 {
                break;
            }
            let nx = x - (j.d(0) - nu) / j.d(1);
            if nx > a && nx < b && (self.value(nx) - nu).abs() <= (j.d(0) - nu).abs() {
                x = nx;
            } else {
                break;
            }
        }
        let resid = (self.value(x) - nu).abs();
        if resid > 1e-12 * nu.abs().max(1.0) {
            return Err(ProfileError::Numerical(format!("branch inverse residual {resid} at nu = {nu}")));
        }
        Ok(x)
    }

    /// Gaussian curvature `−m''/m`, with the pole limit by one-sided extrapolation.
    pub fn curvature(&self, x: f64) -> Result<f64, ProfileError> {
        self.check_domain(x)?;
        let pole = x == 0.0 || (self.domain() == Domain::Sphere && x == PI);
        if !pole {
            let j = self.jet(x);
            return Ok(-j.d(2) / j.d(0));
        }
        let h = 1e-3 * self.peak_radius().unwrap_or(1.0).min(1.0);
        let dir = if x == 0.0 { 1.0 } else { -1.0 };
        let g = |k: f64| {
            let j = self.jet(x + dir * k * h);
            -j.d(2) / j.d(0)
        };
        Ok(4.0 * g(1.0) - 6.0 * g(2.0) + 4.0 * g(3.0) - g(4.0))
    }

    /// `(−m''/m)'`.
    pub fn curvature_derivative(&self, x: f64) -> f64 {
        let j = self.jet(x);
        let (m, m1, m2, m3) = (j.d(0), j.d(1), j.d(2), j.d(3));
        -m3 / m + m2 * m1 / (m * m)
    }

    /// `λ⁻¹ m(λx)` with λ the first critical radius.
    pub fn normalize(&self) -> Result<ProfileFunction, ProfileError> {
        if self.domain() == Domain::Sphere {
            return Err(ProfileError::InvalidParameter("sphere profiles are not normalized".into()));
        }
        let lambda = self.peak_radius().ok_or(ProfileError::NoCriticalParallel)?;
        if (lambda - 1.0).abs() < 1e-14 {
            return Ok(self.clone());
        }
        ProfileFunction::scaled(self, lambda)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serial::to_json(self)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ProfileError> {
        serial::from_json(v)
    }
}

fn m0_jet(x: f64) -> Jet {
    let v = Jet::var(x);
    v / (v * v + 1.0)
}

pub(crate) const SQRT7: f64 = 2.6457513110645907;

fn m_alpha_jet(alpha: f64, x: f64) -> Jet {
    let base = m0_jet(x);
    if x <= SQRT7 {
        return base;
    }
    base + crate::constructors::smooth::step_integral(Jet::var(x - SQRT7)) * alpha
}

/// A surface `dr² + m(r)² dθ²`.
#[derive(Clone, Debug)]
pub struct SurfaceOfRevolution {
    pub kind: SurfaceKind,
    pub profile: ProfileFunction,
}

/// Total curvature with its truncated cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TotalCurvature {
    pub value: f64,
    pub truncated: f64,
    pub x_max: f64,
    pub tail_bound: f64,
}

impl SurfaceOfRevolution {
    pub fn new(kind: SurfaceKind, profile: ProfileFunction) -> Result<Self, ProfileError> {
        let ok = matches!((kind, profile.domain()), (SurfaceKind::Plane, Domain::HalfLine) | (SurfaceKind::Sphere, Domain::Sphere));
        if !ok {
            return Err(ProfileError::KindMismatch);
        }
        Ok(SurfaceOfRevolution { kind, profile })
    }

    /// Surface whose kind follows the profile domain.
    pub fn from_profile(profile: ProfileFunction) -> Self {
        let kind = match profile.domain() {
            Domain::HalfLine => SurfaceKind::Plane,
            Domain::Sphere => SurfaceKind::Sphere,
        };
        SurfaceOfRevolution { kind, profile }
    }

    /// Radii of the poles.
    pub fn poles(&self) -> &'static [f64] {
        match self.kind {
            SurfaceKind::Plane => &[0.0],
            SurfaceKind::Sphere => &[0.0, PI],
        }
    }
}

pub fn gaussian_curvature(surface: &SurfaceOfRevolution, x: f64) -> Result<f64, ProfileError> {
    surface.profile.curvature(x)
}

/// `2π(1 − m'(∞))`, checked against `2π(m'(0) − m'(X))` at a far gap radius.
pub fn total_curvature(surface: &SurfaceOfRevolution) -> Result<TotalCurvature, ProfileError> {
    if surface.kind != SurfaceKind::Plane {
        return Err(ProfileError::SphereKind);
    }
    let p = &surface.profile;
    let slope = p.limit_slope().ok_or_else(|| ProfileError::Numerical("limit of m' unknown".into()))?;
    let x_max = match p.family() {
        Family::Oscillating(o) => o.far_gap(),
        _ => 8191.0,
    };
    let d0 = p.eval(0.0, 1)?;
    let dx = p.eval(x_max, 1)?;
    let truncated = 2.0 * PI * (d0 - dx);
    let value = 2.0 * PI * (1.0 - slope);
    let gap = (dx - slope).abs();
    // m' approaches its limit at least like 1/x² for every family here
    let tail_bound = 2.0 * PI * (gap.max(0.0) + 1e-12);
    if gap > 1e-4 {
        return Err(ProfileError::NonConvergentDerivative { x: x_max, gap });
    }
    Ok(TotalCurvature { value, truncated, x_max, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{make_m0, make_m_alpha};

    #[test]
    fn m0_values() {
        let m0 = make_m0();
        assert_eq!(m0.eval(1.0, 0).unwrap(), 0.5);
        assert_eq!(m0.eval(0.0, 1).unwrap(), 1.0);
        assert_eq!(m0.eval(1.0, 1).unwrap(), 0.0);
        assert!(m0.eval(-1.0, 0).is_err());
        assert!(m0.eval(1.0, 4).is_err());
    }

    #[test]
    fn round_sphere_second_derivative() {
        let s = ProfileFunction::round_sphere();
        assert!((s.eval(FRAC_PI_2, 2).unwrap() + 1.0).abs() < 1e-15);
        assert!(s.eval(4.0, 0).is_err());
    }

    #[test]
    fn curvature_of_m0() {
        let m0 = make_m0();
        assert!((m0.curvature(0.0).unwrap() - 6.0).abs() < 1e-9);
        assert!(m0.curvature(3f64.sqrt()).unwrap().abs() < 1e-15);
        let s = ProfileFunction::round_sphere();
        for x in [0.0, 0.3, 1.5, PI] {
            assert!((s.curvature(x).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pole_limit_matches_third_derivative() {
        let ma = make_m_alpha(0.25).unwrap();
        let lhopital = -ma.eval(0.0, 3).unwrap();
        assert!((ma.curvature(0.0).unwrap() - lhopital).abs() < 1e-9);
    }

    #[test]
    fn m0_curvature_derivative_closed_form() {
        let m0 = make_m0();
        let mut x: f64 = 0.1;
        while x <= 10.0 {
            let exact = 4.0 * x * (x * x - 7.0) / (1.0 + x * x).powi(3);
            assert!((m0.curvature_derivative(x) - exact).abs() < 1e-12);
            x += 0.1;
        }
    }

    #[test]
    fn branch_inverses_of_m0() {
        let m0 = make_m0();
        let xi = m0.branch_inverse(Branch::Increasing, 0.4).unwrap();
        let eta = m0.branch_inverse(Branch::Decreasing, 0.4).unwrap();
        assert!((xi - 0.5).abs() < 1e-14);
        assert!((eta - 2.0).abs() < 1e-13);
        assert_eq!(m0.branch_inverse(Branch::Increasing, 0.5).unwrap(), 1.0);
        assert!(m0.branch_inverse(Branch::Decreasing, 0.6).is_err());
        assert!(ProfileFunction::euclidean().branch_inverse(Branch::Decreasing, 0.3).is_err());
    }

    #[test]
    fn normalize_cases() {
        let m0 = make_m0();
        assert_eq!(m0.normalize().unwrap().to_json(), m0.to_json());
        let big = ProfileFunction::scaled(&m0, 0.5).unwrap();
        assert_eq!(big.peak_radius(), Some(2.0));
        assert!((big.value(3.0) - 2.0 * m0.value(1.5)).abs() < 1e-15);
        let back = big.normalize().unwrap();
        assert_eq!(back.to_json(), m0.to_json());
        assert!(ProfileFunction::euclidean().normalize().is_err());
    }

    #[test]
    fn total_curvature_values() {
        let e = SurfaceOfRevolution::from_profile(ProfileFunction::euclidean());
        assert_eq!(total_curvature(&e).unwrap().value, 0.0);
        let m0 = SurfaceOfRevolution::from_profile(make_m0());
        let t = total_curvature(&m0).unwrap();
        assert!((t.value - 2.0 * PI).abs() < 1e-15);
        assert!((t.truncated - t.value).abs() <= t.tail_bound);
        let ma = SurfaceOfRevolution::from_profile(make_m_alpha(0.25).unwrap());
        assert!((total_curvature(&ma).unwrap().value - 1.5 * PI).abs() < 1e-14);
        let s = SurfaceOfRevolution::from_profile(ProfileFunction::round_sphere());
        assert!(total_curvature(&s).is_err());
    }

    #[test]
    fn m_alpha_second_critical() {
        let ma = make_m_alpha(0.25).unwrap();
        let r1 = ma.second_critical().unwrap();
        assert!(r1 > SQRT7 && r1 < SQRT7 + 1.0);
        assert!(ma.eval(r1, 1).unwrap().abs() < 1e-14);
        assert!(make_m0().second_critical().is_none());
    }
}
