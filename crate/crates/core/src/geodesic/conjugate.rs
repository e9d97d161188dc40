use super::halfperiod::{half_period, half_period_derivative, HalfPeriod};
use super::{GeodesicError, GeodesicPath, PathEnd};
use crate::profile::{Branch, ProfileError, ProfileFunction};
use crate::quadrature::{clairaut_angle_tol, fnu_integral_anchored, ClairautIntegrand, Which};
use crate::roots::bisect;
use serde::Serialize;

/// First zero of the Jacobi field along a path, or the length up to which none exists.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JacobiOutcome {
    Conjugate { t: f64, r: f64, theta: f64 },
    /// Undecided beyond this arclength.
    NoneUpTo { length: f64 },
}

pub fn conjugate_point_jacobi(path: &GeodesicPath) -> JacobiOutcome {
    match path.first_conjugate() {
        Some((t, r, theta)) => JacobiOutcome::Conjugate { t, r, theta },
        None => {
            let length = match path.end {
                PathEnd::PoleHit { t, .. } | PathEnd::Theta { t } | PathEnd::Conjugate { t } => t,
                PathEnd::Length => path.length(),
            };
            JacobiOutcome::NoneUpTo { length }
        }
    }
}

/// Which balance equation defines the conjugate height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightRegime {
    /// γ-type, ν₀ ∈ (m(r₁), m(p)), t ∈ [p, η(ν₀)].
    GammaUpper,
    /// γ-type, ν₀ ≤ m(r₁), t ∈ [p, ∞) (or [p, r₁) when ν₀ = m(r₁)).
    GammaLower,
    /// β-type, ν₀ ∈ (m(r₁), m(p)), t ∈ (ξ(ν₀), η(ν₀)).
    Beta,
}

const TIE: f64 = 1e-9;
const H_TOL: f64 = 1e-11;
const Q_TOL: f64 = 1e-12;

struct Setup {
    p: f64,
    xi: f64,
    eta: Option<f64>,
    regime: HeightRegime,
}

fn gamma_setup(profile: &ProfileFunction, nu0: f64, t: f64) -> Result<Setup, GeodesicError> {
    let p = profile.peak_radius().ok_or(ProfileError::NoCriticalParallel)?;
    let top = profile.value(p);
    if !(nu0 > 0.0 && nu0 < top) {
        return Err(GeodesicError::NuOutOfRange { nu: nu0, lo: 0.0, hi: top });
    }
    let xi = profile.branch_inverse(Branch::Increasing, nu0)?;
    let lo = profile.lower_psi_bound();
    let regime = if nu0 > lo + TIE { HeightRegime::GammaUpper } else { HeightRegime::GammaLower };
    if t < p * (1.0 - 1e-12) {
        return Err(GeodesicError::Regime(format!("t = {t} lies below the peak radius {p}")));
    }
    let eta = match regime {
        HeightRegime::GammaUpper => {
            let eta = profile.branch_inverse(Branch::Decreasing, nu0)?;
            if t > eta * (1.0 + 1e-12) {
                return Err(GeodesicError::Regime(format!("t = {t} exceeds η(ν₀) = {eta}")));
            }
            Some(eta)
        }
        _ => {
            if let Some(r1) = profile.second_critical() {
                if nu0 >= lo - TIE && t >= r1 {
                    return Err(GeodesicError::Regime(format!("t = {t} must stay below r₁ = {r1} when ν₀ = m(r₁)")));
                }
            }
            None
        }
    };
    Ok(Setup { p, xi, eta, regime })
}

fn anchors(s: &Setup) -> Vec<f64> {
    let mut a = vec![s.xi];
    a.extend(s.eta);
    a
}

/// Conjugate height h(t) ∈ (ξ(ν₀), p] of a γ-type geodesic from radius t:
/// the root of `φ'(ν₀) + ∫_p^t f_ν − ∫_h^p f_ν = 0`.
pub fn conjugate_height(profile: &ProfileFunction, nu0: f64, t: f64) -> Result<f64, GeodesicError> {
    let s = gamma_setup(profile, nu0, t)?;
    if (profile.value(t) - nu0).abs() <= 1e-12 {
        return Ok(s.xi);
    }
    let anc = anchors(&s);
    let dphi = half_period_derivative(profile, nu0, HalfPeriod::Phi)?.value;
    let outer = fnu_integral_anchored(profile, nu0, s.p, t, &anc, Q_TOL)?;
    let target = dphi + outer;
    solve_height(profile, nu0, &anc, s.xi, s.p, s.p, |inner| target - inner)
}

/// Conjugate height of a β-type geodesic: root h ∈ (ξ, η) of
/// `ψ'(ν₀) − ∫_p^t f_ν + ∫_h^p f_ν = 0`.
pub fn conjugate_height_beta(profile: &ProfileFunction, nu0: f64, t: f64) -> Result<f64, GeodesicError> {
    let p = profile.peak_radius().ok_or(ProfileError::NoCriticalParallel)?;
    let lo = profile.lower_psi_bound();
    let top = profile.value(p);
    if !(nu0 > lo + TIE && nu0 < top) {
        return Err(GeodesicError::Regime(format!("β heights need ν₀ in ({lo}, {top})")));
    }
    let xi = profile.branch_inverse(Branch::Increasing, nu0)?;
    let eta = profile.branch_inverse(Branch::Decreasing, nu0)?;
    if !(t > xi && t < eta) {
        return Err(GeodesicError::Regime(format!("t = {t} outside (ξ, η) = ({xi}, {eta})")));
    }
    let anc = [xi, eta];
    let dpsi = half_period_derivative(profile, nu0, HalfPeriod::Psi)?.value;
    let outer = fnu_integral_anchored(profile, nu0, p, t, &anc, Q_TOL)?;
    let target = dpsi - outer;
    // ∫_h^p f_ν decreases in h, so target + ∫_h^p is decreasing
    solve_height(profile, nu0, &anc, xi, eta, p, |inner| -(target + inner))
}

/// Bisection on h ∈ (lo, hi) for `g(∫_h^p f_ν) = 0` with g(·) increasing in h.
fn solve_height<G: Fn(f64) -> f64>(
    profile: &ProfileFunction,
    nu0: f64,
    anc: &[f64],
    lo: f64,
    hi: f64,
    p: f64,
    g: G,
) -> Result<f64, GeodesicError> {
    let failure = std::cell::Cell::new(None);
    let eval = |h: f64| -> f64 {
        match fnu_integral_anchored(profile, nu0, h, p, anc, Q_TOL) {
            Ok(v) => g(v),
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    // pull the bracket just inside the turning radii
    let w = hi - lo;
    let a = lo + 1e-13 * w.max(1.0);
    let b = if hi == p { hi } else { hi - 1e-13 * w.max(1.0) };
    let (fa, fb) = (eval(a), eval(b));
    if let Some(e) = failure.take() {
        return Err(e.into());
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa < 0.0 && fb > 0.0) {
        return Err(GeodesicError::NoSignChange { lo, hi });
    }
    let root = bisect(&eval, a, b, H_TOL).ok_or(GeodesicError::NoSignChange { lo, hi })?;
    if let Some(e) = failure.take() {
        return Err(e.into());
    }
    Ok(root)
}

/// `h'(t) = −f_ν(t, ν₀) / f_ν(h(t), ν₀)`.
pub fn conjugate_height_slope(profile: &ProfileFunction, nu0: f64, t: f64, h: f64) -> f64 {
    let i = ClairautIntegrand::new(profile, nu0, Which::FNu);
    -i.eval(t) / i.eval(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiPsi {
    /// Φ(t, h(t)) with the γ-type height.
    pub phi: f64,
    pub h_gamma: f64,
    /// Ψ(t, h(t)) with the β-type height, when ν₀ > m(r₁) and t < η(ν₀).
    pub psi: Option<f64>,
    pub h_beta: Option<f64>,
}

/// Diagnostic angles `Φ = φ + ∫_p^t f − ∫_h^p f` and `Ψ = ∫_t^η f + ∫_h^η f`.
pub fn phi_psi_diagnostic(profile: &ProfileFunction, nu0: f64, t: f64) -> Result<PhiPsi, GeodesicError> {
    let s = gamma_setup(profile, nu0, t)?;
    let h = conjugate_height(profile, nu0, t)?;
    let phi0 = half_period(profile, nu0, HalfPeriod::Phi)?;
    let phi = phi0 + clairaut_angle_tol(profile, nu0, s.p, t, Q_TOL)? - clairaut_angle_tol(profile, nu0, h, s.p, Q_TOL)?;
    let (psi, h_beta) = match (s.regime, s.eta) {
        (HeightRegime::GammaUpper, Some(eta)) if t < eta && (profile.value(t) - nu0).abs() > 1e-12 => {
            let hb = conjugate_height_beta(profile, nu0, t)?;
            let v = clairaut_angle_tol(profile, nu0, t, eta, Q_TOL)? + clairaut_angle_tol(profile, nu0, hb, eta, Q_TOL)?;
            (Some(v), Some(hb))
        }
        _ => (None, None),
    };
    Ok(PhiPsi { phi, h_gamma: h, psi, h_beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::make_m0;
    use crate::geodesic::{shoot_with, ShootOptions};
    use crate::profile::SurfaceOfRevolution;
    use std::f64::consts::PI;

    #[test]
    fn sphere_heights_mirror() {
        let s = ProfileFunction::round_sphere();
        for (nu, t) in [(0.5, 2.0), (0.8, 1.9), (0.3, 1.6)] {
            let h = conjugate_height(&s, nu, t).unwrap();
            assert!((h - (PI - t)).abs() < 1e-8, "{nu} {t} {h}");
        }
    }

    #[test]
    fn tangent_start_gives_xi() {
        let h = conjugate_height(&make_m0(), 0.4, 2.0).unwrap();
        assert!((h - 0.5).abs() < 1e-12);
    }

    #[test]
    fn height_matches_jacobi() {
        let m = make_m0();
        let surf = SurfaceOfRevolution::from_profile(m.clone());
        let (nu, t) = (0.3, 1.0);
        let h = conjugate_height(&m, nu, t).unwrap();
        let sigma = PI - (nu / m.value(t)).asin();
        let opts = ShootOptions { tol: 1e-11, stop_at_conjugate: true, ..ShootOptions::default() };
        let path = shoot_with(&surf, (t, 0.0), sigma, 60.0, &opts).unwrap();
        match conjugate_point_jacobi(&path) {
            JacobiOutcome::Conjugate { r, .. } => assert!((r - h).abs() < 1e-6, "{r} {h}"),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn slope_is_negative() {
        let m = make_m0();
        let h = conjugate_height(&m, 0.2, 1.5).unwrap();
        assert!(conjugate_height_slope(&m, 0.2, 1.5, h) < 0.0);
    }

    #[test]
    fn slope_matches_difference() {
        let m = make_m0();
        let (nu, t, d) = (0.25, 1.5, 1e-4);
        let h = conjugate_height(&m, nu, t).unwrap();
        let fd = (conjugate_height(&m, nu, t + d).unwrap() - conjugate_height(&m, nu, t - d).unwrap()) / (2.0 * d);
        assert!((fd - conjugate_height_slope(&m, nu, t, h)).abs() < 1e-5);
    }

    #[test]
    fn regime_errors() {
        let m = make_m0();
        assert!(matches!(conjugate_height(&m, 0.3, 0.5), Err(GeodesicError::Regime(_))));
        assert!(matches!(conjugate_height(&m, 0.45, 3.0), Err(GeodesicError::Regime(_))));
        assert!(conjugate_height(&m, 0.6, 1.0).is_err());
    }

    #[test]
    fn diagnostic_limit_at_eta() {
        let m = make_m0();
        let d = phi_psi_diagnostic(&m, 0.4, 2.0).unwrap();
        let hp = crate::geodesic::half_periods(&m, 0.4).unwrap();
        assert!((d.phi - 0.5 * (hp.phi + hp.psi.unwrap())).abs() < 1e-8);
        let d = phi_psi_diagnostic(&m, 0.3, 1.5).unwrap();
        assert!(d.phi >= PI - 1e-6 && d.psi.unwrap() >= PI - 1e-6);
    }
}
