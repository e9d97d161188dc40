use super::GeodesicError;
use crate::profile::{Branch, ProfileError, ProfileFunction};
use crate::quadrature::{clairaut_angle_tol, half_period_via_transform_tol};
use serde::Serialize;

/// φ (lower) or ψ (upper) half period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfPeriod {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalfPeriodSample {
    pub nu: f64,
    pub phi: f64,
    pub psi: Option<f64>,
    /// ψ from the transformed integral, for cross-checking.
    pub psi_transform: Option<f64>,
}

const EVAL_TOL: f64 = 1e-13;

fn range(profile: &ProfileFunction, which: HalfPeriod) -> Result<(f64, f64, f64), GeodesicError> {
    let p = profile.peak_radius().ok_or(ProfileError::NoCriticalParallel)?;
    let top = profile.value(p);
    let lo = match which {
        HalfPeriod::Phi => 0.0,
        HalfPeriod::Psi => profile.lower_psi_bound(),
    };
    Ok((p, lo, top))
}

fn half_period_tol(profile: &ProfileFunction, nu: f64, which: HalfPeriod, tol: f64) -> Result<f64, GeodesicError> {
    let (p, lo, hi) = range(profile, which)?;
    if !(nu > lo && nu < hi) {
        return Err(GeodesicError::NuOutOfRange { nu, lo, hi });
    }
    let v = match which {
        HalfPeriod::Phi => {
            let xi = profile.branch_inverse(Branch::Increasing, nu)?;
            clairaut_angle_tol(profile, nu, xi, p, tol)?
        }
        HalfPeriod::Psi => {
            let eta = profile.branch_inverse(Branch::Decreasing, nu)?;
            clairaut_angle_tol(profile, nu, p, eta, tol)?
        }
    };
    Ok(2.0 * v)
}

/// `φ(ν) = 2∫_ξ^p f` or `ψ(ν) = 2∫_p^η f`, with p the peak radius.
pub fn half_period(profile: &ProfileFunction, nu: f64, which: HalfPeriod) -> Result<f64, GeodesicError> {
    half_period_tol(profile, nu, which, EVAL_TOL)
}

/// Both half periods at ν, plus ψ through the transformed integral.
pub fn half_periods(profile: &ProfileFunction, nu: f64) -> Result<HalfPeriodSample, GeodesicError> {
    let phi = half_period(profile, nu, HalfPeriod::Phi)?;
    let (_, lo, _) = range(profile, HalfPeriod::Psi)?;
    let (psi, psi_transform) = if nu > lo {
        let psi = half_period(profile, nu, HalfPeriod::Psi)?;
        let tr = half_period_via_transform_tol(profile, nu, 1e-12)?;
        (Some(psi), Some(tr))
    } else {
        (None, None)
    };
    Ok(HalfPeriodSample { nu, phi, psi, psi_transform })
}

pub fn half_period_derivative(profile: &ProfileFunction, nu: f64, which: HalfPeriod) -> Result<Derivative, GeodesicError> {
    half_period_derivative_tol(profile, nu, which, None)
}

/// φ'(ν) or ψ'(ν) by a fourth-order central difference with one Richardson step.
///
/// `step` overrides the automatic base step.
pub fn half_period_derivative_tol(
    profile: &ProfileFunction,
    nu: f64,
    which: HalfPeriod,
    step: Option<f64>,
) -> Result<Derivative, GeodesicError> {
    let (_, lo, hi) = range(profile, which)?;
    if !(nu > lo && nu < hi) {
        return Err(GeodesicError::NuOutOfRange { nu, lo, hi });
    }
    let dist = (nu - lo).min(hi - nu);
    let h = step.unwrap_or_else(|| (0.02 * hi).min(dist / 4.0));
    if !(2.0 * h < dist) || h <= 1e-9 * hi {
        return Err(GeodesicError::StencilOutOfRange { nu });
    }
    let f = |x: f64| half_period_tol(profile, x, which, EVAL_TOL);
    let d4 = |h: f64| -> Result<f64, GeodesicError> {
        Ok((-f(nu + 2.0 * h)? + 8.0 * f(nu + h)? - 8.0 * f(nu - h)? + f(nu - 2.0 * h)?) / (12.0 * h))
    };
    let coarse = d4(h)?;
    let fine = d4(h / 2.0)?;
    let value = fine + (fine - coarse) / 15.0;
    let scale = f(nu)?.abs().max(1.0);
    let noise = 8.0 * EVAL_TOL * scale / h;
    Ok(Derivative { value, error: (fine - coarse).abs() / 15.0 + noise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::make_m0;
    use std::f64::consts::PI;

    #[test]
    fn round_sphere_half_periods_are_pi_over_two() {
        let s = ProfileFunction::round_sphere();
        for nu in [0.1, 0.5, 0.9] {
            let h = half_periods(&s, nu).unwrap();
            assert!((h.phi - PI).abs() < 1e-10, "{}", h.phi);
            assert!((h.psi.unwrap() - PI).abs() < 1e-10);
            assert!((h.psi_transform.unwrap() - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn round_sphere_derivative_vanishes() {
        let s = ProfileFunction::round_sphere();
        let d = half_period_derivative(&s, 0.6, HalfPeriod::Psi).unwrap();
        assert!(d.value.abs() < 1e-8, "{d:?}");
    }

    #[test]
    fn m0_derivative_matches_secant() {
        let m = make_m0();
        let nu = 0.3;
        let d = half_period_derivative(&m, nu, HalfPeriod::Psi).unwrap();
        let h = 1e-4;
        let sec = (half_period(&m, nu + h, HalfPeriod::Psi).unwrap() - half_period(&m, nu - h, HalfPeriod::Psi).unwrap()) / (2.0 * h);
        assert!((d.value - sec).abs() < 1e-6 * sec.abs(), "{} {}", d.value, sec);
    }

    #[test]
    fn out_of_range_rejected() {
        let m = make_m0();
        assert!(half_period(&m, 0.5, HalfPeriod::Phi).is_err());
        assert!(half_period(&m, 0.0, HalfPeriod::Psi).is_err());
        assert!(matches!(
            half_period_derivative(&m, 0.5 - 1e-12, HalfPeriod::Psi),
            Err(GeodesicError::StencilOutOfRange { .. })
        ));
    }
}
