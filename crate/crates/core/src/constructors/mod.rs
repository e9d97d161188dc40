//! Builders for the example families.

mod bump;
pub(crate) mod smooth;
mod sphere;

pub use bump::{interval_constants, interval_norms, BumpFunction, BumpSpec, IntervalNorms, Oscillating, INTERVAL_SAMPLES, MAX_BUMPS, SAFETY};
pub use smooth::{plateau, plateau_bound, step, step_integral};
pub use sphere::{lambda0_bound, CurveJet, SphereProfileData, PANELS};

use crate::profile::{Domain, Family, ProfileError, ProfileFunction};

/// `m₀(x) = x / (1 + x²)`.
pub fn make_m0() -> ProfileFunction {
    ProfileFunction::from_family(Family::M0)
}

/// `m_α = m₀ + α ∫_0^x φ₁`, with `φ₁(x) = s(x − √7)`.
pub fn make_m_alpha(alpha: f64) -> Result<ProfileFunction, ProfileError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ProfileError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(ProfileFunction::from_family(Family::MAlpha { alpha }))
}

/// `f̃_ε`.
pub fn make_bump(eps: f64) -> Result<BumpFunction, ProfileError> {
    BumpFunction::new(eps)
}

fn oscillating_hypotheses(base: &ProfileFunction, n0: u32) -> Result<f64, ProfileError> {
    if base.domain() != Domain::HalfLine {
        return Err(ProfileError::InvalidParameter("oscillating profiles need a plane-kind base".into()));
    }
    if matches!(base.family(), Family::Oscillating(_)) {
        return Err(ProfileError::InvalidParameter("base is already oscillating".into()));
    }
    let t0 = base
        .convex_from()
        .ok_or_else(|| ProfileError::InvalidParameter("base has no known convexity threshold".into()))?;
    match base.limit_slope() {
        Some(s) if s >= 0.0 => {}
        _ => return Err(ProfileError::InvalidParameter("base needs m'(inf) >= 0".into())),
    }
    if !(n0 as f64 > (1.0 + t0) / 2.0) {
        return Err(ProfileError::InvalidParameter(format!("n0 = {n0} must exceed (1 + t0)/2 = {}", (1.0 + t0) / 2.0)));
    }
    Ok(t0)
}

/// `m = m̂ (1 + Σ_{n ≥ n₀} f_n)` with `f_n(x) = f̃_{C_n}(x − 2n)`.
pub fn make_oscillating(base: &ProfileFunction, n0: u32) -> Result<ProfileFunction, ProfileError> {
    make_oscillating_from_specs(base, n0, &[])
}

/// As [`make_oscillating`], reusing previously materialized bump parameters.
pub fn make_oscillating_from_specs(base: &ProfileFunction, n0: u32, specs: &[BumpSpec]) -> Result<ProfileFunction, ProfileError> {
    let t0 = oscillating_hypotheses(base, n0)?;
    let osc = Oscillating::new(base.clone(), n0, t0, specs);
    // the first interval must be admissible
    osc.bump(n0)?;
    Ok(ProfileFunction::from_family(Family::Oscillating(osc)))
}

/// Sphere profile for the given `α ∈ (0,1)` and `λ > −1`.
pub fn make_sphere_profile(alpha: f64, lambda: f64) -> Result<(SphereProfileData, ProfileFunction), ProfileError> {
    let data = SphereProfileData::new(alpha, lambda)?;
    let profile = ProfileFunction::from_family(Family::SphereProfile(data.clone()));
    Ok((data, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::SQRT7;
    use std::f64::consts::PI;

    #[test]
    fn m_alpha_matches_m0_before_threshold() {
        let m0 = make_m0();
        let ma = make_m_alpha(0.25).unwrap();
        for i in 0..=100 {
            let x = SQRT7 * i as f64 / 100.0;
            assert_eq!(ma.value(x), m0.value(x));
        }
        let x = SQRT7 + 1.0;
        assert!((ma.eval(x, 1).unwrap() - m0.eval(x, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!(make_m_alpha(0.0).is_err());
    }

    #[test]
    fn m_alpha_convexity() {
        let m0 = make_m0();
        let ma = make_m_alpha(0.25).unwrap();
        for i in 0..2000 {
            let x = i as f64 * 0.005;
            assert!(ma.eval(x, 2).unwrap() >= m0.eval(x, 2).unwrap() - 1e-15);
            if x >= SQRT7 {
                assert!(ma.eval(x, 2).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn sphere_profile_symmetric_when_lambda_zero() {
        let (_, p) = make_sphere_profile(0.6, 0.0).unwrap();
        for i in 1..50 {
            let r = PI * i as f64 / 50.0;
            assert!((p.value(r) - p.value(PI - r)).abs() < 1e-8);
        }
    }

    #[test]
    fn sphere_profile_endpoints() {
        let (d, p) = make_sphere_profile(0.5, 0.017).unwrap();
        assert!(p.value(0.0).abs() < 1e-15 && p.value(PI).abs() < 1e-15);
        assert!((p.eval(0.0, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((p.eval(PI, 1).unwrap() + 1.0).abs() < 1e-14);
        assert!(p.eval(d.r_e, 1).unwrap().abs() < 1e-12);
        assert_eq!(p.peak_radius(), Some(d.r_e));
    }

    #[test]
    fn oscillating_rejects_bad_hypotheses() {
        let ma = make_m_alpha(0.25).unwrap();
        assert!(make_oscillating(&ma, 1).is_err());
        assert!(make_oscillating(&crate::profile::ProfileFunction::euclidean(), 4).is_err());
    }
}
