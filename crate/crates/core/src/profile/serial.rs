//! JSON form `{family, params, domain}`.

use super::{Domain, Family, ProfileError, ProfileFunction};
use crate::constructors::{make_m_alpha, make_m0, make_oscillating_from_specs, make_sphere_profile, BumpSpec};
use serde_json::{json, Map, Value};

pub(super) fn to_json(p: &ProfileFunction) -> Value {
    let params = match p.family() {
        Family::Euclidean | Family::RoundSphere | Family::M0 => json!({}),
        Family::MAlpha { alpha } => json!({ "alpha": alpha }),
        Family::Oscillating(o) => {
            let bumps: Vec<Value> = o.materialized().iter().map(BumpSpec::to_json).collect();
            json!({
                "base": o.base().to_json(),
                "n0": o.n0(),
                "n_max_materialized": o.n_max_materialized(),
                "bumps": bumps,
            })
        }
        Family::SphereProfile(d) => json!({ "alpha": d.alpha, "lambda": d.lambda }),
        Family::Scaled { inner, lambda } => json!({ "inner": inner.to_json(), "lambda": lambda }),
    };
    let domain = match p.domain() {
        Domain::HalfLine => "half-line",
        Domain::Sphere => "sphere",
    };
    json!({ "family": p.family().tag(), "params": params, "domain": domain })
}

fn num(params: &Map<String, Value>, key: &str) -> Result<f64, ProfileError> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| ProfileError::Parse(format!("missing numeric parameter '{key}'")))
}

pub(super) fn from_json(v: &Value) -> Result<ProfileFunction, ProfileError> {
    let family = v
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| ProfileError::Parse("missing 'family'".into()))?;
    let empty = Map::new();
    let params = v.get("params").and_then(Value::as_object).unwrap_or(&empty);
    let profile = match family {
        "euclidean" => ProfileFunction::euclidean(),
        "round-sphere" => ProfileFunction::round_sphere(),
        "m0" => make_m0(),
        "m-alpha" => make_m_alpha(num(params, "alpha")?)?,
        "sphere-profile" => make_sphere_profile(num(params, "alpha")?, num(params, "lambda")?)?.1,
        "scaled" => {
            let inner = from_json(params.get("inner").ok_or_else(|| ProfileError::Parse("missing 'inner'".into()))?)?;
            ProfileFunction::scaled(&inner, num(params, "lambda")?)?
        }
        "oscillating" => {
            let base = from_json(params.get("base").ok_or_else(|| ProfileError::Parse("missing 'base'".into()))?)?;
            let n0 = num(params, "n0")? as u32;
            let bumps = match params.get("bumps") {
                Some(Value::Array(items)) => items.iter().map(BumpSpec::from_json).collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
                Some(_) => return Err(ProfileError::Parse("'bumps' must be an array".into())),
            };
            make_oscillating_from_specs(&base, n0, &bumps)?
        }
        other => return Err(ProfileError::Parse(format!("unknown family '{other}'"))),
    };
    if let Some(d) = v.get("domain").and_then(Value::as_str) {
        let expected = match profile.domain() {
            Domain::HalfLine => "half-line",
            Domain::Sphere => "sphere",
        };
        if d != expected {
            return Err(ProfileError::Parse(format!("domain '{d}' does not match family '{family}'")));
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rebuilds_identical_profiles() {
        let m0 = make_m0();
        let scaled = ProfileFunction::scaled(&make_m_alpha(0.3).unwrap(), 0.5).unwrap();
        for p in [m0, scaled, ProfileFunction::round_sphere()] {
            let back = from_json(&to_json(&p)).unwrap();
            assert_eq!(to_json(&back), to_json(&p));
            assert_eq!(back.value(0.7).to_bits(), p.value(0.7).to_bits());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_json(&json!({"family": "tabulated"})).is_err());
        assert!(from_json(&json!({"family": "m-alpha", "params": {}})).is_err());
        assert!(from_json(&json!({"family": "m0", "domain": "sphere"})).is_err());
    }
}
