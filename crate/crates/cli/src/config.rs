use crate::Failure;
use clap::ValueEnum;
use revolve_core::constructors::{make_m0, make_m_alpha, make_oscillating, make_sphere_profile};
use revolve_core::{ProfileError, ProfileFunction, SurfaceOfRevolution};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Euclidean,
    RoundSphere,
    M0,
    MAlpha,
    Oscillating,
    Sphere,
}

/// Everything a run can be configured with. Flags and the JSON file both
/// fill one of these; flags win field by field.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    pub family: Option<FamilyArg>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub n0: Option<u32>,
    pub profile: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub set: Option<String>,
    pub nu: Option<String>,
    pub r0: Option<f64>,
    pub theta0: Option<f64>,
    pub angle: Option<f64>,
    pub length: Option<f64>,
    pub tol: Option<f64>,
    pub ode_tol: Option<f64>,
    pub fan: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: Option<usize>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Settings { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Settings {
    pub fn merged_over(self, file: Settings) -> Settings {
        let flags = self;
        merge_fields!(flags, file; family, alpha, lambda, n0, profile, out, set, nu, r0, theta0, angle,
            length, tol, ode_tol, fan, radii, x_min, x_max, points)
    }

    pub fn load(path: &Path) -> Result<Settings, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [("tol", self.tol), ("ode-tol", self.ode_tol), ("length", self.length)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Failure::Usage(format!("--{name} must be positive, got {v}")));
                }
            }
        }
        if let Some(r) = &self.radii {
            if r.is_empty() {
                return Err(Failure::Usage("radii list is empty".into()));
            }
        }
        if self.points == Some(0) {
            return Err(Failure::Usage("--points must be at least 1".into()));
        }
        if let Some(f) = self.fan {
            if f < 8 {
                return Err(Failure::Usage(format!("--fan must be at least 8, got {f}")));
            }
        }
        Ok(())
    }

    pub fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, Failure> {
        v.ok_or_else(|| Failure::Usage(format!("missing --{name}")))
    }

    pub fn build_profile(&self) -> Result<ProfileFunction, Failure> {
        if let Some(path) = &self.profile {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read profile {}: {e}", path.display())))?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed profile {}: {e}", path.display())))?;
            return ProfileFunction::from_json(&v).map_err(param_failure);
        }
        let family = self.family.ok_or_else(|| Failure::Usage("no surface given; use --family or --profile".into()))?;
        let alpha = || Settings::need(self.alpha, "alpha");
        let p = match family {
            FamilyArg::Euclidean => ProfileFunction::euclidean(),
            FamilyArg::RoundSphere => ProfileFunction::round_sphere(),
            FamilyArg::M0 => make_m0(),
            FamilyArg::MAlpha => make_m_alpha(alpha()?).map_err(param_failure)?,
            FamilyArg::Oscillating => {
                let base = make_m_alpha(alpha()?).map_err(param_failure)?;
                make_oscillating(&base, Settings::need(self.n0, "n0")?).map_err(param_failure)?
            }
            FamilyArg::Sphere => make_sphere_profile(alpha()?, Settings::need(self.lambda, "lambda")?).map_err(param_failure)?.1,
        };
        Ok(p)
    }

    pub fn build_surface(&self) -> Result<SurfaceOfRevolution, Failure> {
        Ok(SurfaceOfRevolution::from_profile(self.build_profile()?))
    }
}

/// Bad parameters are a usage problem; anything else is numerical.
fn param_failure(e: ProfileError) -> Failure {
    match e {
        ProfileError::InvalidParameter(_) | ProfileError::Parse(_) | ProfileError::KindMismatch => Failure::Usage(e.to_string()),
        other => Failure::Numeric(other.to_string()),
    }
}

/// `a:b:n`, inclusive, n ≥ 1.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("grid must look like a:b:n, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(linspace(a, b, n))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}
