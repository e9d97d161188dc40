//! Oscillating bumps `φ(x) cos(K² x) / K⁵` and the profiles built from them.

use super::smooth::{plateau, plateau_bound};
use crate::jet::Jet;
use crate::profile::{ProfileError, ProfileFunction};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// `(n · y) mod 2` for a 128-bit integer `n`, without losing the fractional part.
pub(crate) fn mul_mod2(n: u128, y: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..4 {
        let chunk = ((n >> (32 * j)) & 0xffff_ffff) as f64;
        if chunk == 0.0 {
            continue;
        }
        let p = chunk * y;
        let e = chunk.mul_add(y, -p);
        let scale = 2f64.powi(32 * j);
        acc += (p * scale).rem_euclid(2.0) + (e * scale).rem_euclid(2.0);
    }
    acc.rem_euclid(2.0)
}

/// `f̃_ε(x) = φ(x) cos(K² x) / K⁵` with `K = √((4k+1)π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpFunction {
    pub eps: f64,
    pub k: u128,
    pub big_k: f64,
}

impl BumpFunction {
    /// Smallest k ≥ 1 with `K > sup(3 + 3|φ'| + |φ''|) / ε`.
    pub fn new(eps: f64) -> Result<Self, ProfileError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(ProfileError::InvalidParameter(format!("bump size must be positive, got {eps}")));
        }
        let target = plateau_bound() / eps;
        let kk = |k: u128| ((4 * k + 1) as f64 * PI).sqrt();
        let guess = ((target * target / PI - 1.0) / 4.0).floor();
        if !(guess < 1e36) {
            return Err(ProfileError::InvalidParameter(format!("bump size {eps} too small")));
        }
        let mut k = (guess.max(0.0) as u128).max(1);
        while k > 1 && kk(k - 1) > target {
            k -= 1;
        }
        while kk(k) <= target {
            k += 1;
        }
        Ok(Self::from_k(eps, k))
    }

    pub fn from_k(eps: f64, k: u128) -> Self {
        BumpFunction { eps, k, big_k: ((4 * k + 1) as f64 * PI).sqrt() }
    }

    /// Jet of the bump at `y` (compactly supported in (-1, 1)).
    pub fn jet(&self, y: f64) -> Jet {
        if y <= -1.0 || y >= 1.0 {
            return Jet::ZERO;
        }
        let phase = PI * mul_mod2(4 * self.k + 1, y);
        let (s, c) = phase.sin_cos();
        let kk = self.big_k;
        let k3 = kk * kk * kk;
        let k5 = k3 * kk * kk;
        let wave = Jet([c / k5, -s / k3, -c / (2.0 * kk), s * kk / 6.0]);
        plateau(Jet::var(y)) * wave
    }

    pub fn eval(&self, y: f64, order: usize) -> Result<f64, ProfileError> {
        if order > 3 {
            return Err(ProfileError::OrderTooHigh { order });
        }
        Ok(self.jet(y).d(order))
    }
}

/// Parameters of the bump on `I_n = [2n − 1, 2n + 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub n: u32,
    pub c_n: f64,
    pub k_n: u128,
}

impl BumpSpec {
    pub fn big_k(&self) -> f64 {
        ((4 * self.k_n + 1) as f64 * PI).sqrt()
    }

    pub fn function(&self) -> BumpFunction {
        BumpFunction::from_k(self.c_n, self.k_n)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "C_n": self.c_n, "k_n": self.k_n.to_string() })
    }

    pub fn from_json(v: &Value) -> Result<Self, ProfileError> {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| ProfileError::Parse("bump missing 'n'".into()))? as u32;
        let c_n = v.get("C_n").and_then(Value::as_f64).ok_or_else(|| ProfileError::Parse("bump missing 'C_n'".into()))?;
        let k_n = match v.get("k_n") {
            Some(Value::String(s)) => s.parse::<u128>().map_err(|e| ProfileError::Parse(format!("bad k_n: {e}")))?,
            Some(Value::Number(x)) => x.as_u64().ok_or_else(|| ProfileError::Parse("bad k_n".into()))? as u128,
            _ => return Err(ProfileError::Parse("bump missing 'k_n'".into())),
        };
        Ok(BumpSpec { n, c_n, k_n })
    }
}

/// Sampled extrema over `I_n` entering `C_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalNorms {
    pub a_n: f64,
    pub norm2: f64,
    pub log_norm1: f64,
    pub ratio_norm1: f64,
}

pub const INTERVAL_SAMPLES: usize = 4097;
pub const SAFETY: f64 = 0.9;

pub fn interval_norms(base: &ProfileFunction, n: u32) -> IntervalNorms {
    let lo = 2.0 * n as f64 - 1.0;
    let mut out = IntervalNorms { a_n: f64::INFINITY, norm2: 0.0, log_norm1: 0.0, ratio_norm1: 0.0 };
    for i in 0..INTERVAL_SAMPLES {
        let x = lo + 2.0 * i as f64 / (INTERVAL_SAMPLES - 1) as f64;
        let [m, m1, m2, m3] = base.jet(x).derivs();
        let q = m1 / m;
        let dq = m2 / m - q * q;
        let w = m2 / m;
        let dw = m3 / m - m2 * m1 / (m * m);
        out.a_n = out.a_n.min(m2);
        out.norm2 = out.norm2.max(m.abs() + m1.abs() + m2.abs());
        out.log_norm1 = out.log_norm1.max(q.abs() + dq.abs());
        out.ratio_norm1 = out.ratio_norm1.max(w.abs() + dw.abs());
    }
    out
}

/// `C_n` from sampled norms, times the safety factor.
pub fn interval_constants(base: &ProfileFunction, n: u32) -> Result<f64, ProfileError> {
    let s = interval_norms(base, n);
    if !(s.a_n > 0.0) {
        return Err(ProfileError::InvalidParameter(format!("base is not convex on I_{n} (min m'' = {})", s.a_n)));
    }
    let nn = (n as f64) * (n as f64);
    let c = (s.a_n / (2.0 * s.norm2))
        .min(1.0 / (3.0 * (1.0 + 4.0 * s.log_norm1 + s.ratio_norm1)))
        .min(1.0 / (nn * s.norm2));
    Ok(SAFETY * c)
}

/// Highest interval index that can be materialized.
pub const MAX_BUMPS: u32 = 4096;

#[derive(Debug)]
struct Slot {
    spec: BumpSpec,
    f: BumpFunction,
}

/// `m = m̂ (1 + Σ f_n)` with bumps materialized on first use.
#[derive(Debug)]
pub struct Oscillating {
    base: ProfileFunction,
    n0: u32,
    t0: f64,
    slots: Vec<OnceLock<Result<Slot, ProfileError>>>,
}

impl Oscillating {
    pub(crate) fn new(base: ProfileFunction, n0: u32, t0: f64, preset: &[BumpSpec]) -> Self {
        let slots: Vec<OnceLock<Result<Slot, ProfileError>>> = (n0..=MAX_BUMPS).map(|_| OnceLock::new()).collect();
        for spec in preset {
            if spec.n >= n0 && spec.n <= MAX_BUMPS {
                let _ = slots[(spec.n - n0) as usize].set(Ok(Slot { spec: *spec, f: spec.function() }));
            }
        }
        Oscillating { base, n0, t0, slots }
    }

    pub fn base(&self) -> &ProfileFunction {
        &self.base
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    /// Convexity threshold of the base; `m = m̂` on `(0, t₀]`.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// A gap radius `2n + 1` far out, where `m' = m̂'`.
    pub fn far_gap(&self) -> f64 {
        2.0 * MAX_BUMPS as f64 + 1.0
    }

    fn slot(&self, n: u32) -> Option<&Result<Slot, ProfileError>> {
        if n < self.n0 || n > MAX_BUMPS {
            return None;
        }
        Some(self.slots[(n - self.n0) as usize].get_or_init(|| {
            let c_n = interval_constants(&self.base, n)?;
            let f = BumpFunction::new(c_n)?;
            Ok(Slot { spec: BumpSpec { n, c_n, k_n: f.k }, f })
        }))
    }

    pub fn bump(&self, n: u32) -> Result<BumpSpec, ProfileError> {
        match self.slot(n) {
            Some(Ok(s)) => Ok(s.spec),
            Some(Err(e)) => Err(e.clone()),
            None => Err(ProfileError::InvalidParameter(format!("no bump with index {n}"))),
        }
    }

    pub fn bump_function(&self, n: u32) -> Result<BumpFunction, ProfileError> {
        match self.slot(n) {
            Some(Ok(s)) => Ok(s.f),
            Some(Err(e)) => Err(e.clone()),
            None => Err(ProfileError::InvalidParameter(format!("no bump with index {n}"))),
        }
    }

    pub fn materialized(&self) -> Vec<BumpSpec> {
        self.slots.iter().filter_map(|s| s.get().and_then(|r| r.as_ref().ok()).map(|s| s.spec)).collect()
    }

    pub fn n_max_materialized(&self) -> u32 {
        self.materialized().last().map(|s| s.n).unwrap_or(0)
    }

    pub fn jet(&self, x: f64) -> Jet {
        let base = self.base.jet(x);
        let n = ((x + 1.0) / 2.0).floor();
        if n < self.n0 as f64 {
            return base;
        }
        if x - 2.0 * n <= -1.0 {
            return base;
        }
        if n > MAX_BUMPS as f64 {
            return Jet([f64::NAN; 4]);
        }
        let n = n as u32;
        let y = x - 2.0 * n as f64;
        match self.slot(n) {
            Some(Ok(s)) => base * (s.f.jet(y) + 1.0),
            _ => Jet([f64::NAN; 4]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod2_is_exact_for_large_multipliers() {
        assert_eq!(mul_mod2(5, 0.5), 0.5);
        let n: u128 = 4 * 123_456_789_012_345_678_901_234u128 + 1;
        // n * 0.5 = 2k + 0.5
        assert_eq!(mul_mod2(n, 0.5), 0.5);
        assert_eq!(mul_mod2(n, -0.5), 1.5);
        assert!((mul_mod2(n, 0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bump_third_derivative_at_half() {
        let b = BumpFunction::new(1e-2).unwrap();
        assert!((b.eval(0.5, 3).unwrap() - b.big_k).abs() < 1e-6 * b.big_k);
        assert!((b.eval(-0.5, 3).unwrap() + b.big_k).abs() < 1e-6 * b.big_k);
    }

    #[test]
    fn k_is_minimal() {
        let eps = 0.05;
        let b = BumpFunction::new(eps).unwrap();
        let bound = plateau_bound() / eps;
        assert!(b.big_k > bound);
        assert!(((4 * (b.k - 1) + 1) as f64 * PI).sqrt() <= bound || b.k == 1);
    }

    #[test]
    fn far_gap_is_finite() {
        let base = crate::constructors::make_m_alpha(0.25).unwrap();
        let osc = crate::constructors::make_oscillating(&base, 4).unwrap();
        let crate::profile::Family::Oscillating(o) = osc.family() else { unreachable!() };
        let x = o.far_gap();
        assert_eq!(osc.jet(x), base.jet(x));
        assert!(osc.jet(x + 1.5).d(0).is_nan());
    }
}
