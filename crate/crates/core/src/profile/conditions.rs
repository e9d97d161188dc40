//! Sampled sign checks for the sufficient conditions on a profile.

use super::{Branch, Family, ProfileError, ProfileFunction, SurfaceKind, SurfaceOfRevolution};
use crate::geodesic::{half_period_derivative, HalfPeriod};
use crate::quadrature::{de_quad, EndpointFlags};
use crate::roots::brent;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionSet {
    #[serde(rename = "M1-M4", alias = "M1M4")]
    M1M4,
    #[serde(rename = "M5-M6", alias = "M5M6")]
    M5M6,
    #[serde(rename = "A1-A3", alias = "A1A3")]
    A1A3,
    #[serde(rename = "empty-cutlocus")]
    EmptyCutLocus,
}

impl ConditionSet {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "M1M4" => Some(ConditionSet::M1M4),
            "M5M6" => Some(ConditionSet::M5M6),
            "A1A3" => Some(ConditionSet::A1A3),
            "EMPTYCUTLOCUS" => Some(ConditionSet::EmptyCutLocus),
            _ => None,
        }
    }

    fn kind(self) -> SurfaceKind {
        match self {
            ConditionSet::A1A3 => SurfaceKind::Sphere,
            _ => SurfaceKind::Plane,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Decimated grid of `(abscissa, slack)` pairs plus the worst sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub variable: &'static str,
    pub samples: usize,
    pub points: Vec<[f64; 2]>,
    pub worst: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionResult {
    pub id: &'static str,
    pub description: String,
    pub verdict: Verdict,
    /// Minimal slack observed (positive means satisfied).
    pub margin: f64,
    /// Check tolerance at the worst sample.
    pub tolerance: f64,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub set: ConditionSet,
    pub family: &'static str,
    pub verdict: Verdict,
    pub conditions: Vec<ConditionResult>,
    pub parameters: BTreeMap<&'static str, f64>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn get(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn min_margin(&self) -> f64 {
        self.conditions.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub samples_per_unit: usize,
    /// Right end of plane grids; defaults to 20 × peak radius, stretched past r₁ and r_dc.
    pub x_max: Option<f64>,
    pub nu_points: usize,
    /// Relative gap kept below m(p) on the ν-grid.
    pub nu_gap: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { samples_per_unit: 4097, x_max: None, nu_points: 41, nu_gap: 1e-4 }
    }
}

pub fn check_conditions(surface: &SurfaceOfRevolution, set: ConditionSet) -> Result<ConditionReport, ProfileError> {
    check_conditions_with(surface, set, &CheckOptions::default())
}

pub fn check_conditions_with(
    surface: &SurfaceOfRevolution,
    set: ConditionSet,
    opts: &CheckOptions,
) -> Result<ConditionReport, ProfileError> {
    if surface.kind != set.kind() {
        return Err(ProfileError::KindMismatch);
    }
    let mut ctx = Ctx { profile: &surface.profile, opts, report: Vec::new(), params: BTreeMap::new(), notes: Vec::new() };
    match set {
        ConditionSet::M1M4 => ctx.m1m4(),
        ConditionSet::M5M6 => ctx.m5m6(),
        ConditionSet::A1A3 => ctx.a1a3(),
        ConditionSet::EmptyCutLocus => ctx.empty_cut_locus(),
    }
    let verdict = ctx.report.iter().fold(Verdict::Pass, |v, c| v.combine(c.verdict));
    Ok(ConditionReport {
        set,
        family: surface.profile.family().tag(),
        verdict,
        conditions: ctx.report,
        parameters: ctx.params,
        notes: ctx.notes,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Sign {
    /// slack ≥ 0
    NonStrict,
    /// slack > 0
    Strict,
}

const WITNESS_POINTS: usize = 257;
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// One sampled quantity: slack and the magnitude of the terms it was built from.
#[derive(Clone, Copy)]
struct Probe {
    slack: f64,
    scale: f64,
}

struct Ctx<'a> {
    profile: &'a ProfileFunction,
    opts: &'a CheckOptions,
    report: Vec<ConditionResult>,
    params: BTreeMap<&'static str, f64>,
    notes: Vec<String>,
}

fn midpoints(a: f64, b: f64, per_unit: usize) -> Vec<f64> {
    let n = (((b - a) * per_unit as f64).ceil() as usize).max(8);
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}

fn decimate(xs: &[f64], vs: &[f64]) -> Vec<[f64; 2]> {
    let step = xs.len().div_ceil(WITNESS_POINTS).max(1);
    xs.iter().zip(vs).step_by(step).map(|(&x, &v)| [x, v]).collect()
}

/// Verdict for samples with per-point tolerances.
fn judge(vs: &[f64], tols: &[f64], sign: Sign) -> Verdict {
    let mut verdict = Verdict::Pass;
    for (&v, &t) in vs.iter().zip(tols) {
        if !v.is_finite() || v < -10.0 * t {
            return Verdict::Fail;
        }
        let weak = match sign {
            Sign::NonStrict => v < -t,
            Sign::Strict => v <= 10.0 * t,
        };
        if weak {
            verdict = Verdict::Inconclusive;
        }
    }
    verdict
}

fn result(id: &'static str, description: String, variable: &'static str, xs: &[f64], vs: &[f64], tols: &[f64], sign: Sign) -> ConditionResult {
    let verdict = judge(vs, tols, sign);
    let (wi, _) = vs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv || v.is_nan() && !bv.is_nan() { (i, v) } else { (bi, bv) });
    let margin = vs.get(wi).copied().unwrap_or(f64::NAN);
    ConditionResult {
        id,
        description,
        verdict,
        margin,
        tolerance: tols.get(wi).copied().unwrap_or(0.0),
        witness: Witness { variable, samples: xs.len(), points: decimate(xs, vs), worst: [xs.get(wi).copied().unwrap_or(f64::NAN), margin] },
    }
}

fn missing(id: &'static str, description: String) -> ConditionResult {
    ConditionResult {
        id,
        description,
        verdict: Verdict::Fail,
        margin: f64::NAN,
        tolerance: 0.0,
        witness: Witness { variable: "x", samples: 0, points: Vec::new(), worst: [f64::NAN, f64::NAN] },
    }
}

/// Sample `probe` on a uniform midpoint grid over (a, b) and judge its sign.
fn sampled<F>(id: &'static str, description: String, a: f64, b: f64, per_unit: usize, sign: Sign, probe: F) -> ConditionResult
where
    F: Fn(f64) -> Probe + Sync,
{
    let xs = midpoints(a, b, per_unit);
    let probes: Vec<Probe> = xs.par_iter().map(|&x| probe(x)).collect();
    let vs: Vec<f64> = probes.iter().map(|p| p.slack).collect();
    let mut interp = 0.0f64;
    for w in vs.windows(3) {
        let d2 = (w[2] - 2.0 * w[1] + w[0]).abs() / 8.0;
        if d2.is_finite() {
            interp = interp.max(d2);
        }
    }
    let tols: Vec<f64> = probes.iter().map(|p| interp + ROUNDOFF * p.scale).collect();
    result(id, description, "x", &xs, &vs, &tols, sign)
}

impl<'a> Ctx<'a> {
    fn jet(&self, x: f64) -> [f64; 4] {
        self.profile.jet(x).derivs()
    }

    fn per_unit(&self) -> usize {
        self.opts.samples_per_unit.max(16)
    }

    /// `m' > 0` on [0, p) with slack `m'(x)/(p − x)`.
    fn rising(&self, id: &'static str, p: f64) -> ConditionResult {
        sampled(id, format!("m' > 0 on [0, {p})"), 0.0, p, self.per_unit(), Sign::Strict, |x| {
            let [_, m1, m2, _] = self.jet(x);
            let w = p - x;
            Probe { slack: m1 / w, scale: (m1.abs() + m2.abs() * x.abs() + 1.0) / w }
        })
    }

    /// `G' ≤ 0` on (0, b), normalized by `x(b − x)/b` when G' vanishes at b.
    fn curvature_falls(&self, id: &'static str, b: f64, vanishes_at_b: bool, description: String) -> ConditionResult {
        sampled(id, description, 0.0, b, self.per_unit(), Sign::NonStrict, |x| {
            let (g1, scale) = self.gprime(x);
            let w = if vanishes_at_b { x * (b - x) / b } else { x };
            Probe { slack: -g1 / w, scale: scale / w }
        })
    }

    fn gprime(&self, x: f64) -> (f64, f64) {
        let [m, m1, m2, m3] = self.jet(x);
        let a = m3 / m;
        let b = m2 * m1 / (m * m);
        (-a + b, a.abs() + b.abs())
    }

    /// `1 + (ξ∘m)'(x)` with its roundoff magnitude.
    fn xi_composite(&self, x: f64) -> Probe {
        let [m, m1, _, _] = self.jet(x);
        let xi = match self.profile.branch_inverse(Branch::Increasing, m) {
            Ok(v) => v,
            Err(_) => return Probe { slack: f64::NAN, scale: 0.0 },
        };
        let [_, d1, d2, _] = self.jet(xi);
        let ratio = m1 / d1;
        let rel = 8.0 + d2.abs() * 4.0 * m / (d1 * d1) + d2.abs() * xi.abs() / d1.abs();
        Probe { slack: 1.0 + ratio, scale: 1.0 + ratio.abs() * rel }
    }

    fn m1m4(&mut self) {
        let Some(p) = self.profile.peak_radius() else {
            self.report.push(missing("M.1", "m' has no zero".into()));
            return;
        };
        let r1 = self.profile.second_critical();
        let mut x_max = self.opts.x_max.unwrap_or(20.0 * p);
        if let Some(r1) = r1 {
            x_max = x_max.max(r1 + 5.0 * p);
        }
        self.params.insert("peak_radius", p);
        self.params.insert("x_max", x_max);
        if let Some(r1) = r1 {
            self.params.insert("r1", r1);
        } else {
            self.notes.push("r1 is infinite; decreasing tail checked up to x_max".into());
        }
        let top = r1.unwrap_or(x_max);
        let rising = self.rising("M.1a", p);
        self.report.push(rising);
        let falling = sampled("M.1b", format!("m' < 0 on ({p}, {top})"), p, top, self.per_unit(), Sign::Strict, |x| {
            let [_, m1, m2, _] = self.jet(x);
            let w = match r1 {
                Some(r1) => (x - p) * (r1 - x) / (r1 - p),
                None => x - p,
            };
            Probe { slack: -m1 / w, scale: (m1.abs() + m2.abs() * x + 1e-3) / w }
        });
        self.report.push(falling);
        if let Some(r1) = r1 {
            let convex = sampled("M.1c", format!("m'' >= 0 on [{r1}, {x_max}]"), r1, x_max, self.per_unit(), Sign::NonStrict, |x| {
                let [m, _, m2, m3] = self.jet(x);
                Probe { slack: m2, scale: m2.abs() + m3.abs() * x + m.abs() * 1e-3 }
            });
            self.report.push(convex);
        }
        let m2 = self.curvature_falls("M.2", p, false, format!("-m''/m decreasing on (0, {p})"));
        self.report.push(m2);
        let m3 = self.psi_monotone(p);
        self.report.push(m3);
        let m4 = sampled("M.4", format!("1 + (xi o m)' >= 0 on ({p}, {top})"), p, top, self.per_unit(), Sign::NonStrict, |x| {
            self.xi_composite(x)
        });
        self.report.push(m4);
    }

    /// (M.3): ψ' ≤ 0 on a ν-grid inside (m(r₁), m(p)(1 − gap)).
    fn psi_monotone(&mut self, p: f64) -> ConditionResult {
        let lo = self.profile.lower_psi_bound();
        let hi = self.profile.value(p) * (1.0 - self.opts.nu_gap);
        self.params.insert("nu_gap", self.profile.value(p) * self.opts.nu_gap);
        let n = self.opts.nu_points.max(3);
        let nus: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * (i as f64 + 1.0) / (n as f64 + 1.0)).collect();
        let ds: Vec<_> = nus.par_iter().map(|&nu| half_period_derivative(self.profile, nu, HalfPeriod::Psi)).collect();
        let mut vs = Vec::with_capacity(n);
        let mut tols = Vec::with_capacity(n);
        for (nu, d) in nus.iter().zip(ds) {
            match d {
                Ok(d) => {
                    vs.push(-d.value);
                    tols.push(d.error);
                }
                Err(e) => {
                    self.notes.push(format!("psi'({nu}) failed: {e}"));
                    vs.push(f64::NAN);
                    tols.push(0.0);
                }
            }
        }
        result("M.3", format!("psi decreasing on ({lo}, {hi}]"), "nu", &nus, &vs, &tols, Sign::NonStrict)
    }

    fn m5m6(&mut self) {
        let Some(lambda) = self.profile.peak_radius() else {
            self.report.push(missing("M.5", "m' has no zero".into()));
            return;
        };
        self.params.insert("lambda", lambda);
        let rising = self.rising("M.5a", lambda);
        self.report.push(rising);
        let [_, m1, m2, m3] = self.jet(lambda);
        self.report.push(result(
            "M.5b",
            format!("m'({lambda}) = 0 > m''({lambda})"),
            "x",
            &[lambda],
            &[-m2],
            &[ROUNDOFF * (m2.abs() + m3.abs())],
            Sign::Strict,
        ));
        if m1.abs() > 1e-10 {
            self.notes.push(format!("m'(lambda) = {m1}"));
        }

        let mut x_max = self.opts.x_max.unwrap_or(20.0 * lambda);
        let r_dc = self.first_curvature_minimum(x_max);
        let Some(r_dc) = r_dc else {
            self.notes.push(format!("no zero of (-m''/m)' found below {x_max}"));
            self.report.push(missing("M.6", "no r_dc found".into()));
            return;
        };
        x_max = x_max.max(r_dc + 5.0 * lambda);
        self.params.insert("r_dc", r_dc);
        self.params.insert("x_max", x_max);
        if r_dc <= lambda {
            self.report.push(result("M.6", format!("r_dc = {r_dc} exceeds lambda"), "x", &[r_dc], &[r_dc - lambda], &[0.0], Sign::Strict));
        }
        let falls = self.curvature_falls("M.6a", r_dc, true, format!("-m''/m decreasing on (0, {r_dc})"));
        self.report.push(falls);
        let convex = sampled("M.6b", format!("m'' >= 0 on [{r_dc}, {x_max}]"), r_dc, x_max, self.per_unit(), Sign::NonStrict, |x| {
            let [_, _, m2, m3] = self.jet(x);
            Probe { slack: m2, scale: m2.abs() + m3.abs() * x }
        });
        self.report.push(convex);
    }

    /// First radius where (−m''/m)' turns positive.
    fn first_curvature_minimum(&self, x_max: f64) -> Option<f64> {
        let g = |x: f64| self.profile.curvature_derivative(x);
        let xs = midpoints(0.0, x_max, self.per_unit().min(512));
        let mut prev = xs[0];
        for &x in &xs[1..] {
            if g(x) > 0.0 && g(prev) <= 0.0 {
                return brent(g, prev, x, 1e-15 * x, 200);
            }
            prev = x;
        }
        None
    }

    fn a1a3(&mut self) {
        let Some(re) = self.profile.peak_radius() else {
            self.report.push(missing("A.1", "m' has no zero".into()));
            return;
        };
        self.params.insert("r_e", re);
        let n = self.per_unit();
        let rising = self.rising("A.1a", re);
        self.report.push(rising);
        let falling = sampled("A.1b", format!("m' < 0 on ({re}, pi]"), re, PI, n, Sign::Strict, |x| {
            let [_, m1, m2, _] = self.jet(x);
            let w = x - re;
            Probe { slack: -m1 / w, scale: (m1.abs() + m2.abs() * x + 1.0) / w }
        });
        self.report.push(falling);
        let left = self.curvature_falls("A.2a", re, true, format!("-m''/m decreasing on (0, {re})"));
        self.report.push(left);
        let right = sampled("A.2b", format!("-m''/m increasing on ({re}, pi)"), re, PI, n, Sign::NonStrict, |x| {
            let (g1, scale) = self.gprime(x);
            let w = (x - re) * (PI - x) / (PI - re);
            Probe { slack: g1 / w, scale: scale / w }
        });
        self.report.push(right);

        // (A.3) either orientation
        let xs = midpoints(re, PI, n);
        let probes: Vec<Probe> = xs.par_iter().map(|&x| self.xi_composite(x)).collect();
        let q: Vec<f64> = probes.iter().map(|p| p.slack).collect();
        let mut interp = 0.0f64;
        for w in q.windows(3) {
            interp = interp.max((w[2] - 2.0 * w[1] + w[0]).abs() / 8.0);
        }
        let tols: Vec<f64> = probes.iter().map(|p| interp + ROUNDOFF * p.scale).collect();
        let neg: Vec<f64> = q.iter().map(|v| -v).collect();
        let up = result("A.3", "1 + (xi o m)' >= 0 on (r_e, pi)".into(), "x", &xs, &q, &tols, Sign::NonStrict);
        let down = result("A.3", "1 + (xi o m)' <= 0 on (r_e, pi)".into(), "x", &xs, &neg, &tols, Sign::NonStrict);
        let rank = |v: Verdict| match v {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
        };
        let pick = if rank(down.verdict) < rank(up.verdict) || (down.verdict == up.verdict && down.margin > up.margin) { down } else { up };
        self.params.insert("a3_orientation", if pick.description.contains(">=") { 1.0 } else { -1.0 });
        self.report.push(pick);
    }

    /// `liminf m > 0` and `∫₁^∞ m⁻² < ∞`.
    fn empty_cut_locus(&mut self) {
        let p = self.profile;
        let limit = p.limit_value();
        let slope = p.limit_slope();
        let far: Vec<f64> = (0..=40).map(|i| 10f64.powf(i as f64 / 10.0)).collect();
        let ms: Vec<f64> = far.iter().map(|&x| p.value(x)).collect();
        let sampled_min = ms.iter().copied().fold(f64::INFINITY, f64::min);
        self.params.insert("sampled_min_m", sampled_min);
        let (margin, verdict) = match limit {
            Some(l) if l.is_infinite() => (sampled_min, Verdict::Pass),
            Some(l) if l > 0.0 => (l, Verdict::Pass),
            Some(l) => (l, Verdict::Fail),
            None => (sampled_min, Verdict::Inconclusive),
        };
        if limit == Some(0.0) {
            self.notes.push("m(x) -> 0 in closed form".into());
        }
        let witness = Witness { variable: "x", samples: far.len(), points: far.iter().zip(&ms).map(|(&x, &m)| [x, m]).collect(), worst: [*far.last().unwrap(), margin] };
        self.report.push(ConditionResult { id: "C.1", description: "liminf m > 0".into(), verdict, margin, tolerance: 0.0, witness });

        let marks = [1e1, 1e2, 1e3, 1e4];
        let mut partial = Vec::new();
        let mut acc = 0.0;
        let mut a = 1.0;
        for &b in &marks {
            let r = de_quad(
                |x, _, _| {
                    let m = p.value(x);
                    1.0 / (m * m)
                },
                a,
                b,
                EndpointFlags::NONE,
                1e-10,
            );
            match r {
                Ok(r) => acc += r.value,
                Err(_) => acc = f64::NAN,
            }
            partial.push([b, acc]);
            a = b;
        }
        self.params.insert("integral_to_1e4", acc);
        let s = slope.unwrap_or(f64::NAN);
        let (verdict, margin) = if s > 0.0 {
            (Verdict::Pass, s)
        } else if s == 0.0 && limit.map(|l| l.is_finite()).unwrap_or(false) {
            // bounded m gives a divergent integral
            (Verdict::Fail, s)
        } else {
            (Verdict::Inconclusive, s)
        };
        self.report.push(ConditionResult {
            id: "C.2",
            description: "integral of 1/m^2 over [1, inf) is finite".into(),
            verdict,
            margin,
            tolerance: 0.0,
            witness: Witness { variable: "x", samples: partial.len(), worst: *partial.last().unwrap(), points: partial },
        });
        if let Family::Oscillating(_) = p.family() {
            self.notes.push("limits taken from the base profile".into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{make_m0, make_m_alpha};

    fn surface(p: ProfileFunction) -> SurfaceOfRevolution {
        SurfaceOfRevolution::from_profile(p)
    }

    #[test]
    fn m0_passes_m5m6() {
        let r = check_conditions(&surface(make_m0()), ConditionSet::M5M6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        assert!((r.parameters["lambda"] - 1.0).abs() < 1e-15);
        assert!((r.parameters["r_dc"] - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn m0_passes_m1m4() {
        let opts = CheckOptions { samples_per_unit: 257, nu_points: 9, ..CheckOptions::default() };
        let r = check_conditions_with(&surface(make_m0()), ConditionSet::M1M4, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn round_sphere_a_set() {
        let s = surface(ProfileFunction::round_sphere());
        let r = check_conditions(&s, ConditionSet::A1A3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        assert!((r.parameters["r_e"] - PI / 2.0).abs() < 1e-15);
        for c in &r.conditions {
            assert!(c.margin >= -c.tolerance, "{c:?}");
        }
        assert!(r.get("A.1a").unwrap().margin > 0.0);
    }

    #[test]
    fn empty_cut_locus_criterion() {
        let r = check_conditions(&surface(make_m0()), ConditionSet::EmptyCutLocus).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = check_conditions(&surface(ProfileFunction::euclidean()), ConditionSet::EmptyCutLocus).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let r = check_conditions(&surface(make_m_alpha(0.25).unwrap()), ConditionSet::EmptyCutLocus).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn kind_mismatch() {
        let s = surface(make_m0());
        assert_eq!(check_conditions(&s, ConditionSet::A1A3), Err(ProfileError::KindMismatch));
    }

    #[test]
    fn euclidean_has_no_peak() {
        let r = check_conditions(&surface(ProfileFunction::euclidean()), ConditionSet::M5M6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn judge_bands() {
        assert_eq!(judge(&[1.5], &[0.1], Sign::Strict), Verdict::Pass);
        assert_eq!(judge(&[0.5], &[0.1], Sign::Strict), Verdict::Inconclusive);
        assert_eq!(judge(&[-0.05], &[0.1], Sign::NonStrict), Verdict::Pass);
        assert_eq!(judge(&[-0.5], &[0.1], Sign::NonStrict), Verdict::Inconclusive);
        assert_eq!(judge(&[-2.0], &[0.1], Sign::NonStrict), Verdict::Fail);
    }

    #[test]
    fn set_names() {
        assert_eq!(ConditionSet::parse("M5M6"), Some(ConditionSet::M5M6));
        assert_eq!(ConditionSet::parse("a1-a3"), Some(ConditionSet::A1A3));
        assert_eq!(ConditionSet::parse("empty-cutlocus"), Some(ConditionSet::EmptyCutLocus));
        assert_eq!(ConditionSet::parse("x"), None);
    }
}
