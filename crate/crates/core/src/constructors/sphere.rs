//! Sphere profiles generated by the curves `(l x_λ(u), l y(u))`,
//! `x_λ = cos u + λ(cos u − cos⁴u / 12)`, `y = α sin u`.

use crate::jet::Jet;
use crate::profile::ProfileError;
use crate::quadrature::gauss_legendre;
use std::f64::consts::{FRAC_PI_2, PI};

pub const PANELS: usize = 2048;
const GL_POINTS: usize = 8;

/// Derivatives of the generating curve at parameter `u`.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub y0: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

#[derive(Clone, Debug)]
pub struct SphereProfileData {
    pub alpha: f64,
    pub lambda: f64,
    /// Length normalization `l_λ`.
    pub l: f64,
    /// `r_e = X(π/2)`.
    pub r_e: f64,
    /// `X(u_j)` at panel boundaries `u_j = jπ/PANELS`.
    x_table: Vec<f64>,
}

impl SphereProfileData {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self, ProfileError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ProfileError::InvalidParameter(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(lambda > -1.0 && lambda.is_finite()) {
            return Err(ProfileError::InvalidParameter(format!("lambda must exceed -1, got {lambda}")));
        }
        let mut d = SphereProfileData { alpha, lambda, l: 1.0, r_e: 0.0, x_table: Vec::new() };
        let du = PI / PANELS as f64;
        let mut min_speed = f64::INFINITY;
        let mut cum = vec![0.0; PANELS + 1];
        for j in 0..PANELS {
            let a = j as f64 * du;
            cum[j + 1] = cum[j] + d.raw_arc(a, a + du);
            min_speed = min_speed.min(d.speed(a));
        }
        if !(min_speed > 1e-12) {
            return Err(ProfileError::InvalidParameter("generating curve is not regular".into()));
        }
        let total = cum[PANELS];
        d.l = PI / total;
        d.x_table = cum.iter().map(|c| c * d.l).collect();
        d.x_table[PANELS] = PI;
        d.r_e = d.x_table[PANELS / 2];
        Ok(d)
    }

    pub fn f1(&self, x: f64) -> f64 {
        self.lambda * (1.0 - x * x * x / 3.0)
    }

    pub fn curve(&self, u: f64) -> CurveJet {
        let (s, c) = u.sin_cos();
        let lam = self.lambda;
        let g = 1.0 + self.f1(c);
        let f2 = -lam * c * c;
        let f3 = -2.0 * lam * c;
        CurveJet {
            x1: -s * g,
            x2: -c * g + s * s * f2,
            x3: s * g + 3.0 * s * c * f2 - s * s * s * f3,
            y0: self.alpha * s,
            y1: self.alpha * c,
            y2: -self.alpha * s,
            y3: -self.alpha * c,
        }
    }

    /// `√(x_λ'² + y'²)`
    pub fn speed(&self, u: f64) -> f64 {
        let j = self.curve(u);
        (j.x1 * j.x1 + j.y1 * j.y1).sqrt()
    }

    fn raw_arc(&self, a: f64, b: f64) -> f64 {
        let (xs, ws) = gauss_legendre(GL_POINTS);
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        xs.iter().zip(ws).map(|(x, w)| w * self.speed(m + h * x)).sum::<f64>() * h
    }

    /// Arclength `X(u)` along the normalized curve.
    pub fn arclength(&self, u: f64) -> f64 {
        if u >= PI {
            return PI;
        }
        let du = PI / PANELS as f64;
        let j = ((u / du).floor() as isize).clamp(0, PANELS as isize - 1) as usize;
        let a = j as f64 * du;
        self.x_table[j] + self.l * self.raw_arc(a, u)
    }

    /// Inverse `u(r)` of the arclength.
    pub fn u_of_r(&self, r: f64) -> f64 {
        let du = PI / PANELS as f64;
        let j = match self.x_table.binary_search_by(|v| v.partial_cmp(&r).unwrap()) {
            Ok(j) => return (j as f64 * du).min(PI),
            Err(j) => j.clamp(1, PANELS) - 1,
        };
        let (x0, x1) = (self.x_table[j], self.x_table[j + 1]);
        let a = j as f64 * du;
        // cubic Hermite for u(X) from the end slopes du/dX = 1/(l |c'|)
        let (s0, s1) = (1.0 / (self.l * self.speed(a)), 1.0 / (self.l * self.speed(a + du)));
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t),
            t * (1.0 - t) * (1.0 - t),
            t * t * (3.0 - 2.0 * t),
            t * t * (t - 1.0),
        );
        let mut u = h00 * a + h10 * h * s0 + h01 * (a + du) + h11 * h * s1;
        for _ in 0..3 {
            u -= (self.arclength(u) - r) / (self.l * self.speed(u));
        }
        u
    }

    /// `[m, m', m'', m''']` at parameter `u`.
    pub fn derivs_at_u(&self, u: f64) -> [f64; 4] {
        let c = self.curve(u);
        let l = self.l;
        let s = c.x1 * c.x1 + c.y1 * c.y1;
        let rs = s.sqrt();
        let cross = c.x1 * c.y2 - c.x2 * c.y1;
        let num = c.x1 * cross;
        let dnum = c.x2 * cross + c.x1 * (c.x1 * c.y3 - c.x3 * c.y1);
        let ds = 2.0 * (c.x1 * c.x2 + c.y1 * c.y2);
        [
            l * c.y0,
            c.y1 / rs,
            num / (l * s * s),
            (dnum * s - 2.0 * num * ds) / (l * l * s * s * s * rs),
        ]
    }

    pub fn jet(&self, r: f64) -> Jet {
        let u = if r <= 0.0 {
            0.0
        } else if r >= PI {
            PI
        } else {
            self.u_of_r(r)
        };
        Jet::from_derivs(self.derivs_at_u(u))
    }

    /// `Q_λ(u) = (1 + F'(cos u))² + λ cos u sin²2u (1 + F'(cos u)) / 4`.
    pub fn q_closed(&self, u: f64) -> f64 {
        let c = u.cos();
        let g = 1.0 + self.f1(c);
        let s2 = (2.0 * u).sin();
        g * g + self.lambda * c * s2 * s2 * g / 4.0
    }

    /// `−x'(x'y'' − x''y') / y` from the curve derivatives.
    pub fn q_direct(&self, u: f64) -> f64 {
        let c = self.curve(u);
        -c.x1 * (c.x1 * c.y2 - c.x2 * c.y1) / c.y0
    }

    /// `P_λ(u) / sin 2u`, where `P_λ = Q'S − 2QS'` and `S = x'² + y'²`.
    pub fn p_over_sin2u(&self, u: f64) -> f64 {
        let (s, c) = u.sin_cos();
        let lam = self.lambda;
        let g = 1.0 + self.f1(c);
        let s2 = (2.0 * u).sin();
        let c2 = (2.0 * u).cos();
        let dq = lam * g * (c - s * s2 / 4.0 + c * c2) + lam * lam * c * c * s2 * s2 / 8.0;
        let speed2 = s * s * g * g + self.alpha * self.alpha * c * c;
        let dspeed = g * g + lam * s * s * c * g - self.alpha * self.alpha;
        dq * speed2 - 2.0 * self.q_closed(u) * dspeed
    }

    pub fn u_e(&self) -> f64 {
        FRAC_PI_2
    }
}

/// Positive root of `32λ(1+λ)³ + 8λ(1+λ) = 2(1 − α²)`.
pub fn lambda0_bound(alpha: f64) -> Result<f64, ProfileError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ProfileError::InvalidParameter(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let rhs = 2.0 * (1.0 - alpha * alpha);
    let g = |l: f64| 32.0 * l * (1.0 + l).powi(3) + 8.0 * l * (1.0 + l) - rhs;
    crate::roots::bisect(g, 0.0, 1.0, 1e-14).ok_or_else(|| ProfileError::Numerical("no root in (0,1)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arclength_normalized() {
        let d = SphereProfileData::new(0.5, 0.02).unwrap();
        assert_eq!(d.arclength(PI), PI);
        assert!((d.arclength(PI) - d.x_table[PANELS]).abs() < 1e-14);
        assert!((d.u_of_r(d.arclength(1.234)) - 1.234).abs() < 1e-13);
    }

    #[test]
    fn q_forms_agree() {
        for &lam in &[-0.3, 0.0, 0.017, 0.4] {
            let d = SphereProfileData::new(0.5, lam).unwrap();
            for i in 1..100 {
                let u = PI * i as f64 / 100.0;
                let (a, b) = (d.q_closed(u), d.q_direct(u));
                assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300), "lam={lam} u={u} {a} {b}");
            }
        }
    }

    #[test]
    fn p_matches_numerical_derivative() {
        let d = SphereProfileData::new(0.5, 0.3).unwrap();
        let speed2 = |u: f64| d.speed(u).powi(2);
        for &u in &[0.3, 1.0, 2.0, 2.8] {
            let h = 1e-5;
            let dq = (d.q_closed(u + h) - d.q_closed(u - h)) / (2.0 * h);
            let ds = (speed2(u + h) - speed2(u - h)) / (2.0 * h);
            let p = dq * speed2(u) - 2.0 * d.q_closed(u) * ds;
            assert!((p / (2.0 * u).sin() - d.p_over_sin2u(u)).abs() < 1e-7);
        }
    }

    #[test]
    fn lambda0_value() {
        let l = lambda0_bound(0.5).unwrap();
        assert!((l - 0.0343).abs() < 1e-4);
    }
}
