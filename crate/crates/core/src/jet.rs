//! Truncated Taylor jets of order 3.
//!
//! A `Jet` stores `f(x0 + h) = c0 + c1 h + c2 h^2 + c3 h^3 + O(h^4)`.
//! Arithmetic on jets propagates exact derivatives through closed forms.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub const ZERO: Jet = Jet([0.0; 4]);

    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// The identity function at `x`.
    pub fn var(x: f64) -> Self {
        Jet([x, 1.0, 0.0, 0.0])
    }

    /// Build from derivative values `[f, f', f'', f''']`.
    pub fn from_derivs(d: [f64; 4]) -> Self {
        Jet([d[0], d[1], d[2] / 2.0, d[3] / 6.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// Derivative of the given order (0..=3).
    pub fn d(&self, order: usize) -> f64 {
        const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
        self.0[order] * FACT[order]
    }

    pub fn derivs(&self) -> [f64; 4] {
        [self.d(0), self.d(1), self.d(2), self.d(3)]
    }

    pub fn scale(self, s: f64) -> Self {
        Jet(self.0.map(|c| c * s))
    }

    /// Compose an outer function with derivatives `g` (at `self.value()`).
    pub fn compose(self, g: [f64; 4]) -> Self {
        let [_, c1, c2, c3] = self.0;
        Jet([
            g[0],
            g[1] * c1,
            g[1] * c2 + 0.5 * g[2] * c1 * c1,
            g[1] * c3 + g[2] * c1 * c2 + g[3] * c1 * c1 * c1 / 6.0,
        ])
    }

    pub fn recip(self) -> Self {
        Jet::constant(1.0) / self
    }

    pub fn sqrt(self) -> Self {
        let s = self.0[0].sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * self.0[0]), 0.375 / (s * self.0[0] * self.0[0])])
    }

    pub fn exp(self) -> Self {
        let e = self.0[0].exp();
        self.compose([e; 4])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn powi(self, n: i32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..n {
            out = out * self;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (a, b) = (self.0, o.0);
        Jet([
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
            a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0],
        ])
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let (a, b) = (self.0, o.0);
        let q0 = a[0] / b[0];
        let q1 = (a[1] - b[1] * q0) / b[0];
        let q2 = (a[2] - b[1] * q1 - b[2] * q0) / b[0];
        let q3 = (a[3] - b[1] * q2 - b[2] * q1 - b[3] * q0) / b[0];
        Jet([q0, q1, q2, q3])
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.0[0] += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.0[0] -= c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_function_derivatives() {
        // x / (1 + x^2) at x = 2
        let x = Jet::var(2.0);
        let m = x / (x * x + 1.0);
        let d = m.derivs();
        assert!((d[0] - 0.4).abs() < 1e-15);
        assert!((d[1] - (1.0 - 4.0) / 25.0).abs() < 1e-15);
        assert!((d[2] - (-2.0 * 2.0 * (3.0 - 4.0) / 125.0)).abs() < 1e-15);
    }

    #[test]
    fn transcendental_chain() {
        let x = 0.7;
        let j = (Jet::var(x) * 2.0).sin().exp();
        // d/dx e^{sin 2x} = 2 cos 2x e^{sin 2x}
        let e = (2.0 * x).sin().exp();
        assert!((j.d(1) - 2.0 * (2.0 * x).cos() * e).abs() < 1e-14);
        let fd = |h: f64| ((2.0 * (x + h)).sin().exp() - 2.0 * e + (2.0 * (x - h)).sin().exp()) / (h * h);
        assert!((j.d(2) - fd(1e-4)).abs() < 1e-6);
    }

    #[test]
    fn sqrt_third_derivative() {
        let j = Jet::var(4.0).sqrt();
        // x^{1/2}: third derivative 3/8 x^{-5/2}
        assert!((j.d(3) - 0.375 / 32.0).abs() < 1e-15);
    }
}
