//! Dormand–Prince 5(4) with continuous extension.
//!
//! The stepper is driven by the caller one accepted step at a time, so event
//! handling and state surgery (pole reflection) stay outside the integrator.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its interpolant.
#[derive(Clone, Debug)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rc: [[f64; N]; 4],
}

impl<const N: usize> DenseStep<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.y0[i]
                + s * (self.rc[0][i] + s1 * (self.rc[1][i] + s * (self.rc[2][i] + s1 * self.rc[3][i])));
        }
        out
    }

    pub fn eval_component(&self, i: usize, t: f64) -> f64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        self.y0[i] + s * (self.rc[0][i] + s1 * (self.rc[1][i] + s * (self.rc[2][i] + s1 * self.rc[3][i])))
    }
}

pub struct Dopri5<const N: usize> {
    t: f64,
    y: [f64; N],
    h: f64,
    k1: [f64; N],
    tol: Tolerances,
    pub evaluations: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F: Fn(f64, &[f64; N]) -> [f64; N]>(f: &F, t0: f64, y0: [f64; N], tol: Tolerances) -> Self {
        let k1 = f(t0, &y0);
        let mut s = Dopri5 { t: t0, y: y0, h: 0.0, k1, tol, evaluations: 1 };
        s.h = s.initial_step(f);
        s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Replace the state (e.g. after a reflection) and restart step control.
    pub fn reset<F: Fn(f64, &[f64; N]) -> [f64; N]>(&mut self, f: &F, t: f64, y: [f64; N]) {
        self.t = t;
        self.y = y;
        self.k1 = f(t, &y);
        self.evaluations += 1;
        self.h = self.initial_step(f);
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.tol.atol + self.tol.rtol * a.abs().max(b.abs())
    }

    fn initial_step<F: Fn(f64, &[f64; N]) -> [f64; N]>(&mut self, f: &F) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.scale(self.y[i], self.y[i]);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.k1[i] / sc).powi(2);
        }
        d0 = (d0 / N as f64).sqrt();
        d1 = (d1 / N as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&self.y, h0, &[(1.0, &self.k1)]);
        let k2 = f(self.t + h0, &y1);
        self.evaluations += 1;
        let mut d2 = 0.0;
        for i in 0..N {
            let sc = self.scale(self.y[i], self.y[i]);
            d2 += ((k2[i] - self.k1[i]) / sc).powi(2);
        }
        d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.tol.h_max)
    }

    /// Advance one accepted step, never past `t_limit`.
    pub fn step<F: Fn(f64, &[f64; N]) -> [f64; N]>(&mut self, f: &F, t_limit: f64) -> Result<DenseStep<N>, OdeError> {
        loop {
            let mut h = self.h.min(self.tol.h_max);
            let mut last = false;
            if self.t + h >= t_limit {
                h = t_limit - self.t;
                last = true;
            }
            if h.abs() <= 1e-14 * self.t.abs().max(1.0) && !last {
                return Err(OdeError::StepUnderflow { t: self.t });
            }
            let (t, y, k1) = (self.t, &self.y, &self.k1);
            let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
            let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + h, &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y1 = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y1);
            self.evaluations += 6;

            let mut err = 0.0;
            let mut finite = true;
            for i in 0..N {
                if !y1[i].is_finite() {
                    finite = false;
                }
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                err += (e / self.scale(y[i], y1[i])).powi(2);
            }
            err = (err / N as f64).sqrt();
            if !finite || !err.is_finite() {
                self.h = h * 0.1;
                if self.h.abs() < 1e-14 * self.t.abs().max(1.0) {
                    return Err(OdeError::NonFinite { t: self.t });
                }
                continue;
            }
            if err <= 1.0 {
                let mut rc = [[0.0; N]; 4];
                for i in 0..N {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rc[0][i] = ydiff;
                    rc[1][i] = bspl;
                    rc[2][i] = ydiff - h * k7[i] - bspl;
                    rc[3][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                let step = DenseStep { t0: t, h, y0: *y, y1, rc };
                let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
                if !last {
                    self.h = h * fac;
                }
                self.t = if last { t_limit } else { t + h };
                self.y = y1;
                self.k1 = k7;
                return Ok(step);
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            self.h = h * fac;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(t: f64) -> Tolerances {
        Tolerances { rtol: t, atol: t, h_max: 1.0 }
    }

    #[test]
    fn harmonic_oscillator_accuracy() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Dopri5::new(&f, 0.0, [0.0, 1.0], tol(1e-10));
        while s.t() < 10.0 {
            s.step(&f, 10.0).unwrap();
        }
        assert!((s.y()[0] - 10f64.sin()).abs() < 1e-8);
        assert!((s.y()[1] - 10f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn dense_output_between_nodes() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let mut s = Dopri5::new(&f, 0.0, [1.0], tol(1e-11));
        let mut worst: f64 = 0.0;
        while s.t() < 2.0 {
            let st = s.step(&f, 2.0).unwrap();
            for j in 1..8 {
                let t = st.t0 + st.h * j as f64 / 8.0;
                worst = worst.max((st.eval(t)[0] - t.exp()).abs() / t.exp());
            }
        }
        assert!(worst < 1e-9, "dense error {worst}");
    }
}
