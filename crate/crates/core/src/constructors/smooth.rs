//! Smooth step and plateau functions built from `exp(-1/x)`.

use crate::jet::Jet;
use crate::quadrature::gauss_legendre;
use std::sync::OnceLock;

/// `exp(-1/y)` for y > 0, else 0, composed onto a jet.
fn flat(y: Jet) -> Jet {
    let v = y.value();
    // exp(-700) is already below the smallest normal number
    if v <= 1.0 / 700.0 {
        return Jet::ZERO;
    }
    let i = 1.0 / v;
    let g = (-i).exp();
    let i2 = i * i;
    y.compose([g, g * i2, g * (i2 * i2 - 2.0 * i2 * i), g * (i2 * i2 * i2 - 6.0 * i2 * i2 * i + 6.0 * i2 * i2)])
}

/// Smooth step: 0 for y ≤ 0, 1 for y ≥ 1.
pub fn step(y: Jet) -> Jet {
    let v = y.value();
    if v <= 0.0 {
        return Jet::ZERO;
    }
    if v >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = flat(y);
    let b = flat(Jet::constant(1.0) - y);
    a / (a + b)
}

pub fn step_value(y: f64) -> f64 {
    step(Jet::constant(y)).value()
}

/// Plateau: support in (-1, 1), identically 1 on [-1/2, 1/2].
pub fn plateau(x: Jet) -> Jet {
    step((x + 1.0) * 2.0) * step((Jet::constant(1.0) - x) * 2.0)
}

fn step_integral_core(y: f64) -> f64 {
    // y in [0, 1/2]
    let (nodes, weights) = gauss_legendre(20);
    let panels = 8;
    let h = y / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (t, w) in nodes.iter().zip(weights) {
            acc += w * step_value(a + 0.5 * h * (t + 1.0));
        }
    }
    acc * 0.5 * h
}

/// `S(y) = ∫_0^y step` as a jet (derivatives come from the step itself).
pub fn step_integral(y: Jet) -> Jet {
    let v = y.value();
    let s0 = if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        v - 0.5
    } else if v <= 0.5 {
        step_integral_core(v)
    } else {
        v - 0.5 + step_integral_core(1.0 - v)
    };
    let s = step(Jet::var(v));
    y.compose([s0, s.d(0), s.d(1), s.d(2)])
}

/// `sup (3 + 3|φ'| + |φ''|)` over a dense grid of [-1, 1].
pub fn plateau_bound() -> f64 {
    static BOUND: OnceLock<f64> = OnceLock::new();
    *BOUND.get_or_init(|| {
        let n = 200_000;
        (0..=n)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / n as f64;
                let p = plateau(Jet::var(x));
                3.0 + 3.0 * p.d(1).abs() + p.d(2).abs()
            })
            .fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_limits_and_symmetry() {
        assert_eq!(step_value(-0.1), 0.0);
        assert_eq!(step_value(1.2), 1.0);
        for &y in &[0.1, 0.3, 0.5, 0.77] {
            assert!((step_value(y) + step_value(1.0 - y) - 1.0).abs() < 1e-15);
        }
        assert!((step_value(0.5) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn step_integral_matches_simpson() {
        for &y in &[0.2, 0.5, 0.8, 1.0] {
            let n = 200_000;
            let h = y / n as f64;
            let mut acc = step_value(0.0) + step_value(y);
            for i in 1..n {
                acc += step_value(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let simpson = acc * h / 3.0;
            let got = step_integral(Jet::var(y)).value();
            assert!((got - simpson).abs() < 1e-13, "y={y} got={got} ref={simpson}");
        }
    }

    #[test]
    fn plateau_shape() {
        assert_eq!(plateau(Jet::var(0.3)).value(), 1.0);
        assert_eq!(plateau(Jet::var(-0.5)).d(1), 0.0);
        assert_eq!(plateau(Jet::var(1.0)).value(), 0.0);
        assert_eq!(plateau(Jet::var(-1.0)).value(), 0.0);
        let p = plateau(Jet::var(0.75));
        assert!(p.value() > 0.0 && p.value() < 1.0 && p.d(1) < 0.0);
    }

    #[test]
    fn step_derivatives_match_differences() {
        let y = 0.37;
        let j = step(Jet::var(y));
        let h = 1e-4;
        let fd1 = (step_value(y + h) - step_value(y - h)) / (2.0 * h);
        let fd2 = (step_value(y + h) - 2.0 * step_value(y) + step_value(y - h)) / (h * h);
        let fd3 = (step(Jet::var(y + h)).d(2) - step(Jet::var(y - h)).d(2)) / (2.0 * h);
        assert!((j.d(1) - fd1).abs() < 1e-7);
        assert!((j.d(2) - fd2).abs() < 1e-5);
        assert!((j.d(3) - fd3).abs() < 1e-5 * j.d(3).abs().max(1.0));
    }
}
