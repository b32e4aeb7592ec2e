//! Closed expression language for admissible test functions.
//!
//! Test functions are composed expressions over a fixed primitive set
//! (arithmetic, powers, exp/log/sin/cos, smooth step, annular bump), not
//! arbitrary callables, so differentiability is guaranteed by construction
//! and every expression can be evaluated on [`Dual`] scalars for exact
//! first partials.
//!
//! The two piecewise primitives ([`Expr::Bump`], [`Expr::SmoothStep`])
//! return an exact zero (value and tangents) outside their window, which is
//! what certifies compact support for every generated test function.

use crate::autodiff::{Dual, MAX_DIRS};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Values of `exp(-1/t)` below this threshold of `1/t` are treated as an
/// exact zero so flat tails never produce `0 * inf` tangents.
const FLAT_CUTOFF: f64 = 700.0;

#[derive(Clone, Debug)]
pub enum Expr {
    /// Coordinate `x_i`.
    Coord(usize),
    Const(Complex64),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    /// Principal power with a real exponent; used on positive-real-valued
    /// subexpressions (radial gauges and weights).
    Powf(Arc<Expr>, f64),
    /// Integer power, valid for any complex base.
    Powi(Arc<Expr>, i32),
    Exp(Arc<Expr>),
    Log(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
    /// `exp(-1/(1-s^2))` in the variable `s` mapping `[lo, hi]` onto
    /// `[-1, 1]`; identically zero outside `(lo, hi)`.
    Bump { arg: Arc<Expr>, lo: f64, hi: f64 },
    /// Exp-based smooth step: 0 below `lo`, 1 above `hi`.
    SmoothStep { arg: Arc<Expr>, lo: f64, hi: f64 },
}

/// Standard exp-based smooth step on `[0, 1]`.
pub(crate) fn smooth_step01(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / v).exp();
        let b = (-1.0 / (1.0 - v)).exp();
        a / (a + b)
    }
}

/// Derivative of [`smooth_step01`].
pub(crate) fn smooth_step01_deriv(v: f64) -> f64 {
    if v <= 0.0 || v >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / v).exp();
        let b = (-1.0 / (1.0 - v)).exp();
        let s = a + b;
        // (a' b - a b') / s^2 with a' = a/v^2, b' = -b/(1-v)^2
        a * b * (1.0 / (v * v) + 1.0 / ((1.0 - v) * (1.0 - v))) / (s * s)
    }
}

/// `exp(-1/(1-s^2))` profile and its s-derivative; exact zero outside.
pub(crate) fn bump_profile(s: f64) -> (f64, f64) {
    let t = 1.0 - s * s;
    if t <= 0.0 || 1.0 / t > FLAT_CUTOFF {
        return (0.0, 0.0);
    }
    let v = (-1.0 / t).exp();
    // d/ds exp(-1/t) = exp(-1/t) * (-2s) / t^2
    (v, v * (-2.0 * s) / (t * t))
}

impl Expr {
    pub fn coord(i: usize) -> Expr {
        Expr::Coord(i)
    }

    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(c)
    }

    pub fn re_const(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    /// The imaginary unit.
    pub fn i() -> Expr {
        Expr::Const(Complex64::new(0.0, 1.0))
    }

    /// `x_0^2 + ... + x_{k-1}^2`.
    pub fn sumsq(k: usize) -> Expr {
        let mut acc = Expr::coord(0).powi(2);
        for j in 1..k {
            acc = acc + Expr::coord(j).powi(2);
        }
        acc
    }

    /// Euclidean norm of the first `k` coordinates.
    pub fn xprime_norm(k: usize) -> Expr {
        Expr::sumsq(k).powf(0.5)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Arc::new(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Log(Arc::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Arc::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Arc::new(self))
    }

    pub fn powf(self, a: f64) -> Expr {
        Expr::Powf(Arc::new(self), a)
    }

    pub fn powi(self, n: i32) -> Expr {
        Expr::Powi(Arc::new(self), n)
    }

    /// Annular bump in `self`, supported on `(lo, hi)`.
    pub fn bump(self, lo: f64, hi: f64) -> Expr {
        Expr::Bump {
            arg: Arc::new(self),
            lo,
            hi,
        }
    }

    /// Rising smooth step: 0 below `lo`, 1 above `hi`.
    pub fn step_up(self, lo: f64, hi: f64) -> Expr {
        Expr::SmoothStep {
            arg: Arc::new(self),
            lo,
            hi,
        }
    }

    /// Falling smooth step: 1 below `lo`, 0 above `hi`.
    pub fn step_down(self, lo: f64, hi: f64) -> Expr {
        Expr::SmoothStep {
            arg: Arc::new(-self),
            lo: -hi,
            hi: -lo,
        }
    }

    /// Plain evaluation at a real point.
    pub fn eval_value(&self, x: &[f64]) -> Complex64 {
        match self {
            Expr::Coord(i) => Complex64::new(x[*i], 0.0),
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval_value(x) + b.eval_value(x),
            Expr::Sub(a, b) => a.eval_value(x) - b.eval_value(x),
            Expr::Mul(a, b) => a.eval_value(x) * b.eval_value(x),
            Expr::Div(a, b) => a.eval_value(x) / b.eval_value(x),
            Expr::Neg(a) => -a.eval_value(x),
            Expr::Powf(a, e) => {
                if *e == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else if *e == 1.0 {
                    a.eval_value(x)
                } else {
                    a.eval_value(x).powf(*e)
                }
            }
            Expr::Powi(a, n) => a.eval_value(x).powi(*n),
            Expr::Exp(a) => a.eval_value(x).exp(),
            Expr::Log(a) => a.eval_value(x).ln(),
            Expr::Sin(a) => a.eval_value(x).sin(),
            Expr::Cos(a) => a.eval_value(x).cos(),
            Expr::Bump { arg, lo, hi } => {
                let v = arg.eval_value(x).re;
                let s = (2.0 * v - lo - hi) / (hi - lo);
                Complex64::new(bump_profile(s).0, 0.0)
            }
            Expr::SmoothStep { arg, lo, hi } => {
                let v = arg.eval_value(x).re;
                Complex64::new(smooth_step01((v - lo) / (hi - lo)), 0.0)
            }
        }
    }

    /// Dual evaluation with caller-provided coordinates (which may carry
    /// arbitrary tangent seedings, e.g. along a dilation flow).
    pub fn eval_dual(&self, x: &[Dual]) -> Dual {
        match self {
            Expr::Coord(i) => x[*i],
            Expr::Const(c) => Dual::constant(*c),
            Expr::Add(a, b) => a.eval_dual(x) + b.eval_dual(x),
            Expr::Sub(a, b) => a.eval_dual(x) - b.eval_dual(x),
            Expr::Mul(a, b) => a.eval_dual(x) * b.eval_dual(x),
            Expr::Div(a, b) => a.eval_dual(x) / b.eval_dual(x),
            Expr::Neg(a) => -a.eval_dual(x),
            Expr::Powf(a, e) => a.eval_dual(x).powf(*e),
            Expr::Powi(a, n) => a.eval_dual(x).powi(*n),
            Expr::Exp(a) => a.eval_dual(x).exp(),
            Expr::Log(a) => a.eval_dual(x).ln(),
            Expr::Sin(a) => a.eval_dual(x).sin(),
            Expr::Cos(a) => a.eval_dual(x).cos(),
            Expr::Bump { arg, lo, hi } => {
                let inner = arg.eval_dual(x);
                let scale = 2.0 / (hi - lo);
                let s = (2.0 * inner.val.re - lo - hi) / (hi - lo);
                let (v, dv_ds) = bump_profile(s);
                if v == 0.0 && dv_ds == 0.0 {
                    return Dual::zero();
                }
                let mut out = Dual::constant_re(v);
                for i in 0..MAX_DIRS {
                    out.dot[i] = inner.dot[i] * (dv_ds * scale);
                }
                out
            }
            Expr::SmoothStep { arg, lo, hi } => {
                let inner = arg.eval_dual(x);
                let scale = 1.0 / (hi - lo);
                let v = (inner.val.re - lo) * scale;
                if v <= 0.0 {
                    return Dual::zero();
                }
                if v >= 1.0 {
                    return Dual::constant_re(1.0);
                }
                let s = smooth_step01(v);
                let ds = smooth_step01_deriv(v) * scale;
                let mut out = Dual::constant_re(s);
                for i in 0..MAX_DIRS {
                    out.dot[i] = inner.dot[i] * ds;
                }
                out
            }
        }
    }

    /// Value and first `ndirs` partial derivatives at a real point.
    pub fn value_and_grad(&self, x: &[f64], ndirs: usize) -> (Complex64, [Complex64; MAX_DIRS]) {
        debug_assert!(ndirs <= MAX_DIRS && ndirs <= x.len());
        let mut coords = [Dual::zero(); MAX_DIRS];
        for (i, &xi) in x.iter().enumerate() {
            coords[i] = if i < ndirs {
                Dual::seeded(xi, i)
            } else {
                Dual::constant_re(xi)
            };
        }
        let out = self.eval_dual(&coords[..x.len()]);
        (out.val, out.dot)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Arc::new(self), Arc::new(rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Arc::new(self), Arc::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Arc::new(self), Arc::new(rhs))
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Arc::new(self), Arc::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Arc::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bump_vanishes_outside_window() {
        let b = Expr::coord(0).bump(1.0, 2.0);
        assert_eq!(b.eval_value(&[0.5]).re, 0.0);
        assert_eq!(b.eval_value(&[1.0]).re, 0.0);
        assert_eq!(b.eval_value(&[2.3]).re, 0.0);
        assert!(b.eval_value(&[1.5]).re > 0.0);
        // tangents vanish exactly outside too
        let (_, g) = b.value_and_grad(&[2.5], 1);
        assert_eq!(g[0].re, 0.0);
    }

    #[test]
    fn smooth_step_saturates() {
        let s = Expr::coord(0).step_up(0.0, 1.0);
        assert_eq!(s.eval_value(&[-0.1]).re, 0.0);
        assert_eq!(s.eval_value(&[1.1]).re, 1.0);
        assert_relative_eq!(s.eval_value(&[0.5]).re, 0.5, max_relative = 1e-12);
        let down = Expr::coord(0).step_down(0.0, 1.0);
        assert_eq!(down.eval_value(&[-0.1]).re, 1.0);
        assert_eq!(down.eval_value(&[1.1]).re, 0.0);
    }

    #[test]
    fn grad_matches_finite_difference_on_bump() {
        let f = Expr::xprime_norm(2).bump(1.0, 2.0);
        let x = [1.2, 0.6];
        let (_, g) = f.value_and_grad(&x, 2);
        let h = 1e-6;
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (f.eval_value(&xp).re - f.eval_value(&xm).re) / (2.0 * h);
            assert_relative_eq!(g[j].re, fd, max_relative = 1e-8);
        }
    }
}
