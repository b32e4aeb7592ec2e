//! Forward-mode automatic differentiation with complex dual numbers.
//!
//! A [`Dual`] carries a complex value together with up to [`MAX_DIRS`]
//! complex directional derivatives. Seeding direction `j` with tangent 1
//! and evaluating an expression yields the exact partial derivative along
//! coordinate `j` for every primitive in the closed set used by
//! [`crate::expr::Expr`]. All primitives are holomorphic in their
//! arguments, so the usual one-dimensional chain rule propagates complex
//! tangents correctly when the underlying coordinates are real.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Maximum number of simultaneous derivative directions.
///
/// The ambient dimension is capped at 4 (cylindrical) and 3 (groups), so
/// a full gradient always fits in one evaluation pass.
pub const MAX_DIRS: usize = 4;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex dual scalar: value plus a fixed-width lane of tangents.
///
/// Arithmetic obeys the Leibniz rule lane by lane; unused lanes stay zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub val: Complex64,
    pub dot: [Complex64; MAX_DIRS],
}

impl Dual {
    /// A constant: zero tangents in every direction.
    #[inline]
    pub fn constant(val: Complex64) -> Self {
        Dual {
            val,
            dot: [C_ZERO; MAX_DIRS],
        }
    }

    #[inline]
    pub fn constant_re(val: f64) -> Self {
        Self::constant(Complex64::new(val, 0.0))
    }

    #[inline]
    pub fn zero() -> Self {
        Self::constant(C_ZERO)
    }

    /// A real coordinate seeded with unit tangent in direction `dir`.
    #[inline]
    pub fn seeded(val: f64, dir: usize) -> Self {
        let mut d = Self::constant_re(val);
        d.dot[dir] = Complex64::new(1.0, 0.0);
        d
    }

    /// Maps value and tangents through a scalar function with known
    /// derivative: `g(f(z))` with `g' = dval`.
    #[inline]
    fn lift(self, val: Complex64, dval: Complex64) -> Self {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = dval * self.dot[i];
        }
        Dual { val, dot }
    }

    #[inline]
    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.lift(e, e)
    }

    #[inline]
    pub fn ln(self) -> Self {
        self.lift(self.val.ln(), self.val.finv())
    }

    #[inline]
    pub fn sin(self) -> Self {
        self.lift(self.val.sin(), self.val.cos())
    }

    #[inline]
    pub fn cos(self) -> Self {
        self.lift(self.val.cos(), -self.val.sin())
    }

    /// Principal-branch power with a real exponent. Intended for
    /// positive-real-valued subexpressions (radial gauges, weights).
    #[inline]
    pub fn powf(self, a: f64) -> Self {
        if a == 0.0 {
            return Self::constant_re(1.0);
        }
        if a == 1.0 {
            return self;
        }
        let v = self.val.powf(a);
        let dv = self.val.powf(a - 1.0) * a;
        self.lift(v, dv)
    }

    /// Integer power, valid for any complex base.
    #[inline]
    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant_re(1.0),
            1 => self,
            _ => {
                let v = self.val.powi(n);
                let dv = self.val.powi(n - 1) * (n as f64);
                self.lift(v, dv)
            }
        }
    }

    #[inline]
    pub fn scale(self, a: f64) -> Self {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = self.dot[i] * a;
        }
        Dual {
            val: self.val * a,
            dot,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, rhs: Dual) -> Dual {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = self.dot[i] + rhs.dot[i];
        }
        Dual {
            val: self.val + rhs.val,
            dot,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, rhs: Dual) -> Dual {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = self.dot[i] - rhs.dot[i];
        }
        Dual {
            val: self.val - rhs.val,
            dot,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, rhs: Dual) -> Dual {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = self.val * rhs.dot[i] + rhs.val * self.dot[i];
        }
        Dual {
            val: self.val * rhs.val,
            dot,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, rhs: Dual) -> Dual {
        let inv = rhs.val.finv();
        let val = self.val * inv;
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = (self.dot[i] - val * rhs.dot[i]) * inv;
        }
        Dual { val, dot }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        let mut dot = [C_ZERO; MAX_DIRS];
        for i in 0..MAX_DIRS {
            dot[i] = -self.dot[i];
        }
        Dual {
            val: -self.val,
            dot,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn leibniz_rule() {
        let a = Dual {
            val: Complex64::new(2.0, 1.0),
            dot: [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, -0.25),
                C_ZERO,
                C_ZERO,
            ],
        };
        let b = Dual {
            val: Complex64::new(-1.0, 3.0),
            dot: [
                Complex64::new(0.0, 1.0),
                Complex64::new(2.0, 0.0),
                C_ZERO,
                C_ZERO,
            ],
        };
        let prod = a * b;
        for i in 0..2 {
            let expect = a.val * b.dot[i] + b.val * a.dot[i];
            assert_relative_eq!(prod.dot[i].re, expect.re, max_relative = 1e-15);
            assert_relative_eq!(prod.dot[i].im, expect.im, max_relative = 1e-15);
        }
    }

    #[test]
    fn power_rule() {
        // d/dx x^2 at x = 3
        let x = Dual::seeded(3.0, 0);
        let y = x.powi(2);
        assert_relative_eq!(y.val.re, 9.0);
        assert_relative_eq!(y.dot[0].re, 6.0);
    }

    #[test]
    fn complex_chain_rule() {
        // d/dx exp(i x) at x = 0 is i
        let x = Dual::seeded(0.0, 0);
        let ix = x * Dual::constant(Complex64::new(0.0, 1.0));
        let y = ix.exp();
        assert_relative_eq!(y.dot[0].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(y.dot[0].im, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn quotient_and_log() {
        let x = Dual::seeded(2.0, 0);
        let y = Dual::constant_re(1.0) / x; // 1/x, derivative -1/x^2
        assert_relative_eq!(y.dot[0].re, -0.25, max_relative = 1e-15);
        let l = x.ln(); // derivative 1/x
        assert_relative_eq!(l.dot[0].re, 0.5, max_relative = 1e-15);
    }
}
