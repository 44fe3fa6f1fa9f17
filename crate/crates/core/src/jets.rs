//! Order-2 truncated Taylor arithmetic.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! with respect to the radius. Every radial function in this crate is
//! evaluated as a jet, so `f'` and `f''` come out exact (up to rounding)
//! without finite differencing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `(f, f', f'')` at a single radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Failure of a jet operation. Carries no radius; callers attach it.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    ZeroDivision,
    #[error("{function} is undefined at argument {argument}")]
    OutOfDomain { function: Elementary, argument: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary functions composable with a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    /// `x^k`. Integer `k` is evaluated by repeated multiplication.
    Pow(f64),
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elementary::Sin => f.write_str("sin"),
            Elementary::Cos => f.write_str("cos"),
            Elementary::Sinh => f.write_str("sinh"),
            Elementary::Cosh => f.write_str("cosh"),
            Elementary::Exp => f.write_str("exp"),
            Elementary::Log => f.write_str("log"),
            Elementary::Pow(k) => write!(f, "pow({k})"),
        }
    }
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    /// The jet of the identity map at `r`: `(r, 1, 0)`.
    pub const fn variable(r: f64) -> Self {
        Self::new(r, 1.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(c * self.value, c * self.d1, c * self.d2)
    }

    /// Composes a scalar function with this jet given `g(a), g'(a), g''(a)`.
    pub fn compose(self, g: f64, dg: f64, ddg: f64) -> Self {
        Self::new(g, dg * self.d1, ddg * self.d1 * self.d1 + dg * self.d2)
    }

    pub fn recip(self) -> Result<Self, JetError> {
        if self.value == 0.0 {
            return Err(JetError::ZeroDivision);
        }
        let inv = 1.0 / self.value;
        Ok(self.compose(inv, -inv * inv, 2.0 * inv * inv * inv))
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, JetError> {
        if rhs.value == 0.0 {
            return Err(JetError::ZeroDivision);
        }
        let q = self.value / rhs.value;
        let q1 = (self.d1 - q * rhs.d1) / rhs.value;
        let q2 = (self.d2 - 2.0 * q1 * rhs.d1 - q * rhs.d2) / rhs.value;
        Ok(Self::new(q, q1, q2))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Result<Self, JetError> {
        if !(self.value > 0.0) {
            return Err(JetError::OutOfDomain {
                function: Elementary::Log,
                argument: self.value,
            });
        }
        let inv = 1.0 / self.value;
        Ok(self.compose(self.value.ln(), inv, -inv * inv))
    }

    /// Integer power by repeated multiplication; exact for polynomials.
    pub fn powi(self, k: i32) -> Result<Self, JetError> {
        let base = if k < 0 { self.recip()? } else { self };
        let mut acc = Self::constant(1.0);
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    /// Real power through `exp(k log x)`; requires a positive value.
    pub fn powf(self, k: f64) -> Result<Self, JetError> {
        if !(self.value > 0.0) {
            return Err(JetError::OutOfDomain {
                function: Elementary::Pow(k),
                argument: self.value,
            });
        }
        Ok(self.ln()?.scale(k).exp())
    }

    /// `sin(x)/x`, with the removable singularity at zero resolved.
    pub fn sinc(self) -> Self {
        let (g, dg, ddg) = sinc_scalar(self.value, -1.0);
        self.compose(g, dg, ddg)
    }

    /// `sinh(x)/x`, with the removable singularity at zero resolved.
    pub fn sinhc(self) -> Self {
        let (g, dg, ddg) = sinc_scalar(self.value, 1.0);
        self.compose(g, dg, ddg)
    }
}

// phi(x) = sin(x)/x for sign = -1, sinh(x)/x for sign = +1, with phi' and phi''.
// Both satisfy x phi'' + 2 phi' = sign * x phi.
fn sinc_scalar(x: f64, sign: f64) -> (f64, f64, f64) {
    if x.abs() < 0.5 {
        // phi = sum_k c_k x^{2k}, c_k = sign^k / (2k+1)!
        let x2 = x * x;
        let (mut g, mut dg, mut ddg) = (1.0, 0.0, 0.0);
        let mut coeff = 1.0;
        let mut pow2 = 1.0; // x^{2k-2}
        for k in 1..12u32 {
            let m = f64::from(2 * k);
            coeff *= sign / (m * (m + 1.0));
            ddg += coeff * m * (m - 1.0) * pow2;
            dg += coeff * m * pow2 * x;
            g += coeff * pow2 * x2;
            pow2 *= x2;
        }
        (g, dg, ddg)
    } else {
        let (s, c) = if sign < 0.0 {
            x.sin_cos()
        } else {
            (x.sinh(), x.cosh())
        };
        let g = s / x;
        let dg = (c - g) / x;
        let ddg = sign * g - 2.0 * dg / x;
        (g, dg, ddg)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        )
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: f64) -> Jet2 {
        Jet2::new(self.value + rhs, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

/// Pointwise combination of two jets by the Leibniz and quotient rules.
pub fn jet_combine(op: BinaryOp, a: Jet2, b: Jet2) -> Result<Jet2, JetError> {
    Ok(match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => a.try_div(b)?,
    })
}

/// Chain rule for `function ∘ a`.
pub fn jet_elementary(function: Elementary, a: Jet2) -> Result<Jet2, JetError> {
    Ok(match function {
        Elementary::Sin => a.sin(),
        Elementary::Cos => a.cos(),
        Elementary::Sinh => a.sinh(),
        Elementary::Cosh => a.cosh(),
        Elementary::Exp => a.exp(),
        Elementary::Log => a.ln()?,
        Elementary::Pow(k) => {
            if k.fract() == 0.0 && k.abs() <= f64::from(i32::MAX) {
                a.powi(k as i32)?
            } else {
                a.powf(k)?
            }
        }
    })
}
