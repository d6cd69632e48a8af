//! Configurable-precision real scalar backed by MPFR.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Mantissa width in bits. Always at least [`Precision::MIN`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN: Precision = Precision(64);
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN.0 {
            return Err(Error::PrecisionTooLow {
                bits,
                min: Self::MIN.0,
            });
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Number of decimal digits the mantissa resolves, `floor(bits * log10(2))`.
    pub fn decimal_digits(self) -> u32 {
        (f64::from(self.0) * std::f64::consts::LOG10_2).floor() as u32
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// A finite real number carrying its own precision.
///
/// Binary operations round to the larger of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn zero(prec: Precision) -> Self {
        Real(Float::with_val(prec.0, 0))
    }

    pub fn one(prec: Precision) -> Self {
        Real(Float::with_val(prec.0, 1))
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Real(Float::with_val(prec.0, v))
    }

    pub fn from_f64(v: f64, prec: Precision) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite(v.to_string()));
        }
        Ok(Real(Float::with_val(prec.0, v)))
    }

    /// Parses a decimal string such as `"-1.25e-3"` directly at `prec`, so no
    /// digits are lost to an intermediate binary float.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse {
            input: s.to_string(),
        })?;
        let v = Float::with_val(prec.0, parsed);
        if !v.is_finite() {
            return Err(Error::NonFinite(s.to_string()));
        }
        Ok(Real(v))
    }

    pub fn pi(prec: Precision) -> Self {
        Real(Float::with_val(prec.0, Constant::Pi))
    }

    /// Wraps a raw MPFR value, rejecting NaN and infinities.
    pub fn try_from_float(v: Float) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{v}")));
        }
        if v.prec() < Precision::MIN.0 {
            return Err(Error::PrecisionTooLow {
                bits: v.prec(),
                min: Precision::MIN.0,
            });
        }
        Ok(Real(v))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> Precision {
        Precision(self.0.prec())
    }

    /// Rounds (or widens) to a new precision.
    pub fn to_precision(&self, prec: Precision) -> Self {
        Real(Float::with_val(prec.0, &self.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Sign relative to zero. Non-finite values (only reachable through
    /// division by zero) compare as `Equal`.
    pub fn sign(&self) -> Ordering {
        self.0.cmp0().unwrap_or(Ordering::Equal)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }

    pub fn sqrt(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }

    pub fn exp(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.ln_ref()))
    }

    pub fn log10(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.log10_ref()))
    }

    pub fn recip(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.recip_ref()))
    }

    pub fn powi(&self, n: i32) -> Self {
        use rug::ops::Pow;
        Real(Float::with_val(self.0.prec(), (&self.0).pow(n)))
    }

    pub fn mul_int(&self, k: i32) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 * k))
    }

    pub fn div_int(&self, k: i32) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 / k))
    }

    /// `self += a * b` with a single rounding.
    pub fn add_mul_assign(&mut self, a: &Real, b: &Real) {
        self.0 += &a.0 * &b.0;
    }

    pub fn max<'a>(&'a self, other: &'a Real) -> &'a Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        positional(&format!("{:.*}", digits.max(1), self.0))
    }

    /// Base-2 exponent `e` such that `|self| = f * 2^e` with `0.5 <= f < 1`.
    /// `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }
}

/// Rewrites `d.ddde-N` as `0.000ddd` when the exponent is modest, so values
/// such as 0.42 do not come out as `4.2e-1`.
fn positional(sci: &str) -> String {
    let Some((mantissa, exp)) = sci.split_once('e') else {
        return sci.to_string();
    };
    let Ok(exp) = exp.parse::<i32>() else {
        return sci.to_string();
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let n = digits.len() as i32;
    if exp < -6 || exp >= n {
        return sci.to_string();
    }
    if exp < 0 {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let (int, frac) = digits.split_at((exp + 1) as usize);
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

fn widest(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real(Float::with_val(widest(&self.0, &rhs.0), &self.0 $op &rhs.0))
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

macro_rules! assignop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Real> for Real {
            fn $method(&mut self, rhs: &Real) {
                if rhs.0.prec() > self.0.prec() {
                    self.0.set_prec(rhs.0.prec());
                }
                self.0 $op &rhs.0;
            }
        }
        impl $trait<Real> for Real {
            fn $method(&mut self, rhs: Real) {
                *self $op &rhs;
            }
        }
    };
}

assignop!(AddAssign, add_assign, +=);
assignop!(SubAssign, sub_assign, -=);
assignop!(MulAssign, mul_assign, *=);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| self.prec().decimal_digits() as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(25))
    }
}
