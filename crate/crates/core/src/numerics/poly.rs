//! Dense univariate polynomials over [`Real`].
//!
//! Coefficients are stored in ascending powers of `x`. The canonical zero
//! polynomial has no stored coefficients and `degree() == None`; every other
//! polynomial has a nonzero leading coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numerics::{Precision, Real};

#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Real>,
    prec: Precision,
}

impl Poly {
    pub fn zero(prec: Precision) -> Self {
        Poly {
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(c: Real) -> Self {
        let prec = c.prec();
        Poly::from_coeffs(vec![c], prec)
    }

    /// `c * x^k`
    pub fn monomial(c: Real, k: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![Real::zero(prec); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs, prec)
    }

    /// Builds a polynomial from ascending coefficients. `prec` is a floor:
    /// the result carries the widest of `prec` and the coefficient precisions.
    pub fn from_coeffs(coeffs: Vec<Real>, prec: Precision) -> Self {
        let prec = coeffs.iter().map(Real::prec).fold(prec, Precision::max);
        let mut p = Poly { coeffs, prec };
        p.trim();
        p
    }

    /// Parses ascending decimal coefficients.
    pub fn parse<S: AsRef<str>>(coeffs: &[S], prec: Precision) -> Result<Self> {
        let parsed = coeffs
            .iter()
            .map(|s| Real::parse(s.as_ref(), prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(parsed, prec))
    }

    /// Convenience for exactly representable coefficients (small integers,
    /// dyadic fractions) used in fixtures and presets.
    pub fn from_f64s(coeffs: &[f64], prec: Precision) -> Result<Self> {
        let parsed = coeffs
            .iter()
            .map(|&c| Real::from_f64(c, prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(parsed, prec))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Real::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Real> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Real {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Real::zero(self.prec))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&Real> {
        self.coeffs.last()
    }

    /// Value at the origin: the stored constant term, no arithmetic.
    pub fn eval_at_zero(&self) -> Real {
        self.coeff(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Real) -> Real {
        let prec = self.prec.max(x.prec());
        let mut acc = Real::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let prec = self.prec.max(other.prec);
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs, prec)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, usize::MAX)
    }

    /// Product keeping only the coefficients of `x^0 .. x^(max_len - 1)`.
    pub fn mul_truncated(&self, other: &Poly, max_len: usize) -> Poly {
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() || max_len == 0 {
            return Poly::zero(prec);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_len);
        let mut out = vec![Real::zero(prec); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j].add_mul_assign(a, b);
                }
            }
        }
        Poly::from_coeffs(out, prec)
    }

    /// Formal derivative.
    pub fn diff(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_int(k as i32))
            .collect();
        Poly::from_coeffs(coeffs, self.prec)
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: &Real) -> Poly {
        let prec = self.prec.max(c.prec());
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect(), prec)
    }

    /// Divides every coefficient by a strictly positive factor, preserving
    /// all signs. Used by overflow renormalization.
    pub fn rescale_down(&self, factor: &Real) -> Result<Poly> {
        if !factor.is_positive() {
            return Err(Error::NonPositiveScale(factor.to_decimal(20)));
        }
        let prec = self.prec.max(factor.prec());
        Ok(Poly::from_coeffs(
            self.coeffs.iter().map(|a| a / factor).collect(),
            prec,
        ))
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&mut self, max_degree: usize) {
        self.coeffs.truncate(max_degree + 1);
        self.trim();
    }

    /// Largest coefficient magnitude, `None` for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Option<Real> {
        self.coeffs
            .iter()
            .map(Real::abs)
            .reduce(|a, b| if b > a { b } else { a })
    }

    /// True when every odd-power coefficient is exactly zero.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Real::is_zero)
    }

    /// True when every even-power coefficient is exactly zero.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Real::is_zero)
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(Real::is_finite)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("Poly(0)");
        }
        f.write_str("Poly(")?;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.to_decimal(12))?,
                1 => write!(f, "{}·x", c.to_decimal(12))?,
                _ => write!(f, "{}·x^{k}", c.to_decimal(12))?,
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> Poly {
        Poly::from_f64s(c, Precision::DEFAULT).unwrap()
    }

    fn real(v: f64) -> Real {
        Real::from_f64(v, Precision::DEFAULT).unwrap()
    }

    #[test]
    fn add_disjoint_supports() {
        assert_eq!(&poly(&[1.0, 2.0]) + &poly(&[0.0, 0.0, 3.0]), poly(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn add_zero_is_identity() {
        let p = poly(&[1.0, -4.0, 0.5]);
        assert_eq!(&p + &Poly::zero(Precision::DEFAULT), p);
    }

    #[test]
    fn cancellation_gives_canonical_zero() {
        let s = &poly(&[1.0, -1.0]) + &poly(&[-1.0, 1.0]);
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
        assert!(s.coeffs().is_empty());
    }

    #[test]
    fn zero_degree_is_distinct_from_constant() {
        assert_eq!(poly(&[7.0]).degree(), Some(0));
        assert_eq!(poly(&[0.0]).degree(), None);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&poly(&[0.0, 2.0]) * &poly(&[0.0, 2.0]), poly(&[0.0, 0.0, 4.0]));
        let p = poly(&[3.0, 0.0, -1.0]);
        assert_eq!(&p * &poly(&[1.0]), p);
        // (1 - E) * 2x at E = 3
        assert_eq!(&poly(&[1.0 - 3.0]) * &poly(&[0.0, 2.0]), poly(&[0.0, -4.0]));
    }

    #[test]
    fn mul_degree_adds() {
        let a = poly(&[1.0, 2.0, 3.0]);
        let b = poly(&[0.5, 0.0, 0.0, -1.0]);
        assert_eq!((&a * &b).degree(), Some(5));
        assert!((&a * &Poly::zero(Precision::DEFAULT)).is_zero());
    }

    #[test]
    fn mul_truncated_matches_full_prefix() {
        let a = poly(&[1.0, 2.0, 3.0, 4.0]);
        let b = poly(&[5.0, 6.0, 7.0]);
        let full = &a * &b;
        let cut = a.mul_truncated(&b, 3);
        assert_eq!(cut.coeffs(), &full.coeffs()[..3]);
    }

    #[test]
    fn diff_examples() {
        assert_eq!(poly(&[3.0, 0.0, 4.0]).diff(), poly(&[0.0, 8.0]));
        assert!(poly(&[5.0]).diff().is_zero());
        assert_eq!(poly(&[0.0, 2.0, 0.0, 2.0]).diff(), poly(&[2.0, 0.0, 6.0]));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(poly(&[0.0, 2.0]).scale(&real(0.5)), poly(&[0.0, 1.0]));
        assert!(Poly::zero(Precision::DEFAULT).scale(&real(3.0)).is_zero());
        assert_eq!(poly(&[1.0 - 5.0]).scale(&real(2.0)), poly(&[-8.0]));
    }

    #[test]
    fn rescale_down_rejects_non_positive() {
        let p = poly(&[1.0, 2.0]);
        assert!(matches!(p.rescale_down(&real(0.0)), Err(Error::NonPositiveScale(_))));
        assert!(p.rescale_down(&real(-2.0)).is_err());
        assert_eq!(p.rescale_down(&real(2.0)).unwrap(), poly(&[0.5, 1.0]));
    }

    #[test]
    fn eval_at_zero_is_constant_term() {
        let c = Real::parse("0.1", Precision::DEFAULT).unwrap();
        let p = Poly::from_coeffs(vec![c.clone(), real(3.0)], Precision::DEFAULT);
        assert_eq!(p.eval_at_zero(), c);
        assert!(Poly::zero(Precision::DEFAULT).eval_at_zero().is_zero());
    }

    #[test]
    fn horner() {
        let p = poly(&[1.0, -3.0, 0.0, 2.0]);
        assert_eq!(p.eval(&real(2.0)), real(11.0));
        assert_eq!(p.eval_f64(-1.0), 2.0);
    }

    #[test]
    fn parity_flags() {
        assert!(poly(&[1.0, 0.0, 3.0]).is_even());
        assert!(!poly(&[1.0, 1.0]).is_even());
        assert!(poly(&[0.0, 2.0, 0.0, 5.0]).is_odd());
        assert!(Poly::zero(Precision::DEFAULT).is_even());
    }

    #[test]
    fn truncate_restores_canonical_form() {
        let mut p = poly(&[1.0, 0.0, 0.0, 4.0]);
        p.truncate(2);
        assert_eq!(p.degree(), Some(0));
    }
}
