//! Exact coefficient fields: rationals and Gaussian rationals.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Scalar(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Scalar(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            Scalar(num_traits::pow(self.0.clone(), e as usize))
        } else {
            self.recip().pow(-e)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    pub fn to_f64(&self) -> f64 {
        match (self.0.numer().to_f64(), self.0.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => self.0.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact conversion of a finite float (every finite f64 is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Scalar)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error for malformed fraction strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(pub String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal `{}`", self.0)
    }
}

impl core::error::Error for ParseScalarError {}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `n`, `-n`, `n/d` and terminating decimals such as `.5` or `-1.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Scalar::from_big(n, d))
            }
            None => match t.split_once('.') {
                Some((int, frac)) => {
                    let neg = int.trim_start().starts_with('-');
                    let digits = int.trim_start_matches(['-', '+']);
                    if (digits.is_empty() && frac.is_empty()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(err());
                    }
                    let whole = if digits.is_empty() { BigInt::zero() } else { BigInt::from_str(digits).map_err(|_| err())? };
                    let part = if frac.is_empty() { BigInt::zero() } else { BigInt::from_str(frac).map_err(|_| err())? };
                    let den = num_traits::pow(BigInt::from(10), frac.len());
                    let v = Scalar::from_big(whole * &den + part, den);
                    Ok(if neg { -v } else { v })
                }
                None => BigInt::from_str(t).map(Scalar::from_bigint).map_err(|_| err()),
            },
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

/// Element of ℚ[i]/(i²+1), stored as a pair of rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Scalar,
    pub im: Scalar,
}

impl Gaussian {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Gaussian { re, im: Scalar::zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: Scalar::zero(), im: Scalar::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -&self.im }
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})i", self.im),
            (false, false) => write!(f, "({} + ({})i)", self.re, self.im),
        }
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact coefficient field used by [`crate::poly::Poly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Coeff::add(self, rhs);
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, rhs: &Self) {
        self.0 += &rhs.0;
    }
}

impl Coeff for Gaussian {
    fn zero() -> Self {
        Gaussian::real(Scalar::zero())
    }
    fn one() -> Self {
        Gaussian::real(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Gaussian { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Gaussian { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(&self.re * &rhs.re);
        }
        Gaussian {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
    fn neg(&self) -> Self {
        Gaussian { re: -&self.re, im: -&self.im }
    }
    fn from_scalar(s: Scalar) -> Self {
        Gaussian::real(s)
    }
    fn inv(&self) -> Option<Self> {
        let n = &(&self.re * &self.re) + &(&self.im * &self.im);
        if n.is_zero() {
            return None;
        }
        Some(Gaussian { re: &self.re / &n, im: -&(&self.im / &n) })
    }
    fn add_assign(&mut self, rhs: &Self) {
        self.re.0 += &rhs.re.0;
        self.im.0 += &rhs.im.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = Scalar::ratio(6, -4);
        assert_eq!(s.numer(), &BigInt::from(-3));
        assert_eq!(s.denom(), &BigInt::from(2));
        assert_eq!(s.to_string(), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        for t in ["0", "-7", "22/7", "-1/3", "1/123456789012345678901234567890"] {
            let s: Scalar = t.parse().unwrap();
            assert_eq!(s.to_string(), t);
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn parse_decimals() {
        assert_eq!(".5".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("-1.25".parse::<Scalar>().unwrap(), Scalar::ratio(-5, 4));
        assert_eq!("3.".parse::<Scalar>().unwrap(), Scalar::from_int(3));
        assert!(".".parse::<Scalar>().is_err());
        assert!("1.2.3".parse::<Scalar>().is_err());
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(Scalar::ratio(-3, 2).floor(), BigInt::from(-2));
        assert_eq!(Scalar::ratio(-3, 2).ceil(), BigInt::from(-1));
        assert_eq!(Scalar::ratio(7, 2).floor(), BigInt::from(3));
    }

    #[test]
    fn gaussian_i_squared() {
        let i = Gaussian::i();
        assert_eq!(Coeff::mul(&i, &i), Gaussian::real(Scalar::from_int(-1)));
        let z = Gaussian::new(Scalar::from_int(3), Scalar::from_int(4));
        let w = Coeff::mul(&z, &z.inv().unwrap());
        assert!(w.is_one());
    }
}
