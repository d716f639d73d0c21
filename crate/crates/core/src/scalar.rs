//! Exact scalars: rationals and Gaussian rationals, with the string grammar
//! used by datum files and the command line.
//!
//! Rationals are written `p` or `p/q`; Gaussian rationals `re`, `imi`, or
//! `re+imi` / `re-imi` with rational parts (`i`, `-i`, `1/2-3i`, `2/3i`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || CoreError::Parse(format!("invalid rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(CoreError::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(Q::new(num, den))
}

/// Renders `p` or `p/q` in lowest terms; the inverse of [`parse_rational`].
pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Element of ℚ(i).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(q(n))
    }

    pub fn i() -> Self {
        Self::new(Q::zero(), Q::one())
    }

    pub fn zero() -> Self {
        Self::real(Q::zero())
    }

    pub fn one() -> Self {
        Self::real(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|², always rational.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Q| -> String {
            if im.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                if self.im.is_negative() {
                    write!(f, "-{}", im_part(&-self.im.clone()))
                } else {
                    write!(f, "{}", im_part(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}",
                    fmt_rational(&self.re),
                    sign,
                    im_part(&self.im.abs())
                )
            }
        }
    }
}

impl FromStr for GaussianRational {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&s)?));
        };
        // Split at the last sign that is not leading: that separates re from im.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(idx, _)| idx)
            .last();
        let (re, im) = match split {
            Some(idx) => (parse_rational(&body[..idx])?, &body[idx..]),
            None => (Q::zero(), body),
        };
        let im = match im {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))
                .map_err(|_| CoreError::Parse(format!("invalid Gaussian rational '{s}'")))?,
        };
        Ok(Self::new(re, im))
    }
}

impl From<Q> for GaussianRational {
    fn from(re: Q) -> Self {
        Self::real(re)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Panics on division by zero, like the rational type it wraps.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -self.clone()
    }
}
