//! Exact Gaussian rationals, the field ℚ(i).
//!
//! Every matrix entry in the crate is a [`GaussianRational`]. Both parts are
//! arbitrary-precision rationals kept in lowest terms with a positive
//! denominator, so two values are equal exactly when their representations
//! are equal.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A complex number `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `re_num/re_den + (im_num/im_den)·i`.
    ///
    /// Panics if a denominator is zero.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self { re: BigRational::new(re_num.into(), re_den.into()), im: BigRational::new(im_num.into(), im_den.into()) }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn real(re: i64) -> Self {
        Self::from_ints(re, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// |z|², always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let den = rhs.norm_sqr();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // z / w = z·conj(w) / |w|²
        let num = self * &rhs.conj();
        Ok(Self { re: num.re / &den, im: num.im / den })
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Apply one of the four field operations by name.
    pub fn apply(&self, op: ScalarOp, rhs: &Self) -> Result<Self> {
        match op {
            ScalarOp::Add => Ok(self + rhs),
            ScalarOp::Sub => Ok(self - rhs),
            ScalarOp::Mul => Ok(self * rhs),
            ScalarOp::Div => self.checked_div(rhs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::real(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }

        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational { re: &a.re + &b.re, im: &a.im + &b.im });

forward_binop!(Sub, sub, |a, b| GaussianRational { re: &a.re - &b.re, im: &a.im - &b.im });

forward_binop!(Mul, mul, |a, b| {
    // Cheap exits matter: block matrices are mostly zeros and identities.
    if a.is_zero() || b.is_zero() {
        return GaussianRational::zero();
    }
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational { re: &a.re * &b.re, im: BigRational::zero() };
    }
    GaussianRational { re: &a.re * &b.re - &a.im * &b.im, im: &a.re * &b.im + &a.im * &b.re }
});

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        if rhs.is_zero() {
            return;
        }
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        if rhs.is_zero() {
            return;
        }
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `"5"`, `"-3/4"`, `"3/5+4/5i"`, `"2-i"`, `"1/2i"`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write_rational(f, &self.re);
        }
        let im_abs = self.im.abs();
        if !self.re.is_zero() {
            write_rational(f, &self.re)?;
            f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
        } else if self.im.is_negative() {
            f.write_str("-")?;
        }
        if !im_abs.is_one() {
            write_rational(f, &im_abs)?;
        }
        f.write_str("i")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_unsigned_rational(s: &str, whole: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid scalar {whole:?}"));
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match s.split_once('/') {
        None if digits(s) => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) if digits(p) && digits(q) => {
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {whole:?}")));
            }
            Ok(BigRational::new(p.parse().map_err(|_| bad())?, q))
        }
        _ => Err(bad()),
    }
}

fn parse_signed_rational(s: &str, whole: &str) -> Result<BigRational> {
    match s.as_bytes().first() {
        Some(b'-') => Ok(-parse_unsigned_rational(&s[1..], whole)?),
        Some(b'+') => parse_unsigned_rational(&s[1..], whole),
        _ => parse_unsigned_rational(s, whole),
    }
}

/// Accepts `"p/q+r/si"`, `"3+4i"`, `"-2+0/1i"`, `"7"`, `"-i"`, `"3/4i"`.
/// Whitespace is ignored.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::from(parse_signed_rational(&s, text)?));
        };
        // The imaginary term starts at the last sign that is not the leading one.
        let split =
            body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last().unwrap_or(0);
        let (re_part, im_part) = body.split_at(split);
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_signed_rational(re_part, text)? };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_signed_rational(t, text)?,
        };
        Ok(Self { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = GaussianRational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a Gaussian rational string like \"3/5+4/5i\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(GaussianRational::real(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(GaussianRational::from(BigRational::from_integer(v.into())))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}
