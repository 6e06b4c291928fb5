//! Exact scalars: rationals and Gaussian rationals `a + b i` with `a, b ∈ Q`.
//!
//! All arithmetic is exact. The integer backing is `i128`; the workspace
//! builds with overflow checks enabled in every profile, so an overflow
//! aborts loudly instead of producing a wrong answer.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rational = num_rational::Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(int(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter writing a rational as a `"p/q"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// An element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Qi {
    pub re: Rational,
    pub im: Rational,
}

impl Qi {
    pub fn new(re: Rational, im: Rational) -> Self {
        Qi { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Qi { re, im: Rational::zero() }
    }

    pub fn from_int(v: i128) -> Self {
        Qi::real(int(v))
    }

    pub fn i() -> Self {
        Qi { re: Rational::zero(), im: Rational::one() }
    }

    /// `(-i)^k`
    pub fn neg_i_pow(k: usize) -> Self {
        match k % 4 {
            0 => Qi::one(),
            1 => -Qi::i(),
            2 => -Qi::one(),
            _ => Qi::i(),
        }
    }

    pub fn conj(&self) -> Self {
        Qi { re: self.re, im: -self.im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Qi { re: self.re * r, im: self.im * r }
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = self.re * self.re + self.im * self.im;
        if norm.is_zero() {
            None
        } else {
            Some(Qi { re: self.re / norm, im: -self.im / norm })
        }
    }
}

impl Zero for Qi {
    fn zero() -> Self {
        Qi::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Qi {
    fn one() -> Self {
        Qi::real(Rational::one())
    }
}

impl From<Rational> for Qi {
    fn from(r: Rational) -> Self {
        Qi::real(r)
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, o: Qi) -> Qi {
        Qi { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a Qi> for &'a Qi {
    type Output = Qi;
    fn add(self, o: &Qi) -> Qi {
        Qi { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign for Qi {
    fn add_assign(&mut self, o: Qi) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, o: Qi) -> Qi {
        Qi { re: self.re - o.re, im: self.im - o.im }
    }
}

impl SubAssign for Qi {
    fn sub_assign(&mut self, o: Qi) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi { re: -self.re, im: -self.im }
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, o: Qi) -> Qi {
        &self * &o
    }
}

impl<'a> Mul<&'a Qi> for &'a Qi {
    type Output = Qi;
    fn mul(self, o: &Qi) -> Qi {
        Qi {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl MulAssign for Qi {
    fn mul_assign(&mut self, o: Qi) {
        *self = &*self * &o;
    }
}

impl Div for Qi {
    type Output = Qi;
    fn div(self, o: Qi) -> Qi {
        self * o.inv().expect("division by zero in Q(i)")
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{} {} {}i",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

impl FromStr for Qi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(Qi::real(parse_rational(s)?))
    }
}

impl Serialize for Qi {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = Qi::new(rat(1, 2), int(1));
        let b = Qi::new(int(2), rat(-1, 3));
        let p = a.clone() * b.clone();
        assert_eq!(p, Qi::new(rat(4, 3), rat(11, 6)));
        assert_eq!((p / b).to_string(), a.to_string());
        assert_eq!(Qi::i() * Qi::i(), -Qi::one());
        assert_eq!(Qi::neg_i_pow(3), Qi::i());
        assert_eq!(Qi::new(int(1), int(-2)).to_string(), "1 - 2i");
    }
}
