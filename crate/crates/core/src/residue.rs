//! Pointwise Wodzicki residue densities.
//!
//! The density of a symbol `P` at the origin is `∫_{|ξ|=1} Tr σ_{-n}(P)(0, ξ)`.
//! Monomials are integrated exactly over the unit sphere and every result is
//! a `Q(i)` multiple of the sphere volume `v_{n-1}`, which is kept symbolic.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::ExtEndo;
use crate::scalar::{int, Qi, Rational};
use crate::symbol::GradedSymbol;

/// `∫_{S^{n-1}} ξ^e dσ / v_{n-1}`: zero if any exponent is odd, otherwise
/// `Π (e_j - 1)!! / Π_{j=1}^{A} (n + 2j - 2)` with `A = |e| / 2`.
pub fn sphere_moment(exponents: &[u32]) -> Rational {
    if exponents.iter().any(|e| e % 2 == 1) {
        return Rational::zero();
    }
    let n = exponents.len() as i128;
    let mut num: i128 = 1;
    for &e in exponents {
        let mut k = i128::from(e) - 1;
        while k > 1 {
            num *= k;
            k -= 2;
        }
    }
    let half: i128 = exponents.iter().map(|&e| i128::from(e / 2)).sum();
    let den: i128 = (1..=half).map(|j| n + 2 * j - 2).product();
    Rational::new(num, den)
}

/// A density `value · v_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDensity {
    pub n: usize,
    pub value: Qi,
    /// Set when the symbol has no part of homogeneity `-n` at all.
    pub absent: bool,
}

impl ResidueDensity {
    pub fn new(n: usize, value: Qi) -> Self {
        ResidueDensity { n, value, absent: false }
    }

    pub fn real(n: usize, value: Rational) -> Self {
        Self::new(n, Qi::real(value))
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Qi::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.value.is_real()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ResidueDensity { n: self.n, value: self.value.scale(r), absent: self.absent }
    }

    /// Exact equality of the coefficients; the `absent` flag is ignored.
    pub fn same_value(&self, o: &ResidueDensity) -> bool {
        self.n == o.n && self.value == o.value
    }
}

impl Add for ResidueDensity {
    type Output = ResidueDensity;
    fn add(self, o: ResidueDensity) -> ResidueDensity {
        ResidueDensity { n: self.n, value: self.value + o.value, absent: self.absent && o.absent }
    }
}

impl Sub for ResidueDensity {
    type Output = ResidueDensity;
    fn sub(self, o: ResidueDensity) -> ResidueDensity {
        self + (-o)
    }
}

impl Neg for ResidueDensity {
    type Output = ResidueDensity;
    fn neg(self) -> ResidueDensity {
        ResidueDensity { n: self.n, value: -self.value, absent: self.absent }
    }
}

impl fmt::Display for ResidueDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.value;
        if v.is_real() || v.re.is_zero() {
            write!(f, "{v} × v_{}", self.n - 1)
        } else {
            write!(f, "({v}) × v_{}", self.n - 1)
        }
    }
}

impl Serialize for ResidueDensity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("num", &self.value.re.numer().to_string())?;
        m.serialize_entry("den", &self.value.re.denom().to_string())?;
        if !self.value.im.is_zero() {
            m.serialize_entry("im_num", &self.value.im.numer().to_string())?;
            m.serialize_entry("im_den", &self.value.im.denom().to_string())?;
        }
        m.serialize_entry("unit", "v_{n-1}")?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("text", &self.to_string())?;
        if self.absent {
            m.serialize_entry("absent", &true)?;
        }
        m.end()
    }
}

/// `∫_{|ξ|=1} Tr σ_{-n}(P)(0, ξ)` in units of `v_{n-1}`.
///
/// A symbol of order below `-n` has no such part and gives a flagged zero.
/// If `-n` lies below the retained levels the part was truncated away, which
/// is an error.
pub fn wres_density(p: &GradedSymbol) -> Result<ResidueDensity> {
    let n = p.n();
    let target = -(n as i32);
    if target > p.leading() {
        return Ok(ResidueDensity { n, value: Qi::zero(), absent: true });
    }
    if target < p.lowest() {
        return Err(Error::Truncated { wanted: target, lowest: p.lowest(), leading: p.leading() });
    }
    let mut value = Qi::zero();
    let mut present = false;
    for t in p.terms().filter(|t| t.homogeneity == target) {
        present = true;
        if t.x.degree() != 0 {
            continue;
        }
        let moment = sphere_moment(&t.xi.exponents(n));
        if moment.is_zero() {
            continue;
        }
        value += t.coeff.trace().scale(&moment);
    }
    Ok(ResidueDensity { n, value, absent: !present })
}

/// `∫_{|ξ|=1} σ_{-n}(P)(0, ξ)` as a matrix, in units of `v_{n-1}`.
pub fn sphere_integral(p: &GradedSymbol) -> Result<ExtEndo> {
    let n = p.n();
    let target = -(n as i32);
    if target > p.leading() {
        return Ok(ExtEndo::zero(n));
    }
    if target < p.lowest() {
        return Err(Error::Truncated { wanted: target, lowest: p.lowest(), leading: p.leading() });
    }
    let mut acc = ExtEndo::zero(n);
    for t in p.terms().filter(|t| t.homogeneity == target && t.x.degree() == 0) {
        let moment = sphere_moment(&t.xi.exponents(n));
        if !moment.is_zero() {
            acc.add_scaled(&Qi::real(moment), t.coeff);
        }
    }
    Ok(acc)
}

/// `2^k` as a rational.
pub fn pow2(k: i32) -> Rational {
    if k >= 0 {
        int(1i128 << k)
    } else {
        Rational::new(1, 1i128 << -k)
    }
}
