//! Sparse exact endomorphisms of the exterior algebra.
//!
//! Entries are Gaussian integers over one shared positive denominator, so
//! products and sums run on plain integer arithmetic and are reduced by a
//! single gcd pass afterwards. Storage is column-major with rows sorted.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::scalar::{Qi, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct GaussInt {
    re: i128,
    im: i128,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt { re: self.re + o.re, im: self.im + o.im }
    }

    fn scale(self, k: i128) -> GaussInt {
        GaussInt { re: self.re * k, im: self.im * k }
    }
}

/// Writes `q` as a Gaussian integer over a positive denominator.
fn split(q: &Qi) -> (GaussInt, i128) {
    let l = q.re.denom().lcm(q.im.denom());
    let num = GaussInt {
        re: q.re.numer() * (l / q.re.denom()),
        im: q.im.numer() * (l / q.im.denom()),
    };
    (num, l)
}

/// An endomorphism of the `2^n`-dimensional exterior algebra.
///
/// Rows and columns are basis positions of [`super::ExteriorAlgebra`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtEndo {
    n: usize,
    den: i128,
    cols: Vec<Vec<(u32, GaussInt)>>,
}

impl ExtEndo {
    pub fn zero(n: usize) -> Self {
        ExtEndo { n, den: 1, cols: vec![Vec::new(); 1 << n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Qi::from_int(1))
    }

    pub fn scalar(n: usize, q: &Qi) -> Self {
        if q.is_zero() {
            return Self::zero(n);
        }
        let (num, den) = split(q);
        let cols = (0..1u32 << n).map(|j| vec![(j, num)]).collect();
        ExtEndo { n, den, cols }
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions add.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, Qi)>) -> Self {
        let mut out = Self::zero(n);
        for (r, c, v) in triplets {
            let mut single = Self::zero(n);
            let (num, den) = split(&v);
            single.den = den;
            single.cols[c].push((r as u32, num));
            out = out.add(&single);
        }
        out
    }

    /// Builds a matrix whose entries are all `±1` or `±i` (no denominators).
    pub(crate) fn from_unit_columns(n: usize, cols: Vec<Vec<(u32, (i8, bool))>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|e| e.0);
                col.into_iter()
                    .map(|(r, (sign, imag))| {
                        let v = sign as i128;
                        let g = if imag { GaussInt { re: 0, im: v } } else { GaussInt { re: v, im: 0 } };
                        (r, g)
                    })
                    .collect()
            })
            .collect();
        ExtEndo { n, den: 1, cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    fn normalize(mut self) -> Self {
        for col in &mut self.cols {
            col.retain(|(_, v)| !v.is_zero());
        }
        let mut g = self.den;
        for col in &self.cols {
            for (_, v) in col {
                g = g.gcd(&v.re).gcd(&v.im);
                if g == 1 {
                    return self;
                }
            }
        }
        if self.is_zero() {
            self.den = 1;
            return self;
        }
        if g > 1 {
            self.den /= g;
            for col in &mut self.cols {
                for (_, v) in col.iter_mut() {
                    v.re /= g;
                    v.im /= g;
                }
            }
        }
        self
    }

    pub fn get(&self, row: usize, col: usize) -> Qi {
        match self.cols[col].binary_search_by_key(&(row as u32), |e| e.0) {
            Ok(k) => {
                let v = self.cols[col][k].1;
                Qi::new(Rational::new(v.re, self.den), Rational::new(v.im, self.den))
            }
            Err(_) => Qi::zero(),
        }
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Qi)> + '_ {
        self.cols.iter().enumerate().flat_map(move |(c, col)| {
            col.iter().map(move |(r, v)| {
                (*r as usize, c, Qi::new(Rational::new(v.re, self.den), Rational::new(v.im, self.den)))
            })
        })
    }

    pub fn add(&self, o: &ExtEndo) -> ExtEndo {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &ExtEndo) -> ExtEndo {
        self.combine(o, -1)
    }

    fn combine(&self, o: &ExtEndo, sign: i128) -> ExtEndo {
        assert_eq!(self.n, o.n, "exterior algebras of different dimension");
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() && sign == 1 {
            return o.clone();
        }
        let den = self.den.lcm(&o.den);
        let (fa, fb) = (den / self.den, sign * (den / o.den));
        let cols = self
            .cols
            .iter()
            .zip(&o.cols)
            .map(|(a, b)| merge_columns(a, fa, b, fb))
            .collect();
        ExtEndo { n: self.n, den, cols }.normalize()
    }

    /// In-place `self += k * o`.
    pub fn add_scaled(&mut self, k: &Qi, o: &ExtEndo) {
        if k.is_zero() || o.is_zero() {
            return;
        }
        let scaled = o.scale(k);
        *self = self.add(&scaled);
    }

    pub fn neg(&self) -> ExtEndo {
        let mut out = self.clone();
        for col in &mut out.cols {
            for (_, v) in col.iter_mut() {
                *v = v.scale(-1);
            }
        }
        out
    }

    pub fn scale(&self, q: &Qi) -> ExtEndo {
        if q.is_zero() {
            return Self::zero(self.n);
        }
        let (num, den) = split(q);
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v.mul(num))).collect())
            .collect();
        ExtEndo { n: self.n, den: self.den * den, cols }.normalize()
    }

    pub fn scale_rational(&self, r: &Rational) -> ExtEndo {
        self.scale(&Qi::real(*r))
    }

    pub fn mul(&self, o: &ExtEndo) -> ExtEndo {
        assert_eq!(self.n, o.n, "exterior algebras of different dimension");
        let dim = self.dim();
        let mut acc = vec![GaussInt::default(); dim];
        let mut touched = vec![false; dim];
        let mut rows: Vec<u32> = Vec::new();
        let mut cols = Vec::with_capacity(dim);
        for bcol in &o.cols {
            for (k, b) in bcol {
                for (i, a) in &self.cols[*k as usize] {
                    let i = *i as usize;
                    acc[i] = acc[i].add(a.mul(*b));
                    if !touched[i] {
                        touched[i] = true;
                        rows.push(i as u32);
                    }
                }
            }
            rows.sort_unstable();
            let mut col = Vec::with_capacity(rows.len());
            for &r in &rows {
                let v = std::mem::take(&mut acc[r as usize]);
                touched[r as usize] = false;
                if !v.is_zero() {
                    col.push((r, v));
                }
            }
            rows.clear();
            cols.push(col);
        }
        ExtEndo { n: self.n, den: self.den * o.den, cols }.normalize()
    }

    pub fn trace(&self) -> Qi {
        let mut t = GaussInt::default();
        for (j, col) in self.cols.iter().enumerate() {
            if let Ok(k) = col.binary_search_by_key(&(j as u32), |e| e.0) {
                t = t.add(col[k].1);
            }
        }
        Qi::new(Rational::new(t.re, self.den), Rational::new(t.im, self.den))
    }

    pub fn transpose(&self) -> ExtEndo {
        let mut cols: Vec<Vec<(u32, GaussInt)>> = vec![Vec::new(); self.dim()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r as usize].push((c as u32, *v));
            }
        }
        ExtEndo { n: self.n, den: self.den, cols }
    }

    pub fn conj_transpose(&self) -> ExtEndo {
        let mut t = self.transpose();
        for col in &mut t.cols {
            for (_, v) in col.iter_mut() {
                v.im = -v.im;
            }
        }
        t
    }

    /// `Some(c)` when the matrix equals `c * id`.
    pub fn as_scalar(&self) -> Option<Qi> {
        if self.is_zero() {
            return Some(Qi::zero());
        }
        let first = self.cols[0].first()?;
        if first.0 != 0 {
            return None;
        }
        let v = first.1;
        let ok = self
            .cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.len() == 1 && col[0].0 as usize == j && col[0].1 == v);
        ok.then(|| Qi::new(Rational::new(v.re, self.den), Rational::new(v.im, self.den)))
    }

    /// Largest absolute numerator or denominator; a growth diagnostic.
    pub fn height(&self) -> i128 {
        self.cols
            .iter()
            .flatten()
            .map(|(_, v)| v.re.abs().max(v.im.abs()))
            .fold(self.den, i128::max)
    }

    /// Every denominator in the matrix divides `den`.
    pub fn common_denominator(&self) -> i128 {
        self.den
    }
}

fn merge_columns(a: &[(u32, GaussInt)], fa: i128, b: &[(u32, GaussInt)], fb: i128) -> Vec<(u32, GaussInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, a[i].1.scale(fa)));
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1.scale(fb)));
            j += 1;
        } else {
            let v = a[i].1.scale(fa).add(b[j].1.scale(fb));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl fmt::Debug for ExtEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtEndo(n={}, nnz={}", self.n, self.nnz())?;
        if let Some(c) = self.as_scalar() {
            write!(f, ", scalar={c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn scalar_matrix_arithmetic() {
        let half = ExtEndo::scalar(2, &Qi::real(rat(1, 2)));
        let third = ExtEndo::scalar(2, &Qi::new(int(0), rat(1, 3)));
        let sum = half.add(&third);
        assert_eq!(sum.as_scalar(), Some(Qi::new(rat(1, 2), rat(1, 3))));
        assert_eq!(sum.sub(&sum), ExtEndo::zero(2));
        let prod = half.mul(&third);
        assert_eq!(prod.as_scalar(), Some(Qi::new(int(0), rat(1, 6))));
        assert_eq!(ExtEndo::identity(4).trace(), Qi::from_int(16));
    }

    #[test]
    fn triplets_and_transpose() {
        let m = ExtEndo::from_triplets(
            2,
            [(0, 1, Qi::real(rat(2, 3))), (3, 1, Qi::i()), (0, 1, Qi::real(rat(1, 3)))],
        );
        assert_eq!(m.get(0, 1), Qi::from_int(1));
        assert_eq!(m.get(3, 1), Qi::i());
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.conj_transpose().get(1, 3), -Qi::i());
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.trace(), Qi::zero());
        assert!(m.as_scalar().is_none());
    }

    #[test]
    fn normalisation_is_canonical() {
        let a = ExtEndo::scalar(1, &Qi::real(rat(2, 4)));
        let b = ExtEndo::scalar(1, &Qi::real(rat(1, 2)));
        assert_eq!(a, b);
        assert_eq!(a.common_denominator(), 2);
        let z = a.sub(&b);
        assert!(z.is_zero());
        assert_eq!(z, ExtEndo::zero(1));
    }
}
