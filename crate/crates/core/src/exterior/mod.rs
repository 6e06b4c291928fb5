//! The complex exterior algebra `Λ(C^n)` with its creation/annihilation
//! operators `λ₊ᵖ`, `λ₋ᵖ` and the Clifford generators `γᵖ = -i(λ₊ᵖ - λ₋ᵖ)`.
//!
//! Indices are zero-based in code (`0..n`); `MultiIndex` prints one-based sets
//! to match the usual notation `dx^{1} ∧ dx^{3}`.
//!
//! The basis `dx^J` is ordered by `(|J|, lexicographic)`, so matrices show
//! their degree-block structure when dumped.

mod endo;
pub mod trace;

use std::fmt;
use std::sync::OnceLock;

pub use endo::ExtEndo;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

/// An increasing multi-index `J ⊂ {0..n}` stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_bits(bits: u16) -> Self {
        MultiIndex(bits)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        MultiIndex(indices.iter().fold(0, |b, &i| b | (1 << i)))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 & (1 << p) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&i| self.0 & (1 << i) != 0)
    }

    fn count_below(self, p: usize) -> u32 {
        (self.0 & ((1u16 << p) - 1)).count_ones()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Signed insertion `ε^I_{pJ}`: `dx^p ∧ dx^J = sign · dx^I`.
///
/// Returns `(0, J)` when `p ∈ J`.
pub fn eps_insert(p: usize, j: MultiIndex) -> (i8, MultiIndex) {
    if j.contains(p) {
        return (0, j);
    }
    let sign = if j.count_below(p).is_multiple_of(2) { 1 } else { -1 };
    (sign, MultiIndex(j.0 | (1 << p)))
}

/// Signed removal `ε^{pI}_J`: the interior product of `dx^J` with `∂_p`.
///
/// Returns `(0, J)` when `p ∉ J`.
pub fn eps_remove(p: usize, j: MultiIndex) -> (i8, MultiIndex) {
    if !j.contains(p) {
        return (0, j);
    }
    let sign = if j.count_below(p).is_multiple_of(2) { 1 } else { -1 };
    (sign, MultiIndex(j.0 & !(1 << p)))
}

/// Generator matrices for one dimension `n`.
pub struct ExteriorAlgebra {
    n: usize,
    basis: Vec<MultiIndex>,
    position: Vec<u32>,
    lambda_plus: Vec<ExtEndo>,
    lambda_minus: Vec<ExtEndo>,
    gamma: Vec<ExtEndo>,
    identity: ExtEndo,
}

impl ExteriorAlgebra {
    fn build(n: usize) -> Self {
        let mut basis: Vec<MultiIndex> = (0..1u32 << n).map(|b| MultiIndex(b as u16)).collect();
        basis.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.indices().collect::<Vec<_>>().cmp(&b.indices().collect::<Vec<_>>()))
        });
        let mut position = vec![0u32; 1 << n];
        for (k, j) in basis.iter().enumerate() {
            position[j.0 as usize] = k as u32;
        }
        let column_map = |op: fn(usize, MultiIndex) -> (i8, MultiIndex), p: usize, imag: bool, scale: i8| {
            basis
                .iter()
                .map(|&j| {
                    let (sign, i) = op(p, j);
                    if sign == 0 {
                        Vec::new()
                    } else {
                        vec![(position[i.0 as usize], (sign * scale, imag))]
                    }
                })
                .collect::<Vec<_>>()
        };
        let mut lambda_plus = Vec::with_capacity(n);
        let mut lambda_minus = Vec::with_capacity(n);
        let mut gamma = Vec::with_capacity(n);
        for p in 0..n {
            lambda_plus.push(ExtEndo::from_unit_columns(n, column_map(eps_insert, p, false, 1)));
            lambda_minus.push(ExtEndo::from_unit_columns(n, column_map(eps_remove, p, false, 1)));
            // γ = -i λ₊ + i λ₋; the two never share an entry.
            let mut cols = column_map(eps_insert, p, true, -1);
            for (c, extra) in column_map(eps_remove, p, true, 1).into_iter().enumerate() {
                cols[c].extend(extra);
            }
            gamma.push(ExtEndo::from_unit_columns(n, cols));
        }
        ExteriorAlgebra {
            n,
            basis,
            position,
            lambda_plus,
            lambda_minus,
            gamma,
            identity: ExtEndo::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Basis multi-indices in matrix order.
    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn position(&self, j: MultiIndex) -> usize {
        self.position[j.0 as usize] as usize
    }

    pub fn lambda_plus(&self, p: usize) -> &ExtEndo {
        &self.lambda_plus[p]
    }

    pub fn lambda_minus(&self, p: usize) -> &ExtEndo {
        &self.lambda_minus[p]
    }

    pub fn gamma(&self, p: usize) -> &ExtEndo {
        &self.gamma[p]
    }

    pub fn identity(&self) -> &ExtEndo {
        &self.identity
    }

    /// Product of a word of generators, left to right.
    pub fn word(&self, letters: &[trace::Letter]) -> ExtEndo {
        letters.iter().fold(self.identity.clone(), |acc, l| acc.mul(self.letter(*l)))
    }

    pub fn letter(&self, l: trace::Letter) -> &ExtEndo {
        match l {
            trace::Letter::Plus(p) => self.lambda_plus(p),
            trace::Letter::Minus(p) => self.lambda_minus(p),
            trace::Letter::Gamma(p) => self.gamma(p),
        }
    }
}

/// Cached generator set for dimension `n` (`1 ≤ n ≤ 8`).
pub fn algebra(n: usize) -> Result<&'static ExteriorAlgebra> {
    static CACHE: [OnceLock<ExteriorAlgebra>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    if n == 0 || n > MAX_DIM {
        return Err(Error::BadDimension { n, min: 1 });
    }
    Ok(CACHE[n].get_or_init(|| ExteriorAlgebra::build(n)))
}
