//! Pseudodifferential symbols in normal coordinates.
//!
//! A [`GradedSymbol`] is a finite sum of terms
//!
//! ```text
//! ||ξ||^{-2s} ξ^μ x^ν M,     M ∈ End(Λ C^n)
//! ```
//!
//! grouped into [`XiPart`]s by `(deg μ, s)`. The homogeneity of a term is
//! `deg μ - 2s`. Only the three leading homogeneities are kept, and the
//! x-degree retained at homogeneity `h` is `2 - (leading - h)`: the leading
//! level is exact to `o(x²)`, the next to `o(x)`, the last to `o(1)`. This is
//! exactly what is needed to evaluate the symbol two orders below the leading
//! one at `x = 0`, and composition preserves it.
//!
//! Powers of `||ξ||` are never cancelled against numerators, so the same
//! function can have several representations; use
//! [`GradedSymbol::equivalent`] to compare.

mod hodge;
mod inverse;
mod json;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

pub use hodge::{
    clifford_of_one_form, commutator_with_function, hodge_dirac_symbol, printed_dirac_inverse_power,
    printed_dirac_squared, ScalarJet,
};
pub use inverse::{inverse_power, inverse_power_by_composition, laplace_data, parametrix, LaplaceData};
pub use json::{SymbolDump, SymbolPartDump, SymbolTermDump};

use crate::exterior::{ExtEndo, MAX_DIM};
use crate::scalar::{int, Qi, Rational};

/// Number of homogeneity levels a symbol keeps.
pub const LEVELS: i32 = 3;

/// Exponent vector of a monomial in `ξ` or `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono([u8; MAX_DIM]);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn var(a: usize) -> Self {
        let mut m = Mono::default();
        m.0[a] = 1;
        m
    }

    pub fn from_vars(vars: &[usize]) -> Self {
        vars.iter().fold(Mono::one(), |m, &a| m.mul(Mono::var(a)))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Mono::default();
        for (a, &e) in exps.iter().enumerate() {
            m.0[a] = e as u8;
        }
        m
    }

    pub fn exp(&self, a: usize) -> u32 {
        u32::from(self.0[a])
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.0[..n].iter().map(|&e| u32::from(e)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn mul(self, o: Mono) -> Mono {
        let mut m = self;
        for a in 0..MAX_DIM {
            m.0[a] += o.0[a];
        }
        m
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(self, o: Mono) -> Option<Mono> {
        let mut m = self;
        for a in 0..MAX_DIM {
            m.0[a] = m.0[a].checked_sub(o.0[a])?;
        }
        Some(m)
    }

    pub fn fmt_with(&self, var: &str) -> String {
        let mut s = String::new();
        for (a, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&format!("{var}{}", a + 1)),
                _ => s.push_str(&format!("{var}{}^{e}", a + 1)),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("v"))
    }
}

fn factorial(k: u32) -> i128 {
    (1..=i128::from(k)).product()
}

/// One `(ξ-degree, ||ξ||-power)` slice of a symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPart {
    pub xi_degree: u32,
    pub inv_norm_power: u32,
    /// `(ξ-monomial, x-monomial) → coefficient`
    pub coeff: BTreeMap<(Mono, Mono), ExtEndo>,
}

impl XiPart {
    pub fn homogeneity(&self) -> i32 {
        self.xi_degree as i32 - 2 * self.inv_norm_power as i32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSymbol {
    n: usize,
    leading: i32,
    parts: Vec<XiPart>,
}

/// A single term, borrowed from a symbol.
#[derive(Clone, Copy, Debug)]
pub struct Term<'a> {
    pub homogeneity: i32,
    pub inv_norm_power: u32,
    pub xi: Mono,
    pub x: Mono,
    pub coeff: &'a ExtEndo,
}

impl GradedSymbol {
    pub fn zero(n: usize, leading: i32) -> Self {
        GradedSymbol { n, leading, parts: Vec::new() }
    }

    /// The order-0 symbol `M`, independent of `x` and `ξ`.
    pub fn constant(m: ExtEndo) -> Self {
        let mut s = Self::zero(m.n(), 0);
        s.add_term(0, Mono::one(), Mono::one(), m);
        s
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(ExtEndo::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest retained homogeneity.
    pub fn leading(&self) -> i32 {
        self.leading
    }

    pub fn lowest(&self) -> i32 {
        self.leading - (LEVELS - 1)
    }

    pub fn parts(&self) -> &[XiPart] {
        &self.parts
    }

    /// Retained x-degree at homogeneity `h`, if `h` is kept at all.
    pub fn x_budget(&self, h: i32) -> Option<u32> {
        let offset = self.leading - h;
        (0..LEVELS).contains(&offset).then(|| (LEVELS - 1 - offset) as u32)
    }

    pub fn terms(&self) -> impl Iterator<Item = Term<'_>> {
        self.parts.iter().flat_map(|p| {
            let h = p.homogeneity();
            p.coeff.iter().map(move |((xi, x), m)| Term {
                homogeneity: h,
                inv_norm_power: p.inv_norm_power,
                xi: *xi,
                x: *x,
                coeff: m,
            })
        })
    }

    pub fn term_count(&self) -> usize {
        self.parts.iter().map(|p| p.coeff.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.coeff.is_empty())
    }

    fn part_mut(&mut self, xi_degree: u32, s: u32) -> &mut XiPart {
        let pos = self.parts.iter().position(|p| p.xi_degree == xi_degree && p.inv_norm_power == s);
        let k = match pos {
            Some(k) => k,
            None => {
                self.parts.push(XiPart { xi_degree, inv_norm_power: s, coeff: BTreeMap::new() });
                self.parts.sort_by_key(|p| (-p.homogeneity(), p.inv_norm_power));
                self.parts.iter().position(|p| p.xi_degree == xi_degree && p.inv_norm_power == s).unwrap()
            }
        };
        &mut self.parts[k]
    }

    /// Adds `||ξ||^{-2s} ξ^xi x^x M`. Terms outside the retained window or
    /// beyond the x-budget are dropped; returns whether the term was kept.
    pub fn add_term(&mut self, s: u32, xi: Mono, x: Mono, m: ExtEndo) -> bool {
        assert_eq!(m.n(), self.n, "coefficient dimension mismatch");
        let h = xi.degree() as i32 - 2 * s as i32;
        match self.x_budget(h) {
            Some(b) if x.degree() <= b => {}
            _ => return false,
        }
        if m.is_zero() {
            return true;
        }
        let part = self.part_mut(xi.degree(), s);
        match part.coeff.get_mut(&(xi, x)) {
            Some(acc) => {
                *acc = acc.add(&m);
                if acc.is_zero() {
                    part.coeff.remove(&(xi, x));
                }
            }
            None => {
                part.coeff.insert((xi, x), m);
            }
        }
        true
    }

    fn prune(mut self) -> Self {
        for p in &mut self.parts {
            p.coeff.retain(|_, m| !m.is_zero());
        }
        self.parts.retain(|p| !p.coeff.is_empty());
        self
    }

    pub fn add(&self, o: &GradedSymbol) -> GradedSymbol {
        assert_eq!(self.n, o.n);
        let mut out = self.with_leading(self.leading.max(o.leading));
        for t in o.terms() {
            out.add_term(t.inv_norm_power, t.xi, t.x, t.coeff.clone());
        }
        out.prune()
    }

    pub fn sub(&self, o: &GradedSymbol) -> GradedSymbol {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GradedSymbol {
        self.map_coeffs(|m| m.neg())
    }

    pub fn scale(&self, q: &Qi) -> GradedSymbol {
        self.map_coeffs(|m| m.scale(q)).prune()
    }

    fn map_coeffs(&self, f: impl Fn(&ExtEndo) -> ExtEndo) -> GradedSymbol {
        let mut out = self.clone();
        for p in &mut out.parts {
            for m in p.coeff.values_mut() {
                *m = f(m);
            }
        }
        out
    }

    /// Re-files the terms under a different leading order, truncating as needed.
    pub fn with_leading(&self, leading: i32) -> GradedSymbol {
        let mut out = GradedSymbol::zero(self.n, leading);
        for t in self.terms() {
            out.add_term(t.inv_norm_power, t.xi, t.x, t.coeff.clone());
        }
        out
    }

    /// Terms of homogeneity `h` only (same leading order).
    pub fn level(&self, h: i32) -> GradedSymbol {
        let mut out = self.clone();
        out.parts.retain(|p| p.homogeneity() == h);
        out
    }

    /// The symbol evaluated at `x = 0`.
    pub fn at_origin(&self) -> GradedSymbol {
        let mut out = self.clone();
        for p in &mut out.parts {
            p.coeff.retain(|(_, x), _| x.degree() == 0);
        }
        out.prune()
    }

    pub fn is_x_independent(&self) -> bool {
        self.terms().all(|t| t.x.degree() == 0)
    }

    /// Left multiplication of every coefficient by a constant matrix.
    pub fn left_mul(&self, m: &ExtEndo) -> GradedSymbol {
        self.map_coeffs(|c| m.mul(c)).prune()
    }

    /// Symbol of the operator product, `Σ_α (-i)^{|α|}/α! ∂_ξ^α a ∂_x^α b`,
    /// truncated to the three leading homogeneities of the product.
    pub fn compose(&self, o: &GradedSymbol) -> GradedSymbol {
        self.compose_impl(o, false)
    }

    /// `compose(o).at_origin()`, computed without the `x`-dependent terms:
    /// at `x = 0` only the value of `self` and the `x`-derivatives of `o`
    /// enter.
    pub fn compose_at_origin(&self, o: &GradedSymbol) -> GradedSymbol {
        self.compose_impl(o, true)
    }

    fn compose_impl(&self, o: &GradedSymbol, origin_only: bool) -> GradedSymbol {
        assert_eq!(self.n, o.n, "symbols over different dimensions");
        let leading = self.leading + o.leading;
        let mut out = GradedSymbol::zero(self.n, leading);
        let mut xi_cache: HashMap<(u32, Mono, Mono), Vec<(u32, Mono, Rational)>> = HashMap::new();
        let mut local: BTreeMap<(u32, Mono, Mono), Qi> = BTreeMap::new();
        for pa in &self.parts {
            let i = self.leading - pa.homogeneity();
            for pb in &o.parts {
                let j = o.leading - pb.homogeneity();
                if i + j >= LEVELS {
                    continue;
                }
                let room = (LEVELS - 1 - i - j) as u32;
                for ((xi_a, x_a), ma) in &pa.coeff {
                    if origin_only && x_a.degree() > 0 {
                        continue;
                    }
                    for ((xi_b, x_b), mb) in &pb.coeff {
                        if x_a.degree() + x_b.degree() > room {
                            continue;
                        }
                        local.clear();
                        for alpha in multi_indices_below(x_b, room, self.n) {
                            if origin_only && alpha != *x_b {
                                continue;
                            }
                            let k = alpha.degree();
                            let x_rest = x_b.div(alpha).expect("alpha divides x_b");
                            let x_out = x_a.mul(x_rest);
                            let mut weight = Rational::one();
                            for a in 0..self.n {
                                let (e, d) = (x_b.exp(a), alpha.exp(a));
                                weight *= int(factorial(e) / factorial(e - d)) / int(factorial(d));
                            }
                            let phase = Qi::neg_i_pow(k as usize).scale(&weight);
                            let derivs = xi_cache
                                .entry((pa.inv_norm_power, *xi_a, alpha))
                                .or_insert_with(|| xi_derivative(pa.inv_norm_power, *xi_a, alpha, self.n));
                            for (s_d, xi_d, f) in derivs.iter() {
                                let key = (pb.inv_norm_power + s_d, xi_d.mul(*xi_b), x_out);
                                let e = local.entry(key).or_insert_with(Qi::zero);
                                *e += phase.scale(f);
                            }
                        }
                        local.retain(|_, c| !c.is_zero());
                        if local.is_empty() {
                            continue;
                        }
                        let prod = ma.mul(mb);
                        if prod.is_zero() {
                            continue;
                        }
                        for ((s, xi, x), c) in &local {
                            out.add_term(*s, *xi, *x, prod.scale(c));
                        }
                    }
                }
            }
        }
        out.prune()
    }

    /// Numerators of homogeneity `h`, brought to the common denominator
    /// `||ξ||^{2 s_target}`. Requires `s_target ≥` every `s` present at `h`.
    pub fn lifted_level(&self, h: i32, s_target: u32) -> BTreeMap<(Mono, Mono), ExtEndo> {
        let mut out: BTreeMap<(Mono, Mono), ExtEndo> = BTreeMap::new();
        for p in self.parts.iter().filter(|p| p.homogeneity() == h) {
            assert!(p.inv_norm_power <= s_target);
            let lift = norm_power_expansion(p.inv_norm_power.abs_diff(s_target), self.n);
            for ((xi, x), m) in &p.coeff {
                for (mono, c) in &lift {
                    let key = (xi.mul(*mono), *x);
                    let v = m.scale_rational(&int(*c));
                    match out.get_mut(&key) {
                        Some(acc) => *acc = acc.add(&v),
                        None => {
                            out.insert(key, v);
                        }
                    }
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    /// Equality as functions of `(x, ξ)` on the retained window of both symbols.
    pub fn equivalent(&self, o: &GradedSymbol) -> bool {
        self.n == o.n && self.leading == o.leading && self.sub(o).is_zero_function()
    }

    /// True when every homogeneity level sums to the zero function.
    pub fn is_zero_function(&self) -> bool {
        let mut levels: BTreeMap<i32, u32> = BTreeMap::new();
        for p in &self.parts {
            let e = levels.entry(p.homogeneity()).or_insert(0);
            *e = (*e).max(p.inv_norm_power);
        }
        levels.iter().all(|(h, s)| self.lifted_level(*h, *s).is_empty())
    }
}

/// Multi-indices `α` with `α ≤ x` componentwise and `|α| ≤ max_order`.
fn multi_indices_below(x: &Mono, max_order: u32, n: usize) -> Vec<Mono> {
    let mut out = vec![Mono::one()];
    let mut frontier = vec![(Mono::one(), 0usize)];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for (m, start) in frontier {
            for a in start..n {
                let cand = m.mul(Mono::var(a));
                if cand.exp(a) <= x.exp(a) {
                    out.push(cand);
                    next.push((cand, a));
                }
            }
        }
        frontier = next;
    }
    out
}

/// `∂_ξ^α (||ξ||^{-2s} ξ^μ)` as a list of `(s', ξ^μ', coefficient)`.
fn xi_derivative(s: u32, mu: Mono, alpha: Mono, n: usize) -> Vec<(u32, Mono, Rational)> {
    let mut terms: BTreeMap<(u32, Mono), Rational> = BTreeMap::new();
    terms.insert((s, mu), Rational::one());
    for a in 0..n {
        for _ in 0..alpha.exp(a) {
            let mut next: BTreeMap<(u32, Mono), Rational> = BTreeMap::new();
            for ((s, m), c) in terms {
                let e = m.exp(a);
                if e > 0 {
                    let lowered = m.div(Mono::var(a)).unwrap();
                    *next.entry((s, lowered)).or_insert_with(Rational::zero) += c * int(i128::from(e));
                }
                if s > 0 {
                    let raised = m.mul(Mono::var(a));
                    *next.entry((s + 1, raised)).or_insert_with(Rational::zero) -= c * int(2 * i128::from(s));
                }
            }
            next.retain(|_, c| !c.is_zero());
            terms = next;
        }
    }
    terms.into_iter().map(|((s, m), c)| (s, m, c)).collect()
}

/// Expansion of `(ξ_1² + … + ξ_n²)^t`.
fn norm_power_expansion(t: u32, n: usize) -> Vec<(Mono, i128)> {
    let mut poly: BTreeMap<Mono, i128> = BTreeMap::new();
    poly.insert(Mono::one(), 1);
    for _ in 0..t {
        let mut next: BTreeMap<Mono, i128> = BTreeMap::new();
        for (m, c) in &poly {
            for a in 0..n {
                *next.entry(m.mul(Mono::var(a)).mul(Mono::var(a))).or_insert(0) += c;
            }
        }
        poly = next;
    }
    poly.into_iter().collect()
}

/// `||ξ||^{2}` as a scalar polynomial term list, handy for building symbols.
pub fn norm_squared_terms(n: usize) -> Vec<Mono> {
    (0..n).map(|a| Mono::var(a).mul(Mono::var(a))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::algebra;

    fn scalar_laplacian_flat(n: usize) -> GradedSymbol {
        let mut l = GradedSymbol::zero(n, 2);
        for m in norm_squared_terms(n) {
            l.add_term(0, m, Mono::one(), ExtEndo::identity(n));
        }
        l
    }

    #[test]
    fn multi_index_enumeration() {
        let x = Mono::from_vars(&[0, 0, 2]);
        let all = multi_indices_below(&x, 2, 3);
        // 1, x0, x2, x0², x0x2
        assert_eq!(all.len(), 5);
        assert!(all.contains(&Mono::from_vars(&[0, 0])));
        assert!(!all.contains(&Mono::from_vars(&[2, 2])));
    }

    #[test]
    fn xi_derivative_quotient_rule() {
        // ∂_1 (||ξ||^{-2} ξ_1) = ||ξ||^{-2} - 2 ξ_1² ||ξ||^{-4}
        let d = xi_derivative(1, Mono::var(0), Mono::var(0), 2);
        assert_eq!(d, vec![(1, Mono::one(), int(1)), (2, Mono::from_vars(&[0, 0]), int(-2))]);
        // ∂_1 ∂_2 ξ_1 ξ_2 = 1
        let d = xi_derivative(0, Mono::from_vars(&[0, 1]), Mono::from_vars(&[0, 1]), 2);
        assert_eq!(d, vec![(0, Mono::one(), int(1))]);
    }

    #[test]
    fn budget_drops_deep_terms() {
        let mut s = GradedSymbol::zero(2, 1);
        let id = ExtEndo::identity(2);
        assert!(s.add_term(0, Mono::var(0), Mono::from_vars(&[0, 1]), id.clone()));
        assert!(!s.add_term(0, Mono::one(), Mono::from_vars(&[0, 1]), id.clone()));
        assert!(s.add_term(0, Mono::one(), Mono::var(0), id.clone()));
        assert!(!s.add_term(2, Mono::one(), Mono::one(), id));
        assert_eq!(s.x_budget(-1), Some(0));
        assert_eq!(s.x_budget(-2), None);
    }

    #[test]
    fn constant_factor_composes_as_matrix_product() {
        let alg = algebra(2).unwrap();
        let t = GradedSymbol::constant(alg.gamma(0).clone());
        let l = scalar_laplacian_flat(2);
        let tl = t.compose(&l);
        let expected = l.left_mul(alg.gamma(0));
        assert!(tl.equivalent(&expected));
    }

    #[test]
    fn representations_of_the_same_function_are_equivalent() {
        // ||ξ||^{-4} Σ ξ_a² == ||ξ||^{-2}
        let n = 3;
        let id = ExtEndo::identity(n);
        let mut a = GradedSymbol::zero(n, -2);
        for m in norm_squared_terms(n) {
            a.add_term(2, m, Mono::one(), id.clone());
        }
        let mut b = GradedSymbol::zero(n, -2);
        b.add_term(1, Mono::one(), Mono::one(), id);
        assert!(a.equivalent(&b));
        assert_ne!(a, b);
        assert!(!a.equivalent(&b.scale(&Qi::from_int(2))));
    }

    #[test]
    fn x_derivative_pairs_with_xi_derivative() {
        // a = ξ_1 (order 1), b = x_1 (order 0): a∘b = ξ_1 x_1 - i
        let n = 2;
        let id = ExtEndo::identity(n);
        let mut a = GradedSymbol::zero(n, 1);
        a.add_term(0, Mono::var(0), Mono::one(), id.clone());
        let mut b = GradedSymbol::zero(n, 0);
        b.add_term(0, Mono::one(), Mono::var(0), id.clone());
        let ab = a.compose(&b);
        let mut expected = GradedSymbol::zero(n, 1);
        expected.add_term(0, Mono::var(0), Mono::var(0), id.clone());
        expected.add_term(0, Mono::one(), Mono::one(), id.scale(&-Qi::i()));
        assert!(ab.equivalent(&expected));
        // b∘a has no derivative term
        let ba = b.compose(&a);
        let mut plain = GradedSymbol::zero(n, 1);
        plain.add_term(0, Mono::var(0), Mono::var(0), id);
        assert!(ba.equivalent(&plain));
    }

    #[test]
    fn origin_composition_agrees_with_full_composition() {
        let c = crate::curvature::sample_curvature(4, 9, 2).unwrap();
        let d = super::hodge::hodge_dirac_symbol(&c).unwrap();
        let sq = d.compose(&d);
        let inv = super::inverse::inverse_power(&sq, 2).unwrap();
        for (a, b) in [(&d, &d), (&sq, &inv), (&d, &inv)] {
            assert!(a.compose_at_origin(b).equivalent(&a.compose(b).at_origin()));
        }
    }
}
