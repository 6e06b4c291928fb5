//! Parametrices and negative powers of Laplace-type symbols.
//!
//! A Laplace-type symbol in normal coordinates has the shape
//!
//! ```text
//! a₂ = ||ξ||² + X(x, ξ)          X scalar, quadratic in x
//! a₁ = i P_{ab} ξ_a x^b + o(x)
//! a₀ = Q + o(1)
//! ```
//!
//! [`parametrix`] inverts it order by order through the composition formula;
//! [`inverse_power`] writes down the three leading symbols of `L^{-k}` in
//! closed form:
//!
//! ```text
//! c_{2k}   = ||ξ||^{-2k} - k ||ξ||^{-2k-2} X
//! c_{2k+1} = -k ||ξ||^{-2k-2} a₁
//! c_{2k+2} = -k ||ξ||^{-2k-2} Q + k(k+1) ||ξ||^{-2k-4} (P_{ab} - ⅓Ric_{ab}) ξ_a ξ_b
//! ```
//!
//! where `⅓Ric_{ab} ξ_a ξ_b` is read off `X` as `½ Δ_x X`.

use std::collections::BTreeMap;

use super::{norm_squared_terms, GradedSymbol, Mono};
use crate::error::{Error, Result};
use crate::exterior::ExtEndo;
use crate::scalar::Qi;

/// The pieces of a Laplace-type symbol that its inverse powers depend on.
#[derive(Clone, Debug)]
pub struct LaplaceData {
    pub n: usize,
    /// `X`: the x-quadratic part of `a₂`, as `(ξ, x) → scalar matrix`.
    pub x2: BTreeMap<(Mono, Mono), ExtEndo>,
    /// `a₁` restricted to its `x`-linear part.
    pub a1: BTreeMap<(Mono, Mono), ExtEndo>,
    /// `Q = a₀(0)`.
    pub q: ExtEndo,
}

fn check_leading(l: &GradedSymbol) -> Result<()> {
    if l.leading() != 2 {
        return Err(Error::WrongOrder { expected: 2, found: l.leading() });
    }
    if l.parts().iter().any(|p| p.inv_norm_power != 0) {
        return Err(Error::NotLaplaceType("symbol carries ||ξ|| denominators".into()));
    }
    let n = l.n();
    let mut principal: BTreeMap<Mono, ExtEndo> = BTreeMap::new();
    for t in l.terms().filter(|t| t.homogeneity == 2) {
        if t.coeff.as_scalar().is_none() {
            return Err(Error::NotLaplaceType("leading symbol is not scalar".into()));
        }
        if t.x.degree() == 0 {
            principal.insert(t.xi, t.coeff.clone());
        }
    }
    if principal.is_empty() {
        return Err(Error::NotInvertible);
    }
    let expected: BTreeMap<Mono, ExtEndo> =
        norm_squared_terms(n).into_iter().map(|m| (m, ExtEndo::identity(n))).collect();
    if principal != expected {
        return Err(Error::NotLaplaceType("principal symbol at x = 0 is not ||ξ||²·id".into()));
    }
    Ok(())
}

/// Extracts `X`, `a₁` and `Q`, checking the normal-coordinate shape.
pub fn laplace_data(l: &GradedSymbol) -> Result<LaplaceData> {
    check_leading(l)?;
    let n = l.n();
    let mut data = LaplaceData { n, x2: BTreeMap::new(), a1: BTreeMap::new(), q: ExtEndo::zero(n) };
    for t in l.terms() {
        match (t.homogeneity, t.x.degree()) {
            (2, 0) => {}
            (2, 2) => {
                data.x2.insert((t.xi, t.x), t.coeff.clone());
            }
            (2, _) => return Err(Error::NotLaplaceType("principal symbol has an x-linear part".into())),
            (1, 1) => {
                data.a1.insert((t.xi, t.x), t.coeff.clone());
            }
            (1, _) => return Err(Error::NotLaplaceType("first-order symbol does not vanish at x = 0".into())),
            (0, 0) => data.q = t.coeff.clone(),
            _ => {}
        }
    }
    Ok(data)
}

/// `||ξ||^{-2s} · Σ terms` filed at the given leading order.
fn with_norm_power(n: usize, leading: i32, s: u32, terms: &BTreeMap<(Mono, Mono), ExtEndo>, k: &Qi) -> GradedSymbol {
    let mut out = GradedSymbol::zero(n, leading);
    for ((xi, x), m) in terms {
        out.add_term(s, *xi, *x, m.scale(k));
    }
    out
}

/// Closed-form three leading symbols of `L^{-k}`.
pub fn inverse_power(l: &GradedSymbol, k: i64) -> Result<GradedSymbol> {
    if k <= 0 {
        return Err(Error::BadPower(k));
    }
    let data = laplace_data(l)?;
    let n = data.n;
    let ku = k as u32;
    let kq = Qi::from_int(i128::from(k));
    let leading = -2 * k as i32;
    let mut out = GradedSymbol::zero(n, leading);

    out.add_term(ku, Mono::one(), Mono::one(), ExtEndo::identity(n));
    out = out.add(&with_norm_power(n, leading, ku + 1, &data.x2, &-kq.clone()));
    out = out.add(&with_norm_power(n, leading, ku + 1, &data.a1, &-kq.clone()));
    out.add_term(ku + 1, Mono::one(), Mono::one(), data.q.scale(&-kq.clone()));

    // (P_{ab} - ⅓Ric_{ab}) ξ_a ξ_b = -i a₁|_{x→ξ} - ½ Δ_x X
    let mut quad: BTreeMap<(Mono, Mono), ExtEndo> = BTreeMap::new();
    let mut push = |key: (Mono, Mono), m: ExtEndo| match quad.get_mut(&key) {
        Some(acc) => *acc = acc.add(&m),
        None => {
            quad.insert(key, m);
        }
    };
    for ((xi, x), m) in &data.a1 {
        push((xi.mul(*x), Mono::one()), m.scale(&-Qi::i()));
    }
    for ((xi, x), m) in &data.x2 {
        if (0..n).any(|c| x.exp(c) == 2) {
            push((*xi, Mono::one()), m.neg());
        }
    }
    let kk1 = Qi::from_int(i128::from(k * (k + 1)));
    out = out.add(&with_norm_power(n, leading, ku + 2, &quad, &kk1));
    Ok(out)
}

/// Right parametrix `B` with `L∘B = 1` on the retained window.
///
/// `b₂ = a₂^{-1}` is the Neumann series of `(||ξ||² + Δ)^{-1}` to second
/// order in `x`; each lower symbol is `b_j = -a₂^{-1}·r_j`, where `r_j` is
/// the order `2 - j` part of `σ(L∘(b₂ + … + b_{j-1}))`. For `j = 3, 4` this
/// is the familiar `b₃ = b₂(-a₁b₂ + i∂_ξa₂∂_xb₂)` and its second-order
/// analogue.
pub fn parametrix(l: &GradedSymbol) -> Result<GradedSymbol> {
    check_leading(l)?;
    let n = l.n();
    // Δ = a₂ - ||ξ||², scalar and vanishing at x = 0
    let mut delta = GradedSymbol::zero(n, 2);
    for t in l.terms().filter(|t| t.homogeneity == 2 && t.x.degree() > 0) {
        delta.add_term(0, t.xi, t.x, t.coeff.clone());
    }
    let mut inv_norm = GradedSymbol::zero(n, -2);
    inv_norm.add_term(1, Mono::one(), Mono::one(), ExtEndo::identity(n));
    let t = inv_norm.pointwise(&delta).with_leading(0);
    let t2 = t.pointwise(&t);
    let neumann = GradedSymbol::identity(n).sub(&t).add(&t2);
    let b2 = inv_norm.pointwise(&neumann);

    let mut b = b2.clone();
    for offset in 1..=2 {
        let residual = l.compose(&b).level(-offset);
        let correction = b2.pointwise(&residual.with_leading(0)).with_leading(-2);
        b = b.sub(&correction);
    }
    Ok(b)
}

/// `L^{-k}` as the k-fold composition of the parametrix.
pub fn inverse_power_by_composition(l: &GradedSymbol, k: i64) -> Result<GradedSymbol> {
    if k <= 0 {
        return Err(Error::BadPower(k));
    }
    let b = parametrix(l)?;
    let mut acc = b.clone();
    for _ in 1..k {
        acc = acc.compose(&b);
    }
    Ok(acc)
}

impl GradedSymbol {
    /// Pointwise product (no derivative terms), truncated like `compose`.
    pub fn pointwise(&self, o: &GradedSymbol) -> GradedSymbol {
        let mut out = GradedSymbol::zero(self.n(), self.leading() + o.leading());
        for a in self.terms() {
            for b in o.terms() {
                let kept_level = out.x_budget(a.homogeneity + b.homogeneity);
                match kept_level {
                    Some(budget) if a.x.degree() + b.x.degree() <= budget => {}
                    _ => continue,
                }
                out.add_term(
                    a.inv_norm_power + b.inv_norm_power,
                    a.xi.mul(b.xi),
                    a.x.mul(b.x),
                    a.coeff.mul(b.coeff),
                );
            }
        }
        out
    }
}
