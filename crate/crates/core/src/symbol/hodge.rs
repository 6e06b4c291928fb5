//! Symbols attached to the Hodge–Dirac operator `D = d + d*` at a point.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{norm_squared_terms, GradedSymbol, Mono};
use crate::curvature::{CurvaturePoint, OneFormJet};
use crate::error::{Error, Result};
use crate::exterior::trace::Letter;
use crate::exterior::{algebra, ExtEndo, ExteriorAlgebra};
use crate::scalar::{int, rat, Qi, Rational};

/// `Σ coeff · word` over generator words.
fn contract(alg: &ExteriorAlgebra, terms: impl IntoIterator<Item = (Rational, Vec<Letter>)>) -> ExtEndo {
    let mut grouped: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
    for (c, w) in terms {
        if !c.is_zero() {
            *grouped.entry(w).or_insert_with(Rational::zero) += c;
        }
    }
    let mut acc = ExtEndo::zero(alg.n());
    for (w, c) in grouped {
        if !c.is_zero() {
            acc.add_scaled(&Qi::real(c), &alg.word(&w));
        }
    }
    acc
}

fn indices2(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn indices3(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    indices2(n).flat_map(move |(a, b)| (0..n).map(move |c| (a, b, c)))
}

fn indices4(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    indices2(n).flat_map(move |(a, b)| indices2(n).map(move |(c, d)| (a, b, c, d)))
}

use Letter::{Minus, Plus};

/// `σ(D) = -γ^p ξ_p - ⅓ i λ₋^p R_{sapb} x^a x^b ξ_s - ⅓ λ₋^p λ₊^r λ₋^s (R_{srpa} + R_{spra}) x^a`.
pub fn hodge_dirac_symbol(curv: &CurvaturePoint) -> Result<GradedSymbol> {
    let n = curv.n();
    let alg = algebra(n)?;
    let mut d = GradedSymbol::zero(n, 1);
    for p in 0..n {
        d.add_term(0, Mono::var(p), Mono::one(), alg.gamma(p).neg());
    }
    let third_i = Qi::new(int(0), rat(-1, 3));
    for s in 0..n {
        for a in 0..n {
            for b in 0..n {
                let m = contract(alg, (0..n).map(|p| (curv.r(s, a, p, b), vec![Minus(p)])));
                d.add_term(0, Mono::var(s), Mono::from_vars(&[a, b]), m.scale(&third_i));
            }
        }
    }
    for a in 0..n {
        let m = contract(
            alg,
            indices3(n).map(|(p, r, s)| ((curv.r(s, r, p, a) + curv.r(s, p, r, a)) * rat(-1, 3), vec![Minus(p), Plus(r), Minus(s)])),
        );
        d.add_term(0, Mono::one(), Mono::var(a), m);
    }
    Ok(d)
}

/// Clifford multiplication by a one-form, `γ^p (u_p + u_{pa} x^a + ½ u_{pab} x^a x^b)`.
pub fn clifford_of_one_form(u: &OneFormJet) -> Result<GradedSymbol> {
    let n = u.n();
    let alg = algebra(n)?;
    let gamma_sum = |coef: &dyn Fn(usize) -> Rational| contract(alg, (0..n).map(|p| (coef(p), vec![Letter::Gamma(p)])));
    let mut out = GradedSymbol::zero(n, 0);
    out.add_term(0, Mono::one(), Mono::one(), gamma_sum(&|p| u.value[p]));
    for a in 0..n {
        out.add_term(0, Mono::one(), Mono::var(a), gamma_sum(&|p| u.jet[p][a]));
    }
    if let Some(second) = &u.second {
        for (a, b) in indices2(n) {
            out.add_term(0, Mono::one(), Mono::from_vars(&[a, b]), gamma_sum(&|p| second[p][a][b] * rat(1, 2)));
        }
    }
    Ok(out)
}

/// A scalar function near the point, as a Taylor polynomial of degree ≤ 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarJet {
    pub n: usize,
    pub coeffs: BTreeMap<Mono, Rational>,
}

impl ScalarJet {
    pub fn constant(n: usize, c: Rational) -> Self {
        ScalarJet { n, coeffs: [(Mono::one(), c)].into_iter().collect() }
    }

    /// Coordinate function `x^a`.
    pub fn coordinate(n: usize, a: usize) -> Self {
        ScalarJet { n, coeffs: [(Mono::var(a), int(1))].into_iter().collect() }
    }

    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Self {
        let mut coeffs = BTreeMap::new();
        let mut monos = vec![Mono::one()];
        for _ in 0..3 {
            let last: Vec<Mono> = monos.clone();
            for m in last {
                for a in 0..n {
                    monos.push(m.mul(Mono::var(a)));
                }
            }
        }
        monos.sort();
        monos.dedup();
        for m in monos {
            let v = Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            if !v.is_zero() {
                coeffs.insert(m, v);
            }
        }
        ScalarJet { n, coeffs }
    }

    pub fn derivative(&self, a: usize) -> ScalarJet {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            if let Some(lower) = m.div(Mono::var(a)) {
                *coeffs.entry(lower).or_insert_with(Rational::zero) += c * int(i128::from(m.exp(a)));
            }
        }
        ScalarJet { n: self.n, coeffs }
    }

    /// Multiplication operator, order 0.
    pub fn to_symbol(&self) -> GradedSymbol {
        let mut out = GradedSymbol::zero(self.n, 0);
        let id = ExtEndo::identity(self.n);
        for (m, c) in &self.coeffs {
            out.add_term(0, Mono::one(), *m, id.scale_rational(c));
        }
        out
    }
}

/// Symbol of `[A, b]` for a first-order differential operator `A` and a
/// function `b`: `-i ∂_{ξ_p} σ(A) ∂_p b`, an order-0 multiplication operator.
pub fn commutator_with_function(a: &GradedSymbol, b: &ScalarJet) -> Result<GradedSymbol> {
    if a.leading() != 1 {
        return Err(Error::WrongOrder { expected: 1, found: a.leading() });
    }
    if a.terms().any(|t| t.inv_norm_power > 0 || t.xi.degree() > 1) {
        return Err(Error::Eval("commutator needs a first-order differential operator".into()));
    }
    let n = a.n();
    let grads: Vec<ScalarJet> = (0..n).map(|p| b.derivative(p)).collect();
    let mut out = GradedSymbol::zero(n, 0);
    for t in a.terms().filter(|t| t.xi.degree() == 1) {
        let p = (0..n).find(|&p| t.xi.exp(p) == 1).unwrap();
        for (m, c) in &grads[p].coeffs {
            out.add_term(0, Mono::one(), t.x.mul(*m), t.coeff.scale(&Qi::new(int(0), -*c)));
        }
    }
    Ok(out)
}

/// The three symbols of `D²` exactly as they are stated for normal coordinates:
///
/// ```text
/// a₂ = (δ_ab + ⅓ R_{acbd} x^c x^d) ξ_a ξ_b
/// a₁ = ⅔ i Ric_{ab} ξ_a x^b - ⅔ i λ₊^p λ₋^r (R_{rpab} + R_{rapb}) x^b ξ_a
/// a₀ = ⅔ λ₊^p λ₋^r Ric_{pr} + ⅓ λ₊^p λ₊^r λ₋^s λ₋^t (R_{tsrp} + R_{trsp})
/// ```
pub fn printed_dirac_squared(curv: &CurvaturePoint) -> Result<GradedSymbol> {
    let n = curv.n();
    let alg = algebra(n)?;
    let id = alg.identity();
    let mut out = GradedSymbol::zero(n, 2);
    for m in norm_squared_terms(n) {
        out.add_term(0, m, Mono::one(), id.clone());
    }
    for (a, b, c, d) in indices4(n) {
        let r = curv.r(a, c, b, d) * rat(1, 3);
        out.add_term(0, Mono::from_vars(&[a, b]), Mono::from_vars(&[c, d]), id.scale_rational(&r));
    }
    for (a, b) in indices2(n) {
        let lam = contract(
            alg,
            indices2(n).map(|(p, r)| (curv.r(r, p, a, b) + curv.r(r, a, p, b), vec![Plus(p), Minus(r)])),
        );
        let m = id.scale_rational(&curv.ric(a, b)).sub(&lam).scale(&Qi::new(int(0), rat(2, 3)));
        out.add_term(0, Mono::var(a), Mono::var(b), m);
    }
    let ric_part = contract(alg, indices2(n).map(|(p, r)| (curv.ric(p, r) * rat(2, 3), vec![Plus(p), Minus(r)])));
    let riem_part = contract(
        alg,
        indices4(n).map(|(p, r, s, t)| {
            ((curv.r(t, s, r, p) + curv.r(t, r, s, p)) * rat(1, 3), vec![Plus(p), Plus(r), Minus(s), Minus(t)])
        }),
    );
    out.add_term(0, Mono::one(), Mono::one(), ric_part.add(&riem_part));
    Ok(out)
}

/// The three leading symbols of `D^{-2k}` as stated in closed form, with the
/// leading curvature term read as `R_{acbd} x^c x^d`:
///
/// ```text
/// c_{2k}   = ||ξ||^{-2k-2} (δ_ab - k/3 R_{acbd} x^c x^d) ξ_a ξ_b
/// c_{2k+1} = -⅔ k i ||ξ||^{-2k-2} Ric_ab x^b ξ_a
///            + ⅔ k i ||ξ||^{-2k-2} λ₊^r λ₋^s (R_{srba} + R_{sbra}) x^a ξ_b
/// c_{2k+2} = k(k+1)/3 ||ξ||^{-2k-4} Ric_ab ξ_a ξ_b
///            - ⅔ k(k+1) ||ξ||^{-2k-4} λ₊^r λ₋^s (R_{srab} + R_{sarb}) ξ_a ξ_b
///            + ⅓ k ||ξ||^{-2k-2} λ₊^p λ₋^q λ₊^r λ₋^s (R_{sqrp} + R_{srqp})
/// ```
pub fn printed_dirac_inverse_power(curv: &CurvaturePoint, k: i64) -> Result<GradedSymbol> {
    if k <= 0 {
        return Err(Error::BadPower(k));
    }
    let n = curv.n();
    let alg = algebra(n)?;
    let id = alg.identity();
    let kr = int(i128::from(k));
    let s0 = k as u32 + 1;
    let mut out = GradedSymbol::zero(n, -2 * k as i32);
    for m in norm_squared_terms(n) {
        out.add_term(s0, m, Mono::one(), id.clone());
    }
    for (a, b, c, d) in indices4(n) {
        let r = -curv.r(a, c, b, d) * kr * rat(1, 3);
        out.add_term(s0, Mono::from_vars(&[a, b]), Mono::from_vars(&[c, d]), id.scale_rational(&r));
    }
    let two_thirds_ki = Qi::new(int(0), kr * rat(2, 3));
    for (a, b) in indices2(n) {
        // term x^a ξ_b
        let lam = contract(
            alg,
            indices2(n).map(|(r, s)| (curv.r(s, r, b, a) + curv.r(s, b, r, a), vec![Plus(r), Minus(s)])),
        );
        let m = lam.sub(&id.scale_rational(&curv.ric(b, a))).scale(&two_thirds_ki);
        out.add_term(s0, Mono::var(b), Mono::var(a), m);
    }
    let kk1 = kr * (kr + int(1));
    for (a, b) in indices2(n) {
        let lam = contract(
            alg,
            indices2(n).map(|(r, s)| (curv.r(s, r, a, b) + curv.r(s, a, r, b), vec![Plus(r), Minus(s)])),
        );
        let m = id.scale_rational(&(curv.ric(a, b) * kk1 * rat(1, 3))).sub(&lam.scale_rational(&(kk1 * rat(2, 3))));
        out.add_term(s0 + 1, Mono::from_vars(&[a, b]), Mono::one(), m);
    }
    let quartic = contract(
        alg,
        indices4(n).map(|(p, q, r, s)| {
            ((curv.r(s, q, r, p) + curv.r(s, r, q, p)) * kr * rat(1, 3), vec![Plus(p), Minus(q), Plus(r), Minus(s)])
        }),
    );
    out.add_term(s0, Mono::one(), Mono::one(), quartic);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{sample_curvature, CurvaturePoint};

    #[test]
    fn flat_dirac_symbol_is_minus_gamma_xi() {
        let flat = CurvaturePoint::flat(4).unwrap();
        let d = hodge_dirac_symbol(&flat).unwrap();
        assert_eq!(d.term_count(), 4);
        assert!(d.is_x_independent());
        let alg = algebra(4).unwrap();
        for t in d.terms() {
            let p = (0..4).find(|&p| t.xi.exp(p) == 1).unwrap();
            assert_eq!(t.coeff, &alg.gamma(p).neg());
        }
    }

    #[test]
    fn leading_part_at_origin_is_curvature_free() {
        let c = sample_curvature(4, 5, 2).unwrap();
        let flat = hodge_dirac_symbol(&CurvaturePoint::flat(4).unwrap()).unwrap();
        let d = hodge_dirac_symbol(&c).unwrap();
        assert!(d.at_origin().equivalent(&flat));
    }

    #[test]
    fn one_form_images() {
        let n = 4;
        let alg = algebra(n).unwrap();
        let u = clifford_of_one_form(&OneFormJet::basis(n, 0)).unwrap();
        assert!(u.equivalent(&GradedSymbol::constant(alg.gamma(0).clone())));
        let mut jet = vec![vec![Rational::zero(); n]; n];
        jet[2][1] = int(3);
        let w = clifford_of_one_form(&OneFormJet::with_jet(vec![Rational::zero(); n], jet).unwrap()).unwrap();
        assert_eq!(w.term_count(), 1);
        let t = w.terms().next().unwrap();
        assert_eq!(t.x, Mono::var(1));
        assert_eq!(t.coeff, &alg.gamma(2).scale(&Qi::from_int(3)));
    }

    #[test]
    fn commutator_with_coordinate_is_gamma() {
        let flat = CurvaturePoint::flat(4).unwrap();
        let d = hodge_dirac_symbol(&flat).unwrap();
        let t = commutator_with_function(&d, &ScalarJet::coordinate(4, 0)).unwrap();
        let alg = algebra(4).unwrap();
        // [D, x^1] = -i ∂_ξ1 (-γ^p ξ_p) = i γ^1
        assert!(t.equivalent(&GradedSymbol::constant(alg.gamma(0).scale(&Qi::i()))));
        assert!(commutator_with_function(&GradedSymbol::identity(4), &ScalarJet::coordinate(4, 0)).is_err());
    }
}
