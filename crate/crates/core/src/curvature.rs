//! Algebraic curvature tensors at a point in normal coordinates.
//!
//! All indices are down and the metric at the point is `δ`. The contraction
//! convention is `Ric_{ab} = Σ_c R_{cacb}`, under which the round sphere has
//! positive Ricci curvature and `g_{ab} = δ_{ab} - ⅓ R_{acbd} x^c x^d`.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, parse_rational, rat, Rational};

/// Largest absolute entry of the random symmetric factors.
pub const SAMPLE_ENTRY_BOUND: i128 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvaturePoint {
    n: usize,
    riemann: Vec<Rational>,
    ricci: Vec<Rational>,
    scalar: Rational,
    einstein: Vec<Rational>,
}

fn flat4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

impl CurvaturePoint {
    /// Validates the symmetries of `riemann` (flat `n^4` array, index order
    /// `abcd`) and derives Ricci, scalar and Einstein tensors.
    pub fn from_riemann(n: usize, riemann: Vec<Rational>) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::BadDimension { n, min: 2 });
        }
        if riemann.len() != n.pow(4) {
            return Err(Error::LengthMismatch(format!("riemann has {} entries, expected {}", riemann.len(), n.pow(4))));
        }
        check_symmetries(n, &riemann)?;
        let ricci = ricci_of(n, &riemann)?;
        let scalar = scalar_of(n, &ricci);
        let einstein = einstein_of(n, &ricci, &scalar);
        Ok(CurvaturePoint { n, riemann, ricci, scalar, einstein })
    }

    pub fn flat(n: usize) -> Result<Self> {
        Self::from_riemann(n, vec![Rational::zero(); n.pow(4)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> Rational {
        self.riemann[flat4(self.n, a, b, c, d)]
    }

    pub fn ric(&self, a: usize, b: usize) -> Rational {
        self.ricci[a * self.n + b]
    }

    pub fn scalar(&self) -> Rational {
        self.scalar
    }

    pub fn einstein(&self, a: usize, b: usize) -> Rational {
        self.einstein[a * self.n + b]
    }

    pub fn riemann(&self) -> &[Rational] {
        &self.riemann
    }

    pub fn is_flat(&self) -> bool {
        self.riemann.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> CurvatureJson {
        let n = self.n;
        let riemann = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| (0..n).map(|d| format_rational(&self.r(a, b, c, d))).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CurvatureJson { n, riemann }
    }

    pub fn from_json(doc: &CurvatureJson) -> Result<Self> {
        let n = doc.n;
        let mut flat = Vec::with_capacity(n.pow(4));
        let shape_err = || Error::LengthMismatch(format!("riemann array is not {n}x{n}x{n}x{n}"));
        if doc.riemann.len() != n {
            return Err(shape_err());
        }
        for a in &doc.riemann {
            if a.len() != n {
                return Err(shape_err());
            }
            for b in a {
                if b.len() != n {
                    return Err(shape_err());
                }
                for c in b {
                    if c.len() != n {
                        return Err(shape_err());
                    }
                    for d in c {
                        flat.push(parse_rational(d)?);
                    }
                }
            }
        }
        Self::from_riemann(n, flat)
    }
}

/// On-disk form: `{ "n": 4, "riemann": [[[["p/q", ...]]]] }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurvatureJson {
    pub n: usize,
    pub riemann: Vec<Vec<Vec<Vec<String>>>>,
}

fn check_symmetries(n: usize, r: &[Rational]) -> Result<()> {
    let at = |a, b, c, d| r[flat4(n, a, b, c, d)];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = at(a, b, c, d);
                    if v != -at(b, a, c, d) || v != -at(a, b, d, c) {
                        return Err(Error::Symmetry(format!("antisymmetry at ({a},{b},{c},{d})")));
                    }
                    if v != at(c, d, a, b) {
                        return Err(Error::Symmetry(format!("pair symmetry at ({a},{b},{c},{d})")));
                    }
                    if !(v + at(a, c, d, b) + at(a, d, b, c)).is_zero() {
                        return Err(Error::Symmetry(format!("first Bianchi identity at ({a},{b},{c},{d})")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `Ric_{ab} = Σ_c R_{cacb}`; rejects tensors without the curvature symmetries.
pub fn ricci_of(n: usize, riemann: &[Rational]) -> Result<Vec<Rational>> {
    check_symmetries(n, riemann)?;
    let mut ric = vec![Rational::zero(); n * n];
    for a in 0..n {
        for b in 0..n {
            ric[a * n + b] = (0..n).map(|c| riemann[flat4(n, c, a, c, b)]).sum();
        }
    }
    Ok(ric)
}

pub fn scalar_of(n: usize, ricci: &[Rational]) -> Rational {
    (0..n).map(|a| ricci[a * n + a]).sum()
}

/// `G_{ab} = Ric_{ab} - ½ R δ_{ab}`.
pub fn einstein_of(n: usize, ricci: &[Rational], scalar: &Rational) -> Vec<Rational> {
    let half_r = scalar * rat(1, 2);
    (0..n * n)
        .map(|k| if k / n == k % n { ricci[k] - half_r } else { ricci[k] })
        .collect()
}

/// Kulkarni–Nomizu product `(h ∧○ k)_{abcd} = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad`.
pub fn kulkarni_nomizu(n: usize, h: &[Rational], k: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n.pow(4)];
    let m = |s: &[Rational], i: usize, j: usize| s[i * n + j];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    out[flat4(n, a, b, c, d)] =
                        m(h, a, c) * m(k, b, d) + m(h, b, d) * m(k, a, c) - m(h, a, d) * m(k, b, c) - m(h, b, c) * m(k, a, d);
                }
            }
        }
    }
    out
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut s = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = int(rng.gen_range(-SAMPLE_ENTRY_BOUND..=SAMPLE_ENTRY_BOUND));
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    s
}

fn check_sample_dimension(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) || n > crate::exterior::MAX_DIM {
        return Err(Error::BadDimension { n, min: 2 });
    }
    Ok(())
}

/// A random algebraic curvature tensor: the sum of `terms` Kulkarni–Nomizu
/// products of small-integer symmetric matrices.
pub fn sample_curvature(n: usize, seed: u64, terms: usize) -> Result<CurvaturePoint> {
    check_sample_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut riemann = vec![Rational::zero(); n.pow(4)];
    for _ in 0..terms {
        let h = random_symmetric(n, &mut rng);
        let k = random_symmetric(n, &mut rng);
        for (acc, v) in riemann.iter_mut().zip(kulkarni_nomizu(n, &h, &k)) {
            *acc += v;
        }
    }
    CurvaturePoint::from_riemann(n, riemann)
}

/// Projects an arbitrary rank-4 tensor onto the algebraic curvature tensors:
/// antisymmetrise both pairs, symmetrise under pair exchange, then remove the
/// totally antisymmetric part that carries the Bianchi defect.
pub fn bianchi_projection(n: usize, raw: &[Rational]) -> Vec<Rational> {
    let at = |t: &[Rational], a, b, c, d| t[flat4(n, a, b, c, d)];
    let mut anti = vec![Rational::zero(); n.pow(4)];
    let mut pair = vec![Rational::zero(); n.pow(4)];
    let mut out = vec![Rational::zero(); n.pow(4)];
    let idx = || (0..n.pow(4)).map(move |k| (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n));
    for (k, (a, b, c, d)) in idx().enumerate() {
        anti[k] = (at(raw, a, b, c, d) - at(raw, b, a, c, d) - at(raw, a, b, d, c) + at(raw, b, a, d, c)) * rat(1, 4);
    }
    for (k, (a, b, c, d)) in idx().enumerate() {
        pair[k] = (at(&anti, a, b, c, d) + at(&anti, c, d, a, b)) * rat(1, 2);
    }
    for (k, (a, b, c, d)) in idx().enumerate() {
        let cyclic = at(&pair, a, b, c, d) + at(&pair, a, c, d, b) + at(&pair, a, d, b, c);
        out[k] = at(&pair, a, b, c, d) - cyclic * rat(1, 3);
    }
    out
}

/// Cross-check generator: Bianchi projection of a random small-integer tensor.
pub fn sample_curvature_projected(n: usize, seed: u64) -> Result<CurvaturePoint> {
    check_sample_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Rational> = (0..n.pow(4))
        .map(|_| int(rng.gen_range(-SAMPLE_ENTRY_BOUND..=SAMPLE_ENTRY_BOUND)))
        .collect();
    CurvaturePoint::from_riemann(n, bianchi_projection(n, &raw))
}

/// The space form `R_{abcd} = 2(δ_ac δ_bd - δ_ad δ_bc)`, i.e. `δ ∧○ δ`.
pub fn constant_curvature(n: usize) -> Result<CurvaturePoint> {
    let mut delta = vec![Rational::zero(); n * n];
    for i in 0..n {
        delta[i * n + i] = int(1);
    }
    CurvaturePoint::from_riemann(n, kulkarni_nomizu(n, &delta, &delta))
}

/// First-order jet of a one-form at the point: `u_p + u_{pa} x^a`, with an
/// optional symmetric second-order part `½ u_{pab} x^a x^b` used only to probe
/// locality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFormJet {
    pub value: Vec<Rational>,
    pub jet: Vec<Vec<Rational>>,
    pub second: Option<Vec<Vec<Vec<Rational>>>>,
}

impl OneFormJet {
    pub fn constant(value: Vec<Rational>) -> Self {
        let n = value.len();
        OneFormJet { value, jet: vec![vec![Rational::zero(); n]; n], second: None }
    }

    pub fn with_jet(value: Vec<Rational>, jet: Vec<Vec<Rational>>) -> Result<Self> {
        let n = value.len();
        if jet.len() != n || jet.iter().any(|row| row.len() != n) {
            return Err(Error::LengthMismatch(format!("one-form jet must be {n}x{n}")));
        }
        Ok(OneFormJet { value, jet, second: None })
    }

    /// `dx^p` (zero-based).
    pub fn basis(n: usize, p: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[p] = int(1);
        Self::constant(v)
    }

    pub fn n(&self) -> usize {
        self.value.len()
    }

    pub fn random(n: usize, rng: &mut impl Rng, with_jet: bool) -> Self {
        let mut draw = || Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        let value = (0..n).map(|_| draw()).collect();
        let jet = (0..n)
            .map(|_| (0..n).map(|_| if with_jet { draw() } else { Rational::zero() }).collect())
            .collect();
        OneFormJet { value, jet, second: None }
    }

    /// `u_p w_p` at the point.
    pub fn dot(&self, other: &OneFormJet) -> Rational {
        self.value.iter().zip(&other.value).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_form_contractions() {
        let c = constant_curvature(4).unwrap();
        assert_eq!(c.r(0, 1, 0, 1), int(2));
        assert_eq!(c.r(0, 1, 1, 0), int(-2));
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(c.ric(a, b), if a == b { int(6) } else { int(0) });
                assert_eq!(c.einstein(a, b), if a == b { int(-6) } else { int(0) });
            }
        }
        assert_eq!(c.scalar(), int(24));
    }

    #[test]
    fn flat_and_empty_samples() {
        let z = sample_curvature(4, 3, 0).unwrap();
        assert!(z.is_flat());
        assert_eq!(z.scalar(), int(0));
        assert_eq!(z, CurvaturePoint::flat(4).unwrap());
    }

    #[test]
    fn odd_or_zero_dimension_rejected() {
        assert!(sample_curvature(3, 0, 1).is_err());
        assert!(sample_curvature(0, 0, 1).is_err());
        assert!(CurvaturePoint::flat(5).is_err());
    }

    #[test]
    fn broken_symmetry_rejected() {
        let mut r = constant_curvature(4).unwrap().riemann().to_vec();
        r[flat4(4, 0, 1, 0, 1)] += int(1);
        assert!(matches!(CurvaturePoint::from_riemann(4, r.clone()), Err(Error::Symmetry(_))));
        assert!(ricci_of(4, &r).is_err());
    }

    #[test]
    fn projection_fixes_curvature_tensors() {
        let c = sample_curvature(4, 11, 2).unwrap();
        assert_eq!(bianchi_projection(4, c.riemann()), c.riemann());
        let p = sample_curvature_projected(4, 5).unwrap();
        assert!(!p.is_flat());
    }

    #[test]
    fn json_round_trip() {
        let c = sample_curvature(4, 1, 2).unwrap();
        let doc = serde_json::to_string(&c.to_json()).unwrap();
        let back: CurvatureJson = serde_json::from_str(&doc).unwrap();
        assert_eq!(CurvaturePoint::from_json(&back).unwrap(), c);
    }

    #[test]
    fn einstein_trace() {
        let c = sample_curvature(6, 2, 3).unwrap();
        let tr: Rational = (0..6).map(|a| c.einstein(a, a)).sum();
        assert_eq!(tr, c.scalar() * (int(1) - int(3)));
    }
}
