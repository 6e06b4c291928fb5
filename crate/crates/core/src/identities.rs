//! Trace identities for words in `λ₊`, `λ₋`, `γ`, checked against dense
//! traces of the matrices.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::curvature::CurvaturePoint;
use crate::error::Result;
use crate::exterior::trace::{alternating_closed_form, alternating_word, trace_sorted, trace_word, Letter};
use crate::exterior::{algebra, ExtEndo, ExteriorAlgebra};
use crate::residue::pow2;
use crate::scalar::{int, Qi, Rational};

use Letter::{Gamma, Minus, Plus};

/// Outcome of checking one identity over many index values.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub n: usize,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str, n: usize) -> Self {
        IdentityCheck { name: name.to_string(), n, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

fn delta(a: usize, b: usize) -> Rational {
    int(i128::from(a == b))
}

/// `δ^p_r δ^q_s - δ^p_s δ^q_r`
fn eps(p: usize, q: usize, r: usize, s: usize) -> Rational {
    delta(p, r) * delta(q, s) - delta(p, s) * delta(q, r)
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(k as u32)).map(move |mut code| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        v
    })
}

/// The pairing recursion for sorted words against dense traces, over
/// `samples` random words with up to four raising operators.
pub fn recursion_against_dense(n: usize, samples: usize, rng: &mut impl Rng) -> Result<IdentityCheck> {
    let alg = algebra(n)?;
    let mut check = IdentityCheck::new("sorted-word recursion", n);
    for _ in 0..samples {
        let k = rng.gen_range(0..=4);
        let ps: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let qs: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let word: Vec<Letter> = ps.iter().map(|&p| Plus(p)).chain(qs.iter().map(|&q| Minus(q))).collect();
        let rec = Qi::real(trace_sorted(n, &ps, &qs)?);
        let dense = alg.word(&word).trace();
        check.record(rec == dense, || format!("p={ps:?} q={qs:?}: recursion {rec}, dense {dense}"));
    }
    Ok(check)
}

/// Closed forms of `Tr(λ₊λ₋ … λ₊λ₋)` for one, two and three pairs; every
/// index tuple is tried for up to two pairs, and `samples` random ones for
/// three when `n > 4`.
pub fn alternating_traces(n: usize, samples: usize, rng: &mut impl Rng) -> Result<Vec<IdentityCheck>> {
    let alg = algebra(n)?;
    let mut out = Vec::new();
    for k in 1..=3 {
        let mut check = IdentityCheck::new(&format!("alternating trace, {k} pairs"), n);
        let run = |idx: &[usize], check: &mut IdentityCheck| -> Result<()> {
            let (ps, qs) = idx.split_at(k);
            let closed = Qi::real(alternating_closed_form(n, ps, qs)?);
            let word = alternating_word(ps, qs);
            let dense = alg.word(&word).trace();
            let rec = trace_word(n, &word);
            check.record(closed == dense && rec == dense, || {
                format!("p={ps:?} q={qs:?}: closed {closed}, dense {dense}, recursion {rec}")
            });
            Ok(())
        };
        if k < 3 || n <= 4 {
            for idx in tuples(n, 2 * k) {
                run(&idx, &mut check)?;
            }
        } else {
            for _ in 0..samples {
                let idx: Vec<usize> = (0..2 * k).map(|_| rng.gen_range(0..n)).collect();
                run(&idx, &mut check)?;
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// `Tr(γ^pγ^qλ₊^rλ₋^s)` and `Tr(γ^pγ^qλ₊^rλ₋^sλ₊^tλ₋^z)` in closed form, for
/// every index tuple.
pub fn gamma_lambda_traces(n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = algebra(n)?;
    let mut four = IdentityCheck::new("Tr(γγλ₊λ₋)", n);
    for idx in tuples(n, 4) {
        let [p, q, r, s] = idx[..] else { unreachable!() };
        let closed = pow2(n as i32 - 1) * (delta(p, q) * delta(r, s) - eps(p, q, r, s) / int(2));
        let expanded =
            pow2(n as i32 - 2) * (int(2) * delta(p, q) * delta(r, s) + delta(p, s) * delta(q, r) - delta(p, r) * delta(q, s));
        let dense = alg.word(&[Gamma(p), Gamma(q), Plus(r), Minus(s)]).trace();
        four.record(Qi::real(closed) == dense && closed == expanded, || {
            format!("p,q,r,s={:?}: closed {closed}, dense {dense}", idx)
        });
    }
    let mut six = IdentityCheck::new("Tr(γγλ₊λ₋λ₊λ₋)", n);
    for idx in tuples(n, 6) {
        let [p, q, r, s, t, z] = idx[..] else { unreachable!() };
        let closed = pow2(n as i32 - 2) * delta(p, q) * (delta(r, s) * delta(t, z) + delta(r, z) * delta(s, t))
            - pow2(n as i32 - 3)
                * (delta(r, s) * eps(p, q, t, z)
                    + delta(s, t) * eps(p, q, r, z)
                    + delta(t, z) * eps(p, q, r, s)
                    + delta(r, z) * eps(p, q, s, t));
        let dense = alg.word(&[Gamma(p), Gamma(q), Plus(r), Minus(s), Plus(t), Minus(z)]).trace();
        six.record(Qi::real(closed) == dense, || format!("p,q,r,s,t,z={:?}: closed {closed}, dense {dense}", idx));
    }
    let mut expansion = IdentityCheck::new("γγ in terms of λ₊λ₋", n);
    for idx in tuples(n, 2) {
        let [p, q] = idx[..] else { unreachable!() };
        let lhs = alg.word(&[Gamma(p), Gamma(q)]);
        let mut rhs = ExtEndo::scalar(n, &Qi::real(delta(p, q)));
        for (c, w) in [
            (-1, vec![Plus(q), Minus(p)]),
            (1, vec![Plus(p), Minus(q)]),
            (-1, vec![Plus(p), Plus(q)]),
            (-1, vec![Minus(p), Minus(q)]),
        ] {
            rhs.add_scaled(&Qi::from_int(c), &alg.word(&w));
        }
        expansion.record(lhs == rhs, || format!("p={p} q={q}"));
    }
    Ok(vec![four, six, expansion])
}

/// `Σ coeff · word` over all index tuples of the given arity.
fn contracted(alg: &ExteriorAlgebra, arity: usize, f: impl Fn(&[usize]) -> (Rational, Vec<Letter>)) -> ExtEndo {
    let mut acc = ExtEndo::zero(alg.n());
    for idx in tuples(alg.n(), arity) {
        let (c, w) = f(&idx);
        if !c.is_zero() {
            acc.add_scaled(&Qi::real(c), &alg.word(&w));
        }
    }
    acc
}

/// The curvature contractions of traces of generator words.
pub fn curvature_traces(curv: &CurvaturePoint) -> Result<Vec<IdentityCheck>> {
    let n = curv.n();
    let alg = algebra(n)?;
    let r = curv.scalar();
    let p2 = |k: i32| pow2(n as i32 + k);
    let tr = |prefix: &[Letter], k: &ExtEndo| alg.word(prefix).mul(k).trace();
    let mut out = Vec::new();

    let mut c = IdentityCheck::new("Tr(λ₊^pλ₋^q) Ric_pq", n);
    let k = contracted(alg, 2, |i| (curv.ric(i[0], i[1]), vec![Plus(i[0]), Minus(i[1])]));
    let (lhs, rhs) = (k.trace(), Qi::real(p2(-1) * r));
    c.record(lhs == rhs, || format!("{lhs} vs {rhs}"));
    out.push(c);

    let mut c = IdentityCheck::new("Tr(λ₊^pλ₋^q)(R_paqb + R_qapb)", n);
    for a in 0..n {
        for b in 0..n {
            let k = contracted(alg, 2, |i| {
                let (p, q) = (i[0], i[1]);
                (curv.r(p, a, q, b) + curv.r(q, a, p, b), vec![Plus(p), Minus(q)])
            });
            let (lhs, rhs) = (k.trace(), Qi::real(p2(0) * curv.ric(a, b)));
            c.record(lhs == rhs, || format!("a={a} b={b}: {lhs} vs {rhs}"));
        }
    }
    out.push(c);

    let quartic = contracted(alg, 4, |i| {
        let (p, q, rr, s) = (i[0], i[1], i[2], i[3]);
        (curv.r(s, rr, q, p) + curv.r(s, q, rr, p), vec![Plus(p), Minus(q), Plus(rr), Minus(s)])
    });
    let mut c = IdentityCheck::new("Tr(λ₊^pλ₋^qλ₊^rλ₋^s)(R_srqp + R_sqrp)", n);
    let (lhs, rhs) = (quartic.trace(), Qi::real(-p2(-2) * r));
    c.record(lhs == rhs, || format!("{lhs} vs {rhs}"));
    out.push(c);

    let ric_pm = contracted(alg, 2, |i| (curv.ric(i[0], i[1]), vec![Plus(i[0]), Minus(i[1])]));
    let mut c4 = IdentityCheck::new("Tr(λ₊^pλ₋^qλ₊^rλ₋^s) Ric_rs", n);
    let mut c5 = IdentityCheck::new("Tr(γ^pγ^qλ₊^rλ₋^s) Ric_rs", n);
    for p in 0..n {
        for q in 0..n {
            let lhs = tr(&[Plus(p), Minus(q)], &ric_pm);
            let rhs = Qi::real(p2(-2) * (delta(p, q) * r + curv.ric(p, q)));
            c4.record(lhs == rhs, || format!("p={p} q={q}: {lhs} vs {rhs}"));
            let lhs = tr(&[Gamma(p), Gamma(q)], &ric_pm);
            let rhs = Qi::real(p2(-1) * delta(p, q) * r);
            c5.record(lhs == rhs, || format!("p={p} q={q}: {lhs} vs {rhs}"));
        }
    }
    out.push(c4);
    out.push(c5);

    let mut c6 = IdentityCheck::new("Tr(λ₊^pλ₋^qλ₊^rλ₋^s)(R_rasb + R_sarb)", n);
    let mut c7 = IdentityCheck::new("Tr(γ^pγ^qλ₊^rλ₋^s)(R_rasb + R_sarb)", n);
    for a in 0..n {
        for b in 0..n {
            let k = contracted(alg, 2, |i| {
                let (rr, s) = (i[0], i[1]);
                (curv.r(rr, a, s, b) + curv.r(s, a, rr, b), vec![Plus(rr), Minus(s)])
            });
            for p in 0..n {
                for q in 0..n {
                    let lhs = tr(&[Plus(p), Minus(q)], &k);
                    let rhs = Qi::real(
                        p2(-2) * (int(2) * delta(p, q) * curv.ric(a, b) + curv.r(q, a, p, b) + curv.r(p, a, q, b)),
                    );
                    c6.record(lhs == rhs, || format!("p={p} q={q} a={a} b={b}: {lhs} vs {rhs}"));
                    let lhs = tr(&[Gamma(p), Gamma(q)], &k);
                    let rhs = Qi::real(p2(0) * delta(p, q) * curv.ric(a, b));
                    c7.record(lhs == rhs, || format!("p={p} q={q} a={a} b={b}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    out.push(c6);
    out.push(c7);

    let mut c8 = IdentityCheck::new("Tr(λ₊^pλ₋^qλ₊^rλ₋^sλ₊^tλ₋^z)(R_ztsr + R_zstr)", n);
    let mut c9 = IdentityCheck::new("Tr(γ^pγ^qλ₊^rλ₋^sλ₊^tλ₋^z)(R_ztsr + R_zstr)", n);
    let k = contracted(alg, 4, |i| {
        let (rr, s, t, z) = (i[0], i[1], i[2], i[3]);
        (curv.r(z, t, s, rr) + curv.r(z, s, t, rr), vec![Plus(rr), Minus(s), Plus(t), Minus(z)])
    });
    for p in 0..n {
        for q in 0..n {
            let lhs = tr(&[Plus(p), Minus(q)], &k);
            let rhs = Qi::real(p2(-3) * (-r * delta(p, q) + int(2) * curv.ric(p, q)));
            c8.record(lhs == rhs, || format!("p={p} q={q}: {lhs} vs {rhs}"));
            let lhs = tr(&[Gamma(p), Gamma(q)], &k);
            let rhs = Qi::real(-p2(-2) * delta(p, q) * r);
            c9.record(lhs == rhs, || format!("p={p} q={q}: {lhs} vs {rhs}"));
        }
    }
    out.push(c8);
    out.push(c9);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::sample_curvature;
    use rand::SeedableRng;

    #[test]
    fn all_identities_hold_at_n4() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut checks = vec![recursion_against_dense(4, 200, &mut rng).unwrap()];
        checks.extend(alternating_traces(4, 0, &mut rng).unwrap());
        checks.extend(gamma_lambda_traces(4).unwrap());
        checks.extend(curvature_traces(&sample_curvature(4, 9, 2).unwrap()).unwrap());
        for c in checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
