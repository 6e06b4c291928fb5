//! Traces of generator words without building matrices.
//!
//! A sorted word `λ₊^{p1}…λ₊^{pk} λ₋^{q1}…λ₋^{qk}` is traced by peeling off
//! `λ₊^{p1}` and pairing it with each `λ₋^{qj}`:
//!
//! ```text
//! Tr(word) = ½ Σ_j (-1)^{k-j} δ^{p1 qj} Tr(word without p1, qj)
//! ```
//!
//! with `Tr(id) = 2^n`. Arbitrary words are first brought to that sorted form
//! with `λ₋^q λ₊^p = δ^{pq} - λ₊^p λ₋^q`; γ letters are expanded as
//! `γ^p = -iλ₊^p + iλ₋^p`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{int, Qi, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Plus(usize),
    Minus(usize),
    Gamma(usize),
}

/// Trace of the sorted word `λ₊^{ps[0]}…λ₊^{ps[k-1]} λ₋^{qs[0]}…λ₋^{qs[k-1]}`.
pub fn trace_sorted(n: usize, ps: &[usize], qs: &[usize]) -> Result<Rational> {
    if ps.len() != qs.len() {
        return Err(Error::LengthMismatch(format!(
            "{} raising and {} lowering operators",
            ps.len(),
            qs.len()
        )));
    }
    Ok(sorted_rec(n, ps, qs))
}

fn sorted_rec(n: usize, ps: &[usize], qs: &[usize]) -> Rational {
    let k = ps.len();
    if k == 0 {
        return int(1i128 << n);
    }
    let mut acc = Rational::zero();
    let mut rest = Vec::with_capacity(k - 1);
    for j in 0..k {
        if ps[0] != qs[j] {
            continue;
        }
        rest.clear();
        rest.extend(qs[..j].iter().chain(&qs[j + 1..]).copied());
        let t = sorted_rec(n, &ps[1..], &rest);
        if (k - 1 - j).is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / int(2)
}

/// A sorted word `λ₊…λ₊ λ₋…λ₋` with an integer coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedTerm {
    pub coeff: i64,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// Rewrites a word of `λ±` letters as a sum of sorted words.
///
/// Panics on γ letters; expand them first.
pub fn normal_order(word: &[Letter]) -> Vec<SortedTerm> {
    let mut out = Vec::new();
    normal_order_into(word.to_vec(), 1, &mut out);
    out
}

fn normal_order_into(word: Vec<Letter>, coeff: i64, out: &mut Vec<SortedTerm>) {
    let swap_at = word
        .windows(2)
        .position(|w| matches!((w[0], w[1]), (Letter::Minus(_), Letter::Plus(_))));
    let Some(i) = swap_at else {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for l in &word {
            match *l {
                Letter::Plus(p) => plus.push(p),
                Letter::Minus(q) => minus.push(q),
                Letter::Gamma(_) => panic!("normal_order expects λ letters only"),
            }
        }
        out.push(SortedTerm { coeff, plus, minus });
        return;
    };
    let (Letter::Minus(q), Letter::Plus(p)) = (word[i], word[i + 1]) else { unreachable!() };
    if p == q {
        let mut shorter = word.clone();
        shorter.drain(i..i + 2);
        normal_order_into(shorter, coeff, out);
    }
    let mut swapped = word;
    swapped.swap(i, i + 1);
    normal_order_into(swapped, -coeff, out);
}

/// Trace of an arbitrary product of `λ₊`, `λ₋`, `γ` letters via normal ordering
/// and the pairing recursion.
pub fn trace_word(n: usize, word: &[Letter]) -> Qi {
    let mut expanded: Vec<(Qi, Vec<Letter>)> = vec![(Qi::from_int(1), Vec::with_capacity(word.len()))];
    for l in word {
        match *l {
            Letter::Gamma(p) => {
                let mut next = Vec::with_capacity(expanded.len() * 2);
                for (c, w) in expanded {
                    let mut wp = w.clone();
                    wp.push(Letter::Plus(p));
                    next.push((-(c.clone() * Qi::i()), wp));
                    let mut wm = w;
                    wm.push(Letter::Minus(p));
                    next.push((c * Qi::i(), wm));
                }
                expanded = next;
            }
            other => expanded.iter_mut().for_each(|(_, w)| w.push(other)),
        }
    }
    let mut total = Qi::zero();
    for (c, w) in expanded {
        for term in normal_order(&w) {
            if term.plus.len() != term.minus.len() {
                continue;
            }
            let t = sorted_rec(n, &term.plus, &term.minus) * int(term.coeff as i128);
            total += c.scale(&t);
        }
    }
    total
}

/// Closed form `Tr(λ₊^{p1}λ₋^{q1} … λ₊^{pk}λ₋^{qk})` for `k ≤ 3`.
pub fn alternating_closed_form(n: usize, ps: &[usize], qs: &[usize]) -> Result<Rational> {
    if ps.len() != qs.len() {
        return Err(Error::LengthMismatch(format!("{} vs {}", ps.len(), qs.len())));
    }
    let d = |a: usize, b: usize| i128::from(a == b);
    let pow = |e: i32| -> Rational {
        if e >= 0 {
            int(1i128 << e)
        } else {
            Rational::new(1, 1i128 << -e)
        }
    };
    let n = n as i32;
    Ok(match ps.len() {
        0 => pow(n),
        1 => pow(n - 1) * int(d(ps[0], qs[0])),
        2 => pow(n - 2) * int(d(ps[0], qs[0]) * d(ps[1], qs[1]) + d(ps[0], qs[1]) * d(ps[1], qs[0])),
        3 => {
            const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let sum: i128 = PERMS
                .iter()
                .map(|s| d(ps[0], qs[s[0]]) * d(ps[1], qs[s[1]]) * d(ps[2], qs[s[2]]))
                .sum();
            let cyclic = d(ps[0], qs[1]) * d(ps[1], qs[2]) * d(ps[2], qs[0]);
            pow(n) * (Rational::new(sum, 8) - Rational::new(cyclic, 4))
        }
        k => return Err(Error::LengthMismatch(format!("no closed form for k = {k}"))),
    })
}

/// `λ₊^{p1}λ₋^{q1} … λ₊^{pk}λ₋^{qk}` as a letter word.
pub fn alternating_word(ps: &[usize], qs: &[usize]) -> Vec<Letter> {
    ps.iter().zip(qs).flat_map(|(&p, &q)| [Letter::Plus(p), Letter::Minus(q)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::algebra;
    use crate::scalar::rat;

    #[test]
    fn first_levels_of_the_recursion() {
        assert_eq!(trace_sorted(4, &[], &[]).unwrap(), int(16));
        assert_eq!(trace_sorted(4, &[1], &[1]).unwrap(), int(8));
        assert_eq!(trace_sorted(4, &[1], &[2]).unwrap(), int(0));
        assert!(trace_sorted(4, &[1, 2], &[1]).is_err());
        // λ₊^a λ₊^b λ₋^b λ₋^a is a product of two number operators
        assert_eq!(trace_sorted(4, &[0, 1], &[1, 0]).unwrap(), int(4));
        assert_eq!(trace_sorted(4, &[0, 1], &[0, 1]).unwrap(), int(-4));
        assert_eq!(trace_sorted(4, &[0, 0], &[0, 0]).unwrap(), int(0));
    }

    #[test]
    fn normal_ordering_single_swap() {
        let terms = normal_order(&[Letter::Minus(2), Letter::Plus(2)]);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0], SortedTerm { coeff: 1, plus: vec![], minus: vec![] });
        assert_eq!(terms[1], SortedTerm { coeff: -1, plus: vec![2], minus: vec![2] });
    }

    #[test]
    fn recursion_agrees_with_matrices_exhaustively_k2() {
        let n = 3;
        let alg = algebra(n).unwrap();
        for code in 0..81 {
            let idx = [code % 3, (code / 3) % 3, (code / 9) % 3, code / 27];
            let word = alternating_word(&idx[..2], &idx[2..]);
            assert_eq!(trace_word(n, &word), alg.word(&word).trace());
            let closed = alternating_closed_form(n, &idx[..2], &idx[2..]).unwrap();
            assert_eq!(Qi::real(closed), alg.word(&word).trace());
        }
    }

    #[test]
    fn gamma_words() {
        let n = 4;
        let alg = algebra(n).unwrap();
        let w = [Letter::Gamma(0), Letter::Gamma(1), Letter::Plus(1), Letter::Minus(0)];
        assert_eq!(trace_word(n, &w), alg.word(&w).trace());
        assert_eq!(trace_word(n, &[Letter::Gamma(2), Letter::Gamma(2)]), Qi::from_int(16));
        assert_eq!(alternating_closed_form(2, &[0], &[0]).unwrap(), int(2));
        assert_eq!(alternating_closed_form(1, &[0, 0], &[0, 0]).unwrap(), rat(1, 1));
    }
}
