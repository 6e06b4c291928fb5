//! Invariants over random inputs.

use std::collections::BTreeMap;

use hodge_wres::curvature::{sample_curvature, OneFormJet};
use hodge_wres::dsl::random::{endo_text, nested_text};
use hodge_wres::dsl::{evaluate, parse, Env, Expr, Index};
use hodge_wres::exterior::algebra;
use hodge_wres::exterior::trace::{trace_word, Letter};
use hodge_wres::functionals::{metric_functional, DiracContext, Variant};
use hodge_wres::scalar::{Qi, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn eval0(e: &Expr, env: &Env) -> hodge_wres::exterior::ExtEndo {
    evaluate(e, env, &BTreeMap::new()).unwrap()
}

/// Renames every index letter through `f`.
fn rename(e: &Expr, f: &dyn Fn(char) -> char) -> Expr {
    let idx = |i: &Index| match i {
        Index::Var(c) => Index::Var(f(*c)),
        fixed => *fixed,
    };
    match e {
        Expr::Tensor { tensor, indices, at } => {
            Expr::Tensor { tensor: *tensor, indices: indices.iter().map(idx).collect(), at: *at }
        }
        Expr::Gen { gen, index, at } => Expr::Gen { gen: *gen, index: idx(index), at: *at },
        Expr::Neg(x) => Expr::Neg(Box::new(rename(x, f))),
        Expr::Add(a, b) => Expr::Add(Box::new(rename(a, f)), Box::new(rename(b, f))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(rename(a, f)), Box::new(rename(b, f))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(rename(a, f)), Box::new(rename(b, f))),
        leaf => leaf.clone(),
    }
}

fn letter(code: u8, n: usize) -> Letter {
    let p = (code as usize / 3) % n;
    match code % 3 {
        0 => Letter::Plus(p),
        1 => Letter::Minus(p),
        _ => Letter::Gamma(p),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let text = nested_text(&mut rng(seed), 4);
        let e = parse(&text).unwrap();
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn evaluation_is_linear(seed in any::<u64>(), k in -5i128..=5) {
        let mut r = rng(seed);
        let curv = sample_curvature(4, seed, 2).unwrap();
        let u: Vec<Rational> = OneFormJet::random(4, &mut r, false).value;
        let env = Env::with_forms(&curv, &u, &u);
        let (a, b) = (endo_text(&mut r, Variant::Gamma), endo_text(&mut r, Variant::Lambda));
        let sum = eval0(&parse(&format!("({a}) + ({b})")).unwrap(), &env);
        prop_assert_eq!(sum, eval0(&parse(&a).unwrap(), &env).add(&eval0(&parse(&b).unwrap(), &env)));
        let scaled = eval0(&parse(&format!("{k}*({a})")).unwrap(), &env);
        prop_assert_eq!(scaled, eval0(&parse(&a).unwrap(), &env).scale(&Qi::from_int(k)));
    }

    #[test]
    fn summed_indices_can_be_renamed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let curv = sample_curvature(4, seed, 2).unwrap();
        let u: Vec<Rational> = OneFormJet::random(4, &mut r, false).value;
        let env = Env::with_forms(&curv, &u, &u);
        let e = parse(&endo_text(&mut r, Variant::Lambda)).unwrap();
        let renamed = rename(&e, &|c| match c { 'p' => 'x', 'q' => 'y', 'r' => 'p', 's' => 'z', o => o });
        prop_assert_eq!(eval0(&e, &env), eval0(&renamed, &env));
    }

    #[test]
    fn traces_are_cyclic_and_match_dense(a in prop::collection::vec(any::<u8>(), 0..5), b in prop::collection::vec(any::<u8>(), 0..5)) {
        let n = 4;
        let alg = algebra(n).unwrap();
        let wa: Vec<Letter> = a.iter().map(|&c| letter(c, n)).collect();
        let wb: Vec<Letter> = b.iter().map(|&c| letter(c, n)).collect();
        let ab: Vec<Letter> = wa.iter().chain(&wb).copied().collect();
        let ba: Vec<Letter> = wb.iter().chain(&wa).copied().collect();
        let dense = alg.word(&ab).trace();
        prop_assert_eq!(&dense, &alg.word(&ba).trace());
        prop_assert_eq!(trace_word(n, &ab), dense);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn metric_is_bilinear(seed in any::<u64>(), a in -4i128..=4, b in 1i128..=4) {
        let n = 4;
        let mut r = rng(seed);
        let ctx = DiracContext::new(sample_curvature(n, seed, 2).unwrap(), Some(seed)).unwrap();
        let u = OneFormJet::random(n, &mut r, true);
        let w1 = OneFormJet::random(n, &mut r, true);
        let w2 = OneFormJet::random(n, &mut r, true);
        let (qa, qb) = (Rational::from_integer(a), Rational::new(1, b));
        let mix = |x: &Rational, y: &Rational| qa * x + qb * y;
        let w = OneFormJet::with_jet(
            w1.value.iter().zip(&w2.value).map(|(x, y)| mix(x, y)).collect(),
            w1.jet.iter().zip(&w2.jet).map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| mix(x, y)).collect()).collect(),
        ).unwrap();
        let lhs = metric_functional(&ctx, &u, &w).unwrap().lhs.unwrap();
        let d1 = metric_functional(&ctx, &u, &w1).unwrap().lhs.unwrap();
        let d2 = metric_functional(&ctx, &u, &w2).unwrap().lhs.unwrap();
        prop_assert_eq!(lhs, d1.scale(&qa) + d2.scale(&qb));
    }
}
