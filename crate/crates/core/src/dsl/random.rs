//! Random expressions of the shapes the functionals accept, as source text.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::functionals::Variant;

const GAMMA_ENDO: &[&str] = &[
    "Id",
    "Rs*Id",
    "Ric[p,q]*G(p)*G(q)",
    "delta[p,q]*G(p)*G(q)",
    "u[p]*w[q]*G(p)*G(q)",
    "R[p,r,q,r]*G(q)*G(p)",
    "G(1)*G(2)",
    "G(2)*G(2)",
    "i*u[p]*u[q]*G(p)*G(q)",
    "R[p,q,r,s]*u[r]*w[s]*G(p)*G(q)",
];

const LAMBDA_ENDO: &[&str] = &[
    "Id",
    "Rs*Id",
    "Ric[p,q]*Lp(p)*Lm(q)",
    "delta[p,q]*Lp(p)*Lm(q)",
    "u[p]*w[q]*Lp(p)*Lm(q)",
    "R[p,r,q,r]*Lp(q)*Lm(p)",
    "Lp(1)*Lm(2)",
    "Lp(3)*Lm(3)",
    "i*w[p]*w[q]*Lp(q)*Lm(p)",
    "R[p,q,r,s]*u[r]*w[s]*Lp(p)*Lm(q)",
];

const GAMMA_SECOND: &[&str] = &[
    "delta[a,b]*Id",
    "Ric[a,b]*Id",
    "u[a]*w[b]*Id",
    "delta[a,b]*Ric[p,q]*G(p)*G(q)",
    "R[a,p,b,q]*G(p)*G(q)",
    "u[a]*w[b]*G(p)*G(p)",
    "delta[a,b]*u[p]*w[q]*G(p)*G(q)",
    "w[a]*u[p]*G(p)*G(b)",
    "G(a)*G(b)",
];

const LAMBDA_SECOND: &[&str] = &[
    "delta[a,b]*Id",
    "Ric[a,b]*Id",
    "u[a]*w[b]*Id",
    "delta[a,b]*Ric[p,q]*Lp(p)*Lm(q)",
    "R[a,p,b,q]*Lp(p)*Lm(q)",
    "R[p,a,q,b]*Lp(q)*Lm(p)",
    "u[a]*w[b]*Lp(p)*Lm(p)",
    "w[a]*u[p]*Lp(p)*Lm(b)",
    "Lp(a)*Lm(b)",
    "u[p]*w[q]*Lp(a)*Lm(p)*delta[b,q]",
];

const FIRST: &[&str] = &["u[a]*Id", "Ric[a,p]*G(p)", "G(a)", "u[p]*G(p)*G(a)*G(q)*w[q]", "w[a]*Lp(1)*Lm(1)"];

const ZEROTH: &[&str] = &[
    "Id",
    "Rs*Id",
    "Ric[p,q]*Lp(p)*Lm(q)",
    "G(1)*G(2)*Lp(3)*Lm(3)",
    "R[p,q,r,s]*Lp(p)*Lm(q)*Lp(r)*Lm(s)",
    "u[p]*w[p]*G(1)",
];

fn coefficient(rng: &mut impl Rng) -> String {
    let num = rng.gen_range(1..=5);
    let den = rng.gen_range(1..=3);
    if den == 1 {
        format!("{num}")
    } else {
        format!("{num}/{den}")
    }
}

fn combination(rng: &mut impl Rng, pool: &[&str], terms: std::ops::RangeInclusive<usize>) -> String {
    let k = rng.gen_range(terms);
    let mut out = String::new();
    for (j, t) in pool.choose_multiple(rng, k).enumerate() {
        let sign = if rng.gen_bool(0.5) { "-" } else { "+" };
        if j == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{}*{t}", coefficient(rng)));
    }
    out
}

/// `e⁰ + e²_{pq}XY` with no free indices.
pub fn endo_text(rng: &mut impl Rng, variant: Variant) -> String {
    let pool = match variant {
        Variant::Gamma => GAMMA_ENDO,
        Variant::Lambda => LAMBDA_ENDO,
    };
    combination(rng, pool, 2..=4)
}

/// `F^{ab}` with free indices `a, b`.
pub fn second_order_text(rng: &mut impl Rng, variant: Variant) -> String {
    let pool = match variant {
        Variant::Gamma => GAMMA_SECOND,
        Variant::Lambda => LAMBDA_SECOND,
    };
    combination(rng, pool, 2..=4)
}

/// `G^a` with free index `a`.
pub fn first_order_text(rng: &mut impl Rng) -> String {
    combination(rng, FIRST, 1..=2)
}

/// An arbitrary endomorphism with no free indices.
pub fn zeroth_order_text(rng: &mut impl Rng) -> String {
    combination(rng, ZEROTH, 1..=3)
}

/// A random well-formed expression with nested sums, products and
/// negations, used to exercise the parser and printer.
pub fn nested_text(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        let pool = [GAMMA_ENDO, LAMBDA_ENDO, ZEROTH].concat();
        return pool.choose(rng).unwrap().to_string();
    }
    match rng.gen_range(0..4) {
        0 => format!("{} + {}", nested_text(rng, depth - 1), nested_text(rng, depth - 1)),
        1 => format!("{} - ({})", nested_text(rng, depth - 1), nested_text(rng, depth - 1)),
        2 => format!("({})*{}", nested_text(rng, depth - 1), scalar_factor(rng)),
        _ => format!("-({})", nested_text(rng, depth - 1)),
    }
}

fn scalar_factor(rng: &mut impl Rng) -> String {
    ["Rs", "i", "(1/2)", "3", "Id", "G(1)", "-2/5"].choose(rng).unwrap().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use rand::SeedableRng;

    #[test]
    fn generated_text_parses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            for v in [Variant::Gamma, Variant::Lambda] {
                let e = parse(&endo_text(&mut rng, v)).unwrap();
                assert!(e.free_indices().is_empty());
                let f = parse(&second_order_text(&mut rng, v)).unwrap();
                assert_eq!(f.free_indices(), vec!['a', 'b']);
            }
            assert_eq!(parse(&first_order_text(&mut rng)).unwrap().free_indices(), vec!['a']);
            parse(&zeroth_order_text(&mut rng)).unwrap();
            parse(&nested_text(&mut rng, 4)).unwrap();
        }
    }
}
