use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Expr, Generator, Index, Tensor};
use crate::curvature::CurvaturePoint;
use crate::error::{Error, Result};
use crate::exterior::trace::Letter;
use crate::exterior::{algebra, ExtEndo};
use crate::functionals::{EndoSplit, SecondOrderSplit, SecondOrderSymbol, Variant};
use crate::scalar::{Qi, Rational};

/// Values the named tensors refer to.
#[derive(Clone, Copy, Debug)]
pub struct Env<'a> {
    pub curv: &'a CurvaturePoint,
    pub u: Option<&'a [Rational]>,
    pub w: Option<&'a [Rational]>,
}

impl<'a> Env<'a> {
    pub fn new(curv: &'a CurvaturePoint) -> Self {
        Env { curv, u: None, w: None }
    }

    pub fn with_forms(curv: &'a CurvaturePoint, u: &'a [Rational], w: &'a [Rational]) -> Self {
        Env { curv, u: Some(u), w: Some(w) }
    }

    fn n(&self) -> usize {
        self.curv.n()
    }

    fn form(&self, which: Tensor) -> Result<&'a [Rational]> {
        let (v, name) = match which {
            Tensor::U => (self.u, "u"),
            _ => (self.w, "w"),
        };
        let v = v.ok_or_else(|| Error::Eval(format!("expression uses `{name}` but no value for it was given")))?;
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: v.len() });
        }
        Ok(v)
    }
}

/// A product of scalars and generators with a constant coefficient.
#[derive(Clone, Debug)]
struct Product {
    coeff: Qi,
    tensors: Vec<(Tensor, Vec<Index>)>,
    gens: Vec<(Generator, Index)>,
}

impl Product {
    fn unit(coeff: Qi) -> Self {
        Product { coeff, tensors: Vec::new(), gens: Vec::new() }
    }

    fn times(&self, o: &Product) -> Product {
        let mut tensors = self.tensors.clone();
        tensors.extend(o.tensors.iter().cloned());
        let mut gens = self.gens.clone();
        gens.extend(o.gens.iter().cloned());
        Product { coeff: self.coeff.clone() * o.coeff.clone(), tensors, gens }
    }

    fn letters(&self) -> Vec<char> {
        let mut out: Vec<char> = self
            .tensors
            .iter()
            .flat_map(|(_, ix)| ix.iter())
            .chain(self.gens.iter().map(|(_, i)| i))
            .filter_map(|i| match i {
                Index::Var(c) => Some(*c),
                Index::Fixed(_) => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn expand(e: &Expr) -> Vec<Product> {
    match e {
        Expr::Number(q) => vec![Product::unit(Qi::real(*q))],
        Expr::ImagUnit => vec![Product::unit(Qi::i())],
        Expr::Identity => vec![Product::unit(Qi::from_int(1))],
        Expr::Tensor { tensor, indices, .. } => {
            let mut p = Product::unit(Qi::from_int(1));
            p.tensors.push((*tensor, indices.clone()));
            vec![p]
        }
        Expr::Gen { gen, index, .. } => {
            let mut p = Product::unit(Qi::from_int(1));
            p.gens.push((*gen, *index));
            vec![p]
        }
        Expr::Neg(x) => expand(x).into_iter().map(|mut p| {
            p.coeff = -p.coeff;
            p
        }).collect(),
        Expr::Add(a, b) => {
            let mut out = expand(a);
            out.extend(expand(b));
            out
        }
        Expr::Sub(a, b) => {
            let mut out = expand(a);
            out.extend(expand(&Expr::Neg(b.clone())));
            out
        }
        Expr::Mul(a, b) => {
            let (pa, pb) = (expand(a), expand(b));
            pa.iter().flat_map(|x| pb.iter().map(move |y| x.times(y))).collect()
        }
    }
}

fn resolve(i: &Index, assign: &BTreeMap<char, usize>, n: usize) -> Result<usize> {
    match i {
        Index::Var(c) => Ok(assign[c]),
        Index::Fixed(k) if *k < n => Ok(*k),
        Index::Fixed(k) => Err(Error::IndexOutOfRange { index: k + 1, n }),
    }
}

fn tensor_value(env: &Env, t: Tensor, ix: &[usize]) -> Result<Rational> {
    let c = env.curv;
    Ok(match t {
        Tensor::Riemann => c.r(ix[0], ix[1], ix[2], ix[3]),
        Tensor::Ricci => c.ric(ix[0], ix[1]),
        Tensor::Scalar => c.scalar(),
        Tensor::Delta => Rational::from_integer(i128::from(ix[0] == ix[1])),
        Tensor::U | Tensor::W => env.form(t)?[ix[0]],
    })
}

/// Calls `f` with every assignment of `letters` to `0..n`, on top of `fixed`.
fn for_each_assignment(
    letters: &[char],
    fixed: &BTreeMap<char, usize>,
    n: usize,
    mut f: impl FnMut(&BTreeMap<char, usize>) -> Result<()>,
) -> Result<()> {
    let mut assign = fixed.clone();
    let mut digits = vec![0usize; letters.len()];
    loop {
        for (l, d) in letters.iter().zip(&digits) {
            assign.insert(*l, *d);
        }
        f(&assign)?;
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(());
            }
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Scalar coefficient and generator word of a product under an assignment.
fn instantiate(p: &Product, env: &Env, assign: &BTreeMap<char, usize>) -> Result<Option<(Qi, Vec<Letter>)>> {
    let n = env.n();
    let mut c = p.coeff.clone();
    for (t, ix) in &p.tensors {
        let idx = ix.iter().map(|i| resolve(i, assign, n)).collect::<Result<Vec<_>>>()?;
        let v = tensor_value(env, *t, &idx)?;
        if v.is_zero() {
            return Ok(None);
        }
        c = c.scale(&v);
    }
    let word = p
        .gens
        .iter()
        .map(|(g, i)| {
            let k = resolve(i, assign, n)?;
            Ok(match g {
                Generator::Plus => Letter::Plus(k),
                Generator::Minus => Letter::Minus(k),
                Generator::Gamma => Letter::Gamma(k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((c, word)))
}

fn check_free(e: &Expr, bindings: &BTreeMap<char, usize>, n: usize) -> Result<()> {
    for c in e.free_indices() {
        match bindings.get(&c) {
            None => return Err(Error::Eval(format!("free index `{c}` has no value"))),
            Some(&v) if v >= n => return Err(Error::IndexOutOfRange { index: v + 1, n }),
            _ => {}
        }
    }
    Ok(())
}

/// Evaluates an expression to a matrix, with the free indices taking the
/// zero-based values in `bindings` and repeated indices summed over `0..n`.
pub fn evaluate(e: &Expr, env: &Env, bindings: &BTreeMap<char, usize>) -> Result<ExtEndo> {
    e.validate()?;
    let n = env.n();
    check_free(e, bindings, n)?;
    let alg = algebra(n)?;
    let mut words: BTreeMap<Vec<Letter>, Qi> = BTreeMap::new();
    for p in expand(e) {
        let summed: Vec<char> = p.letters().into_iter().filter(|c| !bindings.contains_key(c)).collect();
        for_each_assignment(&summed, bindings, n, |assign| {
            if let Some((c, w)) = instantiate(&p, env, assign)? {
                *words.entry(w).or_insert_with(Qi::zero) += c;
            }
            Ok(())
        })?;
    }
    let mut acc = ExtEndo::zero(n);
    for (w, c) in words {
        if !c.is_zero() {
            acc.add_scaled(&c, &alg.word(&w));
        }
    }
    Ok(acc)
}

/// `e⁰ + e²_{pq} X^p Y^q` read off the expression for every value of the
/// free indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub variant: Variant,
    pub free: Vec<char>,
    /// Indexed by the free values in mixed radix `n`, first letter most significant.
    pub e0: Vec<Qi>,
    /// Indexed by the free values followed by `p`, `q`.
    pub e2: Vec<Qi>,
}

/// Splits an expression into a scalar part and a part quadratic in the
/// generator pair of `variant`. Every product must carry either no
/// generators or exactly that pair.
pub fn decompose(e: &Expr, env: &Env, variant: Variant, free: &[char]) -> Result<Decomposition> {
    e.validate()?;
    let n = env.n();
    let mut have = e.free_indices();
    let mut want = free.to_vec();
    have.sort_unstable();
    want.sort_unstable();
    if have != want {
        return Err(Error::Decomposition(format!(
            "expected free indices {{{}}}, expression has {{{}}}",
            want.iter().collect::<String>(),
            have.iter().collect::<String>()
        )));
    }
    let size = n.pow(free.len() as u32);
    let mut e0 = vec![Qi::zero(); size];
    let mut e2 = vec![Qi::zero(); size * n * n];
    let (first, second) = match variant {
        Variant::Gamma => (Generator::Gamma, Generator::Gamma),
        Variant::Lambda => (Generator::Plus, Generator::Minus),
    };
    for p in expand(e) {
        let quadratic = match p.gens.as_slice() {
            [] => false,
            [(g1, _), (g2, _)] if *g1 == first && *g2 == second => true,
            _ => {
                let shape = match variant {
                    Variant::Gamma => "G(p)*G(q)",
                    Variant::Lambda => "Lp(p)*Lm(q)",
                };
                let gens: Vec<String> = p.gens.iter().map(|(g, i)| format!("{}({i})", g.name())).collect();
                return Err(Error::Decomposition(format!(
                    "product with generators {} is neither scalar nor of the form {shape}",
                    gens.join("*")
                )));
            }
        };
        let letters = p.letters();
        let none = BTreeMap::new();
        for_each_assignment(&letters, &none, n, |assign| {
            let Some((c, word)) = instantiate(&p, env, assign)? else { return Ok(()) };
            let base = free.iter().fold(0, |acc, l| acc * n + assign[l]);
            if quadratic {
                let idx = |l: &Letter| match l {
                    Letter::Plus(k) | Letter::Minus(k) | Letter::Gamma(k) => *k,
                };
                e2[(base * n + idx(&word[0])) * n + idx(&word[1])] += c;
            } else {
                e0[base] += c;
            }
            Ok(())
        })?;
    }
    Ok(Decomposition { variant, free: free.to_vec(), e0, e2 })
}

impl Decomposition {
    pub fn endo_split(&self) -> Result<EndoSplit> {
        if !self.free.is_empty() {
            return Err(Error::Decomposition("an endomorphism must have no free indices".into()));
        }
        Ok(EndoSplit { variant: self.variant, e0: self.e0[0].clone(), e2: self.e2.clone() })
    }
}

/// Builds `F^{ab} ξ_a ξ_b + G^a ξ_a + H` from expressions with free indices
/// `a, b` (for `F`), `a` (for `G`) and none (for `H`), together with the
/// decomposition of `F`.
pub fn second_order_from_exprs(
    f: &Expr,
    g: Option<&Expr>,
    h: Option<&Expr>,
    env: &Env,
    variant: Variant,
) -> Result<(SecondOrderSymbol, SecondOrderSplit)> {
    let n = env.n();
    let split = decompose(f, env, variant, &['a', 'b'])?;
    let mut fm = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            fm.push(evaluate(f, env, &[('a', a), ('b', b)].into_iter().collect())?);
        }
    }
    let gm = match g {
        Some(g) => {
            if g.free_indices() != vec!['a'] {
                return Err(Error::Decomposition("the first-order coefficient must have the single free index `a`".into()));
            }
            (0..n).map(|a| evaluate(g, env, &[('a', a)].into_iter().collect())).collect::<Result<Vec<_>>>()?
        }
        None => vec![ExtEndo::zero(n); n],
    };
    let hm = match h {
        Some(h) => {
            if !h.free_indices().is_empty() {
                return Err(Error::Decomposition("the zeroth-order coefficient must have no free indices".into()));
            }
            evaluate(h, env, &BTreeMap::new())?
        }
        None => ExtEndo::zero(n),
    };
    Ok((
        SecondOrderSymbol { f: fm, g: gm, h: hm },
        SecondOrderSplit { variant, f0: split.e0, f2: split.e2 },
    ))
}
