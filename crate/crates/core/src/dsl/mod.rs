//! A small expression language for endomorphisms of the form algebra built
//! from curvature tensors, one-forms and the generators `λ₊`, `λ₋`, `γ`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := literal | 'i' | '-' factor | '(' expr ')'
//!         | tensor '[' idx (',' idx)* ']' | 'Rs'
//!         | gen '(' idx ')' | 'Id'
//! literal:= int ('/' int)?
//! tensor := 'R' | 'Ric' | 'delta' | 'u' | 'w'
//! gen    := 'Lp' | 'Lm' | 'G'
//! idx    := lowercase letter | positive integer (fixed coordinate, 1-based)
//! ```
//!
//! Repeated indices are summed. Products are evaluated literally left to
//! right, since the generators do not commute.

mod eval;
mod lexer;
mod parser;
pub mod random;

use std::collections::BTreeMap;
use std::fmt;

pub use eval::{decompose, evaluate, second_order_from_exprs, Decomposition, Env};
pub use parser::parse;

use crate::scalar::{format_rational, Rational};

/// Source position, 1-based. Positions never take part in AST equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn at(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { line: pos.line, column: pos.column, message: message.into() }
    }
}

impl From<Diagnostic> for crate::error::Error {
    fn from(d: Diagnostic) -> Self {
        crate::error::Error::Parse(d.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Var(char),
    /// Zero-based coordinate.
    Fixed(usize),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Var(c) => write!(f, "{c}"),
            Index::Fixed(k) => write!(f, "{}", k + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tensor {
    Riemann,
    Ricci,
    Scalar,
    Delta,
    U,
    W,
}

impl Tensor {
    pub fn name(self) -> &'static str {
        match self {
            Tensor::Riemann => "R",
            Tensor::Ricci => "Ric",
            Tensor::Scalar => "Rs",
            Tensor::Delta => "delta",
            Tensor::U => "u",
            Tensor::W => "w",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Tensor::Riemann => 4,
            Tensor::Ricci | Tensor::Delta => 2,
            Tensor::Scalar => 0,
            Tensor::U | Tensor::W => 1,
        }
    }

    fn from_name(s: &str) -> Option<Tensor> {
        Some(match s {
            "R" => Tensor::Riemann,
            "Ric" => Tensor::Ricci,
            "Rs" => Tensor::Scalar,
            "delta" => Tensor::Delta,
            "u" => Tensor::U,
            "w" => Tensor::W,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Plus,
    Minus,
    Gamma,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Plus => "Lp",
            Generator::Minus => "Lm",
            Generator::Gamma => "G",
        }
    }

    fn from_name(s: &str) -> Option<Generator> {
        Some(match s {
            "Lp" => Generator::Plus,
            "Lm" => Generator::Minus,
            "G" => Generator::Gamma,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    ImagUnit,
    Identity,
    Tensor { tensor: Tensor, indices: Vec<Index>, at: Pos },
    Gen { gen: Generator, index: Index, at: Pos },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn is_sum(&self) -> bool {
        matches!(self, Expr::Add(..) | Expr::Sub(..))
    }

    /// Indices left free after Einstein summation, in sorted order.
    pub fn free_indices(&self) -> Vec<char> {
        check(self).unwrap_or_default().into_iter().filter(|(_, (c, _))| *c == 1).map(|(k, _)| k).collect()
    }

    /// Checks the summation convention: every index letter appears at most
    /// twice in each product and all summands share the same free indices.
    pub fn validate(&self) -> Result<(), Diagnostic> {
        check(self).map(|_| ())
    }
}

type Counts = BTreeMap<char, (usize, Pos)>;

fn leaf_counts(indices: &[Index], at: Pos) -> Result<Counts, Diagnostic> {
    let mut c = Counts::new();
    for i in indices {
        if let Index::Var(v) = i {
            let e = c.entry(*v).or_insert((0, at));
            e.0 += 1;
            if e.0 > 2 {
                return Err(Diagnostic::at(at, format!("index `{v}` appears more than twice")));
            }
        }
    }
    Ok(c)
}

fn check(e: &Expr) -> Result<Counts, Diagnostic> {
    match e {
        Expr::Number(_) | Expr::ImagUnit | Expr::Identity => Ok(Counts::new()),
        Expr::Tensor { indices, at, .. } => leaf_counts(indices, *at),
        Expr::Gen { index, at, .. } => leaf_counts(std::slice::from_ref(index), *at),
        Expr::Neg(x) => check(x),
        Expr::Mul(a, b) => {
            let mut ca = check(a)?;
            for (k, (n, at)) in check(b)? {
                let e = ca.entry(k).or_insert((0, at));
                e.0 += n;
                e.1 = at;
                if e.0 > 2 {
                    return Err(Diagnostic::at(at, format!("index `{k}` appears more than twice")));
                }
            }
            Ok(ca)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let ca = check(a)?;
            let cb = check(b)?;
            let free = |c: &Counts| c.iter().filter(|(_, v)| v.0 == 1).map(|(k, _)| *k).collect::<Vec<_>>();
            let (fa, fb) = (free(&ca), free(&cb));
            if fa != fb {
                let at = cb.values().next().map(|v| v.1).or_else(|| ca.values().next().map(|v| v.1)).unwrap_or_default();
                return Err(Diagnostic::at(
                    at,
                    format!("summands have different free indices: {{{}}} and {{{}}}", join(&fa), join(&fb)),
                ));
            }
            let mut out = ca;
            for (k, v) in cb {
                let e = out.entry(k).or_insert(v);
                if v.0 > e.0 {
                    *e = v;
                }
            }
            Ok(out)
        }
    }
}

fn join(cs: &[char]) -> String {
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(q) => write!(f, "{}", format_rational(q)),
            Expr::ImagUnit => write!(f, "i"),
            Expr::Identity => write!(f, "Id"),
            Expr::Tensor { tensor, indices, .. } => {
                write!(f, "{}", tensor.name())?;
                if !indices.is_empty() {
                    let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                    write!(f, "[{}]", idx.join(","))?;
                }
                Ok(())
            }
            Expr::Gen { gen, index, .. } => write!(f, "{}({index})", gen.name()),
            Expr::Neg(x) => match **x {
                Expr::Number(_) | Expr::Add(..) | Expr::Sub(..) | Expr::Mul(..) | Expr::Neg(_) => write!(f, "-({x})"),
                _ => write!(f, "-{x}"),
            },
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                paren_if(f, b, b.is_sum())
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                paren_if(f, b, b.is_sum())
            }
            Expr::Mul(a, b) => {
                paren_if(f, a, a.is_sum())?;
                write!(f, "*")?;
                paren_if(f, b, b.is_sum() || matches!(**b, Expr::Mul(..)))
            }
        }
    }
}

fn paren_if(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_indices_and_validation() {
        let e = parse("Ric[p,q]*Lp(p)*Lm(q)").unwrap();
        assert!(e.free_indices().is_empty());
        let e = parse("R[a,p,b,q]*G(p)*G(q)").unwrap();
        assert_eq!(e.free_indices(), vec!['a', 'b']);
        let err = parse("Ric[p,q]*Lp(p)*Lm(p)").unwrap_err();
        assert!(err.message.contains("more than twice"), "{err}");
        assert_eq!((err.line, err.column), (1, 16));
        let err = parse("u[a] + w[b]").unwrap_err();
        assert!(err.message.contains("different free indices"), "{err}");
    }

    #[test]
    fn printing_is_canonical() {
        for (src, printed) in [
            ("Ric[p,q]*G(p)*G(q) - (1/2)*Rs*Id", "Ric[p,q]*G(p)*G(q) - 1/2*Rs*Id"),
            ("-(Id + Id)", "-(Id + Id)"),
            ("Id*(Id*Id)", "Id*(Id*Id)"),
            ("Id - (Id - Id)", "Id - (Id - Id)"),
            ("-3*G(1)", "-3*G(1)"),
            ("2*i*Lp(1)*Lm(2)", "2*i*Lp(1)*Lm(2)"),
        ] {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), printed);
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
