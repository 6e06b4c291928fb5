use super::lexer::{tokenize, Tok};
use super::{Diagnostic, Expr, Generator, Index, Pos, Tensor};
use crate::scalar::Rational;

/// Parses and validates an expression.
pub fn parse(src: &str) -> Result<Expr, Diagnostic> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    let (tok, pos) = p.peek();
    if *tok != Tok::Eof {
        return Err(Diagnostic::at(pos, format!("unexpected {} after expression", tok.describe())));
    }
    e.validate()?;
    Ok(e)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> (&Tok, Pos) {
        let (t, p) = &self.toks[self.at];
        (t, *p)
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, Diagnostic> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(pos)
        } else {
            Err(Diagnostic::at(pos, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.factor()?;
        while *self.peek().0 == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, Diagnostic> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(num) => {
                if *self.peek().0 == Tok::Slash {
                    self.bump();
                    let (den_tok, den_pos) = self.bump();
                    let Tok::Int(den) = den_tok else {
                        return Err(Diagnostic::at(den_pos, format!("expected a denominator, found {}", den_tok.describe())));
                    };
                    if den == 0 {
                        return Err(Diagnostic::at(den_pos, "zero denominator"));
                    }
                    Ok(Expr::Number(Rational::new(num, den)))
                } else {
                    Ok(Expr::Number(Rational::from_integer(num)))
                }
            }
            Tok::Minus => Ok(match self.factor()? {
                Expr::Number(q) => Expr::Number(-q),
                other => Expr::Neg(Box::new(other)),
            }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.named(&name, pos),
            other => Err(Diagnostic::at(pos, format!("expected an operand, found {}", other.describe()))),
        }
    }

    fn named(&mut self, name: &str, pos: Pos) -> Result<Expr, Diagnostic> {
        match name {
            "i" => return Ok(Expr::ImagUnit),
            "Id" => return Ok(Expr::Identity),
            _ => {}
        }
        if let Some(tensor) = Tensor::from_name(name) {
            let mut indices = Vec::new();
            if *self.peek().0 == Tok::LBracket {
                self.bump();
                indices.push(self.index()?);
                while *self.peek().0 == Tok::Comma {
                    self.bump();
                    indices.push(self.index()?);
                }
                self.expect(Tok::RBracket)?;
            }
            if indices.len() != tensor.arity() {
                return Err(Diagnostic::at(
                    pos,
                    format!("`{name}` takes {} indices, got {}", tensor.arity(), indices.len()),
                ));
            }
            return Ok(Expr::Tensor { tensor, indices, at: pos });
        }
        if let Some(gen) = Generator::from_name(name) {
            self.expect(Tok::LParen)?;
            let index = self.index()?;
            self.expect(Tok::RParen)?;
            return Ok(Expr::Gen { gen, index, at: pos });
        }
        Err(Diagnostic::at(pos, format!("unknown identifier `{name}`")))
    }

    fn index(&mut self) -> Result<Index, Diagnostic> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Ident(s) if s.len() == 1 && s.chars().all(|c| c.is_ascii_lowercase()) => {
                Ok(Index::Var(s.chars().next().unwrap()))
            }
            Tok::Int(k) if k >= 1 => Ok(Index::Fixed((k - 1) as usize)),
            other => Err(Diagnostic::at(
                pos,
                format!("expected an index (a lowercase letter or a positive integer), found {}", other.describe()),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> Diagnostic {
        parse(src).unwrap_err()
    }

    #[test]
    fn grammar_examples() {
        let e = parse("Ric[p,q]*Lp(p)*Lm(q)").unwrap();
        assert!(matches!(e, Expr::Mul(..)));
        parse("R[s,q,r,p]*Lp(p)*Lm(q)*Lp(r)*Lm(s) + R[s,r,q,p]*Lp(p)*Lm(q)*Lp(r)*Lm(s)").unwrap();
        parse("Ric[p,q]*G(p)*G(q) - (1/2)*Rs*Id").unwrap();
        assert_eq!(parse("-1/2").unwrap(), Expr::Number(Rational::new(-1, 2)));
        assert_eq!(parse("(3)").unwrap(), Expr::Number(Rational::from_integer(3)));
    }

    #[test]
    fn diagnostics() {
        let e = err("Ric[p,q]*Foo(p)");
        assert_eq!((e.line, e.column), (1, 10));
        assert!(e.message.contains("unknown identifier `Foo`"));
        let e = err("Id +\n  R[a,b,c]");
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("takes 4 indices, got 3"));
        let e = err("Rs[a]");
        assert!(e.message.contains("takes 0 indices"));
        let e = err("G(0)");
        assert!(e.message.contains("expected an index"));
        let e = err("(Id");
        assert!(e.message.contains("expected `)`"));
        let e = err("Id Id");
        assert!(e.message.contains("after expression"));
        let e = err("1/0");
        assert!(e.message.contains("zero denominator"));
        let e = err("delta[p,p]*u[p]");
        assert!(e.message.contains("more than twice"));
        assert!(err("").message.contains("expected an operand"));
    }
}
