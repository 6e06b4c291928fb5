use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Int(i128),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(super) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    while let Some(&c) = chars.peek() {
        let here = pos;
        if c == '\n' {
            chars.next();
            pos.line += 1;
            pos.column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            pos.column += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    pos.column += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), here));
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: i128 = 0;
            while let Some(&d) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(i128::from(digit)))
                    .ok_or_else(|| Diagnostic::at(here, "integer literal too large"))?;
                chars.next();
                pos.column += 1;
            }
            out.push((Tok::Int(v), here));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            other => return Err(Diagnostic::at(here, format!("unexpected character `{other}`"))),
        };
        chars.next();
        pos.column += 1;
        out.push((tok, here));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("Id +\n  G(12)").unwrap();
        assert_eq!(toks[0].0, Tok::Ident("Id".into()));
        assert_eq!((toks[2].1.line, toks[2].1.column), (2, 3));
        assert_eq!(toks[4].0, Tok::Int(12));
        let err = tokenize("Id $").unwrap_err();
        assert_eq!((err.line, err.column), (1, 4));
    }
}
