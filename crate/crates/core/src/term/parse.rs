use super::{Tm, Ty};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Lambda,
    Colon,
    Dot,
    LParen,
    RParen,
    Comma,
    Arrow,
    Times,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let at = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '*' | '×' => Tok::Times,
            '→' => Tok::Arrow,
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(Error::parse(at.0, at.1, "expected '->'"));
                }
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                toks.push((Tok::Num(s), at.0, at.1));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_' || d == '\'' || d == '′') || d == 'λ' {
                        break;
                    }
                    s.push(if d == '′' { '\'' } else { d });
                    bump(&mut chars);
                }
                toks.push((Tok::Ident(s), at.0, at.1));
                continue;
            }
            other => {
                return Err(Error::parse(
                    at.0,
                    at.1,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        bump(&mut chars);
        toks.push((tok, at.0, at.1));
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn ty(&mut self) -> Result<Ty> {
        let lhs = self.ty_prod()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(Ty::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prod(&mut self) -> Result<Ty> {
        let mut t = self.ty_atom()?;
        while self.peek() == Some(&Tok::Times) {
            self.pos += 1;
            t = Ty::prod(t, self.ty_atom()?);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> Result<Ty> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some(Tok::Ident(a)) => Ok(Ty::Atom(a)),
                _ => unreachable!(),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.err("expected a type"),
        }
    }

    fn term(&mut self) -> Result<Tm> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let x = match self.next() {
                Some(Tok::Ident(x)) => x,
                _ => {
                    self.pos -= 1;
                    return self.err("expected a variable after λ");
                }
            };
            self.expect(Tok::Colon, "':' after the bound variable")?;
            let ty = self.ty()?;
            self.expect(Tok::Dot, "'.' after the binder type")?;
            return Ok(Tm::lam(x, ty, self.term()?));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            t = Tm::app(t, self.atom()?);
        }
        if self.peek() == Some(&Tok::Lambda) {
            // trailing λ as the last argument: `f \x:A. x`
            t = Tm::app(t, self.term()?);
        }
        Ok(t)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Num(_) | Tok::LParen))
    }

    fn atom(&mut self) -> Result<Tm> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) if x == "p1" || x == "p2" => {
                self.pos += 1;
                let arg = self.atom()?;
                Ok(if x == "p1" {
                    Tm::proj1(arg)
                } else {
                    Tm::proj2(arg)
                })
            }
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(Tm::Var(x))
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Tm::Const(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.term()?;
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    let b = self.term()?;
                    self.expect(Tok::RParen, "')' closing the pair")?;
                    Ok(Tm::pair(a, b))
                } else {
                    self.expect(Tok::RParen, "')'")?;
                    Ok(a)
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Types: atoms, `A * B` (left-associative, binds tighter), `A -> B`
/// (right-associative); `×` and `→` are accepted too.
pub fn parse_type(src: &str) -> Result<Ty> {
    let mut lx = lex(src)?;
    let t = lx.ty()?;
    lx.finish()?;
    Ok(t)
}

/// Terms: `\x:T. t`, application by juxtaposition, `(t, u)`, `p1 t`,
/// `p2 t`, numerals. Identifiers parse as variables; see
/// [`super::Signature::resolve`] for turning declared names into constants.
pub fn parse_term(src: &str) -> Result<Tm> {
    let mut lx = lex(src)?;
    let t = lx.term()?;
    lx.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_round_trip() {
        for src in [
            "A",
            "A -> B -> C",
            "(A -> B) -> C",
            "A*B*C",
            "A*(B*C)",
            "A' * B -> A * B",
            "(A -> B) * A -> B",
        ] {
            let t = parse_type(src).unwrap();
            assert_eq!(parse_type(&t.to_string()).unwrap(), t, "{src}");
        }
        assert_eq!(parse_type("A×B → A").unwrap().to_string(), "A*B -> A");
    }

    #[test]
    fn terms_round_trip() {
        for src in [
            "\\p:A'*B. (f (p1 p), p2 p)",
            "(\\x:N. (x, x)) (p1 (1, 2))",
            "g (add 2 3)",
            "p1 p q",
            "f (\\x:A. x) y",
            "λx:A. x",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(parse_term(&t.to_string()).unwrap(), t, "{src}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("\\x A. x") {
            Err(Error::Parse {
                line: 1, col: 4, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_type("A ->").is_err());
        assert!(parse_term("(a, b").is_err());
        assert!(parse_term("a $").is_err());
    }
}
