//! Ring expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := INT | NAME | "@" PATH | "(" expr ")"
//! NAME   := ("K" | "C" | "L" | "P") INT | "Oct" | "Susp(" NAME ")"
//! ```
//!
//! A leading `-` is accepted at the start of an expression. `@PATH` loads a
//! facet-list JSON file.

use std::path::Path;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::generators::{generate, GeneratorSpec};
use crate::ring::RingElement;

pub fn parse_ring_expression(text: &str) -> Result<RingElement> {
    parse_with_base(text, Path::new("."))
}

/// Like [`parse_ring_expression`], resolving relative `@` paths against `base`.
pub fn parse_with_base(text: &str, base: &Path) -> Result<RingElement> {
    let mut p = Parser { src: text, pos: 0, open: Vec::new(), base };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error_here("unexpected input"));
    }
    Ok(e)
}

/// Parses a bare generator name such as `K3` or `Susp(Oct)`.
pub fn parse_generator(text: &str) -> Result<GeneratorSpec> {
    let mut p = Parser { src: text, pos: 0, open: Vec::new(), base: Path::new(".") };
    let spec = p.name()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error_here("unexpected input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    /// Offsets of the currently open parentheses.
    open: Vec<usize>,
    base: &'a Path,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn error_here(&self, message: &str) -> Error {
        if self.pos >= self.src.len() {
            // running out of input inside parentheses points at the unclosed one
            let offset = self.open.last().copied().unwrap_or(self.src.len());
            let message = if self.open.is_empty() {
                format!("{message}: unexpected end of input")
            } else {
                "unclosed parenthesis".to_string()
            };
            return Error::Syntax { offset, message };
        }
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElement> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.open.push(self.pos);
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error_here("expected `)`"));
                }
                self.open.pop();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).map_err(|_| self.error_here("integer too large"))?;
                Ok(RingElement::from_integer(n))
            }
            Some('@') => {
                self.pos += 1;
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '*' | '+') {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                if start == self.pos {
                    return Err(self.error_here("expected a path after `@`"));
                }
                let path = self.base.join(&self.src[start..self.pos]);
                Ok(RingElement::from_complex(SimplicialComplex::load_json(path)?))
            }
            Some(_) => {
                let spec = self.name()?;
                Ok(RingElement::from_complex(generate(&spec)?))
            }
            None => Err(self.error_here("expected a factor")),
        }
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_here("expected an integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "integer too large".into(),
        })
    }

    fn name(&mut self) -> Result<GeneratorSpec> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let word = &self.src[start..self.pos];
        match word {
            "" => Err(self.error_here("expected a factor")),
            "K" | "C" | "L" | "P" => {
                let n = self.integer()?;
                Ok(match word {
                    "K" => GeneratorSpec::Complete(n),
                    "C" => GeneratorSpec::Cycle(n),
                    "L" => GeneratorSpec::Path(n),
                    _ => GeneratorSpec::Points(n),
                })
            }
            "Oct" => Ok(GeneratorSpec::Octahedron),
            "Susp" => {
                if self.peek() != Some('(') {
                    return Err(self.error_here("expected `(` after Susp"));
                }
                self.open.push(self.pos);
                self.pos += 1;
                let inner = self.name()?;
                if !self.eat(')') {
                    return Err(self.error_here("expected `)`"));
                }
                self.open.pop();
                Ok(GeneratorSpec::Suspension(Box::new(inner)))
            }
            _ => Err(Error::UnknownGenerator(word.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_term_element() {
        let e = parse_ring_expression("C4 - 2*K3 + L2*L3").unwrap();
        let coeffs: Vec<i64> = e.terms().iter().map(|t| t.0).collect();
        assert_eq!(coeffs, vec![1, -2, 1]);
        assert_eq!(e.terms()[2].1.factors().len(), 2);
    }

    #[test]
    fn one_is_the_point() {
        assert_eq!(parse_ring_expression("1").unwrap(), RingElement::one());
        assert_eq!(parse_ring_expression("3").unwrap(), RingElement::from_integer(3));
    }

    #[test]
    fn unclosed_parenthesis_offset() {
        match parse_ring_expression("C4 * (") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_ring_expression("("), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_ring_expression("K3 +"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse_ring_expression("K3 ) "), Err(Error::Syntax { offset: 3, .. })));
    }

    #[test]
    fn unknown_generator() {
        assert!(matches!(parse_ring_expression("Q5"), Err(Error::UnknownGenerator(w)) if w == "Q"));
        assert!(matches!(parse_ring_expression("C2"), Err(Error::BadParameter(_))));
    }

    #[test]
    fn nested_suspension_and_parentheses() {
        let e = parse_ring_expression("Susp(Susp(C4)) * (K2 - 1)").unwrap();
        assert_eq!(e.terms().len(), 2);
        assert_eq!(parse_generator("Susp(Oct)").unwrap().to_string(), "Susp(Oct)");
        assert_eq!(parse_ring_expression("-K3").unwrap().terms()[0].0, -1);
    }

    #[test]
    fn facet_file_factor() {
        let dir = std::env::temp_dir().join(format!("strongring-expr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("tri.json"), r#"{"facets": [[0,1],[1,2],[2,0]]}"#).unwrap();
        let e = parse_with_base("@tri.json * K2", &dir).unwrap();
        assert_eq!(e.terms()[0].1.cell_count(), 6 * 3);
        std::fs::remove_dir_all(&dir).ok();
    }
}
