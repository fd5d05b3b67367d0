//! Recursive-descent parser for the formula grammar.
//!
//! Identifiers match `[A-Za-z_][A-Za-z0-9_']*`; constants are `true` and
//! `false`; operators by descending precedence are `~` (prefix), `&`, `|`,
//! `->` (right-associative) and `<->`. Whitespace is insignificant.
//! `exists p. ...` is accepted when parsing quantified formulas.

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::qbf::Qbf;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Exists,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Dot,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    tokens: Vec<(Token, usize)>,
}

fn err(message: impl Into<String>, offset: usize) -> Error {
    Error::Parse {
        message: message.into(),
        offset,
    }
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Token, usize)>> {
        let mut lx = Lexer {
            src,
            pos: 0,
            tokens: Vec::new(),
        };
        let bytes = src.as_bytes();
        while lx.pos < bytes.len() {
            let c = bytes[lx.pos] as char;
            let start = lx.pos;
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    lx.pos += 1;
                }
                '~' => lx.push(Token::Not, 1, start),
                '&' => lx.push(Token::And, 1, start),
                '|' => lx.push(Token::Or, 1, start),
                '(' => lx.push(Token::LParen, 1, start),
                ')' => lx.push(Token::RParen, 1, start),
                '.' => lx.push(Token::Dot, 1, start),
                '-' => {
                    if lx.src[lx.pos..].starts_with("->") {
                        lx.push(Token::Implies, 2, start);
                    } else {
                        return Err(err("expected '->'", start));
                    }
                }
                '<' => {
                    if lx.src[lx.pos..].starts_with("<->") {
                        lx.push(Token::Iff, 3, start);
                    } else {
                        return Err(err("expected '<->'", start));
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = lx.pos + 1;
                    while end < bytes.len() {
                        let d = bytes[end] as char;
                        if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                            end += 1;
                        } else {
                            break;
                        }
                    }
                    let word = &lx.src[lx.pos..end];
                    let token = match word {
                        "true" => Token::True,
                        "false" => Token::False,
                        "exists" => Token::Exists,
                        _ => Token::Ident(word.to_owned()),
                    };
                    lx.tokens.push((token, start));
                    lx.pos = end;
                }
                other => return Err(err(format!("unexpected character {other:?}"), start)),
            }
        }
        Ok(lx.tokens)
    }

    fn push(&mut self, t: Token, width: usize, start: usize) {
        self.tokens.push((t, start));
        self.pos += width;
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(format!("expected {what}"), self.offset()))
        }
    }

    // iff := imp ('<->' iff)?   (right-associative)
    fn parse_iff(&mut self) -> Result<Qbf> {
        let lhs = self.parse_imp()?;
        if self.peek() == Some(&Token::Iff) {
            self.pos += 1;
            let rhs = self.parse_iff()?;
            Ok(Qbf::iff(&lhs, &rhs))
        } else {
            Ok(lhs)
        }
    }

    // imp := or ('->' imp)?   (right-associative)
    fn parse_imp(&mut self) -> Result<Qbf> {
        let lhs = self.parse_or()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let rhs = self.parse_imp()?;
            Ok(Qbf::implies(&lhs, &rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Qbf> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.parse_and()?;
            lhs = Qbf::or(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Qbf> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.parse_unary()?;
            lhs = Qbf::and(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Qbf> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Qbf::not(&self.parse_unary()?))
            }
            Some(Token::Exists) => {
                self.pos += 1;
                let name = match self.bump() {
                    Some(Token::Ident(name)) => name,
                    _ => return Err(err("expected atom after 'exists'", self.offset())),
                };
                self.expect(Token::Dot, "'.' after quantified atom")?;
                let body = self.parse_iff()?;
                Ok(Qbf::exists(Atom::new(&name), &body))
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Qbf> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Ident(name)) => Ok(Qbf::prop(&Formula::atom(Atom::new(&name)))),
            Some(Token::True) => Ok(Qbf::prop(&Formula::top())),
            Some(Token::False) => Ok(Qbf::prop(&Formula::bottom())),
            Some(Token::LParen) => {
                let inner = self.parse_iff()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(other) => Err(err(format!("unexpected token {other:?}"), offset)),
            None => Err(err("unexpected end of input", offset)),
        }
    }
}

/// Parses a quantified Boolean formula.
pub fn parse_qbf(src: &str) -> Result<Qbf> {
    let tokens = Lexer::tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let f = parser.parse_iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(err("trailing input after formula", parser.offset()));
    }
    Ok(f)
}

/// Parses a quantifier-free propositional formula.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let q = parse_qbf(src)?;
    q.as_propositional().ok_or_else(|| err("quantifiers are not allowed here", 0))
}
