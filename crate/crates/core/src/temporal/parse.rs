//! Parser for the ASCII formula syntax.
//!
//! ```text
//! rule      := formula "=>" formula
//! formula   := ("forall" | "exists") IDENT "in" "{" idents "}" ":" formula
//!            | equiv
//! equiv     := implies ("<->" implies)*
//! implies   := or ("->" implies)?                    (right associative)
//! or        := and ("|" and)*
//! and       := temporal ("&" temporal)*
//! temporal  := unary (("U" | "S" | "R" | "Rp") unary)?
//! unary     := ("!" | "X" | "WX" | "F" | "G" | "Xp" | "WXp" | "Fp" | "Gp") unary
//!            | primary
//! primary   := "true" | "false" | "(" formula ")"
//!            | "ite" "(" formula "," formula "," formula ")"
//!            | "Q" "[" IDENT "," IDENT "]" atomtail
//! atomtail  := ("=" | "!=") IDENT
//!            | ("in" | "notin") "{" idents "}"
//! idents    := (IDENT ("," IDENT)*)?
//! ```
//!
//! Temporal prefixes: `X`/`F`/`G` are next/eventually/always and `U` is
//! until; the `p` suffix marks the past counterparts (`S` is since). `WX`,
//! `R` and their past forms are the weak-step and release duals that
//! negation normal form introduces; they are accepted so every printable
//! formula parses back.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{AtomOp, Formula, InterStateRule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.pos, self.msg)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok<'a> {
    Ident(&'a str),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Eq,
    Ne,
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Equiv,
    RuleArrow,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn next_token(&mut self) -> Result<Option<(Tok<'a>, usize)>, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let rest = &self.src[start..];
        let sym = [
            ("<->", Tok::Equiv),
            ("->", Tok::Arrow),
            ("=>", Tok::RuleArrow),
            ("!=", Tok::Ne),
            ("=", Tok::Eq),
            ("!", Tok::Not),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBracket),
            ("]", Tok::RBracket),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            (",", Tok::Comma),
            (":", Tok::Colon),
            (".", Tok::Colon),
        ]
        .iter()
        .find(|(s, _)| rest.starts_with(s));
        if let Some((s, tok)) = sym {
            self.pos += s.len();
            let _ = Tok::DoubleArrow; // reserved
            return Ok(Some((*tok, start)));
        }
        let c = bytes[self.pos];
        if c.is_ascii_alphanumeric() || c == b'_' {
            let mut end = self.pos;
            while end < bytes.len()
                && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
            {
                end += 1;
            }
            let ident = &self.src[self.pos..end];
            self.pos = end;
            return Ok(Some((Tok::Ident(ident), start)));
        }
        Err(ParseError {
            pos: start,
            msg: alloc::format!("unexpected character `{}`", &rest[..1]),
        })
    }
}

struct Parser<'a> {
    tokens: Vec<(Tok<'a>, usize)>,
    idx: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let mut tokens = Vec::new();
        while let Some(t) = lexer.next_token()? {
            tokens.push(t);
        }
        Ok(Parser {
            tokens,
            idx: 0,
            len: src.len(),
        })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.tokens.get(self.idx).map(|(t, _)| *t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.idx)
            .map(|(_, p)| *p)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn error<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok<'a>, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.idx += 1;
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                Ok(name)
            }
            _ => self.error(what),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LBrace, "expected `{`")?;
        let mut out = Vec::new();
        if self.peek() == Some(Tok::RBrace) {
            self.idx += 1;
            return Ok(out);
        }
        loop {
            out.push(self.expect_ident("expected a name")?.to_string());
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrace) => return Ok(out),
                _ => return self.error("expected `,` or `}`"),
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Some(Tok::Ident(kw @ ("forall" | "exists"))) = self.peek() {
            self.idx += 1;
            let binder = self.expect_ident("expected quantifier binder")?.to_string();
            match self.peek() {
                Some(Tok::Ident("in")) => self.idx += 1,
                _ => return self.error("expected `in`"),
            }
            let set = self.ident_list()?;
            self.expect(Tok::Colon, "expected `:` after quantifier")?;
            let body = Box::new(self.formula()?);
            return Ok(if kw == "forall" {
                Formula::ForAll { binder, set, body }
            } else {
                Formula::Exists { binder, set, body }
            });
        }
        self.equiv()
    }

    fn equiv(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek() == Some(Tok::Equiv) {
            self.idx += 1;
            let rhs = self.implies()?;
            lhs = Formula::and(
                Formula::implies(lhs.clone(), rhs.clone()),
                Formula::implies(rhs, lhs),
            );
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(Tok::Arrow) {
            self.idx += 1;
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(Tok::Or) {
            self.idx += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal_infix()?;
        while self.peek() == Some(Tok::And) {
            self.idx += 1;
            lhs = Formula::and(lhs, self.temporal_infix()?);
        }
        Ok(lhs)
    }

    fn temporal_infix(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if let Some(Tok::Ident(op @ ("U" | "S" | "R" | "Rp"))) = self.peek() {
            self.idx += 1;
            let rhs = self.unary()?;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            return Ok(match op {
                "U" => Formula::Until(l, r),
                "S" => Formula::Since(l, r),
                "R" => Formula::Release(l, r),
                _ => Formula::ReleasePast(l, r),
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.idx += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(op @ ("X" | "WX" | "F" | "G" | "Xp" | "WXp" | "Fp" | "Gp"))) => {
                self.idx += 1;
                let body = Box::new(self.unary()?);
                Ok(match op {
                    "X" => Formula::Next(body),
                    "WX" => Formula::WeakNext(body),
                    "F" => Formula::Eventually(body),
                    "G" => Formula::Always(body),
                    "Xp" => Formula::Prev(body),
                    "WXp" => Formula::WeakPrev(body),
                    "Fp" => Formula::EventuallyPast(body),
                    _ => Formula::AlwaysPast(body),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.idx += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "expected `)`")?;
                Ok(f)
            }
            Some(Tok::Ident("true")) => {
                self.idx += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident("false")) => {
                self.idx += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident("ite")) => {
                self.idx += 1;
                self.expect(Tok::LParen, "expected `(` after ite")?;
                let c = self.formula()?;
                self.expect(Tok::Comma, "expected `,`")?;
                let t = self.formula()?;
                self.expect(Tok::Comma, "expected `,`")?;
                let e = self.formula()?;
                self.expect(Tok::RParen, "expected `)`")?;
                Ok(Formula::IfThenElse(Box::new(c), Box::new(t), Box::new(e)))
            }
            Some(Tok::Ident("Q")) => {
                self.idx += 1;
                self.expect(Tok::LBracket, "expected `[` after Q")?;
                let a = self.expect_ident("expected object name")?.to_string();
                self.expect(Tok::Comma, "expected `,`")?;
                let b = self.expect_ident("expected object name")?.to_string();
                self.expect(Tok::RBracket, "expected `]`")?;
                match self.bump() {
                    Some(Tok::Eq) => {
                        let rel = self.expect_ident("expected relation name")?.to_string();
                        Ok(Formula::Atom {
                            a,
                            b,
                            op: AtomOp::Eq,
                            rel,
                        })
                    }
                    Some(Tok::Ne) => {
                        let rel = self.expect_ident("expected relation name")?.to_string();
                        Ok(Formula::Atom {
                            a,
                            b,
                            op: AtomOp::Ne,
                            rel,
                        })
                    }
                    Some(Tok::Ident("in")) => Ok(Formula::Member {
                        a,
                        b,
                        member: true,
                        rels: self.ident_list()?,
                    }),
                    Some(Tok::Ident("notin")) => Ok(Formula::Member {
                        a,
                        b,
                        member: false,
                        rels: self.ident_list()?,
                    }),
                    _ => self.error("expected `=`, `!=`, `in` or `notin`"),
                }
            }
            _ => self.error("expected a formula"),
        }
    }
}

/// Parse a single formula. The whole input must be consumed.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(f)
}

/// Parse an inter-state rule `past => future` and check operator polarity
/// on both sides.
pub fn parse_rule(src: &str, label: &str) -> Result<InterStateRule, ParseError> {
    let mut p = Parser::new(src)?;
    let past = p.formula()?;
    p.expect(Tok::RuleArrow, "expected `=>` between rule sides")?;
    let future = p.formula()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    InterStateRule::new(past, future, label).map_err(|e| ParseError {
        pos: 0,
        msg: alloc::format!("{e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::Direction;

    #[test]
    fn atom_parses() {
        let f = parse_formula("Q[ship,buoy_c] = S").unwrap();
        assert_eq!(f, Formula::atom("ship", "buoy_c", AtomOp::Eq, "S"));
    }

    #[test]
    fn nested_eventually_goal_shape() {
        let f = parse_formula("F (Q[s,b_a] = W & F (Q[s,b_b] = N))").unwrap();
        match f {
            Formula::Eventually(body) => match *body {
                Formula::And(_, rhs) => assert!(matches!(*rhs, Formula::Eventually(_))),
                other => panic!("expected conjunction, got {other:?}"),
            },
            other => panic!("expected eventually, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_binds_tighter_than_or() {
        let f = parse_formula("Q[a,b] = p | Q[a,b] = q & Q[a,b] = r").unwrap();
        assert!(matches!(f, Formula::Or(..)));
    }

    #[test]
    fn until_binds_tighter_than_and() {
        let f = parse_formula("Q[a,b] = p & Q[a,b] = q U Q[a,b] = r").unwrap();
        match f {
            Formula::And(_, rhs) => assert!(matches!(*rhs, Formula::Until(..))),
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn membership_and_quantifier() {
        let f =
            parse_formula("forall s in {B, C}: Q[P,s] in {inside, coveredby}").unwrap();
        match f {
            Formula::ForAll { binder, set, body } => {
                assert_eq!(binder, "s");
                assert_eq!(set.len(), 2);
                assert!(matches!(*body, Formula::Member { member: true, .. }));
            }
            other => panic!("expected forall, got {other:?}"),
        }
    }

    #[test]
    fn rule_with_future_operator_on_past_side_is_rejected() {
        let err = parse_rule("F Q[a,b] = p => Q[a,b] = q", "r").unwrap_err();
        assert!(err.msg.contains("past side"), "{}", err.msg);
    }

    #[test]
    fn rule_parses_both_sides() {
        let r = parse_rule(
            "Q[nutrient,amoeba] = meet => Q[nutrient,amoeba] = overlap",
            "contact",
        )
        .unwrap();
        assert!(r.past.is_pure(Direction::Past));
        assert!(r.future.is_pure(Direction::Future));
        assert_eq!(r.label, "contact");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_formula("Q[a,b] = ").unwrap_err();
        assert_eq!(err.pos, 9);
    }

    #[test]
    fn equivalence_expands() {
        let f = parse_formula("Q[a,b] = p <-> Q[a,b] = q").unwrap();
        assert!(matches!(f, Formula::And(..)));
    }
}
