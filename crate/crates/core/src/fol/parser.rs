//! Recursive descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := ("forall" | "exists") VAR ("in" VAR)? "." formula
//!          | disj ("->" formula)?
//! disj    := conj ("\/" conj)*
//! conj    := unary ("/\" unary)*
//! unary   := "~" unary | atom
//! atom    := "bot" | "top" | "(" formula ")" | VAR "in" VAR | VAR "=" VAR
//!          | NAME "(" VAR ("," VAR)* ")" | quantified formula
//! ```
//!
//! A quantifier extends as far to the right as possible, so it may appear as the last operand
//! of a connective without parentheses.

use super::formula::{self, Formula};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Tilde,
    And,
    Or,
    Imp,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 5] = ["bot", "top", "in", "forall", "exists"];

/// Tokens paired with their 1-based column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match (c, two.as_str()) {
            (_, "/\\") => (Tok::And, 2),
            (_, "\\/") => (Tok::Or, 2),
            (_, "->") => (Tok::Imp, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            ('=', _) => (Tok::Eq, 1),
            ('~', _) => (Tok::Tilde, 1),
            (c, _) if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                (Tok::Ident(chars[start..j].iter().collect()), j - start)
            }
            (c, _) => {
                return Err(Error::Syntax {
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::Eof, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, wanted: &str) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn variable(&mut self) -> Result<String> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error("a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.is_keyword("forall") || self.is_keyword("exists") {
            return self.quantified();
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            return Ok(formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantified(&mut self) -> Result<Formula> {
        let universal = self.is_keyword("forall");
        self.bump();
        let x = self.variable()?;
        let bound = if self.is_keyword("in") {
            self.bump();
            Some(self.variable()?)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(match (universal, bound) {
            (true, None) => formula::forall(&x, body),
            (false, None) => formula::exists(&x, body),
            (true, Some(b)) => formula::forall_in(&x, &b, body),
            (false, Some(b)) => formula::exists_in(&x, &b, body),
        })
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) => match s.as_str() {
                "bot" => {
                    self.bump();
                    Ok(Formula::Bot)
                }
                "top" => {
                    self.bump();
                    Ok(Formula::Top)
                }
                "forall" | "exists" => self.quantified(),
                "in" => self.error("a formula"),
                _ if *self.peek_at(1) == Tok::LParen => {
                    self.bump();
                    self.bump();
                    let mut args = vec![self.variable()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.variable()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Pred(s, args))
                }
                _ => {
                    let x = self.variable()?;
                    if self.is_keyword("in") {
                        self.bump();
                        let y = self.variable()?;
                        Ok(Formula::Mem(x, y))
                    } else if *self.peek() == Tok::Eq {
                        self.bump();
                        let y = self.variable()?;
                        Ok(Formula::Eq(x, y))
                    } else {
                        self.error("`in` or `=`")
                    }
                }
            },
            _ => self.error("a formula"),
        }
    }
}

/// Parses a formula, reporting the 1-based column of the first offending token.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::formula::*;

    fn column(text: &str) -> usize {
        match parse_formula(text) {
            Err(Error::Syntax { column, .. }) => column,
            other => panic!("{text}: {other:?}"),
        }
    }

    #[test]
    fn constants_and_atoms() {
        assert_eq!(parse_formula("bot").unwrap(), Formula::Bot);
        assert_eq!(parse_formula(" top ").unwrap(), Formula::Top);
        assert_eq!(parse_formula("x in y").unwrap(), mem("x", "y"));
        assert_eq!(parse_formula("x = y").unwrap(), eq("x", "y"));
        assert_eq!(parse_formula("P(x,y)").unwrap(), pred("P", &["x", "y"]));
    }

    #[test]
    fn quantifiers_bind_weakly() {
        let f = parse_formula("forall x. exists y. x in y").unwrap();
        assert_eq!(f, forall("x", exists("y", mem("x", "y"))));
        let g = parse_formula("forall x. x in y -> top").unwrap();
        assert_eq!(g, forall("x", imp(mem("x", "y"), Formula::Top)));
        let h = parse_formula("top /\\ exists x. x = x \\/ bot").unwrap();
        assert_eq!(
            h,
            and(Formula::Top, exists("x", or(eq("x", "x"), Formula::Bot)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a in b /\\ c in d \\/ top -> bot -> top").unwrap();
        let expected = imp(
            or(and(mem("a", "b"), mem("c", "d")), Formula::Top),
            imp(Formula::Bot, Formula::Top),
        );
        assert_eq!(f, expected);
        let g = parse_formula("top \\/ bot \\/ top").unwrap();
        assert_eq!(g, or(or(Formula::Top, Formula::Bot), Formula::Top));
    }

    #[test]
    fn sugar() {
        assert_eq!(parse_formula("~x in y").unwrap(), not(mem("x", "y")));
        assert_eq!(
            parse_formula("exists y in x. z in y").unwrap(),
            exists("y", and(mem("y", "x"), mem("z", "y")))
        );
        assert_eq!(
            parse_formula("forall y in x. bot").unwrap(),
            forall("y", imp(mem("y", "x"), Formula::Bot))
        );
    }

    #[test]
    fn syntax_error_columns() {
        assert_eq!(column("x in"), 5);
        assert_eq!(column(""), 1);
        assert_eq!(column("x"), 2);
        assert_eq!(column("(top"), 5);
        assert_eq!(column("top top"), 5);
        assert_eq!(column("forall in. top"), 8);
        assert_eq!(column("x # y"), 3);
        assert_eq!(column("P()"), 3);
    }
}
