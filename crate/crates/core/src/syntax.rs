//! Concrete text syntax.
//!
//! ```text
//! formula  := eqn ( "->" formula )?          right associative
//! eqn      := unary ( "==" unary )?          non-associative
//! unary    := "~" unary | atom               ~x abbreviates x -> #
//! atom     := ident | "bot" | "#" | "(" formula ")"
//! sequent  := ( formula ( "," formula )* )? "|-" formula
//! ```
//!
//! `⊃`, `≡`, `⊥`, `¬`, `⇒` and `⊢` are accepted as aliases.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::Sequent;
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bottom,
    Arrow,
    Equals,
    Tilde,
    LParen,
    RParen,
    Comma,
    Turnstile,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Bottom => "`#`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`==`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        let error = |message: String| ParseError {
            line: start_line,
            column: start_col,
            message,
        };

        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                let tok = if name == "bot" {
                    Tok::Bottom
                } else {
                    Tok::Ident(name)
                };
                push(&mut out, tok);
            }
            '#' | '⊥' => {
                bump(&mut chars);
                push(&mut out, Tok::Bottom);
            }
            '~' | '¬' => {
                bump(&mut chars);
                push(&mut out, Tok::Tilde);
            }
            '(' => {
                bump(&mut chars);
                push(&mut out, Tok::LParen);
            }
            ')' => {
                bump(&mut chars);
                push(&mut out, Tok::RParen);
            }
            ',' => {
                bump(&mut chars);
                push(&mut out, Tok::Comma);
            }
            '⊃' | '→' => {
                bump(&mut chars);
                push(&mut out, Tok::Arrow);
            }
            '≡' => {
                bump(&mut chars);
                push(&mut out, Tok::Equals);
            }
            '⇒' | '⊢' => {
                bump(&mut chars);
                push(&mut out, Tok::Turnstile);
            }
            '-' | '=' | '|' => {
                bump(&mut chars);
                let (want, tok) = match c {
                    '-' => ('>', Tok::Arrow),
                    '=' => ('=', Tok::Equals),
                    _ => ('-', Tok::Turnstile),
                };
                if chars.peek() == Some(&want) {
                    bump(&mut chars);
                    push(&mut out, tok);
                } else {
                    return Err(error(format!("expected `{c}{want}`")));
                }
            }
            other => return Err(error(format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.equation()?;
        if self.peek().tok == Tok::Arrow {
            self.next();
            let right = self.formula()?;
            Ok(Formula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn equation(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        if self.peek().tok != Tok::Equals {
            return Ok(left);
        }
        self.next();
        let right = self.unary()?;
        if self.peek().tok == Tok::Equals {
            return Err(self.error_here(
                "`==` is non-associative; parenthesize chained identities".into(),
            ));
        }
        Ok(Formula::id(left, right))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek().tok == Tok::Tilde {
            self.next();
            return Ok(Formula::negation(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.next();
                Ok(Formula::var(&name))
            }
            Tok::Bottom => {
                self.next();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(self.error_here(format!("expected a formula, found {}", other.describe()))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.expect(Tok::End)?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut antecedent = BTreeSet::new();
    if p.peek().tok != Tok::Turnstile {
        loop {
            antecedent.insert(p.formula()?);
            if p.peek().tok == Tok::Comma {
                p.next();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::Turnstile)?;
    if p.peek().tok == Tok::End {
        return Err(p.error_here("a sequent requires a succedent formula".into()));
    }
    let succedent = p.formula()?;
    p.expect(Tok::End)?;
    Ok(Sequent::new(antecedent, succedent))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bottom => f.write_str("#"),
            Formula::Var(name) => f.write_str(name),
            Formula::Imp(l, r) => {
                if l.is_implication() {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " -> {r}")
            }
            Formula::Id(l, r) => {
                write_eq_operand(f, l)?;
                f.write_str(" == ")?;
                write_eq_operand(f, r)
            }
        }
    }
}

fn write_eq_operand(f: &mut fmt::Formatter<'_>, x: &Formula) -> fmt::Result {
    if x.as_binary().is_some() {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.antecedent.is_empty() {
            write!(f, "|- {}", self.succedent)
        } else {
            write!(f, " |- {}", self.succedent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p() -> Formula {
        Formula::var("p")
    }
    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn right_associative_arrow() {
        assert_eq!(
            parse_formula("p -> q -> p").unwrap(),
            Formula::imp(p(), Formula::imp(q(), p()))
        );
    }

    #[test]
    fn identity_binds_tighter() {
        assert_eq!(
            parse_formula("p == q -> p").unwrap(),
            Formula::imp(Formula::id(p(), q()), p())
        );
    }

    #[test]
    fn tilde_is_sugar() {
        assert_eq!(parse_formula("~p").unwrap(), Formula::imp(p(), Formula::Bottom));
        assert_eq!(parse_formula("bot").unwrap(), Formula::Bottom);
        assert_eq!(parse_formula("⊥ ⊃ p ≡ q").unwrap(), parse_formula("# -> p == q").unwrap());
    }

    #[test]
    fn chained_identity_rejected() {
        let err = parse_formula("a == b == c").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(parse_formula("(a == b) == c").is_ok());
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_formula("p ->\n  (q").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        let err = parse_formula("p == q ==").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(parse_formula("p - q").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p q").is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(Formula::imp(p(), Formula::imp(q(), p())).to_string(), "p -> q -> p");
        assert_eq!(Formula::imp(Formula::id(p(), q()), p()).to_string(), "p == q -> p");
        assert_eq!(
            Formula::id(Formula::imp(p(), p()), Formula::imp(q(), q())).to_string(),
            "(p -> p) == (q -> q)"
        );
        assert_eq!(
            Formula::imp(Formula::imp(p(), q()), p()).to_string(),
            "(p -> q) -> p"
        );
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("p, p |- p").unwrap();
        assert_eq!(s.antecedent.len(), 1);
        assert_eq!(s.succedent, p());
        let s = parse_sequent("|- p == p").unwrap();
        assert!(s.antecedent.is_empty());
        assert_eq!(s.succedent, Formula::id(p(), p()));
        assert!(parse_sequent("|-").is_err());
        assert!(parse_sequent("p |-").is_err());
        assert!(parse_sequent("p, |- q").is_err());
        assert_eq!(parse_sequent("q, p |- r").unwrap().to_string(), "p, q |- r");
        assert_eq!(parse_sequent("⇒ p").unwrap().to_string(), "|- p");
    }
}
