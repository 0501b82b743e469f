use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{is_first_order_name, is_second_order_name, Formula, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    In,
    NotIn,
    Succ,
    Dot,
    LParen,
    RParen,
    Bang,
    Amp,
    Bar,
    Arrow,
    Less,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Exists => "`exists`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::In => "`in`".into(),
        Tok::NotIn => "`notin`".into(),
        Tok::Succ => "`s`".into(),
        Tok::Dot => "`.`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Less => "`<`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        let mut push = |tok| {
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            })
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '.' => push(Tok::Dot),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '!' => push(Tok::Bang),
            '&' => push(Tok::Amp),
            '|' => push(Tok::Bar),
            '<' => push(Tok::Less),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow);
                i += 2;
                column += 2;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                column += i - start;
                push(match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "in" => Tok::In,
                    "notin" => Tok::NotIn,
                    "s" => Tok::Succ,
                    _ => Tok::Ident(word),
                });
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
        column += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
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
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: String) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax { line, column, message })
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {}, found {}", describe(&want), describe(self.peek())))
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::negate(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let universal = self.bump() == Tok::Forall;
                let (line, column) = self.here();
                let var = match self.bump() {
                    Tok::Ident(v) => v,
                    other => {
                        return Err(Error::Syntax {
                            line,
                            column,
                            message: format!("expected a variable, found {}", describe(&other)),
                        })
                    }
                };
                self.expect(Tok::Dot)?;
                let body = Box::new(self.implication()?);
                Ok(match (universal, is_first_order_name(&var)) {
                    (false, true) => Formula::ExistsFo(var, body),
                    (true, true) => Formula::ForallFo(var, body),
                    (false, false) => Formula::ExistsSo(var, body),
                    (true, false) => Formula::ForallSo(var, body),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    /// Parses `s* ident`, returning the raw name so callers can report case errors.
    fn term(&mut self) -> Result<(Term, (usize, usize))> {
        let mut shift = 0;
        while *self.peek() == Tok::Succ {
            self.bump();
            shift += 1;
        }
        let at = self.here();
        match self.bump() {
            Tok::Ident(v) => Ok((Term::new(v, shift), at)),
            other => Err(Error::Syntax {
                line: at.0,
                column: at.1,
                message: format!("expected a term, found {}", describe(&other)),
            }),
        }
    }

    fn first_order_term(&mut self) -> Result<Term> {
        let (t, (line, column)) = self.term()?;
        if !is_first_order_name(&t.var) {
            return Err(Error::CaseConvention {
                line,
                column,
                message: format!("`{}` is not a first-order name", t.var),
            });
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Formula> {
        let (lhs, lhs_at) = self.term()?;
        let op_at = self.here();
        match self.bump() {
            Tok::In | Tok::NotIn => {
                let negated = self.toks[self.pos - 1].tok == Tok::NotIn;
                if !is_first_order_name(&lhs.var) {
                    return Err(Error::CaseConvention {
                        line: lhs_at.0,
                        column: lhs_at.1,
                        message: format!("`{}` is not a first-order name", lhs.var),
                    });
                }
                let (line, column) = self.here();
                let set = match self.bump() {
                    Tok::Ident(v) if is_second_order_name(&v) => v,
                    Tok::Ident(v) => {
                        return Err(Error::CaseConvention {
                            line,
                            column,
                            message: format!("`{v}` is not a second-order name"),
                        })
                    }
                    Tok::Succ => {
                        return Err(Error::Arity {
                            line,
                            column,
                            message: "membership expects a set variable, found a term".to_string(),
                        })
                    }
                    other => {
                        return Err(Error::Syntax {
                            line,
                            column,
                            message: format!("expected a set variable, found {}", describe(&other)),
                        })
                    }
                };
                let atom = Formula::In(lhs, set);
                Ok(if negated { Formula::negate(atom) } else { atom })
            }
            Tok::Less => {
                let rhs_at = self.here();
                let rhs = self.first_order_term();
                let check = |t: &Term, (line, column): (usize, usize)| {
                    if is_second_order_name(&t.var) {
                        Err(Error::Arity {
                            line,
                            column,
                            message: format!("`<` relates terms, but `{}` is a set variable", t.var),
                        })
                    } else {
                        Ok(())
                    }
                };
                check(&lhs, lhs_at)?;
                let rhs = match rhs {
                    Err(Error::CaseConvention { .. }) => {
                        let (line, column) = rhs_at;
                        return Err(Error::Arity {
                            line,
                            column,
                            message: "`<` relates terms, not set variables".to_string(),
                        });
                    }
                    r => r?,
                };
                Ok(Formula::Less(lhs, rhs))
            }
            other => Err(Error::Syntax {
                line: op_at.0,
                column: op_at.1,
                message: format!("expected `in`, `notin` or `<`, found {}", describe(&other)),
            }),
        }
    }
}

/// Parses the ASCII concrete syntax.
///
/// Precedence, tightest first: `!`, `&`, `|`, `->` (right associative).
/// A quantifier body extends as far to the right as possible. `t notin X`
/// is sugar for `!(t in X)` and `a -> b` for `!a | b`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return p.syntax(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}
