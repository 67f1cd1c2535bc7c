use super::{check_hygiene_formula, check_hygiene_term, FormulaAst, TermAst};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Empty,
    Power,
    Union,
    Epsilon,
    In,
    Sub,
    All,
    Some,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
            other => format!("`{}`", match other {
                Tok::Empty => "O",
                Tok::Power => "P",
                Tok::Union => "U",
                Tok::Epsilon => "E",
                Tok::In => "in",
                Tok::Sub => "sub",
                Tok::All => "all",
                Tok::Some => "some",
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::Comma => ",",
                Tok::Colon => ":",
                Tok::Tilde => "~",
                Tok::Amp => "&",
                Tok::Bar => "|",
                Tok::Arrow => "->",
                Tok::Equals => "=",
                _ => unreachable!(),
            }),
        }
    }
}

/// Tokens paired with their 1-based starting column.
fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '=' => Tok::Equals,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            'O' => Tok::Empty,
            'P' => Tok::Power,
            'U' => Tok::Union,
            'E' => Tok::Epsilon,
            'a'..='z' => {
                let start = i;
                while i + 1 < chars.len() && matches!(chars[i + 1], 'a'..='z' | '0'..='9' | '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "in" => Tok::In,
                    "sub" => Tok::Sub,
                    "all" => Tok::All,
                    "some" => Tok::Some,
                    _ => Tok::Ident(word),
                }
            }
            _ => return Err(Error::Syntax { col, msg: format!("unexpected character `{c}`") }),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
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

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            col: self.col(),
            msg: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("a variable"),
        }
    }

    fn term(&mut self) -> Result<TermAst> {
        match self.peek().clone() {
            Tok::Empty => {
                self.bump();
                Ok(TermAst::Empty)
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(TermAst::Var(v))
            }
            op @ (Tok::Power | Tok::Union | Tok::Epsilon) => {
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = Box::new(self.term()?);
                self.expect(Tok::RParen)?;
                Ok(match op {
                    Tok::Power => TermAst::Power(inner),
                    Tok::Union => TermAst::Union(inner),
                    _ => TermAst::Epsilon(inner),
                })
            }
            Tok::LBrace => {
                self.bump();
                if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::In {
                    let var = self.ident()?;
                    self.expect(Tok::In)?;
                    let source = Box::new(self.term()?);
                    self.expect(Tok::Colon)?;
                    let body = Box::new(self.formula()?);
                    self.expect(Tok::RBrace)?;
                    return Ok(TermAst::Comprehension { var, source, body });
                }
                let first = self.term()?;
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                        let second = self.term()?;
                        self.expect(Tok::RBrace)?;
                        Ok(TermAst::Pair(Box::new(first), Box::new(second)))
                    }
                    Tok::Colon => {
                        self.bump();
                        let var = self.ident()?;
                        self.expect(Tok::In)?;
                        let source = Box::new(self.term()?);
                        self.expect(Tok::RBrace)?;
                        Ok(TermAst::Replacement { var, body: Box::new(first), source })
                    }
                    _ => self.err("`,` or `:`"),
                }
            }
            _ => self.err("a term"),
        }
    }

    fn formula(&mut self) -> Result<FormulaAst> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(FormulaAst::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<FormulaAst> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = FormulaAst::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<FormulaAst> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = FormulaAst::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<FormulaAst> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(FormulaAst::Not(Box::new(self.unary()?)))
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::All | Tok::Some) => {
                self.bump();
                let universal = self.bump() == Tok::All;
                let var = self.ident()?;
                self.expect(Tok::In)?;
                let source = self.term()?;
                self.expect(Tok::RParen)?;
                let body = Box::new(self.unary()?);
                Ok(if universal {
                    FormulaAst::All { var, source, body }
                } else {
                    FormulaAst::Some { var, source, body }
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FormulaAst> {
        let lhs = self.term()?;
        let rel = self.peek().clone();
        match rel {
            Tok::In | Tok::Equals | Tok::Sub => {
                self.bump();
                let rhs = self.term()?;
                Ok(match rel {
                    Tok::In => FormulaAst::In(lhs, rhs),
                    Tok::Equals => FormulaAst::Eq(lhs, rhs),
                    _ => FormulaAst::Sub(lhs, rhs),
                })
            }
            _ => self.err("`in`, `=` or `sub`"),
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err("end of input")
        }
    }
}

pub fn parse_term(src: &str) -> Result<TermAst> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    p.finish()?;
    check_hygiene_term(&t)?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<FormulaAst> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let f = p.formula()?;
    p.finish()?;
    check_hygiene_formula(&f)?;
    Ok(f)
}
