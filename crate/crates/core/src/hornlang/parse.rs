//! Recursive-descent parser for the axiom language. Whitespace-insensitive;
//! errors carry line and column. Comments run from `#` to end of line.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::extnum::ExtReal;

use super::{HornAxiom, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    Inf,
    Plus,
    Star,
    Slash,
    Eq,
    Implies,
    Comma,
    Semi,
    Dot,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(b) = self.peek() {
                if b == b'#' {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if b.is_ascii_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let b = match self.peek() {
                None => return Ok(out),
                Some(b) => b,
            };
            let tok = match b {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b';' => {
                    self.bump();
                    Tok::Semi
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'=' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Implies
                    } else {
                        Tok::Eq
                    }
                }
                b'0'..=b'9' => {
                    let mut n: u64 = 0;
                    while let Some(d @ b'0'..=b'9') = self.peek() {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add((d - b'0') as u64))
                            .ok_or_else(|| self.error("numeral too large"))?;
                        self.bump();
                    }
                    Tok::Number(n)
                }
                b if b.is_ascii_alphabetic() || b == b'_' => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let word =
                        core::str::from_utf8(&self.src[start..self.pos]).expect("ascii idents");
                    if word == "inf" {
                        Tok::Inf
                    } else {
                        Tok::Ident(String::from(word))
                    }
                }
                other => {
                    return Err(
                        self.error(alloc::format!("unexpected character {:?}", other as char))
                    )
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn error_at(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .or_else(|| self.toks.last().map(|&(_, l, c)| (l, c + 1)))
            .unwrap_or((1, 1));
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_at(alloc::format!("expected {what}")))
        }
    }

    fn axiom(&mut self) -> Result<HornAxiom, ParseError> {
        match self.next() {
            Some(Tok::Ident(w)) if w == "forall" => {}
            _ => return Err(self.error_at("expected `forall`")),
        }
        loop {
            match self.peek() {
                Some(Tok::Ident(w)) if !is_keyword(w) => {
                    let w = w.clone();
                    self.pos += 1;
                    if self.vars.contains(&w) {
                        return Err(self.error_at(alloc::format!("duplicate variable {w:?}")));
                    }
                    self.vars.push(w);
                }
                Some(Tok::Dot) => break,
                _ => return Err(self.error_at("expected a variable or `.`")),
            }
        }
        self.expect(&Tok::Dot, "`.`")?;
        if self.vars.is_empty() {
            return Err(self.error_at("at least one variable"));
        }
        let mut equations = alloc::vec![self.equation()?];
        let mut conclusion_after_implies = None;
        loop {
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                    equations.push(self.equation()?);
                }
                Some(Tok::Implies) => {
                    self.pos += 1;
                    conclusion_after_implies = Some(self.equation()?);
                    break;
                }
                None => break,
                _ => return Err(self.error_at("expected `,`, `=>`, or end of axiom")),
            }
        }
        if self.pos != self.toks.len() {
            return Err(self.error_at("trailing input"));
        }
        let axiom = match conclusion_after_implies {
            Some(conclusion) => HornAxiom {
                vars: self.vars.clone(),
                hypotheses: equations,
                conclusion,
            },
            None => {
                if equations.len() != 1 {
                    return Err(self.error_at("hypotheses need a `=>` conclusion"));
                }
                HornAxiom {
                    vars: self.vars.clone(),
                    hypotheses: Vec::new(),
                    conclusion: equations.pop().expect("one equation"),
                }
            }
        };
        Ok(axiom)
    }

    fn equation(&mut self) -> Result<(Term, Term), ParseError> {
        let l = self.term()?;
        self.expect(&Tok::Eq, "`=`")?;
        let r = self.term()?;
        Ok((l, r))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let first = self.scaled()?;
        let mut items = alloc::vec![first];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            items.push(self.scaled()?);
        }
        if items.len() == 1 {
            Ok(items.pop().expect("one item"))
        } else {
            Ok(Term::Sum { items, rep: None })
        }
    }

    fn scaled(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Number(_)) | Some(Tok::Inf) => {
                let lit = self.literal()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    let operand = self.scaled()?;
                    Ok(Term::Scale(lit, Box::new(operand)))
                } else if lit.is_zero() {
                    Ok(Term::zero())
                } else {
                    Err(self.error_at("a bare literal other than 0 is not a term"))
                }
            }
            _ => self.atom(),
        }
    }

    fn literal(&mut self) -> Result<ExtReal, ParseError> {
        match self.next() {
            Some(Tok::Inf) => Ok(ExtReal::Infinity),
            Some(Tok::Number(p)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Number(q)) if q != 0 => Ok(ExtReal::ratio(p, q)),
                        _ => Err(self.error_at("expected a nonzero denominator")),
                    }
                } else {
                    Ok(ExtReal::nat(p))
                }
            }
            _ => Err(self.error_at("expected a literal")),
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(w)) if w == "meet" => {
                self.expect(&Tok::LParen, "`(`")?;
                let a = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let b = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Term::Meet(Box::new(a), Box::new(b)))
            }
            Some(Tok::Ident(w)) if w == "join" => {
                let (items, rep) = self.call_args()?;
                Ok(Term::Join { items, rep })
            }
            Some(Tok::Ident(w)) if w == "sum" => {
                let (items, rep) = self.call_args()?;
                Ok(Term::Sum { items, rep })
            }
            Some(Tok::Ident(w)) if !is_keyword(&w) => {
                if !self.vars.contains(&w) {
                    self.pos -= 1;
                    return Err(self.error_at(alloc::format!("undeclared variable {w:?}")));
                }
                Ok(Term::Var(w))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error_at("expected a term"))
            }
        }
    }

    /// `( [term, …] [; rep term] )`
    fn call_args(&mut self) -> Result<(Vec<Term>, Option<Box<Term>>), ParseError> {
        self.expect(&Tok::LParen, "`(`")?;
        let mut items = Vec::new();
        let mut rep = None;
        loop {
            match self.peek() {
                Some(Tok::RParen) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Semi) => {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Ident(w)) if w == "rep" => {}
                        _ => return Err(self.error_at("expected `rep`")),
                    }
                    rep = Some(Box::new(self.term()?));
                    self.expect(&Tok::RParen, "`)`")?;
                    break;
                }
                Some(Tok::Comma) if !items.is_empty() => {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                _ if items.is_empty() => {
                    items.push(self.term()?);
                }
                _ => return Err(self.error_at("expected `,`, `;` or `)`")),
            }
        }
        Ok((items, rep))
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(w, "forall" | "meet" | "join" | "sum" | "rep" | "inf")
}

/// Parse a single axiom.
pub fn parse_axiom(src: &str) -> Result<HornAxiom, ParseError> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: Vec::new(),
    };
    p.axiom()
}

/// One line of the catalog: the axiom and whether it is expected to hold
/// over `[0, ∞]` (lines tagged `# expect-fail` are the invalid ones).
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub source: String,
    pub axiom: HornAxiom,
    pub expect_valid: bool,
}

/// Parse a catalog file: one axiom per line, `#` comments, blank lines
/// ignored.
pub fn parse_catalog(src: &str) -> Result<Vec<CatalogEntry>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let expect_valid = !line.contains("# expect-fail");
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let axiom = parse_axiom(body).map_err(|e| ParseError {
            line: i + 1,
            col: e.col,
            message: e.message,
        })?;
        out.push(CatalogEntry {
            source: String::from(body),
            axiom,
            expect_valid,
        });
    }
    Ok(out)
}
