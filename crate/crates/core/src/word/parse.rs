//! Recursive-descent parser for words and equation systems.
//!
//! ```text
//! system := word (';' | newline)+ ...      equation sugar: word '=' word
//! word   := term+                          term := atom ('^' int)?
//! atom   := var | const | '1' | '[' word (',' word)+ ']' | '(' word ')'
//! var    := 'x' [1-9][0-9]*                const := '\'' label '\''
//! ```
//!
//! `u = v` becomes `u v⁻¹`, and `1` denotes the empty word.

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

use super::{EquationSystem, Letter, Mode, Word};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(usize),
    Const(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Caret,
    Equals,
    Sep,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b'\n' | b';' => {
                i += 1;
                Tok::Sep
            }
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'[' | b']' | b'(' | b')' | b',' | b'^' | b'=' => {
                i += 1;
                match c {
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b',' => Tok::Comma,
                    b'^' => Tok::Caret,
                    _ => Tok::Equals,
                }
            }
            b'\'' => {
                let close = text[i + 1..]
                    .find('\'')
                    .ok_or_else(|| syntax(start, "unterminated constant"))?;
                let label = text[i + 1..i + 1 + close].to_string();
                i += close + 2;
                Tok::Const(label)
            }
            b'x' => {
                i += 1;
                let d0 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[d0..i];
                if digits.is_empty() || digits.starts_with('0') {
                    return Err(syntax(start, "expected variable index after 'x'"));
                }
                let n: usize = digits
                    .parse()
                    .map_err(|_| syntax(start, "variable index too large"))?;
                Tok::Var(n)
            }
            b'-' | b'0'..=b'9' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s = &text[start..i];
                Tok::Int(
                    s.parse()
                        .map_err(|_| syntax(start, format!("bad integer {s:?}")))?,
                )
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        };
        toks.push((start, tok));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    group: &'a FiniteGroup,
    n_vars: usize,
    mode: Mode,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(at, format!("expected {what}"))),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Var(_) | Tok::Const(_) | Tok::LBracket | Tok::LParen | Tok::Int(1))
        )
    }

    fn skip_seps(&mut self) {
        while self.peek() == Some(&Tok::Sep) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Word> {
        if !self.starts_atom() {
            return Err(syntax(self.offset(), "expected a word"));
        }
        let mut acc = Word::identity(self.n_vars, self.mode);
        while self.starts_atom() {
            let t = self.term()?;
            acc = acc.product(&t, self.group)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(k)) => atom.pow(k, self.group).map_err(|e| match e {
                    Error::BadParameter(m) => syntax(at, m),
                    other => other,
                }),
                _ => Err(syntax(at, "expected an integer exponent")),
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Var(n)) => {
                if n > self.n_vars {
                    return Err(Error::VariableOutOfRange {
                        var: n,
                        n_vars: self.n_vars,
                    });
                }
                Word::from_letters(None, self.n_vars, self.mode, vec![Letter::var(n - 1, 1)])
            }
            Some(Tok::Const(label)) => {
                if !self.mode.allows_constants() {
                    return Err(Error::ModeMismatch(format!(
                        "constant '{label}' in a coefficient-free word"
                    )));
                }
                let c = self
                    .group
                    .find_label(&label)
                    .ok_or(Error::UnknownLabel(label))?;
                Word::from_letters(
                    Some(self.group),
                    self.n_vars,
                    self.mode,
                    vec![Letter::Const(c)],
                )
            }
            Some(Tok::Int(1)) => Ok(Word::identity(self.n_vars, self.mode)),
            Some(Tok::LParen) => {
                let w = self.word()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(w)
            }
            Some(Tok::LBracket) => {
                let mut parts = vec![self.word()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    parts.push(self.word()?);
                }
                if parts.len() < 2 {
                    return Err(syntax(
                        self.offset(),
                        "commutator needs at least two entries",
                    ));
                }
                self.expect(Tok::RBracket, "']'")?;
                Word::left_commutator(&parts, self.group)
            }
            _ => Err(syntax(at, "expected a variable, constant, '[' or '('")),
        }
    }

    fn equation(&mut self) -> Result<Word> {
        let lhs = self.word()?;
        if self.peek() == Some(&Tok::Equals) {
            self.pos += 1;
            let rhs = self.word()?;
            return lhs.product(&rhs.inverse(self.group), self.group);
        }
        Ok(lhs)
    }
}

fn parser<'a>(text: &str, n_vars: usize, mode: Mode, group: &'a FiniteGroup) -> Result<Parser<'a>> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        group,
        n_vars,
        mode,
    })
}

/// Parses one word (or one `u = v` equation).
pub fn parse_word(text: &str, n_vars: usize, mode: Mode, group: &FiniteGroup) -> Result<Word> {
    let mut p = parser(text, n_vars, mode, group)?;
    let w = p.equation()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(w)
}

/// Parses equations separated by `;` or newlines.
pub fn parse_system(
    text: &str,
    n_vars: usize,
    mode: Mode,
    group: &FiniteGroup,
) -> Result<EquationSystem> {
    let mut p = parser(text, n_vars, mode, group)?;
    let mut words = Vec::new();
    p.skip_seps();
    while p.pos < p.toks.len() {
        words.push(p.equation()?);
        if p.pos < p.toks.len() && p.peek() != Some(&Tok::Sep) {
            return Err(syntax(
                p.offset(),
                "expected ';' or newline between equations",
            ));
        }
        p.skip_seps();
    }
    Ok(EquationSystem::new(n_vars, mode, words)?.with_source(text))
}

/// Parses one point: coordinates separated by whitespace or commas, each a
/// quoted label `'...'` or a bare label.
pub fn parse_point(text: &str, group: &FiniteGroup) -> Result<Vec<Elem>> {
    let mut coords = Vec::new();
    let mut rest = text.trim_start();
    let mut offset = text.len() - rest.len();
    while !rest.is_empty() {
        let (label, used) = if let Some(q) = rest.strip_prefix('\'') {
            let close = q
                .find('\'')
                .ok_or_else(|| syntax(offset, "unterminated quoted label"))?;
            (&q[..close], close + 2)
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == ',')
                .unwrap_or(rest.len());
            (&rest[..end], end)
        };
        coords.push(
            group
                .find_label(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?,
        );
        let after = rest[used..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        offset += rest.len() - after.len();
        rest = after;
    }
    Ok(coords)
}

/// Parses `;`-separated points, checking each has `n` coordinates.
pub fn parse_points(text: &str, n: usize, group: &FiniteGroup) -> Result<Vec<Vec<Elem>>> {
    let mut points = Vec::new();
    let mut offset = 0;
    for chunk in split_outside_quotes(text, ';') {
        if !chunk.trim().is_empty() {
            let p = parse_point(chunk, group)?;
            if p.len() != n {
                return Err(syntax(
                    offset,
                    format!("point has {} coordinates, expected {n}", p.len()),
                ));
            }
            points.push(p);
        }
        offset += chunk.len() + 1;
    }
    Ok(points)
}

fn split_outside_quotes(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut quoted = false;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == '\'' {
            quoted = !quoted;
        } else if c == sep && !quoted {
            parts.push(&text[start..i]);
            start = i + 1;
        }
    }
    parts.push(&text[start..]);
    parts
}
