//! Structure-equation text format.
//!
//! A document is a parenthesized list with one expression per basis
//! covector, e.g. `(-f25, f15, -f46, f36, 0, 0)`. Terms are `[q*]B` where the
//! coefficient is a product of rational literals and `sqrt(d)` factors, and
//! `B` is `eij`/`fij` (single-digit indices) or `[i,j]`. Lines starting with
//! `#` are comments; `# name: X` and `# param: k = v` are kept as metadata.

use std::fmt::{self, Write as _};

use hermlie_core::catalog::CatalogEntry;
use hermlie_core::{Error as CoreError, KForm, LieAlgebra, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} at byte {pos} is out of range 1..={dim}")]
    IndexOutOfRange { pos: usize, index: usize, dim: usize },
    #[error("ambiguous index at byte {pos}: use [i,j] for dimension >= 10 or multi-digit indices")]
    AmbiguousIndex { pos: usize },
    #[error("Jacobi identity fails on basis triple ({}, {}, {})", .0[0], .0[1], .0[2])]
    Jacobi([usize; 3]),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslDocument {
    pub name: Option<String>,
    pub params: Vec<(String, String)>,
    /// Basis symbol for `eij` shorthand.
    pub letter: char,
    /// `d` of each basis covector, in order.
    pub differentials: Vec<KForm>,
}

impl DslDocument {
    pub fn dim(&self) -> usize {
        self.differentials.len()
    }

    pub fn from_algebra(alg: &LieAlgebra, letter: char) -> Self {
        DslDocument {
            name: None,
            params: Vec::new(),
            letter,
            differentials: alg.differentials(),
        }
    }

    /// Validated Lie algebra with labels `e1, e2, …`.
    pub fn to_algebra(&self) -> Result<LieAlgebra, DslError> {
        let alg = LieAlgebra::from_differentials(&self.differentials)?;
        if let Some([i, j, k]) = alg.jacobi_check() {
            return Err(DslError::Jacobi([i + 1, j + 1, k + 1]));
        }
        let labels = (1..=self.dim()).map(|i| format!("{}{i}", self.letter)).collect();
        Ok(alg.validate()?.with_labels(labels))
    }
}

/// Parses a document and returns the validated algebra.
pub fn parse_structure(text: &str) -> Result<LieAlgebra, DslError> {
    parse_document(text)?.to_algebra()
}

pub fn parse_document(text: &str) -> Result<DslDocument, DslError> {
    let mut name = None;
    let mut params = Vec::new();
    let mut body = String::with_capacity(text.len());
    let mut start = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("name:") {
                name = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("param:") {
                let (k, v) = v.split_once('=').ok_or_else(|| DslError::Syntax {
                    pos: start,
                    msg: "parameter lines read `# param: key = value`".into(),
                })?;
                params.push((k.trim().to_string(), v.trim().to_string()));
            }
            // keep byte positions stable for error reports
            let content = line.trim_end_matches('\n');
            body.extend(std::iter::repeat_n(' ', content.len()));
            body.push_str(&line[content.len()..]);
        } else {
            body.push_str(line);
        }
        start += line.len();
    }
    let mut p = Parser::new(&body);
    let (exprs, letter) = p.document()?;
    Ok(DslDocument {
        name,
        params,
        letter: letter.unwrap_or('e'),
        differentials: exprs,
    })
}

struct Parser<'a> {
    s: &'a [u8],
    src: &'a str,
    pos: usize,
}

struct RawTerm {
    coef: Scalar,
    i: usize,
    j: usize,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            s: src.as_bytes(),
            src,
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), DslError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn document(&mut self) -> Result<(Vec<KForm>, Option<char>), DslError> {
        self.expect(b'(')?;
        let mut raw: Vec<Vec<RawTerm>> = Vec::new();
        let mut letter = None;
        loop {
            raw.push(self.expression(&mut letter)?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err("expected ',' or ')'"),
            }
        }
        if self.peek().is_some() {
            return self.err("trailing input after ')'");
        }
        let n = raw.len();
        let mut out = Vec::with_capacity(n);
        for terms in raw {
            let mut f = KForm::zero(2, n);
            for t in terms {
                for index in [t.i, t.j] {
                    if index == 0 || index > n {
                        return Err(DslError::IndexOutOfRange {
                            pos: t.pos,
                            index,
                            dim: n,
                        });
                    }
                }
                if n >= 10 && self.s[t.pos].is_ascii_alphabetic() {
                    return Err(DslError::AmbiguousIndex { pos: t.pos });
                }
                f.add_term(vec![t.i - 1, t.j - 1], t.coef);
            }
            out.push(f);
        }
        Ok((out, letter))
    }

    fn expression(&mut self, letter: &mut Option<char>) -> Result<Vec<RawTerm>, DslError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1;
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1
                }
                Some(b',') | Some(b')') if !first => break,
                _ if !first => return self.err("expected '+', '-', ',' or ')'"),
                _ => {}
            }
            let (coef, basis) = self.term(letter)?;
            let coef = if sign < 0 { -coef } else { coef };
            match basis {
                Some((i, j, pos)) => terms.push(RawTerm { coef, i, j, pos }),
                None if first && coef.is_zero() && matches!(self.peek(), Some(b',') | Some(b')')) => {
                    return Ok(terms)
                }
                None => return self.err("expected a basis 2-form such as e12 or [1,2]"),
            }
            first = false;
        }
        Ok(terms)
    }

    /// Coefficient factors joined by `*`, then an optional basis element.
    fn term(&mut self, letter: &mut Option<char>) -> Result<(Scalar, Option<(usize, usize, usize)>), DslError> {
        let mut coef = Scalar::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                        self.pos += 1;
                    }
                    let q: Scalar = match self.src[start..self.pos].parse() {
                        Ok(q) => q,
                        Err(_) => {
                            self.pos = start;
                            return self.err("malformed rational literal");
                        }
                    };
                    coef = &coef * &q;
                }
                Some(b's') if self.src[self.pos..].starts_with("sqrt(") => {
                    let start = self.pos;
                    let close = match self.src[start..].find(')') {
                        Some(c) => start + c,
                        None => return self.err("unterminated sqrt("),
                    };
                    let q: Scalar = match self.src[start..=close].parse() {
                        Ok(q) => q,
                        Err(_) => return self.err("sqrt needs a square-free positive integer"),
                    };
                    if !coef.is_rational() && coef.radicand() != q.radicand() {
                        return self.err("mixed square roots");
                    }
                    coef = &coef * &q;
                    self.pos = close + 1;
                }
                Some(b'[') => {
                    let pos = self.pos;
                    self.pos += 1;
                    let i = self.index()?;
                    self.expect(b',')?;
                    let j = self.index()?;
                    self.expect(b']')?;
                    return self.oriented(coef, i, j, pos);
                }
                Some(c @ (b'e' | b'f')) => {
                    let pos = self.pos;
                    let letter_c = c as char;
                    match letter {
                        Some(l) if *l != letter_c => {
                            return self.err(format!("mixed basis symbols '{l}' and '{letter_c}'"))
                        }
                        _ => *letter = Some(letter_c),
                    }
                    self.pos += 1;
                    let digits_start = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = &self.s[digits_start..self.pos];
                    if digits.len() > 2 {
                        return Err(DslError::AmbiguousIndex { pos });
                    }
                    if digits.len() < 2 {
                        self.pos = digits_start;
                        return self.err("expected two single-digit indices");
                    }
                    let i = (digits[0] - b'0') as usize;
                    let j = (digits[1] - b'0') as usize;
                    return self.oriented(coef, i, j, pos);
                }
                _ => return Ok((coef, None)),
            }
            // a factor was consumed; continue after '*' or stop
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coef, None));
            }
        }
    }

    fn oriented(
        &self,
        coef: Scalar,
        i: usize,
        j: usize,
        pos: usize,
    ) -> Result<(Scalar, Option<(usize, usize, usize)>), DslError> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok((coef, Some((i, j, pos)))),
            std::cmp::Ordering::Greater => Ok((-coef, Some((j, i, pos)))),
            std::cmp::Ordering::Equal => Err(DslError::Syntax {
                pos,
                msg: format!("repeated index {i}"),
            }),
        }
    }

    fn index(&mut self) -> Result<usize, DslError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an index");
        }
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.err("index too large"))
    }
}

fn write_term(out: &mut String, first: bool, coef: &Scalar, surd: bool, basis: &str) {
    let neg = coef.is_negative();
    let mag = coef.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if surd {
        // coefficient carries the sqrt already
        let text = mag.to_string();
        let text = text.strip_prefix("1*").unwrap_or(&text).to_string();
        let _ = write!(out, "{text}*{basis}");
    } else if mag.is_one() {
        out.push_str(basis);
    } else {
        let _ = write!(out, "{}*{basis}", mag);
    }
}

/// Canonical text: metadata lines, then the list with sorted terms.
pub fn serialize(doc: &DslDocument) -> String {
    let n = doc.dim();
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "# name: {name}");
    }
    for (k, v) in &doc.params {
        let _ = writeln!(out, "# param: {k} = {v}");
    }
    out.push('(');
    for (k, f) in doc.differentials.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        if f.is_zero() {
            out.push('0');
            continue;
        }
        let mut first = true;
        for (idx, c) in f.terms() {
            let basis = if n >= 10 {
                format!("[{},{}]", idx[0] + 1, idx[1] + 1)
            } else {
                format!("{}{}{}", doc.letter, idx[0] + 1, idx[1] + 1)
            };
            let rat = Scalar::from_rational(c.rational_part().clone());
            let surd = Scalar::from_rational(c.surd_part().clone());
            if !rat.is_zero() {
                write_term(&mut out, first, &rat, false, &basis);
                first = false;
            }
            if !surd.is_zero() {
                let term = &surd * &Scalar::sqrt_of(c.radicand());
                write_term(&mut out, first, &term, true, &basis);
                first = false;
            }
        }
    }
    out.push_str(")\n");
    out
}

/// Document for a catalog entry, carrying its name and parameters.
pub fn catalog_document(e: &CatalogEntry) -> DslDocument {
    let mut doc = DslDocument::from_algebra(&e.algebra, e.basis_letter);
    doc.name = Some(e.name.clone());
    doc.params = e.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    doc
}

impl fmt::Display for DslDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
