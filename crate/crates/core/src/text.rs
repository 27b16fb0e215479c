//! Canonical text form of elements and derivations, and its parser.
//!
//! Elements print as terms in graded lexicographic order joined by `" + "`,
//! each term `c·x1^a1…xn^an·ξi1…ξik` with unit coefficients and exponents
//! omitted. Derivations print as `image∂ξi` / `image∂xi` terms, with the
//! image parenthesised when it has several terms. The parser also accepts
//! the ASCII spellings `xi1` (ξ₁), `dxi1` (∂ξ₁), `dx1` (∂x₁), `*` for `·`,
//! `-` between terms, `E` for the Euler field and `d` for the Koszul
//! differential.

use std::fmt::Write as _;

use crate::derivation::{euler, koszul_d, SuperDerivation, SuperpointField};
use crate::element::SuperElement;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Parity};
use crate::scalar::Scalar;

fn format_monomial(m: &Monomial) -> String {
    let mut even = String::new();
    for (i, &a) in m.even().iter().enumerate() {
        match a {
            0 => {}
            1 => {
                let _ = write!(even, "x{}", i + 1);
            }
            _ => {
                let _ = write!(even, "x{}^{}", i + 1, a);
            }
        }
    }
    let mut odd = String::new();
    for i in m.odd_indices() {
        let _ = write!(odd, "ξ{}", i + 1);
    }
    match (even.is_empty(), odd.is_empty()) {
        (true, true) => String::new(),
        (false, true) => even,
        (true, false) => odd,
        (false, false) => format!("{even}·{odd}"),
    }
}

fn format_term<S: Scalar>(m: &Monomial, c: &S) -> String {
    let mono = format_monomial(m);
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        mono
    } else if (-c.clone()).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}·{mono}")
    }
}

pub fn format_element<S: Scalar>(e: &SuperElement<S>) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    e.terms().map(|(m, c)| format_term(m, c)).collect::<Vec<_>>().join(" + ")
}

fn format_image<S: Scalar>(image: &SuperElement<S>, op: &str) -> String {
    let mut terms = image.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if m.is_one() => {
            if c.is_one() {
                op.to_string()
            } else if (-c.clone()).is_one() {
                format!("-{op}")
            } else {
                format!("{c}·{op}")
            }
        }
        (Some((m, c)), None) => format!("{}{op}", format_term(m, c)),
        _ => format!("({})·{op}", format_element(image)),
    }
}

pub fn format_derivation<S: Scalar>(d: &SuperDerivation<S>) -> String {
    let mut parts = Vec::new();
    for (i, h) in d.images_xi().iter().enumerate() {
        if !h.is_zero() {
            parts.push(format_image(h, &format!("∂ξ{}", i + 1)));
        }
    }
    for (i, h) in d.images_x().iter().enumerate() {
        if !h.is_zero() {
            parts.push(format_image(h, &format!("∂x{}", i + 1)));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn format_field<S: Scalar>(f: &SuperpointField<S>) -> String {
    format_derivation(&f.as_derivation())
}

struct Parser<'a, S> {
    chars: Vec<char>,
    pos: usize,
    n: usize,
    _scalar: std::marker::PhantomData<&'a S>,
}

enum Operator {
    DXi(usize),
    DX(usize),
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn new(text: &str, n: usize) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, n, _scalar: std::marker::PhantomData }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) && self.pos + n <= self.chars.len() {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn eat_dot(&mut self) -> bool {
        self.eat('·') || self.eat('*')
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let Some(d) = self.digits() else {
            return self.err("expected a variable index");
        };
        let i: usize = d.parse().map_err(|_| Error::Parse { pos: at, msg: "bad index".into() })?;
        if i == 0 || i > self.n {
            return Err(Error::Parse { pos: at, msg: format!("index {i} out of range 1..={}", self.n) });
        }
        Ok(i - 1)
    }

    fn at_digit(&self, offset: usize) -> bool {
        self.peek_at(offset).is_some_and(|c| c.is_ascii_digit())
    }

    fn at_factor(&self) -> bool {
        match self.peek() {
            Some('ξ') => true,
            Some('x') => self.at_digit(1) || (self.peek_at(1) == Some('i') && self.at_digit(2)),
            _ => false,
        }
    }

    fn coefficient(&mut self) -> Result<S> {
        let start = self.pos;
        self.digits();
        if self.eat('/') && self.digits().is_none() {
            return self.err("expected a denominator");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        S::parse_scalar(&text).ok_or(Error::Parse { pos: start, msg: format!("bad coefficient '{text}'") })
    }

    fn sign(&mut self) -> bool {
        let mut negative = false;
        loop {
            self.skip_ws();
            if self.eat('-') {
                negative = !negative;
            } else if !self.eat('+') {
                return negative;
            }
        }
    }

    /// `x`/`ξ` factors; returns exponents and the odd indices in written order.
    fn factors(&mut self) -> Result<(Vec<u32>, Vec<usize>)> {
        let mut even = vec![0u32; self.n];
        let mut odd = Vec::new();
        loop {
            let save = self.pos;
            if self.eat_dot() && !self.at_factor() {
                self.pos = save;
                break;
            }
            if !self.at_factor() {
                break;
            }
            if self.eat('ξ') || self.eat_str("xi") {
                odd.push(self.index()?);
            } else {
                self.pos += 1;
                let i = self.index()?;
                let mut e = 1;
                if self.eat('^') {
                    let at = self.pos;
                    e = self
                        .digits()
                        .and_then(|d| d.parse::<u32>().ok())
                        .ok_or(Error::Parse { pos: at, msg: "expected an exponent".into() })?;
                }
                even[i] += e;
            }
        }
        Ok((even, odd))
    }

    /// A term without its leading sign: coefficient, factors, or both.
    fn unsigned_term(&mut self) -> Result<SuperElement<S>> {
        let n = self.n;
        let mut c = S::one();
        let mut had_coefficient = false;
        if self.at_digit(0) {
            c = self.coefficient()?;
            had_coefficient = true;
            let save = self.pos;
            if self.eat_dot() && !self.at_factor() {
                self.pos = save;
            }
        }
        if !self.at_factor() {
            if had_coefficient {
                return Ok(SuperElement::constant(n, c));
            }
            return self.err("expected a term");
        }
        let (even, odd) = self.factors()?;
        let mono = SuperElement::xi_product(n, &odd)?;
        let even_mono = SuperElement::monomial(n, Monomial::from_parts(even, 0), c);
        Ok(&even_mono * &mono)
    }

    fn element(&mut self) -> Result<SuperElement<S>> {
        let mut out = SuperElement::zero(self.n);
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() || self.peek() == Some(')') {
                if first {
                    return self.err("empty expression");
                }
                return Ok(out);
            }
            if !first && !matches!(self.peek(), Some('+') | Some('-')) {
                return self.err("expected '+' or '-'");
            }
            let negative = self.sign();
            let term = self.unsigned_term()?;
            out = if negative { &out - &term } else { &out + &term };
            first = false;
        }
    }

    fn operator(&mut self) -> Result<Operator> {
        if self.eat_str("∂ξ") || self.eat_str("dxi") || self.eat_str("∂xi") {
            return Ok(Operator::DXi(self.index()?));
        }
        if self.eat_str("∂x") || self.eat_str("dx") {
            return Ok(Operator::DX(self.index()?));
        }
        self.err("expected ∂ξi or ∂xi")
    }

    fn derivation_term(&mut self) -> Result<SuperDerivation<S>> {
        let n = self.n;
        let mut image = SuperElement::one(n);
        if self.eat('(') {
            image = self.element()?;
            self.skip_ws();
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            self.eat_dot();
        } else if self.at_digit(0) || self.at_factor() {
            image = self.unsigned_term()?;
            self.eat_dot();
        }
        if self.eat('E') {
            return Ok(euler::<S>(n).scale(&scalar_of(&image, self.pos)?));
        }
        if self.peek() == Some('d') && self.peek_at(1) != Some('x') {
            self.pos += 1;
            return Ok(koszul_d::<S>(n).scale(&scalar_of(&image, self.pos)?));
        }
        let op = self.operator()?;
        let zero = || vec![SuperElement::zero(n); n];
        let (mut xi, mut x) = (zero(), zero());
        match op {
            Operator::DXi(i) => xi[i] = image,
            Operator::DX(i) => x[i] = image,
        }
        let at = self.pos;
        let parity = match op {
            Operator::DXi(_) => xi.iter().find_map(SuperElement::parity).map(|p| p + Parity::Odd),
            Operator::DX(_) => x.iter().find_map(SuperElement::parity),
        };
        SuperDerivation::new(n, parity.unwrap_or(Parity::Even), xi, x)
            .map_err(|e| Error::Parse { pos: at, msg: e.to_string() })
    }

    fn derivation(&mut self) -> Result<SuperDerivation<S>> {
        self.skip_ws();
        if self.peek() == Some('0') && self.chars[self.pos + 1..].iter().all(|c| c.is_whitespace()) {
            return Ok(SuperDerivation::zero(self.n, Parity::Even));
        }
        let mut out: Option<SuperDerivation<S>> = None;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return match out {
                    Some(d) => Ok(d),
                    None => self.err("empty expression"),
                };
            }
            if out.is_some() && !matches!(self.peek(), Some('+') | Some('-')) {
                return self.err("expected '+' or '-'");
            }
            let negative = self.sign();
            let at = self.pos;
            let mut term = self.derivation_term()?;
            if negative {
                term = term.scale(&-S::one());
            }
            out = Some(match out {
                None => term,
                Some(acc) => acc.try_add(&term).map_err(|e| Error::Parse { pos: at, msg: e.to_string() })?,
            });
        }
    }
}

fn scalar_of<S: Scalar>(image: &SuperElement<S>, pos: usize) -> Result<S> {
    let mut terms = image.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if m.is_one() => Ok(c.clone()),
        (None, _) => Ok(S::zero()),
        _ => Err(Error::Parse { pos, msg: "only a scalar may multiply E or d".into() }),
    }
}

pub fn parse_element<S: Scalar>(text: &str, n: usize) -> Result<SuperElement<S>> {
    crate::monomial::check_dim(n)?;
    let mut p = Parser::<S>::new(text, n);
    let e = p.element()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_derivation<S: Scalar>(text: &str, n: usize) -> Result<SuperDerivation<S>> {
    crate::monomial::check_dim(n)?;
    Parser::<S>::new(text, n).derivation()
}

/// Parses a derivation and reads it as a homogeneous field on the superpoint.
pub fn parse_field<S: Scalar>(text: &str, n: usize) -> Result<SuperpointField<S>> {
    SuperpointField::from_derivation(&parse_derivation(text, n)?)
}
