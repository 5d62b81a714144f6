//! The state expression language.
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := scalar? factor
//! scalar  := number | number 'i' | 'exp(i' number ')'
//! factor  := 'S(' slots ')' factor | 'A(' slots ')' factor | ket
//! slots   := item (',' item)*      item := int | int '..' int
//! ket     := '|' int (',' int)* '>'
//! ```
//!
//! Whitespace is ignored. Basis labels are 0-based, slots 1-based. `S`/`A`
//! operators apply right to left and are normalized, so `S(2,3)A(1,2)|0,1,2>`
//! antisymmetrizes slots 1,2 first.

use std::fmt;

use quarticles_core::catalog::StateRecipe;
use quarticles_core::perm::{antisymmetrize, symmetrize};
use quarticles_core::{MultiKet, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Sym(Vec<usize>, Box<Factor>),
    Anti(Vec<usize>, Box<Factor>),
    Ket(Vec<usize>),
}

impl Factor {
    fn ket(&self) -> &[usize] {
        match self {
            Factor::Sym(_, f) | Factor::Anti(_, f) => f.ket(),
            Factor::Ket(labels) => labels,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: C64,
    pub factor: Factor,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateExpression {
    pub terms: Vec<Term>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn int(&mut self) -> Result<usize, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| err(start, "integer out of range"))
    }

    fn number(&mut self, signed: bool) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        if signed && matches!(self.src.get(end), Some(b'+' | b'-')) {
            end += 1;
        }
        let digits = |end: &mut usize| {
            while *end < self.src.len() && self.src[*end].is_ascii_digit() {
                *end += 1;
            }
        };
        digits(&mut end);
        if self.src.get(end) == Some(&b'.') && self.src.get(end + 1) != Some(&b'.') {
            end += 1;
            digits(&mut end);
        }
        if matches!(self.src.get(end), Some(b'e' | b'E')) {
            let mut e = end + 1;
            if matches!(self.src.get(e), Some(b'+' | b'-')) {
                e += 1;
            }
            if self.src.get(e).is_some_and(u8::is_ascii_digit) {
                end = e;
                digits(&mut end);
            }
        }
        let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => err(start, "expected a number"),
        }
    }

    fn scalar(&mut self) -> Result<C64, ExprError> {
        if self.starts_with("exp(") {
            self.pos += 4;
            if !self.eat(b'i') {
                return err(self.pos, "expected 'i' after 'exp('");
            }
            let theta = self.number(true)?;
            self.expect(b')')?;
            return Ok(C64::from_polar(1.0, theta));
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number(false)?;
                if self.eat(b'i') {
                    Ok(C64::new(0.0, v))
                } else {
                    Ok(C64::new(v, 0.0))
                }
            }
            _ => Ok(C64::new(1.0, 0.0)),
        }
    }

    fn slots(&mut self) -> Result<Vec<usize>, ExprError> {
        let mut out = Vec::new();
        loop {
            let at = self.pos;
            let a = self.int()?;
            if self.starts_with("..") {
                self.pos += 2;
                let b = self.int()?;
                if b < a {
                    return err(at, "empty slot range");
                }
                out.extend(a..=b);
            } else {
                out.push(a);
            }
            if !self.eat(b',') {
                break;
            }
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Factor, ExprError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(op @ (b'S' | b'A')) => {
                self.pos += 1;
                self.expect(b'(')?;
                let slots = self.slots()?;
                self.expect(b')')?;
                if slots.len() < 2 {
                    return err(at, "S and A need at least two slots");
                }
                let inner = Box::new(self.factor()?);
                Ok(if op == b'S' {
                    Factor::Sym(slots, inner)
                } else {
                    Factor::Anti(slots, inner)
                })
            }
            Some(b'|') => {
                self.pos += 1;
                let mut labels = vec![self.int()?];
                while self.eat(b',') {
                    labels.push(self.int()?);
                }
                self.expect(b'>')?;
                Ok(Factor::Ket(labels))
            }
            _ => err(at, "expected 'S(', 'A(' or a ket '|...>'"),
        }
    }

    fn term(&mut self, sign: f64) -> Result<Term, ExprError> {
        self.skip_ws();
        let position = self.pos;
        let coef = self.scalar()? * sign;
        Ok(Term {
            coef,
            factor: self.factor()?,
            position,
        })
    }
}

/// Parses `text` into an expression without evaluating it.
pub fn parse_state(text: &str) -> Result<StateExpression, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return err(0, "empty expression");
    }
    let first_sign = if p.eat(b'-') {
        -1.0
    } else {
        p.eat(b'+');
        1.0
    };
    let mut terms = vec![p.term(first_sign)?];
    loop {
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                terms.push(p.term(1.0)?);
            }
            Some(b'-') => {
                p.pos += 1;
                terms.push(p.term(-1.0)?);
            }
            Some(_) => return err(p.pos, "expected '+', '-' or end of input"),
        }
    }
    let n = terms[0].factor.ket().len();
    for t in &terms {
        if t.factor.ket().len() != n {
            return err(t.position, format!("every ket must have {n} slots"));
        }
    }
    Ok(StateExpression { terms })
}

impl StateExpression {
    pub fn slots(&self) -> usize {
        self.terms[0].factor.ket().len()
    }

    /// One more than the largest label used.
    pub fn min_dim(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.factor.ket().iter().copied())
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Evaluates to a normalized ket in dimension `d` (default: the smallest
    /// dimension holding every label, at least 2).
    pub fn evaluate(&self, d: Option<usize>) -> Result<MultiKet, ExprError> {
        let d = d.unwrap_or_else(|| self.min_dim().max(2));
        if d < self.min_dim() {
            return err(0, format!("label {} does not fit dimension {d}", self.min_dim() - 1));
        }
        let n = self.slots();
        let mut total = MultiKet::zero(d, n).or_else(|e| err(0, e.to_string()))?;
        for t in &self.terms {
            let k = eval_factor(&t.factor, d, t.position)?;
            total = total.add_scaled(t.coef, &k).or_else(|e| err(t.position, e.to_string()))?;
        }
        total.normalize().or_else(|_| err(0, "expression evaluates to the zero vector"))
    }
}

fn eval_factor(f: &Factor, d: usize, position: usize) -> Result<MultiKet, ExprError> {
    let apply = |slots: &[usize], inner: &Factor, sym: bool| {
        let k = eval_factor(inner, d, position)?;
        for &s in slots {
            if s == 0 || s > k.slots() {
                return err(position, format!("slot {s} outside 1..={}", k.slots()));
            }
        }
        let r = if sym { symmetrize(&k, slots) } else { antisymmetrize(&k, slots) };
        r.or_else(|e| match e {
            quarticles_core::Error::DegenerateState => err(position, "term evaluates to the zero vector"),
            e => err(position, e.to_string()),
        })
    };
    match f {
        Factor::Sym(slots, inner) => apply(slots, inner, true),
        Factor::Anti(slots, inner) => apply(slots, inner, false),
        Factor::Ket(labels) => MultiKet::product(labels, d).or_else(|e| err(position, e.to_string())),
    }
}

fn fmt_slots(slots: &[usize]) -> String {
    slots.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_factor(f: &Factor) -> String {
    match f {
        Factor::Sym(s, inner) => format!("S({}){}", fmt_slots(s), fmt_factor(inner)),
        Factor::Anti(s, inner) => format!("A({}){}", fmt_slots(s), fmt_factor(inner)),
        Factor::Ket(l) => format!("|{}>", fmt_slots(l)),
    }
}

fn fmt_real_term(out: &mut String, first: bool, v: f64, body: &str, imaginary: bool) {
    let unit = if imaginary { "i" } else { "" };
    if first {
        if v < 0.0 {
            out.push('-');
        }
    } else {
        out.push_str(if v < 0.0 { " - " } else { " + " });
    }
    if v.abs() != 1.0 || imaginary {
        out.push_str(&format!("{:?}{unit}", v.abs()));
    }
    out.push_str(body);
}

impl fmt::Display for StateExpression {
    /// Canonical source text; parsing it yields the same expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for t in &self.terms {
            let body = fmt_factor(&t.factor);
            let c = t.coef;
            let first = out.is_empty();
            if c.im == 0.0 {
                fmt_real_term(&mut out, first, c.re, &body, false);
            } else if c.re == 0.0 {
                fmt_real_term(&mut out, first, c.im, &body, true);
            } else {
                fmt_real_term(&mut out, first, c.re, &body, false);
                fmt_real_term(&mut out, false, c.im, &body, true);
            }
        }
        f.write_str(&out)
    }
}

fn term(coef: C64, factor: Factor) -> Term {
    Term {
        coef,
        factor,
        position: 0,
    }
}

fn base_ket(m: usize, n: usize) -> Factor {
    Factor::Ket((0..n).map(|s| s.min(m)).collect())
}

/// Expression for a catalog recipe. Seeded random recipes are written out
/// amplitude by amplitude.
pub fn recipe_expression(recipe: &StateRecipe, d: usize) -> quarticles_core::Result<StateExpression> {
    let one = C64::new(1.0, 0.0);
    let terms = match *recipe {
        StateRecipe::PsiS { m, n } => vec![term(
            one,
            Factor::Sym((2..=m).collect(), Box::new(Factor::Anti(vec![1, 2], Box::new(base_ket(m, n))))),
        )],
        StateRecipe::PsiA { m, n } => vec![term(
            one,
            Factor::Anti((2..=m).collect(), Box::new(Factor::Sym(vec![1, 2], Box::new(base_ket(m, n))))),
        )],
        StateRecipe::PsiD { m, n } => (1..=m)
            .map(|i| {
                let others = (1..=m).filter(|&s| s != i).collect();
                let pair = vec![i, i % m + 1];
                term(one, Factor::Sym(others, Box::new(Factor::Anti(pair, Box::new(base_ket(m, n))))))
            })
            .collect(),
        StateRecipe::Phase { theta } => vec![
            term(one, Factor::Ket(vec![0, 1])),
            term(C64::from_polar(1.0, theta), Factor::Ket(vec![1, 0])),
        ],
        _ => {
            let k = recipe.build(d)?;
            k.iter()
                .map(|(t, a)| term(*a, Factor::Ket(t.labels().to_vec())))
                .collect()
        }
    };
    Ok(StateExpression { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use quarticles_core::catalog::{phase_state, psi_s};
    use quarticles_core::RayRelation;

    fn ray_equal(a: &MultiKet, b: &MultiKet) -> bool {
        matches!(a.ray_compare(b, 1e-9).unwrap(), RayRelation::Proportional(l) if (l.norm() - 1.0).abs() < 1e-9)
    }

    #[test]
    fn parses_the_mixed_state() {
        let e = parse_state("S(2,3)A(1,2)|0,1,2>").unwrap();
        assert_eq!(e.terms.len(), 1);
        assert!(ray_equal(&e.evaluate(None).unwrap(), &psi_s(3, 3, 3).unwrap()));
    }

    // The angle is the rounded π/3 a user would type, not the constant.
    #[test]
    #[allow(clippy::approx_constant)]
    fn parses_phase_and_imaginary_scalars() {
        let e = parse_state("|0,1> + exp(i 1.0472)|1,0>").unwrap();
        let k = e.evaluate(None).unwrap();
        assert!(k.ray_compare(&phase_state(1.0472, 2).unwrap(), 1e-12).unwrap() != RayRelation::Distinct);
        let e = parse_state(" 2 |0> - 0.5i|1>").unwrap();
        assert_eq!(e.terms[1].coef, C64::new(0.0, -0.5));
        let e = parse_state("-|0,1> + |1,0>").unwrap();
        assert_eq!(e.terms[0].coef, C64::new(-1.0, 0.0));
        let e = parse_state("exp(i -3.1)|0>").unwrap();
        assert!((e.terms[0].coef.arg() + 3.1).abs() < 1e-12);
    }

    #[test]
    fn range_sugar() {
        let a = parse_state("S(2..4)A(1,2)|0,1,2,3>").unwrap();
        let b = parse_state("S(2,3,4)A(1,2)|0,1,2,3>").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_state("A(1,2)|0,0>").unwrap().evaluate(None).unwrap_err();
        assert!(e.message.contains("zero"));
        assert_eq!(parse_state("|0,1> + |0>").unwrap_err().position, 8);
        assert_eq!(parse_state("|0,1 ").unwrap_err().position, 5);
        assert_eq!(parse_state("S(1)|0,1>").unwrap_err().position, 0);
        assert!(parse_state("").is_err());
        assert!(parse_state("|0,1> |1,0>").is_err());
        let e = parse_state("S(1,3)|0,1>").unwrap().evaluate(None).unwrap_err();
        assert!(e.message.contains("slot 3"));
        assert!(parse_state("|0,1> - |0,1>").unwrap().evaluate(None).is_err());
        assert!(parse_state("|2,0>").unwrap().evaluate(Some(2)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["S(2,3)A(1,2)|0,1,2>", "|0,1> - 0.5i|1,0>", "-2.5|0> + 1.5|1> - 3i|1>"] {
            let strip = |e: StateExpression| e.terms.into_iter().map(|t| (t.coef, t.factor)).collect::<Vec<_>>();
            let e = parse_state(src).unwrap();
            let again = parse_state(&e.to_string()).unwrap();
            assert_eq!(strip(again), strip(e), "{src}");
        }
    }
}
