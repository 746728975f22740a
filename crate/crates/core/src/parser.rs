//! A small language for differential forms:
//!
//! ```text
//! sum     := wedge (('+' | '-') wedge)*
//! wedge   := product ('^' product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | identifier | 'sqrt' '(' sum ')' | '(' sum ')'
//! ```
//!
//! Identifiers are `x1..xn`, `y1..yn`, `t`, `dx1..dxn`, `dy1..dyn` and `theta` (for `n = 1`
//! also `x`, `y`, `dx`, `dy`). Numbers are integers or terminating decimals; `p/q` is
//! ordinary division. `*` needs a function on one side; `/` divides by a nonzero constant.
//! `sqrt` is accepted only where an irrational overall scale is allowed (affine functions).

use crate::error::{Error, Result};
use crate::forms::PolyForm;
use crate::heis::HeisParams;
use crate::poly::Poly;
use crate::region::{AffineFn, ScaledAffine};
use crate::scalar::{parse_q, Scalar, Q};

use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(Error::Parse { line, column, message: format!("unexpected character `{other}`") })
                }
            }
        };
        column += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

/// Abstract syntax of a form expression.
#[derive(Debug, Clone, PartialEq)]
pub enum FormExpr {
    Num(Q, Pos),
    Ident(String, Pos),
    Sqrt(Box<FormExpr>, Pos),
    Neg(Box<FormExpr>, Pos),
    Add(Box<FormExpr>, Box<FormExpr>, Pos),
    Sub(Box<FormExpr>, Box<FormExpr>, Pos),
    Mul(Box<FormExpr>, Box<FormExpr>, Pos),
    Div(Box<FormExpr>, Box<FormExpr>, Pos),
    Wedge(Box<FormExpr>, Box<FormExpr>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse { line: p.line, column: p.column, message: message.into() })
    }

    fn sum(&mut self) -> Result<FormExpr> {
        let mut lhs = self.wedge()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = FormExpr::Add(Box::new(lhs), Box::new(self.wedge()?), pos);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = FormExpr::Sub(Box::new(lhs), Box::new(self.wedge()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> Result<FormExpr> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Caret {
            let pos = self.pos();
            self.bump();
            lhs = FormExpr::Wedge(Box::new(lhs), Box::new(self.product()?), pos);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<FormExpr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = FormExpr::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = FormExpr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<FormExpr> {
        if *self.peek() == Tok::Minus {
            let pos = self.pos();
            self.bump();
            return Ok(FormExpr::Neg(Box::new(self.unary()?), pos));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<FormExpr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(s) => match parse_q(&s) {
                Ok(q) => Ok(FormExpr::Num(q, pos)),
                Err(_) => Err(Error::Parse { line: pos.line, column: pos.column, message: format!("bad number `{s}`") }),
            },
            Tok::Ident(name) if name == "sqrt" => {
                if *self.peek() != Tok::LParen {
                    return self.error("expected `(` after sqrt");
                }
                self.bump();
                let inner = self.sum()?;
                self.expect_rparen()?;
                Ok(FormExpr::Sqrt(Box::new(inner), pos))
            }
            Tok::Ident(name) => Ok(FormExpr::Ident(name, pos)),
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::End => Err(Error::Parse { line: pos.line, column: pos.column, message: "unexpected end of input".into() }),
            other => Err(Error::Parse { line: pos.line, column: pos.column, message: format!("unexpected {}", describe(&other)) }),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() != Tok::RParen {
            return self.error("expected `)`");
        }
        self.bump();
        Ok(())
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) | Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses text into an expression tree without resolving identifiers.
pub fn parse_expr(text: &str) -> Result<FormExpr> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

/// A form together with an overall positive real factor (1 unless `sqrt` appears).
#[derive(Debug, Clone)]
struct Value {
    form: PolyForm,
    scale: f64,
}

fn parse_err<T>(pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line: pos.line, column: pos.column, message: message.into() })
}

fn resolve(params: HeisParams, name: &str, pos: Pos) -> Result<PolyForm> {
    let n = params.n();
    let nv = params.dim();
    let unknown = || Error::UnknownIdentifier { name: name.to_string(), line: pos.line, column: pos.column };
    let index = |rest: &str| -> Option<usize> {
        if rest.is_empty() && n == 1 {
            return Some(0);
        }
        let j: usize = rest.parse().ok()?;
        (1..=n).contains(&j).then(|| j - 1).filter(|_| !rest.starts_with('0'))
    };
    match name {
        "t" => return Ok(PolyForm::function(params, Poly::var(nv, 2 * n))),
        "theta" => return Ok(PolyForm::theta(params)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("dx") {
        return index(rest).map(|j| PolyForm::atom(params, j)).ok_or_else(unknown);
    }
    if let Some(rest) = name.strip_prefix("dy") {
        return index(rest).map(|j| PolyForm::atom(params, n + j)).ok_or_else(unknown);
    }
    if let Some(rest) = name.strip_prefix('x') {
        return index(rest).map(|j| PolyForm::function(params, Poly::var(nv, j))).ok_or_else(unknown);
    }
    if let Some(rest) = name.strip_prefix('y') {
        return index(rest).map(|j| PolyForm::function(params, Poly::var(nv, n + j))).ok_or_else(unknown);
    }
    Err(unknown())
}

fn constant_of(v: &PolyForm) -> Option<Q> {
    (v.grade() == 0).then(|| v.coeff(0).as_constant()).flatten()
}

fn elaborate(params: HeisParams, e: &FormExpr, allow_sqrt: bool) -> Result<Value> {
    let exact = |form| Value { form, scale: 1.0 };
    match e {
        FormExpr::Num(q, _) => Ok(exact(PolyForm::constant(params, q.clone()))),
        FormExpr::Ident(name, pos) => Ok(exact(resolve(params, name, *pos)?)),
        FormExpr::Sqrt(inner, pos) => {
            if !allow_sqrt {
                return parse_err(*pos, "sqrt is only allowed in affine function expressions");
            }
            let v = elaborate(params, inner, false)?;
            let Some(q) = constant_of(&v.form) else {
                return parse_err(*pos, "sqrt takes a constant argument");
            };
            if q.is_negative() {
                return parse_err(*pos, "sqrt of a negative number");
            }
            let (a, b) = (q.numer().sqrt(), q.denom().sqrt());
            if &a * &a == *q.numer() && &b * &b == *q.denom() {
                Ok(exact(PolyForm::constant(params, Q::new(a, b))))
            } else {
                Ok(Value { form: PolyForm::constant(params, Q::one()), scale: q.to_f64().sqrt() })
            }
        }
        FormExpr::Neg(inner, _) => {
            let v = elaborate(params, inner, allow_sqrt)?;
            Ok(Value { form: v.form.neg(), scale: v.scale })
        }
        FormExpr::Add(a, b, pos) | FormExpr::Sub(a, b, pos) => {
            let (va, vb) = (elaborate(params, a, allow_sqrt)?, elaborate(params, b, allow_sqrt)?);
            if va.form.grade() != vb.form.grade() {
                return Err(Error::GradeMismatch { left: va.form.grade(), right: vb.form.grade() });
            }
            let vb_form = if matches!(e, FormExpr::Sub(..)) { vb.form.neg() } else { vb.form };
            if va.form.is_zero() && va.scale != vb.scale {
                return Ok(Value { form: vb_form, scale: vb.scale });
            }
            if vb_form.is_zero() || va.scale == vb.scale {
                return Ok(Value { form: va.form.add(&vb_form)?, scale: va.scale });
            }
            parse_err(*pos, "terms with different irrational factors cannot be combined")
        }
        FormExpr::Mul(a, b, pos) | FormExpr::Wedge(a, b, pos) => {
            let (va, vb) = (elaborate(params, a, allow_sqrt)?, elaborate(params, b, allow_sqrt)?);
            if matches!(e, FormExpr::Mul(..)) && va.form.grade() != 0 && vb.form.grade() != 0 {
                return parse_err(
                    *pos,
                    format!(
                        "`*` needs a function on one side (grades {} and {}); use `^` for the wedge product",
                        va.form.grade(),
                        vb.form.grade()
                    ),
                );
            }
            Ok(Value { form: va.form.wedge(&vb.form)?, scale: va.scale * vb.scale })
        }
        FormExpr::Div(a, b, pos) => {
            let (va, vb) = (elaborate(params, a, allow_sqrt)?, elaborate(params, b, allow_sqrt)?);
            match constant_of(&vb.form) {
                Some(q) if !q.is_zero() => Ok(Value { form: va.form.scale(&(Q::one() / q)), scale: va.scale / vb.scale }),
                Some(_) => parse_err(*pos, "division by zero"),
                None => parse_err(*pos, "division is only by nonzero constants"),
            }
        }
    }
}

/// Parses and elaborates a differential form.
pub fn parse_form_expr(text: &str, params: HeisParams) -> Result<PolyForm> {
    let v = elaborate(params, &parse_expr(text)?, false)?;
    Ok(v.form)
}

/// Parses an affine function of the coordinates, possibly with an overall factor such as
/// `1/sqrt(2)`.
pub fn parse_affine(text: &str, params: HeisParams) -> Result<ScaledAffine> {
    let v = elaborate(params, &parse_expr(text)?, true)?;
    let not_affine = || Error::Parameter(format!("`{text}` is not an affine function of the coordinates"));
    if v.form.grade() != 0 {
        return Err(not_affine());
    }
    let p = v.form.coeff(0);
    if p.degree() > 1 {
        return Err(not_affine());
    }
    let nv = params.dim();
    let mut coeffs = vec![Q::zero(); nv];
    let mut constant = Q::zero();
    for (m, c) in p.terms() {
        match m.iter().position(|e| *e == 1) {
            Some(i) => coeffs[i] = c.clone(),
            None => constant = c.clone(),
        }
    }
    Ok(ScaledAffine { base: AffineFn::new(coeffs, constant), scale: v.scale })
}
