//! A small expression language for elements of `U(g)^{⊗k}`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := tensor (('+' | '-') tensor)*
//! tensor  := product (('⊗' | '(x)' | '@') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number | name | name '(' sum ')' | '(' sum ')'
//! ```
//!
//! Names resolve, in order, to parameters (`gamma`, `xi`, `zeta`, `eps`,
//! `eta`), functions (`exp`, `ln`), definitions supplied by the caller, and
//! generators of the algebra (including derived labels such as `h13`).
//! Juxtaposition is not multiplication: write `xi*e13`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::scalar::{Param, ParamScalar, Rational};
use crate::uea::{GradedSeries, TensorElement, UElement, Uea, UeaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("definition cycle through `{0}`")]
    Cycle(String),
    #[error(transparent)]
    Uea(#[from] UeaError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Param(Param),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power; negative exponents are accepted only for `eps`.
    Pow(Box<Expr>, i32),
    Tensor(Vec<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0, len: src.len() };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn num(n: i64) -> Expr {
        Expr::Num(Rational::from_int(n))
    }

    pub fn name(s: &str) -> Expr {
        Expr::Name(s.to_string())
    }

    pub fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    /// Number of tensor legs; scalars have rank 0.
    pub fn rank(&self, defs: &Definitions) -> usize {
        match self {
            Expr::Num(_) | Expr::Param(_) => 0,
            Expr::Name(n) => match defs.get(n) {
                Some(e) => e.rank(defs),
                None => 1,
            },
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Ln(a) => a.rank(defs),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.rank(defs).max(b.rank(defs)),
            Expr::Tensor(legs) => legs.iter().map(|l| l.rank(defs).max(1)).sum(),
        }
    }

    /// Pre-order rewrite: `f` may replace any node; otherwise recurse.
    pub fn rewrite(&self, f: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
        if let Some(e) = f(self) {
            return e;
        }
        let rec = |e: &Expr| Box::new(e.rewrite(f));
        match self {
            Expr::Num(_) | Expr::Param(_) | Expr::Name(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(rec(a)),
            Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
            Expr::Div(a, b) => Expr::Div(rec(a), rec(b)),
            Expr::Pow(a, k) => Expr::Pow(rec(a), *k),
            Expr::Exp(a) => Expr::Exp(rec(a)),
            Expr::Ln(a) => Expr::Ln(rec(a)),
            Expr::Tensor(legs) => Expr::Tensor(legs.iter().map(|l| l.rewrite(f)).collect()),
        }
    }

    pub fn substitute_param(&self, p: Param, with: &Expr) -> Expr {
        self.rewrite(&|e| matches!(e, Expr::Param(q) if *q == p).then(|| with.clone()))
    }

    /// Replace names by expressions (one level, then recursively).
    pub fn substitute_names(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let rec = |e: &Expr| Box::new(e.substitute_names(f));
        match self {
            Expr::Name(n) => f(n).unwrap_or_else(|| self.clone()),
            Expr::Num(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(rec(a)),
            Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
            Expr::Div(a, b) => Expr::Div(rec(a), rec(b)),
            Expr::Pow(a, k) => Expr::Pow(rec(a), *k),
            Expr::Exp(a) => Expr::Exp(rec(a)),
            Expr::Ln(a) => Expr::Ln(rec(a)),
            Expr::Tensor(legs) => Expr::Tensor(legs.iter().map(|l| l.substitute_names(f)).collect()),
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Tensor(_) => 2,
        Expr::Mul(..) | Expr::Div(..) => 3,
        Expr::Neg(_) => 4,
        Expr::Pow(..) => 5,
        Expr::Num(r) if !r.is_integer() || r.is_negative() => 3,
        _ => 6,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if prec(e) < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(r) => write!(f, "{r}"),
            Expr::Param(p) => write!(f, "{p}"),
            Expr::Name(n) => f.write_str(n),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 5)
            }
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" + ")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" - ")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 3)?;
                f.write_str("*")?;
                wrap(f, b, 4)
            }
            Expr::Div(a, b) => {
                wrap(f, a, 3)?;
                f.write_str("/")?;
                wrap(f, b, 6)
            }
            Expr::Pow(a, k) => {
                wrap(f, a, 6)?;
                if *k < 0 {
                    write!(f, "^-{}", -k)
                } else {
                    write!(f, "^{k}")
                }
            }
            Expr::Tensor(legs) => {
                for (i, l) in legs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊗ ")?;
                    }
                    wrap(f, l, 3)?;
                }
                Ok(())
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    Tensor,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((Tok::Num(s), off));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '#') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((Tok::Ident(s), off));
        } else if c == '⊗' || c == '@' {
            out.push((Tok::Tensor, off));
            i += 1;
        } else if c == '(' && chars.get(i + 1).map(|x| x.1) == Some('x') && chars.get(i + 2).map(|x| x.1) == Some(')') {
            out.push((Tok::Tensor, off));
            i += 3;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), off));
            i += 1;
        } else {
            return Err(ExprError::Parse { offset: off, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ExprError {
        let offset = self.toks.get(self.pos).map_or(self.len, |t| t.1);
        ExprError::Parse { offset, message: message.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.tensor()?;
        loop {
            if self.eat_op('+') {
                e = e.add(self.tensor()?);
            } else if self.eat_op('-') {
                e = e.sub(self.tensor()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn tensor(&mut self) -> Result<Expr, ExprError> {
        let first = self.product()?;
        let mut legs = vec![first];
        while self.peek() == Some(&Tok::Tensor) {
            self.pos += 1;
            legs.push(self.product()?);
        }
        Ok(if legs.len() == 1 { legs.pop().unwrap() } else { Expr::Tensor(legs) })
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.unary()?;
        loop {
            if self.eat_op('*') {
                e = e.mul(self.unary()?);
            } else if self.eat_op('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_op('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.peek().cloned() {
                Some(Tok::Op('-')) if matches!(self.toks.get(self.pos + 1), Some((Tok::Num(_), _))) => {
                    let Some((Tok::Num(s), _)) = self.toks.get(self.pos + 1).cloned() else { unreachable!() };
                    self.pos += 2;
                    let k: i32 = s.parse().map_err(|_| self.error("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), -k));
                }
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let k: i32 = s.parse().map_err(|_| self.error("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(self.error("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let r: Rational = s.parse().map_err(|_| self.error("bad number"))?;
                Ok(Expr::Num(r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if (name == "exp" || name == "ln") && self.peek() == Some(&Tok::Op('(')) {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if !self.eat_op(')') {
                        return Err(self.error("expected `)`"));
                    }
                    return Ok(if name == "exp" { inner.exp() } else { inner.ln() });
                }
                Ok(match Param::from_name(&name) {
                    Some(p) => Expr::Param(p),
                    None => Expr::Name(name),
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat_op(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a number, name or `(`")),
        }
    }
}

/// Named sub-expressions such as `sigma := ln(1 + xi*e13)`.
pub type Definitions = BTreeMap<String, Expr>;

/// Result of symbolic evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(ParamScalar),
    Elem(UElement),
    Tensor(TensorElement),
}

impl Value {
    pub fn into_element(self, ctx: &Arc<Uea>) -> Result<UElement, ExprError> {
        match self {
            Value::Scalar(c) => Ok(UElement::scalar(ctx, c)),
            Value::Elem(e) => Ok(e),
            Value::Tensor(t) if t.rank() == 1 => Ok(t.to_element()),
            Value::Tensor(t) => Err(ExprError::Type(format!("expected an element, got a rank-{} tensor", t.rank()))),
        }
    }

    pub fn into_tensor(self, ctx: &Arc<Uea>, rank: usize) -> Result<TensorElement, ExprError> {
        match self {
            Value::Scalar(c) => Ok(TensorElement::one(ctx, rank).scale(&c)),
            Value::Elem(e) if rank == 1 => Ok(TensorElement::from_legs(&[e])?),
            Value::Tensor(t) if t.rank() == rank => Ok(t),
            other => Err(ExprError::Type(format!("expected a rank-{rank} tensor, got {}", other.kind()))),
        }
    }

    fn kind(&self) -> String {
        match self {
            Value::Scalar(_) => "a scalar".into(),
            Value::Elem(_) => "an element".into(),
            Value::Tensor(t) => format!("a rank-{} tensor", t.rank()),
        }
    }
}

/// Evaluates expressions into the truncated enveloping algebra.
pub struct SymbolicEvaluator<'a> {
    pub ctx: Arc<Uea>,
    pub defs: &'a Definitions,
    cache: std::cell::RefCell<BTreeMap<String, Value>>,
    active: std::cell::RefCell<Vec<String>>,
}

impl<'a> SymbolicEvaluator<'a> {
    pub fn new(ctx: &Arc<Uea>, defs: &'a Definitions) -> Self {
        Self { ctx: ctx.clone(), defs, cache: Default::default(), active: Default::default() }
    }

    pub fn element(&self, e: &Expr) -> Result<UElement, ExprError> {
        self.eval(e)?.into_element(&self.ctx)
    }

    pub fn tensor(&self, e: &Expr, rank: usize) -> Result<TensorElement, ExprError> {
        self.eval(e)?.into_tensor(&self.ctx, rank)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, ExprError> {
        Ok(match e {
            Expr::Num(r) => Value::Scalar(ParamScalar::constant(r.clone())),
            Expr::Param(p) => Value::Scalar(ParamScalar::param(*p)),
            Expr::Name(n) => self.name(n)?,
            Expr::Neg(a) => self.scale(self.eval(a)?, &ParamScalar::from_int(-1)),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?, false)?,
            Expr::Sub(a, b) => self.add(self.eval(a)?, self.eval(b)?, true)?,
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?)?,
            Expr::Div(a, b) => match self.eval(b)? {
                Value::Scalar(d) => {
                    let d = d.as_constant().filter(|d| !d.is_zero()).ok_or_else(|| {
                        ExprError::Type("division only by a nonzero rational constant".into())
                    })?;
                    self.scale(self.eval(a)?, &ParamScalar::constant(d.recip()))
                }
                _ => return Err(ExprError::Type("division only by a nonzero rational constant".into())),
            },
            Expr::Pow(a, k) if *k < 0 => match self.eval(a)? {
                Value::Scalar(c) if c == ParamScalar::param(Param::Epsilon) => {
                    Value::Scalar(ParamScalar::epsilon_pow(*k as i16))
                }
                _ => return Err(ExprError::Type("negative powers are allowed only for eps".into())),
            },
            Expr::Pow(a, k) => {
                let base = self.eval(a)?;
                let mut acc = Value::Scalar(ParamScalar::one());
                for _ in 0..*k {
                    acc = self.mul(acc, base.clone())?;
                }
                acc
            }
            Expr::Tensor(legs) => {
                let mut parts: Vec<UElement> = Vec::new();
                let mut scalar = ParamScalar::one();
                let mut tensors: Vec<TensorElement> = Vec::new();
                for l in legs {
                    match self.eval(l)? {
                        Value::Scalar(c) => {
                            scalar = &scalar * &c;
                            parts.push(UElement::one(&self.ctx));
                        }
                        Value::Elem(x) => parts.push(x),
                        Value::Tensor(t) => {
                            if !parts.is_empty() || !tensors.is_empty() {
                                return Err(ExprError::Type("nested tensor legs must be plain elements".into()));
                            }
                            tensors.push(t);
                        }
                    }
                }
                if !tensors.is_empty() {
                    return Err(ExprError::Type("nested tensor legs must be plain elements".into()));
                }
                if parts.len() > 3 {
                    return Err(ExprError::Type("tensor rank above 3".into()));
                }
                Value::Tensor(TensorElement::from_legs(&parts)?.scale(&scalar))
            }
            Expr::Exp(a) => match self.eval(a)? {
                Value::Scalar(c) if c.is_zero() => Value::Scalar(ParamScalar::one()),
                Value::Scalar(_) => return Err(ExprError::Type("exp of a nonzero scalar is not polynomial".into())),
                Value::Elem(x) => Value::Elem(x.exp_graded()?),
                Value::Tensor(t) => Value::Tensor(t.exp_graded()?),
            },
            Expr::Ln(a) => match self.eval(a)? {
                Value::Scalar(c) if c.is_one() => Value::Scalar(ParamScalar::zero()),
                Value::Scalar(_) => return Err(ExprError::Type("ln of a scalar other than 1".into())),
                Value::Elem(x) => Value::Elem(x.log_graded()?),
                Value::Tensor(t) => Value::Tensor(t.log_graded()?),
            },
        })
    }

    fn name(&self, n: &str) -> Result<Value, ExprError> {
        if let Some(v) = self.cache.borrow().get(n) {
            return Ok(v.clone());
        }
        if let Some(def) = self.defs.get(n) {
            if self.active.borrow().iter().any(|a| a == n) {
                return Err(ExprError::Cycle(n.to_string()));
            }
            self.active.borrow_mut().push(n.to_string());
            let v = self.eval(def);
            self.active.borrow_mut().pop();
            let v = v?;
            self.cache.borrow_mut().insert(n.to_string(), v.clone());
            return Ok(v);
        }
        match self.ctx.spec().element(n) {
            Ok(x) => Ok(Value::Elem(UElement::from_lie(&self.ctx, &x))),
            Err(_) => Err(ExprError::UnknownName(n.to_string())),
        }
    }

    fn scale(&self, v: Value, c: &ParamScalar) -> Value {
        match v {
            Value::Scalar(s) => Value::Scalar(&s * c),
            Value::Elem(x) => Value::Elem(x.scale(c)),
            Value::Tensor(t) => Value::Tensor(t.scale(c)),
        }
    }

    fn add(&self, a: Value, b: Value, negate: bool) -> Result<Value, ExprError> {
        let b = if negate { self.scale(b, &ParamScalar::from_int(-1)) } else { b };
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (Value::Scalar(x), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(x)) => {
                Value::Elem(e.add(&UElement::scalar(&self.ctx, x))?)
            }
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(x.add(&y)?),
            (Value::Scalar(x), Value::Tensor(t)) | (Value::Tensor(t), Value::Scalar(x)) => {
                let one = TensorElement::one(&self.ctx, t.rank()).scale(&x);
                Value::Tensor(t.add(&one)?)
            }
            (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(x.add(&y)?),
            (a, b) => return Err(ExprError::Type(format!("cannot add {} and {}", a.kind(), b.kind()))),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value, ExprError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(x), v) | (v, Value::Scalar(x)) => self.scale(v, &x),
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(x.mul(&y)?),
            (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(x.mul(&y)?),
            (a, b) => return Err(ExprError::Type(format!("cannot multiply {} by {}", a.kind(), b.kind()))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraSpec;
    use crate::uea::GradingContext;

    #[test]
    fn parse_and_print_round_trip() {
        for src in [
            "h ⊗ exp(-sigma) + 1 ⊗ h - xi*e12 ⊗ e23*exp(3/2*(gamma - 1)*sigma)",
            "e12 (x) e23 @ e13",
            "-1/2*(3*gamma + 1)*e21^2",
        ] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src}");
        }
    }

    #[test]
    fn parse_errors_have_offsets() {
        match Expr::parse("e12 + $") {
            Err(ExprError::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("exp(e12").is_err());
        assert!(Expr::parse("e12^x").is_err());
    }

    #[test]
    fn evaluates_commutator() {
        let ctx = Uea::new(LieAlgebraSpec::build_sl(3).unwrap(), GradingContext::default());
        let defs = Definitions::new();
        let ev = SymbolicEvaluator::new(&ctx, &defs);
        let c = ev.element(&Expr::parse("e12*e23 - e23*e12").unwrap()).unwrap();
        assert_eq!(c.render(), "e13");
    }
}
