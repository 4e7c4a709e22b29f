//! Expression language shared by presentation files and the command line.
//!
//! Precedence, loosest first: binary `+`/`-`, unary `-`, tensor `@`,
//! `*` and `/`, `^`. Multiplication is noncommutative and always explicit.
//! Division is only allowed by numeric constants; exact division by `h^k`
//! is spelled `divh(expr, k)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::element::{AlgebraElement, Element, Letter, TensorElement};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Ring, Scalar};
use crate::series::{apply_series, series_inverse, SeriesFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Series(SeriesFn),
    Inv,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        match s {
            "inv" => Some(Func::Inv),
            other => other.parse().ok().map(Func::Series),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Series(f) => f.name(),
            Func::Inv => "inv",
        }
    }
}

/// Parsed expression tree. Generators are stored by canonical name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(BigInt),
    H,
    Eps,
    Gen(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tensor(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    DivH(Box<Expr>, u32),
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Algebra(AlgebraElement),
    Tensor(TensorElement),
}

impl Value {
    pub fn into_algebra(self) -> Result<AlgebraElement> {
        match self {
            Value::Algebra(a) => Ok(a),
            Value::Tensor(t) => Err(Error::SlotMismatch {
                left: 1,
                right: t.slots(),
            }),
        }
    }

    /// Algebra values become one-slot tensors.
    pub fn into_tensor(self, slots: usize) -> Result<TensorElement> {
        let t = match self {
            Value::Algebra(a) if slots == 1 => TensorElement::from_algebra(&a),
            Value::Algebra(a) if a.is_zero() => TensorElement::zero(a.ring(), slots),
            Value::Algebra(_) => {
                return Err(Error::SlotMismatch {
                    left: 1,
                    right: slots,
                })
            }
            Value::Tensor(t) => t,
        };
        if t.slots() != slots {
            return Err(Error::SlotMismatch {
                left: t.slots(),
                right: slots,
            });
        }
        Ok(t)
    }

    pub fn into_scalar(self) -> Result<Scalar> {
        let a = self.into_algebra()?;
        if a.terms().any(|(w, _)| !w.is_empty()) {
            return Err(Error::Validation(
                "expected a scalar expression (no generators)".into(),
            ));
        }
        Ok(a.unit_coefficient())
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            Value::Algebra(a) => a.render(names),
            Value::Tensor(t) => t.render(names),
        }
    }
}

/// Generator names visible to the parser; aliases resolve to the canonical
/// name at parse time.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    entries: Vec<(String, String)>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, spelling: &str, canonical: &str) {
        self.entries
            .push((spelling.to_string(), canonical.to_string()));
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut t = Self::new();
        for n in names {
            t.add(n.as_ref(), n.as_ref());
        }
        t
    }

    /// Longest spelling that is a prefix of `s`.
    fn longest_match(&self, s: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .filter(|(sp, _)| s.starts_with(sp.as_str()))
            .max_by_key(|(sp, _)| sp.len())
            .map(|(sp, canon)| (canon.as_str(), sp.len()))
    }
}

const KEYWORDS: &[&str] = &["h", "e", "exp", "sinh", "cosh", "sinhc", "inv", "divh"];

pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Gen(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    At,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Gen(s) => format!("generator {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::At => "'@'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self,
            Tok::Num(_) | Tok::Ident(_) | Tok::Gen(_) | Tok::LParen
        )
    }
}

struct Lexer<'a> {
    src: &'a str,
    symbols: &'a SymbolTable,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        let mut pos = 0;
        let bytes = self.src.as_bytes();
        while pos < bytes.len() {
            let c = self.src[pos..].chars().next().expect("in bounds");
            if c.is_whitespace() {
                pos += c.len_utf8();
                continue;
            }
            let start = pos;
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '@' => Tok::At,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                d if d.is_ascii_digit() => {
                    let len = self.src[pos..]
                        .find(|ch: char| !ch.is_ascii_digit())
                        .unwrap_or(self.src.len() - pos);
                    let n: BigInt = self.src[pos..pos + len].parse().expect("digits");
                    pos += len;
                    out.push((Tok::Num(n), start));
                    continue;
                }
                a if a.is_alphabetic() || a == '_' => {
                    let ident_len = self.src[pos..]
                        .find(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
                        .unwrap_or(self.src.len() - pos);
                    let ident = &self.src[pos..pos + ident_len];
                    let gen = self.symbols.longest_match(&self.src[pos..]);
                    if let Some((canon, len)) = gen {
                        if len > ident_len || (len == ident_len && !is_reserved(ident)) {
                            pos += len;
                            out.push((Tok::Gen(canon.to_string()), start));
                            continue;
                        }
                    }
                    pos += ident_len;
                    out.push((Tok::Ident(ident.to_string()), start));
                    continue;
                }
                other => {
                    return Err(self.error_at(pos, format!("unexpected character '{other}'")));
                }
            };
            pos += c.len_utf8();
            out.push((tok, start));
        }
        out.push((Tok::End, self.src.len()));
        Ok(out)
    }

    fn error_at(&self, pos: usize, message: String) -> Error {
        Error::parse(self.line, self.column + pos, message)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let pos = self.toks[self.idx].1;
        Error::parse(self.line, self.column + pos, message)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.advance();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Minus => {
                    self.advance();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.tensor()
    }

    fn tensor(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::At {
            self.advance();
            lhs = Expr::Tensor(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.advance();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Tok::Slash => {
                    self.advance();
                    let denom = self.power()?;
                    if let Err(why) = constant_value(&denom) {
                        return Err(self.error(format!(
                            "division is only allowed by numeric constants ({why}); \
                             for exact division by h^k write divh(<expr>, k), \
                             e.g. divh(sinh(h*J+),1)*J-"
                        )));
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(denom));
                }
                t if t.starts_atom() => {
                    return Err(self.error(format!(
                        "implicit multiplication before {}; write '*' explicitly",
                        t.describe()
                    )));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.advance();
        let negative = if *self.peek() == Tok::Minus {
            self.advance();
            true
        } else {
            false
        };
        match self.advance() {
            Tok::Num(n) => {
                let k: i64 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                let k = if negative { -k } else { k };
                if k < 0 && base != Expr::Eps {
                    return Err(self.error("negative exponents are only allowed on e"));
                }
                Ok(Expr::Pow(Box::new(base), k))
            }
            t => Err(self.error(format!("expected integer exponent, found {}", t.describe()))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.advance() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Gen(g) => Ok(Expr::Gen(g)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "h" => Ok(Expr::H),
                "e" => Ok(Expr::Eps),
                "divh" => {
                    self.expect(Tok::LParen)?;
                    let inner = self.sum()?;
                    self.expect(Tok::Comma)?;
                    let k = match self.advance() {
                        Tok::Num(n) => {
                            u32::try_from(n).map_err(|_| self.error("divh power too large"))?
                        }
                        t => {
                            return Err(self.error(format!(
                                "expected integer power in divh, found {}",
                                t.describe()
                            )))
                        }
                    };
                    self.expect(Tok::RParen)?;
                    Ok(Expr::DivH(Box::new(inner), k))
                }
                name => match Func::from_name(name) {
                    Some(f) => {
                        self.expect(Tok::LParen)?;
                        let inner = self.sum()?;
                        self.expect(Tok::RParen)?;
                        Ok(Expr::Call(f, Box::new(inner)))
                    }
                    None => Err(Error::UnknownSymbol(name.to_string())),
                },
            },
            t => {
                self.idx = self.idx.saturating_sub(1);
                Err(self.error(format!(
                    "expected a number, generator, h, function or '(', found {}",
                    t.describe()
                )))
            }
        }
    }
}

/// Evaluates a generator-free, `h`-free expression to a rational.
fn constant_value(e: &Expr) -> std::result::Result<Rational, String> {
    match e {
        Expr::Num(n) => Ok(Rational::from_integer(n.clone())),
        Expr::Neg(x) => Ok(-constant_value(x)?),
        Expr::Add(a, b) => Ok(constant_value(a)? + constant_value(b)?),
        Expr::Sub(a, b) => Ok(constant_value(a)? - constant_value(b)?),
        Expr::Mul(a, b) => Ok(constant_value(a)? * constant_value(b)?),
        Expr::Div(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                return Err("division by zero".into());
            }
            Ok(constant_value(a)? / d)
        }
        Expr::Pow(a, k) if *k >= 0 => {
            let base = constant_value(a)?;
            let mut acc = Rational::one();
            for _ in 0..*k {
                acc *= &base;
            }
            Ok(acc)
        }
        Expr::H => Err("denominator contains h".into()),
        Expr::Gen(g) => Err(format!("denominator contains generator {g}")),
        _ => Err("denominator is not a numeric constant".into()),
    }
}

/// Parses `src`; `line`/`column` locate it inside a larger file for errors.
pub fn parse_at(src: &str, symbols: &SymbolTable, line: usize, column: usize) -> Result<Expr> {
    let toks = Lexer {
        src,
        symbols,
        line,
        column,
    }
    .tokenize()?;
    let mut p = Parser {
        toks,
        idx: 0,
        line,
        column,
        _src: src,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        let msg = if p.peek().starts_atom() {
            format!(
                "implicit multiplication before {}; write '*' explicitly",
                p.peek().describe()
            )
        } else {
            format!("unexpected {}", p.peek().describe())
        };
        return Err(p.error(msg));
    }
    Ok(e)
}

pub fn parse(src: &str, symbols: &SymbolTable) -> Result<Expr> {
    parse_at(src, symbols, 1, 1)
}

/// Resolves canonical generator names to letters during evaluation.
pub trait GeneratorLookup {
    fn letter_of(&self, name: &str) -> Option<Letter>;
}

impl GeneratorLookup for [String] {
    fn letter_of(&self, name: &str) -> Option<Letter> {
        self.iter().position(|n| n == name).map(|i| i as Letter)
    }
}

impl GeneratorLookup for Vec<String> {
    fn letter_of(&self, name: &str) -> Option<Letter> {
        self.as_slice().letter_of(name)
    }
}

pub fn evaluate(e: &Expr, gens: &dyn GeneratorLookup, ring: Ring) -> Result<Value> {
    use Value::{Algebra as A, Tensor as T};
    Ok(match e {
        Expr::Num(n) => A(AlgebraElement::from_scalar(Scalar::from_rational(
            ring,
            Rational::from_integer(n.clone()),
        ))),
        Expr::H => A(AlgebraElement::from_scalar(Scalar::h(ring))),
        Expr::Eps => A(AlgebraElement::from_scalar(Scalar::monomial(
            ring,
            Rational::one(),
            0,
            1,
        )?)),
        Expr::Gen(name) => {
            let g = gens
                .letter_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            A(AlgebraElement::generator(ring, g))
        }
        Expr::Neg(x) => match evaluate(x, gens, ring)? {
            A(a) => A(a.neg()),
            T(t) => T(t.neg()),
        },
        Expr::Add(a, b) => add_values(evaluate(a, gens, ring)?, evaluate(b, gens, ring)?, false)?,
        Expr::Sub(a, b) => add_values(evaluate(a, gens, ring)?, evaluate(b, gens, ring)?, true)?,
        Expr::Mul(a, b) => mul_values(evaluate(a, gens, ring)?, evaluate(b, gens, ring)?)?,
        Expr::Div(a, b) => {
            let d = constant_value(b).map_err(Error::Validation)?;
            let inv = Rational::one() / d;
            match evaluate(a, gens, ring)? {
                A(x) => A(x.scale_rational(&inv)),
                T(t) => T(t.scale_rational(&inv)),
            }
        }
        Expr::Pow(base, k) => {
            if **base == Expr::Eps {
                let k = i32::try_from(*k).map_err(|_| Error::EpsOverflow {
                    power: i32::MAX,
                    bound: ring.eps_bound,
                })?;
                A(AlgebraElement::from_scalar(Scalar::monomial(
                    ring,
                    Rational::one(),
                    0,
                    k,
                )?))
            } else {
                let b = evaluate(base, gens, ring)?;
                let mut acc = match &b {
                    A(_) => A(AlgebraElement::one(ring)),
                    T(t) => T(TensorElement::one(ring, t.slots())),
                };
                for _ in 0..*k {
                    acc = mul_values(acc, b.clone())?;
                }
                acc
            }
        }
        Expr::Tensor(a, b) => {
            let x = evaluate(a, gens, ring)?.into_tensor_any();
            let y = evaluate(b, gens, ring)?.into_tensor_any();
            T(x.concat_slots(&y)?)
        }
        Expr::Call(f, x) => {
            let v = evaluate(x, gens, ring)?;
            match (f, v) {
                (Func::Series(s), A(a)) => A(apply_series(*s, &a)?),
                (Func::Series(s), T(t)) => T(apply_series(*s, &t)?),
                (Func::Inv, A(a)) => A(series_inverse(&a)?),
                (Func::Inv, T(t)) => T(series_inverse(&t)?),
            }
        }
        Expr::DivH(x, k) => {
            let wide = ring.with_order(ring.order + k);
            match evaluate(x, gens, wide)? {
                A(a) => A(a.exact_divide_h(*k)?.recast(ring)?),
                T(t) => {
                    let divided = t.map_coefficients(|c| c.exact_divide_h(*k))?;
                    T(divided.recast(ring)?)
                }
            }
        }
    })
}

impl Value {
    fn into_tensor_any(self) -> TensorElement {
        match self {
            Value::Algebra(a) => TensorElement::from_algebra(&a),
            Value::Tensor(t) => t,
        }
    }

    fn scalar_part(&self) -> Option<Scalar> {
        match self {
            Value::Algebra(a) if a.terms().all(|(w, _)| w.is_empty()) => Some(a.unit_coefficient()),
            _ => None,
        }
    }
}

fn add_values(a: Value, b: Value, subtract: bool) -> Result<Value> {
    let b = if subtract {
        match b {
            Value::Algebra(x) => Value::Algebra(x.neg()),
            Value::Tensor(t) => Value::Tensor(t.neg()),
        }
    } else {
        b
    };
    match (a, b) {
        (Value::Algebra(x), Value::Algebra(y)) => Ok(Value::Algebra(x.try_add(&y)?)),
        (Value::Tensor(x), Value::Tensor(y)) => Ok(Value::Tensor(x.try_add(&y)?)),
        (Value::Algebra(x), Value::Tensor(t)) | (Value::Tensor(t), Value::Algebra(x)) => {
            if x.is_zero() {
                Ok(Value::Tensor(t))
            } else {
                Err(Error::SlotMismatch {
                    left: 1,
                    right: t.slots(),
                })
            }
        }
    }
}

fn mul_values(a: Value, b: Value) -> Result<Value> {
    if let (Value::Algebra(x), Value::Algebra(y)) = (&a, &b) {
        return Ok(Value::Algebra(x.try_mul(y)?));
    }
    if let (Value::Tensor(x), Value::Tensor(y)) = (&a, &b) {
        return Ok(Value::Tensor(x.try_mul(y)?));
    }
    match (&a, &b) {
        (_, Value::Tensor(t)) => match a.scalar_part() {
            Some(s) => Ok(Value::Tensor(t.scale(&s)?)),
            None => Err(Error::SlotMismatch {
                left: 1,
                right: t.slots(),
            }),
        },
        (Value::Tensor(t), _) => match b.scalar_part() {
            Some(s) => Ok(Value::Tensor(t.scale(&s)?)),
            None => Err(Error::SlotMismatch {
                left: t.slots(),
                right: 1,
            }),
        },
        _ => unreachable!("algebra-algebra handled above"),
    }
}

const P_SUM: u8 = 1;
const P_UNARY: u8 = 2;
const P_TENSOR: u8 = 3;
const P_PRODUCT: u8 = 4;
const P_POWER: u8 = 5;
const P_ATOM: u8 = 6;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => P_SUM,
        Expr::Neg(_) => P_UNARY,
        Expr::Tensor(..) => P_TENSOR,
        Expr::Mul(..) | Expr::Div(..) => P_PRODUCT,
        Expr::Pow(..) => P_POWER,
        _ => P_ATOM,
    }
}

fn write_expr(e: &Expr, min: u8, out: &mut String) {
    let wrap = precedence(e) < min;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Num(n) => out.push_str(&n.to_string()),
        Expr::H => out.push('h'),
        Expr::Eps => out.push('e'),
        Expr::Gen(g) => out.push_str(g),
        Expr::Neg(x) => {
            out.push('-');
            write_expr(x, P_UNARY, out);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(a, P_SUM, out);
            out.push_str(if matches!(e, Expr::Add(..)) {
                " + "
            } else {
                " - "
            });
            write_expr(b, P_UNARY, out);
        }
        Expr::Tensor(a, b) => {
            write_expr(a, P_TENSOR, out);
            out.push('@');
            write_expr(b, P_PRODUCT, out);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_expr(a, P_PRODUCT, out);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            write_expr(b, P_POWER, out);
        }
        Expr::Pow(a, k) => {
            write_expr(a, P_ATOM, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Call(f, x) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(x, P_SUM, out);
            out.push(')');
        }
        Expr::DivH(x, k) => {
            out.push_str("divh(");
            write_expr(x, P_SUM, out);
            out.push_str(&format!(", {k})"));
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self, P_SUM, &mut s);
        f.write_str(&s)
    }
}

impl Expr {
    /// Generator names referenced anywhere in the tree.
    pub fn generators(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Gen(g) => out.push(g),
            Expr::Neg(x) | Expr::Pow(x, _) | Expr::Call(_, x) | Expr::DivH(x, _) => {
                x.collect_generators(out)
            }
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Tensor(a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
            Expr::Num(_) | Expr::H | Expr::Eps => {}
        }
    }

    /// Top-level additive terms with their signs (`true` = subtracted).
    pub fn additive_terms(&self) -> Vec<(bool, &Expr)> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a Expr, negate: bool, out: &mut Vec<(bool, &'a Expr)>) {
            match e {
                Expr::Add(a, b) => {
                    walk(a, negate, out);
                    walk(b, negate, out);
                }
                Expr::Sub(a, b) => {
                    walk(a, negate, out);
                    walk(b, !negate, out);
                }
                Expr::Neg(x) => walk(x, !negate, out),
                other => out.push((negate, other)),
            }
        }
        walk(self, false, &mut out);
        out
    }

    /// Rebuilds a sum from signed terms.
    pub fn from_additive_terms(terms: &[(bool, Expr)]) -> Expr {
        let mut iter = terms.iter();
        let mut acc = match iter.next() {
            None => return Expr::Num(BigInt::zero()),
            Some((true, e)) => Expr::Neg(Box::new(e.clone())),
            Some((false, e)) => e.clone(),
        };
        for (neg, e) in iter {
            acc = if *neg {
                Expr::Sub(Box::new(acc), Box::new(e.clone()))
            } else {
                Expr::Add(Box::new(acc), Box::new(e.clone()))
            };
        }
        acc
    }
}
