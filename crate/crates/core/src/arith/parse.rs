//! Text grammar for scalars, polynomials and rational functions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' ('-')? integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{FieldSpec, QuadraticField};
use super::poly::Poly;
use super::ratfunc::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Values an [`Expr`] can be evaluated into.
pub trait Algebra: Sized + Clone {
    fn from_integer(n: BigInt) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn div(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn powi(&self, e: i64) -> Result<Self>;
}

impl Algebra for Scalar {
    fn from_integer(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        self.try_div(other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, e: i64) -> Result<Self> {
        self.pow(e)
    }
}

fn same_field(a: &RationalFunction, b: &RationalFunction) -> Result<()> {
    let fa = a.num().field().or_else(|| a.den().field());
    let fb = b.num().field().or_else(|| b.den().field());
    match (fa, fb) {
        (Some(x), Some(y)) if x != y => Err(Error::FieldMismatch(format!("{a} vs {b}"))),
        _ => Ok(()),
    }
}

impl Algebra for RationalFunction {
    fn from_integer(n: BigInt) -> Self {
        RationalFunction::constant(Scalar::from_bigint(n))
    }
    fn add(&self, other: &Self) -> Result<Self> {
        same_field(self, other)?;
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        same_field(self, other)?;
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        same_field(self, other)?;
        Ok(self * other)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        same_field(self, other)?;
        self.checked_div(other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, e: i64) -> Result<Self> {
        let e = i32::try_from(e).map_err(|_| Error::Parse { line: 0, col: 0, msg: "exponent too large".into() })?;
        self.pow(e)
    }
}

impl Expr {
    pub fn eval<T: Algebra>(&self, env: &dyn Fn(&str) -> Option<T>) -> Result<T> {
        Ok(match self {
            Expr::Int(n) => T::from_integer(n.clone()),
            Expr::Var { name, .. } => env(name).ok_or_else(|| Error::Unbound(name.clone()))?,
            Expr::Neg(x) => x.eval(env)?.neg(),
            Expr::Add(a, b) => a.eval(env)?.add(&b.eval(env)?)?,
            Expr::Sub(a, b) => a.eval(env)?.sub(&b.eval(env)?)?,
            Expr::Mul(a, b) => a.eval(env)?.mul(&b.eval(env)?)?,
            Expr::Div(a, b) => a.eval(env)?.div(&b.eval(env)?)?,
            Expr::Pow(a, e) => a.eval(env)?.powi(*e)?,
        })
    }

    /// Identifiers in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var { name, .. } => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Neg(x) | Expr::Pow(x, _) => x.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), l0, c0));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            continue;
        }
        // accept the Unicode minus sign found in transcribed formulas
        let op = if c == '−' { '-' } else { c };
        if "+-*/^()".contains(op) {
            out.push((Tok::Op(op), l0, c0));
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: &str) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::Op('(') => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let paren = self.peek() == &Tok::Op('(');
        if paren {
            self.bump();
        }
        let neg = self.peek() == &Tok::Op('-');
        if neg {
            self.bump();
        }
        let Tok::Int(n) = self.peek().clone() else {
            return self.error("expected integer exponent");
        };
        self.bump();
        if paren {
            if self.peek() != &Tok::Op(')') {
                return self.error("expected `)`");
            }
            self.bump();
        }
        let Ok(e) = i64::try_from(n) else {
            return self.error("exponent too large");
        };
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn primary(&mut self) -> Result<Expr> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => Ok(Expr::Var { name, line, col }),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(Error::Parse { line, col, msg: "unexpected end of input".into() }),
            Tok::Op(c) => Err(Error::Parse { line, col, msg: format!("unexpected `{c}`") }),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut lx = Lexer { toks: lex(text)?, pos: 0 };
    let e = lx.expr()?;
    if lx.peek() != &Tok::End {
        return lx.error("trailing input");
    }
    Ok(e)
}

/// `lhs = rhs` becomes lhs − rhs; a bare expression stands for itself.
fn parse_equation(text: &str) -> Result<Expr> {
    match text.split_once('=') {
        None => parse_expr(text),
        Some((lhs, rhs)) => {
            let rhs_expr = parse_expr(rhs).map_err(|e| shift_columns(e, lhs.chars().count() + 1))?;
            Ok(Expr::Sub(Box::new(parse_expr(lhs)?), Box::new(rhs_expr)))
        }
    }
}

fn shift_columns(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { line: 1, col, msg } => Error::Parse { line: 1, col: col + by, msg },
        other => other,
    }
}

/// Parses `t1^2 = p*t1 + q`, `3*t1^2 - 14*t1 + 27 = 0` or a bare quadratic.
pub fn parse_field(text: &str) -> Result<Arc<QuadraticField>> {
    let e = parse_equation(text)?;
    let vars = e.variables();
    let [generator] = vars.as_slice() else {
        return Err(Error::Parse { line: 1, col: 1, msg: "field declaration needs exactly one generator".into() });
    };
    let g = generator.clone();
    let value: RationalFunction = e.eval(&|name: &str| (name == g).then(RationalFunction::z))?;
    let poly = value.num().monic();
    if !value.is_polynomial() || poly.degree() != Some(2) || !poly.is_rational() {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("`{text}` is not a rational quadratic") });
    }
    let p = -poly.coeff(1);
    let q = -poly.coeff(0);
    QuadraticField::new(generator, rational_of(&p), rational_of(&q))
}

fn rational_of(s: &Scalar) -> BigRational {
    s.as_rational().cloned().expect("rational coefficient")
}

/// Binds the generator of `field` and every entry of `bindings`.
fn scalar_env<'a>(field: &'a FieldSpec, bindings: &'a HashMap<String, Scalar>) -> impl Fn(&str) -> Option<Scalar> + 'a {
    move |name| {
        if let Some(k) = field.quadratic() {
            if name == k.generator_name() {
                return Some(Scalar::generator(k));
            }
        }
        bindings.get(name).cloned()
    }
}

pub fn parse_scalar(text: &str, field: &FieldSpec, bindings: &HashMap<String, Scalar>) -> Result<Scalar> {
    parse_expr(text)?.eval(&scalar_env(field, bindings))
}

/// Rational function in `z` with parameters bound from `bindings`.
pub fn parse_rational_function(
    text: &str,
    field: &FieldSpec,
    bindings: &HashMap<String, Scalar>,
) -> Result<RationalFunction> {
    let scalars = scalar_env(field, bindings);
    let env = |name: &str| {
        if name == "z" {
            return Some(RationalFunction::z());
        }
        scalars(name).map(RationalFunction::constant)
    };
    parse_expr(text)?.eval(&env)
}

pub fn parse_poly(text: &str, field: &FieldSpec) -> Result<Poly> {
    let rf = parse_rational_function(text, field, &HashMap::new())?;
    if !rf.is_polynomial() {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("`{text}` is not a polynomial") });
    }
    Ok(rf.num().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_and_precedence() {
        let f = FieldSpec::Rationals;
        let none = HashMap::new();
        assert_eq!(parse_scalar("-16/9", &f, &none).unwrap(), Scalar::ratio(-16, 9));
        assert_eq!(parse_scalar("-2^2", &f, &none).unwrap(), Scalar::from_int(-4));
        assert_eq!(parse_scalar("2^-1 + 1/2", &f, &none).unwrap(), Scalar::one());
        assert_eq!(parse_scalar("3(1/3)", &f, &none).unwrap(), Scalar::one());
    }

    #[test]
    fn polynomials() {
        let f = FieldSpec::Rationals;
        assert_eq!(parse_poly("(z+1)^3", &f).unwrap(), Poly::from_ints(&[1, 3, 3, 1]));
        assert_eq!(parse_poly("3z^2 - 14z + 27", &f).unwrap(), Poly::from_ints(&[27, -14, 3]));
        assert!(parse_poly("1/z", &f).is_err());
    }

    #[test]
    fn field_declarations() {
        let k = parse_field("t1^2 + 3*t1 + 3 = 0").unwrap();
        assert_eq!(k.p(), &BigRational::from_integer((-3).into()));
        assert_eq!(k.q(), &BigRational::from_integer((-3).into()));
        let k2 = parse_field("t1^2 = -3*t1 - 3").unwrap();
        assert_eq!(k, k2);
        let k3 = parse_field("3*t1^2 - 14*t1 + 27 = 0").unwrap();
        assert_eq!(k3.p(), &BigRational::new(14.into(), 3.into()));
        let zeta = parse_field("zeta^2 + 3 = 0").unwrap();
        assert_eq!(zeta.generator_name(), "zeta");
        assert!(matches!(parse_field("t1^2 - 4 = 0"), Err(Error::ReducibleField(_))));
    }

    #[test]
    fn field_elements_in_polynomials() {
        let f = FieldSpec::Quadratic(parse_field("t1^2 + 3*t1 + 3 = 0").unwrap());
        let p = parse_poly("(z - t1)*(z - (-3 - t1))", &f).unwrap();
        assert_eq!(p, Poly::from_ints(&[3, 3, 1]));
    }

    #[test]
    fn errors_cite_position() {
        let err = parse_expr("z +\n  * 2").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, col: 3, msg: "unexpected `*`".into() });
        assert!(matches!(parse_expr("z $"), Err(Error::Parse { line: 1, col: 3, .. })));
        let unbound = parse_poly("w + 1", &FieldSpec::Rationals).unwrap_err();
        assert_eq!(unbound, Error::Unbound("w".into()));
    }

    #[test]
    fn parameters_bind() {
        let mut b = HashMap::new();
        b.insert("a".to_string(), Scalar::ratio(1, 2));
        let v = parse_scalar("-3*a + 2", &FieldSpec::Rationals, &b).unwrap();
        assert_eq!(v, Scalar::ratio(1, 2));
    }
}
