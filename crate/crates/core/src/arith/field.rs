//! Quadratic extensions of ℚ and the field context that selects one.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// ℚ(θ) with θ² = pθ + q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    generator: String,
    p: BigRational,
    q: BigRational,
}

impl QuadraticField {
    pub fn new(generator: &str, p: BigRational, q: BigRational) -> Result<Arc<Self>> {
        let field = QuadraticField { generator: generator.to_string(), p, q };
        if rational_sqrt(&field.discriminant()).is_some() {
            return Err(Error::ReducibleField(field.minpoly_string()));
        }
        Ok(Arc::new(field))
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// p² + 4q; its square root is 2θ − p.
    pub fn discriminant(&self) -> BigRational {
        &self.p * &self.p + BigRational::from_integer(4.into()) * &self.q
    }

    /// `t1^2 = p*t1 + q`
    pub fn minpoly_string(&self) -> String {
        let g = &self.generator;
        let linear = if self.p.is_one() {
            g.clone()
        } else if (-&self.p).is_one() {
            format!("-{g}")
        } else {
            format!("{}*{g}", self.p)
        };
        match (self.p.is_zero(), self.q.is_zero()) {
            (true, _) => format!("{g}^2 = {}", self.q),
            (false, true) => format!("{g}^2 = {linear}"),
            (false, false) if self.q.is_negative() => format!("{g}^2 = {linear} - {}", -&self.q),
            (false, false) => format!("{g}^2 = {linear} + {}", self.q),
        }
    }

    /// Complex value of θ: the root with positive imaginary part, or the larger real root.
    pub fn embedding(&self) -> Complex64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let d = self.discriminant().to_f64().unwrap_or(f64::NAN);
        if d < 0.0 {
            Complex64::new(p / 2.0, (-d).sqrt() / 2.0)
        } else {
            Complex64::new((p + d.sqrt()) / 2.0, 0.0)
        }
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.minpoly_string())
    }
}

/// The coefficient field of one computation: ℚ or a single quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Quadratic(Arc<QuadraticField>),
}

impl FieldSpec {
    pub fn quadratic(&self) -> Option<&Arc<QuadraticField>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Quadratic(k) => Some(k),
        }
    }

    pub fn generator(&self) -> Option<Scalar> {
        self.quadratic().map(Scalar::generator)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (x.field(), self) {
            (None, _) => true,
            (Some(k), FieldSpec::Quadratic(own)) => k == own,
            (Some(_), FieldSpec::Rationals) => false,
        }
    }

    /// Combines the field of `x` into this context, failing on a second extension.
    pub fn absorb(&self, x: &Scalar) -> Result<FieldSpec> {
        match (x.field(), self) {
            (None, _) => Ok(self.clone()),
            (Some(k), FieldSpec::Rationals) => Ok(FieldSpec::Quadratic(k.clone())),
            (Some(k), FieldSpec::Quadratic(own)) if k == own => Ok(self.clone()),
            (Some(_), FieldSpec::Quadratic(_)) => Err(Error::FieldMismatch(x.to_string())),
        }
    }

    /// A square root inside this field, if one exists.
    pub fn sqrt(&self, x: &Scalar) -> Option<Scalar> {
        if !self.contains(x) {
            return None;
        }
        let (a, b) = x.coords();
        let Some(k) = self.quadratic() else {
            return rational_sqrt(a).map(Scalar::from_rational);
        };
        let two = BigRational::from_integer(2.into());
        let d = k.discriminant();
        // x = A + B·w with w = 2θ − p, w² = d
        let big_a = a + b * k.p() / &two;
        let big_b = b / &two;
        let (u, v) = if big_b.is_zero() {
            if let Some(s) = rational_sqrt(&big_a) {
                (s, BigRational::zero())
            } else {
                (BigRational::zero(), rational_sqrt(&(&big_a / &d))?)
            }
        } else {
            let norm = &big_a * &big_a - &d * &big_b * &big_b;
            let s = rational_sqrt(&norm)?;
            let u = [(&big_a + &s) / &two, (&big_a - &s) / &two].iter().find_map(rational_sqrt)?;
            let v = &big_b / (&two * &u);
            (u, v)
        };
        let root = Scalar::from_coords(&u - &v * k.p(), &two * &v, Some(k.clone()));
        debug_assert_eq!(&(&root * &root), x);
        Some(root)
    }

    pub fn describe(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Quadratic(k) => k.minpoly_string(),
        }
    }
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt(x.numer())?;
    let d = int_sqrt(x.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat_one() -> BigRational {
    BigRational::one()
}
