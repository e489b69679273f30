//! Exact scalars a + bθ over ℚ or a quadratic extension.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::QuadraticField;
use crate::error::{Error, Result};

/// `a + b·θ`; the field is dropped whenever `b = 0`.
#[derive(Clone, Debug)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    field: Option<Arc<QuadraticField>>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), field: None }
    }

    pub fn from_coords(a: BigRational, b: BigRational, field: Option<Arc<QuadraticField>>) -> Self {
        if b.is_zero() {
            return Self::from_rational(a);
        }
        let field = field.expect("irrational part without a field");
        Scalar { a, b, field: Some(field) }
    }

    pub fn generator(field: &Arc<QuadraticField>) -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::one(), field: Some(field.clone()) }
    }

    pub fn coords(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    pub fn field(&self) -> Option<&Arc<QuadraticField>> {
        self.field.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    fn common_field(&self, other: &Scalar) -> Result<Option<Arc<QuadraticField>>> {
        match (&self.field, &other.field) {
            (None, f) | (f, None) => Ok(f.clone()),
            (Some(x), Some(y)) if x == y => Ok(Some(x.clone())),
            _ => Err(Error::FieldMismatch(format!("{self} vs {other}"))),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        let field = self.common_field(other)?;
        Ok(Scalar::from_coords(&self.a + &other.a, &self.b + &other.b, field))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        let field = self.common_field(other)?;
        Ok(Scalar::from_coords(&self.a - &other.a, &self.b - &other.b, field))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        let field = self.common_field(other)?;
        if self.b.is_zero() {
            return Ok(Scalar::from_coords(&self.a * &other.a, &self.a * &other.b, field));
        }
        if other.b.is_zero() {
            return Ok(Scalar::from_coords(&self.a * &other.a, &self.b * &other.a, field));
        }
        let k = field.as_ref().expect("both irrational");
        let bd = &self.b * &other.b;
        let a = &self.a * &other.a + &bd * k.q();
        let b = &self.a * &other.b + &self.b * &other.a + &bd * k.p();
        Ok(Scalar::from_coords(a, b, field))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    /// The Galois conjugate (a + bp) − bθ.
    pub fn conj(&self) -> Scalar {
        match &self.field {
            None => self.clone(),
            Some(k) => Scalar::from_coords(&self.a + &self.b * k.p(), -&self.b, Some(k.clone())),
        }
    }

    /// a² + abp − b²q.
    pub fn norm(&self) -> BigRational {
        match &self.field {
            None => &self.a * &self.a,
            Some(k) => &self.a * &self.a + &self.a * &self.b * k.p() - &self.b * &self.b * k.q(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Scalar::from_rational(self.a.recip()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Scalar::from_coords(&c.a / &n, &c.b / &n, c.field))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        match &self.field {
            None => Complex64::new(a, 0.0),
            Some(k) => Complex64::new(a, 0.0) + k.embedding() * self.b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        self.b.is_zero() && self.a.is_negative()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.field == other.field)
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on (a, b).
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(k) = &self.field else {
            return write!(f, "{}", self.a);
        };
        let g = k.generator_name();
        let mag = self.b.abs();
        let term = if mag.is_one() { g.to_string() } else { format!("{mag}*{g}") };
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{term}"),
            (true, true) => write!(f, "-{term}"),
            (false, false) => write!(f, "{} + {term}", self.a),
            (false, true) => write!(f, "{} - {term}", self.a),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::from_coords(-self.a, -self.b, self.field)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, try_add);
scalar_binop!(Sub, sub, try_sub);
scalar_binop!(Mul, mul, try_mul);
scalar_binop!(Div, div, try_div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::rat;

    fn t1_field() -> Arc<QuadraticField> {
        // t1² + 3t1 + 3 = 0
        QuadraticField::new("t1", rat(-3, 1), rat(-3, 1)).unwrap()
    }

    #[test]
    fn generator_satisfies_minpoly() {
        let t1 = Scalar::generator(&t1_field());
        let lhs = &t1 * &t1 + Scalar::from_int(3) * &t1 + Scalar::from_int(3);
        assert!(lhs.is_zero());
        assert!(lhs.field().is_none());
    }

    #[test]
    fn inverse_and_norm() {
        let k = t1_field();
        let x = Scalar::from_coords(rat(1, 2), rat(-2, 3), Some(k));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(Scalar::from_rational(x.norm()), &x * &x.conj());
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn product_of_conjugate_roots_is_constant_term() {
        // t1·t̄1 = 3 for t1² + 3t1 + 3
        let t1 = Scalar::generator(&t1_field());
        assert_eq!(&t1 * &t1.conj(), Scalar::from_int(3));
        assert_eq!(&t1 + &t1.conj(), Scalar::from_int(-3));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Scalar::generator(&t1_field());
        let other = QuadraticField::new("t1", rat(0, 1), rat(-3, 1)).unwrap();
        let b = Scalar::generator(&other);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(_))));
        // rationals mix with anything
        assert!(a.try_add(&Scalar::from_int(1)).is_ok());
    }

    #[test]
    fn display_round_shapes() {
        let k = t1_field();
        assert_eq!(Scalar::ratio(-16, 9).to_string(), "-16/9");
        assert_eq!(Scalar::from_coords(rat(0, 1), rat(-1, 1), Some(k.clone())).to_string(), "-t1");
        assert_eq!(Scalar::from_coords(rat(1, 3), rat(-2, 5), Some(k)).to_string(), "1/3 - 2/5*t1");
    }

    #[test]
    fn powers() {
        let t1 = Scalar::generator(&t1_field());
        let cube = t1.pow(3).unwrap();
        assert_eq!(cube, &(&t1 * &t1) * &t1);
        assert!((&t1.pow(-2).unwrap() * &t1.pow(2).unwrap()).is_one());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let k = t1_field();
        let x = Scalar::from_coords(rat(-1, 1), rat(-1, 1), Some(k.clone()));
        let y = Scalar::from_coords(rat(2, 1), rat(1, 1), Some(k));
        assert!(x < y);
        assert!(Scalar::from_int(-1) > x);
    }
}
