//! Reduced rational functions num/den with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.lc();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inv().expect("nonzero denominator");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(n), den: base.den.pow(n) })
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduced(num, &self.den * &self.den)
    }

    /// f′/f
    pub fn log_derivative(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = Self::reduced(self.num.derivative(), self.num.clone());
        let b = Self::reduced(self.den.derivative(), self.den.clone());
        Ok(&a - &b)
    }

    /// self(inner(z)).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let (a, b) = (&inner.num, &inner.den);
        let dn = self.num.deg();
        let dd = self.den.deg();
        let top = dn.max(dd);
        let mut a_pows = vec![Poly::one()];
        let mut b_pows = vec![Poly::one()];
        for i in 1..=top {
            a_pows.push(&a_pows[i - 1] * a);
            b_pows.push(&b_pows[i - 1] * b);
        }
        let homog = |p: &Poly, d: usize| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (i, c)| &acc + &(&a_pows[i] * &b_pows[d - i]).scale(c))
        };
        let mut num = homog(&self.num, dn);
        let mut den = homog(&self.den, dd);
        if dd > dn {
            num = &num * &b_pows[dd - dn];
        } else if dn > dd {
            den = &den * &b_pows[dn - dd];
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }

    /// Coefficients of the Taylor series of `(z − point)^shift · self` at `point`, `n` terms.
    /// Fails if the pole order at `point` exceeds `shift`.
    pub fn local_series(&self, point: &Scalar, shift: usize, n: usize) -> Result<Vec<Scalar>> {
        let num = self.num.shift(point);
        let den = self.den.shift(point);
        let vd = den.valuation();
        if vd > shift {
            return Err(Error::Irregular(point.to_string()));
        }
        // series of x^(shift − vd) · num(x) / (den(x)/x^vd)
        let den_tail: Vec<Scalar> = den.coeffs()[vd..].to_vec();
        let lead_inv = den_tail[0].inv()?;
        let offset = shift - vd;
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = if k >= offset { num.coeff(k - offset) } else { Scalar::zero() };
            for (j, d) in den_tail.iter().enumerate().skip(1).take(k) {
                c = c - d * &out[k - j];
            }
            out.push(c * &lead_inv);
        }
        Ok(out)
    }

    /// Residue at a simple pole or regular point `point`.
    pub fn residue(&self, point: &Scalar) -> Result<Scalar> {
        Ok(self.local_series(point, 1, 1)?.remove(0))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.to_string_in(var);
        }
        format!("({})/({})", self.num.to_string_in(var), self.den.to_string_in(var))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("z"))
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Scalar> for RationalFunction {
    fn from(c: Scalar) -> Self {
        RationalFunction::constant(c)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let l = self.den.div_exact(&g).expect("gcd divides");
        let r = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &r) + &(&rhs.num * &l);
        RationalFunction::reduced(num, &(&l * &r) * &g)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancel before multiplying
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::reduced(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! owned_rf_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    )*};
}

owned_rf_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn reduction_and_monic_denominator() {
        let f = rf(&[-2, 2], &[-2, 0, 2]);
        assert_eq!(f, rf(&[1], &[1, 1]));
        assert!(f.den().is_monic());
        assert_eq!(RationalFunction::new(p(&[1]), Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivative_of_cube() {
        let f = RationalFunction::from_poly(p(&[1, 1]).pow(3));
        assert_eq!(f.derivative(), RationalFunction::from_poly(p(&[1, 1]).pow(2).scale(&Scalar::from_int(3))));
    }

    #[test]
    fn compose_reciprocal() {
        let inv_z = rf(&[1], &[0, 1]);
        let shift = RationalFunction::from_poly(p(&[-1, 1]));
        assert_eq!(inv_z.compose(&shift).unwrap(), rf(&[1], &[-1, 1]));
    }

    #[test]
    fn evaluate_row31_map() {
        let j = rf(&[-1, 0, 2, 0, -1], &[0, 0, 4]);
        assert_eq!(j.eval(&Scalar::from_int(3)).unwrap(), Scalar::ratio(-16, 9));
        assert!(matches!(j.eval(&Scalar::zero()), Err(Error::Pole(_))));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(RationalFunction::one().checked_div(&RationalFunction::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn local_series_and_residue() {
        // 1/(z(1 − z)) at 0: z·f = 1 + z + z² + …
        let f = rf(&[1], &[0, 1, -1]);
        let s = f.local_series(&Scalar::zero(), 1, 4).unwrap();
        assert!(s.iter().all(Scalar::is_one));
        assert_eq!(f.residue(&Scalar::one()).unwrap(), Scalar::from_int(-1));
        assert!(matches!(rf(&[1], &[0, 0, 1]).residue(&Scalar::zero()), Err(Error::Irregular(_))));
    }

    #[test]
    fn log_derivative_of_product() {
        let f = RationalFunction::from_poly(&p(&[0, 1]).pow(2) * &p(&[-1, 1]));
        let expected = &rf(&[2], &[0, 1]) + &rf(&[1], &[-1, 1]);
        assert_eq!(f.log_derivative().unwrap(), expected);
    }
}
