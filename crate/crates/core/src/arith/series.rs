//! Truncated power series in w with exact coefficients.

use std::ops::{Add, Mul};

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Σ c_k w^k for k < len, all higher terms discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Scalar>, len: usize) -> Self {
        coeffs.resize(len, Scalar::zero());
        PowerSeries { coeffs }
    }

    pub fn one(len: usize) -> Self {
        PowerSeries::new(vec![Scalar::one()], len)
    }

    pub fn from_poly(p: &Poly, len: usize) -> Self {
        PowerSeries::new(p.coeffs().iter().take(len).cloned().collect(), len)
    }

    /// Taylor expansion at w = 0; fails on a pole there.
    pub fn from_rational(f: &RationalFunction, len: usize) -> Result<Self> {
        Ok(PowerSeries { coeffs: f.local_series(&Scalar::zero(), 0, len)? })
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by w^k, losing k terms of precision.
    pub fn shift_down(&self, k: usize) -> Self {
        PowerSeries { coeffs: self.coeffs[k.min(self.len())..].to_vec() }
    }

    pub fn truncate(&self, len: usize) -> Self {
        PowerSeries::new(self.coeffs.iter().take(len).cloned().collect(), len)
    }

    /// f(inner(w)) for inner with zero constant term.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self> {
        if !inner.coeffs.first().is_none_or(Scalar::is_zero) {
            return Err(Error::InconsistentSeries("inner series must vanish at 0".into()));
        }
        let len = inner.len();
        let mut out = PowerSeries::new(Vec::new(), len);
        let mut power = PowerSeries::one(len);
        for c in self.coeffs.iter().take(len) {
            out = &out + &power.scale(c);
            power = &power * inner;
        }
        Ok(out)
    }

    /// (f/f₀)^e for f with nonzero constant term.
    pub fn normalized_power(&self, e: &Scalar) -> Result<Self> {
        let f0 = self.coeffs.first().filter(|c| !c.is_zero()).ok_or(Error::ZeroInput)?;
        let g: Vec<Scalar> = self.coeffs.iter().map(|c| c / f0).collect();
        // n·h_n = Σ_{k=1}^{n} ((e+1)k − n)·g_k·h_{n−k}
        let e1 = e + &Scalar::one();
        let mut h = vec![Scalar::one()];
        for n in 1..g.len() {
            let mut acc = Scalar::zero();
            for k in 1..=n {
                let weight = &(&e1 * &Scalar::from_int(k as i64)) - &Scalar::from_int(n as i64);
                acc = acc + &(&weight * &g[k]) * &h[n - k];
            }
            h.push(acc / Scalar::from_int(n as i64));
        }
        Ok(PowerSeries { coeffs: h })
    }

    /// The solution of G' = d·G with G(0) = 1.
    pub fn exp_integral(d: &PowerSeries) -> Self {
        let mut g = vec![Scalar::one()];
        for n in 0..d.len().saturating_sub(1) {
            let acc = (0..=n).fold(Scalar::zero(), |acc, k| acc + &d.coeffs[k] * &g[n - k]);
            g.push(acc / Scalar::from_int(n as i64 + 1));
        }
        PowerSeries::new(g, d.len())
    }

    /// ₂F₁(a, b; c; x) coefficients.
    pub fn hypergeometric(a: &Scalar, b: &Scalar, c: &Scalar, len: usize) -> Result<Self> {
        let mut coeffs = vec![Scalar::one()];
        for n in 0..len.saturating_sub(1) {
            let k = Scalar::from_int(n as i64);
            let den = &(c + &k) * &(&k + &Scalar::one());
            if den.is_zero() {
                return Err(Error::GammaPole);
            }
            let next = &(&coeffs[n] * &(a + &k)) * &(b + &k) / den;
            coeffs.push(next);
        }
        Ok(PowerSeries::new(coeffs, len))
    }
}

impl Add<&PowerSeries> for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let len = self.len().min(rhs.len());
        PowerSeries { coeffs: (0..len).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Mul<&PowerSeries> for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let len = self.len().min(rhs.len());
        let coeffs = (0..len)
            .map(|n| (0..=n).fold(Scalar::zero(), |acc, k| acc + &self.coeffs[k] * &rhs.coeffs[n - k]))
            .collect();
        PowerSeries { coeffs }
    }
}
