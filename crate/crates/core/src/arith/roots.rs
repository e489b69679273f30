//! Splitting square-free polynomials into roots in ℚ or the active quadratic field.
//!
//! Floating-point root approximations only propose candidate factors; every
//! factor is confirmed by exact division before it is used.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FieldSpec;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Complex approximations of all roots (Durand–Kerner, then Newton polish).
pub fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let lc = p.lc().to_complex();
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_complex() / lc).collect();
    let eval = |x: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(4.0)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let xi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, xj)| acc * (xi - xj));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8, 1e-8);
                delta = f64::INFINITY;
                continue;
            }
            let step = eval(xi) / denom;
            roots[i] = xi - step;
            delta = delta.max(step.norm() / (1.0 + xi.norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    let deriv: Vec<Complex64> = (1..=n).map(|k| coeffs[k] * k as f64).collect();
    let eval_d = |x: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = eval_d(*r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / d;
        }
    }
    roots
}

/// Leading coefficient of the primitive integer multiple of a rational polynomial.
fn primitive_lead(p: &Poly) -> Option<BigInt> {
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = den.lcm(c.as_rational()?.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Some((ints.last()? / content).abs())
}

fn snap(x: f64, lead: &BigInt) -> Option<Scalar> {
    let l = lead.to_f64()?;
    let scaled = (x * l).round();
    if !scaled.is_finite() || scaled.abs() > 1e15 {
        return None;
    }
    Some(Scalar::from_rational(BigRational::new(BigInt::from(scaled as i64), lead.clone())))
}

/// Monic factors of degree ≤ 2 over ℚ whose product is `p` (monic), when they exist.
pub fn rational_small_factors(p: &Poly) -> Result<Vec<Poly>> {
    if !p.is_rational() {
        return Err(Error::Unsplit(p.to_string()));
    }
    let mut rest = p.monic();
    let mut out = Vec::new();
    while rest.deg() > 2 {
        let lead = primitive_lead(&rest).ok_or_else(|| Error::Unsplit(p.to_string()))?;
        let roots = numeric_roots(&rest);
        let found = find_linear(&rest, &roots, &lead).or_else(|| find_quadratic(&rest, &roots, &lead));
        let Some(f) = found else {
            return Err(Error::Unsplit(rest.to_string()));
        };
        rest = rest.div_exact(&f)?;
        out.push(f);
    }
    if !rest.is_constant() {
        out.push(rest);
    }
    Ok(out)
}

fn find_linear(p: &Poly, roots: &[Complex64], lead: &BigInt) -> Option<Poly> {
    roots.iter().filter(|r| r.im.abs() < 1e-6 * (1.0 + r.norm())).find_map(|r| {
        let c = snap(r.re, lead)?;
        p.eval(&c).is_zero().then(|| Poly::linear(&c))
    })
}

fn find_quadratic(p: &Poly, roots: &[Complex64], lead: &BigInt) -> Option<Poly> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let s = roots[i] + roots[j];
            let m = roots[i] * roots[j];
            if s.im.abs() > 1e-6 * (1.0 + s.norm()) || m.im.abs() > 1e-6 * (1.0 + m.norm()) {
                continue;
            }
            let (Some(s), Some(m)) = (snap(s.re, lead), snap(m.re, lead)) else { continue };
            let f = Poly::new(vec![m, -s, Scalar::one()]);
            if f.divides(p) {
                return Some(f);
            }
        }
    }
    None
}

/// Roots of a monic polynomial of degree ≤ 2 in `field`.
fn split_small(p: &Poly, field: &FieldSpec) -> Result<Vec<Scalar>> {
    let p = p.monic();
    match p.degree() {
        Some(0) | None => Ok(Vec::new()),
        Some(1) => Ok(vec![-p.coeff(0)]),
        Some(2) => {
            let (b, c) = (p.coeff(1), p.coeff(0));
            let disc = &b * &b - Scalar::from_int(4) * &c;
            let root = field.sqrt(&disc).ok_or_else(|| Error::Unsplit(p.to_string()))?;
            let half = Scalar::ratio(1, 2);
            Ok(vec![(&root - &b) * &half, (-&root - &b) * &half])
        }
        _ => Err(Error::Unsplit(p.to_string())),
    }
}

/// All roots of a square-free polynomial, each in `field`, sorted canonically.
pub fn split(p: &Poly, field: &FieldSpec) -> Result<Vec<Scalar>> {
    let mut roots = Vec::new();
    if p.is_rational() {
        for f in rational_small_factors(p)? {
            roots.extend(split_small(&f, field)?);
        }
    } else if p.deg() <= 2 {
        roots = split_small(p, field)?;
    } else {
        // rational roots of p are rational roots of its norm p·p̄
        let conj = Poly::new(p.coeffs().iter().map(Scalar::conj).collect());
        let norm = &p.monic() * &conj.monic();
        let mut rest = p.monic();
        for f in rational_small_factors(&norm.radical()?).unwrap_or_default() {
            if f.deg() == 1 && f.divides(&rest) {
                rest = rest.div_exact(&f)?;
                roots.push(-f.coeff(0));
            }
        }
        roots.extend(split_small(&rest, field)?);
    }
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_field;

    #[test]
    fn rational_roots_found() {
        // 4(z − 1/2)(z + 3)(z − 5/4)
        let p = &(&Poly::from_ints(&[-1, 2]) * &Poly::from_ints(&[3, 1])) * &Poly::from_ints(&[-5, 4]);
        let r = split(&p, &FieldSpec::Rationals).unwrap();
        assert_eq!(r, vec![Scalar::from_int(-3), Scalar::ratio(1, 2), Scalar::ratio(5, 4)]);
    }

    #[test]
    fn quadratic_needs_the_field() {
        let p = &Poly::z() * &Poly::from_ints(&[3, 3, 1]);
        assert!(matches!(split(&p, &FieldSpec::Rationals), Err(Error::Unsplit(_))));
        let k = FieldSpec::Quadratic(parse_field("t1^2 + 3*t1 + 3 = 0").unwrap());
        let r = split(&p, &k).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| p.eval(x).is_zero()));
    }

    #[test]
    fn quadratic_factor_of_quartic() {
        // (z² − 2)(z² + 1) over ℚ(√2) has two roots there and two outside
        let p = &Poly::from_ints(&[-2, 0, 1]) * &Poly::from_ints(&[1, 0, 1]);
        let f = rational_small_factors(&p).unwrap();
        assert_eq!(f.len(), 2);
        let k = FieldSpec::Quadratic(parse_field("s^2 = 2").unwrap());
        assert!(matches!(split(&p, &k), Err(Error::Unsplit(_))));
    }

    #[test]
    fn field_coefficients() {
        let kf = parse_field("t1^2 + 3*t1 + 3 = 0").unwrap();
        let k = FieldSpec::Quadratic(kf.clone());
        let t1 = Scalar::generator(&kf);
        let p = &(&Poly::z() * &Poly::linear(&Scalar::one())) * &Poly::linear(&t1);
        let r = split(&p, &k).unwrap();
        assert!(r.contains(&t1) && r.contains(&Scalar::zero()) && r.contains(&Scalar::one()));
    }
}
