//! Second-order operators y'' + p1·y' + p2·y with rational coefficients:
//! pullback, gauge, Möbius change of variable, SL form and local analysis.

use std::fmt;

use num_traits::ToPrimitive;

use crate::arith::roots::split;
use crate::arith::{FieldSpec, Poly, RationalFunction, Scalar};
use crate::error::{Error, Result};

/// A point of ℙ¹, or all roots of a square-free factor at once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Scalar),
    RootsOf(Poly),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::RootsOf(p) => write!(f, "roots of {p}"),
            Point::Infinity => f.write_str("∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPair {
    pub point: Point,
    /// Canonically sorted.
    pub exponents: [Scalar; 2],
}

impl ExponentPair {
    pub fn new(point: Point, e0: Scalar, e1: Scalar) -> Self {
        let exponents = if e0 <= e1 { [e0, e1] } else { [e1, e0] };
        ExponentPair { point, exponents }
    }

    pub fn difference(&self) -> Scalar {
        &self.exponents[1] - &self.exponents[0]
    }

    pub fn sum(&self) -> Scalar {
        &self.exponents[0] + &self.exponents[1]
    }

    pub fn is_ordinary(&self) -> bool {
        self.exponents[0].is_zero() && self.exponents[1].is_one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    Apparent,
    TrueSingular,
}

/// Multiplier f represented by f'/f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFactor {
    pub dlog: RationalFunction,
}

impl GaugeFactor {
    pub fn new(dlog: RationalFunction) -> Self {
        GaugeFactor { dlog }
    }

    /// f = factor^e
    pub fn power(factor: &Poly, e: &Scalar) -> Self {
        let d = RationalFunction::new(factor.derivative(), factor.clone()).expect("nonzero factor");
        GaugeFactor { dlog: d.scale(e) }
    }

    pub fn times(&self, other: &GaugeFactor) -> Self {
        GaugeFactor { dlog: &self.dlog + &other.dlog }
    }
}

/// z = (a·w + b)/(c·w + d)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mobius {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::SingularMobius);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mobius { a: Scalar::one(), b: Scalar::zero(), c: Scalar::zero(), d: Scalar::one() }
    }

    /// z = scale·w + shift
    pub fn affine(scale: Scalar, shift: Scalar) -> Result<Self> {
        Mobius::new(scale, shift, Scalar::zero(), Scalar::one())
    }

    /// z = 1/w
    pub fn inversion() -> Self {
        Mobius { a: Scalar::zero(), b: Scalar::one(), c: Scalar::one(), d: Scalar::zero() }
    }

    pub fn as_rational_function(&self) -> RationalFunction {
        let num = Poly::new(vec![self.b.clone(), self.a.clone()]);
        let den = Poly::new(vec![self.d.clone(), self.c.clone()]);
        RationalFunction::new(num, den).expect("nonsingular map")
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// z = self(inner(w))
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
    }

    /// z for a given w.
    pub fn image(&self, w: &Point) -> Point {
        match w {
            Point::Infinity if self.c.is_zero() => Point::Infinity,
            Point::Infinity => Point::Finite(&self.a / &self.c),
            Point::Finite(w) => {
                let den = &self.c * w + &self.d;
                if den.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite((&self.a * w + &self.b) / den)
                }
            }
            Point::RootsOf(_) => unimplemented!("images of unsplit factors"),
        }
    }

    /// w with self(w) = z.
    pub fn preimage(&self, z: &Point) -> Point {
        self.inverse().image(z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearOde2 {
    p1: RationalFunction,
    p2: RationalFunction,
}

impl fmt::Display for LinearOde2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y'' + ({})·y' + ({})·y", self.p1, self.p2)
    }
}

impl LinearOde2 {
    pub fn new(p1: RationalFunction, p2: RationalFunction) -> Self {
        LinearOde2 { p1, p2 }
    }

    pub fn p1(&self) -> &RationalFunction {
        &self.p1
    }

    pub fn p2(&self) -> &RationalFunction {
        &self.p2
    }

    /// Gauss operator with scheme {0: (0, 1−γ); 1: (0, γ−α−β); ∞: (α, β)}.
    pub fn hypergeometric(alpha: &Scalar, beta: &Scalar, gamma: &Scalar) -> Self {
        let z_one_minus_z = Poly::from_ints(&[0, 1, -1]);
        let top = Poly::new(vec![gamma.clone(), -(alpha + beta + Scalar::one())]);
        let p1 = RationalFunction::new(top, z_one_minus_z.clone()).expect("nonzero");
        let p2 = RationalFunction::new(Poly::constant(-(alpha * beta)), z_one_minus_z).expect("nonzero");
        LinearOde2 { p1, p2 }
    }

    /// Operator satisfied by Y(j(z)) when Y solves `self`.
    pub fn pullback(&self, j: &RationalFunction) -> Result<Self> {
        if j.is_constant() {
            return Err(Error::ConstantMap);
        }
        let dj = j.derivative();
        let ddj = dj.derivative();
        let p1 = &(&self.p1.compose(j)? * &dj) - &ddj.checked_div(&dj)?;
        let p2 = &self.p2.compose(j)? * &(&dj * &dj);
        Ok(LinearOde2 { p1, p2 })
    }

    /// Operator satisfied by f·Y.
    pub fn gauge(&self, f: &GaugeFactor) -> Self {
        let d = &f.dlog;
        let p1 = &self.p1 - &d.scale(&Scalar::from_int(2));
        let p2 = &(&(&self.p2 + &(d * d)) - &(&self.p1 * d)) - &d.derivative();
        LinearOde2 { p1, p2 }
    }

    /// Operator in w where z = m(w).
    pub fn mobius_transform(&self, m: &Mobius) -> Result<Self> {
        Mobius::new(m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone())?;
        self.pullback(&m.as_rational_function())
    }

    /// p with y'' = p·y after removing the first-derivative term.
    pub fn sl_potential(&self) -> RationalFunction {
        let quarter = Scalar::ratio(1, 4);
        let half = Scalar::ratio(1, 2);
        &(&(&self.p1 * &self.p1).scale(&quarter) + &self.p1.derivative().scale(&half)) - &self.p2
    }

    pub fn to_sl_form(&self) -> Self {
        LinearOde2 { p1: RationalFunction::zero(), p2: -self.sl_potential() }
    }

    /// The operator in w = 1/z.
    pub fn at_infinity(&self) -> Self {
        self.pullback(&Mobius::inversion().as_rational_function()).expect("nonconstant")
    }

    /// L(y) for a rational function y.
    pub fn apply(&self, y: &RationalFunction) -> RationalFunction {
        let dy = y.derivative();
        &(&dy.derivative() + &(&self.p1 * &dy)) + &(&self.p2 * y)
    }

    /// Taylor coefficients of x·p1 and x²·p2 at z0 (x = z − z0), `n` terms each.
    pub fn frobenius_data(&self, z0: &Scalar, n: usize) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        let irregular = |e: Error| match e {
            Error::Irregular(_) => Error::Irregular(z0.to_string()),
            other => other,
        };
        let p = self.p1.local_series(z0, 1, n).map_err(irregular)?;
        let q = self.p2.local_series(z0, 2, n).map_err(irregular)?;
        Ok((p, q))
    }

    /// Coefficients c₀ = 1, c₁, … of the local solution Σ c_n (z − z0)^(ρ+n).
    pub fn frobenius_series(&self, z0: &Scalar, rho: &Scalar, n: usize) -> Result<Vec<Scalar>> {
        let (p, q) = self.frobenius_data(z0, n)?;
        let indicial = |r: &Scalar| &(&(r * &(r - &Scalar::one())) + &(&p[0] * r)) + &q[0];
        if !indicial(rho).is_zero() {
            return Err(Error::InconsistentSeries(format!("{rho} is not an exponent at {z0}")));
        }
        let mut c = vec![Scalar::one()];
        for m in 1..n {
            let mut rhs = Scalar::zero();
            for k in 1..=m {
                let r = rho + &Scalar::from_int((m - k) as i64);
                rhs = rhs - (&(&r * &p[k]) + &q[k]) * &c[m - k];
            }
            let f = indicial(&(rho + &Scalar::from_int(m as i64)));
            if f.is_zero() {
                return Err(Error::Resonance(m));
            }
            c.push(rhs / f);
        }
        Ok(c)
    }

    /// (Res p1, lim x²·p2) at a point.
    fn indicial_coefficients(&self, point: &Point) -> Result<(Scalar, Scalar)> {
        match point {
            Point::Finite(z0) => {
                let (p, q) = self.frobenius_data(z0, 1)?;
                Ok((p[0].clone(), q[0].clone()))
            }
            Point::Infinity => self.at_infinity().indicial_coefficients(&Point::Finite(Scalar::zero())),
            Point::RootsOf(f) => {
                if f.deg() == 1 {
                    return self.indicial_coefficients(&Point::Finite(-f.monic().coeff(0)));
                }
                let p0 = uniform_leading_coefficient(&self.p1, f, 1)?;
                let q0 = uniform_leading_coefficient(&self.p2, f, 2)?;
                Ok((p0, q0))
            }
        }
    }

    /// Roots of ρ² + (P₀ − 1)ρ + Q₀ at `point`.
    pub fn local_exponents(&self, point: &Point, field: &FieldSpec) -> Result<ExponentPair> {
        let (p0, q0) = self.indicial_coefficients(point)?;
        let b = &p0 - &Scalar::one();
        let disc = &b * &b - Scalar::from_int(4) * &q0;
        let root = field.sqrt(&disc).ok_or_else(|| Error::ExponentOutsideField(point.to_string()))?;
        let half = Scalar::ratio(1, 2);
        let e0 = (&root - &b) * &half;
        let e1 = (-&root - &b) * &half;
        Ok(ExponentPair::new(point.clone(), e0, e1))
    }

    /// Regular, apparent or true singular, decided by the Frobenius resonance obstruction.
    pub fn classify_point(&self, point: &Point, field: &FieldSpec) -> Result<PointClass> {
        let z0 = match point {
            Point::Finite(z0) => z0.clone(),
            Point::Infinity => {
                return self.at_infinity().classify_point(&Point::Finite(Scalar::zero()), field);
            }
            Point::RootsOf(f) => {
                if Poly::gcd(f, &self.pole_product()).is_one() {
                    return Ok(PointClass::Regular);
                }
                if f.deg() == 1 {
                    return self.classify_point(&Point::Finite(-f.monic().coeff(0)), field);
                }
                return Err(Error::Unsplit(f.to_string()));
            }
        };
        let pair = self.local_exponents(point, field)?;
        let [low, high] = pair.exponents.clone();
        let (Some(lo), Some(hi)) = (low.as_integer(), high.as_integer()) else {
            return Ok(PointClass::TrueSingular);
        };
        if lo < 0.into() || lo == hi {
            return Ok(PointClass::TrueSingular);
        }
        let gap = (&hi - &lo).to_usize().expect("small exponent gap");
        let (p, q) = self.frobenius_data(&z0, gap + 1)?;
        let indicial = |rho: &Scalar| rho * &(rho - &Scalar::one()) + &p[0] * rho + &q[0];
        let mut c = vec![Scalar::one()];
        let mut obstruction = Scalar::zero();
        for n in 1..=gap {
            let mut rhs = Scalar::zero();
            for k in 1..=n {
                let rho = &low + &Scalar::from_int((n - k) as i64);
                rhs = rhs - (&rho * &p[k] + &q[k]) * &c[n - k];
            }
            if n == gap {
                obstruction = rhs;
            } else {
                c.push(rhs / indicial(&(&low + &Scalar::from_int(n as i64))));
            }
        }
        if !obstruction.is_zero() {
            return Ok(PointClass::TrueSingular);
        }
        Ok(if pair.is_ordinary() { PointClass::Regular } else { PointClass::Apparent })
    }

    fn pole_product(&self) -> Poly {
        self.p1.den() * self.p2.den()
    }

    /// Square-free polynomial whose roots are the finite poles of p1 and p2.
    pub fn pole_locus(&self) -> Poly {
        self.pole_product().radical().expect("nonzero denominator")
    }

    /// Finite poles split in `field`, then ∞ unless it is an ordinary point.
    pub fn singular_support(&self, field: &FieldSpec) -> Result<Vec<Point>> {
        let mut out: Vec<Point> = split(&self.pole_locus(), field)?.into_iter().map(Point::Finite).collect();
        if self.classify_point(&Point::Infinity, field)? != PointClass::Regular {
            out.push(Point::Infinity);
        }
        Ok(out)
    }

    /// Exponent sum equals 1 − Res p1 at every finite singular point.
    pub fn fuchs_residue_check(&self, field: &FieldSpec) -> Result<bool> {
        for z0 in split(&self.pole_locus(), field)? {
            let pair = self.local_exponents(&Point::Finite(z0.clone()), field)?;
            if pair.sum() != Scalar::one() - self.p1.residue(&z0)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The common value at every root θ of `f` of (z − θ)^order · r(z), when it is the same
/// scalar for all roots.
fn uniform_leading_coefficient(r: &RationalFunction, f: &Poly, order: usize) -> Result<Scalar> {
    let f = f.monic();
    let mut den = r.den().clone();
    let mut mult = 0;
    while f.divides(&den) {
        den = den.div_exact(&f)?;
        mult += 1;
    }
    if mult > order {
        return Err(Error::Irregular(format!("roots of {f}")));
    }
    if mult < order {
        return Ok(Scalar::zero());
    }
    let denom = &f.derivative().pow(order as u32) * &den;
    let value = (r.num() * &denom.inverse_mod(&f)?).divrem(&f)?.1;
    if !value.is_constant() {
        return Err(Error::Unsplit(format!("non-uniform local data on {f}")));
    }
    Ok(value.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn pair(ode: &LinearOde2, p: Point) -> [Scalar; 2] {
        ode.local_exponents(&p, &FieldSpec::Rationals).unwrap().exponents
    }

    fn gauss() -> LinearOde2 {
        LinearOde2::hypergeometric(&q(1, 5), &q(1, 7), &q(3, 4))
    }

    #[test]
    fn gauss_coefficients_at_sample() {
        // (α, β, γ) = (a/2 − 1/6, −a/2 + 1/3, 2/3) at a = 1/2
        let (a, b) = (q(1, 12), q(1, 12));
        let ode = LinearOde2::hypergeometric(&a, &b, &q(2, 3));
        let p1 = RationalFunction::new(Poly::new(vec![q(2, 3), q(-7, 6)]), Poly::from_ints(&[0, 1, -1])).unwrap();
        let p2 = RationalFunction::new(Poly::constant(q(1, 144)), Poly::from_ints(&[0, -1, 1])).unwrap();
        assert_eq!(ode, LinearOde2::new(p1, p2));
        assert_eq!(pair(&ode, Point::Finite(Scalar::zero())), [Scalar::zero(), q(1, 3)]);
    }

    #[test]
    fn gauss_scheme() {
        let g = gauss();
        assert_eq!(pair(&g, Point::Finite(Scalar::zero())), [Scalar::zero(), q(1, 4)]);
        assert_eq!(pair(&g, Point::Finite(Scalar::one())), [Scalar::zero(), q(3, 4) - q(1, 5) - q(1, 7)]);
        assert_eq!(pair(&g, Point::Infinity), [q(1, 7), q(1, 5)]);
        assert_eq!(pair(&g, Point::Finite(q(1, 2))), [Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn frobenius_series_of_gauss() {
        let ode = gauss();
        let series = ode.frobenius_series(&Scalar::zero(), &Scalar::zero(), 6).unwrap();
        let expected = crate::arith::PowerSeries::hypergeometric(&q(1, 5), &q(1, 7), &q(3, 4), 6).unwrap();
        assert_eq!(series, expected.coeffs());
        assert!(matches!(ode.frobenius_series(&Scalar::zero(), &q(1, 2), 3), Err(Error::InconsistentSeries(_))));
        // exponents 0 and 1 − γ = 1 collide for γ = 0
        let resonant = LinearOde2::hypergeometric(&q(1, 3), &q(1, 5), &Scalar::zero());
        assert_eq!(resonant.frobenius_series(&Scalar::zero(), &Scalar::zero(), 4), Err(Error::Resonance(1)));
    }

    #[test]
    fn degenerate_gauss_has_zero_exponents() {
        let g = LinearOde2::hypergeometric(&Scalar::zero(), &Scalar::zero(), &Scalar::one());
        for p in [Point::Finite(Scalar::zero()), Point::Finite(Scalar::one()), Point::Infinity] {
            assert!(pair(&g, p).contains(&Scalar::zero()));
        }
    }

    #[test]
    fn pullback_examples() {
        let g = gauss();
        assert_eq!(g.pullback(&RationalFunction::z()).unwrap(), g);
        let flat = LinearOde2::new(RationalFunction::zero(), RationalFunction::zero());
        let sq = RationalFunction::from_poly(Poly::from_ints(&[0, 0, 1]));
        assert_eq!(flat.pullback(&sq).unwrap(), LinearOde2::new(rf(&[-1], &[0, 1]), RationalFunction::zero()));
        assert_eq!(g.pullback(&RationalFunction::one()), Err(Error::ConstantMap));
    }

    #[test]
    fn pullback_multiplies_exponents() {
        // index 3 over 0 at z = −1 for (z + 1)³
        let j = RationalFunction::from_poly(Poly::from_ints(&[1, 3, 3, 1]));
        let pulled = gauss().pullback(&j).unwrap();
        assert_eq!(pair(&pulled, Point::Finite(Scalar::from_int(-1))), [Scalar::zero(), q(3, 4)]);
    }

    #[test]
    fn gauge_examples() {
        let g = gauss();
        assert_eq!(g.gauge(&GaugeFactor::new(RationalFunction::zero())), g);
        let flat = LinearOde2::new(RationalFunction::zero(), RationalFunction::zero());
        let gauged = flat.gauge(&GaugeFactor::new(rf(&[1], &[0, 1])));
        assert_eq!(gauged, LinearOde2::new(rf(&[-2], &[0, 1]), rf(&[2], &[0, 0, 1])));
        // solutions z and z²
        assert!(gauged.apply(&RationalFunction::z()).is_zero());
        assert!(gauged.apply(&RationalFunction::from_poly(Poly::from_ints(&[0, 0, 1]))).is_zero());
    }

    #[test]
    fn apparent_point() {
        let ode = LinearOde2::new(rf(&[-2], &[0, 1]), rf(&[2], &[0, 0, 1]));
        let origin = Point::Finite(Scalar::zero());
        assert_eq!(pair(&ode, origin.clone()), [Scalar::one(), Scalar::from_int(2)]);
        assert_eq!(ode.classify_point(&origin, &FieldSpec::Rationals).unwrap(), PointClass::Apparent);
    }

    #[test]
    fn logarithmic_point_is_singular() {
        // y'' + y/z: exponents (0, 1) with a log term
        let ode = LinearOde2::new(RationalFunction::zero(), rf(&[1], &[0, 1]));
        let origin = Point::Finite(Scalar::zero());
        assert_eq!(pair(&ode, origin.clone()), [Scalar::zero(), Scalar::one()]);
        assert_eq!(ode.classify_point(&origin, &FieldSpec::Rationals).unwrap(), PointClass::TrueSingular);
    }

    #[test]
    fn ordinary_point_is_regular() {
        let g = gauss();
        let p = Point::Finite(q(1, 3));
        assert_eq!(g.classify_point(&p, &FieldSpec::Rationals).unwrap(), PointClass::Regular);
        assert_eq!(
            g.classify_point(&Point::Finite(Scalar::zero()), &FieldSpec::Rationals).unwrap(),
            PointClass::TrueSingular
        );
    }

    #[test]
    fn irregular_point_rejected() {
        let ode = LinearOde2::new(rf(&[1], &[0, 0, 1]), RationalFunction::zero());
        assert!(matches!(
            ode.local_exponents(&Point::Finite(Scalar::zero()), &FieldSpec::Rationals),
            Err(Error::Irregular(_))
        ));
    }

    #[test]
    fn exponents_outside_field() {
        // y'' + 2y/z²: ρ² − ρ + 2 = 0
        let ode = LinearOde2::new(RationalFunction::zero(), rf(&[2], &[0, 0, 1]));
        assert!(matches!(
            ode.local_exponents(&Point::Finite(Scalar::zero()), &FieldSpec::Rationals),
            Err(Error::ExponentOutsideField(_))
        ));
    }

    #[test]
    fn mobius_identity_and_inversion() {
        let g = gauss();
        assert_eq!(g.mobius_transform(&Mobius::identity()).unwrap(), g);
        let inv = g.mobius_transform(&Mobius::inversion()).unwrap();
        assert_eq!(pair(&inv, Point::Finite(Scalar::zero())), pair(&g, Point::Infinity));
        assert_eq!(pair(&inv, Point::Infinity), pair(&g, Point::Finite(Scalar::zero())));
        let singular = Mobius::new(Scalar::one(), Scalar::one(), Scalar::one(), Scalar::one());
        assert_eq!(singular, Err(Error::SingularMobius));
    }

    #[test]
    fn mobius_round_trip() {
        let g = gauss();
        let m = Mobius::new(q(2, 1), q(1, 3), q(-1, 1), q(5, 1)).unwrap();
        let there = g.mobius_transform(&m).unwrap();
        assert_eq!(there.mobius_transform(&m.inverse()).unwrap(), g);
    }

    #[test]
    fn shift_moves_singularities() {
        // singular points t, 0, 1 with t = −1/2 move by −(t + 1)/3
        let t = q(-1, 2);
        let s = (&t + &Scalar::one()) * q(1, 3);
        let den = &(&Poly::z() * &Poly::from_ints(&[-1, 1])) * &Poly::linear(&t);
        let ode = LinearOde2::new(RationalFunction::new(Poly::from_ints(&[1]), den).unwrap(), RationalFunction::zero());
        let shifted = ode.mobius_transform(&Mobius::affine(Scalar::one(), s.clone()).unwrap()).unwrap();
        let support = shifted.singular_support(&FieldSpec::Rationals).unwrap();
        let mut expected: Vec<Point> = [&t - &s, -&s, Scalar::one() - &s].into_iter().map(Point::Finite).collect();
        expected.sort_by(|a, b| match (a, b) {
            (Point::Finite(x), Point::Finite(y)) => x.cmp(y),
            _ => std::cmp::Ordering::Equal,
        });
        assert_eq!(support[..3], expected[..]);
    }

    #[test]
    fn sl_form() {
        let harmonic = LinearOde2::new(RationalFunction::zero(), RationalFunction::one());
        assert_eq!(harmonic.to_sl_form(), harmonic);
        let g = gauss();
        let sl = g.to_sl_form();
        assert_eq!(sl.to_sl_form(), sl);
        for p in [Point::Finite(Scalar::zero()), Point::Finite(Scalar::one()), Point::Infinity] {
            let before = g.local_exponents(&p, &FieldSpec::Rationals).unwrap().difference();
            let after = sl.local_exponents(&p, &FieldSpec::Rationals).unwrap().difference();
            assert_eq!(before, after);
        }
        assert!(sl.fuchs_residue_check(&FieldSpec::Rationals).unwrap());
    }

    #[test]
    fn fuchs_identity_on_gauss() {
        assert!(gauss().fuchs_residue_check(&FieldSpec::Rationals).unwrap());
        assert_eq!(gauss().p1().residue(&Scalar::zero()).unwrap(), q(3, 4));
    }

    #[test]
    fn exponents_on_unsplit_factor() {
        // (z² + 1)³ pulls the exponent 1/4 at 0 back to 3/4 on both roots ±i
        let j = RationalFunction::from_poly(Poly::from_ints(&[1, 0, 1]).pow(3));
        let pulled = gauss().pullback(&j).unwrap();
        let f = Poly::from_ints(&[1, 0, 1]);
        assert_eq!(pair(&pulled, Point::RootsOf(f)), [Scalar::zero(), q(3, 4)]);
    }

    #[test]
    fn infinity_classified() {
        let g = gauss();
        let support = g.singular_support(&FieldSpec::Rationals).unwrap();
        assert_eq!(support, vec![Point::Finite(Scalar::zero()), Point::Finite(Scalar::one()), Point::Infinity]);
    }
}
