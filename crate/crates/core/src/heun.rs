//! Heun's equation in normal form, its SL form, normalization of a Fuchsian
//! operator with four singular points, accessory-parameter recovery and the
//! Lamé specialization.

use std::fmt;

use crate::arith::roots::split;
use crate::arith::{FieldSpec, Poly, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::ode2::{ExponentPair, GaugeFactor, LinearOde2, Mobius, Point, PointClass};

/// y'' + Σ(1−θᵢ)/(z−zᵢ)·y' + (θ₄₁θ₄₂z − q)/(z(z−1)(z−t))·y = 0 with (z₁, z₂, z₃) = (t, 0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeunEquation {
    pub theta: [Scalar; 4],
    pub t: Scalar,
    pub q: Scalar,
}

impl HeunEquation {
    pub fn new(theta: [Scalar; 4], t: Scalar, q: Scalar) -> Result<Self> {
        if t.is_zero() || t.is_one() {
            return Err(Error::InvalidHeun(format!("t = {t} collides with 0 or 1")));
        }
        Ok(HeunEquation { theta, t, q })
    }

    fn theta_sum(&self) -> Scalar {
        &(&self.theta[0] + &self.theta[1]) + &self.theta[2]
    }

    pub fn theta41(&self) -> Scalar {
        (&(&self.theta_sum() - &Scalar::from_int(2)) + &self.theta[3]) * Scalar::ratio(-1, 2)
    }

    pub fn theta42(&self) -> Scalar {
        (&(&self.theta_sum() - &Scalar::from_int(2)) - &self.theta[3]) * Scalar::ratio(-1, 2)
    }

    /// z(z−1)(z−t)
    pub fn cubic(&self) -> Poly {
        &Poly::from_ints(&[0, -1, 1]) * &Poly::linear(&self.t)
    }

    pub fn to_ode(&self) -> LinearOde2 {
        let one = Scalar::one();
        let simple = |coef: Scalar, root: &Scalar| {
            RationalFunction::new(Poly::constant(coef), Poly::linear(root)).expect("nonzero")
        };
        let p1 = &(&simple(&one - &self.theta[0], &self.t) + &simple(&one - &self.theta[1], &Scalar::zero()))
            + &simple(&one - &self.theta[2], &one);
        let top = Poly::new(vec![-&self.q, &self.theta41() * &self.theta42()]);
        let p2 = RationalFunction::new(top, self.cubic()).expect("nonzero cubic");
        LinearOde2::new(p1, p2)
    }

    /// (0, θ₁) at t, (0, θ₂) at 0, (0, θ₃) at 1, (θ₄₁, θ₄₂) at ∞.
    pub fn riemann_scheme(&self) -> [ExponentPair; 4] {
        let zero = Scalar::zero;
        [
            ExponentPair::new(Point::Finite(self.t.clone()), zero(), self.theta[0].clone()),
            ExponentPair::new(Point::Finite(zero()), zero(), self.theta[1].clone()),
            ExponentPair::new(Point::Finite(Scalar::one()), zero(), self.theta[2].clone()),
            ExponentPair::new(Point::Infinity, self.theta41(), self.theta42()),
        ]
    }

    pub fn to_sl(&self) -> SLHeun {
        let quarter = Scalar::ratio(1, 4);
        let one = Scalar::one();
        // double-pole coefficient ρ(ρ−1) for ρ = (1 ± θ)/2
        let a = |th: &Scalar| (&(th * th) - &one) * &quarter;
        let squares = self.theta[..3].iter().fold(Scalar::zero(), |acc, th| acc + th * th);
        let a4 = (squares - &self.theta[3] * &self.theta[3]) * Scalar::ratio(-1, 4) + Scalar::ratio(1, 2);
        let half_one_minus_th1 = (&one - &self.theta[0]) * Scalar::ratio(1, 2);
        let tail = (&one - &self.theta[1]) * (&self.t - &one) + (&one - &self.theta[2]) * &self.t;
        let l = &(&self.q - &(&self.t * &(&self.theta41() * &self.theta42()))) + &(half_one_minus_th1 * tail);
        SLHeun { a1: a(&self.theta[0]), a2: a(&self.theta[1]), a3: a(&self.theta[2]), a4, l, t: self.t.clone() }
    }

    /// Same parameters with θ₄ replaced by −θ₄; the operator is unchanged.
    pub fn with_flipped_theta4(&self) -> Self {
        let mut h = self.clone();
        h.theta[3] = -&h.theta[3];
        h
    }

    /// Representative with θ₄ ≥ −θ₄ in the canonical scalar order.
    fn with_canonical_theta4(self) -> Self {
        if self.theta[3] < -&self.theta[3] {
            self.with_flipped_theta4()
        } else {
            self
        }
    }

    /// The equation for w = (z − zᵢ)^{−θᵢ}·y, which swaps the exponents 0 and θᵢ at
    /// site i ∈ {0, 1, 2} for zᵢ = t, 0, 1.
    pub fn flip_exponent(&self, site: usize) -> Self {
        let one = Scalar::one();
        let [th1, th2, th3, _] = &self.theta;
        let shift = match site {
            0 => th1 * &(&one - th2),
            1 => th2 * &(&(&self.t * &(&one - th3)) + &(&one - th1)),
            2 => &(&self.t * th3) * &(&one - th2),
            _ => panic!("site {site} is not one of t, 0, 1"),
        };
        let mut h = self.clone();
        h.theta[site] = -&h.theta[site];
        h.q = &h.q + &shift;
        h
    }

    /// Equal as operators, so up to the sign of θ₄.
    pub fn same_equation(&self, other: &HeunEquation) -> bool {
        self.t == other.t
            && self.q == other.q
            && self.theta[..3] == other.theta[..3]
            && (self.theta[3] == other.theta[3] || self.theta[3] == -&other.theta[3])
    }
}

impl fmt::Display for HeunEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.theta;
        write!(f, "Heun(θ = ({a}, {b}, {c}, {d}), t = {}, q = {})", self.t, self.q)
    }
}

pub fn heun_to_ode(h: &HeunEquation) -> LinearOde2 {
    h.to_ode()
}

pub fn heun_to_sl(h: &HeunEquation) -> SLHeun {
    h.to_sl()
}

/// y'' = p·y with p = a₁/(z−t)² + a₂/z² + a₃/(z−1)² + a₄/(z(z−1)) + L/(z(z−t)(z−1)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLHeun {
    pub a1: Scalar,
    pub a2: Scalar,
    pub a3: Scalar,
    pub a4: Scalar,
    pub l: Scalar,
    pub t: Scalar,
}

impl SLHeun {
    pub fn potential(&self) -> RationalFunction {
        let term = |c: &Scalar, den: Poly| RationalFunction::new(Poly::constant(c.clone()), den).expect("nonzero");
        let zt = Poly::linear(&self.t);
        let z = Poly::z();
        let z1 = Poly::linear(&Scalar::one());
        let parts = [
            term(&self.a1, &zt * &zt),
            term(&self.a2, &z * &z),
            term(&self.a3, &z1 * &z1),
            term(&self.a4, &z * &z1),
            term(&self.l, &(&z * &zt) * &z1),
        ];
        parts.iter().fold(RationalFunction::zero(), |acc, p| &acc + p)
    }

    /// As y'' + 0·y' − p·y.
    pub fn to_ode(&self) -> LinearOde2 {
        LinearOde2::new(RationalFunction::zero(), -self.potential())
    }
}

/// A Heun equation together with the change of variable z = mobius(w) and the
/// multiplier (in w) that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeunForm {
    pub heun: HeunEquation,
    pub mobius: Mobius,
    pub gauge: GaugeFactor,
}

/// A singular point with its exponents.
struct Singularity {
    point: Point,
    exponents: [Scalar; 2],
}

fn true_singularities(ode: &LinearOde2, field: &FieldSpec) -> Result<Vec<Singularity>> {
    let mut candidates: Vec<Point> = split(&ode.pole_locus(), field)
        .map_err(|e| match e {
            Error::Unsplit(f) => Error::ExponentOutsideField(format!("singular points: roots of {f}")),
            other => other,
        })?
        .into_iter()
        .map(Point::Finite)
        .collect();
    candidates.push(Point::Infinity);
    let mut out = Vec::new();
    for point in candidates {
        match ode.classify_point(&point, field)? {
            PointClass::Regular => {}
            PointClass::Apparent => return Err(Error::ApparentSingularity(point.to_string())),
            PointClass::TrueSingular => {
                let exponents = ode.local_exponents(&point, field)?.exponents;
                out.push(Singularity { point, exponents });
            }
        }
    }
    if out.len() != 4 {
        return Err(Error::WrongSingularCount(out.len()));
    }
    Ok(out)
}

/// z = m(w) with m(0) = s0, m(1) = s1, m(∞) = s_inf.
fn mobius_through(s0: &Point, s1: &Point, s_inf: &Point) -> Result<Mobius> {
    let one = Scalar::one;
    let zero = Scalar::zero;
    let fin = |p: &Point| match p {
        Point::Finite(x) => Some(x.clone()),
        _ => None,
    };
    match (fin(s0), fin(s1), fin(s_inf)) {
        (Some(a), Some(b), None) => Mobius::affine(&b - &a, a),
        (None, Some(b), Some(c)) => Mobius::new(c.clone(), &b - &c, one(), zero()),
        (Some(a), None, Some(c)) => Mobius::new(c, -a, one(), -one()),
        (Some(a), Some(b), Some(c)) => {
            let k = (&b - &a) / (&c - &b);
            Mobius::new(&c * &k, a, k, one())
        }
        _ => Err(Error::SingularMobius),
    }
}

/// Orderings (t, 0, 1, ∞) of the four singular points allowed by `restrict`.
fn arrangements(points: &[Singularity], restrict: bool) -> Vec<[usize; 4]> {
    let zero_at = points.iter().position(|s| s.point == Point::Finite(Scalar::zero()));
    let inf_at = points.iter().position(|s| s.point == Point::Infinity);
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let order = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| order[i] != order[j]));
                    if !distinct {
                        continue;
                    }
                    if restrict {
                        match (zero_at, inf_at) {
                            (Some(z0), Some(zi)) if b != z0 || d != zi => continue,
                            (_, Some(zi)) if d != zi => continue,
                            _ => {}
                        }
                    }
                    out.push(order);
                }
            }
        }
    }
    out
}

/// Moves the singular points to (t, 0, 1, ∞) in the given order and gauges
/// the chosen exponent at each finite point to 0.
/// The operator moved so that the arrangement's points sit at t, 0, 1, ∞.
fn arrange(ode: &LinearOde2, points: &[Singularity], order: [usize; 4]) -> Result<(Mobius, Scalar, LinearOde2)> {
    let [it, i0, i1, iinf] = order;
    let mobius = mobius_through(&points[i0].point, &points[i1].point, &points[iinf].point)?;
    let Point::Finite(t) = mobius.preimage(&points[it].point) else {
        return Err(Error::SingularMobius);
    };
    let moved = ode.mobius_transform(&mobius)?;
    Ok((mobius, t, moved))
}

/// Multiplier removing the chosen exponent at each of t, 0, 1, relative to `base`.
fn site_gauge(
    points: &[Singularity],
    order: [usize; 4],
    t: &Scalar,
    choice: [usize; 3],
    base: [usize; 3],
) -> GaugeFactor {
    let [it, i0, i1, _] = order;
    let sites = [(it, t.clone()), (i0, Scalar::zero()), (i1, Scalar::one())];
    let mut gauge = GaugeFactor::new(RationalFunction::zero());
    for (((idx, at), pick), from) in sites.iter().zip(choice).zip(base) {
        let shift = &points[*idx].exponents[pick] - &points[*idx].exponents[from];
        if !shift.is_zero() {
            gauge = gauge.times(&GaugeFactor::power(&Poly::linear(at), &-shift));
        }
    }
    gauge
}

/// Reads the Heun parameters off an operator already arranged and gauged for `choice`.
fn read_heun(
    gauged: &LinearOde2,
    t: &Scalar,
    points: &[Singularity],
    order: [usize; 4],
    choice: [usize; 3],
) -> Result<HeunEquation> {
    let [it, i0, i1, iinf] = order;
    let mut theta = Vec::with_capacity(4);
    for (idx, pick) in [it, i0, i1].into_iter().zip(choice) {
        theta.push(&points[idx].exponents[1 - pick] - &points[idx].exponents[pick]);
    }
    let [e1, e2] = &points[iinf].exponents;
    theta.push(e2 - e1);
    // q from the y-coefficient: p2·w(w−1)(w−t) = θ₄₁θ₄₂w − q
    let cubic = &Poly::from_ints(&[0, -1, 1]) * &Poly::linear(t);
    let numer = &(gauged.p2() * &RationalFunction::from_poly(cubic));
    if !numer.is_polynomial() || numer.num().deg() > 1 {
        return Err(Error::InvalidHeun(format!("y-coefficient {} is not of Heun shape", gauged.p2())));
    }
    let q = -numer.num().coeff(0);
    let theta: [Scalar; 4] = theta.try_into().expect("four exponents");
    let heun = HeunEquation::new(theta, t.clone(), q)?;
    if &heun.to_ode() != gauged {
        return Err(Error::InvalidHeun(format!("{gauged} does not match {heun}")));
    }
    Ok(heun)
}

/// All exponent gauges for one arrangement. Only the choice removing the
/// first exponent everywhere gauges the input operator; the rest follow by
/// exponent flips of the resulting Heun equation.
fn forms_for_order(ode: &LinearOde2, points: &[Singularity], order: [usize; 4]) -> Result<Vec<HeunForm>> {
    let (mobius, t, moved) = arrange(ode, points, order)?;
    let base = [0, 0, 0];
    let [it, i0, i1, _] = order;
    let base_gauge = [(it, t.clone()), (i0, Scalar::zero()), (i1, Scalar::one())]
        .iter()
        .fold(GaugeFactor::new(RationalFunction::zero()), |g, (idx, at)| {
            g.times(&GaugeFactor::power(&Poly::linear(at), &-&points[*idx].exponents[0]))
        });
    let base_heun = read_heun(&moved.gauge(&base_gauge), &t, points, order, base)?;
    Ok(GAUGE_CHOICES
        .iter()
        .map(|&choice| {
            let heun =
                (0..3).filter(|&site| choice[site] == 1).fold(base_heun.clone(), |h, site| h.flip_exponent(site));
            let gauge = base_gauge.times(&site_gauge(points, order, &t, choice, base));
            HeunForm { heun: heun.with_canonical_theta4(), mobius: mobius.clone(), gauge }
        })
        .collect())
}

const GAUGE_CHOICES: [[usize; 3]; 8] =
    [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]];

fn normal_forms(ode: &LinearOde2, field: &FieldSpec, restrict: bool) -> Result<Vec<HeunForm>> {
    let points = true_singularities(ode, field)?;
    let mut out = Vec::new();
    for order in arrangements(&points, restrict) {
        out.extend(forms_for_order(ode, &points, order)?);
    }
    Ok(out)
}

fn sort_key(h: &HeunEquation) -> (&Scalar, &Scalar, &Scalar, &Scalar, &Scalar, &Scalar) {
    (&h.t, &h.theta[0], &h.theta[1], &h.theta[2], &h.theta[3], &h.q)
}

/// Canonical Heun normal form of a Fuchsian operator with four true singular points.
///
/// If 0 and ∞ are singular they stay put; otherwise ∞ stays put if singular.
/// Among the remaining arrangements and exponent gauges the least
/// (t, θ₁, θ₂, θ₃) is returned.
pub fn ode_to_heun(ode: &LinearOde2, field: &FieldSpec) -> Result<HeunForm> {
    let forms = normal_forms(ode, field, true)?;
    Ok(forms.into_iter().min_by(|a, b| sort_key(&a.heun).cmp(&sort_key(&b.heun))).expect("nonempty"))
}

/// All 24 arrangements × 8 exponent gauges.
pub fn heun_orbit(ode: &LinearOde2, field: &FieldSpec) -> Result<Vec<HeunForm>> {
    normal_forms(ode, field, false)
}

/// z(z−1)(z−t)·y'' + Σ(1−θᵢ)·(cubic/(z−zᵢ))·y' + (θ₄₁θ₄₂z − q)·y
fn apply_heun(h: &HeunEquation, y: &Poly) -> Poly {
    let one = Scalar::one();
    let t = &h.t;
    let first = &(&Poly::from_ints(&[0, -1, 1]).scale(&(&one - &h.theta[0]))
        + &(&Poly::linear(&one) * &Poly::linear(t)).scale(&(&one - &h.theta[1])))
        + &(&Poly::z() * &Poly::linear(t)).scale(&(&one - &h.theta[2]));
    let zeroth = Poly::new(vec![-&h.q, &h.theta41() * &h.theta42()]);
    let dy = y.derivative();
    &(&(&h.cubic() * &dy.derivative()) + &(&first * &dy)) + &(&zeroth * y)
}

/// q making the z⁰ coefficient of the Heun operator applied to `series` vanish.
///
/// `series` holds c₀, c₁, c₂, … of the exponent-0 solution at z = 0; the z¹
/// coefficient is checked as well.
pub fn accessory_from_solution(theta: &[Scalar; 4], t: &Scalar, series: &[Scalar]) -> Result<Scalar> {
    if series.len() < 3 {
        return Err(Error::InconsistentSeries("need terms through z²".into()));
    }
    if series[0].is_zero() {
        return Err(Error::InconsistentSeries("zero constant term".into()));
    }
    let h = HeunEquation::new(theta.clone(), t.clone(), Scalar::zero())?;
    let l0 = apply_heun(&h, &Poly::new(series[..3].to_vec()));
    let q = l0.coeff(0) / &series[0];
    let residual = &l0.coeff(1) - &(&q * &series[1]);
    if !residual.is_zero() {
        return Err(Error::InconsistentSeries(format!("z¹ coefficient {residual} ≠ 0")));
    }
    Ok(q)
}

/// p(z)y'' + ½p'(z)y' − (n(n+1)z + B)y = 0 with p = 4z³ − g₂z − g₃.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LameEquation {
    pub n: Scalar,
    pub b: Scalar,
    pub g2: Scalar,
    pub g3: Scalar,
}

impl LameEquation {
    pub fn cubic(&self) -> Poly {
        Poly::new(vec![-&self.g3, -&self.g2, Scalar::zero(), Scalar::from_int(4)])
    }

    pub fn to_ode(&self) -> LinearOde2 {
        let p = self.cubic();
        let p1 = RationalFunction::new(p.derivative().scale(&Scalar::ratio(1, 2)), p.clone()).expect("nonzero");
        let nn = &self.n * &(&self.n + &Scalar::one());
        let p2 = RationalFunction::new(Poly::new(vec![-&self.b, -nn]), p).expect("nonzero");
        LinearOde2::new(p1, p2)
    }

    /// The Heun equation at (t, 0, 1) that shifts to this one; `t` picks which root is which.
    pub fn to_heun(&self, t: &Scalar) -> Result<HeunEquation> {
        let shift = lame_shift(t);
        let expected = shifted_cubic(t);
        if expected != self.cubic() {
            return Err(Error::NotLame);
        }
        let half = Scalar::ratio(1, 2);
        let nn = &self.n * &(&self.n + &Scalar::one());
        let q = (&self.b - &(&nn * &shift)) * Scalar::ratio(1, 4);
        HeunEquation::new([half.clone(), half.clone(), half.clone(), &self.n + &half], t.clone(), q)
    }
}

/// (t + 1)/3, the centroid of t, 0, 1.
pub fn lame_shift(t: &Scalar) -> Scalar {
    (t + &Scalar::one()) * Scalar::ratio(1, 3)
}

/// 4(z − e₁)(z − e₂)(z − e₃) with eᵢ = {t, 0, 1} − (t+1)/3.
fn shifted_cubic(t: &Scalar) -> Poly {
    let s = lame_shift(t);
    let roots = [t - &s, -&s, &Scalar::one() - &s];
    roots.iter().fold(Poly::constant(Scalar::from_int(4)), |acc, e| &acc * &Poly::linear(e))
}

/// n = θ₄ − ½ and B = 4q + n(n+1)(t+1)/3 after the shift z ↦ z + (t+1)/3.
pub fn heun_to_lame(h: &HeunEquation) -> Result<LameEquation> {
    let half = Scalar::ratio(1, 2);
    if h.theta[..3].iter().any(|th| th != &half) {
        return Err(Error::NotLame);
    }
    let p = shifted_cubic(&h.t);
    let (g2, g3) = (-p.coeff(1), -p.coeff(0));
    let disc = &(&g2 * &g2) * &g2 - &(&g3 * &g3) * &Scalar::from_int(27);
    if disc.is_zero() {
        return Err(Error::DegenerateCubic);
    }
    let n = &h.theta[3] - &half;
    let nn = &n * &(&n + &Scalar::one());
    let b = &(&h.q * &Scalar::from_int(4)) + &(&nn * &lame_shift(&h.t));
    Ok(LameEquation { n, b, g2, g3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{parse_field, parse_rational_function};
    use std::collections::HashMap;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn heun(th: [(i64, i64); 4], t: (i64, i64), q: (i64, i64)) -> HeunEquation {
        HeunEquation::new(th.map(|(n, d)| s(n, d)), s(t.0, t.1), s(q.0, q.1)).unwrap()
    }

    #[test]
    fn exponent_flip_is_a_gauge() {
        let h = heun([(1, 3), (2, 5), (-3, 7), (5, 4)], (-2, 3), (1, 9));
        for (site, at) in [h.t.clone(), Scalar::zero(), Scalar::one()].iter().enumerate() {
            let gauged = h.to_ode().gauge(&GaugeFactor::power(&Poly::linear(at), &-&h.theta[site]));
            let flipped = h.flip_exponent(site);
            assert_eq!(flipped.theta[site], -&h.theta[site]);
            assert_eq!(flipped.to_ode(), gauged, "site {site}");
        }
    }

    #[test]
    fn theta_identities() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (-1, 1), (2, 9));
        assert_eq!(&h.theta42() - &h.theta41(), h.theta[3]);
        assert_eq!(&h.theta41() + &h.theta42(), &(&Scalar::from_int(2) - &h.theta[0]) - &(&h.theta[1] + &h.theta[2]));
    }

    #[test]
    fn t_must_avoid_zero_and_one() {
        assert!(HeunEquation::new(std::array::from_fn(|_| Scalar::zero()), Scalar::one(), Scalar::zero()).is_err());
    }

    #[test]
    fn exponents_of_normal_form() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (-1, 1), (2, 9));
        let ode = h.to_ode();
        for pair in h.riemann_scheme() {
            assert_eq!(ode.local_exponents(&pair.point, &FieldSpec::Rationals).unwrap(), pair);
        }
    }

    #[test]
    fn all_zero_thetas_at_minus_one() {
        // a = b = 1/2 in the row-2 family: θ = 0, q = 0, t = −1
        let h = heun([(0, 1); 4], (-1, 1), (0, 1));
        let ode = h.to_ode();
        let expected = parse_rational_function("1/(z+1) + 1/z + 1/(z-1)", &FieldSpec::Rationals, &HashMap::new());
        assert_eq!(ode.p1(), &expected.unwrap());
        assert_eq!(&h.theta41() * &h.theta42(), Scalar::one());
    }

    #[test]
    fn sl_form_two_routes() {
        for h in [
            heun([(1, 2), (1, 2), (1, 2), (3, 2)], (-1, 1), (1, 4)),
            heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (5, 1), (2, 9)),
            heun([(1, 1), (1, 1), (1, 1), (2, 3)], (1, 2), (-3, 1)),
        ] {
            assert_eq!(h.to_sl().to_ode(), h.to_ode().to_sl_form(), "{h}");
        }
        let sl = heun([(1, 2), (1, 2), (1, 2), (0, 1)], (3, 1), (0, 1)).to_sl();
        assert_eq!((sl.a1.clone(), sl.a2.clone(), sl.a3), (s(-3, 16), s(-3, 16), s(-3, 16)));
        let h = heun([(1, 1), (1, 1), (1, 1), (2, 3)], (1, 2), (-3, 1));
        assert_eq!(h.to_sl().l, &h.q - &(&h.t * &(&h.theta41() * &h.theta42())));
    }

    #[test]
    fn normalization_round_trip() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (-1, 1), (2, 9));
        let orbit = heun_orbit(&h.to_ode(), &FieldSpec::Rationals).unwrap();
        assert_eq!(orbit.len(), 192);
        assert!(orbit.iter().any(|f| f.heun.same_equation(&h)));
        let canon = ode_to_heun(&h.to_ode(), &FieldSpec::Rationals).unwrap();
        assert!(orbit.iter().any(|f| f.heun == canon.heun));
        // the recorded change of variable reproduces the canonical operator
        let rebuilt = h.to_ode().mobius_transform(&canon.mobius).unwrap().gauge(&canon.gauge);
        assert_eq!(rebuilt, canon.heun.to_ode());
    }

    #[test]
    fn normalization_is_invariant_under_mobius() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (3, 1), (2, 9));
        let m = Mobius::new(s(2, 1), s(1, 1), s(1, 1), s(3, 1)).unwrap();
        let moved = h.to_ode().mobius_transform(&m).unwrap();
        let a: Vec<_> = heun_orbit(&h.to_ode(), &FieldSpec::Rationals).unwrap().into_iter().map(|f| f.heun).collect();
        let b = heun_orbit(&moved, &FieldSpec::Rationals).unwrap();
        assert!(b.iter().all(|f| a.contains(&f.heun)));
    }

    #[test]
    fn gauged_exponents_are_restored() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (-1, 1), (2, 9));
        let ode = h.to_ode().gauge(&GaugeFactor::power(&Poly::z(), &s(1, 5)));
        let orbit = heun_orbit(&ode, &FieldSpec::Rationals).unwrap();
        assert!(orbit.iter().any(|f| f.heun.same_equation(&h)));
    }

    #[test]
    fn quadratic_singularities() {
        // singular at 0, ∞ and the roots of z² + 3z + 3
        let k = parse_field("t1^2 + 3*t1 + 3 = 0").unwrap();
        let bindings = HashMap::new();
        let p1 = parse_rational_function("2/(3*z) + 2/3*(2*z+3)/(z^2+3*z+3)", &FieldSpec::Rationals, &bindings);
        let p2 = parse_rational_function("(2/9*z - 1/7)/(z*(z^2+3*z+3))", &FieldSpec::Rationals, &bindings);
        let ode = LinearOde2::new(p1.unwrap(), p2.unwrap());
        assert!(matches!(ode_to_heun(&ode, &FieldSpec::Rationals), Err(Error::ExponentOutsideField(_))));
        let canon = ode_to_heun(&ode, &FieldSpec::Quadratic(k)).unwrap();
        assert_eq!((canon.mobius.b.clone(), canon.mobius.c.clone()), (Scalar::zero(), Scalar::zero()));
        assert!([s(1, 3), s(-1, 3)].contains(&canon.heun.theta[1]));
        let rebuilt = ode.mobius_transform(&canon.mobius).unwrap().gauge(&canon.gauge);
        assert_eq!(rebuilt, canon.heun.to_ode());
    }

    #[test]
    fn wrong_count_and_apparent() {
        let gauss = LinearOde2::hypergeometric(&s(1, 3), &s(1, 5), &s(1, 2));
        assert_eq!(ode_to_heun(&gauss, &FieldSpec::Rationals).unwrap_err(), Error::WrongSingularCount(3));
        // solutions z and z²: exponents (1, 2) at 0 without a logarithm
        let bindings = HashMap::new();
        let p1 = parse_rational_function("-2/z", &FieldSpec::Rationals, &bindings).unwrap();
        let p2 = parse_rational_function("2/z^2", &FieldSpec::Rationals, &bindings).unwrap();
        let ode = LinearOde2::new(p1, p2);
        assert!(matches!(ode_to_heun(&ode, &FieldSpec::Rationals), Err(Error::ApparentSingularity(_))));
    }

    #[test]
    fn accessory_by_recurrence() {
        let h = heun([(1, 3), (2, 5), (-1, 7), (3, 4)], (-1, 1), (2, 9));
        // forward substitution for the exponent-0 solution at 0
        let (th, t, q) = (&h.theta, &h.t, &h.q);
        let one = Scalar::one();
        let series = exact_series(&h, 6);
        assert_eq!(series[1], q / &((&one - &th[1]) * t));
        assert!(apply_heun(&h, &Poly::new(series.clone())).coeffs().iter().take(5).all(Scalar::is_zero));
        assert_eq!(&accessory_from_solution(th, t, &series).unwrap(), q);
        let scaled: Vec<Scalar> = series.iter().map(|c| c * &s(-7, 3)).collect();
        assert_eq!(&accessory_from_solution(th, t, &scaled).unwrap(), q);
        let mut broken = series.clone();
        broken[2] = &broken[2] + &one;
        assert!(matches!(accessory_from_solution(th, t, &broken), Err(Error::InconsistentSeries(_))));
    }

    /// Taylor coefficients at 0 of the exponent-0 solution, one order at a time.
    fn exact_series(h: &HeunEquation, n: usize) -> Vec<Scalar> {
        let mut c = vec![Scalar::one()];
        for k in 0..n - 1 {
            c.push(Scalar::zero());
            let residual = apply_heun(h, &Poly::new(c.clone())).coeff(k);
            // c_{k+1} enters the z^k coefficient with weight t(k+1)(k+1−θ₂)
            let kp = Scalar::from_int(k as i64 + 1);
            let weight = &(&h.t * &kp) * &(&kp - &h.theta[1]);
            c[k + 1] = -(residual / weight);
        }
        c
    }

    #[test]
    fn lame_from_heun() {
        let half = (1, 2);
        let h = heun([half, half, half, half], (-1, 1), (0, 1));
        let lame = heun_to_lame(&h).unwrap();
        assert_eq!((lame.n.clone(), lame.b.clone()), (Scalar::zero(), Scalar::zero()));
        assert_eq!((lame.g2.clone(), lame.g3.clone()), (Scalar::from_int(4), Scalar::zero()));
        let h = heun([half, half, half, (7, 2)], (5, 1), (1, 3));
        let lame = heun_to_lame(&h).unwrap();
        let shift = Mobius::affine(Scalar::one(), lame_shift(&h.t)).unwrap();
        assert_eq!(h.to_ode().mobius_transform(&shift).unwrap(), lame.to_ode());
        assert_eq!(lame.to_heun(&h.t).unwrap(), h);
        assert_ne!(lame.b, &h.q * &Scalar::from_int(4));
        assert_eq!(heun_to_lame(&heun([(1, 3), half, half, half], (2, 1), (0, 1))), Err(Error::NotLame));
    }
}
