//! Pullbacks of the Gauss equation by Belyi maps: the closed-form operator,
//! the compositional route it must agree with, its Riemann scheme, and the
//! Heun normal form when four singular points survive.

use std::fmt;

use crate::arith::{FieldSpec, Poly, PowerSeries, RationalFunction, Scalar};
use crate::belyi::{
    check_star_conditions, count_points, singular_points, split_points, BelyiMap, Constraint, Constraints, Fiber,
};
use crate::error::{Error, Result};
use crate::heun::{accessory_from_solution, heun_orbit, ode_to_heun, HeunForm};
use crate::ode2::{ExponentPair, GaugeFactor, LinearOde2, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypergeometricParams {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
}

impl HypergeometricParams {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar) -> Self {
        HypergeometricParams { alpha, beta, gamma }
    }

    /// α = −a/2 + 1/3, β = a/2 − 1/6, γ = 2/3: the one-parameter families with A = 3, B = 2.
    pub fn one_parameter(a: &Scalar) -> Self {
        let half_a = a * &Scalar::ratio(1, 2);
        HypergeometricParams {
            alpha: &Scalar::ratio(1, 3) - &half_a,
            beta: &half_a - &Scalar::ratio(1, 6),
            gamma: Scalar::ratio(2, 3),
        }
    }

    pub fn gauss(&self) -> LinearOde2 {
        LinearOde2::hypergeometric(&self.alpha, &self.beta, &self.gamma)
    }

    /// Exponent differences 1 − γ, γ − α − β, β − α over 0, 1, ∞.
    pub fn exponent_differences(&self) -> [Scalar; 3] {
        let one = Scalar::one();
        [&one - &self.gamma, &(&self.gamma - &self.alpha) - &self.beta, &self.beta - &self.alpha]
    }

    /// Every finite constraint k makes the fiber's exponent difference 1/k.
    pub fn satisfies(&self, c: &Constraints) -> bool {
        self.exponent_differences().iter().zip(c).all(|(d, k)| match k {
            Constraint::Finite(k) => (d * &Scalar::from_int(*k as i64)).is_one(),
            Constraint::Infinity => true,
        })
    }

    /// Finite(k) on each fiber whose exponent difference is exactly 1/k, k ≥ 2.
    pub fn implied_constraints(&self) -> Constraints {
        self.exponent_differences().map(|d| {
            let k = d.inv().ok().and_then(|k| k.as_integer()).and_then(|k| usize::try_from(k).ok());
            match k {
                Some(k) if k >= 2 => Constraint::Finite(k),
                _ => Constraint::Infinity,
            }
        })
    }
}

impl fmt::Display for HypergeometricParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α, β, γ) = ({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// Exponent pairs at every singular point, ∞ included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannScheme {
    pub rows: Vec<ExponentPair>,
}

impl RiemannScheme {
    pub fn at(&self, point: &Point) -> Option<&ExponentPair> {
        self.rows.iter().find(|r| &r.point == point)
    }

    /// Σ of all exponents, counting a factor's row once per root.
    pub fn exponent_total(&self) -> Scalar {
        self.rows.iter().fold(Scalar::zero(), |acc, r| {
            let copies = match &r.point {
                Point::RootsOf(f) => f.deg(),
                _ => 1,
            };
            acc + r.sum() * Scalar::from_int(copies as i64)
        })
    }
}

fn dlog(p: &Poly) -> RationalFunction {
    if p.is_constant() {
        return RationalFunction::zero();
    }
    RationalFunction::new(p.derivative(), p.clone()).expect("nonzero polynomial")
}

/// The operator of j₂^{−α}·₂F₁(α, β; γ; j) from the closed formulas.
///
/// With L₁ = j₁'/j₁, L₁₂ = D'/D for D = lead·j₁ − j₂, L₂ = j₂'/j₂ and L_Λ = Λ'/Λ:
/// q₁ = L_Λ + (γ−1)L₁ + (α+β−γ)L₁₂ + (α−β)L₂ and
/// q₂ = αβ·L₁L₁₂ − α·L₂·(L₂ − L_Λ − (γ−β−1)L₁ + (γ−α)L₁₂ − j₂''/j₂').
pub fn theorem1_operator(m: &BelyiMap, p: &HypergeometricParams) -> Result<LinearOde2> {
    let (alpha, beta, gamma) = (&p.alpha, &p.beta, &p.gamma);
    let one = Scalar::one();
    let l1 = dlog(m.j1());
    let l12 = dlog(&m.minus_one_numerator());
    let l2 = dlog(m.j2());
    let l_lambda = dlog(m.lambda());
    let q1 = &(&(&l_lambda + &l1.scale(&(gamma - &one))) + &l12.scale(&(&(alpha + beta) - gamma)))
        + &l2.scale(&(alpha - beta));
    let mut q2 = (&l1 * &l12).scale(&(alpha * beta));
    if !m.j2().is_constant() {
        let dj2 = m.j2().derivative();
        let second = RationalFunction::new(dj2.derivative(), dj2)?;
        let bracket =
            &(&(&(&l2 - &l_lambda) - &l1.scale(&(&(gamma - beta) - &one))) + &l12.scale(&(gamma - alpha))) - &second;
        q2 = &q2 - &(&l2 * &bracket).scale(alpha);
    }
    Ok(LinearOde2::new(q1, q2))
}

/// Pullback of the Gauss operator by j, then the multiplier j₂^{−α}.
pub fn composition_oracle(m: &BelyiMap, p: &HypergeometricParams) -> Result<LinearOde2> {
    let pulled = p.gauss().pullback(&m.j())?;
    Ok(pulled.gauge(&GaugeFactor::new(dlog(m.j2()).scale(&-&p.alpha))))
}

/// Exponents read from the ramification data alone.
pub fn theorem1_scheme(m: &BelyiMap, p: &HypergeometricParams, field: &FieldSpec) -> RiemannScheme {
    let diffs = p.exponent_differences();
    let mut rows = Vec::new();
    for (fiber, diff) in Fiber::ALL.iter().zip(&diffs) {
        for (e, f) in m.fiber_factors(*fiber) {
            let other = diff * &Scalar::from_int(*e as i64);
            for point in split_points(f, field) {
                rows.push(ExponentPair::new(point, Scalar::zero(), other.clone()));
            }
        }
    }
    let (n, mm) = (Scalar::from_int(m.n() as i64), Scalar::from_int(m.m() as i64));
    let at_inf = &(&p.beta * &(&n - &mm)) + &(&mm * &p.alpha);
    rows.push(ExponentPair::new(Point::Infinity, &p.alpha * &n, at_inf));
    RiemannScheme { rows }
}

fn check_heun_input(m: &BelyiMap, p: &HypergeometricParams, c: &Constraints, field: &FieldSpec) -> Result<LinearOde2> {
    if !check_star_conditions(&m.ramification(), c) {
        return Err(Error::InvalidHeun(format!("star condition fails for {c:?}")));
    }
    if !p.satisfies(c) {
        return Err(Error::InvalidHeun(format!("{p} does not meet the constraints {c:?}")));
    }
    let count = count_points(&singular_points(m, c, field));
    if count != 4 {
        return Err(Error::WrongSingularCount(count));
    }
    theorem1_operator(m, p)
}

/// The canonical Heun form of the pulled-back operator.
pub fn pipeline_to_heun(
    m: &BelyiMap,
    p: &HypergeometricParams,
    c: &Constraints,
    field: &FieldSpec,
) -> Result<HeunForm> {
    ode_to_heun(&check_heun_input(m, p, c, field)?, field)
}

/// Every Heun form of the pulled-back operator (24 arrangements × 8 gauges).
pub fn pipeline_orbit(
    m: &BelyiMap,
    p: &HypergeometricParams,
    c: &Constraints,
    field: &FieldSpec,
) -> Result<Vec<HeunForm>> {
    heun_orbit(&check_heun_input(m, p, c, field)?, field)
}

/// Π fᵢ(z)^{eᵢ} · ₂F₁(a, b; c; x(z)), a Gauss solution pulled back by j with a multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSolution {
    pub factors: Vec<(RationalFunction, Scalar)>,
    pub params: [Scalar; 3],
    pub argument: RationalFunction,
}

fn order_at(f: &RationalFunction, z0: &Scalar) -> i64 {
    f.num().shift(z0).valuation() as i64 - f.den().shift(z0).valuation() as i64
}

impl ClassicalSolution {
    /// j₂^{−α}·₂F₁(α, β; γ; j), the solution of the pulled-back operator.
    pub fn pullback(m: &BelyiMap, p: &HypergeometricParams) -> Self {
        ClassicalSolution {
            factors: vec![(RationalFunction::from_poly(m.j2().clone()), -&p.alpha)],
            params: [p.alpha.clone(), p.beta.clone(), p.gamma.clone()],
            argument: m.j(),
        }
    }

    /// Leading exponent at z0 contributed by the multipliers.
    pub fn exponent_at(&self, z0: &Scalar) -> Scalar {
        self.factors.iter().fold(Scalar::zero(), |acc, (f, e)| acc + e * &Scalar::from_int(order_at(f, z0)))
    }

    /// Σ eᵢ·fᵢ'/fᵢ, the logarithmic derivative of the multiplier.
    pub fn multiplier_dlog(&self) -> Result<RationalFunction> {
        self.factors.iter().try_fold(RationalFunction::zero(), |acc, (f, e)| Ok(&acc + &f.log_derivative()?.scale(e)))
    }

    fn with_substitution(&self, zmap: &RationalFunction) -> Result<Self> {
        Ok(ClassicalSolution {
            factors: self.factors.iter().map(|(f, e)| Ok((f.compose(zmap)?, e.clone()))).collect::<Result<_>>()?,
            params: self.params.clone(),
            argument: self.argument.compose(zmap)?,
        })
    }

    /// Taylor coefficients at w = 0 with the leading power of w removed, and that power.
    fn stripped_series(&self, len: usize) -> Result<(PowerSeries, Scalar)> {
        let mut exponent = Scalar::zero();
        let mut series = PowerSeries::one(len);
        for (f, e) in &self.factors {
            let s = PowerSeries::from_rational(f, len)?;
            let v = s.valuation().ok_or(Error::ZeroInput)?;
            series = &series * &s.shift_down(v).normalized_power(e)?.truncate(len);
            exponent = exponent + e * &Scalar::from_int(v as i64);
        }
        let [a, b, c] = &self.params;
        let x = PowerSeries::from_rational(&self.argument, len)?;
        let hyper = PowerSeries::hypergeometric(a, b, c, len)?.compose(&x)?;
        Ok((&series * &hyper, exponent))
    }
}

/// The two Kummer solutions local to z0, which must lie over 0, 1 or ∞;
/// the first has exponent 0 on the Gauss side.
pub fn classical_solutions(m: &BelyiMap, p: &HypergeometricParams, z0: &Scalar) -> Result<[ClassicalSolution; 2]> {
    let (alpha, beta, gamma) = (&p.alpha, &p.beta, &p.gamma);
    let one = Scalar::one();
    let j = m.j();
    let j1 = RationalFunction::from_poly(m.j1().scale(m.lead()));
    let j2 = RationalFunction::from_poly(m.j2().clone());
    let solution = |factors: Vec<(RationalFunction, Scalar)>, params: [Scalar; 3], argument: &RationalFunction| {
        ClassicalSolution { factors, params, argument: argument.clone() }
    };
    if m.j1().eval(z0).is_zero() {
        Ok([
            solution(vec![(j2.clone(), -alpha)], [alpha.clone(), beta.clone(), gamma.clone()], &j),
            solution(
                vec![(j2, -alpha), (j.clone(), &one - gamma)],
                [&(alpha - gamma) + &one, &(beta - gamma) + &one, &Scalar::from_int(2) - gamma],
                &j,
            ),
        ])
    } else if m.minus_one_numerator().eval(z0).is_zero() {
        let x = &RationalFunction::one() - &j;
        let c_diff = &(gamma - alpha) - beta;
        Ok([
            solution(vec![(j2.clone(), -alpha)], [alpha.clone(), beta.clone(), &one - &c_diff], &x),
            solution(
                vec![(j2, -alpha), (x.clone(), c_diff.clone())],
                [gamma - alpha, gamma - beta, &c_diff + &one],
                &x,
            ),
        ])
    } else if m.j2().eval(z0).is_zero() {
        let x = j.inv()?;
        Ok([
            solution(vec![(j1.clone(), -alpha)], [alpha.clone(), &(alpha - gamma) + &one, &(alpha - beta) + &one], &x),
            solution(
                vec![(j1, -beta), (j2, beta - alpha)],
                [beta.clone(), &(beta - gamma) + &one, &(beta - alpha) + &one],
                &x,
            ),
        ])
    } else {
        Err(Error::InconsistentSeries(format!("z = {z0} is not over 0, 1 or ∞")))
    }
}

/// Taylor coefficients at w = 0 of the exponent-0 solution of `form`, built
/// from the classical local solutions of the Gauss equation.
pub fn known_solution_series(
    m: &BelyiMap,
    p: &HypergeometricParams,
    form: &HeunForm,
    len: usize,
) -> Result<Vec<Scalar>> {
    let Point::Finite(s0) = form.mobius.image(&Point::Finite(Scalar::zero())) else {
        return Err(Error::InconsistentSeries("w = 0 lies over z = ∞".into()));
    };
    let work = len + m.n() + 2;
    let zmap = form.mobius.as_rational_function();
    let rho0 = -form.gauge.dlog.residue(&Scalar::zero())?;
    for sol in classical_solutions(m, p, &s0)? {
        if sol.exponent_at(&s0) != rho0 {
            continue;
        }
        let (mut series, exponent) = sol.with_substitution(&zmap)?.stripped_series(work)?;
        debug_assert_eq!(exponent, rho0);
        let w_pole = RationalFunction::new(Poly::constant(rho0.clone()), Poly::z())?;
        let regular = PowerSeries::from_rational(&(&form.gauge.dlog + &w_pole), work)?;
        series = &series * &PowerSeries::exp_integral(&regular);
        return Ok(series.truncate(len).coeffs().to_vec());
    }
    Err(Error::InconsistentSeries(format!("no classical solution with exponent {rho0} at z = {s0}")))
}

/// q of `form` from the first terms of a classical local solution.
pub fn accessory_via_pullback(m: &BelyiMap, p: &HypergeometricParams, form: &HeunForm) -> Result<Scalar> {
    let series = known_solution_series(m, p, form, 3)?;
    accessory_from_solution(&form.heun.theta, &form.heun.t, &series)
}

pub const DEFAULT_SAMPLES: [(i64, i64); 3] = [(1, 5), (1, 7), (2, 9)];

/// `base` followed by an endless deterministic supply of further rationals.
pub fn sample_stream(base: &[Scalar]) -> impl Iterator<Item = Scalar> + '_ {
    base.iter().cloned().chain((1..).map(|k: i64| Scalar::ratio(k + 2, 2 * k + 9)))
}

/// `count` samples starting from {1/5, 1/7, 2/9}, skipping rejected ones.
pub fn parameter_samples(count: usize, accept: impl Fn(&Scalar) -> bool) -> Vec<Scalar> {
    let base = DEFAULT_SAMPLES.map(|(n, d)| Scalar::ratio(n, d));
    sample_stream(&base).filter(|s| accept(s)).take(count).collect()
}
