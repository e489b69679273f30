//! Double-precision certificates: ₂F₁ and Heun local series, and residuals of
//! claimed solutions against exact operators.

use num_complex::Complex64;

use crate::arith::{Poly, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::heun::HeunEquation;
use crate::ode2::LinearOde2;
use crate::pipeline::ClassicalSolution;

pub const DEFAULT_TOL: f64 = 1e-10;
/// Fraction of the tolerance left for the truncated tail.
const TAIL_SAFETY: f64 = 1e-2;

pub const TERM_CAP: usize = 100_000;
/// Minimum distance between a residual sample point and a singularity.
pub const SINGULAR_MARGIN: f64 = 0.05;

/// Value, first and second derivative at one point.
pub type Jet = [Complex64; 3];

/// (z − anchor)^exponent · Σ coeffs[k](z − anchor)^k, valid for |z − anchor| < radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub anchor: Complex64,
    pub exponent: Complex64,
    pub coeffs: Vec<Complex64>,
    pub radius: f64,
}

impl Series {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        let h = z - self.anchor;
        if h.norm() >= self.radius {
            return Err(Error::OutsideDisk(format!(
                "{z} is outside the disk of radius {} at {}",
                self.radius, self.anchor
            )));
        }
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for c in self.coeffs.iter().rev() {
            acc[2] = acc[2] * h + acc[1] * 2.0;
            acc[1] = acc[1] * h + acc[0];
            acc[0] = acc[0] * h + c;
        }
        if self.exponent == Complex64::new(0.0, 0.0) {
            return Ok(acc);
        }
        // product rule with hᵖ
        let rho = self.exponent;
        let hp = h.powc(rho);
        let d1 = rho / h;
        let d2 = rho * (rho - 1.0) / (h * h);
        Ok([hp * acc[0], hp * (acc[1] + d1 * acc[0]), hp * (acc[2] + 2.0 * d1 * acc[1] + d2 * acc[0])])
    }
}

fn check_gauss_params(c: &Scalar) -> Result<()> {
    match c.as_integer() {
        Some(n) if n <= 0.into() => Err(Error::GammaPole),
        _ => Ok(()),
    }
}

/// ₂F₁(a, b; c; z) for |z| < 1 by direct summation.
pub fn gauss_2f1(a: &Scalar, b: &Scalar, c: &Scalar, z: Complex64, tol: f64) -> Result<Complex64> {
    check_gauss_params(c)?;
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk(format!("|{z}| ≥ 1")));
    }
    let (a, b, c) = (a.to_complex(), b.to_complex(), c.to_complex());
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..TERM_CAP {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        // geometric bound on the tail once the term ratio has settled below 1
        let ratio = ((a + k + 1.0) * (b + k + 1.0) / ((c + k + 1.0) * (k + 2.0)) * z).norm();
        if ratio < 1.0 && term.norm() * ratio / (1.0 - ratio) < TAIL_SAFETY * tol * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(TERM_CAP))
}

/// ₂F₁ with its first two derivatives, via d/dz ₂F₁(a, b; c) = (ab/c)·₂F₁(a+1, b+1; c+1).
pub fn gauss_2f1_jet(a: &Scalar, b: &Scalar, c: &Scalar, z: Complex64, tol: f64) -> Result<Jet> {
    let one = Scalar::one();
    let (a1, b1, c1) = (a + &one, b + &one, c + &one);
    let f0 = gauss_2f1(a, b, c, z, tol)?;
    let f1 = gauss_2f1(&a1, &b1, &c1, z, tol)? * (a * b / c.clone()).to_complex();
    let f2 = gauss_2f1(&(&a1 + &one), &(&b1 + &one), &(&c1 + &one), z, tol)?
        * (&(&(a * b) * &(&a1 * &b1)) / &(c * &c1)).to_complex();
    Ok([f0, f1, f2])
}

/// Value and derivatives of f(g(z)) from those of f at g(z) and of g at z.
fn chain(f: Jet, g: Jet) -> Jet {
    [f[0], f[1] * g[1], f[2] * g[1] * g[1] + f[1] * g[2]]
}

fn rational_jet(r: &RationalFunction, z: Complex64) -> Jet {
    let d1 = r.derivative();
    [r.eval_complex(z), d1.eval_complex(z), d1.derivative().eval_complex(z)]
}

/// Π fᵢ^{eᵢ}·₂F₁(x(z)) with exact logarithmic derivatives of the multiplier
/// and principal branches for its value.
pub fn classical_jet(sol: &ClassicalSolution, z: Complex64, tol: f64) -> Result<Jet> {
    let [a, b, c] = &sol.params;
    let x = rational_jet(&sol.argument, z);
    let hyper = chain(gauss_2f1_jet(a, b, c, x[0], tol)?, x);
    let lambda = sol.multiplier_dlog()?;
    let (l0, l1) = (lambda.eval_complex(z), lambda.derivative().eval_complex(z));
    let u =
        sol.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, (f, e)| acc * f.eval_complex(z).powc(e.to_complex()));
    // u' = λu, u'' = (λ' + λ²)u
    Ok([u * hyper[0], u * (l0 * hyper[0] + hyper[1]), u * ((l1 + l0 * l0) * hyper[0] + 2.0 * l0 * hyper[1] + hyper[2])])
}

/// Complex roots by Durand–Kerner iteration.
pub fn complex_roots(p: &Poly) -> Vec<Complex64> {
    let Some(deg) = p.degree().filter(|&d| d > 0) else {
        return Vec::new();
    };
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_complex()).collect();
    let lc = coeffs[deg];
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c) / lc;
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..deg {
            let denom =
                (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 {
            break;
        }
    }
    roots
}

/// Numeric locations of the finite singularities of `ode`.
pub fn singular_locations(ode: &LinearOde2) -> Vec<Complex64> {
    complex_roots(&ode.pole_locus())
}

/// max |f'' + p₁f' + p₂f| / max(|f''|, |p₁f'|, |p₂f|, 1) over `points`.
pub fn residual(ode: &LinearOde2, f: impl Fn(Complex64) -> Result<Jet>, points: &[Complex64]) -> Result<f64> {
    let poles = singular_locations(ode);
    let mut worst = 0.0f64;
    for &z in points {
        if let Some(s) = poles.iter().find(|s| (z - **s).norm() < SINGULAR_MARGIN) {
            return Err(Error::TooCloseToSingularity(format!("{z} is within {SINGULAR_MARGIN} of {s}")));
        }
        let [y, dy, d2y] = f(z)?;
        let terms = [d2y, ode.p1().eval_complex(z) * dy, ode.p2().eval_complex(z) * y];
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        worst = worst.max((terms[0] + terms[1] + terms[2]).norm() / scale);
    }
    Ok(worst)
}

/// `count` points on the circle |z − center| = radius.
pub fn circle_points(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| center + Complex64::from_polar(radius, 0.3 + std::f64::consts::TAU * k as f64 / count as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeunPoint {
    Zero,
    One,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Exponent 0, the holomorphic solution.
    Holomorphic,
    /// Exponent θ of the point.
    Theta,
}

/// Frobenius series of the Heun equation at 0, 1 or t, normalized to c₀ = 1.
pub fn heun_local_series(h: &HeunEquation, point: HeunPoint, branch: Branch, order: usize) -> Result<Series> {
    let (z0, theta) = match point {
        HeunPoint::Zero => (Scalar::zero(), &h.theta[1]),
        HeunPoint::One => (Scalar::one(), &h.theta[2]),
        HeunPoint::T => (h.t.clone(), &h.theta[0]),
    };
    let rho = match branch {
        Branch::Holomorphic => Scalar::zero(),
        Branch::Theta => theta.clone(),
    };
    let coeffs = h.to_ode().frobenius_series(&z0, &rho, order)?;
    let anchor = z0.to_complex();
    let radius = [Scalar::zero(), Scalar::one(), h.t.clone()]
        .iter()
        .map(|s| (s.to_complex() - anchor).norm())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    Ok(Series { anchor, exponent: rho.to_complex(), coeffs: coeffs.iter().map(Scalar::to_complex).collect(), radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;
    use crate::arith::FieldSpec;
    use crate::belyi::verify_belyi;
    use crate::pipeline::{theorem1_operator, HypergeometricParams};

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_classical_values() {
        let one = Scalar::one();
        assert_eq!(gauss_2f1(&s(1, 3), &s(1, 5), &s(2, 3), c(0.0, 0.0), DEFAULT_TOL).unwrap(), c(1.0, 0.0));
        let v = gauss_2f1(&one, &one, &Scalar::from_int(2), c(0.5, 0.0), 1e-14).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-12);
        // independent summation with f64 Pochhammer products
        let mut direct = 0.0;
        let (mut poch, mut fact) = (1.0, 1.0);
        for n in 0..60 {
            direct += poch / fact * 0.1f64.powi(n);
            let k = n as f64;
            poch *= (1.0 / 3.0 + k) * (0.2 + k) / (2.0 / 3.0 + k);
            fact *= k + 1.0;
        }
        let v = gauss_2f1(&s(1, 3), &s(1, 5), &s(2, 3), c(0.1, 0.0), 1e-15).unwrap();
        assert!((v.re - direct).abs() < 1e-14);
    }

    #[test]
    fn gauss_errors() {
        let one = Scalar::one();
        assert_eq!(gauss_2f1(&one, &one, &Scalar::from_int(-2), c(0.1, 0.0), DEFAULT_TOL), Err(Error::GammaPole));
        assert!(matches!(gauss_2f1(&one, &one, &one, c(1.0, 0.0), DEFAULT_TOL), Err(Error::OutsideDisk(_))));
        // 1/(1 − z) at |z| just below 1 needs more terms than the cap
        assert_eq!(gauss_2f1(&one, &one, &one, c(0.999999, 0.0), 1e-16), Err(Error::NoConvergence(TERM_CAP)));
    }

    #[test]
    fn contiguous_relation() {
        // γ(F(α,β,γ) − F(α−1,β,γ)) = βz·F(α,β+1,γ+1)
        let (a, b, g) = (s(1, 3), s(1, 5), s(3, 4));
        for z in circle_points(c(0.0, 0.0), 0.6, 7) {
            let lhs = (gauss_2f1(&a, &b, &g, z, 1e-14).unwrap()
                - gauss_2f1(&(&a - &Scalar::one()), &b, &g, z, 1e-14).unwrap())
                * g.to_complex();
            let rhs =
                b.to_complex() * z * gauss_2f1(&a, &(&b + &Scalar::one()), &(&g + &Scalar::one()), z, 1e-14).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn roots_of_cubic() {
        let p = parse_poly("z^3 - 6*z^2 + 11*z - 6", &FieldSpec::Rationals).unwrap();
        let mut roots: Vec<f64> = complex_roots(&p).iter().map(|r| r.re).collect();
        roots.sort_by(f64::total_cmp);
        for (r, e) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_solution_residual() {
        // y = z² solves y'' − y'/z = 0
        let ode = LinearOde2::new(
            RationalFunction::new(Poly::constant(Scalar::from_int(-1)), Poly::z()).unwrap(),
            RationalFunction::zero(),
        );
        let f = |z: Complex64| Ok([z * z, 2.0 * z, c(2.0, 0.0)]);
        let r = residual(&ode, f, &circle_points(c(0.5, 0.0), 0.3, 6)).unwrap();
        assert!(r < 1e-12);
        assert!(matches!(residual(&ode, f, &[c(0.01, 0.0)]), Err(Error::TooCloseToSingularity(_))));
    }

    #[test]
    fn pullback_certificate_example1() {
        let m = verify_belyi(
            &parse_poly("z*(z^3 - 6*z^2 + 15*z - 12)^3", &FieldSpec::Rationals).unwrap(),
            &parse_poly("3*z^2 - 14*z + 27", &FieldSpec::Rationals).unwrap(),
            &s(-4, 27),
        )
        .unwrap();
        let p = HypergeometricParams::one_parameter(&s(1, 5));
        let ode = theorem1_operator(&m, &p).unwrap();
        let sol = ClassicalSolution::pullback(&m, &p);
        // |j| ≈ 9.5|z| near 0
        let points = circle_points(c(0.0, 0.0), 0.07, 6);
        let r = residual(&ode, |z| classical_jet(&sol, z, 1e-14), &points).unwrap();
        assert!(r < 1e-8, "residual {r}");
        // a wrong operator is caught
        let wrong = theorem1_operator(&m, &HypergeometricParams::one_parameter(&s(1, 4))).unwrap();
        assert!(residual(&wrong, |z| classical_jet(&sol, z, 1e-14), &points).unwrap() > 1e-4);
    }

    #[test]
    fn heun_series_recurrence_and_residual() {
        let h = HeunEquation::new([s(1, 2), s(1, 3), s(1, 4), s(3, 5)], s(-1, 1), s(2, 7)).unwrap();
        let ode = h.to_ode();
        for (point, branch) in [
            (HeunPoint::Zero, Branch::Holomorphic),
            (HeunPoint::One, Branch::Theta),
            (HeunPoint::T, Branch::Holomorphic),
        ] {
            let series = heun_local_series(&h, point, branch, 80).unwrap();
            assert_eq!(series.radius, 1.0);
            let points = circle_points(series.anchor, 0.3, 5);
            let r = residual(&ode, |z| series.jet(z), &points).unwrap();
            assert!(r < 1e-10, "{point:?}: residual {r}");
        }
        let series = heun_local_series(&h, HeunPoint::Zero, Branch::Holomorphic, 10).unwrap();
        assert!(matches!(series.jet(c(1.5, 0.0)), Err(Error::OutsideDisk(_))));
    }
}
