//! Belyi maps j = lead·j1/j2, their ramification, the index constraints that
//! remove singular points of a pullback, and permutation-triple counts.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::arith::roots::{rational_small_factors, split};
use crate::arith::{FieldSpec, Poly, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::ode2::Point;

/// A ramification constraint: a positive integer or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Finite(usize),
    Infinity,
}

impl Constraint {
    /// ∞ divides nothing.
    pub fn divides(self, index: usize) -> bool {
        match self {
            Constraint::Finite(k) => index.is_multiple_of(k),
            Constraint::Infinity => false,
        }
    }

    pub fn matches(self, index: usize) -> bool {
        self == Constraint::Finite(index)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Constraint::Finite(_))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Finite(k) => write!(f, "{k}"),
            Constraint::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Constraint::Infinity),
            t => match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(Constraint::Finite(k)),
                _ => Err(Error::Parse { line: 1, col: 1, msg: format!("bad constraint `{t}`") }),
            },
        }
    }
}

/// The three constraints (A, B, C) for the fibers over 0, 1 and ∞.
pub type Constraints = [Constraint; 3];

pub const UNCONSTRAINED: Constraints = [Constraint::Infinity; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fiber {
    Zero,
    One,
    Infinity,
}

impl Fiber {
    pub const ALL: [Fiber; 3] = [Fiber::Zero, Fiber::One, Fiber::Infinity];

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fiber::Zero => "0",
            Fiber::One => "1",
            Fiber::Infinity => "inf",
        })
    }
}

/// A validated Belyi map `lead·j1/j2` with monic coprime `j1`, `j2` and `deg j1 > deg j2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BelyiMap {
    j1: Poly,
    j2: Poly,
    lead: Scalar,
    lambda: Poly,
    fibers: [Vec<(usize, Poly)>; 3],
}

impl BelyiMap {
    /// Normalizes to monic `j1`, `j2` and checks deg Λ = N + 1.
    pub fn verify(j1: &Poly, j2: &Poly, lead: &Scalar) -> Result<Self> {
        if j2.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if j1.is_zero() || lead.is_zero() {
            return Err(Error::ConstantMap);
        }
        let lead = lead * &j1.lc() / j2.lc();
        let (j1, j2) = (j1.monic(), j2.monic());
        if !Poly::gcd(&j1, &j2).is_one() {
            return Err(Error::NotCoprime);
        }
        let (n, m) = (j1.deg(), j2.deg());
        if n <= m {
            return Err(Error::DegreeCondition { n, m });
        }
        let minus_one = &j1.scale(&lead) - &j2;
        let lambda = (&(&j1 * &j2) * &minus_one).radical()?;
        if lambda.deg() != n + 1 {
            return Err(Error::NotBelyi { lambda_deg: lambda.deg(), expected: n + 1 });
        }
        let fibers =
            [j1.squarefree_decomposition()?, minus_one.squarefree_decomposition()?, j2.squarefree_decomposition()?];
        Ok(BelyiMap { j1, j2, lead, lambda, fibers })
    }

    pub fn from_rational_function(j: &RationalFunction) -> Result<Self> {
        BelyiMap::verify(j.num(), j.den(), &Scalar::one())
    }

    pub fn j1(&self) -> &Poly {
        &self.j1
    }

    pub fn j2(&self) -> &Poly {
        &self.j2
    }

    pub fn lead(&self) -> &Scalar {
        &self.lead
    }

    pub fn n(&self) -> usize {
        self.j1.deg()
    }

    pub fn m(&self) -> usize {
        self.j2.deg()
    }

    pub fn lambda(&self) -> &Poly {
        &self.lambda
    }

    /// The map as a rational function.
    pub fn j(&self) -> RationalFunction {
        RationalFunction::new(self.j1.scale(&self.lead), self.j2.clone()).expect("j2 is nonzero")
    }

    /// Numerator of j − 1 over the denominator `j2`.
    pub fn minus_one_numerator(&self) -> Poly {
        &self.j1.scale(&self.lead) - &self.j2
    }

    /// `(multiplicity, square-free factor)` pairs for the finite points over `fiber`.
    pub fn fiber_factors(&self, fiber: Fiber) -> &[(usize, Poly)] {
        &self.fibers[fiber.slot()]
    }

    pub fn ramification(&self) -> RamificationData {
        let spread = |parts: &[(usize, Poly)]| -> Vec<usize> {
            parts.iter().flat_map(|(e, f)| std::iter::repeat_n(*e, f.deg())).collect()
        };
        RamificationData::new(
            spread(&self.fibers[0]),
            spread(&self.fibers[1]),
            spread(&self.fibers[2]),
            Some(self.n() - self.m()),
        )
    }
}

pub fn verify_belyi(j1: &Poly, j2: &Poly, lead: &Scalar) -> Result<BelyiMap> {
    BelyiMap::verify(j1, j2, lead)
}

pub fn ramification_data(m: &BelyiMap) -> RamificationData {
    m.ramification()
}

/// Ramification indices over 0, 1 and ∞, each sorted in decreasing order.
///
/// `over_inf` includes the index of the point ∞ itself when it is known;
/// `infinity_index` records which entry that is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationData {
    pub over0: Vec<usize>,
    pub over1: Vec<usize>,
    pub over_inf: Vec<usize>,
    pub infinity_index: Option<usize>,
}

impl RamificationData {
    /// `finite_inf` are the finite poles; `infinity_index`, if given, is appended to them.
    pub fn new(over0: Vec<usize>, over1: Vec<usize>, finite_inf: Vec<usize>, infinity_index: Option<usize>) -> Self {
        let desc = |mut v: Vec<usize>| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let mut over_inf = finite_inf;
        over_inf.extend(infinity_index);
        RamificationData { over0: desc(over0), over1: desc(over1), over_inf: desc(over_inf), infinity_index }
    }

    /// Data given as three bare multisets, with no distinguished point over ∞.
    pub fn from_multisets(over0: Vec<usize>, over1: Vec<usize>, over_inf: Vec<usize>) -> Self {
        RamificationData::new(over0, over1, over_inf, None)
    }

    pub fn fiber(&self, fiber: Fiber) -> &[usize] {
        match fiber {
            Fiber::Zero => &self.over0,
            Fiber::One => &self.over1,
            Fiber::Infinity => &self.over_inf,
        }
    }

    /// The common sum of the three multisets, if they agree.
    pub fn degree(&self) -> Option<usize> {
        let n: usize = self.over0.iter().sum();
        (self.over1.iter().sum::<usize>() == n && self.over_inf.iter().sum::<usize>() == n).then_some(n)
    }

    /// 2N − 2 equals the total Σ(e − 1) over the three fibers.
    pub fn riemann_hurwitz_holds(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        let defect: usize = Fiber::ALL.iter().flat_map(|&f| self.fiber(f)).map(|e| e - 1).sum();
        n >= 1 && defect + 2 == 2 * n
    }

    /// `[[a..], [b..], [c..]]`
    pub fn as_lists(&self) -> [Vec<usize>; 3] {
        [self.over0.clone(), self.over1.clone(), self.over_inf.clone()]
    }

    /// Indices over ∞ excluding the point ∞ (one copy of `infinity_index` removed).
    fn finite_inf(&self) -> Vec<usize> {
        let mut v = self.over_inf.clone();
        if let Some(k) = self.infinity_index {
            if let Some(pos) = v.iter().position(|&e| e == k) {
                v.remove(pos);
            }
        }
        v
    }

    /// Number of singular points that survive (A, B, C). The point ∞ always survives.
    pub fn singular_count(&self, c: &Constraints) -> usize {
        let survivors = |idx: &[usize], k: Constraint| idx.iter().filter(|&&e| !k.matches(e)).count();
        let base = survivors(&self.over0, c[0]) + survivors(&self.over1, c[1]);
        match self.infinity_index {
            Some(_) => base + survivors(&self.finite_inf(), c[2]) + 1,
            None => base + survivors(&self.over_inf, c[2]),
        }
    }
}

/// Star condition: every index divisible by its fiber's constraint equals it.
pub fn check_star_conditions(r: &RamificationData, c: &Constraints) -> bool {
    Fiber::ALL.iter().all(|&f| r.fiber(f).iter().all(|&e| !c[f.slot()].divides(e) || c[f.slot()].matches(e)))
}

/// A singular point of the pulled-back equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLocus {
    /// A single point, or all roots of a square-free factor that does not split.
    pub point: Point,
    pub fiber: Fiber,
    pub index: usize,
}

impl SingularLocus {
    /// How many points of ℙ¹ this entry stands for.
    pub fn multiplicity(&self) -> usize {
        match &self.point {
            Point::RootsOf(f) => f.deg(),
            _ => 1,
        }
    }
}

pub fn count_points(locus: &[SingularLocus]) -> usize {
    locus.iter().map(SingularLocus::multiplicity).sum()
}

/// Roots of `f` where they lie in `field`; otherwise the smallest rational factors found.
pub fn split_points(f: &Poly, field: &FieldSpec) -> Vec<Point> {
    let factors =
        if f.is_rational() { rational_small_factors(f).unwrap_or_else(|_| vec![f.clone()]) } else { vec![f.clone()] };
    let mut out = Vec::new();
    for g in factors {
        match split(&g, field) {
            Ok(roots) => out.extend(roots.into_iter().map(Point::Finite)),
            Err(_) => out.push(Point::RootsOf(g)),
        }
    }
    out
}

/// Points over 0, 1, ∞ whose index differs from the fiber's constraint, plus ∞.
///
/// Factors are split into single points when they split in `field`.
pub fn singular_points(m: &BelyiMap, c: &Constraints, field: &FieldSpec) -> Vec<SingularLocus> {
    let mut out = Vec::new();
    for fiber in Fiber::ALL {
        for (e, f) in m.fiber_factors(fiber) {
            if c[fiber.slot()].matches(*e) {
                continue;
            }
            for point in split_points(f, field) {
                out.push(SingularLocus { point, fiber, index: *e });
            }
        }
    }
    out.push(SingularLocus { point: Point::Infinity, fiber: Fiber::Infinity, index: m.n() - m.m() });
    out
}

/// Which constraints reduce the pullback to four singular points, with the fiber counts behind that choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClassification {
    pub constraints: Constraints,
    /// Every constraint choice with the same number of free parameters.
    pub witnesses: Vec<Constraints>,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub r1: usize,
    pub s1: usize,
    pub t1: usize,
    pub free_params: usize,
}

impl FamilyClassification {
    pub fn constraint(&self, fiber: Fiber) -> Constraint {
        self.constraints[fiber.slot()]
    }

    /// N ≤ r + s + t + 2.
    pub fn degree_bound_holds(&self, n: usize) -> bool {
        n <= self.r + self.s + self.t + 2
    }
}

fn candidate_constraints(indices: &[usize]) -> Vec<Constraint> {
    let mut out: Vec<usize> = indices.iter().flat_map(|&e| (2..=e).filter(move |k| e % k == 0)).collect();
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(Constraint::Finite).collect()
}

/// Subsets of the three fibers by size, A before B before C within a size.
const FIBER_SUBSETS: [&[usize]; 8] = [&[], &[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];

/// The least-constrained (A, B, C) leaving exactly four singular points.
pub fn classify_family(r: &RamificationData) -> Result<FamilyClassification> {
    let options: Vec<Vec<Constraint>> = Fiber::ALL.iter().map(|&f| candidate_constraints(r.fiber(f))).collect();
    for size in 0..=3 {
        let mut witnesses = Vec::new();
        for subset in FIBER_SUBSETS.iter().filter(|s| s.len() == size) {
            let mut choices = vec![UNCONSTRAINED];
            for &slot in subset.iter() {
                choices = choices
                    .into_iter()
                    .flat_map(|base| {
                        options[slot].iter().map(move |&k| {
                            let mut c = base;
                            c[slot] = k;
                            c
                        })
                    })
                    .collect();
            }
            witnesses.extend(choices.into_iter().filter(|c| check_star_conditions(r, c) && r.singular_count(c) == 4));
        }
        if let Some(&constraints) = witnesses.first() {
            return Ok(classify_with(r, constraints, witnesses, 3 - size));
        }
    }
    Err(Error::NotHeunCompatible)
}

fn classify_with(
    r: &RamificationData,
    constraints: Constraints,
    witnesses: Vec<Constraints>,
    free_params: usize,
) -> FamilyClassification {
    let hits = |idx: &[usize], k: Constraint| idx.iter().filter(|&&e| k.matches(e)).count();
    let (rr, ss) = (hits(&r.over0, constraints[0]), hits(&r.over1, constraints[1]));
    let finite_inf = if r.infinity_index.is_some() { r.finite_inf() } else { r.over_inf.clone() };
    let tt = hits(&finite_inf, constraints[2]);
    FamilyClassification {
        constraints,
        witnesses,
        r: rr,
        s: ss,
        t: tt,
        r1: r.over0.len() - rr,
        s1: r.over1.len() - ss,
        t1: r.over_inf.len() - tt,
        free_params,
    }
}

type Perm = Vec<usize>;

fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Consecutive cycles of the given lengths.
fn with_cycle_type(ct: &[usize]) -> Perm {
    let mut p = Vec::new();
    for &len in ct {
        let base = p.len();
        p.extend((0..len).map(|i| base + (i + 1) % len));
    }
    p
}

/// (g ∘ h)(x) = g(h(x)).
fn compose(g: &[usize], h: &[usize]) -> Perm {
    h.iter().map(|&x| g[x]).collect()
}

fn invert(g: &[usize]) -> Perm {
    let mut inv = vec![0; g.len()];
    for (x, &y) in g.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Minimal relabeling of a transitive pair by breadth-first search from each start.
/// Two transitive pairs are simultaneously conjugate iff these agree.
fn canonical_pair(g1: &[usize], g2: &[usize]) -> Option<Perm> {
    let n = g1.len();
    let mut best: Option<Perm> = None;
    for start in 0..n {
        let mut label = vec![usize::MAX; n];
        label[start] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in [g1, g2] {
                let y = g[x];
                if label[y] == usize::MAX {
                    label[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        if next < n {
            return None;
        }
        let mut form = vec![0; 2 * n];
        for x in 0..n {
            form[label[x]] = label[g1[x]];
            form[n + label[x]] = label[g2[x]];
        }
        if best.as_ref().is_none_or(|b| form < *b) {
            best = Some(form);
        }
    }
    best
}

fn check_partition(ct: &[usize], n: usize) -> Result<()> {
    if ct.contains(&0) || ct.iter().sum::<usize>() != n {
        return Err(Error::CycleType(format!("{ct:?} is not a partition of {n}")));
    }
    Ok(())
}

pub const MAX_TRIPLE_DEGREE: usize = 8;

/// Transitive (g1, g2, g3) in S_N with g1·g2·g3 = id and the given cycle types,
/// counted up to simultaneous conjugation.
pub fn count_triples(ct0: &[usize], ct1: &[usize], ct_inf: &[usize]) -> Result<usize> {
    let n: usize = ct0.iter().sum();
    for ct in [ct0, ct1, ct_inf] {
        check_partition(ct, n)?;
    }
    if n > MAX_TRIPLE_DEGREE {
        return Err(Error::CycleType(format!("degree {n} exceeds {MAX_TRIPLE_DEGREE}")));
    }
    let sorted = |ct: &[usize]| {
        let mut v = ct.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let (t1, t3) = (sorted(ct1), sorted(ct_inf));
    // every triple is conjugate to one whose g1 is this representative
    let g1 = with_cycle_type(&sorted(ct0));
    let mut found = HashSet::new();
    let mut g2: Perm = (0..n).collect();
    loop {
        if cycle_type(&g2) == t1 {
            let g3 = invert(&compose(&g1, &g2));
            if cycle_type(&g3) == t3 {
                if let Some(form) = canonical_pair(&g1, &g2) {
                    found.insert(form);
                }
            }
        }
        if !next_permutation(&mut g2) {
            break;
        }
    }
    Ok(found.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{parse_field, parse_poly, parse_rational_function};
    use std::collections::HashMap;

    fn poly(s: &str) -> Poly {
        parse_poly(s, &FieldSpec::Rationals).unwrap()
    }

    fn example1() -> BelyiMap {
        let j1 = poly("z*(z^3 - 6*z^2 + 15*z - 12)^3");
        let j2 = poly("3*z^2 - 14*z + 27");
        verify_belyi(&j1, &j2, &Scalar::ratio(-4, 27)).unwrap()
    }

    fn fin(k: usize) -> Constraint {
        Constraint::Finite(k)
    }

    const INF: Constraint = Constraint::Infinity;

    #[test]
    fn example1_is_belyi() {
        let m = example1();
        assert_eq!((m.n(), m.m(), m.lambda().deg()), (10, 2, 11));
        assert_eq!(m.lead(), &Scalar::ratio(-4, 81));
        let r = m.ramification();
        assert_eq!(r.over0, vec![3, 3, 3, 1]);
        assert_eq!(r.over1, vec![2; 5]);
        assert_eq!(r.over_inf, vec![8, 1, 1]);
        assert!(r.riemann_hurwitz_holds());
    }

    #[test]
    fn example1_from_weierstrass_invariants() {
        // j = g2³/(g2³ − 27g3²) recovers the same normalized map
        let bindings = HashMap::new();
        let g2 = parse_rational_function("12*z*(z^3 - 6*z^2 + 15*z - 12)", &FieldSpec::Rationals, &bindings);
        let g3 = parse_rational_function(
            "4*z*(2*z^5 - 18*z^4 + 72*z^3 - 144*z^2 + 135*z - 27)",
            &FieldSpec::Rationals,
            &bindings,
        );
        let (g2, g3) = (g2.unwrap(), g3.unwrap());
        let cube = g2.pow(3).unwrap();
        let disc = &cube - &(&g3 * &g3).scale(&Scalar::from_int(27));
        let j = cube.checked_div(&disc).unwrap();
        let m = BelyiMap::from_rational_function(&j).unwrap();
        assert_eq!(m, example1());
    }

    #[test]
    fn cube_of_shift() {
        let m = verify_belyi(&poly("(z+1)^3"), &Poly::one(), &Scalar::one()).unwrap();
        assert_eq!(m.lambda(), &poly("(z+1)*z*(z^2+3*z+3)"));
        let r = m.ramification();
        assert_eq!(r.as_lists(), [vec![3], vec![1, 1, 1], vec![3]]);
    }

    #[test]
    fn non_belyi_polynomial() {
        let err = verify_belyi(&poly("z^3 + z"), &Poly::one(), &Scalar::one()).unwrap_err();
        assert_eq!(err, Error::NotBelyi { lambda_deg: 6, expected: 4 });
    }

    #[test]
    fn structural_errors() {
        assert_eq!(verify_belyi(&poly("z^2"), &poly("z"), &Scalar::one()).unwrap_err(), Error::NotCoprime);
        assert_eq!(
            verify_belyi(&poly("z"), &poly("z^2+1"), &Scalar::one()).unwrap_err(),
            Error::DegreeCondition { n: 1, m: 2 }
        );
        assert_eq!(verify_belyi(&poly("z"), &Poly::zero(), &Scalar::one()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn quartic_over_linear() {
        let m = verify_belyi(&poly("z^4 + 8*z^3"), &poly("64*z - 64"), &Scalar::one()).unwrap();
        assert_eq!(m.ramification().as_lists(), [vec![3, 1], vec![2, 2], vec![3, 1]]);
    }

    #[test]
    fn star_conditions() {
        let r = example1().ramification();
        assert!(check_star_conditions(&r, &[fin(3), fin(2), INF]));
        assert!(!check_star_conditions(&r, &[fin(3), fin(2), fin(2)]));
        let six = RamificationData::from_multisets(vec![6], vec![1; 6], vec![6]);
        assert!(!check_star_conditions(&six, &[fin(3), INF, INF]));
        assert!(check_star_conditions(&six, &UNCONSTRAINED));
    }

    #[test]
    fn example1_singular_points() {
        let m = example1();
        let pts = singular_points(&m, &[fin(3), fin(2), INF], &FieldSpec::Rationals);
        assert_eq!(count_points(&pts), 4);
        assert_eq!(pts[0].point, Point::Finite(Scalar::zero()));
        assert_eq!(pts[1].point, Point::RootsOf(poly("z^2 - 14/3*z + 9")));
        assert_eq!(pts[2].point, Point::Infinity);
        assert_eq!(pts[2].index, 8);
    }

    #[test]
    fn cube_singular_points_split_in_field() {
        let m = verify_belyi(&poly("(z+1)^3"), &Poly::one(), &Scalar::one()).unwrap();
        let k = FieldSpec::Quadratic(parse_field("t1^2 + 3*t1 + 3 = 0").unwrap());
        let pts = singular_points(&m, &[fin(3), INF, INF], &k);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().take(3).all(|p| p.fiber == Fiber::One && matches!(p.point, Point::Finite(_))));
        let over_q = singular_points(&m, &[fin(3), INF, INF], &FieldSpec::Rationals);
        assert_eq!(count_points(&over_q), 4);
        assert_eq!(over_q.len(), 3);
    }

    #[test]
    fn square_map_has_four_points() {
        let m = verify_belyi(&poly("z^2"), &Poly::one(), &Scalar::one()).unwrap();
        let pts = singular_points(&m, &UNCONSTRAINED, &FieldSpec::Rationals);
        let points: Vec<_> = pts.iter().map(|p| (p.point.clone(), p.index)).collect();
        assert_eq!(
            points,
            vec![
                (Point::Finite(Scalar::zero()), 2),
                (Point::Finite(Scalar::from_int(-1)), 1),
                (Point::Finite(Scalar::one()), 1),
                (Point::Infinity, 2)
            ]
        );
    }

    #[test]
    fn classify_examples() {
        let row33 = RamificationData::new(vec![3], vec![1, 1, 1], vec![], Some(3));
        let c = classify_family(&row33).unwrap();
        assert_eq!((c.free_params, c.constraints), (2, [fin(3), INF, INF]));
        assert_eq!((c.r1, c.s1, c.t1), (0, 3, 1));

        let row32 = RamificationData::new(vec![2], vec![1, 1], vec![], Some(2));
        assert_eq!(classify_family(&row32).unwrap().free_params, 3);

        let ex1 = example1().ramification();
        let c = classify_family(&ex1).unwrap();
        assert_eq!((c.free_params, c.constraints), (1, [fin(3), fin(2), INF]));
        assert_eq!(c.witnesses, vec![[fin(3), fin(2), INF]]);
        assert_eq!((c.r, c.s, c.t, c.r1, c.s1, c.t1), (3, 5, 0, 1, 0, 3));
        assert!(c.degree_bound_holds(10));
    }

    #[test]
    fn classify_rejects_incompatible_data() {
        // z⁵: 0 and ∞ are both index 5, every point over 1 unramified
        let r = RamificationData::new(vec![5], vec![1; 5], vec![], Some(5));
        assert_eq!(classify_family(&r), Err(Error::NotHeunCompatible));
    }

    #[test]
    fn triple_counts() {
        assert_eq!(count_triples(&[3], &[1, 1, 1], &[3]).unwrap(), 1);
        assert_eq!(count_triples(&[2], &[1, 1], &[2]).unwrap(), 1);
        assert!(count_triples(&[2, 2], &[2, 2], &[2, 2]).unwrap() >= 1);
        // no transitive subgroup of S₃ is generated by two transpositions with product a transposition
        assert_eq!(count_triples(&[2, 1], &[2, 1], &[2, 1]).unwrap(), 0);
    }

    #[test]
    fn triple_input_errors() {
        assert!(matches!(count_triples(&[2], &[1], &[2]), Err(Error::CycleType(_))));
        assert!(matches!(count_triples(&[9], &[9], &[9]), Err(Error::CycleType(_))));
    }

    #[test]
    fn constraint_parsing() {
        assert_eq!("3".parse::<Constraint>().unwrap(), fin(3));
        assert_eq!("inf".parse::<Constraint>().unwrap(), INF);
        assert!("0".parse::<Constraint>().is_err());
    }
}
