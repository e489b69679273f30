//! Strategies and helpers shared by the property and acceptance suites.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;

use heun_core::arith::{FieldSpec, Poly, QuadraticField, Scalar};
use heun_core::heun::HeunEquation;
use heun_core::ode2::{LinearOde2, Mobius, Point};

pub fn field() -> Arc<QuadraticField> {
    heun_core::arith::parse::parse_field("t1^2 + 3*t1 + 3 = 0").unwrap()
}

pub fn small_rational() -> impl Strategy<Value = Scalar> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| Scalar::ratio(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    small_rational().prop_filter("nonzero", |x| !x.is_zero())
}

pub fn quadratic() -> impl Strategy<Value = Scalar> {
    (small_rational(), small_rational()).prop_map(|(a, b)| &a + &(&b * &Scalar::generator(&field())))
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

/// Products of random factors raised to small powers, so repeated roots are common.
pub fn structured_poly() -> impl Strategy<Value = Poly> {
    (prop::collection::vec((poly(2), 1u32..=3), 1..=3), nonzero_rational()).prop_map(|(parts, lead)| {
        parts.iter().filter(|(f, _)| !f.is_zero()).fold(Poly::constant(lead), |acc, (f, e)| &acc * &f.pow(*e))
    })
}

/// θ values away from integers, where the Frobenius recursions stay regular.
pub fn generic_theta() -> impl Strategy<Value = Scalar> {
    (1i64..=40).prop_filter("not an integer", |k| (2 * k - 1) % 17 != 0).prop_map(|k| Scalar::ratio(2 * k - 1, 17))
}

pub fn heun_equation() -> impl Strategy<Value = HeunEquation> {
    (prop::array::uniform4(generic_theta()), nonzero_rational(), small_rational())
        .prop_filter_map("t away from 0 and 1", |(theta, t, q)| HeunEquation::new(theta, t, q).ok())
}

pub fn mobius() -> impl Strategy<Value = Mobius> {
    prop::array::uniform4(small_rational()).prop_filter_map("invertible", |[a, b, c, d]| Mobius::new(a, b, c, d).ok())
}

pub fn exponent_differences(ode: &LinearOde2, points: &[Point]) -> Vec<Scalar> {
    points.iter().map(|p| ode.local_exponents(p, &FieldSpec::Rationals).unwrap().difference()).collect()
}

pub fn heun_points(h: &HeunEquation) -> [Point; 4] {
    [Point::Finite(h.t.clone()), Point::Finite(Scalar::zero()), Point::Finite(Scalar::one()), Point::Infinity]
}
