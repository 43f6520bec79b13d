//! Shared proptest generators for unit tests.

use crate::poly::{frac, Monomial, Poly, PolyMap};
use proptest::prelude::*;

/// Random sparse polynomial: up to six terms, exponents at most 4,
/// coefficients with numerator and denominator at most 9.
pub fn arb_poly() -> impl Strategy<Value = Poly> {
    arb_poly_min_order(0)
}

/// As `arb_poly`, but every monomial has total degree at least `min_order`.
pub fn arb_poly_min_order(min_order: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (min_order..=4u32, 0..=4u32, -9i64..=9, 1i64..=9),
        0..=6,
    )
    .prop_map(|entries| {
        Poly::from_terms(entries.into_iter().map(|(d, split, num, den)| {
            // Spread the extra exponent between x and y so low orders are
            // impossible but shapes stay varied.
            let ey = split.min(d);
            (Monomial::new(d - ey, ey), frac(num, den))
        }))
    })
}

/// Random map with component degrees at most 2, for composition laws where
/// expression swell must stay bounded.
pub fn small_map() -> impl Strategy<Value = PolyMap> {
    let comp = prop::collection::vec((0..=2u32, 0..=2u32, -4i64..=4, 1i64..=4), 0..=4).prop_map(
        |entries| {
            Poly::from_terms(entries.into_iter().map(|(ex, ey, num, den)| {
                (Monomial::new(ex, ey.min(2u32.saturating_sub(ex))), frac(num, den))
            }))
        },
    );
    (comp.clone(), comp).prop_map(|(p, q)| PolyMap::new(p, q))
}
