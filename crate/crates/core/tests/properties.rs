//! Randomized checks of the algebraic identities and of the structural
//! invariants of restrictions and tangency orders.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn d_squared_vanishes(k in 0usize..=2, seed in form(4, 0, 3), w1 in form(4, 1, 3), w2 in form(4, 2, 3)) {
        let w = [seed, w1, w2].into_iter().nth(k).unwrap();
        check_d_squared(&w)?;
    }

    #[test]
    fn graded_leibniz(a0 in form(4, 0, 2), a1 in form(4, 1, 2), b1 in form(4, 1, 2), b2 in form(4, 2, 2)) {
        check_leibniz(&a0, &b2)?;
        check_leibniz(&a1, &b1)?;
        check_leibniz(&a1, &b2)?;
    }

    #[test]
    fn cartan_identity(x in field(4, 2), w1 in form(4, 1, 2), w2 in form(4, 2, 2)) {
        check_cartan(&x, &w1)?;
        check_cartan(&x, &w2)?;
    }

    #[test]
    fn polynomial_ring_axioms(a in poly(3, 3, 4), b in poly(3, 3, 4), c in poly(3, 3, 4)) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in poly(3, 2, 3),
        b in poly(3, 2, 3),
        args in prop::collection::vec(poly(2, 2, 3), 3),
        point in prop::collection::vec(rational(), 2),
    ) {
        check_substitution(&a, &b, &args, &point)?;
    }

    #[test]
    fn render_parse_round_trip(p in poly(4, 3, 5), w in form(4, 2, 2)) {
        check_round_trip(&p, &w)?;
    }

    #[test]
    fn coordinates_ignore_a0_perturbations(sample in a0_sample(6..=9), seed in any::<u64>()) {
        let c = coords_from_seed(sample.mu, seed);
        check_well_defined(&sample, &c)?;
    }

    #[test]
    fn zero_restriction_vanishes_on_w(
        sample in a0_sample(6..=9),
        extra in prop::array::uniform6(rational()),
        keep in any::<bool>(),
    ) {
        let extra = if keep { extra } else { Default::default() };
        check_zero_on_w(&sample, &extra)?;
    }

    #[test]
    fn lt_is_bounded_by_component_orders(mu in 6u32..=7, seed in any::<u64>()) {
        check_lt_bound(mu, &coords_from_seed(mu, seed))?;
    }
}
