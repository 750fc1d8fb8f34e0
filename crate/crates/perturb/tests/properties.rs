//! Randomised invariants of the reduction engines.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn pencil_determinant_equals_theta(c in pencil_case()) {
        pencil_determinant_is_theta(c)?;
    }

    #[test]
    fn unimodular_gauges_respect_the_valuation_bound(c in gauge_case()) {
        characteristic_coefficients_move_by_bounded_amounts(c)?;
    }

    #[test]
    fn irreducible_output_is_sandwiched(c in reducible_case()) {
        irreducible_output_brackets_the_exponential_order(c)?;
    }

    #[test]
    fn companion_exponential_order(c in scalar_case()) {
        companion_order_matches_scalar_formula(c)?;
    }

    #[test]
    fn split_output_is_block_diagonal(c in split_case()) {
        split_is_block_diagonal(c)?;
    }

    #[test]
    fn sweeps_lower_the_moser_rank(c in reducible_case()) {
        each_sweep_lowers_the_moser_rank(c)?;
    }

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        series_form_a_commutative_ring((a, b, c))?;
    }

    #[test]
    fn product_rule(a in series(), b in series()) {
        derivative_obeys_the_product_rule((a, b))?;
    }
}
