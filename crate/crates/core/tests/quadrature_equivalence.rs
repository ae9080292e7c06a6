//! Closed-form outage terms against brute-force integration of their
//! defining probabilities on randomized parameter grids.

mod common;

use common::quadrature;

#[test]
fn csidf_terms_match_their_integrals() {
    quadrature::csidf_terms_match_their_integrals();
}

#[test]
fn an_sop_matches_its_integral() {
    quadrature::an_sop_matches_its_integral();
}
