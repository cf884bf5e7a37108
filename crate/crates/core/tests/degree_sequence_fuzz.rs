mod common;

use common::regeneration_invariance;

#[test]
fn degree_sequences_survive_regeneration() {
    for seed in [7, 8] {
        for r in regeneration_invariance(seed, 100) {
            assert!(r.stable, "{}: degree sequence {:?} changed", r.label, r.degrees);
            assert!(r.mu_matches, "{}: mu(in I) differs from mu(I)", r.label);
        }
    }
}

#[test]
fn initial_forms_of_random_elements_lie_in_the_initial_ideal() {
    let (checked, bad) = common::initial_forms_fuzz(11, 200);
    assert!(checked > 0);
    assert!(bad.is_empty(), "{bad:#?}");
}
