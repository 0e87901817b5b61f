mod support;

use support::suites;

#[test]
fn root_branch_invariance_and_log_sum_zero() {
    suites::root_branch_suite(500).unwrap();
}

#[test]
fn herbrand_pairs_match_truncated_matrices() {
    suites::herbrand_suite(200).unwrap();
}

#[test]
fn growth_fit_is_exact() {
    suites::growth_suite(100).unwrap();
}

#[test]
fn capitulation_kernel_stabilizes_to_finite_part() {
    suites::capitulation_suite(100).unwrap();
}

#[test]
fn idempotents_are_orthogonal() {
    suites::idempotent_suite().unwrap();
}
