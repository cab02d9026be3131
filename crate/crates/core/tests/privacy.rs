mod common;

use common::privacy::{preprocessing_counts, vss_counts, wps_counts};

fn all_equal<K: std::fmt::Debug>(counts: &std::collections::BTreeMap<K, u64>, size: usize) {
    assert_eq!(counts.len(), size);
    let first = *counts.values().next().unwrap();
    assert!(first > 0);
    assert!(counts.values().all(|c| *c == first), "{counts:?}");
}

#[test]
fn wps_view_is_independent_of_the_secret() {
    for seed in 0..3 {
        all_equal(&wps_counts(seed), 17);
    }
}

#[test]
fn vss_view_is_independent_of_the_secret() {
    for seed in 0..2 {
        all_equal(&vss_counts(seed), 17);
    }
}

#[test]
fn preprocessing_view_is_independent_of_the_triple() {
    all_equal(&preprocessing_counts(1), 17 * 17);
}

#[test]
fn enumeration_is_tight() {
    // one completion per candidate: the view pins everything but the secret
    assert!(wps_counts(5).values().all(|c| *c == 1));
    assert!(vss_counts(5).values().all(|c| *c == 1));
    assert!(preprocessing_counts(2).values().all(|c| *c == 1));
}
