use pathdec::disentangle::{
    apply_augmenting_sequence, check_augmenting_sequence, disentangle, random_full_augmenting_sequence, AugmentingSequence,
};
use pathdec::pathdec::PathDecomposition;
use pathdec::testbed::{fixture, tangle_fixture, verify_decomposition};
use pathdec::tracking::is_complete;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const K: usize = 3;

#[test]
fn stored_tangle_is_the_seed_zero_variant() {
    let fx = fixture("FIX-TANGLE").unwrap();
    let (_, d) = tangle_fixture(0).unwrap();
    assert_eq!(fx.tangle.unwrap(), d);
}

#[test]
fn disentangle_clears_every_variant() {
    for seed in 0..12 {
        let (g, d) = tangle_fixture(seed).unwrap();
        assert!(d.tau() > 0);
        let (out, report) = disentangle(&g, &d, K).unwrap();
        assert_eq!(out.tau(), 0);
        assert_eq!(out.stats(&g).b_total, d.stats(&g).b_total);
        assert!(report.tau_trace.windows(2).all(|w| w[1] < w[0]));
        let p = PathDecomposition::from_trackings(&out).unwrap();
        assert!(verify_decomposition(&g, 4, &p).ok());
    }
}

#[test]
fn truncated_sequences_are_not_full() {
    let (g, d) = tangle_fixture(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let seq = random_full_augmenting_sequence(&g, &d, &mut rng).unwrap();
    let cut = AugmentingSequence {
        steps: seq.steps[..1].to_vec(),
    };
    assert!(check_augmenting_sequence(&g, &d, &cut, true).is_err());
    assert!(apply_augmenting_sequence(&g, &d, &cut, K).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_sequences_check_and_apply(fixture_seed in 0u64..100, rng_seed: u64) {
        let (g, d) = tangle_fixture(fixture_seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let seq = random_full_augmenting_sequence(&g, &d, &mut rng).unwrap();
        prop_assert!(check_augmenting_sequence(&g, &d, &seq, true).is_ok());
        let (next, swaps) = apply_augmenting_sequence(&g, &d, &seq, K).unwrap();
        prop_assert!(next.tau() < d.tau());
        prop_assert!(!swaps.is_empty());
        prop_assert_eq!(next.stats(&g).b_total, d.stats(&g).b_total);
        prop_assert!(is_complete(&g, &next, K));
        prop_assert!(next.validate(&g).is_ok());
    }
}
