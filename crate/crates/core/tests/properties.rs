use num_bigint::BigUint;
use proptest::prelude::*;

use patpop::closed;
use patpop::count::{class_size, enumerate_class, occurrence_table, popularity_exact, Engine};
use patpop::foata::{all_involutions, classify_windows, foata_hat, foata_unhat};
use patpop::perm::{avoids, consecutive_occurrences, Pattern, PatternSet, Permutation, Symmetry};

fn triples() -> Vec<Pattern> {
    Pattern::all(3)
}

fn pattern_set() -> impl Strategy<Value = PatternSet> {
    (1u8..63).prop_map(|mask| {
        let all = triples();
        PatternSet::new((0..6).filter(|i| mask & (1 << i) != 0).map(|i| all[i].clone())).unwrap()
    })
}

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_len).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()).prop_map(|w| Permutation::new(w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetries_transport_counts(ps in pattern_set(), n in 0usize..=8, which in 0usize..3) {
        let t = Symmetry::ALL[which];
        let image = ps.apply(t);
        prop_assert_eq!(class_size(n, &ps), class_size(n, &image));
        for q in ps.complement_patterns() {
            let a = popularity_exact(n, &ps, &q).unwrap();
            let b = popularity_exact(n, &image, &q.apply(t)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn window_totals_fill_every_position(ps in pattern_set(), n in 3usize..=12) {
        let targets = ps.complement_patterns();
        let rec = occurrence_table(n, &ps, &targets, Engine::Auto).unwrap().pop().unwrap();
        let total: BigUint = rec.occurrences.values().sum();
        prop_assert_eq!(total, &rec.class_size * (n - 2));
    }

    #[test]
    fn engines_agree(ps in pattern_set(), n in 0usize..=9) {
        let targets = ps.complement_patterns();
        let fast = occurrence_table(n, &ps, &targets, Engine::Auto).unwrap();
        let generic = occurrence_table(n, &ps, &targets, Engine::Generic).unwrap();
        prop_assert_eq!(fast, generic);
    }

    #[test]
    fn enumeration_matches_dp(ps in pattern_set(), n in 0usize..=8) {
        let members: Vec<Permutation> = enumerate_class(n, &ps).collect();
        prop_assert!(members.iter().all(|p| avoids(p, &ps)));
        prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(BigUint::from(members.len()), class_size(n, &ps));
    }

    #[test]
    fn permutation_text_round_trip(p in permutation(14)) {
        let back: Permutation = p.to_string().parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(p.reverse().reverse(), p.clone());
        prop_assert_eq!(p.complement().complement(), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p.clone());
    }

    #[test]
    fn occurrences_move_under_reversal(p in permutation(12)) {
        for q in triples() {
            let here = consecutive_occurrences(&p, &q).len();
            let there = consecutive_occurrences(&p.reverse(), &q.apply(Symmetry::Reverse)).len();
            prop_assert_eq!(here, there);
        }
    }
}

#[test]
fn class11_window_identity_to_30() {
    for n in 3..=30i64 {
        let size = closed::class11_size(n).unwrap();
        let total = closed::count_231_class11(n).unwrap()
            + closed::count_312_class11(n).unwrap()
            + closed::count_213_class11(n).unwrap();
        assert_eq!(total, size * (n as u64 - 2), "n = {n}");
    }
}

#[test]
fn class16_ratios_are_equal() {
    let ps: PatternSet = "123,321".parse().unwrap();
    for n in 3..=12 {
        let counts: Vec<BigUint> = ps.complement_patterns().iter().map(|q| popularity_exact(n, &ps, q).unwrap()).collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(&counts[0] * 4u32, class_size(n, &ps) * (n - 2) as u64);
    }
}

#[test]
fn foata_bijection_to_nine() {
    let ps: PatternSet = "123,132".parse().unwrap();
    for n in 0..=9 {
        let invs = all_involutions(n);
        let mut hats: Vec<Permutation> = invs.iter().map(foata_hat).collect();
        hats.sort();
        let class: Vec<Permutation> = enumerate_class(n, &ps).collect();
        assert_eq!(hats, class, "n = {n}");
        for inv in &invs {
            assert_eq!(&foata_unhat(&foata_hat(inv)).unwrap(), inv);
            assert_eq!(classify_windows(inv).total() as usize, n.saturating_sub(2));
        }
    }
}
