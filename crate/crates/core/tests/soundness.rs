mod common;

use posetcode::criteria::revalidate;
use posetcode::{ball_size, find_perfect_code, is_perfect, run_battery, Code, Poset, SearchConfig, Verdict, VerifyMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n, 0.0..0.7f64, any::<u64>()).prop_map(|(n, d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_poset(&mut rng, n, d)
    })
}

#[test]
fn battery_never_contradicts_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..120 {
        let n = 2 + i % 7;
        let p = common::random_poset(&mut rng, n, 0.35);
        for m in 0..=n {
            for r in 0..=m {
                let report = run_battery(&p, m, r).unwrap();
                let exists = ball_size(&p, r).unwrap() == 1 << m
                    && find_perfect_code(&p, r, &SearchConfig::default()).unwrap().found().is_some();
                match report.verdict {
                    Verdict::NonexistenceProven => assert!(!exists, "{p:?} m={m} r={r}"),
                    Verdict::ExistenceConstructed => {
                        assert!(exists);
                        let c = report.constructed().unwrap();
                        assert!(is_perfect(&p, c, r, VerifyMode::Oracle).unwrap().perfect);
                        assert_eq!(c.size(), 1 << (n - m));
                    }
                    Verdict::Inconclusive => {}
                }
                for e in &report.entries {
                    if e.verdict != Verdict::Inconclusive && e.witness.is_some() {
                        assert!(revalidate(&p, m, r, e).unwrap(), "{e:?}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poset_text_round_trips(p in arb_poset(12)) {
        prop_assert_eq!(Poset::parse_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn code_text_round_trips(words in proptest::collection::vec(0u64..256, 1..12)) {
        let words: Vec<_> = words.into_iter().map(posetcode::Subset::from_bits).collect();
        let mut uniq = words.clone();
        uniq.sort();
        uniq.dedup();
        let c = Code::explicit(8, uniq).unwrap();
        prop_assert_eq!(Code::parse_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn searched_codes_are_perfect(p in arb_poset(7), r in 0usize..7) {
        prop_assume!(r <= p.len());
        if let Some(c) = find_perfect_code(&p, r, &SearchConfig::default()).unwrap().found() {
            prop_assert!(is_perfect(&p, c, r, VerifyMode::Oracle).unwrap().perfect);
        }
    }
}
