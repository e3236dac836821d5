mod common;

use common::oracles;
use csets_core::{FilterVerdict, FiniteFamily, RamseyVerdict};
use proptest::prelude::*;

fn family(max_n: usize) -> impl Strategy<Value = FiniteFamily> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(1u32..(1 << n), 1..6)))
        .prop_map(|(n, gens)| FiniteFamily::upward_closure(n, &gens).unwrap())
}

fn table(f: &FiniteFamily) -> Vec<bool> {
    (0..=f.full_mask()).map(|s| f.contains(s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dual_is_an_involution(f in family(6)) {
        prop_assert_eq!(f.dual().unwrap().dual().unwrap(), f);
    }

    #[test]
    fn dual_matches_oracle(f in family(6)) {
        let want = oracles::dual_table(f.universe(), &table(&f));
        prop_assert_eq!(table(&f.dual().unwrap()), want);
    }

    #[test]
    fn dual_is_antitone(a in family(5), extra in proptest::collection::vec(1u32..32, 0..3)) {
        let n = a.universe();
        let extra: Vec<u32> = extra.into_iter().map(|m| m & a.full_mask()).filter(|&m| m != 0).collect();
        let mut gens = a.minimal_members().to_vec();
        gens.extend(extra);
        let b = FiniteFamily::upward_closure(n, &gens).unwrap();
        let (da, db) = (a.dual().unwrap(), b.dual().unwrap());
        prop_assert!((0..=a.full_mask()).all(|s| !db.contains(s) || da.contains(s)));
    }

    #[test]
    fn ramsey_iff_dual_is_filter(f in family(5)) {
        let ramsey = matches!(f.ramsey_check().unwrap(), RamseyVerdict::Ramsey);
        let filter = matches!(f.dual().unwrap().is_filter().unwrap(), FilterVerdict::Filter);
        prop_assert_eq!(ramsey, filter);
    }

    #[test]
    fn verdicts_match_oracles(f in family(6)) {
        let t = table(&f);
        let n = f.universe();
        match f.is_filter().unwrap() {
            FilterVerdict::Filter => prop_assert!(oracles::is_filter_oracle(n, &t)),
            FilterVerdict::NotFilter { first, second, intersection } => {
                prop_assert!(!oracles::is_filter_oracle(n, &t));
                let mask = |s: &[usize]| s.iter().fold(0u32, |m, e| m | 1 << (e - 1));
                prop_assert!(f.contains(mask(&first)) && f.contains(mask(&second)));
                prop_assert_eq!(mask(&first) & mask(&second), mask(&intersection));
                prop_assert!(!f.contains(mask(&intersection)));
            }
        }
        match f.ramsey_check().unwrap() {
            RamseyVerdict::Ramsey => prop_assert!(oracles::is_ramsey_oracle(n, &t)),
            RamseyVerdict::NotRamsey { set, part1, part2 } => {
                prop_assert!(!oracles::is_ramsey_oracle(n, &t));
                let mask = |s: &[usize]| s.iter().fold(0u32, |m, e| m | 1 << (e - 1));
                prop_assert!(f.contains(mask(&set)));
                prop_assert_eq!(mask(&part1) | mask(&part2), mask(&set));
                prop_assert_eq!(mask(&part1) & mask(&part2), 0);
                prop_assert!(!f.contains(mask(&part1)) && !f.contains(mask(&part2)));
            }
        }
    }

    #[test]
    fn closure_matches_oracle(n in 1usize..7, gens in proptest::collection::vec(0u32..64, 0..5)) {
        let gens: Vec<u32> = gens.into_iter().map(|g| g & ((1 << n) - 1)).collect();
        let f = FiniteFamily::upward_closure(n, &gens).unwrap();
        prop_assert_eq!(table(&f), oracles::closure_table(n, &gens));
    }
}
