//! Library results against brute-force recomputation from definitions.

#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use proptest::prelude::*;

use sixglue::compactification::build_cpt;
use sixglue::fincat::{truncation_level, FinCategory, PullbackCategory, Square, TruncationLevel};
use sixglue::upset::enumerate_upsets;
use sixglue::{ExactSquare, Poset, SubNerve};

fn poset_strategy(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |flags| {
            let mut related = vec![vec![false; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    related[i][j] = flags[k];
                    k += 1;
                }
            }
            let names = (0..n).map(|i| format!("v{i}")).collect();
            Poset::from_fn(names, |a, b| a == b || related[a][b]).unwrap()
        })
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upset_enumeration_matches_subset_filter(p in poset_strategy(8)) {
        let expected = subsets(p.len())
            .filter(|s| s.iter().all(|&a| (0..p.len()).all(|b| !p.leq(a, b) || s.contains(&b))))
            .count();
        prop_assert_eq!(enumerate_upsets(&p, 20).unwrap().len(), expected);
    }

    #[test]
    fn nerve_chains_match_subset_filter(p in poset_strategy(8)) {
        let expected = subsets(p.len())
            .filter(|s| !s.is_empty() && s.iter().all(|&a| s.iter().all(|&b| p.comparable(a, b))))
            .count();
        let nerve = SubNerve::nerve(Arc::new(p), None).unwrap();
        prop_assert_eq!(nerve.chains().len(), expected);
    }

    #[test]
    fn poset_pullbacks_agree_with_the_universal_property(p in poset_strategy(6)) {
        let c = FinCategory::from_poset(Arc::new(p.clone()));
        let n = p.len();
        let arrow = |x: usize, y: usize| c.hom(x, y)[0];
        for a in 0..n {
            for b in p.upper_members(a) {
                for cc in p.upper_members(a) {
                    for d in (0..n).filter(|&d| p.leq(b, d) && p.leq(cc, d)) {
                        let sq = Square { top: arrow(a, b), left: arrow(a, cc), right: arrow(b, d), bottom: arrow(cc, d) };
                        let universal = c.is_pullback_square(&sq).unwrap();
                        prop_assert_eq!(universal, p.is_pullback(&ExactSquare::new(a, b, cc, d)), "square {:?}", (a, b, cc, d));
                    }
                }
            }
        }
    }
}

#[test]
fn compactification_sizes() {
    for n in 0..=6 {
        let cpt = build_cpt(n);
        assert_eq!(cpt.len(), (n + 1) * (n + 2) / 2);
        // Covers increase exactly one coordinate by one.
        assert_eq!(cpt.covers().len(), n * (n + 1), "n = {n}");
    }
}

#[test]
fn finset_pullbacks_are_fiber_products() {
    let c = FinCategory::finsets_of_sizes(&[0, 1, 2, 3, 4]);
    for f in 0..c.num_morphisms() {
        for g in c.maps_into(c.target(f)) {
            let (fv, gv) = (c.function_values(f).unwrap(), c.function_values(g).unwrap());
            let pairs = fv.iter().flat_map(|&a| gv.iter().filter(move |&&b| a == b)).count();
            let chosen = c.pullback(&f, &g);
            if pairs > 4 {
                assert!(chosen.is_none());
                continue;
            }
            let cone = chosen.unwrap();
            assert_eq!(c.set_size(cone.apex), Some(pairs));
            // The fast path must be a genuine limit.
            let sq = Square {
                top: cone.first,
                left: cone.second,
                right: f,
                bottom: g,
            };
            assert!(c.is_pullback_square(&sq).unwrap(), "{} x {}", c.name(f), c.name(g));
        }
    }
}

#[test]
fn finset_truncation_detects_injections() {
    let c = FinCategory::finsets_of_sizes(&[0, 1, 2, 3]);
    for f in 0..c.num_morphisms() {
        let v = c.function_values(f).unwrap();
        let injective = (0..v.len()).all(|i| (0..i).all(|j| v[i] != v[j]));
        let bijective = injective && v.len() == c.set_size(c.target(f)).unwrap();
        let kernel_pair = v.iter().map(|&a| v.iter().filter(|&&b| a == b).count()).sum::<usize>();
        let Ok(level) = truncation_level(&c, &f, 2) else {
            assert!(kernel_pair > 3, "{} has a kernel pair in range", c.name(f));
            continue;
        };
        assert_eq!(level.at_most(-1), injective, "{}", c.name(f));
        assert_eq!(level == TruncationLevel::Level(-2), bijective, "{}", c.name(f));
    }
}
