#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use sixglue::anodyne::search_certificate;
use sixglue::cartesian::Cart;
use sixglue::fincat::{EdgeClass, FinCategory, MarkedCategory};
use sixglue::grid::{enumerate_grid_simplices, Discipline};
use sixglue::interchange::{canonical_chains, PosetDoc, SubNerveDoc};
use sixglue::laws::{factorization_laws, kart_laws};
use sixglue::nerve::{standard_shape, ShapeKind};
use sixglue::upset::{factor_exact_pullbacks, UpsetLattice, UpsetOptions};
use sixglue::{Exec, Poset, SubNerve};

/// Naturally labelled posets: `i < j` when the corresponding flag is set.
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

fn all_upsets(p: &Poset) -> UpsetLattice {
    let opts = UpsetOptions {
        include_empty: true,
        ..UpsetOptions::default()
    };
    UpsetLattice::with_options(Arc::new(p.clone()), &opts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upsets_form_a_distributive_lattice(p in poset_strategy(5)) {
        let l = all_upsets(&p);
        let order = l.poset();
        prop_assert!(order.is_lattice());
        prop_assert!(order.is_distributive());
        for x in 0..l.len() {
            for y in 0..l.len() {
                prop_assert_eq!(order.meet(x, y), Some(l.meet(x, y)));
                prop_assert_eq!(order.join(x, y), l.join(x, y));
                // Absorption.
                let m = l.meet(x, y);
                prop_assert_eq!(l.join(x, m), Some(x));
            }
        }
    }

    #[test]
    fn factorization_steps_are_exact(p in poset_strategy(6), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let l = all_upsets(&p);
        let (q, r) = (l.upset(a.index(l.len())), l.upset(b.index(l.len())));
        let (big, small) = (q.union(r), q.intersection(r));
        let steps = factor_exact_pullbacks(&p, big, small).unwrap();
        prop_assert_eq!(steps.len(), big.len() - small.len());
        let mut current = big;
        for s in &steps {
            prop_assert_eq!(s.before, current);
            prop_assert!(s.before.minimal_members(&p).contains(&s.removed));
            current = s.after;
        }
        prop_assert_eq!(current, small);
    }

    #[test]
    fn nerve_modes_agree(p in poset_strategy(7)) {
        let base = Arc::new(p);
        let seq = SubNerve::nerve_with(base.clone(), None, Exec::Sequential).unwrap();
        let par = SubNerve::nerve_with(base, None, Exec::Parallel).unwrap();
        prop_assert_eq!(seq.chains(), par.chains());
    }

    #[test]
    fn grid_enumeration_modes_agree(p in poset_strategy(4), m in 1usize..=2) {
        let c = Arc::new(FinCategory::from_poset(Arc::new(p)));
        let mc = MarkedCategory::unmarked(c);
        for d in [Discipline::Cart, Discipline::Comm] {
            let seq = enumerate_grid_simplices(&mc, m, d, 1_000_000, Exec::Sequential).unwrap();
            let par = enumerate_grid_simplices(&mc, m, d, 1_000_000, Exec::Parallel).unwrap();
            prop_assert_eq!(seq, par);
        }
    }

    #[test]
    fn poset_grids_are_at_most_mono_truncated(p in poset_strategy(4)) {
        // Every morphism of a poset is mono, so every commuting grid lies in Trunc(-1).
        let c = Arc::new(FinCategory::from_poset(Arc::new(p)));
        let mc = MarkedCategory::new(c.clone(), EdgeClass::all(&c), EdgeClass::all(&c));
        let cart: BTreeSet<_> = enumerate_grid_simplices(&mc, 1, Discipline::Cart, 100_000, Exec::Sequential).unwrap().into_iter().collect();
        let mono: BTreeSet<_> = enumerate_grid_simplices(&mc, 1, Discipline::Trunc(-1), 100_000, Exec::Sequential).unwrap().into_iter().collect();
        let comm: BTreeSet<_> = enumerate_grid_simplices(&mc, 1, Discipline::Comm, 100_000, Exec::Sequential).unwrap().into_iter().collect();
        prop_assert!(cart.is_subset(&mono));
        prop_assert_eq!(mono, comm);
    }

    #[test]
    fn epsilon_is_simplicial(picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..=3)) {
        let cart = Cart::new(2).unwrap();
        let order = cart.poset();
        // A chain of Cart^2 from the picks, made increasing by taking running joins.
        let mut chain: Vec<usize> = Vec::new();
        for pick in picks {
            let x = pick.index(cart.len());
            let next = match chain.last() {
                Some(&last) => order.join(last, x).unwrap(),
                None => x,
            };
            chain.push(next);
        }
        let m = chain.len();
        let grid = cart.epsilon_points(&chain).unwrap();
        for a in 0..m {
            prop_assert_eq!(grid[a * m + a], chain[a]);
        }
        for skip in 0..m {
            if m == 1 {
                break;
            }
            let face: Vec<usize> = chain.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            let expected: Vec<usize> = (0..m)
                .filter(|&a| a != skip)
                .flat_map(|a| (0..m).filter(|&b| b != skip).map(move |b| (a, b)))
                .map(|(a, b)| grid[a * m + b])
                .collect();
            prop_assert_eq!(cart.epsilon_points(&face).unwrap(), expected);
        }
    }

    #[test]
    fn poset_documents_round_trip(p in poset_strategy(7)) {
        let doc = PosetDoc::from_poset(&p);
        let text = serde_json::to_string(&doc).unwrap();
        let back: PosetDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_poset().unwrap(), p);
    }

    #[test]
    fn complex_documents_round_trip(p in poset_strategy(6), keep in proptest::collection::vec(any::<bool>(), 64)) {
        let base = Arc::new(p);
        let nerve = SubNerve::nerve(base.clone(), None).unwrap();
        let picked: Vec<Vec<usize>> = nerve.chains().iter().zip(keep.iter().cycle()).filter(|(_, &k)| k).map(|(c, _)| c.clone()).collect();
        let k = SubNerve::from_chains(base, &picked).unwrap();
        let back = SubNerveDoc::from_complex(&k).to_complex().unwrap();
        prop_assert_eq!(canonical_chains(&back), canonical_chains(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sweeps_are_deterministic_across_modes(seed in any::<u64>()) {
        prop_assert_eq!(
            factorization_laws(seed, 5, 6, Exec::Sequential).unwrap(),
            factorization_laws(seed, 5, 6, Exec::Parallel).unwrap()
        );
    }
}

#[test]
fn kart_sweep_is_deterministic_across_modes() {
    assert_eq!(
        kart_laws(1, 5, Exec::Sequential).unwrap(),
        kart_laws(1, 5, Exec::Parallel).unwrap()
    );
}

#[test]
fn inner_horns_are_filled_by_search() {
    for m in 2..=4 {
        let full = standard_shape(m, ShapeKind::Simplex).unwrap();
        for k in 1..m {
            let horn = standard_shape(m, ShapeKind::InnerHorn(k)).unwrap();
            let horn = SubNerve::from_chains(full.base().clone(), &horn.maximal_chains()).unwrap();
            let cert = search_certificate(&horn, &full, 100_000).unwrap();
            cert.validate().unwrap();
            assert_eq!(cert.len(), 1, "Λ^{m}_{k}");
        }
    }
}
