//! The twelve acceptance criteria, one line each. Runs without the test
//! harness so the lines are always printed; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use sixglue::anodyne::{search_certificate, CertError, HornMove};
use sixglue::cartesian::{kart_extension, Cart};
use sixglue::compactification::{build_cpt, certify_box, enumerate_kpt, KPT_CAP};
use sixglue::corpus::{broken_instances, good_instances, GluingInstance};
use sixglue::fincat::{check_cofiltered, truncation_level, CofilteredViolation, ComposableChain, FinCategory, TruncationLevel};
use sixglue::gluing::{extend_cart, extend_comm, extend_full, GluingError, GridFunctorData};
use sixglue::grid::{enumerate_grid_simplices, tiling_level, Discipline, GridSimplex, TRUNCATION_CAP};
use sixglue::laws::{
    cartesianization_laws, factorization_laws, kart_laws, monotone_grids, overcategory_laws, poset_grid, small_lattices,
    structure_map_laws, truncation_laws, DEFAULT_SEED,
};
use sixglue::nerve::{standard_shape, ShapeKind, SubNerve};
use sixglue::{Exec, Poset, Report};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn from_report(report: Report) -> Verdict {
    let total: usize = report.checks.iter().map(|c| c.checked).sum();
    if report.passed() {
        Ok(format!("{total} checks"))
    } else {
        Err(report
            .to_string()
            .lines()
            .filter(|l| l.starts_with("FAIL"))
            .collect::<Vec<_>>()
            .join("; "))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("{what} took {spent:?}, limit {limit:?}"))?;
    Ok(spent)
}

fn certificates() -> Verdict {
    let start = Instant::now();
    let mut moves = Vec::new();
    for n in 1..=3 {
        let cert = certify_box(n).map_err(|e| format!("box n={n}: {e}"))?;
        cert.validate().map_err(|e| format!("box n={n} does not re-validate: {e}"))?;
        moves.push(cert.len());
        if n == 1 {
            let cpt = Arc::new(build_cpt(1));
            let chain: Vec<usize> = ["a00", "a01", "a11"].iter().map(|s| cpt.index_of(s).unwrap()).collect();
            ensure(cert.moves == vec![HornMove::new(chain, 1)], || {
                format!("box n=1 moves {:?}", cert.moves)
            })?;
        }
    }
    let box_time = within(start, Duration::from_secs(10), "box certificates")?;
    let start = Instant::now();
    for n in 1..=2 {
        let cert = Cart::new(n)
            .unwrap()
            .certify_boxplus_cart()
            .map_err(|e| format!("boxplus n={n}: {e}"))?;
        cert.validate()
            .map_err(|e| format!("boxplus n={n} does not re-validate: {e}"))?;
        moves.push(cert.len());
    }
    let boxplus_time = within(start, Duration::from_secs(60), "boxplus certificates")?;
    Ok(format!("moves {moves:?}, box {box_time:.2?}, boxplus {boxplus_time:.2?}"))
}

fn negative_control() -> Verdict {
    let full = standard_shape(2, ShapeKind::Simplex).unwrap();
    let horn = standard_shape(2, ShapeKind::Horn(0)).unwrap();
    let horn = SubNerve::from_chains(full.base().clone(), &horn.maximal_chains()).unwrap();
    match search_certificate(&horn, &full, 1_000_000) {
        Err(CertError::NotFound { visited }) => Ok(format!("move space exhausted after {visited} states")),
        other => Err(format!("{other:?}")),
    }
}

/// Non-empty up-sets of `[n] x [n]` by filtering all subsets.
fn upset_count_oracle(n: usize) -> usize {
    let w = n + 1;
    let cells = w * w;
    (1u64..1 << cells)
        .filter(|&mask| {
            (0..cells).all(|k| {
                let (r, c) = (k / w, k % w);
                mask >> k & 1 == 0 || ((r + 1 == w || mask >> (k + w) & 1 == 1) && (c + 1 == w || mask >> (k + 1) & 1 == 1))
            })
        })
        .count()
}

fn cart_counts() -> Verdict {
    let one = Cart::new(1).unwrap();
    let names: BTreeSet<&str> = one.poset().names().iter().map(String::as_str).collect();
    let expected: BTreeSet<&str> = ["b00", "b01^b10", "b01", "b10", "b11"].into();
    ensure(names == expected, || format!("Cart^1 nodes {names:?}"))?;
    let covers: BTreeSet<(String, String)> = one.poset().cover_names().into_iter().collect();
    let expected: BTreeSet<(String, String)> = [
        ("b00", "b01^b10"),
        ("b01^b10", "b01"),
        ("b01^b10", "b10"),
        ("b01", "b11"),
        ("b10", "b11"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    ensure(covers == expected, || format!("Cart^1 edges {covers:?}"))?;
    let mut sizes = Vec::new();
    for n in 1..=3 {
        let (got, oracle) = (Cart::new(n).unwrap().len(), upset_count_oracle(n));
        ensure(got == oracle, || format!("|Cart^{n}| = {got}, oracle {oracle}"))?;
        sizes.push(got);
    }
    Ok(format!("|Cart^1..3| = {sizes:?}, Hasse diagram of Cart^1 matches"))
}

/// Meet by brute force over lower bounds.
fn meet_oracle(p: &Poset, items: &[usize]) -> Option<usize> {
    let lower: Vec<usize> = (0..p.len()).filter(|&z| items.iter().all(|&i| p.leq(z, i))).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&z| p.leq(z, m)))
}

fn kart_behaviour() -> Verdict {
    let lattices = small_lattices(8);
    let counts: Vec<usize> = (1..=8).map(|k| lattices.iter().filter(|l| l.len() == k).count()).collect();
    ensure(counts == [1, 1, 1, 2, 5, 15, 53, 222], || {
        format!("lattice counts {counts:?}")
    })?;
    let laws = from_report(kart_laws(2, 8, Exec::default()).map_err(|e| e.to_string())?)?;
    // Independent check of the limit values on [1] x [1].
    let cart = Cart::new(1).unwrap();
    let mut compared = 0;
    for l in &lattices {
        let c = FinCategory::from_poset(Arc::new(l.clone()));
        for values in monotone_grids(l, 1) {
            let tau: GridSimplex = poset_grid(&c, 1, &values);
            let kart = kart_extension(&c, &cart, &tau).map_err(|e| e.to_string())?;
            for x in 0..cart.len() {
                let members: Vec<usize> = cart.upset(x).members().iter().map(|&m| values[m]).collect();
                let expected = meet_oracle(l, &members);
                ensure(expected == Some(kart.values[x]), || format!("grid {values:?}, up-set {x}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!(
        "{} lattices; {laws}; {compared} limit values match the brute-force meet",
        lattices.len()
    ))
}

fn truncation() -> Verdict {
    let start = Instant::now();
    let report = truncation_laws(3, Exec::default()).map_err(|e| e.to_string())?;
    let summary = from_report(report)?;
    let spent = within(start, Duration::from_secs(300), "truncation sweep")?;
    Ok(format!("{summary} in {spent:.2?}"))
}

fn functor_data(inst: &GluingInstance, discipline: Discipline) -> Result<GridFunctorData, String> {
    GridFunctorData::from_functor(&inst.marked, discipline, inst.target.clone(), &inst.functor).map_err(|e| e.to_string())
}

/// Unit squares of commuting grid edges, by tiling level.
fn level_census(inst: &GluingInstance) -> Result<Vec<(i32, usize)>, String> {
    let edges =
        enumerate_grid_simplices(&inst.marked, 1, Discipline::Comm, 1_000_000, Exec::default()).map_err(|e| e.to_string())?;
    let mut census = std::collections::BTreeMap::new();
    for e in edges {
        if let Ok(TruncationLevel::Level(l)) = tiling_level(&inst.marked, &e.unit_square(0, 0)) {
            *census.entry(l).or_insert(0) += 1;
        }
    }
    Ok(census.into_iter().collect())
}

fn gluing() -> Verdict {
    let good = good_instances();
    ensure(good.len() >= 5, || format!("only {} curated instances", good.len()))?;
    for required in ["square-coordinates", "finset-injections"] {
        ensure(good.iter().any(|i| i.name == required), || {
            format!("{required} missing from the corpus")
        })?;
    }
    for inst in &good {
        let name = inst.name;
        let comm = functor_data(inst, Discipline::Comm)?;
        let (g1, r1) = extend_comm(&inst.marked, &comm).map_err(|e| format!("{name} comm: {e}"))?;
        from_report(r1).map_err(|e| format!("{name} comm: {e}"))?;
        let cart = functor_data(inst, Discipline::Cart)?;
        let (_, r2) = extend_cart(&inst.marked, &cart, inst.i_max).map_err(|e| format!("{name} cart: {e}"))?;
        from_report(r2).map_err(|e| format!("{name} cart: {e}"))?;
        let (g3, r3) = extend_full(&inst.marked, &cart, inst.i_max).map_err(|e| format!("{name} full: {e}"))?;
        from_report(r3).map_err(|e| format!("{name} full: {e}"))?;
        ensure(g1 == inst.functor && g3 == inst.functor, || {
            format!("{name}: extension differs from the source functor")
        })?;
    }
    let finset = good.iter().find(|i| i.name == "finset-injections").unwrap();
    let census = level_census(finset)?;
    ensure(census.iter().any(|&(l, k)| l == -1 && k > 0), || {
        format!("no (-1)-truncated gap in finset-injections: {census:?}")
    })?;

    let broken = broken_instances();
    ensure(broken.len() >= 2, || "fewer than two broken instances".into())?;
    for b in &broken {
        let inst = &b.instance;
        let g = functor_data(inst, Discipline::Cart)?;
        match extend_full(&inst.marked, &g, inst.i_max) {
            Err(GluingError::HypothesisFailed { name, witness }) if name == b.failing => {
                ensure(witness_is_genuine(inst, b.failing, &witness), || {
                    format!("{}: witness `{witness}` does not hold up", inst.name)
                })?;
            }
            other => return Err(format!("{}: expected {} failure, got {other:?}", inst.name, b.failing)),
        }
    }
    Ok(format!(
        "{} instances green (finset gap census {census:?}); {} broken instances refused",
        good.len(),
        broken.len()
    ))
}

/// Re-derives the named failure from scratch and checks the witness names it.
fn witness_is_genuine(inst: &GluingInstance, failing: &str, witness: &str) -> bool {
    let mc = &inst.marked;
    let c = &*mc.category;
    match failing {
        "factorization" => (0..c.num_morphisms()).any(|f| {
            let factors = (0..c.num_morphisms()).any(|e2| {
                mc.e2.contains(e2)
                    && c.source(e2) == c.source(f)
                    && c.maps_out_of(c.target(e2))
                        .any(|e1| mc.e1.contains(e1) && c.compose(e1, e2) == Some(f))
            });
            !factors && witness.contains(c.name(f))
        }),
        "truncation" => mc.both().members().into_iter().any(|f| {
            let level = truncation_level(c, &f, TRUNCATION_CAP).unwrap();
            !level.at_most(inst.i_max) && witness.contains(c.name(f))
        }),
        "admissibility" => {
            // Some pullback of a class member along an arbitrary map leaves the class.
            [&mc.e1, &mc.e2].iter().any(|e| {
                e.members().into_iter().any(|f| {
                    c.maps_into(c.target(f)).any(|g| {
                        let cones = c.pullback_cones(f, g);
                        !cones.is_empty() && cones.iter().all(|cone| !e.contains(cone.second))
                    })
                })
            }) && !witness.is_empty()
        }
        _ => false,
    }
}

fn kpt_behaviour() -> Verdict {
    let mut checked = 0;
    for inst in good_instances() {
        let c = &*inst.marked.category;
        let mut chains: Vec<ComposableChain> = (0..c.num_morphisms())
            .map(|f| ComposableChain::from_edges(c, &[f]).unwrap())
            .collect();
        for f in 0..c.num_morphisms() {
            for g in c.maps_out_of(c.target(f)) {
                chains.push(ComposableChain::from_edges(c, &[f, g]).unwrap());
            }
        }
        for tau in chains {
            let kpt = enumerate_kpt(&inst.marked, &tau, KPT_CAP).map_err(|e| format!("{}: {e}", inst.name))?;
            ensure(!kpt.objects.is_empty(), || {
                format!("{}: empty Kpt over {:?}", inst.name, tau.edges)
            })?;
            if let Some(v) = check_cofiltered(&kpt.category) {
                return Err(format!("{}: Kpt over {:?} is not cofiltered: {v:?}", inst.name, tau.edges));
            }
            checked += 1;
        }
    }
    // Without factorizations the category of compactifications is empty, hence not cofiltered.
    let dropped = broken_instances()
        .into_iter()
        .find(|b| b.failing == "factorization")
        .unwrap()
        .instance;
    let c = &*dropped.marked.category;
    let counterexample = (0..c.num_morphisms()).find_map(|f| {
        let kpt = enumerate_kpt(&dropped.marked, &ComposableChain::from_edges(c, &[f]).unwrap(), KPT_CAP).ok()?;
        check_cofiltered(&kpt.category).map(|v| (c.name(f).to_string(), v))
    });
    match counterexample {
        Some((f, CofilteredViolation::Empty)) => Ok(format!(
            "{checked} simplices cofiltered; without factorizations Kpt({f}) is empty"
        )),
        other => Err(format!("hypothesis dropped, expected a counterexample, got {other:?}")),
    }
}

fn discipline_monotonicity() -> Verdict {
    let mut total = 0;
    for inst in good_instances() {
        for m in 1..=2 {
            let set = |d: Discipline| -> Result<BTreeSet<GridSimplex>, String> {
                Ok(enumerate_grid_simplices(&inst.marked, m, d, 2_000_000, Exec::default())
                    .map_err(|e| format!("{}: {e}", inst.name))?
                    .into_iter()
                    .collect())
            };
            let cart = set(Discipline::Cart)?;
            let comm = set(Discipline::Comm)?;
            ensure(cart == set(Discipline::Trunc(-2))?, || {
                format!("{} m={m}: Cart differs from Trunc(-2)", inst.name)
            })?;
            let mut previous = cart;
            for i in -1..=TRUNCATION_CAP {
                let next = set(Discipline::Trunc(i))?;
                ensure(previous.is_subset(&next), || {
                    format!("{} m={m}: Trunc({}) not inside Trunc({i})", inst.name, i - 1)
                })?;
                ensure(next.is_subset(&comm), || {
                    format!("{} m={m}: Trunc({i}) not inside Comm", inst.name)
                })?;
                previous = next;
            }
            ensure(previous == comm, || {
                format!("{} m={m}: the union of the Trunc(i) misses commuting grids", inst.name)
            })?;
            total += comm.len();
        }
    }
    Ok(format!("{total} commuting grid simplices stratified"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("inner-anodyne certificates", certificates),
        ("negative control", negative_control),
        ("Cart counts", cart_counts),
        ("structure-map laws", || {
            from_report(structure_map_laws(4, Exec::default()).map_err(|e| e.to_string())?)
        }),
        ("lambda/mu identities and coverage", || {
            from_report(cartesianization_laws(3, Exec::default()).map_err(|e| e.to_string())?)
        }),
        ("exact-pullback factorization", || {
            from_report(factorization_laws(DEFAULT_SEED, 100, 8, Exec::default()).map_err(|e| e.to_string())?)
        }),
        ("Kan-extension behaviour", kart_behaviour),
        ("truncation in finite sets", truncation),
        ("overcategory limits", || {
            from_report(overcategory_laws(6, Exec::default()).map_err(|e| e.to_string())?)
        }),
        ("gluing pipeline", gluing),
        ("Kpt behaviour", kpt_behaviour),
        ("discipline monotonicity", discipline_monotonicity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let spent = start.elapsed();
        match verdict {
            Ok(detail) => println!("acceptance {:>2} pass {name} [{spent:.1?}]: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} FAIL {name} [{spent:.1?}]: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
