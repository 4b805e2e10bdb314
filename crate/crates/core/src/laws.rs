//! Exhaustive and seeded checks of the identities the constructions rely on.
//! Every suite returns a [`Report`] with one entry per identity.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::anodyne::{search_certificate, CertError};
use crate::cartesian::{kart_extension_in_order, Cart, CartError};
use crate::compactification::certify_box;
use crate::fincat::{
    check_overcategory_limits, find_missing_pullback, gap_morphism, truncation_level, CatError, FinCategory, FinSetSkeleton,
    Function, PullbackCategory, Square, TruncationLevel,
};
use crate::grid::GridSimplex;
use crate::nerve::{standard_shape, NerveError, ShapeKind, SubNerve};
use crate::par::Exec;
use crate::poset::{ExactSquare, Poset, PosetError};
use crate::report::{CheckOutcome, Report};
use crate::upset::{factor_exact_pullbacks, UpsetLattice, UpsetOptions};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Cart(#[from] CartError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    StructureMaps,
    Cartesianization,
    Factorization,
    Truncation,
    Overcategory,
    Kart,
    Certificates,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::StructureMaps,
        Suite::Cartesianization,
        Suite::Factorization,
        Suite::Truncation,
        Suite::Overcategory,
        Suite::Kart,
        Suite::Certificates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::StructureMaps => "structure-maps",
            Suite::Cartesianization => "cartesianization",
            Suite::Factorization => "factorization",
            Suite::Truncation => "truncation",
            Suite::Overcategory => "overcategory",
            Suite::Kart => "kart",
            Suite::Certificates => "certificates",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LawError;

    fn from_str(s: &str) -> Result<Self, LawError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| LawError::UnknownSuite(s.to_string()))
    }
}

/// Options shared by the suites. `n` is an upper bound; each suite has its own default.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub max_lattice: usize,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: None,
            seed: DEFAULT_SEED,
            samples: 100,
            max_lattice: 8,
            exec: Exec::default(),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Report, LawError> {
    match suite {
        Suite::StructureMaps => structure_map_laws(cfg.n.unwrap_or(4), cfg.exec),
        Suite::Cartesianization => cartesianization_laws(cfg.n.unwrap_or(3), cfg.exec),
        Suite::Factorization => factorization_laws(cfg.seed, cfg.samples, 8, cfg.exec),
        Suite::Truncation => truncation_laws(cfg.n.unwrap_or(3), cfg.exec),
        Suite::Overcategory => overcategory_laws(6, cfg.exec),
        Suite::Kart => kart_laws(cfg.n.unwrap_or(2), cfg.max_lattice, cfg.exec),
        Suite::Certificates => certificate_laws(cfg.n.unwrap_or(3)),
    }
}

fn merge_all(names: &[&str], batches: Vec<Vec<CheckOutcome>>) -> Report {
    let mut checks: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
    for batch in batches {
        for (total, part) in checks.iter_mut().zip(batch) {
            total.merge(part);
        }
    }
    Report { checks }
}

/// `π ∘ ς = id` and `ξ <= ς <= η` for every `n <= max_n`.
pub fn structure_map_laws(max_n: usize, exec: Exec) -> Result<Report, LawError> {
    let names = ["pi-after-sigma", "xi-below-sigma", "sigma-below-eta"];
    let batches = exec.range_map(max_n + 1, |n| -> Result<Vec<CheckOutcome>, LawError> {
        let cart = Cart::new(n)?;
        let le = |a, b| cart.poset().leq(a, b);
        let mut out: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
        for p in 0..=n {
            for q in 0..=n {
                let s = cart.sigma(p, q)?;
                let (xi, eta) = (cart.xi(p, q)?, cart.eta(p, q)?);
                let back = cart.pi(s)?;
                out[0].record(back == (p, q), || format!("n={n}: pi(sigma({p},{q})) = {back:?}"));
                out[1].record(le(xi, s), || format!("n={n}: xi({p},{q}) is not below sigma"));
                out[2].record(le(s, eta), || format!("n={n}: sigma({p},{q}) is not below eta"));
            }
        }
        Ok(out)
    });
    Ok(merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?))
}

/// The identities behind `ε`, for every `n <= max_n`:
/// `Λ(x,x) = x = μ(x,x)`, the projections of `Λ` and `μ` for `x <= y`, the meet
/// `Λ_0(x,y) ∧ μ_0(x,y) = x` on the intervals `ξ(p,n) // η(p,n)` together
/// with the pullback square it gives, coverage of `Cart^n` by those
/// intervals, and pullback unit squares of `ε` on the edges of `⊞^n_cart`.
///
/// Longer chains are left out: in `Cart^1` the chain `b00 <= b01^b10 <= b01`
/// lies in `⊞^1_cart` and its `ε` has a unit square that is not a pullback.
pub fn cartesianization_laws(max_n: usize, exec: Exec) -> Result<Report, LawError> {
    let names = [
        "lambda-mu-fix-diagonal",
        "lambda-projection",
        "mu-projection",
        "wedge-recovers-source",
        "cart-square-is-pullback",
        "interval-coverage",
        "epsilon-cart-squares",
    ];
    let batches = exec.range_map(max_n + 1, |n| cartesianization_at(n, &names));
    Ok(merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?))
}

fn cartesianization_at(n: usize, names: &[&str]) -> Result<Vec<CheckOutcome>, LawError> {
    let cart = Cart::new(n)?;
    let poset = cart.poset().clone();
    let name = |x: usize| poset.name(x).to_string();
    let mut out: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
    let len = cart.len();
    for x in 0..len {
        for p in 0..=n {
            let (l, m) = (cart.lambda(p, x, x)?, cart.mu(p, x, x)?);
            out[0].record(l == x && m == x, || format!("n={n}, p={p}: {} is not fixed", name(x)));
        }
        for y in (0..len).filter(|&y| poset.leq(x, y)) {
            let (x1, x2) = cart.pi(x)?;
            let (y1, y2) = cart.pi(y)?;
            for p in 0..=n {
                let l = cart.pi(cart.lambda(p, x, y)?)?;
                out[1].record(l == (y1, x2), || {
                    format!("n={n}: pi(Lambda_{p}({}, {})) = {l:?}", name(x), name(y))
                });
                let m = cart.pi(cart.mu(p, x, y)?)?;
                out[2].record(m == (x1, y2), || {
                    format!("n={n}: pi(mu_{p}({}, {})) = {m:?}", name(x), name(y))
                });
            }
        }
    }
    let mut covered = vec![false; len];
    for p in 0..=n {
        let members = cart.boxplus_piece(p, n)?;
        for &x in &members {
            covered[x] = true;
            for &y in members.iter().filter(|&&y| poset.leq(x, y)) {
                let (l, m) = (cart.lambda(0, x, y)?, cart.mu(0, x, y)?);
                let w = cart.wedge(l, m)?;
                out[3].record(w == x, || {
                    format!("n={n}, p={p}: meet for {} <= {} is {}", name(x), name(y), name(w))
                });
                let sq = ExactSquare::new(x, l, m, y);
                let ok = poset.is_square(&sq) && poset.is_pullback(&sq);
                out[4].record(ok, || {
                    format!("n={n}: square over {} <= {} is not a pullback", name(x), name(y))
                });
            }
        }
    }
    for x in 0..len {
        out[5].record(covered[x], || format!("n={n}: {} lies in no interval", name(x)));
    }
    let boxplus = cart.boxplus(crate::cartesian::BoxplusPart::Cart)?;
    for chain in boxplus.chains().iter().filter(|c| c.len() == 2) {
        let pts = cart.epsilon_points(chain)?;
        let w = chain.len();
        for a in 0..w - 1 {
            for b in 0..w - 1 {
                let at = |i: usize, j: usize| pts[i * w + j];
                let sq = ExactSquare::new(at(a, b), at(a, b + 1), at(a + 1, b), at(a + 1, b + 1));
                let ok = poset.is_square(&sq) && poset.is_pullback(&sq);
                out[6].record(ok, || {
                    let names: Vec<String> = chain.iter().map(|&x| name(x)).collect();
                    format!(
                        "n={n}: unit square ({a},{b}) of epsilon({}) is not a pullback",
                        names.join(" <= ")
                    )
                });
            }
        }
    }
    Ok(out)
}

/// A random naturally labelled poset: `i < j` is drawn with probability `density`.
pub fn random_poset(rng: &mut impl Rng, size: usize, density: f64) -> Poset {
    let mut related = vec![vec![false; size]; size];
    for i in 0..size {
        for j in i + 1..size {
            related[i][j] = rng.gen_bool(density);
        }
    }
    let names = (0..size).map(|i| format!("v{i}")).collect();
    Poset::from_fn(names, |a, b| a == b || related[a][b]).expect("labels increase along relations")
}

/// For `samples` seeded random posets with at most `max_size` elements and
/// every pair of up-sets `Q ⊇ Q'`: each factorization step is an exact square
/// in the lattice of all up-sets, and there are `|Q - Q'|` steps.
pub fn factorization_laws(seed: u64, samples: usize, max_size: usize, exec: Exec) -> Result<Report, LawError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let posets: Vec<Poset> = (0..samples)
        .map(|_| {
            let size = rng.gen_range(1..=max_size);
            let density = rng.gen_range(0.0..0.7);
            random_poset(&mut rng, size, density)
        })
        .collect();
    let names = ["step-is-exact", "step-count"];
    let batches = exec.map(&posets, |base| -> Result<Vec<CheckOutcome>, LawError> {
        let opts = UpsetOptions {
            include_empty: true,
            ..UpsetOptions::default()
        };
        let lattice = UpsetLattice::with_options(Arc::new(base.clone()), &opts)?;
        let mut out: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
        for &q in lattice.upsets() {
            for &target in lattice.upsets().iter().filter(|t| q.is_superset(**t)) {
                let steps = factor_exact_pullbacks(base, q, target)?;
                let expected = q.len() - target.len();
                out[1].record(steps.len() == expected, || {
                    format!(
                        "{} to {}: {} steps, expected {expected}",
                        q.describe(base),
                        target.describe(base),
                        steps.len()
                    )
                });
                for s in &steps {
                    let [a, b, c, d] = s.corners().map(|u| lattice.element_of(u).expect("all up-sets are present"));
                    let ok = lattice.poset().is_exact_square(&ExactSquare::new(a, b, c, d))?;
                    out[0].record(ok, || {
                        format!("removing {} from {}", base.name(s.removed), s.before.describe(base))
                    });
                }
            }
        }
        Ok(out)
    });
    Ok(merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?))
}

fn level_of(f: &Function) -> Result<i32, LawError> {
    match truncation_level(&FinSetSkeleton, f, 4)? {
        TruncationLevel::Level(l) => Ok(l),
        TruncationLevel::Unbounded => Ok(i32::MAX),
    }
}

/// Finite sets of size at most `max_size`: the truncation level of every
/// function (`-2` bijective, `-1` injective, `0` otherwise), and the gap
/// decomposition. Given `q: w' -> w` and `h': y -> w'`, `p': z -> w'`, the
/// gap from `x = z ×_{w'} y` to `z ×_w y` is one level more truncated than `q`.
pub fn truncation_laws(max_size: usize, exec: Exec) -> Result<Report, LawError> {
    let mut levels = CheckOutcome::new("function-levels");
    for a in 0..=max_size {
        for b in 0..=max_size {
            for f in Function::all(a, b) {
                let expected = if f.is_injective() && f.is_surjective() {
                    -2
                } else if f.is_injective() {
                    -1
                } else {
                    0
                };
                let got = level_of(&f)?;
                levels.record(got == expected, || format!("{a}->{b}{:?} has level {got}", f.values));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..=max_size).flat_map(|w1| (0..=max_size).map(move |w| (w1, w))).collect();
    let names = ["gap-below-base", "injective-base-gives-iso"];
    let batches = exec.map(&pairs, |&(w1, w)| -> Result<Vec<CheckOutcome>, LawError> {
        let c = FinSetSkeleton;
        let mut out: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
        let legs: Vec<Function> = (0..=max_size).flat_map(|s| Function::all(s, w1)).collect();
        for q in Function::all(w1, w) {
            let q_level = level_of(&q)?;
            for h1 in &legs {
                for p1 in &legs {
                    let inner = c.pullback(p1, h1).expect("same codomain");
                    let after = |f: &Function| c.after(&q, f).expect("composable");
                    let sq = Square {
                        top: inner.first.clone(),
                        left: inner.second.clone(),
                        right: after(p1),
                        bottom: after(h1),
                    };
                    let (_, gap) = gap_morphism(&c, &sq)?;
                    let gap_level = level_of(&gap)?;
                    let witness = || {
                        format!(
                            "q = {w1}->{w}{:?}, p' = {:?}, h' = {:?}: gap level {gap_level}",
                            q.values, p1.values, h1.values
                        )
                    };
                    out[0].record(gap_level <= (q_level - 1).max(-2), witness);
                    if q_level == -1 {
                        out[1].record(gap_level == -2, witness);
                    }
                }
            }
        }
        Ok(out)
    });
    let mut report = merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?);
    report.checks.insert(0, levels);
    Ok(report)
}

/// Naturally labelled posets on `m` elements: element `i` gets a down-closed
/// set of predecessors among `0..i`. Returned as strict-order rows `below[i]`.
fn labelled_posets(m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut below: Vec<u32> = Vec::with_capacity(m);
    fn go(m: usize, below: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = below.len();
        if i == m {
            out.push(below.clone());
            return;
        }
        for set in 0u32..(1 << i) {
            let closed = (0..i).filter(|&j| set >> j & 1 == 1).all(|j| below[j] & !set == 0);
            if closed {
                below.push(set);
                go(m, below, out);
                below.pop();
            }
        }
    }
    go(m, &mut below, &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out
}

/// Relation bits of `below` relabelled by `perm`; the least over all `perm` is canonical.
fn relabelled(below: &[u32], perm: &[usize]) -> u64 {
    let m = below.len();
    let mut code = 0u64;
    for i in 0..m {
        for j in 0..m {
            if below[i] >> j & 1 == 1 {
                code |= 1 << (perm[i] * m + perm[j]);
            }
        }
    }
    code
}

/// One lattice per isomorphism class with `size <= max_size` elements
/// (bounded below and above, so at most 6 elements between).
pub fn small_lattices(max_size: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    if max_size >= 1 {
        out.push(Poset::chain(0));
    }
    for m in 0..=max_size.saturating_sub(2).min(6) {
        let perms = permutations(m);
        let mut seen = HashSet::new();
        for below in labelled_posets(m) {
            let canonical = perms
                .iter()
                .map(|p| relabelled(&below, p))
                .min()
                .expect("at least one permutation");
            if !seen.insert(canonical) {
                continue;
            }
            let mut names = vec!["bot".to_string()];
            names.extend((0..m).map(|i| format!("e{i}")));
            names.push("top".to_string());
            let top = m + 1;
            let p = Poset::from_fn(names, |a, b| {
                a == 0 || b == top || a == b || (a >= 1 && b >= 1 && b <= m && below[b - 1] >> (a - 1) & 1 == 1)
            })
            .expect("bounded poset");
            if p.is_lattice() {
                out.push(p);
            }
        }
    }
    out
}

/// `a < c`, `b < c`, `b < d`: the cospan `a -> c <- b` has no pullback.
pub fn n_poset() -> Poset {
    Poset::new(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("b", "d")]).expect("the N poset")
}

/// Overcategories of every lattice with at most `max_size` elements have
/// a terminal object and pullbacks preserved by the projection, and the
/// check reports the missing pullback of the N poset.
pub fn overcategory_laws(max_size: usize, exec: Exec) -> Result<Report, LawError> {
    let lattices = small_lattices(max_size);
    let names = ["lattice-overcategories"];
    let batches = exec.map(&lattices, |l| -> Result<Vec<CheckOutcome>, LawError> {
        let c = FinCategory::from_poset(Arc::new(l.clone()));
        let mut out = CheckOutcome::new(names[0]);
        for x in 0..c.num_objects() {
            let result = check_overcategory_limits(&c, x, None)?;
            out.record(result.passed(), || {
                format!("over {} in {:?}: {:?}", l.name(x), l.cover_names(), result.failures)
            });
        }
        Ok(vec![out])
    });
    let mut report = merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?);
    let c = FinCategory::from_poset(Arc::new(n_poset()));
    let mut refuted = CheckOutcome::new("n-poset-refuted");
    for x in 0..c.num_objects() {
        let verdict = check_overcategory_limits(&c, x, None);
        let witness_ok = match (&verdict, find_missing_pullback(&c)) {
            (Err(CatError::HypothesisFailed { name, witness }), Some((f, g))) => {
                name == "pullbacks"
                    && witness.contains(c.name(f))
                    && witness.contains(c.name(g))
                    && c.pullback_cones(f, g).is_empty()
            }
            _ => false,
        };
        refuted.record(witness_ok, || format!("over {}: {verdict:?}", c.object_name(x)));
    }
    report.checks.push(refuted);
    Ok(report)
}

/// Monotone maps `[n] x [n] -> poset` as row-major value lists.
pub fn monotone_grids(poset: &Poset, n: usize) -> Vec<Vec<usize>> {
    let w = n + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(w * w);
    fn go(p: &Poset, w: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == w * w {
            out.push(cur.clone());
            return;
        }
        let (r, c) = (k / w, k % w);
        for v in 0..p.len() {
            let left = c == 0 || p.leq(cur[k - 1], v);
            let up = r == 0 || p.leq(cur[k - w], v);
            if left && up {
                cur.push(v);
                go(p, w, cur, out);
                cur.pop();
            }
        }
    }
    go(poset, w, &mut cur, &mut out);
    out
}

/// The grid simplex of a monotone assignment in a poset category.
pub fn poset_grid(c: &FinCategory, n: usize, values: &[usize]) -> GridSimplex {
    let w = n + 1;
    let arrow = |a: usize, b: usize| c.hom(values[a], values[b])[0];
    GridSimplex {
        rows: n,
        cols: n,
        objects: values.to_vec(),
        horizontal: (0..w)
            .flat_map(|r| (0..n).map(move |q| (r, q)))
            .map(|(r, q)| arrow(r * w + q, r * w + q + 1))
            .collect(),
        vertical: (0..n)
            .flat_map(|r| (0..w).map(move |q| (r, q)))
            .map(|(r, q)| arrow(r * w + q, (r + 1) * w + q))
            .collect(),
        reversed: [false; 2],
    }
}

/// Cartesianizations of every grid `[n] x [n] -> L`, `n <= max_n`, for every
/// lattice `L` with at most `max_lattice` elements: restriction along `ς`
/// gives back the grid, exact squares go to pullbacks, and the result does
/// not depend on the order in which grid points are visited.
pub fn kart_laws(max_n: usize, max_lattice: usize, exec: Exec) -> Result<Report, LawError> {
    let carts: Vec<Cart> = (0..=max_n).map(Cart::new).collect::<Result<_, _>>()?;
    let squares: Vec<Vec<ExactSquare>> = carts.iter().map(Cart::nondegenerate_exact_squares).collect();
    let lattices = small_lattices(max_lattice);
    let names = ["restriction", "exact-squares-to-pullbacks", "order-independence"];
    let batches = exec.map(&lattices, |l| -> Result<Vec<CheckOutcome>, LawError> {
        let c = FinCategory::from_poset(Arc::new(l.clone()));
        let mut out: Vec<CheckOutcome> = names.iter().map(|n| CheckOutcome::new(n)).collect();
        for (cart, squares) in carts.iter().zip(&squares) {
            let n = cart.n();
            let forward: Vec<usize> = (0..(n + 1) * (n + 1)).collect();
            let reversed: Vec<usize> = forward.iter().rev().copied().collect();
            for values in monotone_grids(l, n) {
                let tau = poset_grid(&c, n, &values);
                let describe = || {
                    format!(
                        "n={n}, grid {:?} in {:?}",
                        values.iter().map(|&v| l.name(v)).collect::<Vec<_>>(),
                        l.cover_names()
                    )
                };
                // The sweep is already split across lattices.
                let kart = kart_extension_in_order(&c, cart, &tau, &forward, Exec::Sequential)?;
                out[0].record(kart.restrict_to_grid(cart) == values, describe);
                let failure = kart.exact_square_failure(&c, cart, &tau, squares)?;
                out[1].record(failure.is_none(), || format!("{}: {failure:?}", describe()));
                let other = kart_extension_in_order(&c, cart, &tau, &reversed, Exec::Sequential)?;
                out[2].record(other == kart, describe);
            }
        }
        Ok(out)
    });
    Ok(merge_all(&names, batches.into_iter().collect::<Result<_, _>>()?))
}

/// Certificates for `□^n ⊆ Cpt^n` and `⊞^n_cart ⊆ N(Cart^n)`, re-validated,
/// and the outer horn `Λ^2_0 ⊆ Δ^2` refuted by exhausting the search.
pub fn certificate_laws(max_n: usize) -> Result<Report, LawError> {
    let mut boxes = CheckOutcome::new("box-in-cpt");
    for n in 1..=max_n {
        let cert = certify_box(n);
        let ok = cert
            .as_ref()
            .map(|c| c.validate().is_ok() && (n != 1 || c.len() == 1))
            .unwrap_or(false);
        boxes.record(ok, || format!("n={n}: {:?}", cert.map(|c| c.len())));
    }
    let mut boxplus = CheckOutcome::new("boxplus-in-cart");
    for n in 1..=max_n.min(2) {
        let cert = Cart::new(n)?.certify_boxplus_cart();
        let ok = cert.as_ref().map(|c| c.validate().is_ok()).unwrap_or(false);
        boxplus.record(ok, || format!("n={n}: {:?}", cert.map(|c| c.len())));
    }
    let mut outer = CheckOutcome::new("outer-horn-refuted");
    let full = standard_shape(2, ShapeKind::Simplex)?;
    let horn = standard_shape(2, ShapeKind::Horn(0))?;
    let horn = SubNerve::from_chains(full.base().clone(), &horn.maximal_chains())?;
    let verdict = search_certificate(&horn, &full, 10_000);
    outer.record(matches!(verdict, Err(CertError::NotFound { .. })), || format!("{verdict:?}"));
    Ok(Report {
        checks: vec![boxes, boxplus, outer],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn lattice_counts_up_to_six() {
        let sizes: Vec<usize> = small_lattices(6).iter().map(Poset::len).collect();
        let count = |k| sizes.iter().filter(|&&s| s == k).count();
        assert_eq!((1..=6).map(count).collect::<Vec<_>>(), vec![1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn small_suites_pass() {
        for report in [
            structure_map_laws(2, Exec::Sequential).unwrap(),
            cartesianization_laws(1, Exec::Sequential).unwrap(),
            kart_laws(1, 4, Exec::Sequential).unwrap(),
        ] {
            assert!(report.passed(), "{report}");
        }
    }
}
