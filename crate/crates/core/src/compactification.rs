//! The compactification poset `Cpt^n = {(i, j) : 0 <= i <= j <= n}`, the box
//! `□^n` inside its nerve, categories of compactifications of a simplex, and
//! the grids they induce on simplices of the box.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::anodyne::{certify_interval_union, AnodyneCertificate, CertError};
use crate::fincat::{CatError, ComposableChain, FinCategory, MarkedCategory, Mor, Morphism, Obj};
use crate::grid::GridSimplex;
use crate::nerve::SubNerve;
use crate::poset::Poset;

/// Default cap on the number of compactifications enumerated.
pub const KPT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KptError {
    #[error("more than {cap} {what}")]
    SizeBudgetExceeded { what: &'static str, cap: usize },
    #[error("{0:?} is not a chain inside one piece of the box")]
    NotInBox(Vec<usize>),
    #[error(transparent)]
    Category(#[from] CatError),
}

/// Index of `(i, j)` in `build_cpt(n)`, which lists elements lexicographically.
pub fn cpt_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i <= j && j <= n, "({i},{j}) is not in Cpt^{n}");
    i * (n + 1) - i * i.saturating_sub(1) / 2 + (j - i)
}

/// The coordinates of every element of `Cpt^n`, in index order.
pub fn cpt_coords(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

/// `Cpt^n` with the product order; element `(i, j)` is named `a{i}{j}`.
pub fn build_cpt(n: usize) -> Poset {
    let coords = cpt_coords(n);
    let names = coords.iter().map(|&(i, j)| cpt_name(i, j)).collect();
    Poset::from_fn(names, |a, b| coords[a].0 <= coords[b].0 && coords[a].1 <= coords[b].1)
        .expect("a product order is a partial order")
}

fn cpt_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("a{i}{j}")
    } else {
        format!("a{i}_{j}")
    }
}

/// The piece `Cpt^n_{(0,i)//(i,n)}` of the box, as element indices.
pub fn box_piece_members(n: usize, i: usize) -> Vec<usize> {
    let coords = cpt_coords(n);
    (0..coords.len()).filter(|&k| coords[k].0 <= i && coords[k].1 >= i).collect()
}

/// `□^n = ∪_i N(Cpt^n_{(0,i)//(i,n)})` inside `N(Cpt^n)`.
pub fn build_box(cpt: &Arc<Poset>, n: usize) -> SubNerve {
    let chains = (0..=n)
        .flat_map(|i| {
            SubNerve::nerve_of_members(cpt.clone(), &box_piece_members(n, i))
                .chains()
                .clone()
        })
        .collect();
    SubNerve::from_set(cpt.clone(), chains)
}

/// The certificate that `□^n ⊆ N(Cpt^n)` is inner anodyne, telescoping the
/// pieces with lower bounds `(0, i)` and upper bounds `(i, n)`.
pub fn certify_box(n: usize) -> Result<AnodyneCertificate, CertError> {
    let cpt = Arc::new(build_cpt(n));
    let lower: Vec<usize> = (0..=n).map(|i| cpt_index(n, 0, i)).collect();
    let upper: Vec<usize> = (0..=n).map(|i| cpt_index(n, i, n)).collect();
    certify_interval_union(&cpt, &lower, &upper)
}

/// A functor `Cpt^n -> C` given by its unit edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Compactification {
    pub n: usize,
    /// Objects in `cpt_coords(n)` order.
    pub objects: Vec<Obj>,
    /// `(i,j) -> (i,j+1)`, keyed by the index of `(i,j)`; `usize::MAX` when `j = n`.
    pub row_edges: Vec<Mor>,
    /// `(i,j) -> (i+1,j)`, keyed by the index of `(i,j)`; `usize::MAX` when `i = j`.
    pub column_edges: Vec<Mor>,
}

const NO_EDGE: usize = usize::MAX;

impl Compactification {
    fn slot(&self, i: usize, j: usize) -> usize {
        cpt_index(self.n, i, j)
    }

    pub fn object_at(&self, i: usize, j: usize) -> Obj {
        self.objects[self.slot(i, j)]
    }

    /// The morphism `(i,j) -> (k,l)`: along row `i`, then down column `l`.
    pub fn morphism(&self, c: &FinCategory, from: (usize, usize), to: (usize, usize)) -> Mor {
        let mut path = Vec::new();
        for j in from.1..to.1 {
            path.push(self.row_edges[self.slot(from.0, j)]);
        }
        for i in from.0..to.0 {
            path.push(self.column_edges[self.slot(i, to.1)]);
        }
        c.compose_path(&path)
            .unwrap_or_else(|| c.identity(self.object_at(from.0, from.1)))
    }

    /// The restriction to the diagonal `(0,0) < (1,1) < ... < (n,n)`.
    pub fn diagonal(&self, c: &FinCategory) -> ComposableChain {
        ComposableChain {
            objects: (0..=self.n).map(|i| self.object_at(i, i)).collect(),
            edges: (0..self.n).map(|i| self.morphism(c, (i, i), (i + 1, i + 1))).collect(),
        }
    }
}

fn index_table(n: usize) -> HashMap<(usize, usize), usize> {
    cpt_coords(n).into_iter().enumerate().map(|(k, c)| (c, k)).collect()
}

/// The category of compactifications of a simplex: compactifications with
/// diagonal `tau`, and natural transformations with components in `E1` that
/// are identities on the diagonal.
#[derive(Debug, Clone)]
pub struct Kpt {
    pub tau: ComposableChain,
    pub objects: Vec<Compactification>,
    /// Components of each morphism, in `cpt_coords(n)` order.
    pub components: Vec<Vec<Mor>>,
    pub category: FinCategory,
}

/// Enumerates compactifications column by column (`(i, j)` for `j` ascending,
/// then `i` ascending) and the transformations between them.
pub fn enumerate_kpt(mc: &MarkedCategory, tau: &ComposableChain, cap: usize) -> Result<Kpt, KptError> {
    let c = &*mc.category;
    let n = tau.dimension();
    let coords = cpt_coords(n);
    let table = index_table(n);
    let mut objects = Vec::new();
    let mut current = Compactification {
        n,
        objects: vec![NO_EDGE; coords.len()],
        row_edges: vec![NO_EDGE; coords.len()],
        column_edges: vec![NO_EDGE; coords.len()],
    };
    for i in 0..=n {
        current.objects[table[&(i, i)]] = tau.objects[i];
    }
    let order: Vec<(usize, usize)> = (1..=n).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
    fill_cells(mc, tau, &table, &order, 0, &mut current, &mut objects, cap)?;

    let mut components: Vec<Vec<Mor>> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for (a, sa) in objects.iter().enumerate() {
        for (b, sb) in objects.iter().enumerate() {
            let mut found = Vec::new();
            let mut comp = vec![NO_EDGE; coords.len()];
            transformations(mc, sa, sb, &coords, &table, 0, &mut comp, &mut found);
            for t in found {
                if components.len() == cap {
                    return Err(KptError::SizeBudgetExceeded {
                        what: "transformations",
                        cap,
                    });
                }
                components.push(t);
                ends.push((a, b));
            }
        }
    }
    let by_components: HashMap<(usize, usize, Vec<Mor>), usize> = components
        .iter()
        .zip(&ends)
        .enumerate()
        .map(|(k, (t, &(a, b)))| ((a, b, t.clone()), k))
        .collect();
    let morphisms: Vec<Morphism> = ends
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| Morphism {
            name: format!("t{k}"),
            source: a,
            target: b,
        })
        .collect();
    let identities: Vec<Mor> = (0..objects.len())
        .map(|a| {
            let ids: Vec<Mor> = objects[a].objects.iter().map(|&x| c.identity(x)).collect();
            by_components[&(a, a, ids)]
        })
        .collect();
    let category = FinCategory::from_parts(
        (0..objects.len()).map(|a| format!("k{a}")).collect(),
        morphisms,
        identities,
        |g, f| {
            let comp: Vec<Mor> = components[f]
                .iter()
                .zip(&components[g])
                .map(|(&x, &y)| c.compose(y, x).expect("components compose"))
                .collect();
            by_components.get(&(ends[f].0, ends[g].1, comp)).copied()
        },
    )?;
    Ok(Kpt {
        tau: tau.clone(),
        objects,
        components,
        category,
    })
}

#[allow(clippy::too_many_arguments)]
fn fill_cells(
    mc: &MarkedCategory,
    tau: &ComposableChain,
    table: &HashMap<(usize, usize), usize>,
    order: &[(usize, usize)],
    k: usize,
    cur: &mut Compactification,
    out: &mut Vec<Compactification>,
    cap: usize,
) -> Result<(), KptError> {
    let c = &*mc.category;
    let Some(&(i, j)) = order.get(k) else {
        if out.len() == cap {
            return Err(KptError::SizeBudgetExceeded {
                what: "compactifications",
                cap,
            });
        }
        out.push(cur.clone());
        return Ok(());
    };
    let here = table[&(i, j)];
    if i == 0 {
        let left = cur.objects[table[&(0, j - 1)]];
        let rows: Vec<Mor> = c.maps_out_of(left).filter(|&h| mc.e2.contains(h)).collect();
        for h in rows {
            cur.row_edges[table[&(0, j - 1)]] = h;
            cur.objects[here] = c.target(h);
            fill_cells(mc, tau, table, order, k + 1, cur, out, cap)?;
        }
        return Ok(());
    }
    let above = cur.objects[table[&(i - 1, j)]];
    if i == j {
        // The diagonal is fixed; the triangle through (j-1, j) must compose to tau.
        let h = cur.row_edges[table[&(j - 1, j - 1)]];
        for &v in c.hom(above, tau.objects[j]) {
            if mc.e1.contains(v) && c.compose(v, h) == Some(tau.edges[j - 1]) {
                cur.column_edges[table[&(j - 1, j)]] = v;
                fill_cells(mc, tau, table, order, k + 1, cur, out, cap)?;
            }
        }
        return Ok(());
    }
    let left = cur.objects[table[&(i, j - 1)]];
    let top = cur.row_edges[table[&(i - 1, j - 1)]];
    let side = cur.column_edges[table[&(i - 1, j - 1)]];
    let rows: Vec<Mor> = c.maps_out_of(left).filter(|&h| mc.e2.contains(h)).collect();
    for h in rows {
        let target = c.target(h);
        for &v in c.hom(above, target) {
            if mc.e1.contains(v) && c.compose(v, top) == c.compose(h, side) {
                cur.row_edges[table[&(i, j - 1)]] = h;
                cur.column_edges[table[&(i - 1, j)]] = v;
                cur.objects[here] = target;
                fill_cells(mc, tau, table, order, k + 1, cur, out, cap)?;
            }
        }
    }
    Ok(())
}

/// Natural transformations `a => b` with `E1` components, identities on the diagonal.
#[allow(clippy::too_many_arguments)]
fn transformations(
    mc: &MarkedCategory,
    a: &Compactification,
    b: &Compactification,
    coords: &[(usize, usize)],
    table: &HashMap<(usize, usize), usize>,
    k: usize,
    comp: &mut Vec<Mor>,
    out: &mut Vec<Vec<Mor>>,
) {
    let c = &*mc.category;
    if k == coords.len() {
        out.push(comp.clone());
        return;
    }
    let (i, j) = coords[k];
    let candidates: Vec<Mor> = if i == j {
        vec![c.identity(a.objects[k])]
    } else {
        c.hom(a.objects[k], b.objects[k])
            .iter()
            .copied()
            .filter(|&f| mc.e1.contains(f))
            .collect()
    };
    for f in candidates {
        // Naturality on the edges into (i, j) from cells already assigned.
        let mut ok = true;
        if j > i {
            let s = table[&(i, j - 1)];
            if s < k {
                ok &= c.compose(f, a.row_edges[s]) == c.compose(b.row_edges[s], comp[s]);
            }
        }
        if i > 0 {
            let s = table[&(i - 1, j)];
            if s < k {
                ok &= c.compose(f, a.column_edges[s]) == c.compose(b.column_edges[s], comp[s]);
            }
        }
        if !ok {
            continue;
        }
        comp[k] = f;
        // Edges out of (i, j) towards cells already assigned are checked there.
        transformations(mc, a, b, coords, table, k + 1, comp, out);
    }
}

/// The grid `(p, q) -> σ(row of γ(p), column of γ(q))` for a chain `γ` of
/// `Cpt^n` lying in one piece of the box. This is the assignment
/// `σ(Λ(γ(q), γ(p)))` for `p >= q` and `σ(μ(γ(p), γ(q)))` for `p <= q`.
pub fn alpha_comm(c: &FinCategory, sigma: &Compactification, gamma: &[usize]) -> Result<GridSimplex, KptError> {
    let n = sigma.n;
    let coords = cpt_coords(n);
    let in_piece = |i: usize| gamma.iter().all(|&g| coords[g].0 <= i && coords[g].1 >= i);
    let monotone = gamma
        .windows(2)
        .all(|w| coords[w[0]].0 <= coords[w[1]].0 && coords[w[0]].1 <= coords[w[1]].1);
    if gamma.is_empty() || gamma.iter().any(|&g| g >= coords.len()) || !monotone || !(0..=n).any(in_piece) {
        return Err(KptError::NotInBox(gamma.to_vec()));
    }
    let m = gamma.len() - 1;
    let at = |p: usize, q: usize| (coords[gamma[p]].0, coords[gamma[q]].1);
    let mut objects = Vec::with_capacity((m + 1) * (m + 1));
    for p in 0..=m {
        for q in 0..=m {
            let (i, j) = at(p, q);
            objects.push(sigma.object_at(i, j));
        }
    }
    let mut horizontal = Vec::new();
    for p in 0..=m {
        for q in 0..m {
            horizontal.push(sigma.morphism(c, at(p, q), at(p, q + 1)));
        }
    }
    let mut vertical = Vec::new();
    for p in 0..m {
        for q in 0..=m {
            vertical.push(sigma.morphism(c, at(p, q), at(p + 1, q)));
        }
    }
    Ok(GridSimplex {
        rows: m,
        cols: m,
        objects,
        horizontal,
        vertical,
        reversed: [false; 2],
    })
}

/// Components of `alpha_comm` applied to a morphism of compactifications:
/// the transformation's component at each grid cell.
pub fn alpha_comm_transformation(kpt: &Kpt, t: Mor, gamma: &[usize]) -> Vec<Mor> {
    let n = kpt.tau.dimension();
    let coords = cpt_coords(n);
    let table = index_table(n);
    let m = gamma.len() - 1;
    let mut out = Vec::with_capacity((m + 1) * (m + 1));
    for p in 0..=m {
        for q in 0..=m {
            let cell = (coords[gamma[p]].0, coords[gamma[q]].1);
            out.push(kpt.components[t][table[&cell]]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anodyne::search_certificate;
    use crate::fincat::{check_cofiltered, EdgeClass};
    use crate::nerve::{standard_shape, ShapeKind};

    #[test]
    fn small_compactification_posets() {
        assert_eq!(build_cpt(0).len(), 1);
        let c1 = build_cpt(1);
        assert_eq!(c1.names(), ["a00", "a01", "a11"]);
        assert_eq!(c1.cover_names().len(), 2);
        let c2 = build_cpt(2);
        let mut covers = c2.cover_names();
        covers.sort();
        let expected = [
            ("a00", "a01"),
            ("a01", "a02"),
            ("a01", "a11"),
            ("a02", "a12"),
            ("a11", "a12"),
            ("a12", "a22"),
        ];
        let expected: Vec<(String, String)> = expected.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(covers, expected);
    }

    #[test]
    fn index_formula_matches_listing() {
        for n in 0..6 {
            for (k, (i, j)) in cpt_coords(n).into_iter().enumerate() {
                assert_eq!(cpt_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn box_one_is_inner_horn() {
        let cpt = Arc::new(build_cpt(1));
        let b = build_box(&cpt, 1);
        let horn = standard_shape(2, ShapeKind::InnerHorn(1)).unwrap();
        assert_eq!(b.counts_by_dim(), horn.counts_by_dim());
        assert_eq!(b.maximal_chains(), vec![vec![0, 1], vec![1, 2]]);
        let cert = certify_box(1).unwrap();
        assert_eq!(cert.moves.len(), 1);
        assert_eq!((cert.moves[0].chain.clone(), cert.moves[0].k), (vec![0, 1, 2], 1));
    }

    #[test]
    fn constructive_and_searched_box_certificates_agree() {
        for n in 1..=2 {
            let built = certify_box(n).unwrap();
            let found = search_certificate(&built.start, &built.target, 1_000_000).unwrap();
            found.validate().unwrap();
            assert_eq!(found.target, built.target);
        }
    }

    #[test]
    fn kpt_of_square_poset() {
        let c = Arc::new(FinCategory::from_poset(Arc::new(Poset::grid(1, 1))));
        let p = c.poset().unwrap().clone();
        let coord = |x: usize, k: usize| p.name(x).as_bytes()[k];
        let e1 = EdgeClass::from_predicate(&c, |f| coord(c.source(f), 1) == coord(c.target(f), 1));
        let e2 = EdgeClass::from_predicate(&c, |f| coord(c.source(f), 0) == coord(c.target(f), 0));
        let mc = MarkedCategory::new(c.clone(), e1, e2);
        let tau = ComposableChain::from_edges(&c, &[c.hom(0, 3)[0]]).unwrap();
        let kpt = enumerate_kpt(&mc, &tau, KPT_CAP).unwrap();
        assert_eq!(kpt.objects.len(), 1);
        assert_eq!(kpt.objects[0].object_at(0, 1), p.index_of("01").unwrap());
        assert_eq!(check_cofiltered(&kpt.category), None);
        for s in &kpt.objects {
            assert_eq!(s.diagonal(&c), tau);
        }
    }

    #[test]
    fn alpha_comm_on_a_point_and_an_edge() {
        let c = Arc::new(FinCategory::from_poset(Arc::new(Poset::chain(2))));
        let mc = MarkedCategory::unmarked(c.clone());
        let tau = ComposableChain::from_edges(&c, &[c.hom(0, 2)[0]]).unwrap();
        let kpt = enumerate_kpt(&mc, &tau, KPT_CAP).unwrap();
        assert_eq!(kpt.objects.len(), 3);
        let sigma = &kpt.objects[1];
        let point = alpha_comm(&c, sigma, &[1]).unwrap();
        assert_eq!(point, GridSimplex::point(sigma.object_at(0, 1)));
        let edge = alpha_comm(&c, sigma, &[0, 1]).unwrap();
        let z = sigma.object_at(0, 1);
        assert_eq!(edge.objects, vec![0, z, 0, z]);
        assert!(alpha_comm(&c, sigma, &[0, 2]).is_err());
    }
}
