//! Simplicial subsets of the nerve of a finite poset, stored by their
//! non-degenerate simplices (strictly increasing chains).

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::par::Exec;
use crate::poset::Poset;

/// Upper bound on the number of chains a single nerve may hold.
pub const NERVE_CHAIN_CAP: usize = 5_000_000;

/// Element indices in strictly increasing order.
pub type Chain = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("the two complexes live over different base posets")]
    BaseMismatch,
    #[error("{0} is not a chain of the base poset")]
    NotAChain(String),
    #[error("horn Λ^{n}_{k} is not inner")]
    NotInner { n: usize, k: usize },
    #[error("horn index {k} out of range for Δ^{n}")]
    HornOutOfRange { n: usize, k: usize },
    #[error("nerve has more than {cap} chains")]
    SizeBudgetExceeded { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Union,
    Intersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Simplex,
    Boundary,
    /// Any horn, inner or not.
    Horn(usize),
    /// Rejects `k = 0` and `k = n`.
    InnerHorn(usize),
}

/// A face-closed set of chains of `base`.
#[derive(Clone, Debug)]
pub struct SubNerve {
    base: Arc<Poset>,
    chains: BTreeSet<Chain>,
}

impl PartialEq for SubNerve {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.chains == other.chains
    }
}

impl Eq for SubNerve {}

pub(crate) fn same_base(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl SubNerve {
    pub fn empty(base: Arc<Poset>) -> Self {
        SubNerve {
            base,
            chains: BTreeSet::new(),
        }
    }

    /// All chains of `base` with at most `dim_cap + 1` elements.
    pub fn nerve(base: Arc<Poset>, dim_cap: Option<usize>) -> Result<Self, NerveError> {
        Self::nerve_with(base, dim_cap, Exec::default())
    }

    pub fn nerve_with(base: Arc<Poset>, dim_cap: Option<usize>, exec: Exec) -> Result<Self, NerveError> {
        let members: Vec<usize> = (0..base.len()).collect();
        Self::nerve_of_members_with(base, &members, dim_cap, exec)
    }

    /// The nerve of the full sub-poset on `members`, as a subcomplex of `N(base)`.
    pub fn nerve_of_members(base: Arc<Poset>, members: &[usize]) -> Self {
        Self::nerve_of_members_with(base, members, None, Exec::Sequential)
            .expect("sub-poset nerves used internally stay under the chain cap")
    }

    pub fn nerve_of_members_with(
        base: Arc<Poset>,
        members: &[usize],
        dim_cap: Option<usize>,
        exec: Exec,
    ) -> Result<Self, NerveError> {
        let max_len = dim_cap.map_or(usize::MAX, |d| d + 1);
        let mut allowed = vec![false; base.len()];
        for &m in members {
            allowed[m] = true;
        }
        let per_root = exec.map(members, |&root| {
            let mut out = Vec::new();
            let mut chain = vec![root];
            extend_chains(&base, &allowed, max_len, &mut chain, &mut out);
            out
        });
        let total: usize = per_root.iter().map(Vec::len).sum();
        if total > NERVE_CHAIN_CAP {
            return Err(NerveError::SizeBudgetExceeded { cap: NERVE_CHAIN_CAP });
        }
        Ok(SubNerve {
            base,
            chains: per_root.into_iter().flatten().collect(),
        })
    }

    /// The smallest subcomplex containing the given chains (vertices in any order).
    pub fn from_chains(base: Arc<Poset>, chains: &[Vec<usize>]) -> Result<Self, NerveError> {
        let mut out = SubNerve::empty(base);
        for c in chains {
            let c = out.normalize(c)?;
            out.insert_with_faces(&c);
        }
        Ok(out)
    }

    /// Sorts `vertices` along the order and checks they form a chain.
    pub fn normalize(&self, vertices: &[usize]) -> Result<Chain, NerveError> {
        let describe = || format!("{vertices:?}");
        if vertices.is_empty() || vertices.iter().any(|&v| v >= self.base.len()) {
            return Err(NerveError::NotAChain(describe()));
        }
        let mut c = vertices.to_vec();
        c.sort_by_key(|&v| self.base.down(v).count_ones(..));
        if c.windows(2).any(|w| !self.base.lt(w[0], w[1])) {
            return Err(NerveError::NotAChain(describe()));
        }
        Ok(c)
    }

    pub(crate) fn from_set(base: Arc<Poset>, chains: BTreeSet<Chain>) -> Self {
        SubNerve { base, chains }
    }

    pub(crate) fn insert_with_faces(&mut self, chain: &[usize]) {
        if self.chains.contains(chain) {
            return;
        }
        for face in nonempty_subsequences(chain) {
            self.chains.insert(face);
        }
    }

    pub(crate) fn insert(&mut self, chain: Chain) -> bool {
        self.chains.insert(chain)
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn chains(&self) -> &BTreeSet<Chain> {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn contains(&self, chain: &[usize]) -> bool {
        self.chains.contains(chain)
    }

    /// The non-degenerate `m`-simplices.
    pub fn simplices(&self, m: usize) -> Vec<Chain> {
        self.chains.iter().filter(|c| c.len() == m + 1).cloned().collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.chains.iter().map(|c| c.len() - 1).max()
    }

    /// Number of non-degenerate simplices in each dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.chains {
            counts[c.len() - 1] += 1;
        }
        counts
    }

    /// Chains that are not proper faces of another stored chain.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        self.chains
            .iter()
            .filter(|c| {
                (0..self.base.len()).all(|x| {
                    if c.contains(&x) {
                        return true;
                    }
                    match insert_sorted(&self.base, c, x) {
                        Some(bigger) => !self.chains.contains(&bigger),
                        None => true,
                    }
                })
            })
            .cloned()
            .collect()
    }

    pub fn is_face_closed(&self) -> bool {
        self.chains
            .iter()
            .all(|c| c.len() == 1 || (0..c.len()).all(|i| self.chains.contains(&face(c, i))))
    }

    pub fn is_subcomplex_of(&self, other: &SubNerve) -> bool {
        same_base(&self.base, &other.base) && self.chains.is_subset(&other.chains)
    }

    pub fn chain_names(&self, chain: &[usize]) -> Vec<String> {
        chain.iter().map(|&v| self.base.name(v).to_string()).collect()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.chains.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect()
    }
}

fn extend_chains(base: &Poset, allowed: &[bool], max_len: usize, chain: &mut Vec<usize>, out: &mut Vec<Chain>) {
    out.push(chain.clone());
    if chain.len() == max_len {
        return;
    }
    let last = *chain.last().expect("chains are non-empty");
    for next in base.up(last).ones() {
        if next != last && allowed[next] {
            chain.push(next);
            extend_chains(base, allowed, max_len, chain, out);
            chain.pop();
        }
    }
}

/// The chain with vertex `i` removed.
pub fn face(chain: &[usize], i: usize) -> Chain {
    let mut f = chain.to_vec();
    f.remove(i);
    f
}

pub(crate) fn nonempty_subsequences(chain: &[usize]) -> Vec<Chain> {
    let n = chain.len();
    (1u64..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| chain[i]).collect())
        .collect()
}

fn insert_sorted(base: &Poset, chain: &[usize], x: usize) -> Option<Chain> {
    let pos = chain.iter().position(|&v| base.lt(x, v)).unwrap_or(chain.len());
    if pos > 0 && !base.lt(chain[pos - 1], x) {
        return None;
    }
    if pos < chain.len() && !base.lt(x, chain[pos]) {
        return None;
    }
    let mut c = chain.to_vec();
    c.insert(pos, x);
    Some(c)
}

pub fn combine(k1: &SubNerve, k2: &SubNerve, mode: CombineMode) -> Result<SubNerve, NerveError> {
    if !same_base(&k1.base, &k2.base) {
        return Err(NerveError::BaseMismatch);
    }
    let chains = match mode {
        CombineMode::Union => k1.chains.union(&k2.chains).cloned().collect(),
        CombineMode::Intersection => k1.chains.intersection(&k2.chains).cloned().collect(),
    };
    Ok(SubNerve {
        base: k1.base.clone(),
        chains,
    })
}

/// `Δ^n`, `∂Δ^n` or a horn, over the chain poset `[n]`.
pub fn standard_shape(n: usize, kind: ShapeKind) -> Result<SubNerve, NerveError> {
    let base = Arc::new(Poset::chain(n));
    let full: Chain = (0..=n).collect();
    let mut chains: BTreeSet<Chain> = nonempty_subsequences(&full).into_iter().collect();
    match kind {
        ShapeKind::Simplex => {}
        ShapeKind::Boundary => {
            chains.remove(&full);
        }
        ShapeKind::InnerHorn(k) | ShapeKind::Horn(k) => {
            if k > n {
                return Err(NerveError::HornOutOfRange { n, k });
            }
            if matches!(kind, ShapeKind::InnerHorn(_)) && (k == 0 || k == n) {
                return Err(NerveError::NotInner { n, k });
            }
            chains.remove(&full);
            chains.remove(&face(&full, k));
        }
    }
    Ok(SubNerve { base, chains })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_nerve() {
        let k = SubNerve::nerve(Arc::new(Poset::chain(0)), None).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn simplex_shapes() {
        let d2 = standard_shape(2, ShapeKind::Simplex).unwrap();
        assert_eq!(d2.simplices(2), vec![vec![0, 1, 2]]);
        let b3 = standard_shape(3, ShapeKind::Boundary).unwrap();
        assert_eq!(b3.counts_by_dim(), vec![4, 6, 4]);
        let h = standard_shape(2, ShapeKind::InnerHorn(1)).unwrap();
        assert_eq!(h.simplices(1), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(
            standard_shape(2, ShapeKind::InnerHorn(0)).unwrap_err(),
            NerveError::NotInner { n: 2, k: 0 }
        );
        assert!(standard_shape(2, ShapeKind::Horn(0)).is_ok());
    }

    #[test]
    fn combine_requires_same_base() {
        let a = standard_shape(1, ShapeKind::Simplex).unwrap();
        let b = standard_shape(2, ShapeKind::Simplex).unwrap();
        assert_eq!(combine(&a, &b, CombineMode::Union).unwrap_err(), NerveError::BaseMismatch);
        assert_eq!(combine(&a, &a, CombineMode::Union).unwrap(), a);
    }

    #[test]
    fn from_chains_sorts_and_closes() {
        let base = Arc::new(Poset::chain(3));
        let k = SubNerve::from_chains(base, &[vec![3, 0, 2]]).unwrap();
        assert_eq!(k.len(), 7);
        assert!(k.contains(&[0, 2, 3]));
        assert_eq!(k.maximal_chains(), vec![vec![0, 2, 3]]);
        assert!(k.is_face_closed());
    }

    #[test]
    fn non_chain_is_rejected() {
        let base = Arc::new(Poset::antichain(2));
        assert!(matches!(
            SubNerve::from_chains(base, &[vec![0, 1]]),
            Err(NerveError::NotAChain(_))
        ));
    }

    #[test]
    fn dim_cap_truncates() {
        let k = SubNerve::nerve(Arc::new(Poset::chain(3)), Some(1)).unwrap();
        assert_eq!(k.counts_by_dim(), vec![4, 6]);
    }
}
