//! Up-sets of a finite poset, the lattice they form under inverse inclusion,
//! and the factorization of an inclusion of up-sets into exact pullbacks.

use std::collections::HashMap;
use std::sync::Arc;

use crate::poset::{Poset, PosetError};

/// Default cap on the size of the base poset handed to [`UpsetLattice::new`].
pub const UPSET_BASE_CAP: usize = 20;

/// Up-sets are stored as 64-bit masks, so no base may be larger than this.
pub const UPSET_HARD_CAP: usize = 64;

/// A subset of a base poset (at most 64 elements) that is closed upward.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet(u64);

impl UpSet {
    pub fn empty() -> Self {
        UpSet(0)
    }

    pub fn from_members(base: &Poset, members: impl IntoIterator<Item = usize>) -> Result<Self, PosetError> {
        check_base(base, UPSET_HARD_CAP)?;
        let mut mask = 0u64;
        for m in members {
            base.check_index(m)?;
            mask |= 1 << m;
        }
        let set = UpSet(mask);
        if !set.is_upset_of(base) {
            return Err(PosetError::NotAnUpSet(set.describe(base)));
        }
        Ok(set)
    }

    /// `P_{p/}`, everything above `p`.
    pub fn principal(base: &Poset, p: usize) -> Self {
        UpSet(base.up(p).ones().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn members(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn union(self, other: UpSet) -> UpSet {
        UpSet(self.0 | other.0)
    }

    pub fn intersection(self, other: UpSet) -> UpSet {
        UpSet(self.0 & other.0)
    }

    pub fn difference(self, other: UpSet) -> Vec<usize> {
        UpSet(self.0 & !other.0).members()
    }

    pub fn is_superset(self, other: UpSet) -> bool {
        other.0 & !self.0 == 0
    }

    /// Removes one element; the result is only an up-set if `i` was minimal.
    pub fn without(self, i: usize) -> UpSet {
        UpSet(self.0 & !(1 << i))
    }

    pub fn is_upset_of(self, base: &Poset) -> bool {
        self.members().into_iter().all(|a| UpSet::principal(base, a).0 & !self.0 == 0)
    }

    /// Members with nothing strictly below them inside the set.
    pub fn minimal_members(self, base: &Poset) -> Vec<usize> {
        self.members()
            .into_iter()
            .filter(|&a| base.down(a).ones().all(|b| b == a || !self.contains(b)))
            .collect()
    }

    pub fn describe(self, base: &Poset) -> String {
        let names: Vec<&str> = self.members().into_iter().map(|i| base.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn check_base(base: &Poset, cap: usize) -> Result<(), PosetError> {
    let cap = cap.min(UPSET_HARD_CAP);
    if base.len() > cap {
        return Err(PosetError::SizeBudgetExceeded {
            what: "up-set base",
            size: base.len(),
            cap,
        });
    }
    Ok(())
}

/// Every up-set of `base`, the empty one included.
///
/// Elements are decided from the top down, so each up-set is produced exactly once.
pub fn enumerate_upsets(base: &Poset, cap: usize) -> Result<Vec<UpSet>, PosetError> {
    check_base(base, cap)?;
    let mut order = base.linear_extension();
    order.reverse();
    let strict_up: Vec<u64> = (0..base.len()).map(|a| UpSet::principal(base, a).without(a).0).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((depth, mask)) = stack.pop() {
        if depth == order.len() {
            out.push(UpSet(mask));
            continue;
        }
        let x = order[depth];
        stack.push((depth + 1, mask));
        if strict_up[x] & !mask == 0 {
            stack.push((depth + 1, mask | 1 << x));
        }
    }
    Ok(out)
}

/// How lattice elements are named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpsetNaming {
    /// `up{a,b}` listing the minimal members.
    Generic,
    /// `b01^b10`: the principal up-sets of the minimal members, prefix first.
    Principal(String),
}

#[derive(Clone, Debug)]
pub struct UpsetOptions {
    pub cap: usize,
    pub include_empty: bool,
    pub naming: UpsetNaming,
}

impl Default for UpsetOptions {
    fn default() -> Self {
        UpsetOptions {
            cap: UPSET_BASE_CAP,
            include_empty: false,
            naming: UpsetNaming::Generic,
        }
    }
}

/// The up-sets of a base poset ordered by inverse inclusion (`Q <= Q'` iff `Q ⊇ Q'`).
///
/// In this order the meet of two up-sets is their union and the join their intersection.
#[derive(Clone, Debug)]
pub struct UpsetLattice {
    base: Arc<Poset>,
    poset: Arc<Poset>,
    members: Vec<UpSet>,
    index: HashMap<UpSet, usize>,
}

impl UpsetLattice {
    /// Non-empty up-sets, default cap and naming.
    pub fn new(base: Arc<Poset>) -> Result<Self, PosetError> {
        Self::with_options(base, &UpsetOptions::default())
    }

    pub fn with_options(base: Arc<Poset>, opts: &UpsetOptions) -> Result<Self, PosetError> {
        let mut members = enumerate_upsets(&base, opts.cap)?;
        if !opts.include_empty {
            members.retain(|q| !q.is_empty());
        }
        // Larger sets first (they sit lower), ties by member list.
        members.sort_by_key(|q| (std::cmp::Reverse(q.len()), q.members()));
        let names: Vec<String> = members.iter().map(|q| name_upset(&base, *q, &opts.naming)).collect();
        let poset = Poset::from_fn(names, |a, b| members[a].is_superset(members[b]))?;
        let index = members.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        Ok(UpsetLattice {
            base,
            poset: Arc::new(poset),
            members,
            index,
        })
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn upset(&self, element: usize) -> UpSet {
        self.members[element]
    }

    pub fn upsets(&self) -> &[UpSet] {
        &self.members
    }

    pub fn element_of(&self, q: UpSet) -> Option<usize> {
        self.index.get(&q).copied()
    }

    /// The embedding `p -> P_{p/}`.
    pub fn embed(&self, p: usize) -> usize {
        self.index[&UpSet::principal(&self.base, p)]
    }

    /// Meet in the lattice: the union.
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.index[&self.members[x].union(self.members[y])]
    }

    /// Join in the lattice: the intersection, absent when it is not an element.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.element_of(self.members[x].intersection(self.members[y]))
    }
}

fn name_upset(base: &Poset, q: UpSet, naming: &UpsetNaming) -> String {
    if q.is_empty() {
        return "empty".to_string();
    }
    let minimal: Vec<&str> = q.minimal_members(base).into_iter().map(|i| base.name(i)).collect();
    match naming {
        UpsetNaming::Generic => format!("up{{{}}}", minimal.join(",")),
        UpsetNaming::Principal(prefix) => minimal.iter().map(|m| format!("{prefix}{m}")).collect::<Vec<_>>().join("^"),
    }
}

/// One step `Q_j -> Q_{j+1} = Q_j - {x_j}` of [`factor_exact_pullbacks`].
///
/// The square `(before; principal, after; punctured)` is exact in the lattice of
/// all up-sets: `before = principal ∪ after` and `punctured = principal ∩ after`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorStep {
    pub removed: usize,
    pub before: UpSet,
    pub principal: UpSet,
    pub after: UpSet,
    pub punctured: UpSet,
}

impl FactorStep {
    pub fn corners(&self) -> [UpSet; 4] {
        [self.before, self.principal, self.after, self.punctured]
    }
}

/// Factors `Q ⊇ Q'` into single-element removals, each an exact pullback.
///
/// At every step the removed element is the name-least element of `Q_j - Q'`
/// that is minimal in `Q_j`.
pub fn factor_exact_pullbacks(base: &Poset, q: UpSet, target: UpSet) -> Result<Vec<FactorStep>, PosetError> {
    if !q.is_superset(target) {
        return Err(PosetError::NotComparable(target.describe(base), q.describe(base)));
    }
    let mut steps = Vec::new();
    let mut current = q;
    while current != target {
        let x = current
            .minimal_members(base)
            .into_iter()
            .filter(|&x| !target.contains(x))
            .min_by(|&a, &b| base.name(a).cmp(base.name(b)))
            .expect("a minimal element of Q_j lies outside Q'");
        let principal = UpSet::principal(base, x);
        let after = current.without(x);
        steps.push(FactorStep {
            removed: x,
            before: current,
            principal,
            after,
            punctured: principal.without(x),
        });
        current = after;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::ExactSquare;

    fn grid_lattice(n: usize) -> UpsetLattice {
        let opts = UpsetOptions {
            naming: UpsetNaming::Principal("b".into()),
            ..UpsetOptions::default()
        };
        UpsetLattice::with_options(Arc::new(Poset::grid(n, n)), &opts).unwrap()
    }

    #[test]
    fn singleton_lattice() {
        let l = UpsetLattice::new(Arc::new(Poset::chain(0))).unwrap();
        assert_eq!(l.len(), 1);
    }

    #[test]
    fn five_element_square_lattice() {
        let l = grid_lattice(1);
        assert_eq!(l.poset().names(), &["b00", "b01^b10", "b01", "b10", "b11"]);
        let b01 = l.poset().index_of("b01").unwrap();
        let b10 = l.poset().index_of("b10").unwrap();
        assert_eq!(l.poset().name(l.meet(b01, b10)), "b01^b10");
        assert_eq!(l.poset().meet(b01, b10), Some(l.meet(b01, b10)));
    }

    #[test]
    fn chain_factorization_removes_bottom() {
        let base = Poset::chain(1);
        let steps = factor_exact_pullbacks(&base, UpSet::principal(&base, 0), UpSet::principal(&base, 1)).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].removed, 0);
        assert_eq!(steps[0].punctured, UpSet::principal(&base, 1));
    }

    #[test]
    fn grid_factorization_is_exact() {
        let base = Poset::grid(1, 1);
        let opts = UpsetOptions {
            include_empty: true,
            ..UpsetOptions::default()
        };
        let full = UpsetLattice::with_options(Arc::new(base.clone()), &opts).unwrap();
        let steps = factor_exact_pullbacks(&base, UpSet::principal(&base, 0), UpSet::principal(&base, 3)).unwrap();
        assert_eq!(steps.len(), 3);
        for s in &steps {
            let [a, b, c, d] = s.corners().map(|q| full.element_of(q).unwrap());
            assert!(full.poset().is_exact_square(&ExactSquare::new(a, b, c, d)).unwrap());
        }
    }

    #[test]
    fn incomparable_pair_is_rejected() {
        let base = Poset::grid(1, 1);
        let err = factor_exact_pullbacks(&base, UpSet::principal(&base, 1), UpSet::principal(&base, 2));
        assert!(matches!(err, Err(PosetError::NotComparable(..))));
    }

    #[test]
    fn budget_is_enforced() {
        let err = UpsetLattice::new(Arc::new(Poset::antichain(21))).unwrap_err();
        assert!(matches!(err, PosetError::SizeBudgetExceeded { .. }));
    }
}
