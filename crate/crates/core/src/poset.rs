//! Finite posets stored as their full reflexive-transitive closure.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cycle through {a} and {b}: the closure is not antisymmetric")]
    CycleDetected { a: String, b: String },
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("{what} of size {size} exceeds the budget {cap}")]
    SizeBudgetExceeded { what: &'static str, size: usize, cap: usize },
    #[error("{0} is not contained in {1}")]
    NotComparable(String, String),
    #[error("not a square: {0}")]
    NotASquare(String),
    #[error("{0} is not an up-set")]
    NotAnUpSet(String),
}

/// A finite poset on indices `0..len()`, with a name per element.
#[derive(Clone)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[a]` holds every `b` with `a <= b`.
    up: Vec<FixedBitSet>,
    /// `down[b]` holds every `a` with `a <= b`.
    down: Vec<FixedBitSet>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &self.cover_names())
            .finish()
    }
}

/// Result of [`Poset::lattice_ops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeOps {
    pub meet: Option<usize>,
    pub join: Option<usize>,
    /// Only filled when the caller asks for the (cubic) distributivity scan.
    pub distributive: Option<bool>,
}

/// Four elements with `a <= b`, `a <= c`, `b <= d`, `c <= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactSquare {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl ExactSquare {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        ExactSquare { a, b, c, d }
    }
}

/// A point of the grid `[n] x [n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub row: usize,
    pub col: usize,
}

impl GridPoint {
    pub fn new(row: usize, col: usize) -> Self {
        GridPoint { row, col }
    }
}

impl Poset {
    /// Builds the poset generated by `pairs` (each `(a, b)` meaning `a <= b`).
    pub fn new<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Self, PosetError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_names(&names)?;
        let mut rel = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let a = lookup(&index, a.as_ref())?;
            let b = lookup(&index, b.as_ref())?;
            rel.push((a, b));
        }
        Self::from_relation(names, index, rel)
    }

    /// Builds a poset from a relation given as a predicate; the closure is still computed.
    pub fn from_fn(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let index = index_names(&names)?;
        let n = names.len();
        let mut rel = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    rel.push((a, b));
                }
            }
        }
        Self::from_relation(names, index, rel)
    }

    fn from_relation(names: Vec<String>, index: HashMap<String, usize>, rel: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        let n = names.len();
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(a);
                row
            })
            .collect();
        for (a, b) in rel {
            up[a].insert(b);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                if a != b && up[b].contains(a) {
                    let (x, y) = if a < b { (a, b) } else { (b, a) };
                    return Err(PosetError::CycleDetected {
                        a: names[x].clone(),
                        b: names[y].clone(),
                    });
                }
                down[b].insert(a);
            }
        }
        Ok(Poset { names, index, up, down })
    }

    pub fn empty() -> Self {
        Poset {
            names: Vec::new(),
            index: HashMap::new(),
            up: Vec::new(),
            down: Vec::new(),
        }
    }

    /// The chain `0 < 1 < ... < n`, elements named by their numbers.
    pub fn chain(n: usize) -> Self {
        let names = (0..=n).map(|i| i.to_string()).collect();
        Self::from_fn(names, |a, b| a <= b).expect("a chain is a poset")
    }

    /// The discrete poset on `k` elements named `x0, x1, ...`.
    pub fn antichain(k: usize) -> Self {
        let names = (0..k).map(|i| format!("x{i}")).collect();
        Self::from_fn(names, |a, b| a == b).expect("an antichain is a poset")
    }

    /// `[rows] x [cols]` with the product order, points named `ij`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let points: Vec<GridPoint> = (0..=rows)
            .flat_map(|r| (0..=cols).map(move |c| GridPoint::new(r, c)))
            .collect();
        let names = points.iter().map(|p| grid_point_name(*p, rows.max(cols))).collect();
        Self::from_fn(names, |a, b| points[a].row <= points[b].row && points[a].col <= points[b].col).expect("a grid is a poset")
    }

    /// Product order on pairs; elements are named `(p,q)` in row-major order.
    pub fn product(p: &Poset, q: &Poset) -> Self {
        let m = q.len();
        let names = (0..p.len() * m)
            .map(|i| format!("({},{})", p.name(i / m), q.name(i % m)))
            .collect();
        Self::from_fn(names, |a, b| p.leq(a / m, b / m) && q.leq(a % m, b % m)).expect("a product of posets is a poset")
    }

    /// Same elements, reversed order.
    pub fn opposite(&self) -> Self {
        Poset {
            names: self.names.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Full sub-poset on `members`, in the given order.
    pub fn induced(&self, members: &[usize]) -> Self {
        let names = members.iter().map(|&i| self.names[i].clone()).collect();
        Self::from_fn(names, |a, b| self.leq(members[a], members[b])).expect("a sub-poset is a poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PosetError> {
        lookup(&self.index, name)
    }

    pub fn check_index(&self, i: usize) -> Result<usize, PosetError> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(PosetError::UnknownElement(format!("#{i}")))
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Every element `>= a`.
    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// Every element `<= b`.
    pub fn down(&self, b: usize) -> &FixedBitSet {
        &self.down[b]
    }

    /// Hasse covering pairs `(a, b)`, `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if a != b && self.up[a].intersection_count(&self.down[b]) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn cover_names(&self) -> Vec<(String, String)> {
        self.covers()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect()
    }

    /// A linear extension: sorting by down-set size respects the order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (self.down[a].count_ones(..), a));
        order
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.down[a].count_ones(..) == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.up[a].count_ones(..) == 1).collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&a| self.up[a].count_ones(..) == self.len())
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&a| self.down[a].count_ones(..) == self.len())
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        if self.leq(x, y) {
            return Some(x);
        }
        if self.leq(y, x) {
            return Some(y);
        }
        let mut lower = self.down[x].clone();
        lower.intersect_with(&self.down[y]);
        let count = lower.count_ones(..);
        lower.ones().find(|&m| self.down[m].intersection_count(&lower) == count)
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        if self.leq(x, y) {
            return Some(y);
        }
        if self.leq(y, x) {
            return Some(x);
        }
        let mut upper = self.up[x].clone();
        upper.intersect_with(&self.up[y]);
        let count = upper.count_ones(..);
        upper.ones().find(|&m| self.up[m].intersection_count(&upper) == count)
    }

    /// Meet of a non-empty family, when every partial meet exists.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = items.into_iter();
        let first = it.next()?;
        it.try_fold(first, |acc, x| self.meet(acc, x))
    }

    pub fn lattice_ops(&self, x: usize, y: usize, check_distributive: bool) -> LatticeOps {
        LatticeOps {
            meet: self.meet(x, y),
            join: self.join(x, y),
            distributive: check_distributive.then(|| self.is_distributive()),
        }
    }

    pub fn is_lattice(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        (0..self.len()).all(|x| (x..self.len()).all(|y| self.meet(x, y).is_some() && self.join(x, y).is_some()))
    }

    /// `p v (q ^ r) = (p v q) ^ (p v r)` for every triple; false when some operation is missing.
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let lhs = self.meet(q, r).and_then(|m| self.join(p, m));
                    let rhs = match (self.join(p, q), self.join(p, r)) {
                        (Some(a), Some(b)) => self.meet(a, b),
                        _ => None,
                    };
                    if lhs.is_none() || lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Elements `z` with `x <= z <= y`, ascending by index.
    pub fn interval_members(&self, x: usize, y: usize) -> Vec<usize> {
        let mut between = self.up[x].clone();
        between.intersect_with(&self.down[y]);
        between.ones().collect()
    }

    /// The full sub-poset `{z : x <= z <= y}`; empty when `x` is not below `y`.
    pub fn interval(&self, x: usize, y: usize) -> Result<Poset, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.induced(&self.interval_members(x, y)))
    }

    /// `{z : x <= z}`.
    pub fn upper_members(&self, x: usize) -> Vec<usize> {
        self.up[x].ones().collect()
    }

    /// `{z : z <= x}`.
    pub fn lower_members(&self, x: usize) -> Vec<usize> {
        self.down[x].ones().collect()
    }

    /// Whether `members` is closed upward.
    pub fn is_upset(&self, members: &FixedBitSet) -> bool {
        members.ones().all(|a| self.up[a].is_subset(members))
    }

    pub fn is_downset(&self, members: &FixedBitSet) -> bool {
        members.ones().all(|a| self.down[a].is_subset(members))
    }

    pub fn is_pullback(&self, sq: &ExactSquare) -> bool {
        self.down[sq.b]
            .intersection(&self.down[sq.c])
            .all(|z| self.down[sq.a].contains(z))
    }

    pub fn is_pushout(&self, sq: &ExactSquare) -> bool {
        self.up[sq.b].intersection(&self.up[sq.c]).all(|z| self.up[sq.d].contains(z))
    }

    pub fn is_square(&self, sq: &ExactSquare) -> bool {
        self.leq(sq.a, sq.b) && self.leq(sq.a, sq.c) && self.leq(sq.b, sq.d) && self.leq(sq.c, sq.d)
    }

    /// Pullback and pushout at once.
    pub fn is_exact_square(&self, sq: &ExactSquare) -> Result<bool, PosetError> {
        for i in [sq.a, sq.b, sq.c, sq.d] {
            self.check_index(i)?;
        }
        if !self.is_square(sq) {
            return Err(PosetError::NotASquare(format!(
                "({}; {}, {}; {})",
                self.names[sq.a], self.names[sq.b], self.names[sq.c], self.names[sq.d]
            )));
        }
        Ok(self.is_pullback(sq) && self.is_pushout(sq))
    }
}

pub(crate) fn grid_point_name(p: GridPoint, n: usize) -> String {
    if n < 10 {
        format!("{}{}", p.row, p.col)
    } else {
        format!("{}.{}", p.row, p.col)
    }
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>, PosetError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(PosetError::DuplicateElement(name.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, name: &str) -> Result<usize, PosetError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
}
