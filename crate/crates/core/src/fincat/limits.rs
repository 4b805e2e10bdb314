//! Pullbacks, gap morphisms and truncation levels.

use std::collections::HashMap;
use std::fmt;

use super::{Backend, CatError, FinCategory, Mor, Obj};

/// A pullback cone: `first: apex -> x` and `second: apex -> y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone<M> {
    pub apex: Obj,
    pub first: M,
    pub second: M,
}

/// A commutative square `right ∘ top = bottom ∘ left`:
///
/// ```text
/// w --top--> x
/// |          |
/// left     right
/// v          v
/// y --bottom-> z
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square<M = Mor> {
    pub top: M,
    pub left: M,
    pub right: M,
    pub bottom: M,
}

/// The operations truncation levels and gap morphisms need.
pub trait PullbackCategory {
    type Mor: Clone + PartialEq + fmt::Debug;

    fn dom(&self, f: &Self::Mor) -> Obj;
    fn cod(&self, f: &Self::Mor) -> Obj;
    fn id_of(&self, x: Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn after(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;
    fn is_invertible(&self, f: &Self::Mor) -> bool;
    /// The chosen pullback of the cospan `f: x -> z <- y: g`.
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Cone<Self::Mor>>;
    /// The unique `m: w -> apex` with `first ∘ m = a` and `second ∘ m = b`.
    fn mediate(&self, cone: &Cone<Self::Mor>, a: &Self::Mor, b: &Self::Mor) -> Option<Self::Mor>;
    fn label(&self, f: &Self::Mor) -> String;
}

/// Least `n >= -2` such that a morphism is n-truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruncationLevel {
    Level(i32),
    Unbounded,
}

impl TruncationLevel {
    pub fn at_most(self, i: i32) -> bool {
        matches!(self, TruncationLevel::Level(l) if l <= i)
    }
}

impl fmt::Display for TruncationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationLevel::Level(l) => write!(f, "{l}"),
            TruncationLevel::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Iterates the diagonal `x -> x ×_y x` until it becomes invertible.
/// Levels above `cap` are reported as `Unbounded`.
pub fn truncation_level<C: PullbackCategory>(c: &C, f: &C::Mor, cap: i32) -> Result<TruncationLevel, CatError> {
    let mut current = f.clone();
    let mut level = -2;
    loop {
        if c.is_invertible(&current) {
            return Ok(TruncationLevel::Level(level));
        }
        if level >= cap {
            return Ok(TruncationLevel::Unbounded);
        }
        let missing = || CatError::MissingPullback {
            f: c.label(&current),
            g: c.label(&current),
        };
        let cone = c.pullback(&current, &current).ok_or_else(missing)?;
        let id = c.id_of(c.dom(&current));
        current = c.mediate(&cone, &id, &id).ok_or_else(missing)?;
        level += 1;
    }
}

/// The pullback of the square's cospan and the comparison `w -> x ×_z y`.
pub fn gap_morphism<C: PullbackCategory>(c: &C, sq: &Square<C::Mor>) -> Result<(Cone<C::Mor>, C::Mor), CatError> {
    check_square(c, sq)?;
    let cone = c.pullback(&sq.right, &sq.bottom).ok_or_else(|| CatError::MissingPullback {
        f: c.label(&sq.right),
        g: c.label(&sq.bottom),
    })?;
    let gap = c
        .mediate(&cone, &sq.top, &sq.left)
        .expect("a commuting square is a cone over its cospan");
    Ok((cone, gap))
}

fn check_square<C: PullbackCategory>(c: &C, sq: &Square<C::Mor>) -> Result<(), CatError> {
    let typed = c.dom(&sq.top) == c.dom(&sq.left)
        && c.cod(&sq.top) == c.dom(&sq.right)
        && c.cod(&sq.left) == c.dom(&sq.bottom)
        && c.cod(&sq.right) == c.cod(&sq.bottom);
    if !typed || c.after(&sq.right, &sq.top) != c.after(&sq.bottom, &sq.left) {
        return Err(CatError::NotCommuting(format!(
            "{} then {} vs {} then {}",
            c.label(&sq.top),
            c.label(&sq.right),
            c.label(&sq.left),
            c.label(&sq.bottom)
        )));
    }
    Ok(())
}

impl FinCategory {
    /// Every commuting cone `(w, a, b)` over `f: x -> z <- y: g`, by apex.
    pub fn cones(&self, f: Mor, g: Mor) -> Vec<(Obj, Mor, Mor)> {
        let (x, y) = (self.source(f), self.source(g));
        let mut out = Vec::new();
        for w in 0..self.num_objects() {
            for &a in self.hom(w, x) {
                for &b in self.hom(w, y) {
                    if self.compose(f, a) == self.compose(g, b) {
                        out.push((w, a, b));
                    }
                }
            }
        }
        out
    }

    fn mediators(&self, apex: Obj, first: Mor, second: Mor, a: Mor, b: Mor) -> impl Iterator<Item = Mor> + '_ {
        self.hom(self.source(a), apex)
            .iter()
            .copied()
            .filter(move |&m| self.compose(first, m) == Some(a) && self.compose(second, m) == Some(b))
    }

    fn is_universal(&self, cone: (Obj, Mor, Mor), all: &[(Obj, Mor, Mor)]) -> bool {
        let (apex, first, second) = cone;
        all.iter()
            .all(|&(_, a, b)| self.mediators(apex, first, second, a, b).take(2).count() == 1)
    }

    /// Universal-property test against every competing cone.
    pub fn is_pullback_square(&self, sq: &Square) -> Result<bool, CatError> {
        check_square(self, sq)?;
        let all = self.cones(sq.right, sq.bottom);
        Ok(self.is_universal((self.source(sq.top), sq.top, sq.left), &all))
    }

    /// First universal cone in object order, found by exhaustive search.
    pub fn search_pullback(&self, f: Mor, g: Mor) -> Option<Cone<Mor>> {
        let all = self.cones(f, g);
        all.iter()
            .copied()
            .find(|&c| self.is_universal(c, &all))
            .map(|(apex, first, second)| Cone { apex, first, second })
    }

    /// Every universal cone over `f` and `g`: all choices of pullback.
    pub fn pullback_cones(&self, f: Mor, g: Mor) -> Vec<Cone<Mor>> {
        let all = self.cones(f, g);
        all.iter()
            .copied()
            .filter(|&c| self.is_universal(c, &all))
            .map(|(apex, first, second)| Cone { apex, first, second })
            .collect()
    }

    fn fiber_pairs(&self, f: Mor, g: Mor) -> Option<Vec<(usize, usize)>> {
        let (fv, gv) = (self.function_values(f)?, self.function_values(g)?);
        Some(fiber_product(fv, gv))
    }

    fn morphism_with_values(&self, s: Obj, t: Obj, v: &[usize]) -> Option<Mor> {
        self.hom(s, t).iter().copied().find(|&m| self.function_values(m) == Some(v))
    }

    fn full_finsets(&self) -> bool {
        matches!(self.backend(), Backend::FinSet { .. }) && self.has_all_functions()
    }

    /// True when every function between the listed sets is a morphism.
    pub fn has_all_functions(&self) -> bool {
        match self.backend() {
            Backend::FinSet { elements, .. } => (0..elements.len()).all(|s| {
                (0..elements.len()).all(|t| {
                    let (a, b) = (elements[s].len() as u32, elements[t].len());
                    self.hom(s, t).len() == b.pow(a)
                })
            }),
            _ => false,
        }
    }
}

impl PullbackCategory for FinCategory {
    type Mor = Mor;

    fn dom(&self, f: &Mor) -> Obj {
        self.source(*f)
    }

    fn cod(&self, f: &Mor) -> Obj {
        self.target(*f)
    }

    fn id_of(&self, x: Obj) -> Mor {
        self.identity(x)
    }

    fn after(&self, g: &Mor, f: &Mor) -> Option<Mor> {
        self.compose(*g, *f)
    }

    fn is_invertible(&self, f: &Mor) -> bool {
        self.is_iso(*f)
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Option<Cone<Mor>> {
        let (f, g) = (*f, *g);
        if self.target(f) != self.target(g) {
            return None;
        }
        let (x, y) = (self.source(f), self.source(g));
        if let Some(p) = self.poset() {
            let apex = p.meet(x, y)?;
            return Some(Cone {
                apex,
                first: self.hom(apex, x)[0],
                second: self.hom(apex, y)[0],
            });
        }
        if self.full_finsets() {
            let pairs = self.fiber_pairs(f, g)?;
            let apex = (0..self.num_objects()).find(|&o| self.set_size(o) == Some(pairs.len()));
            if let Some(apex) = apex {
                let firsts: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                let seconds: Vec<usize> = pairs.iter().map(|p| p.1).collect();
                return Some(Cone {
                    apex,
                    first: self.morphism_with_values(apex, x, &firsts)?,
                    second: self.morphism_with_values(apex, y, &seconds)?,
                });
            }
            return None;
        }
        self.search_pullback(f, g)
    }

    fn mediate(&self, cone: &Cone<Mor>, a: &Mor, b: &Mor) -> Option<Mor> {
        let w = self.source(*a);
        if self.poset().is_some() {
            return self.hom(w, cone.apex).first().copied();
        }
        if self.full_finsets() {
            let pairs: HashMap<(usize, usize), usize> = self
                .function_values(cone.first)?
                .iter()
                .zip(self.function_values(cone.second)?)
                .enumerate()
                .map(|(k, (&i, &j))| ((i, j), k))
                .collect();
            let (av, bv) = (self.function_values(*a)?, self.function_values(*b)?);
            let v: Option<Vec<usize>> = av.iter().zip(bv).map(|(&i, &j)| pairs.get(&(i, j)).copied()).collect();
            return self.morphism_with_values(w, cone.apex, &v?);
        }
        self.mediators(cone.apex, cone.first, cone.second, *a, *b).next()
    }

    fn label(&self, f: &Mor) -> String {
        self.name(*f).to_string()
    }
}

/// The fiber product `{(i, j) : f(i) = g(j)}` in lexicographic order.
pub fn fiber_product(f: &[usize], g: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &fi) in f.iter().enumerate() {
        for (j, &gj) in g.iter().enumerate() {
            if fi == gj {
                out.push((i, j));
            }
        }
    }
    out
}

/// A function between the standard sets `0..source` and `0..target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Function {
    pub source: usize,
    pub target: usize,
    pub values: Vec<usize>,
}

impl Function {
    pub fn new(target: usize, values: Vec<usize>) -> Self {
        Function {
            source: values.len(),
            target,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Function::new(n, (0..n).collect())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Every function `0..a -> 0..b`.
    pub fn all(a: usize, b: usize) -> Vec<Function> {
        super::all_functions(a, b).into_iter().map(|v| Function::new(b, v)).collect()
    }
}

/// The skeleton of finite sets: objects are cardinalities, pullbacks are
/// fiber products in lexicographic order. Nothing is materialized, so fiber
/// products of any size are available.
#[derive(Debug, Clone, Copy, Default)]
pub struct FinSetSkeleton;

impl PullbackCategory for FinSetSkeleton {
    type Mor = Function;

    fn dom(&self, f: &Function) -> Obj {
        f.source
    }

    fn cod(&self, f: &Function) -> Obj {
        f.target
    }

    fn id_of(&self, x: Obj) -> Function {
        Function::identity(x)
    }

    fn after(&self, g: &Function, f: &Function) -> Option<Function> {
        (f.target == g.source).then(|| Function::new(g.target, f.values.iter().map(|&v| g.values[v]).collect()))
    }

    fn is_invertible(&self, f: &Function) -> bool {
        f.source == f.target && f.is_injective()
    }

    fn pullback(&self, f: &Function, g: &Function) -> Option<Cone<Function>> {
        if f.target != g.target {
            return None;
        }
        let pairs = fiber_product(&f.values, &g.values);
        Some(Cone {
            apex: pairs.len(),
            first: Function::new(f.source, pairs.iter().map(|p| p.0).collect()),
            second: Function::new(g.source, pairs.iter().map(|p| p.1).collect()),
        })
    }

    fn mediate(&self, cone: &Cone<Function>, a: &Function, b: &Function) -> Option<Function> {
        let index: HashMap<(usize, usize), usize> = cone
            .first
            .values
            .iter()
            .zip(&cone.second.values)
            .enumerate()
            .map(|(k, (&i, &j))| ((i, j), k))
            .collect();
        let values: Option<Vec<usize>> = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&i, &j)| index.get(&(i, j)).copied())
            .collect();
        Some(Function::new(cone.apex, values?))
    }

    fn label(&self, f: &Function) -> String {
        format!("{}->{}{:?}", f.source, f.target, f.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use std::sync::Arc;

    fn pair(c: &FinCategory, x: Obj, y: Obj) -> Mor {
        c.hom(x, y)[0]
    }

    #[test]
    fn grid_corner_is_a_pullback() {
        let c = FinCategory::from_poset(Arc::new(Poset::grid(1, 1)));
        let (a, b, d, e) = (0, 1, 2, 3);
        let sq = Square {
            top: pair(&c, a, b),
            left: pair(&c, a, d),
            right: pair(&c, b, e),
            bottom: pair(&c, d, e),
        };
        assert!(c.is_pullback_square(&sq).unwrap());
        let id = c.identity(a);
        let ident = Square {
            top: id,
            left: id,
            right: id,
            bottom: id,
        };
        assert!(c.is_pullback_square(&ident).unwrap());
    }

    #[test]
    fn truncation_of_small_maps() {
        let s = FinSetSkeleton;
        let lv = |f: Function| truncation_level(&s, &f, 5).unwrap();
        assert_eq!(lv(Function::identity(2)), TruncationLevel::Level(-2));
        assert_eq!(lv(Function::new(3, vec![0, 2])), TruncationLevel::Level(-1));
        assert_eq!(lv(Function::new(1, vec![0, 0])), TruncationLevel::Level(0));
        assert_eq!(
            truncation_level(&s, &Function::new(1, vec![0, 0]), -1).unwrap(),
            TruncationLevel::Unbounded
        );
    }

    #[test]
    fn materialized_and_lazy_finsets_agree() {
        let c = FinCategory::finsets_of_sizes(&[0, 1, 2, 3, 4]);
        for f in 0..c.num_morphisms() {
            let lazy = Function::new(c.set_size(c.target(f)).unwrap(), c.function_values(f).unwrap().to_vec());
            let (big, small) = (truncation_level(&c, &f, 3), truncation_level(&FinSetSkeleton, &lazy, 3));
            if let Ok(level) = big {
                assert_eq!(level, small.unwrap());
            }
        }
    }

    #[test]
    fn table_search_matches_meets() {
        let p = Arc::new(Poset::grid(1, 2));
        let c = FinCategory::from_poset(p.clone());
        let table = FinCategory::from_data(&c.to_data()).unwrap();
        for f in 0..c.num_morphisms() {
            for g in c.maps_into(c.target(f)) {
                let fast = c.pullback(&f, &g).map(|k| k.apex);
                let slow = table.search_pullback(f, g).map(|k| k.apex);
                assert_eq!(fast, slow);
            }
        }
    }
}
