//! Classes of distinguished morphisms and the admissibility conditions.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::limits::PullbackCategory;
use super::{FinCategory, Mor};

/// A set of morphisms that always contains every identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    members: FixedBitSet,
}

impl EdgeClass {
    pub fn from_predicate(c: &FinCategory, pred: impl Fn(Mor) -> bool) -> Self {
        let mut members = FixedBitSet::with_capacity(c.num_morphisms());
        for f in 0..c.num_morphisms() {
            if c.is_identity(f) || pred(f) {
                members.insert(f);
            }
        }
        EdgeClass { members }
    }

    pub fn all(c: &FinCategory) -> Self {
        Self::from_predicate(c, |_| true)
    }

    pub fn identities(c: &FinCategory) -> Self {
        Self::from_predicate(c, |_| false)
    }

    /// Injective functions; only meaningful in the finite-set backend.
    pub fn injections(c: &FinCategory) -> Self {
        Self::from_predicate(c, |f| {
            c.function_values(f).is_some_and(|v| {
                let mut seen = vec![false; c.set_size(c.target(f)).unwrap_or(0)];
                v.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            })
        })
    }

    /// Surjective functions; only meaningful in the finite-set backend.
    pub fn surjections(c: &FinCategory) -> Self {
        Self::from_predicate(c, |f| {
            c.function_values(f).is_some_and(|v| {
                let mut seen = vec![false; c.set_size(c.target(f)).unwrap_or(0)];
                for &y in v {
                    seen[y] = true;
                }
                seen.into_iter().all(|s| s)
            })
        })
    }

    pub fn from_members(c: &FinCategory, members: &[Mor]) -> Self {
        Self::from_predicate(c, |f| members.contains(&f))
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.members.contains(f)
    }

    pub fn members(&self) -> Vec<Mor> {
        self.members.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersection(&self, other: &EdgeClass) -> EdgeClass {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        EdgeClass { members }
    }

    /// Whether `g ∘ f` lies in the class whenever `f` and `g` do.
    pub fn composition_violation(&self, c: &FinCategory) -> Option<(Mor, Mor)> {
        for f in self.members.ones() {
            for g in c.maps_out_of(c.target(f)) {
                if self.contains(g) && !self.contains(c.compose(g, f).expect("composable")) {
                    return Some((f, g));
                }
            }
        }
        None
    }
}

/// A category with the two distinguished classes: `e1` for column (direction 1)
/// edges and `e2` for row (direction 2) edges.
#[derive(Debug, Clone)]
pub struct MarkedCategory {
    pub category: Arc<FinCategory>,
    pub e1: EdgeClass,
    pub e2: EdgeClass,
}

impl MarkedCategory {
    pub fn new(category: Arc<FinCategory>, e1: EdgeClass, e2: EdgeClass) -> Self {
        assert_eq!(e1.members.len(), category.num_morphisms(), "e1 belongs to another category");
        assert_eq!(e2.members.len(), category.num_morphisms(), "e2 belongs to another category");
        MarkedCategory { category, e1, e2 }
    }

    /// Both classes equal to all morphisms.
    pub fn unmarked(category: Arc<FinCategory>) -> Self {
        let all = EdgeClass::all(&category);
        Self::new(category, all.clone(), all)
    }

    pub fn both(&self) -> EdgeClass {
        self.e1.intersection(&self.e2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    MissingIdentity(Mor),
    /// `edge` is in the class but its pullback along `along` is not.
    NotPullbackStable {
        edge: Mor,
        along: Mor,
        pulled_back: Mor,
    },
    /// `outer ∘ inner` and `outer` are in the class but `inner` is not.
    NotRightCancellable {
        inner: Mor,
        outer: Mor,
    },
}

impl AdmissibilityViolation {
    pub fn describe(&self, c: &FinCategory) -> String {
        match *self {
            AdmissibilityViolation::MissingIdentity(f) => format!("identity {} is missing", c.name(f)),
            AdmissibilityViolation::NotPullbackStable {
                edge,
                along,
                pulled_back,
            } => format!(
                "{} pulled back along {} gives {}, which is not in the class",
                c.name(edge),
                c.name(along),
                c.name(pulled_back)
            ),
            AdmissibilityViolation::NotRightCancellable { inner, outer } => format!(
                "{} ∘ {} and {} are in the class but {} is not",
                c.name(outer),
                c.name(inner),
                c.name(outer),
                c.name(inner)
            ),
        }
    }
}

/// Identities, stability under pullbacks (up to isomorphism of the apex), and
/// right cancellation.
/// Returns the first violation in that order.
pub fn check_admissible(c: &FinCategory, e: &EdgeClass) -> Option<AdmissibilityViolation> {
    for x in 0..c.num_objects() {
        if !e.contains(c.identity(x)) {
            return Some(AdmissibilityViolation::MissingIdentity(c.identity(x)));
        }
    }
    for edge in e.members.ones() {
        for along in c.maps_into(c.target(edge)) {
            if let Some(cone) = c.pullback(&edge, &along) {
                // Any pullback will do, so the chosen leg may be corrected by an automorphism.
                let stable = c
                    .hom(cone.apex, cone.apex)
                    .iter()
                    .any(|&iso| c.is_iso(iso) && e.contains(c.compose(cone.second, iso).expect("composable")));
                if !stable {
                    return Some(AdmissibilityViolation::NotPullbackStable {
                        edge,
                        along,
                        pulled_back: cone.second,
                    });
                }
            }
        }
    }
    for inner in 0..c.num_morphisms() {
        for outer in c.maps_out_of(c.target(inner)) {
            let composite = c.compose(outer, inner).expect("composable");
            if e.contains(outer) && e.contains(composite) && !e.contains(inner) {
                return Some(AdmissibilityViolation::NotRightCancellable { inner, outer });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    #[test]
    fn identities_are_always_admissible() {
        let c = FinCategory::finsets_of_sizes(&[0, 1, 2]);
        assert_eq!(check_admissible(&c, &EdgeClass::identities(&c)), None);
        let p = FinCategory::from_poset(Arc::new(Poset::grid(1, 1)));
        assert_eq!(check_admissible(&p, &EdgeClass::all(&p)), None);
    }

    #[test]
    fn surjections_fail_right_cancellation() {
        let c = FinCategory::finsets_of_sizes(&[0, 1, 2]);
        let v = check_admissible(&c, &EdgeClass::surjections(&c));
        assert!(matches!(v, Some(AdmissibilityViolation::NotRightCancellable { .. })), "{v:?}");
    }
}
