//! Over-categories, their finite limits, and cofilteredness.

use super::limits::{PullbackCategory, Square};
use super::{CatError, CategoryData, FinCategory, Functor, Mor, Obj};

/// `C_{/c}` together with the forgetful functor to `C`.
#[derive(Debug, Clone)]
pub struct Overcategory {
    pub category: FinCategory,
    pub projection: Functor,
    /// The structure map into `c` of each object.
    pub structure: Vec<Mor>,
}

/// Objects are the morphisms into `c` (named like them); a morphism `u over g`
/// is `u: x -> y` with `g ∘ u = f`.
pub fn overcategory(c: &FinCategory, over: Obj) -> Result<Overcategory, CatError> {
    if over >= c.num_objects() {
        return Err(CatError::UnknownObject(over.to_string()));
    }
    let structure: Vec<Mor> = c.maps_into(over).collect();
    let mut data = CategoryData {
        objects: structure.iter().map(|&f| c.name(f).to_string()).collect(),
        ..CategoryData::default()
    };
    let mut triangles: Vec<(usize, usize, Mor)> = Vec::new();
    for (i, &f) in structure.iter().enumerate() {
        for (j, &g) in structure.iter().enumerate() {
            for &u in c.hom(c.source(f), c.source(g)) {
                if c.compose(g, u) == Some(f) {
                    triangles.push((i, j, u));
                }
            }
        }
    }
    let name = |&(_, j, u): &(usize, usize, Mor)| format!("{} over {}", c.name(u), c.name(structure[j]));
    for t in &triangles {
        data.morphisms
            .push((name(t), data.objects[t.0].clone(), data.objects[t.1].clone()));
    }
    for (i, &f) in structure.iter().enumerate() {
        let id = c.identity(c.source(f));
        data.identities.push(name(&(i, i, id)));
    }
    for s in &triangles {
        for t in triangles.iter().filter(|t| t.0 == s.1) {
            let u = c.compose(t.2, s.2).expect("composable");
            data.composites.push((name(s), name(t), name(&(s.0, t.1, u))));
        }
    }
    let category = FinCategory::from_data(&data)?;
    let projection = Functor {
        objects: structure.iter().map(|&f| c.source(f)).collect(),
        morphisms: triangles.iter().map(|t| t.2).collect(),
    };
    Ok(Overcategory {
        category,
        projection,
        structure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitFailure {
    NoTerminal,
    MissingPullback {
        f: String,
        g: String,
    },
    /// The pullback exists in the over-category but its image in `C` is not one.
    NotPreserved {
        f: String,
        g: String,
    },
    /// The image under the induced functor is not a pullback.
    NotPreservedAlong {
        f: String,
        g: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvercategoryLimits {
    pub objects: usize,
    pub cospans: usize,
    pub failures: Vec<LimitFailure>,
}

impl OvercategoryLimits {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// First cospan of `C` without a pullback, by morphism index.
pub fn find_missing_pullback(c: &FinCategory) -> Option<(Mor, Mor)> {
    for f in 0..c.num_morphisms() {
        for g in c.maps_into(c.target(f)) {
            if c.pullback(&f, &g).is_none() {
                return Some((f, g));
            }
        }
    }
    None
}

/// Checks that `C_{/c}` has a terminal object and pullbacks, that the
/// projection to `C` preserves them, and, given a pullback-preserving
/// functor `F: C -> C'`, that the induced `C_{/c} -> C'_{/F(c)}` does too.
pub fn check_overcategory_limits(
    c: &FinCategory,
    over: Obj,
    along: Option<(&FinCategory, &Functor)>,
) -> Result<OvercategoryLimits, CatError> {
    if let Some((f, g)) = find_missing_pullback(c) {
        return Err(CatError::HypothesisFailed {
            name: "pullbacks".into(),
            witness: format!("{} and {} have no pullback", c.name(f), c.name(g)),
        });
    }
    let slice = overcategory(c, over)?;
    let k = &slice.category;
    let mut failures = Vec::new();
    let terminal = slice
        .structure
        .iter()
        .position(|&f| f == c.identity(over))
        .expect("id_c is an object");
    if (0..k.num_objects()).any(|x| k.hom(x, terminal).len() != 1) {
        failures.push(LimitFailure::NoTerminal);
    }
    let image = match along {
        Some((target, functor)) => {
            functor.validate(c, target)?;
            let image_over = overcategory(target, functor.objects[over])?;
            Some((target, functor, image_over))
        }
        None => None,
    };
    let mut cospans = 0;
    for u in 0..k.num_morphisms() {
        for v in k.maps_into(k.target(u)) {
            cospans += 1;
            let names = || (k.name(u).to_string(), k.name(v).to_string());
            let Some(cone) = k.pullback(&u, &v) else {
                let (f, g) = names();
                failures.push(LimitFailure::MissingPullback { f, g });
                continue;
            };
            let sq = Square {
                top: cone.first,
                left: cone.second,
                right: u,
                bottom: v,
            };
            let p = &slice.projection.morphisms;
            let down = Square {
                top: p[sq.top],
                left: p[sq.left],
                right: p[sq.right],
                bottom: p[sq.bottom],
            };
            if !c.is_pullback_square(&down)? {
                let (f, g) = names();
                failures.push(LimitFailure::NotPreserved { f, g });
            }
            if let Some((target, functor, image_over)) = &image {
                let send = |m: Mor| induced_morphism(c, &slice, target, functor, image_over, m);
                let up = Square {
                    top: send(sq.top),
                    left: send(sq.left),
                    right: send(sq.right),
                    bottom: send(sq.bottom),
                };
                if !image_over.category.is_pullback_square(&up)? {
                    let (f, g) = names();
                    failures.push(LimitFailure::NotPreservedAlong { f, g });
                }
            }
        }
    }
    Ok(OvercategoryLimits {
        objects: k.num_objects(),
        cospans,
        failures,
    })
}

fn induced_morphism(
    c: &FinCategory,
    slice: &Overcategory,
    target: &FinCategory,
    functor: &Functor,
    image_over: &Overcategory,
    m: Mor,
) -> Mor {
    let k = &slice.category;
    let u = functor.morphisms[slice.projection.morphisms[m]];
    let g = functor.morphisms[slice.structure[k.target(m)]];
    let f = functor.morphisms[slice.structure[k.source(m)]];
    let _ = c;
    let tk = &image_over.category;
    let src = image_over.structure.iter().position(|&s| s == f).expect("image object");
    let tgt = image_over.structure.iter().position(|&s| s == g).expect("image object");
    tk.hom(src, tgt)
        .iter()
        .copied()
        .find(|&w| image_over.projection.morphisms[w] == u)
        .unwrap_or_else(|| panic!("{} has no image triangle in {}", k.name(m), target.object_name(0)))
}

/// One entry of the product table of `C_{/c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEntry {
    pub first: String,
    pub second: String,
    /// Structure map of the product, when it exists.
    pub product: Option<String>,
}

/// Products of every pair of objects in `C_{/c}`, which exist even when `C`
/// lacks some pullbacks elsewhere.
pub fn overcategory_limit_table(c: &FinCategory, over: Obj) -> Result<Vec<ProductEntry>, CatError> {
    let slice = overcategory(c, over)?;
    let k = &slice.category;
    let terminal = slice
        .structure
        .iter()
        .position(|&f| f == c.identity(over))
        .expect("id_c is an object");
    let mut out = Vec::new();
    for a in 0..k.num_objects() {
        for b in a..k.num_objects() {
            let (u, v) = (k.hom(a, terminal)[0], k.hom(b, terminal)[0]);
            out.push(ProductEntry {
                first: k.object_name(a).to_string(),
                second: k.object_name(b).to_string(),
                product: k.search_pullback(u, v).map(|cone| k.object_name(cone.apex).to_string()),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CofilteredViolation {
    Empty,
    /// No object maps to both.
    PairWithoutCone(Obj, Obj),
    /// No `h` with `f ∘ h = g ∘ h`.
    ParallelPairUnequalized(Mor, Mor),
}

/// Non-empty, every pair of objects has a cone, every parallel pair is equalized.
pub fn check_cofiltered(c: &FinCategory) -> Option<CofilteredViolation> {
    let n = c.num_objects();
    if n == 0 {
        return Some(CofilteredViolation::Empty);
    }
    for x in 0..n {
        for y in x + 1..n {
            if !(0..n).any(|w| !c.hom(w, x).is_empty() && !c.hom(w, y).is_empty()) {
                return Some(CofilteredViolation::PairWithoutCone(x, y));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let hom = c.hom(x, y);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    if !c.maps_into(x).any(|h| c.compose(f, h) == c.compose(g, h)) {
                        return Some(CofilteredViolation::ParallelPairUnequalized(f, g));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use std::sync::Arc;

    #[test]
    fn slice_over_top_is_everything() {
        let c = FinCategory::from_poset(Arc::new(Poset::grid(1, 1)));
        let s = overcategory(&c, 3).unwrap();
        assert_eq!(s.category.num_objects(), 4);
        assert_eq!(s.category.num_morphisms(), c.num_morphisms());
        let t = FinCategory::finsets_of_sizes(&[0, 1, 2]);
        assert_eq!(overcategory(&t, 1).unwrap().category.num_objects(), 3);
    }

    #[test]
    fn cofiltered_examples() {
        let chain = FinCategory::from_poset(Arc::new(Poset::chain(2)));
        assert_eq!(check_cofiltered(&chain), None);
        let two = FinCategory::from_poset(Arc::new(Poset::antichain(2)));
        assert_eq!(check_cofiltered(&two), Some(CofilteredViolation::PairWithoutCone(0, 1)));
    }

    #[test]
    fn identity_functor_preserves_slice_limits() {
        let c = FinCategory::from_poset(Arc::new(Poset::grid(1, 1)));
        let id = Functor::identity(&c);
        let report = check_overcategory_limits(&c, 3, Some((&c, &id))).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
