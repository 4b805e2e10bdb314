//! Finite categories with computable pullbacks, over-categories, truncation
//! levels, admissible edge classes and cofilteredness.
//!
//! Objects and morphisms are indices. Composition is a dense table, so every
//! query is a lookup once the category is built.

mod edges;
mod limits;
mod over;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::Poset;

pub use edges::{check_admissible, AdmissibilityViolation, EdgeClass, MarkedCategory};
pub use limits::{gap_morphism, truncation_level, Cone, FinSetSkeleton, Function, PullbackCategory, Square, TruncationLevel};
pub use over::{
    check_cofiltered, check_overcategory_limits, find_missing_pullback, overcategory, overcategory_limit_table,
    CofilteredViolation, LimitFailure, Overcategory, OvercategoryLimits, ProductEntry,
};

pub type Obj = usize;
pub type Mor = usize;
/// A named function `(name, source set, target set, values)`.
pub type NamedFunction = (String, String, String, Vec<usize>);

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("composition is not associative at ({h} ∘ {g}) ∘ {f}")]
    NotAssociative { f: String, g: String, h: String },
    #[error("object {0} has no identity")]
    MissingIdentity(String),
    #[error("ill-typed composite: {0}")]
    IllTypedComposite(String),
    #[error("composite {g} ∘ {f} is not given")]
    MissingComposite { f: String, g: String },
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("duplicate name {0}")]
    DuplicateName(String),
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("no pullback of {f} and {g}")]
    MissingPullback { f: String, g: String },
    #[error("{what} of size {size} exceeds the budget {cap}")]
    SizeBudgetExceeded { what: &'static str, size: usize, cap: usize },
    #[error("hypothesis {name} fails: {witness}")]
    HypothesisFailed { name: String, witness: String },
    #[error("not a functor: {0}")]
    NotFunctorial(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: Obj,
    pub target: Obj,
}

/// Where a category came from; used for fast paths and for export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Table,
    Poset(Arc<Poset>),
    /// Finite sets (element names per object) and value tables per morphism.
    FinSet {
        elements: Vec<Vec<String>>,
        values: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Mor>,
    /// `compose[g * m + f]` is `g ∘ f`, or `NONE` when not composable.
    compose: Vec<u32>,
    /// `homs[x * n + y]` lists the morphisms `x -> y` in index order.
    homs: Vec<Vec<Mor>>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
    backend: Backend,
}

/// Raw category data: composites are `(f, g, g ∘ f)` by morphism name.
/// Composites with an identity may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryData {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: Vec<String>,
    pub composites: Vec<(String, String, String)>,
}

fn index_of(map: &HashMap<String, usize>, name: &str, object: bool) -> Result<usize, CatError> {
    map.get(name).copied().ok_or_else(|| {
        if object {
            CatError::UnknownObject(name.to_string())
        } else {
            CatError::UnknownMorphism(name.to_string())
        }
    })
}

fn name_index(names: &[String]) -> Result<HashMap<String, usize>, CatError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(CatError::DuplicateName(n.clone()));
        }
    }
    Ok(map)
}

impl FinCategory {
    /// Checks the table and builds the category.
    pub fn from_data(data: &CategoryData) -> Result<Self, CatError> {
        let object_index = name_index(&data.objects)?;
        let names: Vec<String> = data.morphisms.iter().map(|m| m.0.clone()).collect();
        let morphism_index = name_index(&names)?;
        let mut morphisms = Vec::with_capacity(names.len());
        for (name, s, t) in &data.morphisms {
            morphisms.push(Morphism {
                name: name.clone(),
                source: index_of(&object_index, s, true)?,
                target: index_of(&object_index, t, true)?,
            });
        }
        if data.identities.len() != data.objects.len() {
            let missing = data.objects.get(data.identities.len()).cloned().unwrap_or_default();
            return Err(CatError::MissingIdentity(missing));
        }
        let mut identities = Vec::with_capacity(data.objects.len());
        for (x, id) in data.identities.iter().enumerate() {
            let m = index_of(&morphism_index, id, false)?;
            if morphisms[m].source != x || morphisms[m].target != x {
                return Err(CatError::MissingIdentity(data.objects[x].clone()));
            }
            identities.push(m);
        }
        let mut triples = Vec::with_capacity(data.composites.len());
        for (f, g, h) in &data.composites {
            triples.push((
                index_of(&morphism_index, f, false)?,
                index_of(&morphism_index, g, false)?,
                index_of(&morphism_index, h, false)?,
            ));
        }
        Self::assemble(
            data.objects.clone(),
            morphisms,
            identities,
            object_index,
            morphism_index,
            Backend::Table,
            |cat, table| {
                for &(f, g, h) in &triples {
                    let (mf, mg, mh) = (&cat[f], &cat[g], &cat[h]);
                    if mf.target != mg.source || mh.source != mf.source || mh.target != mg.target {
                        return Err(CatError::IllTypedComposite(format!(
                            "{} ∘ {} = {}",
                            mg.name, mf.name, mh.name
                        )));
                    }
                    table(g, f, h);
                }
                Ok(())
            },
        )
    }

    /// Fills the identity composites, runs `fill`, then checks the laws.
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<Mor>,
        object_index: HashMap<String, Obj>,
        morphism_index: HashMap<String, Mor>,
        backend: Backend,
        fill: impl FnOnce(&[Morphism], &mut dyn FnMut(Mor, Mor, Mor)) -> Result<(), CatError>,
    ) -> Result<Self, CatError> {
        let n = objects.len();
        let m = morphisms.len();
        let mut compose = vec![NONE; m * m];
        let mut conflict = None;
        {
            let mut set = |g: Mor, f: Mor, h: Mor| {
                let slot = &mut compose[g * m + f];
                if *slot != NONE && *slot != h as u32 && conflict.is_none() {
                    conflict = Some((g, f));
                }
                *slot = h as u32;
            };
            fill(&morphisms, &mut set)?;
            for (f, mf) in morphisms.iter().enumerate() {
                set(identities[mf.target], f, f);
                set(f, identities[mf.source], f);
            }
        }
        if let Some((g, f)) = conflict {
            return Err(CatError::IllTypedComposite(format!(
                "{} ∘ {} is given two values",
                morphisms[g].name, morphisms[f].name
            )));
        }
        let mut homs = vec![Vec::new(); n * n];
        for (f, mf) in morphisms.iter().enumerate() {
            homs[mf.source * n + mf.target].push(f);
        }
        let cat = FinCategory {
            objects,
            morphisms,
            identities,
            compose,
            homs,
            object_index,
            morphism_index,
            backend,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CatError> {
        let m = self.morphisms.len();
        for f in 0..m {
            for g in self.maps_out_of(self.morphisms[f].target) {
                if self.compose(g, f).is_none() {
                    return Err(CatError::MissingComposite {
                        f: self.morphisms[f].name.clone(),
                        g: self.morphisms[g].name.clone(),
                    });
                }
            }
        }
        for f in 0..m {
            for g in self.maps_out_of(self.morphisms[f].target) {
                let gf = self.compose(g, f).expect("checked above");
                for h in self.maps_out_of(self.morphisms[g].target) {
                    let hg = self.compose(h, g).expect("checked above");
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(CatError::NotAssociative {
                            f: self.morphisms[f].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            h: self.morphisms[h].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// A category given by its morphisms and a composition function, which is
    /// only called on composable pairs. The laws are checked.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<Mor>,
        compose: impl Fn(Mor, Mor) -> Option<Mor>,
    ) -> Result<Self, CatError> {
        let object_index = name_index(&objects)?;
        let names: Vec<String> = morphisms.iter().map(|m| m.name.clone()).collect();
        let morphism_index = name_index(&names)?;
        Self::assemble(
            objects,
            morphisms,
            identities,
            object_index,
            morphism_index,
            Backend::Table,
            |mors, set| {
                for (f, mf) in mors.iter().enumerate() {
                    for (g, mg) in mors.iter().enumerate() {
                        if mg.source == mf.target {
                            if let Some(h) = compose(g, f) {
                                set(g, f, h);
                            }
                        }
                    }
                }
                Ok(())
            },
        )
    }

    /// The poset as a category: one morphism `x->y` per `x <= y`.
    pub fn from_poset(poset: Arc<Poset>) -> Self {
        let n = poset.len();
        let objects: Vec<String> = poset.names().to_vec();
        let mut morphisms = Vec::new();
        let mut pair_index = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in poset.up(x).ones() {
                pair_index[x * n + y] = morphisms.len();
                morphisms.push(Morphism {
                    name: format!("{}->{}", objects[x], objects[y]),
                    source: x,
                    target: y,
                });
            }
        }
        let identities = (0..n).map(|x| pair_index[x * n + x]).collect();
        let object_index = name_index(&objects).expect("poset names are distinct");
        let morphism_index = morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        Self::assemble(
            objects,
            morphisms,
            identities,
            object_index,
            morphism_index,
            Backend::Poset(poset.clone()),
            |mors, set| {
                for (f, mf) in mors.iter().enumerate() {
                    for z in poset.up(mf.target).ones() {
                        let g = pair_index[mf.target * n + z];
                        set(g, f, pair_index[mf.source * n + z]);
                    }
                }
                Ok(())
            },
        )
        .expect("a poset is a category")
    }

    /// All functions between the listed finite sets.
    pub fn finsets(sets: &[(String, Vec<String>)]) -> Result<Self, CatError> {
        Self::finset_functions(sets, None)
    }

    /// Finite sets with the listed functions, given as value tables
    /// `(name, source, target, values)`; identities and composites are added
    /// and the listed functions must then be closed under composition.
    pub fn finset_functions(sets: &[(String, Vec<String>)], functions: Option<&[NamedFunction]>) -> Result<Self, CatError> {
        let objects: Vec<String> = sets.iter().map(|s| s.0.clone()).collect();
        let object_index = name_index(&objects)?;
        let sizes: Vec<usize> = sets.iter().map(|s| s.1.len()).collect();
        let mut morphisms = Vec::new();
        let mut values: Vec<Vec<usize>> = Vec::new();
        let mut by_table: HashMap<(Obj, Obj, Vec<usize>), Mor> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut add = |name: Option<String>, s: Obj, t: Obj, v: Vec<usize>| -> Mor {
            if let Some(&existing) = by_table.get(&(s, t, v.clone())) {
                return existing;
            }
            let name = name.unwrap_or_else(|| function_name(&objects[s], &objects[t], &v));
            let i = morphisms.len();
            morphisms.push(Morphism {
                name: name.clone(),
                source: s,
                target: t,
            });
            names.push(name);
            by_table.insert((s, t, v.clone()), i);
            values.push(v);
            i
        };
        let mut identities = Vec::with_capacity(objects.len());
        for (x, &size) in sizes.iter().enumerate() {
            identities.push(add(None, x, x, (0..size).collect()));
        }
        match functions {
            None => {
                for s in 0..objects.len() {
                    for t in 0..objects.len() {
                        for v in all_functions(sizes[s], sizes[t]) {
                            add(None, s, t, v);
                        }
                    }
                }
            }
            Some(list) => {
                for (name, s, t, v) in list {
                    let s = index_of(&object_index, s, true)?;
                    let t = index_of(&object_index, t, true)?;
                    if v.len() != sizes[s] || v.iter().any(|&y| y >= sizes[t]) {
                        return Err(CatError::IllTypedComposite(format!(
                            "{name} is not a function {} -> {}",
                            objects[s], objects[t]
                        )));
                    }
                    add(Some(name.clone()), s, t, v.clone());
                }
            }
        }
        let morphism_index = name_index(&names)?;
        let elements = sets.iter().map(|s| s.1.clone()).collect();
        let tables = values.clone();
        Self::assemble(
            objects,
            morphisms,
            identities,
            object_index,
            morphism_index,
            Backend::FinSet { elements, values },
            |mors, set| {
                for (f, mf) in mors.iter().enumerate() {
                    for (g, mg) in mors.iter().enumerate() {
                        if mg.source != mf.target {
                            continue;
                        }
                        let v: Vec<usize> = tables[f].iter().map(|&a| tables[g][a]).collect();
                        match by_table.get(&(mf.source, mg.target, v)) {
                            Some(&h) => set(g, f, h),
                            None => {
                                return Err(CatError::MissingComposite {
                                    f: mf.name.clone(),
                                    g: mg.name.clone(),
                                })
                            }
                        }
                    }
                }
                Ok(())
            },
        )
    }

    /// Finite sets named by their sizes, with elements `e0, e1, ...`.
    pub fn finsets_of_sizes(sizes: &[usize]) -> Self {
        Self::finsets(&size_sets(sizes)).expect("distinct sizes give distinct names")
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn poset(&self) -> Option<&Arc<Poset>> {
        match &self.backend {
            Backend::Poset(p) => Some(p),
            _ => None,
        }
    }

    /// The value table of a morphism in the finite-set backend.
    pub fn function_values(&self, f: Mor) -> Option<&[usize]> {
        match &self.backend {
            Backend::FinSet { values, .. } => Some(&values[f]),
            _ => None,
        }
    }

    /// Number of elements of an object in the finite-set backend.
    pub fn set_size(&self, x: Obj) -> Option<usize> {
        match &self.backend {
            Backend::FinSet { elements, .. } => Some(elements[x].len()),
            _ => None,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn object(&self, name: &str) -> Result<Obj, CatError> {
        index_of(&self.object_index, name, true)
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, name: &str) -> Result<Mor, CatError> {
        index_of(&self.morphism_index, name, false)
    }

    pub fn name(&self, f: Mor) -> &str {
        &self.morphisms[f].name
    }

    pub fn source(&self, f: Mor) -> Obj {
        self.morphisms[f].source
    }

    pub fn target(&self, f: Mor) -> Obj {
        self.morphisms[f].target
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identities[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    /// `g ∘ f`, when the target of `f` is the source of `g`.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let h = self.compose[g * self.morphisms.len() + f];
        (h != NONE).then_some(h as Mor)
    }

    /// Composes a path given in diagrammatic order (`path[0]` first).
    pub fn compose_path(&self, path: &[Mor]) -> Option<Mor> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Morphisms out of `x`, grouped by target.
    pub fn maps_out_of(&self, x: Obj) -> impl Iterator<Item = Mor> + '_ {
        (0..self.objects.len()).flat_map(move |y| self.hom(x, y).iter().copied())
    }

    /// Morphisms into `y`, grouped by source.
    pub fn maps_into(&self, y: Obj) -> impl Iterator<Item = Mor> + '_ {
        (0..self.objects.len()).flat_map(move |x| self.hom(x, y).iter().copied())
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        let (x, y) = (self.source(f), self.target(f));
        self.hom(y, x)
            .iter()
            .any(|&g| self.compose(g, f) == Some(self.identity(x)) && self.compose(f, g) == Some(self.identity(y)))
    }

    /// The raw table form, with the identity composites left implicit.
    pub fn to_data(&self) -> CategoryData {
        let m = self.morphisms.len();
        let mut composites = Vec::new();
        for f in 0..m {
            for g in 0..m {
                if self.is_identity(f) || self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.compose(g, f) {
                    composites.push((self.name(f).to_string(), self.name(g).to_string(), self.name(h).to_string()));
                }
            }
        }
        CategoryData {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|mf| {
                    (
                        mf.name.clone(),
                        self.objects[mf.source].clone(),
                        self.objects[mf.target].clone(),
                    )
                })
                .collect(),
            identities: self.identities.iter().map(|&i| self.name(i).to_string()).collect(),
            composites,
        }
    }
}

pub(crate) fn function_name(source: &str, target: &str, values: &[usize]) -> String {
    let v: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("{source}->{target}[{}]", v.join(","))
}

pub(crate) fn size_sets(sizes: &[usize]) -> Vec<(String, Vec<String>)> {
    sizes
        .iter()
        .map(|&k| (k.to_string(), (0..k).map(|i| format!("e{i}")).collect()))
        .collect()
}

/// Every value table `0..a -> 0..b`, in lexicographic order.
pub fn all_functions(a: usize, b: usize) -> Vec<Vec<usize>> {
    if a == 0 {
        return vec![Vec::new()];
    }
    if b == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(b.pow(a as u32));
    let mut v = vec![0; a];
    loop {
        out.push(v.clone());
        let mut i = a;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < b {
                break;
            }
            v[i] = 0;
        }
    }
}

/// An `n`-simplex of the nerve of a category: `n + 1` objects and the `n`
/// composable edges between consecutive ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComposableChain {
    pub objects: Vec<Obj>,
    pub edges: Vec<Mor>,
}

impl ComposableChain {
    pub fn point(x: Obj) -> Self {
        ComposableChain {
            objects: vec![x],
            edges: Vec::new(),
        }
    }

    /// Reads the objects off a non-empty list of composable edges.
    pub fn from_edges(c: &FinCategory, edges: &[Mor]) -> Result<Self, CatError> {
        let Some(&first) = edges.first() else {
            return Err(CatError::IllTypedComposite("an empty edge list has no objects".into()));
        };
        let mut objects = vec![c.source(first)];
        for &f in edges {
            if c.source(f) != *objects.last().expect("non-empty") {
                return Err(CatError::IllTypedComposite(format!(
                    "{} does not continue the chain",
                    c.name(f)
                )));
            }
            objects.push(c.target(f));
        }
        Ok(ComposableChain {
            objects,
            edges: edges.to_vec(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.edges.len()
    }
}

/// A functor between finite categories, by its object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<Obj>,
    pub morphisms: Vec<Mor>,
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Self {
        Functor {
            objects: (0..c.num_objects()).collect(),
            morphisms: (0..c.num_morphisms()).collect(),
        }
    }

    /// Checks typing, identities and composites.
    pub fn validate(&self, source: &FinCategory, target: &FinCategory) -> Result<(), CatError> {
        if self.objects.len() != source.num_objects() || self.morphisms.len() != source.num_morphisms() {
            return Err(CatError::NotFunctorial("maps have the wrong length".into()));
        }
        for (f, &ff) in self.morphisms.iter().enumerate() {
            if ff >= target.num_morphisms()
                || target.source(ff) != self.objects[source.source(f)]
                || target.target(ff) != self.objects[source.target(f)]
            {
                return Err(CatError::NotFunctorial(format!(
                    "{} is sent to an ill-typed morphism",
                    source.name(f)
                )));
            }
        }
        for x in 0..source.num_objects() {
            if self.morphisms[source.identity(x)] != target.identity(self.objects[x]) {
                return Err(CatError::NotFunctorial(format!(
                    "identity of {} is not preserved",
                    source.object_name(x)
                )));
            }
        }
        for f in 0..source.num_morphisms() {
            for g in source.maps_out_of(source.target(f)) {
                let gf = source.compose(g, f).expect("composable");
                if target.compose(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[gf]) {
                    return Err(CatError::NotFunctorial(format!(
                        "{} ∘ {} is not preserved",
                        source.name(g),
                        source.name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}
