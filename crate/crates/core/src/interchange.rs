//! JSON documents for posets, complexes, certificates, categories and grids,
//! and DOT renderings. Everything refers to elements and morphisms by name.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anodyne::{AnodyneCertificate, HornMove};
use crate::fincat::{Backend, CatError, CategoryData, EdgeClass, FinCategory, Functor, MarkedCategory, NamedFunction};
use crate::grid::GridSimplex;
use crate::nerve::{NerveError, SubNerve};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0} has no DOT rendering")]
    UnsupportedType(&'static str),
}

type Result<T> = std::result::Result<T, InterchangeError>;

/// Elements and Hasse covers; the order is the reflexive transitive closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn from_poset(p: &Poset) -> Self {
        PosetDoc {
            elements: p.names().to_vec(),
            covers: p.cover_names(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Ok(Poset::new(&self.elements, &self.covers)?)
    }
}

/// A complex by its maximal chains; faces are regenerated on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubNerveDoc {
    pub base: PosetDoc,
    pub maximal_chains: Vec<Vec<String>>,
}

fn chain_names(p: &Poset, chain: &[usize]) -> Vec<String> {
    chain.iter().map(|&v| p.name(v).to_string()).collect()
}

fn chain_indices(p: &Poset, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|n| Ok(p.index_of(n)?)).collect()
}

fn load_complex(base: &Arc<Poset>, maximal: &[Vec<String>]) -> Result<SubNerve> {
    let chains: Vec<Vec<usize>> = maximal.iter().map(|c| chain_indices(base, c)).collect::<Result<_>>()?;
    Ok(SubNerve::from_chains(base.clone(), &chains)?)
}

impl SubNerveDoc {
    pub fn from_complex(k: &SubNerve) -> Self {
        SubNerveDoc {
            base: PosetDoc::from_poset(k.base()),
            maximal_chains: k.maximal_chains().iter().map(|c| chain_names(k.base(), c)).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<SubNerve> {
        load_complex(&Arc::new(self.base.to_poset()?), &self.maximal_chains)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub chain: Vec<String>,
    pub k: usize,
}

/// Horn moves with the start and target complexes, all over one base poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub base: PosetDoc,
    pub start: Vec<Vec<String>>,
    pub target: Vec<Vec<String>>,
    pub moves: Vec<MoveDoc>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &AnodyneCertificate) -> Self {
        let base = cert.start.base();
        let maximal = |k: &SubNerve| k.maximal_chains().iter().map(|c| chain_names(base, c)).collect();
        CertificateDoc {
            base: PosetDoc::from_poset(base),
            start: maximal(&cert.start),
            target: maximal(&cert.target),
            moves: cert
                .moves
                .iter()
                .map(|m| MoveDoc {
                    chain: chain_names(base, &m.chain),
                    k: m.k,
                })
                .collect(),
        }
    }

    /// Loads without validating; call [`AnodyneCertificate::validate`] to check it.
    pub fn to_certificate(&self) -> Result<AnodyneCertificate> {
        let base = Arc::new(self.base.to_poset()?);
        let moves = self
            .moves
            .iter()
            .map(|m| Ok(HornMove::new(chain_indices(&base, &m.chain)?, m.k)))
            .collect::<Result<_>>()?;
        Ok(AnodyneCertificate {
            start: load_complex(&base, &self.start)?,
            target: load_complex(&base, &self.target)?,
            moves,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDoc {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    pub values: Vec<usize>,
}

/// A finite category: a composition table, a poset, or finite sets with
/// functions (all of them when `functions` is absent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryDoc {
    Table(CategoryData),
    Poset(PosetDoc),
    FinSets {
        sets: Vec<SetDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        functions: Option<Vec<FunctionDoc>>,
    },
}

impl CategoryDoc {
    pub fn from_category(c: &FinCategory) -> Self {
        match c.backend() {
            Backend::Table => CategoryDoc::Table(c.to_data()),
            Backend::Poset(p) => CategoryDoc::Poset(PosetDoc::from_poset(p)),
            Backend::FinSet { elements, values } => CategoryDoc::FinSets {
                sets: c
                    .objects()
                    .iter()
                    .zip(elements)
                    .map(|(name, el)| SetDoc {
                        name: name.clone(),
                        elements: el.clone(),
                    })
                    .collect(),
                functions: Some(
                    c.morphisms()
                        .iter()
                        .zip(values)
                        .map(|(m, v)| FunctionDoc {
                            name: m.name.clone(),
                            source: c.object_name(m.source).to_string(),
                            target: c.object_name(m.target).to_string(),
                            values: v.clone(),
                        })
                        .collect(),
                ),
            },
        }
    }

    pub fn to_category(&self) -> Result<FinCategory> {
        Ok(match self {
            CategoryDoc::Table(data) => FinCategory::from_data(data)?,
            CategoryDoc::Poset(p) => FinCategory::from_poset(Arc::new(p.to_poset()?)),
            CategoryDoc::FinSets { sets, functions } => {
                let sets: Vec<(String, Vec<String>)> = sets.iter().map(|s| (s.name.clone(), s.elements.clone())).collect();
                let functions: Option<Vec<NamedFunction>> = functions.as_ref().map(|list| {
                    list.iter()
                        .map(|f| (f.name.clone(), f.source.clone(), f.target.clone(), f.values.clone()))
                        .collect()
                });
                FinCategory::finset_functions(&sets, functions.as_deref())?
            }
        })
    }
}

/// An edge class by morphism names; `all`, `identities`, `injections` and
/// `surjections` are accepted as shorthands.
pub fn parse_edge_class(c: &FinCategory, spec: &str) -> Result<EdgeClass> {
    Ok(match spec.trim() {
        "all" => EdgeClass::all(c),
        "identities" => EdgeClass::identities(c),
        "injections" => EdgeClass::injections(c),
        "surjections" => EdgeClass::surjections(c),
        list => {
            let mut members: Vec<usize> = (0..c.num_objects()).map(|x| c.identity(x)).collect();
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                members.push(c.morphism(name)?);
            }
            EdgeClass::from_members(c, &members)
        }
    })
}

pub fn marked_category(c: Arc<FinCategory>, e1: &str, e2: &str) -> Result<MarkedCategory> {
    let e1 = parse_edge_class(&c, e1)?;
    let e2 = parse_edge_class(&c, e2)?;
    Ok(MarkedCategory::new(c, e1, e2))
}

/// A grid by its object names, row-major, with optional edge names; an omitted
/// edge is the unique morphism between its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDoc {
    pub rows: usize,
    pub cols: usize,
    pub objects: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizontal: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertical: Option<Vec<Vec<String>>>,
}

fn pick(table: &Option<Vec<Vec<String>>>, p: usize, q: usize) -> Option<&String> {
    table.as_ref()?.get(p)?.get(q)
}

impl GridDoc {
    pub fn from_grid(c: &FinCategory, g: &GridSimplex) -> Self {
        let name = |f: usize| c.name(f).to_string();
        GridDoc {
            rows: g.rows,
            cols: g.cols,
            objects: (0..=g.rows)
                .map(|p| (0..=g.cols).map(|q| c.object_name(g.object(p, q)).to_string()).collect())
                .collect(),
            horizontal: Some(
                (0..=g.rows)
                    .map(|p| (0..g.cols).map(|q| name(g.row_edge(p, q))).collect())
                    .collect(),
            ),
            vertical: Some(
                (0..g.rows)
                    .map(|p| (0..=g.cols).map(|q| name(g.column_edge(p, q))).collect())
                    .collect(),
            ),
        }
    }

    pub fn to_grid(&self, c: &FinCategory) -> Result<GridSimplex> {
        let (rows, cols) = (self.rows, self.cols);
        if self.objects.len() != rows + 1 || self.objects.iter().any(|r| r.len() != cols + 1) {
            return Err(InterchangeError::Invalid(format!(
                "object matrix is not {}x{}",
                rows + 1,
                cols + 1
            )));
        }
        let objects: Vec<usize> = self
            .objects
            .iter()
            .flatten()
            .map(|n| c.object(n))
            .collect::<std::result::Result<_, _>>()?;
        let at = |p: usize, q: usize| objects[p * (cols + 1) + q];
        let edge = |given: Option<&String>, x: usize, y: usize| -> Result<usize> {
            match given {
                Some(name) => {
                    let f = c.morphism(name)?;
                    if c.source(f) != x || c.target(f) != y {
                        return Err(InterchangeError::Invalid(format!("{name} has the wrong endpoints")));
                    }
                    Ok(f)
                }
                None => match c.hom(x, y) {
                    [f] => Ok(*f),
                    hom => Err(InterchangeError::Invalid(format!(
                        "{} morphisms {} -> {}; name the edge",
                        hom.len(),
                        c.object_name(x),
                        c.object_name(y)
                    ))),
                },
            }
        };
        let mut horizontal = Vec::new();
        for p in 0..=rows {
            for q in 0..cols {
                horizontal.push(edge(pick(&self.horizontal, p, q), at(p, q), at(p, q + 1))?);
            }
        }
        let mut vertical = Vec::new();
        for p in 0..rows {
            for q in 0..=cols {
                vertical.push(edge(pick(&self.vertical, p, q), at(p, q), at(p + 1, q))?);
            }
        }
        Ok(GridSimplex {
            rows,
            cols,
            objects,
            horizontal,
            vertical,
            reversed: [false; 2],
        })
    }
}

/// A functor `C -> D` by names; `D` travels with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub target: CategoryDoc,
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

impl FunctorDoc {
    pub fn from_functor(source: &FinCategory, target: &FinCategory, f: &Functor) -> Self {
        FunctorDoc {
            target: CategoryDoc::from_category(target),
            objects: (0..source.num_objects())
                .map(|x| {
                    (
                        source.object_name(x).to_string(),
                        target.object_name(f.objects[x]).to_string(),
                    )
                })
                .collect(),
            morphisms: (0..source.num_morphisms())
                .map(|m| (source.name(m).to_string(), target.name(f.morphisms[m]).to_string()))
                .collect(),
        }
    }

    pub fn to_functor(&self, source: &FinCategory) -> Result<(FinCategory, Functor)> {
        let target = self.target.to_category()?;
        let mut objects = vec![usize::MAX; source.num_objects()];
        for (a, b) in &self.objects {
            objects[source.object(a)?] = target.object(b)?;
        }
        let mut morphisms = vec![usize::MAX; source.num_morphisms()];
        for (a, b) in &self.morphisms {
            morphisms[source.morphism(a)?] = target.morphism(b)?;
        }
        if let Some(x) = objects.iter().position(|&o| o == usize::MAX) {
            return Err(InterchangeError::Invalid(format!(
                "object {} is not mapped",
                source.object_name(x)
            )));
        }
        // Identities may be left out.
        for x in 0..source.num_objects() {
            let id = source.identity(x);
            if morphisms[id] == usize::MAX {
                morphisms[id] = target.identity(objects[x]);
            }
        }
        if let Some(m) = morphisms.iter().position(|&f| f == usize::MAX) {
            return Err(InterchangeError::Invalid(format!(
                "morphism {} is not mapped",
                source.name(m)
            )));
        }
        let functor = Functor { objects, morphisms };
        functor.validate(source, &target)?;
        Ok((target, functor))
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram: nodes are elements, edges are covers.
pub fn poset_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n");
    for name in p.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (a, b) in p.cover_names() {
        let _ = writeln!(out, "  {} -> {};", quote(&a), quote(&b));
    }
    out.push_str("}\n");
    out
}

/// The 1-skeleton of a complex.
pub fn complex_dot(k: &SubNerve) -> String {
    let p = k.base();
    let mut out = String::from("digraph complex {\n");
    for v in k.vertices() {
        let _ = writeln!(out, "  {};", quote(p.name(v)));
    }
    for e in k.simplices(1) {
        let _ = writeln!(out, "  {} -> {};", quote(p.name(e[0])), quote(p.name(e[1])));
    }
    out.push_str("}\n");
    out
}

/// Objects and non-identity morphisms.
pub fn category_dot(c: &FinCategory) -> String {
    let mut out = String::from("digraph category {\n");
    for name in c.objects() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (f, m) in c.morphisms().iter().enumerate() {
        if !c.is_identity(f) {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(c.object_name(m.source)),
                quote(c.object_name(m.target)),
                quote(&m.name)
            );
        }
    }
    out.push_str("}\n");
    out
}

/// A grid as a lattice of cells `(p,q)` labelled by their objects.
pub fn grid_dot(c: &FinCategory, g: &GridSimplex) -> String {
    let mut out = String::from("digraph grid {\n  rankdir=LR;\n");
    let cell = |p: usize, q: usize| quote(&format!("{p},{q}"));
    for p in 0..=g.rows {
        for q in 0..=g.cols {
            let _ = writeln!(out, "  {} [label={}];", cell(p, q), quote(c.object_name(g.object(p, q))));
        }
    }
    for p in 0..=g.rows {
        for q in 0..g.cols {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                cell(p, q),
                cell(p, q + 1),
                quote(c.name(g.row_edge(p, q)))
            );
        }
    }
    for p in 0..g.rows {
        for q in 0..=g.cols {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                cell(p, q),
                cell(p + 1, q),
                quote(c.name(g.column_edge(p, q)))
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Names of the maximal chains, sorted, for comparisons that ignore element order.
pub fn canonical_chains(k: &SubNerve) -> BTreeSet<Vec<String>> {
    k.maximal_chains().iter().map(|c| chain_names(k.base(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartesian::Cart;
    use crate::compactification::certify_box;

    #[test]
    fn singleton_poset_document() {
        let doc = PosetDoc::from_poset(&Poset::chain(0));
        assert_eq!(doc.elements.len(), 1);
        assert!(doc.covers.is_empty());
        assert_eq!(poset_dot(&doc.to_poset().unwrap()).lines().count(), 3);
    }

    #[test]
    fn cart_one_round_trips() {
        let cart = Cart::new(1).unwrap();
        let text = serde_json::to_string(&PosetDoc::from_poset(cart.poset())).unwrap();
        let back: PosetDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_poset().unwrap(), cart.poset().as_ref());
    }

    #[test]
    fn certificate_survives_export() {
        let cert = certify_box(2).unwrap();
        let text = serde_json::to_string(&CertificateDoc::from_certificate(&cert)).unwrap();
        let back: CertificateDoc = serde_json::from_str(&text).unwrap();
        let loaded = back.to_certificate().unwrap();
        loaded.validate().unwrap();
        assert_eq!(loaded, cert);
    }

    #[test]
    fn finset_category_round_trips() {
        let c = FinCategory::finsets_of_sizes(&[0, 1, 2]);
        let doc = CategoryDoc::from_category(&c);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CategoryDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_category().unwrap().to_data(), c.to_data());
    }

    #[test]
    fn grid_edges_default_to_the_unique_morphism() {
        let c = FinCategory::from_poset(Arc::new(Poset::grid(1, 1)));
        let doc = GridDoc {
            rows: 1,
            cols: 1,
            objects: vec![vec!["00".into(), "01".into()], vec!["10".into(), "11".into()]],
            horizontal: None,
            vertical: None,
        };
        let g = doc.to_grid(&c).unwrap();
        assert_eq!(GridDoc::from_grid(&c, &g).to_grid(&c).unwrap(), g);
    }
}
