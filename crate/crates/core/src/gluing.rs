//! Extending functors out of grid nerves: from commutative grids to the base
//! category, and from cartesian grids to commutative ones, at the level of
//! finite 1-categories with on-the-nose equalities.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::compactification::{alpha_comm, cpt_index, enumerate_kpt, KptError, KPT_CAP};
use crate::fincat::{
    check_admissible, truncation_level, CatError, ComposableChain, FinCategory, Functor, MarkedCategory, Mor, Obj,
    PullbackCategory, Square, TruncationLevel,
};
use crate::grid::{enumerate_grid_simplices, tiling_level, Discipline, GridError, GridSimplex, TRUNCATION_CAP};
use crate::par::Exec;
use crate::report::{CheckOutcome, Report};

/// Cap on the grid simplices enumerated per dimension while gluing.
pub const GLUE_ENUM_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("hypothesis `{name}` fails: {witness}")]
    HypothesisFailed { name: String, witness: String },
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("no value on the square {0}")]
    MissingValue(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Kpt(#[from] KptError),
}

fn hypothesis(name: &str, witness: String) -> GluingError {
    GluingError::HypothesisFailed {
        name: name.to_string(),
        witness,
    }
}

fn describe_square(c: &FinCategory, sq: &Square) -> String {
    format!(
        "[{} ; {} | {} ; {}]",
        c.name(sq.top),
        c.name(sq.left),
        c.name(sq.right),
        c.name(sq.bottom)
    )
}

/// The square spanned by diagonal vertices `a <= b` of a grid.
fn diagonal_square(c: &FinCategory, g: &GridSimplex, a: usize, b: usize) -> Square {
    Square {
        top: g.morphism(c, (a, a), (a, b)),
        left: g.morphism(c, (a, a), (b, a)),
        right: g.morphism(c, (a, b), (b, b)),
        bottom: g.morphism(c, (b, a), (b, b)),
    }
}

fn diagonal_of(c: &FinCategory, sq: &Square) -> Mor {
    c.compose(sq.right, sq.top).expect("squares are typed")
}

fn identity_square(c: &FinCategory, x: Obj) -> Square {
    let id = c.identity(x);
    Square {
        top: id,
        left: id,
        right: id,
        bottom: id,
    }
}

/// A map of simplicial sets out of a grid nerve into the nerve of a finite
/// category, up to dimension 2: values on objects and on grid 1-simplices
/// (commuting squares). Values on 2-simplices are composites, so coherence
/// is the equation `g(0->2) = g(1->2) ∘ g(0->1)`.
#[derive(Debug, Clone)]
pub struct GridFunctorData {
    pub discipline: Discipline,
    pub target: Arc<FinCategory>,
    pub objects: Vec<Obj>,
    pub squares: HashMap<Square, Mor>,
}

impl GridFunctorData {
    /// `g = F ∘ (diagonal)` on every grid 1-simplex allowed by the discipline.
    pub fn from_functor(
        mc: &MarkedCategory,
        discipline: Discipline,
        target: Arc<FinCategory>,
        functor: &Functor,
    ) -> Result<Self, GluingError> {
        let c = &*mc.category;
        functor.validate(c, &target)?;
        let edges = enumerate_grid_simplices(mc, 1, discipline, GLUE_ENUM_CAP, Exec::default())?;
        let squares = edges
            .iter()
            .map(|g| {
                let sq = g.unit_square(0, 0);
                (sq, functor.morphisms[diagonal_of(c, &sq)])
            })
            .collect();
        Ok(GridFunctorData {
            discipline,
            target,
            objects: functor.objects.clone(),
            squares,
        })
    }

    pub fn value(&self, sq: &Square) -> Option<Mor> {
        self.squares.get(sq).copied()
    }

    fn require(&self, c: &FinCategory, sq: &Square) -> Result<Mor, GluingError> {
        self.value(sq)
            .ok_or_else(|| GluingError::MissingValue(describe_square(c, sq)))
    }

    /// Squares sorted canonically, for deterministic iteration and export.
    pub fn sorted_squares(&self) -> Vec<(Square, Mor)> {
        let mut out: Vec<(Square, Mor)> = self.squares.iter().map(|(s, &m)| (*s, m)).collect();
        out.sort_by_key(|(s, _)| (s.top, s.left, s.right, s.bottom));
        out
    }

    /// Typing, degenerate squares and the 2-simplex equations.
    pub fn check(&self, mc: &MarkedCategory) -> Result<CheckOutcome, GluingError> {
        let c = &*mc.category;
        let d = &*self.target;
        let mut out = CheckOutcome::new("coherence");
        for (sq, v) in self.sorted_squares() {
            let typed = d.source(v) == self.objects[c.source(sq.top)] && d.target(v) == self.objects[c.target(sq.right)];
            out.record(typed, || format!("{} has an ill-typed value", describe_square(c, &sq)));
        }
        for x in 0..c.num_objects() {
            let id = self.value(&identity_square(c, x));
            out.record(id == Some(d.identity(self.objects[x])), || {
                format!("the identity square on {} is not sent to an identity", c.object_name(x))
            });
        }
        let triangles = enumerate_grid_simplices(mc, 2, self.discipline, GLUE_ENUM_CAP, Exec::default())?;
        for g in &triangles {
            let [s01, s12, s02] = [(0, 1), (1, 2), (0, 2)].map(|(a, b)| diagonal_square(c, g, a, b));
            let composite = d.compose(self.require(c, &s12)?, self.require(c, &s01)?);
            out.record(composite == Some(self.require(c, &s02)?), || {
                format!(
                    "{} then {} does not compose to {}",
                    describe_square(c, &s01),
                    describe_square(c, &s12),
                    describe_square(c, &s02)
                )
            });
        }
        Ok(out)
    }
}

fn check_hypothesis_admissible(mc: &MarkedCategory) -> Result<(), GluingError> {
    let c = &*mc.category;
    for (label, e) in [("E1", &mc.e1), ("E2", &mc.e2)] {
        if let Some(v) = check_admissible(c, e) {
            return Err(hypothesis("admissibility", format!("{label}: {}", v.describe(c))));
        }
    }
    Ok(())
}

/// The `Λ²₁`-shaped pair of grid 1-simplices a compactification of `f` yields.
fn horn_pair(mc: &MarkedCategory, sigma: &crate::compactification::Compactification) -> Result<[Square; 2], GluingError> {
    let c = &*mc.category;
    let (a00, a01, a11) = (cpt_index(1, 0, 0), cpt_index(1, 0, 1), cpt_index(1, 1, 1));
    let first = alpha_comm(c, sigma, &[a00, a01])?.unit_square(0, 0);
    let second = alpha_comm(c, sigma, &[a01, a11])?.unit_square(0, 0);
    Ok([first, second])
}

/// Commutative-stage extension: a functor `C -> D` from values on commuting grids.
///
/// `g′(f)` fills the horn built from the first compactification of `f`; the
/// report checks functoriality, independence from the compactification and
/// `g′ ∘ p = g` on grid simplices up to dimension 2.
pub fn extend_comm(mc: &MarkedCategory, g: &GridFunctorData) -> Result<(Functor, Report), GluingError> {
    let c = &*mc.category;
    let d = &*g.target;
    check_hypothesis_admissible(mc)?;
    let mut morphisms = Vec::with_capacity(c.num_morphisms());
    let mut choices = CheckOutcome::new("choice-independence");
    for f in 0..c.num_morphisms() {
        let tau = ComposableChain::from_edges(c, &[f])?;
        let kpt = enumerate_kpt(mc, &tau, KPT_CAP)?;
        if kpt.objects.is_empty() {
            return Err(hypothesis(
                "factorization",
                format!("{} has no E2-then-E1 factorization", c.name(f)),
            ));
        }
        let mut values = Vec::with_capacity(kpt.objects.len());
        for sigma in &kpt.objects {
            let [first, second] = horn_pair(mc, sigma)?;
            let v = d.compose(g.require(c, &second)?, g.require(c, &first)?);
            values.push(
                v.ok_or_else(|| GluingError::NotFunctorial(format!("values on the horn of {} do not compose", c.name(f))))?,
            );
        }
        for (k, &v) in values.iter().enumerate().skip(1) {
            choices.record(v == values[0], || {
                format!(
                    "{}: compactification {k} gives {}, the first gives {}",
                    c.name(f),
                    d.name(v),
                    d.name(values[0])
                )
            });
        }
        morphisms.push(values[0]);
    }
    let functor = Functor {
        objects: g.objects.clone(),
        morphisms,
    };
    functor
        .validate(c, d)
        .map_err(|e| GluingError::NotFunctorial(e.to_string()))?;

    let mut report = Report::default();
    let mut functoriality = CheckOutcome::new("functoriality");
    functoriality.checked = c.num_morphisms() + c.num_objects();
    report.checks.push(functoriality);
    report.checks.push(choices);
    report
        .checks
        .push(restriction_check(mc, g, |sq| functor.morphisms[diagonal_of(c, sq)])?);
    Ok((functor, report))
}

/// Compares `candidate` with `g` on every grid simplex of `g`'s discipline up to dimension 2.
fn restriction_check(
    mc: &MarkedCategory,
    g: &GridFunctorData,
    candidate: impl Fn(&Square) -> Mor,
) -> Result<CheckOutcome, GluingError> {
    let c = &*mc.category;
    let d = &*g.target;
    let mut out = CheckOutcome::new("restriction");
    for (sq, v) in g.sorted_squares() {
        let w = candidate(&sq);
        out.record(w == v, || {
            format!("{}: {} instead of {}", describe_square(c, &sq), d.name(w), d.name(v))
        });
    }
    for t in enumerate_grid_simplices(mc, 2, g.discipline, GLUE_ENUM_CAP, Exec::default())? {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            let sq = diagonal_square(c, &t, a, b);
            let v = g.require(c, &sq)?;
            let w = candidate(&sq);
            out.record(w == v, || {
                format!("face {a}->{b} of a 2-simplex: {}", describe_square(c, &sq))
            });
        }
    }
    Ok(out)
}

struct CartExtender<'a> {
    mc: &'a MarkedCategory,
    g: &'a GridFunctorData,
    memo: HashMap<Square, Mor>,
}

impl CartExtender<'_> {
    /// The pieces of a commuting square through a pullback `x'` of its cospan:
    /// the gap square `(id, id; gap, gap)` and the pullback square at `x'`.
    fn split(&self, sq: &Square, cone: &crate::fincat::Cone<Mor>) -> (Square, Square) {
        let c = &*self.mc.category;
        let gap = c.mediate(cone, &sq.top, &sq.left).expect("a commuting square is a cone");
        let id = c.identity(c.source(sq.top));
        let gap_square = Square {
            top: id,
            left: id,
            right: gap,
            bottom: gap,
        };
        let cartesian = Square {
            top: cone.first,
            left: cone.second,
            right: sq.right,
            bottom: sq.bottom,
        };
        (gap_square, cartesian)
    }

    fn value(&mut self, sq: &Square) -> Result<Mor, GluingError> {
        if let Some(&v) = self.memo.get(sq) {
            return Ok(v);
        }
        let c = &*self.mc.category;
        let v = if tiling_level(self.mc, sq)? == TruncationLevel::Level(-2) {
            self.g.require(c, sq)?
        } else {
            let cone = c.pullback(&sq.right, &sq.bottom).ok_or_else(|| CatError::MissingPullback {
                f: c.name(sq.right).into(),
                g: c.name(sq.bottom).into(),
            })?;
            let (gap_square, cartesian) = self.split(sq, &cone);
            let lower = self.value(&gap_square)?;
            let upper = self.g.require(c, &cartesian)?;
            self.g
                .target
                .compose(upper, lower)
                .ok_or_else(|| GluingError::NotFunctorial(format!("pieces of {} do not compose", describe_square(c, sq))))?
        };
        self.memo.insert(*sq, v);
        Ok(v)
    }
}

/// Cartesian-stage extension: values on cartesian grids extended to every
/// commuting grid, by splitting each square through the pullback of its
/// cospan and recursing on the gap square, whose gap is one level more truncated.
pub fn extend_cart(mc: &MarkedCategory, g: &GridFunctorData, i_max: i32) -> Result<(GridFunctorData, Report), GluingError> {
    let c = &*mc.category;
    let d = &*g.target;
    check_hypothesis_admissible(mc)?;
    for f in mc.both().members() {
        let level = truncation_level(c, &f, TRUNCATION_CAP)?;
        if !level.at_most(i_max) {
            return Err(hypothesis(
                "truncation",
                format!("{} ∈ E1 ∩ E2 is {level}-truncated, above {i_max}", c.name(f)),
            ));
        }
    }
    let squares: Vec<Square> = enumerate_grid_simplices(mc, 1, Discipline::Comm, GLUE_ENUM_CAP, Exec::default())?
        .iter()
        .map(|s| s.unit_square(0, 0))
        .collect();
    let mut ext = CartExtender {
        mc,
        g,
        memo: HashMap::new(),
    };
    let mut levels = CheckOutcome::new("gap-level-decreases");
    let mut choices = CheckOutcome::new("choice-independence");
    let mut by_level: Vec<(i32, Square)> = Vec::new();
    for sq in &squares {
        let level = match tiling_level(mc, sq)? {
            TruncationLevel::Level(l) => l,
            TruncationLevel::Unbounded => i32::MAX,
        };
        by_level.push((level, *sq));
    }
    // Build level by level, so each square only uses values from lower levels.
    by_level.sort_by_key(|&(l, s)| (l, s.top, s.left, s.right, s.bottom));
    for &(level, sq) in &by_level {
        let v = ext.value(&sq)?;
        if level == -2 {
            continue;
        }
        for cone in c.pullback_cones(sq.right, sq.bottom) {
            let (gap_square, cartesian) = ext.split(&sq, &cone);
            let gap_level = tiling_level(mc, &gap_square)?;
            levels.record(gap_level.at_most(level - 1), || {
                format!(
                    "{} at level {level} has a gap square at level {gap_level}",
                    describe_square(c, &sq)
                )
            });
            let w = d.compose(g.require(c, &cartesian)?, ext.value(&gap_square)?);
            choices.record(w == Some(v), || {
                format!(
                    "{}: pullback at {} disagrees",
                    describe_square(c, &sq),
                    c.object_name(cone.apex)
                )
            });
        }
    }
    let extended = GridFunctorData {
        discipline: Discipline::Comm,
        target: g.target.clone(),
        objects: g.objects.clone(),
        squares: ext.memo,
    };
    let mut report = Report::default();
    report.checks.push(extended.check(mc)?);
    report.checks.push(levels);
    report.checks.push(choices);
    report.checks.push(restriction_check(mc, g, |sq| extended.squares[sq])?);
    Ok((extended, report))
}

/// Both extensions in sequence; the report also compares the composite with
/// `g` along the diagonal of every cartesian grid.
pub fn extend_full(mc: &MarkedCategory, g: &GridFunctorData, i_max: i32) -> Result<(Functor, Report), GluingError> {
    let c = &*mc.category;
    let (comm, cart_report) = extend_cart(mc, g, i_max)?;
    let (functor, comm_report) = extend_comm(mc, &comm)?;
    let mut report = Report::default();
    report.absorb("cart", cart_report);
    report.absorb("comm", comm_report);
    report
        .checks
        .push(restriction_check(mc, g, |sq| functor.morphisms[diagonal_of(c, sq)])?);
    report.checks.last_mut().expect("just pushed").name = "diagonal".into();
    Ok((functor, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{broken_instances, good_instances};

    #[test]
    fn corpus_passes_every_stage() {
        for inst in good_instances() {
            let mc = &inst.marked;
            let g = GridFunctorData::from_functor(mc, Discipline::Cart, inst.target.clone(), &inst.functor).unwrap();
            assert!(g.check(mc).unwrap().passed(), "{}", inst.name);
            let (functor, report) = extend_full(mc, &g, inst.i_max).unwrap();
            assert!(report.passed(), "{}\n{report}", inst.name);
            assert_eq!(functor, inst.functor, "{}", inst.name);
        }
    }

    #[test]
    fn broken_hypotheses_are_named() {
        for b in broken_instances() {
            let inst = &b.instance;
            let g = GridFunctorData::from_functor(&inst.marked, Discipline::Cart, inst.target.clone(), &inst.functor).unwrap();
            match extend_full(&inst.marked, &g, inst.i_max) {
                Err(GluingError::HypothesisFailed { name, .. }) => assert_eq!(name, b.failing, "{}", inst.name),
                other => panic!("{}: {other:?}", inst.name),
            }
        }
    }
}
