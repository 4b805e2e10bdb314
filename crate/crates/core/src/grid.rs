//! Grids of morphisms: simplices of the restricted, cartesian and truncated
//! grid nerves of a marked category, plus reshaping of grid samples.
//!
//! Position `(p, q)` has row `p` and column `q`. Row edges `(p,q) -> (p,q+1)`
//! run in direction 2 and lie in `E2`; column edges `(p,q) -> (p+1,q)` run in
//! direction 1 and lie in `E1`.

use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{gap_morphism, truncation_level, CatError, FinCategory, MarkedCategory, Mor, Obj, Square, TruncationLevel};
use crate::nerve::{NerveError, SubNerve};
use crate::par::Exec;
use crate::poset::Poset;

/// Diagonals are iterated at most this often when computing tiling levels.
pub const TRUNCATION_CAP: i32 = 8;

/// Default cap on the number of enumerated grid simplices.
pub const GRID_ENUM_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("edge {edge} in direction {direction} is not in E{direction}")]
    EdgeClassViolation { direction: u8, edge: String },
    #[error("square at {square:?} violates the tiling discipline (level {level})")]
    TilingViolation { square: (usize, usize), level: TruncationLevel },
    #[error("gap morphism {0} is not in both E1 and E2")]
    GapNotInBothClasses(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("more than {cap} grid simplices")]
    SizeBudgetExceeded { cap: usize },
    #[error(transparent)]
    Category(#[from] CatError),
}

/// Which unit squares a grid may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Discipline {
    /// Any commuting square.
    Comm,
    /// Pullback squares only; the same as `Trunc(-2)`.
    Cart,
    /// Squares whose gap morphism is at most `i`-truncated.
    Trunc(i32),
}

impl Discipline {
    pub fn admits(self, level: TruncationLevel) -> bool {
        match self {
            Discipline::Comm => true,
            Discipline::Cart => level.at_most(-2),
            Discipline::Trunc(i) => level.at_most(i),
        }
    }
}

/// A functor from `[rows] x [cols]` into a category, given by its unit edges.
/// `reversed[d]` records a partial opposite in direction `d + 1`: the edges of
/// that direction then point from higher to lower index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridSimplex {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, `(rows + 1) * (cols + 1)` entries.
    pub objects: Vec<Obj>,
    /// `(p,q) -> (p,q+1)` at index `p * cols + q`.
    pub horizontal: Vec<Mor>,
    /// `(p,q) -> (p+1,q)` at index `p * (cols + 1) + q`.
    pub vertical: Vec<Mor>,
    pub reversed: [bool; 2],
}

impl GridSimplex {
    /// A single object as a 0-simplex.
    pub fn point(x: Obj) -> Self {
        GridSimplex {
            rows: 0,
            cols: 0,
            objects: vec![x],
            horizontal: Vec::new(),
            vertical: Vec::new(),
            reversed: [false; 2],
        }
    }

    /// The dimension when the grid is square.
    pub fn dimension(&self) -> Option<usize> {
        (self.rows == self.cols).then_some(self.rows)
    }

    pub fn object(&self, p: usize, q: usize) -> Obj {
        self.objects[p * (self.cols + 1) + q]
    }

    pub fn row_edge(&self, p: usize, q: usize) -> Mor {
        self.horizontal[p * self.cols + q]
    }

    pub fn column_edge(&self, p: usize, q: usize) -> Mor {
        self.vertical[p * (self.cols + 1) + q]
    }

    /// The unit square with top-left corner `(p, q)`.
    pub fn unit_square(&self, p: usize, q: usize) -> Square {
        Square {
            top: self.row_edge(p, q),
            left: self.column_edge(p, q),
            right: self.column_edge(p, q + 1),
            bottom: self.row_edge(p + 1, q),
        }
    }

    /// The morphism `(p,q) -> (p',q')` for `p <= p'`, `q <= q'`: along the row, then down.
    pub fn morphism(&self, c: &FinCategory, from: (usize, usize), to: (usize, usize)) -> Mor {
        let mut path = Vec::new();
        for q in from.1..to.1 {
            path.push(self.row_edge(from.0, q));
        }
        for p in from.0..to.0 {
            path.push(self.column_edge(p, to.1));
        }
        match c.compose_path(&path) {
            Some(f) => f,
            None => c.identity(self.object(from.0, from.1)),
        }
    }

    /// The diagonal `(0,0) -> (1,1) -> ... -> (m,m)` as objects and edges.
    pub fn diagonal(&self, c: &FinCategory) -> Result<(Vec<Obj>, Vec<Mor>), GridError> {
        let m = self
            .dimension()
            .ok_or_else(|| GridError::ShapeMismatch(format!("{}x{} grid has no diagonal", self.rows, self.cols)))?;
        let objects = (0..=m).map(|p| self.object(p, p)).collect();
        let edges = (0..m).map(|p| self.morphism(c, (p, p), (p + 1, p + 1))).collect();
        Ok((objects, edges))
    }

    /// Keeps direction `j` and collapses the other one to its first index:
    /// `restrict(1)` is the first column, `restrict(2)` the first row.
    pub fn restrict(&self, direction: u8) -> Result<GridSimplex, GridError> {
        match direction {
            1 => Ok(GridSimplex {
                rows: self.rows,
                cols: 0,
                objects: (0..=self.rows).map(|p| self.object(p, 0)).collect(),
                horizontal: Vec::new(),
                vertical: (0..self.rows).map(|p| self.column_edge(p, 0)).collect(),
                reversed: self.reversed,
            }),
            2 => Ok(GridSimplex {
                rows: 0,
                cols: self.cols,
                objects: (0..=self.cols).map(|q| self.object(0, q)).collect(),
                horizontal: (0..self.cols).map(|q| self.row_edge(0, q)).collect(),
                vertical: Vec::new(),
                reversed: self.reversed,
            }),
            d => Err(GridError::ShapeMismatch(format!("no direction {d} in a grid"))),
        }
    }

    /// Reverses the listed directions (1 = columns, 2 = rows).
    pub fn partial_op(&self, directions: &[u8]) -> Result<GridSimplex, GridError> {
        let mut out = self.clone();
        for &d in directions {
            let (rows, cols) = (out.rows, out.cols);
            let src = out.clone();
            match d {
                1 => {
                    for p in 0..=rows {
                        for q in 0..=cols {
                            out.objects[p * (cols + 1) + q] = src.object(rows - p, q);
                        }
                        for q in 0..cols {
                            out.horizontal[p * cols + q] = src.row_edge(rows - p, q);
                        }
                    }
                    for p in 0..rows {
                        for q in 0..=cols {
                            out.vertical[p * (cols + 1) + q] = src.column_edge(rows - 1 - p, q);
                        }
                    }
                    out.reversed[0] = !out.reversed[0];
                }
                2 => {
                    for p in 0..=rows {
                        for q in 0..=cols {
                            out.objects[p * (cols + 1) + q] = src.object(p, cols - q);
                        }
                        for q in 0..cols {
                            out.horizontal[p * cols + q] = src.row_edge(p, cols - 1 - q);
                        }
                    }
                    for p in 0..rows {
                        for q in 0..=cols {
                            out.vertical[p * (cols + 1) + q] = src.column_edge(p, cols - q);
                        }
                    }
                    out.reversed[1] = !out.reversed[1];
                }
                other => return Err(GridError::ShapeMismatch(format!("no direction {other} in a grid"))),
            }
        }
        Ok(out)
    }

    /// Checks typing, commutativity, edge classes and the tiling discipline.
    pub fn validate(&self, mc: &MarkedCategory, discipline: Discipline) -> Result<(), GridError> {
        let c = &*mc.category;
        let (rows, cols) = (self.rows, self.cols);
        if self.objects.len() != (rows + 1) * (cols + 1)
            || self.horizontal.len() != (rows + 1) * cols
            || self.vertical.len() != rows * (cols + 1)
        {
            return Err(GridError::ShapeMismatch("entry counts do not match the shape".into()));
        }
        if self.reversed != [false; 2] {
            return Err(GridError::ShapeMismatch(
                "partial opposites are not grid simplices of C".into(),
            ));
        }
        if self.objects.iter().any(|&x| x >= c.num_objects())
            || self.horizontal.iter().chain(&self.vertical).any(|&f| f >= c.num_morphisms())
        {
            return Err(GridError::ShapeMismatch("index out of range".into()));
        }
        for p in 0..=rows {
            for q in 0..=cols {
                if q < cols {
                    let f = self.row_edge(p, q);
                    if c.source(f) != self.object(p, q) || c.target(f) != self.object(p, q + 1) {
                        return Err(GridError::NotFunctorial(format!("row edge at ({p},{q}) is ill-typed")));
                    }
                }
                if p < rows {
                    let f = self.column_edge(p, q);
                    if c.source(f) != self.object(p, q) || c.target(f) != self.object(p + 1, q) {
                        return Err(GridError::NotFunctorial(format!("column edge at ({p},{q}) is ill-typed")));
                    }
                }
            }
        }
        for p in 0..rows {
            for q in 0..cols {
                let sq = self.unit_square(p, q);
                if c.compose(sq.right, sq.top) != c.compose(sq.bottom, sq.left) {
                    return Err(GridError::NotFunctorial(format!("square at ({p},{q}) does not commute")));
                }
            }
        }
        for p in 0..=rows {
            for q0 in 0..cols {
                for q1 in q0 + 1..=cols {
                    let f = self.morphism(c, (p, q0), (p, q1));
                    if !mc.e2.contains(f) {
                        return Err(GridError::EdgeClassViolation {
                            direction: 2,
                            edge: c.name(f).to_string(),
                        });
                    }
                }
            }
        }
        for q in 0..=cols {
            for p0 in 0..rows {
                for p1 in p0 + 1..=rows {
                    let f = self.morphism(c, (p0, q), (p1, q));
                    if !mc.e1.contains(f) {
                        return Err(GridError::EdgeClassViolation {
                            direction: 1,
                            edge: c.name(f).to_string(),
                        });
                    }
                }
            }
        }
        if discipline != Discipline::Comm {
            for p in 0..rows {
                for q in 0..cols {
                    let level = tiling_level(mc, &self.unit_square(p, q))?;
                    if !discipline.admits(level) {
                        return Err(GridError::TilingViolation { square: (p, q), level });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds and validates a square grid from its parts.
pub fn grid_simplex(
    mc: &MarkedCategory,
    m: usize,
    objects: Vec<Obj>,
    horizontal: Vec<Mor>,
    vertical: Vec<Mor>,
    discipline: Discipline,
) -> Result<GridSimplex, GridError> {
    let g = GridSimplex {
        rows: m,
        cols: m,
        objects,
        horizontal,
        vertical,
        reversed: [false; 2],
    };
    g.validate(mc, discipline)?;
    Ok(g)
}

/// The truncation level of the gap `w -> x ×_z y`; `-2` exactly when the
/// square is a pullback. Otherwise the gap must lie in `E1 ∩ E2`.
pub fn tiling_level(mc: &MarkedCategory, sq: &Square) -> Result<TruncationLevel, GridError> {
    let c = &*mc.category;
    let (_, gap) = gap_morphism(c, sq)?;
    if c.is_iso(gap) {
        return Ok(TruncationLevel::Level(-2));
    }
    if !(mc.e1.contains(gap) && mc.e2.contains(gap)) {
        return Err(GridError::GapNotInBothClasses(c.name(gap).to_string()));
    }
    Ok(truncation_level(c, &gap, TRUNCATION_CAP)?)
}

/// Every grid `m`-simplex allowed by the discipline, in canonical order
/// (row-major choice of edges, morphisms by index).
pub fn enumerate_grid_simplices(
    mc: &MarkedCategory,
    m: usize,
    discipline: Discipline,
    cap: usize,
    exec: Exec,
) -> Result<Vec<GridSimplex>, GridError> {
    let c = &*mc.category;
    let roots: Vec<Obj> = (0..c.num_objects()).collect();
    let per_root = exec.map(&roots, |&x| {
        let mut e = Enumerator {
            mc,
            m,
            discipline,
            cap,
            grid: GridSimplex {
                rows: m,
                cols: m,
                objects: vec![x; (m + 1) * (m + 1)],
                horizontal: vec![0; (m + 1) * m],
                vertical: vec![0; m * (m + 1)],
                reversed: [false; 2],
            },
            out: Vec::new(),
            overflow: false,
            error: None,
        };
        e.fill(1);
        (e.out, e.overflow, e.error)
    });
    let mut out = Vec::new();
    for (found, overflow, error) in per_root {
        if let Some(err) = error {
            return Err(err);
        }
        if overflow || out.len() + found.len() > cap {
            return Err(GridError::SizeBudgetExceeded { cap });
        }
        out.extend(found);
    }
    Ok(out)
}

struct Enumerator<'a> {
    mc: &'a MarkedCategory,
    m: usize,
    discipline: Discipline,
    cap: usize,
    grid: GridSimplex,
    out: Vec<GridSimplex>,
    overflow: bool,
    error: Option<GridError>,
}

impl Enumerator<'_> {
    fn done(&self) -> bool {
        self.overflow || self.error.is_some()
    }

    /// Chooses the edges into cell `k` (row-major); cell 0 is the fixed root.
    fn fill(&mut self, k: usize) {
        if self.done() {
            return;
        }
        let w = self.m + 1;
        if k == w * w {
            if self.out.len() == self.cap {
                self.overflow = true;
            } else {
                self.out.push(self.grid.clone());
            }
            return;
        }
        let (p, q) = (k / w, k % w);
        let c = self.mc.category.clone();
        if q > 0 {
            let left = self.grid.object(p, q - 1);
            let candidates: Vec<Mor> = c.maps_out_of(left).filter(|&h| self.mc.e2.contains(h)).collect();
            for h in candidates {
                self.grid.horizontal[p * self.m + q - 1] = h;
                self.grid.objects[k] = c.target(h);
                if !self.row_ok(&c, p, q) {
                    continue;
                }
                if p == 0 {
                    self.fill(k + 1);
                    continue;
                }
                let above = self.grid.object(p - 1, q);
                let verticals: Vec<Mor> = c.hom(above, c.target(h)).to_vec();
                for v in verticals {
                    if !self.mc.e1.contains(v) {
                        continue;
                    }
                    self.grid.vertical[(p - 1) * w + q] = v;
                    if self.square_ok(&c, p - 1, q - 1) && self.column_ok(&c, p, q) {
                        self.fill(k + 1);
                    }
                    if self.done() {
                        return;
                    }
                }
            }
        } else {
            let above = self.grid.object(p - 1, 0);
            let candidates: Vec<Mor> = c.maps_out_of(above).filter(|&v| self.mc.e1.contains(v)).collect();
            for v in candidates {
                self.grid.vertical[(p - 1) * w] = v;
                self.grid.objects[k] = c.target(v);
                if self.column_ok(&c, p, 0) {
                    self.fill(k + 1);
                }
                if self.done() {
                    return;
                }
            }
        }
    }

    fn row_ok(&self, c: &FinCategory, p: usize, q: usize) -> bool {
        (0..q.saturating_sub(1)).all(|q0| self.mc.e2.contains(self.grid.morphism(c, (p, q0), (p, q))))
    }

    fn column_ok(&self, c: &FinCategory, p: usize, q: usize) -> bool {
        (0..p.saturating_sub(1)).all(|p0| self.mc.e1.contains(self.grid.morphism(c, (p0, q), (p, q))))
    }

    fn square_ok(&mut self, c: &FinCategory, p: usize, q: usize) -> bool {
        let sq = self.grid.unit_square(p, q);
        if c.compose(sq.right, sq.top) != c.compose(sq.bottom, sq.left) {
            return false;
        }
        if self.discipline == Discipline::Comm {
            return true;
        }
        match tiling_level(self.mc, &sq) {
            Ok(level) => self.discipline.admits(level),
            // A commuting square whose gap leaves E1 ∩ E2 has no tiling level.
            Err(GridError::GapNotInBothClasses(_)) => false,
            Err(e) => {
                self.error = Some(e);
                false
            }
        }
    }
}

/// The diagonal of the representable bisimplicial set `Δ^(n1, n2)`: its
/// `m`-simplices are pairs of monotone maps `[m] -> [n1]`, `[m] -> [n2]`;
/// the non-degenerate ones are the chains of `[n1] x [n2]`.
pub fn diagonal_of_representable(n1: usize, n2: usize) -> Result<SubNerve, NerveError> {
    let base = Arc::new(Poset::grid(n1, n2));
    let mut chains = Vec::new();
    let max_m = n1 + n2;
    for m in 0..=max_m {
        for a in monotone_maps(m, n1) {
            for b in monotone_maps(m, n2) {
                let strict = (0..m).all(|i| (a[i], b[i]) != (a[i + 1], b[i + 1]));
                if strict {
                    chains.push((0..=m).map(|i| a[i] * (n2 + 1) + b[i]).collect::<Vec<_>>());
                }
            }
        }
    }
    SubNerve::from_chains(base, &chains)
}

/// Monotone maps `[m] -> [n]` as value lists.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(m, n, v, cur, out);
            cur.pop();
        }
    }
    go(m, n, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::EdgeClass;

    fn square_poset() -> MarkedCategory {
        let c = Arc::new(FinCategory::from_poset(Arc::new(Poset::grid(1, 1))));
        // Elements 00, 01, 10, 11: columns change the first coordinate.
        let p = c.poset().unwrap().clone();
        let e1 = EdgeClass::from_predicate(&c, |f| {
            let (s, t) = (c.source(f), c.target(f));
            p.name(s).as_bytes()[1] == p.name(t).as_bytes()[1]
        });
        let e2 = EdgeClass::from_predicate(&c, |f| {
            let (s, t) = (c.source(f), c.target(f));
            p.name(s).as_bytes()[0] == p.name(t).as_bytes()[0]
        });
        MarkedCategory::new(c, e1, e2)
    }

    #[test]
    fn zero_simplices_are_objects() {
        let mc = square_poset();
        for d in [Discipline::Comm, Discipline::Cart, Discipline::Trunc(0)] {
            let all = enumerate_grid_simplices(&mc, 0, d, GRID_ENUM_CAP, Exec::Sequential).unwrap();
            assert_eq!(all.len(), 4);
        }
    }

    #[test]
    fn identity_grid_is_cartesian() {
        let mc = square_poset();
        let c = mc.category.clone();
        let e = |a: usize, b: usize| c.hom(a, b)[0];
        let g = grid_simplex(
            &mc,
            1,
            vec![0, 1, 2, 3],
            vec![e(0, 1), e(2, 3)],
            vec![e(0, 2), e(1, 3)],
            Discipline::Cart,
        );
        assert!(g.is_ok(), "{g:?}");
        let (objs, _) = g.unwrap().diagonal(&c).unwrap();
        assert_eq!(objs, vec![0, 3]);
    }

    #[test]
    fn restrictions_reach_the_corner() {
        let mc = square_poset();
        let all = enumerate_grid_simplices(&mc, 1, Discipline::Comm, GRID_ENUM_CAP, Exec::Sequential).unwrap();
        for g in &all {
            let corner = g.restrict(1).unwrap().restrict(2).unwrap();
            assert_eq!(corner, GridSimplex::point(g.object(0, 0)));
            let twice = g.partial_op(&[1]).unwrap().partial_op(&[1]).unwrap();
            assert_eq!(&twice, g);
        }
    }

    #[test]
    fn representable_diagonal_is_product_nerve() {
        let d = diagonal_of_representable(1, 1).unwrap();
        let n = SubNerve::nerve(d.base().clone(), None).unwrap();
        assert_eq!(d, n);
        assert_eq!(d.counts_by_dim(), vec![4, 5, 2]);
    }
}
