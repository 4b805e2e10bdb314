//! `Cart^n`, the non-empty up-sets of `[n] x [n]` under inverse inclusion, with
//! its structure maps, the operators `Λ` and `μ`, the subcomplexes `⊞^n`, the
//! grid construction `ε`, and cartesianizations of grids by right Kan extension.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::anodyne::{certify_interval_union, AnodyneCertificate, CertError};
use crate::fincat::{CatError, FinCategory, Mor, Obj, Square};
use crate::grid::GridSimplex;
use crate::nerve::SubNerve;
use crate::par::Exec;
use crate::poset::{ExactSquare, Poset, PosetError};
use crate::upset::{UpSet, UpsetLattice, UpsetNaming, UpsetOptions};

/// Largest `n` accepted by [`Cart::new`].
pub const CART_MAX_N: usize = 4;

/// Largest `n` for which [`Cart::category`] materializes `Cart^n` as a category.
pub const CART_CATEGORY_MAX_N: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartError {
    #[error("{what} {value} is out of range for n = {n}")]
    OutOfRange { what: &'static str, value: usize, n: usize },
    #[error("{0} is not a chain of Cart^n")]
    NotAChain(String),
    #[error("n = {n} exceeds the budget {cap}")]
    SizeBudgetExceeded { n: usize, cap: usize },
    #[error("no limit over the up-set {0}")]
    MissingLimit(String),
    #[error("the grid has shape {rows}x{cols}, expected {n}x{n}")]
    ShapeMismatch { rows: usize, cols: usize, n: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Category(#[from] CatError),
}

/// Which part of `⊞^n` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxplusPart {
    /// `N(Cart^n_{ξ(p,q)//η(p,q)})`.
    At(usize, usize),
    /// The union over every `(p, q)`.
    Full,
    /// The union over `(p, n)`.
    Cart,
}

#[derive(Debug)]
pub struct Cart {
    n: usize,
    lattice: UpsetLattice,
    minimal: Vec<Vec<usize>>,
    /// `ς` by grid point.
    principal: Vec<usize>,
    category: OnceLock<Arc<FinCategory>>,
}

impl Cart {
    pub fn new(n: usize) -> Result<Self, CartError> {
        if n > CART_MAX_N {
            return Err(CartError::SizeBudgetExceeded { n, cap: CART_MAX_N });
        }
        let base = Arc::new(Poset::grid(n, n));
        let opts = UpsetOptions {
            cap: base.len(),
            include_empty: false,
            naming: UpsetNaming::Principal("b".into()),
        };
        let lattice = UpsetLattice::with_options(base.clone(), &opts)?;
        let minimal = lattice.upsets().iter().map(|q| q.minimal_members(&base)).collect();
        let principal = (0..base.len()).map(|pt| lattice.embed(pt)).collect();
        Ok(Cart {
            n,
            lattice,
            minimal,
            principal,
            category: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poset(&self) -> &Arc<Poset> {
        self.lattice.poset()
    }

    pub fn lattice(&self) -> &UpsetLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn upset(&self, x: usize) -> UpSet {
        self.lattice.upset(x)
    }

    /// `PosetCat(Cart^n)`, built on first use.
    pub fn category(&self) -> Result<&Arc<FinCategory>, CartError> {
        if self.n > CART_CATEGORY_MAX_N {
            return Err(CartError::SizeBudgetExceeded {
                n: self.n,
                cap: CART_CATEGORY_MAX_N,
            });
        }
        Ok(self
            .category
            .get_or_init(|| Arc::new(FinCategory::from_poset(self.poset().clone()))))
    }

    fn point(&self, p: usize, q: usize) -> Result<usize, CartError> {
        for value in [p, q] {
            if value > self.n {
                return Err(CartError::OutOfRange {
                    what: "coordinate",
                    value,
                    n: self.n,
                });
            }
        }
        Ok(p * (self.n + 1) + q)
    }

    fn element(&self, x: usize) -> Result<UpSet, CartError> {
        if x >= self.len() {
            return Err(CartError::OutOfRange {
                what: "element",
                value: x,
                n: self.n,
            });
        }
        Ok(self.lattice.upset(x))
    }

    fn of(&self, q: UpSet) -> usize {
        self.lattice.element_of(q).expect("operators stay inside Cart^n")
    }

    /// `ς(p, q)`, the principal up-set at `(p, q)`.
    pub fn sigma(&self, p: usize, q: usize) -> Result<usize, CartError> {
        let pt = self.point(p, q)?;
        Ok(self.principal[pt])
    }

    fn sigma_set(&self, p: usize, q: usize) -> UpSet {
        UpSet::principal(self.lattice.base(), p * (self.n + 1) + q)
    }

    /// `π(x)`, the coordinatewise minimum.
    pub fn pi(&self, x: usize) -> Result<(usize, usize), CartError> {
        let set = self.element(x)?;
        let n1 = self.n + 1;
        let members = set.members();
        let p = members.iter().map(|m| m / n1).min().expect("non-empty");
        let q = members.iter().map(|m| m % n1).min().expect("non-empty");
        Ok((p, q))
    }

    /// `ξ(p, q) = ς(p, 0) ∧ ς(0, q)`.
    pub fn xi(&self, p: usize, q: usize) -> Result<usize, CartError> {
        self.point(p, q)?;
        Ok(self.of(self.sigma_set(p, 0).union(self.sigma_set(0, q))))
    }

    /// `η(p, q) = ς(p, n) ∧ ς(n, q)`.
    pub fn eta(&self, p: usize, q: usize) -> Result<usize, CartError> {
        self.point(p, q)?;
        Ok(self.of(self.sigma_set(p, self.n).union(self.sigma_set(self.n, q))))
    }

    /// Meet in `Cart^n`: the union.
    pub fn wedge(&self, x: usize, y: usize) -> Result<usize, CartError> {
        Ok(self.of(self.element(x)?.union(self.element(y)?)))
    }

    /// Join in `Cart^n`: the intersection (never empty, both contain `(n, n)`).
    pub fn vee(&self, x: usize, y: usize) -> Result<usize, CartError> {
        Ok(self.of(self.element(x)?.intersection(self.element(y)?)))
    }

    /// `Λ_p(x, y) = (ς(π₁(y) ∨ p, 0) ∨ x) ∧ y`.
    pub fn lambda(&self, p: usize, x: usize, y: usize) -> Result<usize, CartError> {
        self.point(p, 0)?;
        let (row, _) = self.pi(y)?;
        let s = self.sigma_set(row.max(p), 0);
        Ok(self.of(s.intersection(self.element(x)?).union(self.element(y)?)))
    }

    /// `μ_q(x, y) = (ς(0, q ∨ π₂(y)) ∨ x) ∧ y`.
    pub fn mu(&self, q: usize, x: usize, y: usize) -> Result<usize, CartError> {
        self.point(0, q)?;
        let (_, col) = self.pi(y)?;
        let s = self.sigma_set(0, col.max(q));
        Ok(self.of(s.intersection(self.element(x)?).union(self.element(y)?)))
    }

    /// Members of `Cart^n_{ξ(p,q)//η(p,q)}`.
    pub fn boxplus_piece(&self, p: usize, q: usize) -> Result<Vec<usize>, CartError> {
        Ok(self.poset().interval_members(self.xi(p, q)?, self.eta(p, q)?))
    }

    pub fn boxplus(&self, part: BoxplusPart) -> Result<SubNerve, CartError> {
        let pieces: Vec<(usize, usize)> = match part {
            BoxplusPart::At(p, q) => vec![(p, q)],
            BoxplusPart::Full => (0..=self.n).flat_map(|p| (0..=self.n).map(move |q| (p, q))).collect(),
            BoxplusPart::Cart => (0..=self.n).map(|p| (p, self.n)).collect(),
        };
        let mut chains = std::collections::BTreeSet::new();
        for (p, q) in pieces {
            let members = self.boxplus_piece(p, q)?;
            chains.extend(SubNerve::nerve_of_members(self.poset().clone(), &members).chains().clone());
        }
        Ok(SubNerve::from_set(self.poset().clone(), chains))
    }

    /// The certificate that `⊞^n_cart ⊆ N(Cart^n)` is inner anodyne.
    pub fn certify_boxplus_cart(&self) -> Result<AnodyneCertificate, CertError> {
        let n = self.n;
        let lower: Vec<usize> = (0..=n).map(|p| self.xi(p, n).expect("in range")).collect();
        let upper: Vec<usize> = (0..=n).map(|p| self.eta(p, n).expect("in range")).collect();
        certify_interval_union(self.poset(), &lower, &upper)
    }

    /// The `(m+1) x (m+1)` grid of `ε(x_0 <= ... <= x_m)`, row-major:
    /// `Λ_0(x_b, x_a)` at `(a, b)` when `a >= b`, `μ_0(x_a, x_b)` when `a <= b`.
    pub fn epsilon_points(&self, chain: &[usize]) -> Result<Vec<usize>, CartError> {
        let describe = || format!("{chain:?}");
        if chain.is_empty() || chain.iter().any(|&x| x >= self.len()) {
            return Err(CartError::NotAChain(describe()));
        }
        if chain.windows(2).any(|w| !self.poset().leq(w[0], w[1])) {
            return Err(CartError::NotAChain(describe()));
        }
        let m = chain.len();
        let mut out = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                out.push(if a >= b {
                    self.lambda(0, chain[b], chain[a])?
                } else {
                    self.mu(0, chain[a], chain[b])?
                });
            }
        }
        Ok(out)
    }

    /// `ε` as a grid simplex over `PosetCat(Cart^n)`.
    pub fn epsilon(&self, chain: &[usize]) -> Result<GridSimplex, CartError> {
        let points = self.epsilon_points(chain)?;
        let c = self.category()?;
        let m = chain.len() - 1;
        let arrow = |x: usize, y: usize| c.hom(x, y)[0];
        let at = |a: usize, b: usize| points[a * (m + 1) + b];
        let horizontal = (0..=m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| arrow(at(a, b), at(a, b + 1)))
            .collect();
        let vertical = (0..m)
            .flat_map(|a| (0..=m).map(move |b| (a, b)))
            .map(|(a, b)| arrow(at(a, b), at(a + 1, b)))
            .collect();
        Ok(GridSimplex {
            rows: m,
            cols: m,
            objects: points,
            horizontal,
            vertical,
            reversed: [false; 2],
        })
    }

    /// Exact squares of `Cart^n` with `b` and `c` incomparable; every other
    /// exact square has two identity sides.
    pub fn nondegenerate_exact_squares(&self) -> Vec<ExactSquare> {
        let p = self.poset();
        let mut out = Vec::new();
        for b in 0..p.len() {
            for c in b + 1..p.len() {
                if p.comparable(b, c) {
                    continue;
                }
                let (Some(a), Some(d)) = (p.meet(b, c), p.join(b, c)) else {
                    continue;
                };
                let sq = ExactSquare::new(a, b, c, d);
                if p.is_exact_square(&sq).unwrap_or(false) {
                    out.push(sq);
                }
            }
        }
        out
    }
}

/// A grid `[n] x [n] -> C` extended to every non-empty up-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cartesianization {
    pub n: usize,
    /// The limit object at each element of `Cart^n`.
    pub values: Vec<Obj>,
    /// Limit legs to the minimal members of each up-set, in member order.
    pub legs: Vec<Vec<Mor>>,
}

/// The right Kan extension of `tau` along `ς`, processing grid points in
/// row-major order.
pub fn kart_extension(c: &FinCategory, cart: &Cart, tau: &GridSimplex) -> Result<Cartesianization, CartError> {
    let points: Vec<usize> = (0..(cart.n + 1) * (cart.n + 1)).collect();
    kart_extension_in_order(c, cart, tau, &points, Exec::default())
}

/// [`kart_extension`] with minimal members visited in the order given by
/// `point_order` (a permutation of grid points).
pub fn kart_extension_in_order(
    c: &FinCategory,
    cart: &Cart,
    tau: &GridSimplex,
    point_order: &[usize],
    exec: Exec,
) -> Result<Cartesianization, CartError> {
    let n = cart.n;
    if tau.rows != n || tau.cols != n {
        return Err(CartError::ShapeMismatch {
            rows: tau.rows,
            cols: tau.cols,
            n,
        });
    }
    if let Some(poset) = c.poset() {
        return poset_extension(c, poset, cart, tau, point_order);
    }
    let rank: Vec<usize> = {
        let mut r = vec![0; point_order.len()];
        for (k, &pt) in point_order.iter().enumerate() {
            r[pt] = k;
        }
        r
    };
    let results = exec.range_map(cart.len(), |x| {
        let mut members = cart.minimal[x].clone();
        members.sort_by_key(|&m| rank[m]);
        let limit = limit_over(c, n, tau, &members);
        limit
            .map(|(v, legs)| {
                // Legs are reported in the canonical member order.
                let mut by_member: Vec<(usize, Mor)> = members.iter().copied().zip(legs).collect();
                by_member.sort();
                (v, by_member.into_iter().map(|(_, l)| l).collect::<Vec<_>>())
            })
            .ok_or_else(|| CartError::MissingLimit(cart.upset(x).describe(cart.lattice.base())))
    });
    let mut values = Vec::with_capacity(cart.len());
    let mut legs = Vec::with_capacity(cart.len());
    for r in results {
        let (v, l) = r?;
        values.push(v);
        legs.push(l);
    }
    Ok(Cartesianization { n, values, legs })
}

/// Poset targets: the limit is the meet of the values at the minimal members,
/// folded in `point_order`.
fn poset_extension(
    c: &FinCategory,
    poset: &Poset,
    cart: &Cart,
    tau: &GridSimplex,
    point_order: &[usize],
) -> Result<Cartesianization, CartError> {
    let n = cart.n;
    let value = |pt: usize| tau.objects[pt];
    let mut values = Vec::with_capacity(cart.len());
    let mut legs = Vec::with_capacity(cart.len());
    for x in 0..cart.len() {
        let members = &cart.minimal[x];
        let mut meet = None;
        for pt in point_order.iter().copied().filter(|pt| members.contains(pt)) {
            meet = match meet {
                None => Some(value(pt)),
                Some(a) => Some(
                    poset
                        .meet(a, value(pt))
                        .ok_or_else(|| CartError::MissingLimit(cart.upset(x).describe(cart.lattice.base())))?,
                ),
            };
        }
        let v = meet.expect("up-sets in Cart^n are non-empty");
        legs.push(members.iter().map(|&m| c.hom(v, value(m))[0]).collect());
        values.push(v);
    }
    Ok(Cartesianization { n, values, legs })
}

fn grid_coords(n: usize, pt: usize) -> (usize, usize) {
    (pt / (n + 1), pt % (n + 1))
}

fn tau_arrow(c: &FinCategory, n: usize, tau: &GridSimplex, from: usize, to: usize) -> Mor {
    tau.morphism(c, grid_coords(n, from), grid_coords(n, to))
}

/// The limit of `tau` over the up-set generated by `members`, with one leg per member.
fn limit_over(c: &FinCategory, n: usize, tau: &GridSimplex, members: &[usize]) -> Option<(Obj, Vec<Mor>)> {
    let value = |pt: usize| {
        let (p, q) = grid_coords(n, pt);
        tau.object(p, q)
    };
    // Pairs of members whose legs must agree after mapping to their common upper bound.
    let mut constraints = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate().skip(i + 1) {
            let (ga, gb) = (grid_coords(n, a), grid_coords(n, b));
            let top = (ga.0.max(gb.0)) * (n + 1) + ga.1.max(gb.1);
            constraints.push((i, j, tau_arrow(c, n, tau, a, top), tau_arrow(c, n, tau, b, top)));
        }
    }
    let mut cones: Vec<(Obj, Vec<Mor>)> = Vec::new();
    for w in 0..c.num_objects() {
        let mut legs = Vec::new();
        collect_cones(c, w, members, &value, &constraints, &mut legs, &mut cones);
    }
    let factors = |apex: &(Obj, Vec<Mor>), other: &(Obj, Vec<Mor>)| {
        c.hom(other.0, apex.0)
            .iter()
            .filter(|&&u| apex.1.iter().zip(&other.1).all(|(&l, &k)| c.compose(l, u) == Some(k)))
            .take(2)
            .count()
    };
    cones
        .iter()
        .find(|apex| cones.iter().all(|other| factors(apex, other) == 1))
        .cloned()
}

fn collect_cones(
    c: &FinCategory,
    w: Obj,
    members: &[usize],
    value: &dyn Fn(usize) -> Obj,
    constraints: &[(usize, usize, Mor, Mor)],
    legs: &mut Vec<Mor>,
    out: &mut Vec<(Obj, Vec<Mor>)>,
) {
    let k = legs.len();
    if k == members.len() {
        out.push((w, legs.clone()));
        return;
    }
    for &l in c.hom(w, value(members[k])) {
        legs.push(l);
        let ok = constraints
            .iter()
            .filter(|&&(_, j, _, _)| j == k)
            .all(|&(i, j, fa, fb)| c.compose(fa, legs[i]) == c.compose(fb, legs[j]));
        if ok {
            collect_cones(c, w, members, value, constraints, legs, out);
        }
        legs.pop();
    }
}

impl Cartesianization {
    /// The induced morphism `value(x) -> value(y)` for `x <= y` in `Cart^n`.
    pub fn morphism(&self, c: &FinCategory, cart: &Cart, tau: &GridSimplex, x: usize, y: usize) -> Option<Mor> {
        if !cart.poset().leq(x, y) {
            return None;
        }
        let (vx, vy) = (self.values[x], self.values[y]);
        if c.poset().is_some() {
            return c.hom(vx, vy).first().copied();
        }
        // Legs of x restricted to the minimal members of y, through a minimal member of x below each.
        let targets: Vec<Mor> = cart.minimal[y]
            .iter()
            .map(|&m| {
                let (k, &below) = cart.minimal[x]
                    .iter()
                    .enumerate()
                    .find(|&(_, &b)| cart.lattice.base().leq(b, m))
                    .expect("y is inside x");
                let down = tau_arrow(c, self.n, tau, below, m);
                c.compose(down, self.legs[x][k]).expect("legs compose")
            })
            .collect();
        c.hom(vx, vy)
            .iter()
            .copied()
            .find(|&u| self.legs[y].iter().zip(&targets).all(|(&l, &t)| c.compose(l, u) == Some(t)))
    }

    /// Restriction along `ς`.
    pub fn restrict_to_grid(&self, cart: &Cart) -> Vec<Obj> {
        (0..=cart.n)
            .flat_map(|p| (0..=cart.n).map(move |q| (p, q)))
            .map(|(p, q)| self.values[cart.sigma(p, q).expect("in range")])
            .collect()
    }

    /// The first exact square of `Cart^n` whose image is not a pullback.
    pub fn exact_square_failure(
        &self,
        c: &FinCategory,
        cart: &Cart,
        tau: &GridSimplex,
        squares: &[ExactSquare],
    ) -> Result<Option<ExactSquare>, CartError> {
        for sq in squares {
            let image = ExactSquare::new(self.values[sq.a], self.values[sq.b], self.values[sq.c], self.values[sq.d]);
            let ok = match c.poset() {
                Some(p) => p.is_pullback(&image),
                None => {
                    let arrow = |x, y| self.morphism(c, cart, tau, x, y).expect("ordered");
                    let square = Square {
                        top: arrow(sq.a, sq.b),
                        left: arrow(sq.a, sq.c),
                        right: arrow(sq.b, sq.d),
                        bottom: arrow(sq.c, sq.d),
                    };
                    c.is_pullback_square(&square)?
                }
            };
            if !ok {
                return Ok(Some(*sq));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::MarkedCategory;
    use crate::grid::{grid_simplex, Discipline};

    fn el(cart: &Cart, name: &str) -> usize {
        cart.poset().index_of(name).unwrap()
    }

    #[test]
    fn cart_one_hasse_diagram() {
        let cart = Cart::new(1).unwrap();
        assert_eq!(cart.len(), 5);
        let mut covers = cart.poset().cover_names();
        covers.sort();
        let expected = [
            ("b00", "b01^b10"),
            ("b01", "b11"),
            ("b01^b10", "b01"),
            ("b01^b10", "b10"),
            ("b10", "b11"),
        ];
        let expected: Vec<(String, String)> = expected.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(covers, expected);
    }

    #[test]
    fn structure_maps_in_cart_one() {
        let cart = Cart::new(1).unwrap();
        let p = el(&cart, "b01^b10");
        assert_eq!(cart.pi(cart.sigma(0, 1).unwrap()).unwrap(), (0, 1));
        assert_eq!(cart.xi(1, 1).unwrap(), p);
        assert_eq!(cart.eta(1, 1).unwrap(), el(&cart, "b11"));
        let b11 = el(&cart, "b11");
        assert_eq!(cart.lambda(0, p, b11).unwrap(), el(&cart, "b10"));
        assert_eq!(cart.mu(0, p, b11).unwrap(), el(&cart, "b01"));
        assert!(matches!(cart.sigma(2, 0), Err(CartError::OutOfRange { .. })));
    }

    #[test]
    fn epsilon_of_an_edge() {
        let cart = Cart::new(1).unwrap();
        let chain = [el(&cart, "b01^b10"), el(&cart, "b11")];
        let names: Vec<&str> = cart
            .epsilon_points(&chain)
            .unwrap()
            .into_iter()
            .map(|x| cart.poset().name(x))
            .collect();
        assert_eq!(names, ["b01^b10", "b01", "b10", "b11"]);
        let grid = cart.epsilon(&chain).unwrap();
        let mc = MarkedCategory::unmarked(cart.category().unwrap().clone());
        grid.validate(&mc, Discipline::Cart).unwrap();
        assert!(cart.epsilon_points(&[chain[1], chain[0]]).is_err());
    }

    #[test]
    fn boxplus_pieces_in_cart_one() {
        let cart = Cart::new(1).unwrap();
        let square = cart.boxplus(BoxplusPart::At(1, 1)).unwrap();
        assert_eq!(square.vertices().len(), 4);
        assert_eq!(square.maximal_chains().len(), 2);
        let corner = cart.boxplus_piece(0, 1).unwrap();
        let names: Vec<&str> = corner.iter().map(|&x| cart.poset().name(x)).collect();
        assert_eq!(names, ["b00", "b01^b10", "b01"]);
        let cert = cart.certify_boxplus_cart().unwrap();
        cert.validate().unwrap();
    }

    #[test]
    fn epsilon_of_the_corner_chain_is_not_cartesian() {
        // The computed corner piece is a 3-chain; read as a single edge it would not contain this 2-simplex.
        let cart = Cart::new(1).unwrap();
        let chain = [el(&cart, "b00"), el(&cart, "b01^b10"), el(&cart, "b01")];
        let pts = cart.epsilon_points(&chain).unwrap();
        let sq = ExactSquare::new(pts[1], pts[2], pts[4], pts[5]);
        let names: Vec<&str> = [sq.a, sq.b, sq.c, sq.d].iter().map(|&x| cart.poset().name(x)).collect();
        assert_eq!(names, ["b00", "b01", "b01^b10", "b01"]);
        assert!(!cart.poset().is_pullback(&sq));
        let mc = MarkedCategory::unmarked(cart.category().unwrap().clone());
        assert!(cart.epsilon(&chain).unwrap().validate(&mc, Discipline::Cart).is_err());
    }

    #[test]
    fn kart_of_identity_grid_is_the_meet() {
        let cart = Cart::new(1).unwrap();
        let target = Arc::new(FinCategory::from_poset(Arc::new(Poset::grid(1, 1))));
        let mc = MarkedCategory::unmarked(target.clone());
        let arrow = |x: usize, y: usize| target.hom(x, y)[0];
        let tau = grid_simplex(
            &mc,
            1,
            vec![0, 1, 2, 3],
            vec![arrow(0, 1), arrow(2, 3)],
            vec![arrow(0, 2), arrow(1, 3)],
            Discipline::Comm,
        )
        .unwrap();
        let kart = kart_extension(&target, &cart, &tau).unwrap();
        assert_eq!(kart.restrict_to_grid(&cart), vec![0, 1, 2, 3]);
        assert_eq!(kart.values[el(&cart, "b01^b10")], 0);
        let squares = cart.nondegenerate_exact_squares();
        assert_eq!(squares.len(), 1);
        assert_eq!(kart.exact_square_failure(&target, &cart, &tau, &squares).unwrap(), None);
    }

    #[test]
    fn kart_in_finite_sets_takes_the_fiber_product() {
        // 2 -> 2 <- 1, the right leg hitting e1; the fiber product has one element.
        let sets = Arc::new(FinCategory::finsets_of_sizes(&[1, 2]));
        let size = |k: usize| (0..sets.num_objects()).find(|&x| sets.set_size(x) == Some(k)).unwrap();
        let map = |from: usize, to: usize, values: &[usize]| {
            *sets
                .hom(size(from), size(to))
                .iter()
                .find(|&&f| sets.function_values(f) == Some(values))
                .unwrap()
        };
        let mc = MarkedCategory::unmarked(sets.clone());
        let tau = grid_simplex(
            &mc,
            1,
            vec![size(1), size(2), size(1), size(2)],
            vec![map(1, 2, &[1]), map(1, 2, &[1])],
            vec![map(1, 1, &[0]), map(2, 2, &[0, 1])],
            Discipline::Comm,
        )
        .unwrap();
        let cart = Cart::new(1).unwrap();
        let kart = kart_extension(&sets, &cart, &tau).unwrap();
        assert_eq!(kart.restrict_to_grid(&cart), tau.objects);
        assert_eq!(sets.set_size(kart.values[el(&cart, "b01^b10")]), Some(1));
        let reversed = kart_extension_in_order(&sets, &cart, &tau, &[3, 2, 1, 0], Exec::Sequential).unwrap();
        assert_eq!(reversed, kart);
        let squares = cart.nondegenerate_exact_squares();
        assert_eq!(kart.exact_square_failure(&sets, &cart, &tau, &squares).unwrap(), None);
    }
}
