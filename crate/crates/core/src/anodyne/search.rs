//! Backtracking search for certificates.
//!
//! Moves are tried by increasing dimension of their free face, then in
//! lexicographic order. Any certificate can be reordered so that free-face
//! dimensions never decrease, so restricting each step to the lowest missing
//! dimension loses nothing. Dead states are memoized. `NotFound` means every
//! reachable state was explored; running out of budget is `BudgetExhausted`.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use super::{AnodyneCertificate, CertError, HornMove};
use crate::nerve::{face, same_base, Chain, SubNerve};

pub const DEFAULT_SEARCH_BUDGET: usize = 10_000_000;

/// Cap on memoized dead states; past it the search keeps going without memo.
const MEMO_CAP: usize = 2_000_000;

#[derive(Clone, Copy)]
struct Candidate {
    top: usize,
    free: usize,
    k: usize,
}

struct Frame {
    moves: Vec<Candidate>,
    next: usize,
    applied: Option<Candidate>,
}

pub fn search_certificate(start: &SubNerve, target: &SubNerve, budget: usize) -> Result<AnodyneCertificate, CertError> {
    if !same_base(start.base(), target.base()) {
        return Err(CertError::BaseMismatch);
    }
    if !start.is_subcomplex_of(target) {
        return Err(CertError::NotSubcomplex);
    }
    let simplices: Vec<Chain> = target.chains().iter().cloned().collect();
    let index: HashMap<&Chain, usize> = simplices.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let n = simplices.len();
    let faces: Vec<Vec<usize>> = simplices
        .iter()
        .map(|c| {
            if c.len() == 1 {
                Vec::new()
            } else {
                (0..c.len()).map(|i| index[&face(c, i)]).collect()
            }
        })
        .collect();

    let mut present = FixedBitSet::with_capacity(n);
    for c in start.chains() {
        present.insert(index[c]);
    }
    // Candidate moves grouped by free face.
    let mut by_free: Vec<Vec<Candidate>> = vec![Vec::new(); n];
    for (top, c) in simplices.iter().enumerate() {
        let m = c.len() - 1;
        if present.contains(top) || m < 2 {
            continue;
        }
        for k in 1..m {
            let free = faces[top][k];
            if !present.contains(free) {
                by_free[free].push(Candidate { top, free, k });
            }
        }
    }
    let max_dim = simplices.iter().map(|c| c.len()).max().unwrap_or(0);
    // Missing simplices per dimension, in lexicographic order.
    let mut missing_by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim];
    for i in (0..n).filter(|&i| !present.contains(i)) {
        missing_by_dim[simplices[i].len() - 1].push(i);
    }

    let mut state = Search {
        faces: &faces,
        by_free: &by_free,
        missing_by_dim: &missing_by_dim,
        present,
        missing: n - start.len(),
        visited: 0,
        memo: HashSet::new(),
    };

    let cert = |path: &[Candidate]| AnodyneCertificate {
        start: start.clone(),
        target: target.clone(),
        moves: path.iter().map(|c| HornMove::new(simplices[c.top].clone(), c.k)).collect(),
    };
    if state.missing == 0 {
        return Ok(cert(&[]));
    }
    let mut path: Vec<Candidate> = Vec::new();
    let mut stack = match state.available() {
        Some(moves) => vec![Frame {
            moves,
            next: 0,
            applied: None,
        }],
        None => return Err(CertError::NotFound { visited: 1 }),
    };
    while let Some(frame) = stack.last_mut() {
        if let Some(done) = frame.applied.take() {
            state.undo(done);
            path.pop();
        }
        if frame.next == frame.moves.len() {
            state.remember();
            stack.pop();
            continue;
        }
        let mv = frame.moves[frame.next];
        frame.next += 1;
        frame.applied = Some(mv);
        state.apply(mv);
        path.push(mv);
        state.visited += 1;
        if state.missing == 0 {
            return Ok(cert(&path));
        }
        if state.visited >= budget {
            return Err(CertError::BudgetExhausted { budget });
        }
        if state.memo.contains(&state.present) {
            continue;
        }
        match state.available() {
            Some(moves) => stack.push(Frame {
                moves,
                next: 0,
                applied: None,
            }),
            None => state.remember(),
        }
    }
    Err(CertError::NotFound {
        visited: state.visited.max(1),
    })
}

struct Search<'a> {
    faces: &'a [Vec<usize>],
    by_free: &'a [Vec<Candidate>],
    missing_by_dim: &'a [Vec<usize>],
    present: FixedBitSet,
    missing: usize,
    visited: usize,
    memo: HashSet<FixedBitSet>,
}

impl Search<'_> {
    fn apply(&mut self, c: Candidate) {
        self.present.insert(c.top);
        self.present.insert(c.free);
        self.missing -= 2;
    }

    fn undo(&mut self, c: Candidate) {
        self.present.set(c.top, false);
        self.present.set(c.free, false);
        self.missing += 2;
    }

    fn remember(&mut self) {
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(self.present.clone());
        }
    }

    /// Valid moves whose free face has the lowest missing dimension, or
    /// `None` when some simplex at that dimension can no longer be added.
    fn available(&self) -> Option<Vec<Candidate>> {
        let lowest = self
            .missing_by_dim
            .iter()
            .find(|dim| dim.iter().any(|&i| !self.present.contains(i)))?;
        let mut out = Vec::new();
        for &free in lowest.iter().filter(|&&i| !self.present.contains(i)) {
            let mut alive = false;
            for c in &self.by_free[free] {
                if self.present.contains(c.top) {
                    continue;
                }
                alive = true;
                let ready = self.faces[c.top]
                    .iter()
                    .enumerate()
                    .all(|(i, &f)| i == c.k || self.present.contains(f));
                if ready {
                    out.push(*c);
                }
            }
            if !alive {
                return None;
            }
        }
        (!out.is_empty()).then_some(out)
    }
}
