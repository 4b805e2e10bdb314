//! Inner-anodyne certificates: ordered inner-horn attachments that grow one
//! subcomplex of a nerve into another.

mod construct;
mod search;

use std::fmt;

use thiserror::Error;

use crate::nerve::{face, same_base, Chain, NerveError, SubNerve};

pub use construct::{certify_interval_union, certify_poset_pushout, certify_poset_pushout_dual};
pub use search::{search_certificate, DEFAULT_SEARCH_BUDGET};

/// Which validity condition a move broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveViolation {
    NotInner,
    NotAChain,
    ChainPresent,
    FacePresent,
    /// Face `i` (with `i != k`) is not in the complex yet.
    FaceMissing(usize),
}

impl fmt::Display for MoveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveViolation::NotInner => write!(f, "k is not strictly inner"),
            MoveViolation::NotAChain => write!(f, "the simplex is not a chain of the base"),
            MoveViolation::ChainPresent => write!(f, "the simplex is already present"),
            MoveViolation::FacePresent => write!(f, "face k is already present"),
            MoveViolation::FaceMissing(i) => write!(f, "face {i} is missing"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("invalid move {chain:?}, k={k}: {violation}")]
    MoveInvalid {
        chain: Vec<String>,
        k: usize,
        violation: MoveViolation,
    },
    #[error("final complex differs from the target ({missing} simplices missing, {extra} extra)")]
    TargetMismatch { missing: usize, extra: usize },
    #[error("the complexes live over different base posets")]
    BaseMismatch,
    #[error("the start complex is not contained in the target")]
    NotSubcomplex,
    #[error("no certificate exists: the move space was exhausted after {visited} states")]
    NotFound { visited: usize },
    #[error("search budget of {budget} states exhausted without a certificate")]
    BudgetExhausted { budget: usize },
    #[error("hypothesis {name} fails: {witness}")]
    HypothesisFailed { name: String, witness: String },
    #[error(transparent)]
    Nerve(#[from] NerveError),
}

/// Attach `Λ^m_k -> Δ^m` along `chain`, adding `chain` and its `k`-th face.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornMove {
    pub chain: Chain,
    pub k: usize,
}

impl HornMove {
    pub fn new(chain: Chain, k: usize) -> Self {
        HornMove { chain, k }
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn free_face(&self) -> Chain {
        face(&self.chain, self.k)
    }
}

/// Checks `mv` against `complex` without changing it.
pub fn check_move(complex: &SubNerve, mv: &HornMove) -> Result<(), CertError> {
    let fail = |violation| CertError::MoveInvalid {
        chain: mv
            .chain
            .iter()
            .map(|&v| complex.base().names().get(v).cloned().unwrap_or_else(|| format!("#{v}")))
            .collect(),
        k: mv.k,
        violation,
    };
    let m = mv.chain.len().saturating_sub(1);
    if m < 2 || mv.k == 0 || mv.k >= m {
        return Err(fail(MoveViolation::NotInner));
    }
    match complex.normalize(&mv.chain) {
        Ok(c) if c == mv.chain => {}
        _ => return Err(fail(MoveViolation::NotAChain)),
    }
    if complex.contains(&mv.chain) {
        return Err(fail(MoveViolation::ChainPresent));
    }
    if complex.contains(&mv.free_face()) {
        return Err(fail(MoveViolation::FacePresent));
    }
    for i in (0..=m).filter(|&i| i != mv.k) {
        if !complex.contains(&face(&mv.chain, i)) {
            return Err(fail(MoveViolation::FaceMissing(i)));
        }
    }
    Ok(())
}

pub fn apply_move(complex: &SubNerve, mv: &HornMove) -> Result<SubNerve, CertError> {
    let mut out = complex.clone();
    apply_move_in_place(&mut out, mv)?;
    Ok(out)
}

pub fn apply_move_in_place(complex: &mut SubNerve, mv: &HornMove) -> Result<(), CertError> {
    check_move(complex, mv)?;
    complex.insert(mv.free_face());
    complex.insert(mv.chain.clone());
    Ok(())
}

/// A sequence of inner-horn attachments from `start` to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnodyneCertificate {
    pub start: SubNerve,
    pub target: SubNerve,
    pub moves: Vec<HornMove>,
}

impl AnodyneCertificate {
    /// Replays every move and compares the result with the target.
    pub fn validate(&self) -> Result<(), CertError> {
        if !same_base(self.start.base(), self.target.base()) {
            return Err(CertError::BaseMismatch);
        }
        if !self.start.is_subcomplex_of(&self.target) {
            return Err(CertError::NotSubcomplex);
        }
        let mut current = self.start.clone();
        for mv in &self.moves {
            apply_move_in_place(&mut current, mv)?;
        }
        if current != self.target {
            let missing = self.target.chains().difference(current.chains()).count();
            let extra = current.chains().difference(self.target.chains()).count();
            return Err(CertError::TargetMismatch { missing, extra });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::{standard_shape, ShapeKind};

    #[test]
    fn inner_horn_fills_to_simplex() {
        let horn = standard_shape(2, ShapeKind::InnerHorn(1)).unwrap();
        let filled = apply_move(&horn, &HornMove::new(vec![0, 1, 2], 1)).unwrap();
        assert_eq!(filled.chains(), standard_shape(2, ShapeKind::Simplex).unwrap().chains());
    }

    #[test]
    fn boundary_rejects_the_move() {
        let b = standard_shape(2, ShapeKind::Boundary).unwrap();
        let err = apply_move(&b, &HornMove::new(vec![0, 1, 2], 1)).unwrap_err();
        assert!(matches!(
            err,
            CertError::MoveInvalid {
                violation: MoveViolation::FacePresent,
                ..
            }
        ));
    }

    #[test]
    fn outer_and_missing_faces_are_named() {
        let horn = standard_shape(2, ShapeKind::Horn(0)).unwrap();
        let err = apply_move(&horn, &HornMove::new(vec![0, 1, 2], 0)).unwrap_err();
        assert!(matches!(
            err,
            CertError::MoveInvalid {
                violation: MoveViolation::NotInner,
                ..
            }
        ));
        let err = apply_move(&horn, &HornMove::new(vec![0, 1, 2], 1)).unwrap_err();
        assert!(matches!(
            err,
            CertError::MoveInvalid {
                violation: MoveViolation::FacePresent,
                ..
            }
        ));
        let err = apply_move(&horn, &HornMove::new(vec![0, 2, 1], 1)).unwrap_err();
        assert!(matches!(
            err,
            CertError::MoveInvalid {
                violation: MoveViolation::NotAChain,
                ..
            }
        ));
    }

    #[test]
    fn certificate_target_is_checked() {
        let horn = standard_shape(2, ShapeKind::InnerHorn(1)).unwrap();
        let cert = AnodyneCertificate {
            start: horn.clone(),
            target: horn.clone(),
            moves: vec![HornMove::new(vec![0, 1, 2], 1)],
        };
        assert_eq!(cert.validate(), Err(CertError::TargetMismatch { missing: 0, extra: 2 }));
    }
}
