//! Finite combinatorics behind compactification and cartesianization gluing:
//! posets and up-set lattices, nerves, inner-anodyne certificates, finite
//! categories, grid nerves, and the 1-categorical gluing checks.

#![allow(clippy::needless_range_loop)]

pub mod anodyne;
pub mod cartesian;
pub mod compactification;
pub mod corpus;
pub mod fincat;
pub mod gluing;
pub mod grid;
pub mod interchange;
pub mod laws;
pub mod nerve;
pub mod par;
pub mod poset;
pub mod report;
pub mod upset;

pub use anodyne::{AnodyneCertificate, CertError, HornMove};
pub use cartesian::{Cart, Cartesianization};
pub use compactification::{Compactification, Kpt};
pub use fincat::{EdgeClass, FinCategory, Functor, MarkedCategory};
pub use gluing::{GluingError, GridFunctorData};
pub use grid::{Discipline, GridSimplex};
pub use laws::{Suite, SuiteConfig};
pub use nerve::{Chain, SubNerve};
pub use par::Exec;
pub use poset::{ExactSquare, GridPoint, Poset, PosetError};
pub use report::{CheckOutcome, Report};
pub use upset::{UpSet, UpsetLattice};
