//! Exact cochain computations: twisted simplicial cohomology with flat graded
//! coefficients, the equalizer complex over a resolution tower, its relative
//! versions and long exact sequence checks.

mod cohomology;
mod complex;
mod local_system;
mod tower_complex;

pub use cohomology::{cohomology, twisted_cohomology, CohomologyTable, ParityTable, SlicePart, TowerComplexSlice};
pub use complex::{face, Simplex, SimplexImage, SimplicialComplexDesc, SimplicialMapDesc, Vertex};
pub use local_system::{twisted_coboundary, LocalSystem};
pub use tower_complex::{
    borel_system, close_window, constraint_defect, equalizer_complex, rep_system, les_check, relative_complex, tower_coboundary, tower_cohomology, CoefficientKind,
    LesReport, LesSlot, TowerCoefficients, zero_cocycles,
};

use thiserror::Error;

use crate::group_data::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("malformed simplex {0:?}")]
    BadSimplex(Vec<Vertex>),
    #[error("map undefined on simplex {0:?}")]
    MapUndefined(Simplex),
    #[error("simplex {simplex:?} maps to {image:?}, which is not a simplex of the target")]
    MapNotSimplicial { simplex: Simplex, image: Simplex },
    #[error("transport on edge {edge:?}: {reason}")]
    BadTransport { edge: (Vertex, Vertex), reason: String },
    #[error("local system is not flat on {0:?}")]
    NotFlat(Simplex),
    #[error("empty coefficient window")]
    EmptyWindow,
    #[error("d^2 != 0 starting in total degree {degree}")]
    DSquaredNonzero { degree: usize },
    #[error("constraints are not preserved by d in form degree {form_degree}, coefficient degree {coeff_degree}")]
    NotSubcomplex { form_degree: usize, coeff_degree: u32 },
    #[error("set is not closed below: {0}")]
    NotClosedBelow(String),
    #[error("long exact sequence precondition: {0}")]
    LesPrecondition(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
