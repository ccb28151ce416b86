//! Compact groups appearing as isotropy groups, their two coefficient rings
//! (invariant polynomials and representation rings), restriction maps along
//! inclusions and the coefficient-level Chern character.

mod chern;
mod group;
mod inclusion;
pub mod poly;
mod ring;

pub use chern::chern_of_rep;
pub use group::{
    borel_fiber, rep_ring, Character, CompactGroupDesc, FormalOverride, FormalRepRing, ProductEntry, RepRingDesc,
    VirtualCharacter,
};
pub use inclusion::{FormalInclusion, GroupInclusion, RepMap, RepMapKind};
pub use poly::Poly;
pub use ring::{Generator, GradedPiece, GradedRingDesc, RingMap};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invariant factor {0} must be at least 2")]
    BadInvariantFactor(u64),
    #[error("generator {name} has degree {degree}; degrees must be even and at least 2")]
    BadGeneratorDegree { name: String, degree: u32 },
    #[error("relation {index}: {reason}")]
    BadRelation { index: usize, reason: String },
    #[error("formal group data: {0}")]
    BadFormal(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("image of generator {0} is not homogeneous of the generator's degree")]
    NotGraded(String),
    #[error("relations are not mapped into the relation ideal")]
    RelationNotPreserved,
    #[error("lattice map entry ({row}, {col}) is not compatible with the finite orders")]
    IllDefinedLatticeMap { row: usize, col: usize },
    #[error("lie_map disagrees with the torus block of lattice_map")]
    IncompatibleLieMap,
    #[error("formal groups require explicit formal inclusion data")]
    MissingFormalInclusion,
    #[error("inclusions are not composable")]
    NotComposable,
    #[error("malformed character {0:?}")]
    BadCharacter(Character),
    #[error("Chern truncation degree {0} must be even")]
    OddTruncation(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
