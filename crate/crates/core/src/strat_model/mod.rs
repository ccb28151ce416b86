//! Isotropy type data, the canonical resolution by iterated blow-ups and the
//! resulting tower of resolved quotients.

pub mod fixtures;
mod monodromy;
mod resolve;
mod spec;
mod tower;
mod validate;

pub use monodromy::Monodromy;
pub use resolve::{canonical_resolution, ResolutionRound, ResolutionTrace};
pub use spec::{same_inclusion, Cover, HypersurfaceDecl, IsotropySpec, IsotropyType, KFixture, TypeOrder};
pub use tower::{ResolutionTower, TowerEdge, TowerNode};
pub use validate::{edge_table, quotient_skeleton, validate_tower, Incidence, NodeSkeleton, QuotientSkeleton, Violation};

use thiserror::Error;

use crate::chain_engine::{ChainError, Simplex};
use crate::corner_poset::PosetError;
use crate::group_data::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StratError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown isotropy type `{0}`")]
    UnknownType(String),
    #[error("type order has a cycle through `{0}`")]
    Cyclic(String),
    #[error("cover `{lower}` < `{upper}`: {reason}")]
    InclusionMismatch { lower: String, upper: String, reason: String },
    #[error("no generic isotropy type")]
    NoGenericType,
    #[error("several maximal isotropy types: {0:?}")]
    MultipleGeneric(Vec<String>),
    #[error("composite inclusions from `{upper}` into `{lower}` depend on the path")]
    PathDependent { lower: String, upper: String },
    #[error("type `{type_id}` declares dimension {declared} but its complex has dimension {complex}")]
    DimensionMismatch { type_id: String, declared: usize, complex: usize },
    #[error("type `{0}` has an empty complex")]
    EmptyComplex(String),
    #[error("hypersurface `{id}`: {reason}")]
    BadHypersurface { id: String, reason: String },
    #[error("monodromy on edge {edge:?}: {reason}")]
    BadMonodromy { edge: (usize, usize), reason: String },
    #[error("monodromy is not flat on {0:?}")]
    NotFlat(Simplex),
    #[error("types `{first}` and `{second}` are blown up in the same round but their hypersurfaces meet")]
    IntersectingRound { first: String, second: String },
    #[error("round {round}: {detail}")]
    RoundStructure { round: usize, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}
