//! Face posets of manifolds with corners, group actions on boundary
//! hypersurfaces, blow-up bookkeeping and iterated fibration structures.

pub mod fixtures;
mod ifs;
mod poset;

pub use ifs::{
    induced_ifs_on_base, lift_ifs_under_blowup, validate_ifs, Compatibility, Fibration, IfsViolation,
    IteratedFibrationDesc,
};
pub use poset::{
    apply_total_boundary_blowup, blowup_face_poset, check_intersection_free, total_boundary_blowup_order, BlowUp,
    BlowupOrder, Center, Face, FacePoset, HypId, HypersurfaceAction, InteriorComponent, IntersectionWitness,
    Intersection, Partition,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("invalid face poset: {0}")]
    Invalid(String),
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("unknown hypersurface `{0}`")]
    UnknownHypersurface(String),
    #[error("action does not preserve the face poset: {0}")]
    NotPreserving(String),
    #[error("blowing up `{0}` is trivial (the whole manifold or a boundary hypersurface)")]
    TrivialCenter(String),
    #[error("blow-up of `{0}` separates a hypersurface; separating blow-ups are not supported")]
    Separating(String),
    #[error("hypersurface `{0}` meets the center but is not transversal to its fibers")]
    NotTransversal(String),
    #[error("face `{0}` is not determined by its hypersurfaces, so the action cannot be lifted")]
    AmbiguousFace(String),
}
