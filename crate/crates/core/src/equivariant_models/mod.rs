//! The reduced theories over a resolution tower: Cartan cohomology with
//! Borel coefficients, delocalized cohomology with representation-ring
//! coefficients, reduced K-theory and the Chern character between them.

mod chern;
mod ktheory;

pub use chern::{chern_character, chern_rank, ChernImage};
pub use ktheory::{reduced_k_theory, KClassPresentation, KTheoryTable, NodeClass};

use serde::Serialize;
use thiserror::Error;

use crate::chain_engine::{
    borel_system, close_window, tower_cohomology, twisted_cohomology, ChainError, CohomologyTable, ParityTable,
    TowerCoefficients,
};
use crate::group_data::{borel_fiber, rep_ring, GroupError};
use crate::strat_model::{IsotropySpec, KFixture, ResolutionTower, StratError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("node `{0}` has no K-theory data")]
    MissingK(String),
    #[error("class is not compatible along `{edge}`")]
    Incompatible { edge: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("chern image violates {0} equalizer constraints")]
    ConstraintViolation(usize),
    #[error("expected a single isotropy type, found {0}")]
    MultiType(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Strat(#[from] StratError),
}

/// Equalizer cohomology with Borel coefficients through total degree `max_degree`.
pub fn reduced_cartan_cohomology(tower: &ResolutionTower, max_degree: usize) -> Result<CohomologyTable, ModelError> {
    let coeff = TowerCoefficients::borel(tower, max_degree)?;
    Ok(tower_cohomology(tower, &coeff, max_degree)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelocalizedTable {
    /// Ranks by form degree.
    pub ranks: CohomologyTable,
    pub parity: ParityTable,
}

/// Equalizer cohomology with representation-ring coefficients on the
/// character window `[lo, hi]`.
pub fn delocalized_cohomology(tower: &ResolutionTower, lo: i64, hi: i64) -> Result<DelocalizedTable, ModelError> {
    let coeff = TowerCoefficients::rep(tower, lo, hi)?;
    let top = tower.nodes.iter().filter_map(|n| n.complex.dim()).max().unwrap_or(0);
    let ranks = tower_cohomology(tower, &coeff, top)?;
    Ok(DelocalizedTable { parity: ranks.parity(), ranks })
}

/// Tables for a single isotropy type computed straight from the base
/// complex, without building a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortcutTables {
    pub cartan: CohomologyTable,
    pub delocalized: ParityTable,
    pub k_theory: Option<KFixture>,
}

pub fn fixed_isotropy_shortcut(spec: &IsotropySpec, max_degree: usize, lo: i64, hi: i64) -> Result<ShortcutTables, ModelError> {
    let [t] = spec.types.as_slice() else {
        return Err(ModelError::MultiType(spec.types.len()));
    };
    t.monodromy.validate(&t.group, &t.complex)?;
    let fiber = borel_fiber(&t.group);
    let degrees: Vec<u32> = (0..=max_degree as u32).filter(|&d| fiber.dim(d) > 0).collect();
    let cartan = twisted_cohomology(&t.complex, &borel_system(&t.group, &t.monodromy, &degrees)?, max_degree)?;
    let window: Vec<_> = close_window(&t.group, &t.monodromy, rep_ring(&t.group).window(lo, hi).into_iter().collect())?
        .into_iter()
        .collect();
    let rep = crate::chain_engine::rep_system(&t.group, &t.monodromy, &window)?;
    let top = t.complex.dim().unwrap_or(0);
    let delocalized = twisted_cohomology(&t.complex, &rep, top)?.parity();
    let k_theory = match t.k_theory {
        Some(k) if t.monodromy.is_trivial() => Some(KFixture { k0: k.k0 * window.len(), k1: k.k1 * window.len() }),
        Some(_) => return Err(ModelError::Unsupported("K-theory with nontrivial monodromy".into())),
        None => None,
    };
    Ok(ShortcutTables { cartan, delocalized, k_theory })
}
