//! Exact resolution towers for compact group actions given as combinatorial
//! stratification data, with reduced equivariant cohomology, delocalized
//! cohomology, reduced equivariant K-theory and the Chern character computed
//! over the resolved quotient.

pub mod chain_engine;
pub mod corner_poset;
pub mod equivariant_models;
pub mod group_data;
pub mod linalg;
pub mod scenarios_cli;
pub mod strat_model;
