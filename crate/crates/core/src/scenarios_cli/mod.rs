//! Scenario files, the built-in catalogue and the resolve → validate →
//! compute → report pipeline behind the `equires` binary.

mod catalogue;
mod report;
mod run;
mod schema;

pub use catalogue::{generate_catalogue, series_product, CATALOGUE};
pub use report::{render, Format};
pub use run::{run, Check, Command, Overrides, RunReport, RunStatus, Tables, ENGINE_VERSION};
pub use schema::{
    emit_scenario, parse_scenario, strata_from_spec, ComplexSpec, Computations, CoverSpec, Expectations,
    HypersurfaceSpec, MapSpec, Membership, MonodromyEdge, NamedClass, ScenarioFile, StrataSpec, TypeSpec,
    DEFAULT_MAX_DEGREE, DEFAULT_WINDOW, SCHEMA_VERSION,
};

use thiserror::Error;

use crate::equivariant_models::ModelError;
use crate::strat_model::StratError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at `{path}` (line {line}, column {column}): {message}")]
    Schema { path: String, line: usize, column: usize, message: String },
    #[error("unsupported schema version `{0}` (expected `{SCHEMA_VERSION}`)")]
    Version(String),
    #[error("dangling {kind} reference `{id}` at `{path}`")]
    Dangling { path: String, kind: &'static str, id: String },
    #[error("invalid value at `{path}`: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown catalogue scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("scenario `{scenario}`: {source}")]
    Strat { scenario: String, source: StratError },
    #[error("scenario `{scenario}`: {source}")]
    Model { scenario: String, source: ModelError },
}
