//! Checkers for the extremal ingredients of the Builder strategy: the
//! Kővári–Sós–Turán bound, clique/independent-set extraction in sparse
//! graphs, the incidence-density dichotomy for balanced bipartite colorings,
//! and small classical Ramsey numbers.

mod density;
mod es;
mod kst;
mod ramsey;

use thiserror::Error;

use crate::graph::GraphError;

pub use density::{
    half_half_instance, random_balanced_instance, two_block_instance, verify_least_density,
    verify_least_density_halves, LeastDensityWitness,
};
pub use es::{es_constant_sweep, es_extract, EsSample, Extraction, SetKind, SimpleGraph, ES_MAX_VERTICES};
pub use kst::{below_kst_bound, kst_bound, random_kst_free, BipartiteGraph};
pub use ramsey::{classical_ramsey, ramsey_coloring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a complete bipartite graph: {0}")]
    NotBipartiteComplete(String),
    #[error("coloring is not ε-balanced (red density {0})")]
    NotBalanced(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
