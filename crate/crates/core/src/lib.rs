//! Workbench for the restricted online Ramsey game.
//!
//! Builder repeatedly picks an unbuilt pair of an `N`-vertex graph and
//! Painter colors it red or blue; Builder wins once a red `K_m` or a blue
//! `K_n` appears. This crate provides the graph model, the game loop, a pool
//! of Builder and Painter policies (including the move-saving multipartite /
//! independent-pair strategy), an exact solver for tiny boards, checkers for
//! the extremal bounds the strategy relies on, and an in-memory session
//! service for interactive play.

pub mod builders;
pub mod game;
pub mod graph;
pub mod harness;
pub mod lab;
pub mod painters;
pub mod policy;
pub mod rational;
pub mod session;
pub mod solver;

pub use graph::{BichromaticGraph, Color, GraphError, Pair, PairState};
pub use rational::Rational;

#[cfg(test)]
pub(crate) fn rng_for_tests(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
