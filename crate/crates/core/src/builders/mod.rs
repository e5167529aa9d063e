//! Builder policies.
//!
//! * [`NaiveBuilder`] builds every pair in lexicographic order.
//! * [`PaperBuilder`] builds a complete multipartite graph first, then either
//!   plays the independent-pair endgame on an ε-balanced pair of parts or,
//!   when every part pair is near-monochromatic, fills a monochromatic clique
//!   of parts.
//! * [`ForcedEdgeBuilder`] sweeps the vertices and defers pairs that Painter
//!   cannot color red without losing.

mod families;
mod forced;
mod paper;

use std::collections::VecDeque;

use serde::Serialize;

use crate::game::{BuilderPolicy, GameConfig, GameState, PhaseRecord};
use crate::graph::{BichromaticGraph, Pair};
use crate::rational::{check_epsilon, parse_rational, ratio, Rational};

pub use families::{
    assemble_pair_families, biclique_mine, family_forces, generalized_family_savings, Biclique,
    FamilyError, Forcing, PairFamilies, EXACT_MINE_LIMIT,
};
pub use forced::{is_forced, ForcedEdgeBuilder};
pub use paper::{
    balanced_pair_search, multipartite_phase, select_incidence, Family, PaperBuilder,
    PairwiseOutcome,
};

/// Tunables of the multipartite strategy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaperStrategyParams {
    /// Number of parts `C`.
    pub parts: usize,
    pub epsilon: Rational,
    /// Override for the biclique's vertex side (default `⌈δ ln N₀⌉`).
    pub a_target: Option<usize>,
    /// Override for the biclique's pair side (default `⌈N₀ ln N₀⌉`).
    pub b_target: Option<usize>,
    /// Node budget for deciding which pair family forces a win.
    pub forcing_budget: u64,
}

impl PaperStrategyParams {
    /// `C = max(2, ⌊√N⌋)`, `ε = 1/10`.
    pub fn for_vertices(vertices: usize) -> Self {
        let root = (vertices as f64).sqrt().floor() as usize;
        PaperStrategyParams {
            parts: root.max(2),
            epsilon: ratio(1, 10),
            a_target: None,
            b_target: None,
            forcing_budget: 200_000,
        }
    }

    /// Applies `key=value` overrides separated by commas, e.g. `C=4,eps=1/8`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, String> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {item:?}"))?;
            let int = || value.parse::<usize>().map_err(|_| format!("bad integer {value:?} for {key}"));
            match key {
                "C" => self.parts = int()?,
                "eps" => self.epsilon = parse_rational(value)?,
                "a" => self.a_target = Some(int()?),
                "b" => self.b_target = Some(int()?),
                "budget" => self.forcing_budget = int()? as u64,
                _ => return Err(format!("unknown parameter {key:?}")),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.parts < 2 {
            return Err(format!("C must be at least 2, got {}", self.parts));
        }
        if self.a_target == Some(0) || self.b_target == Some(0) {
            return Err("biclique targets must be positive".into());
        }
        check_epsilon(self.epsilon).map(|_| ())
    }

    /// `δ = ε⁵ / (2(1+ε))`, always derived from ε.
    pub fn delta(&self) -> f64 {
        let e = crate::rational::to_f64(self.epsilon);
        e.powi(5) / (2.0 * (1.0 + e))
    }

    /// Biclique targets `(⌈δ ln N₀⌉, ⌈N₀ ln N₀⌉)` (natural log), at least 1,
    /// unless overridden.
    pub fn biclique_targets(&self, part_size: usize) -> (usize, usize) {
        let ln = (part_size.max(1) as f64).ln();
        let a = self
            .a_target
            .unwrap_or_else(|| (self.delta() * ln).ceil() as usize)
            .max(1);
        let b = self
            .b_target
            .unwrap_or_else(|| (part_size as f64 * ln).ceil() as usize)
            .max(1);
        (a, b)
    }
}

/// Pending moves; entries that became built meanwhile are skipped.
#[derive(Debug, Default)]
struct PlanQueue(VecDeque<Pair>);

impl PlanQueue {
    fn replace(&mut self, pairs: impl IntoIterator<Item = Pair>) {
        self.0 = pairs.into_iter().collect();
    }

    fn next_unbuilt(&mut self, g: &BichromaticGraph) -> Option<Pair> {
        while let Some(p) = self.0.pop_front() {
            if !g.is_built(p.lo, p.hi) {
                return Some(p);
            }
        }
        None
    }
}

#[derive(Debug, Default)]
struct PhaseLog(Vec<PhaseRecord>);

impl PhaseLog {
    fn begin(&mut self, name: &str, witness: serde_json::Value) {
        self.0.push(PhaseRecord::new(name, witness));
    }

    fn count_move(&mut self) {
        if let Some(last) = self.0.last_mut() {
            last.moves += 1;
        }
    }

    fn records(&self) -> Vec<PhaseRecord> {
        self.0.clone()
    }
}

/// Builds all unbuilt pairs in lexicographic order.
#[derive(Debug)]
pub struct NaiveBuilder {
    moves: usize,
}

impl NaiveBuilder {
    pub fn new(_config: &GameConfig) -> Self {
        NaiveBuilder { moves: 0 }
    }
}

impl BuilderPolicy for NaiveBuilder {
    fn name(&self) -> String {
        "naive".into()
    }

    fn next_edge(&mut self, state: &GameState) -> Option<Pair> {
        let p = state.graph().first_unbuilt()?;
        self.moves += 1;
        Some(p)
    }

    fn phase_log(&self) -> Vec<PhaseRecord> {
        vec![PhaseRecord {
            name: "fill".into(),
            moves: self.moves,
            witness: serde_json::Value::Null,
        }]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params() {
        let p = PaperStrategyParams::for_vertices(30);
        assert_eq!(p.parts, 5);
        assert_eq!(p.epsilon, ratio(1, 10));
        assert_eq!(PaperStrategyParams::for_vertices(3).parts, 2);
        // ε = 1/10: δ = 10⁻⁵ / 2.2
        assert!((p.delta() - 1e-5 / 2.2).abs() < 1e-18);
        let (a, b) = p.biclique_targets(10);
        assert_eq!(a, 1);
        assert_eq!(b, (10.0f64 * 10f64.ln()).ceil() as usize);
    }

    #[test]
    fn overrides() {
        let p = PaperStrategyParams::for_vertices(30)
            .with_overrides("C=3, eps=1/8,a=2")
            .unwrap();
        assert_eq!((p.parts, p.epsilon, p.a_target), (3, ratio(1, 8), Some(2)));
        assert!(PaperStrategyParams::for_vertices(30).with_overrides("C=1").is_err());
        assert!(PaperStrategyParams::for_vertices(30).with_overrides("eps=1/2").is_err());
        assert!(PaperStrategyParams::for_vertices(30).with_overrides("zeta=1").is_err());
    }
}
