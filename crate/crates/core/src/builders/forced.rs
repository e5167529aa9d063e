use std::collections::BTreeSet;

use serde_json::json;

use super::{PhaseLog, PlanQueue};
use crate::game::{BuilderPolicy, GameConfig, GameState, PhaseRecord};
use crate::graph::{BichromaticGraph, Color, Pair};

/// An unbuilt pair whose red coloring would complete a red `K_m`.
pub fn is_forced(g: &BichromaticGraph, pair: Pair, m: usize) -> bool {
    !g.is_built(pair.lo, pair.hi) && g.clique_through_if(pair.lo, pair.hi, Color::Red, m).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Sweep,
    Certify,
    Fill,
}

/// Sweeps `v_1, v_2, …` and builds every pair back to earlier vertices,
/// skipping forced pairs. Once the sweep is done it looks for a blue `K_n`
/// assuming every skipped pair ends up blue and builds only that clique's
/// missing pairs.
pub struct ForcedEdgeBuilder {
    m: usize,
    n: usize,
    stage: Stage,
    /// Sweep cursor: next pair is `(j, i)` with `j < i`.
    cursor: (usize, usize),
    forced: BTreeSet<Pair>,
    queue: PlanQueue,
    log: PhaseLog,
}

impl ForcedEdgeBuilder {
    pub fn new(config: &GameConfig) -> Self {
        let mut log = PhaseLog::default();
        log.begin("sweep", serde_json::Value::Null);
        ForcedEdgeBuilder {
            m: config.m,
            n: config.n,
            stage: Stage::Sweep,
            cursor: (1, 0),
            forced: BTreeSet::new(),
            queue: PlanQueue::default(),
            log,
        }
    }

    /// Pairs skipped as forced so far.
    pub fn forced(&self) -> &BTreeSet<Pair> {
        &self.forced
    }

    fn sweep_next(&mut self, g: &BichromaticGraph) -> Option<Pair> {
        let vertices = g.vertex_count();
        while self.cursor.0 < vertices {
            let (i, j) = self.cursor;
            self.cursor = if j + 1 < i { (i, j + 1) } else { (i + 1, 0) };
            let pair = Pair::new(j, i);
            if g.is_built(j, i) {
                continue;
            }
            if is_forced(g, pair, self.m) {
                self.forced.insert(pair);
                continue;
            }
            return Some(pair);
        }
        None
    }

    fn certify(&mut self, g: &BichromaticGraph) {
        let mut virtual_graph = g.clone();
        let remaining: Vec<Pair> = g.unbuilt_pairs().collect();
        for p in &remaining {
            virtual_graph
                .build_edge(p.lo, p.hi, Color::Blue)
                .expect("unbuilt pair");
        }
        match virtual_graph.find_mono_clique(Color::Blue, self.n) {
            Some(clique) => {
                let missing: Vec<Pair> = remaining
                    .iter()
                    .copied()
                    .filter(|p| clique.contains(&p.lo) && clique.contains(&p.hi))
                    .collect();
                self.log.begin(
                    "certify",
                    json!({ "clique": clique, "missing": missing.len(), "forced": self.forced.len() }),
                );
                self.queue.replace(missing);
                self.stage = Stage::Certify;
            }
            None => self.start_fill(g),
        }
    }

    fn start_fill(&mut self, g: &BichromaticGraph) {
        self.log.begin("fill", json!({ "forced": self.forced.len() }));
        self.queue.replace(g.unbuilt_pairs());
        self.stage = Stage::Fill;
    }
}

impl BuilderPolicy for ForcedEdgeBuilder {
    fn name(&self) -> String {
        "forced-edge".into()
    }

    fn next_edge(&mut self, state: &GameState) -> Option<Pair> {
        let g = state.graph();
        loop {
            match self.stage {
                Stage::Sweep => {
                    if let Some(p) = self.sweep_next(g) {
                        self.log.count_move();
                        return Some(p);
                    }
                    self.certify(g);
                }
                Stage::Certify | Stage::Fill => {
                    if let Some(p) = self.queue.next_unbuilt(g) {
                        self.log.count_move();
                        return Some(p);
                    }
                    if self.stage == Stage::Fill && g.unbuilt_count() == 0 {
                        return None;
                    }
                    self.start_fill(g);
                }
            }
        }
    }

    fn phase_log(&self) -> Vec<PhaseRecord> {
        self.log.records()
    }
}
