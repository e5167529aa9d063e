use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::families::{assemble_pair_families, biclique_mine, family_forces, Forcing, PairFamilies};
use super::{PaperStrategyParams, PhaseLog, PlanQueue};
use crate::game::{BuilderPolicy, GameError, GameState, PainterPolicy, PhaseRecord};
use crate::graph::{BichromaticGraph, GraphError, IncidenceGraph, Pair, PartitionLayout, ReducedGraph, Side};
use crate::rational::Rational;

/// Builds every cross-part pair of a `K_(C × ⌊N/C⌋)` layout against
/// `painter`. Returns the layout and its ε-reduced graph, or `None` for the
/// reduced graph when the game ended during the phase.
pub fn multipartite_phase(
    state: &mut GameState,
    painter: &mut dyn PainterPolicy,
    params: &PaperStrategyParams,
) -> Result<(PartitionLayout, Option<ReducedGraph>), GameError> {
    let layout = PartitionLayout::consecutive(state.config().vertices, params.parts)
        .map_err(|e| GameError::InvalidConfig(e.to_string()))?;
    for pair in layout.cross_pairs() {
        if state.status().is_over() {
            return Ok((layout, None));
        }
        if state.graph().is_built(pair.lo, pair.hi) {
            continue;
        }
        let c = painter.paint(state, pair)?;
        state.apply(pair, c)?;
    }
    let reduced = ReducedGraph::build(state.graph(), &layout, params.epsilon)
        .map_err(|e| GameError::InvalidConfig(e.to_string()))?;
    Ok((layout, Some(reduced)))
}

/// First part pair (lexicographic) whose cross edges are ε-color-balanced.
pub fn balanced_pair_search(
    g: &BichromaticGraph,
    layout: &PartitionLayout,
    epsilon: Rational,
) -> Result<Option<(usize, usize)>, GraphError> {
    let parts = layout.parts();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if g.is_color_balanced(&parts[i], &parts[j], epsilon)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// The denser of the left and right incidence graphs between two classes
/// (ties go to the left one).
pub fn select_incidence(
    g: &BichromaticGraph,
    class_a: &[usize],
    class_b: &[usize],
) -> Result<IncidenceGraph, GraphError> {
    let left = IncidenceGraph::build(g, class_a, class_b, Side::Left)?;
    let right = IncidenceGraph::build(g, class_a, class_b, Side::Right)?;
    Ok(if right.edge_count() > left.edge_count() {
        right
    } else {
        left
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    P,
    Q,
}

/// How the independent-pair endgame played out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseOutcome {
    pub p_len: usize,
    pub q_len: usize,
    /// Family built after the rest of the graph.
    pub built: Option<Family>,
    /// The built family was proven to force a target clique.
    pub certified: bool,
    /// The other family had to be built as well.
    pub other_touched: bool,
}

impl PairwiseOutcome {
    pub fn min_len(&self) -> usize {
        self.p_len.min(self.q_len)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Start,
    Multipartite,
    PairwiseRest,
    PairwiseFamily,
    Endgame,
    Fill,
}

/// The multipartite / independent-pair Builder.
pub struct PaperBuilder {
    params: PaperStrategyParams,
    stage: Stage,
    queue: PlanQueue,
    log: PhaseLog,
    layout: Option<PartitionLayout>,
    families: Option<PairFamilies>,
    outcome: Option<PairwiseOutcome>,
    other_family: BTreeSet<Pair>,
}

impl PaperBuilder {
    pub fn new(params: PaperStrategyParams) -> Result<Self, String> {
        params.validate()?;
        Ok(PaperBuilder {
            params,
            stage: Stage::Start,
            queue: PlanQueue::default(),
            log: PhaseLog::default(),
            layout: None,
            families: None,
            outcome: None,
            other_family: BTreeSet::new(),
        })
    }

    pub fn params(&self) -> &PaperStrategyParams {
        &self.params
    }

    pub fn families(&self) -> Option<&PairFamilies> {
        self.families.as_ref()
    }

    pub fn pairwise_outcome(&self) -> Option<&PairwiseOutcome> {
        self.outcome.as_ref()
    }

    fn start(&mut self, state: &GameState) {
        let vertices = state.config().vertices;
        match PartitionLayout::consecutive(vertices, self.params.parts.min(vertices)) {
            Ok(layout) => {
                self.queue.replace(layout.cross_pairs());
                self.log.begin(
                    "multipartite",
                    json!({ "parts": layout.part_count(), "part_size": layout.part_size() }),
                );
                self.layout = Some(layout);
                self.stage = Stage::Multipartite;
            }
            Err(_) => self.fill(state, "layout unavailable"),
        }
    }

    fn fill(&mut self, state: &GameState, reason: &str) {
        self.queue.replace(state.graph().unbuilt_pairs());
        self.log.begin("fill", json!({ "reason": reason }));
        self.stage = Stage::Fill;
    }

    fn after_multipartite(&mut self, state: &GameState) {
        let g = state.graph();
        let layout = self.layout.clone().expect("layout set in start");
        let reduced = match ReducedGraph::build(g, &layout, self.params.epsilon) {
            Ok(r) => r,
            Err(_) => return self.fill(state, "cross pairs incomplete"),
        };
        match reduced.first_unlabeled() {
            Some((i, j)) => self.setup_pairwise(state, &layout, &reduced, i, j),
            None => self.setup_endgame(&layout, &reduced),
        }
    }

    fn setup_pairwise(
        &mut self,
        state: &GameState,
        layout: &PartitionLayout,
        reduced: &ReducedGraph,
        i: usize,
        j: usize,
    ) {
        let g = state.graph();
        let parts = layout.parts();
        let h = match select_incidence(g, &parts[i], &parts[j]) {
            Ok(h) if h.edge_count() > 0 => h,
            _ => return self.fill(state, "no incidence edges"),
        };
        let (a_target, b_target) = self.params.biclique_targets(layout.part_size());
        let a = a_target.min(h.left().len());
        let b = b_target.min(h.max_left_degree());
        let mined = biclique_mine(&h, a, b)
            .map(|bc| (bc, false))
            .or_else(|| biclique_mine(&h, 1, h.max_left_degree()).map(|bc| (bc, true)));
        let Some((biclique, fallback)) = mined else {
            return self.fill(state, "no biclique");
        };
        let families = match assemble_pair_families(g, &biclique, h.left()) {
            Ok(f) => f,
            Err(e) => return self.fill(state, &e.to_string()),
        };
        debug_assert!(families.verify(g));
        let reserved: BTreeSet<Pair> = families.p.iter().chain(&families.q).copied().collect();
        self.queue
            .replace(g.unbuilt_pairs().filter(|p| !reserved.contains(p)));
        self.log.begin(
            "pairwise-rest",
            json!({
                "balanced_parts": [i, j],
                "density": reduced.density(i, j),
                "incidence_side": h.side(),
                "incidence_edges": h.edge_count(),
                "biclique": { "a": biclique.left.len(), "b": biclique.right.len(), "fallback": fallback, "left": biclique.left },
                "p": families.p.len(),
                "q": families.q.len(),
            }),
        );
        self.outcome = Some(PairwiseOutcome {
            p_len: families.p.len(),
            q_len: families.q.len(),
            built: None,
            certified: false,
            other_touched: false,
        });
        self.families = Some(families);
        self.stage = Stage::PairwiseRest;
    }

    /// Everything outside `P ∪ Q` is built: pick the family to build. A
    /// family that provably forces a target clique is preferred, the smaller
    /// one first.
    fn choose_family(&mut self, state: &GameState) {
        let fams = self.families.clone().expect("families set");
        let (small, large) = if fams.p.len() <= fams.q.len() {
            ((Family::P, &fams.p), (Family::Q, &fams.q))
        } else {
            ((Family::Q, &fams.q), (Family::P, &fams.p))
        };
        let budget = self.params.forcing_budget;
        let cfg = state.config();
        let small_forcing = family_forces(state.graph(), cfg, small.1, budget);
        let (chosen, other, certified) = if small_forcing == Forcing::Forces {
            (small, large, true)
        } else if family_forces(state.graph(), cfg, large.1, budget) == Forcing::Forces {
            (large, small, true)
        } else {
            (small, large, false)
        };
        self.queue.replace(chosen.1.iter().copied());
        self.other_family = other.1.iter().copied().collect();
        let outcome = self.outcome.as_mut().expect("outcome set");
        outcome.built = Some(chosen.0);
        outcome.certified = certified;
        self.log.begin(
            "pairwise-family",
            json!({ "family": chosen.0, "size": chosen.1.len(), "certified": certified, "small_forcing": small_forcing }),
        );
        self.stage = Stage::PairwiseFamily;
    }

    fn setup_endgame(&mut self, layout: &PartitionLayout, reduced: &ReducedGraph) {
        let (color, parts) = reduced.largest_mono_clique();
        let guaranteed = (0.5 * (layout.part_count() as f64).log2()).floor() as usize;
        self.queue.replace(layout.inner_pairs(&parts));
        self.log.begin(
            "multipartite-endgame",
            json!({ "color": color, "parts": parts, "t": parts.len(), "guaranteed_t": guaranteed }),
        );
        self.stage = Stage::Endgame;
    }
}

impl BuilderPolicy for PaperBuilder {
    fn name(&self) -> String {
        "paper".into()
    }

    fn next_edge(&mut self, state: &GameState) -> Option<Pair> {
        loop {
            if let Some(p) = self.queue.next_unbuilt(state.graph()) {
                self.log.count_move();
                if self.stage == Stage::Fill && self.other_family.contains(&p) {
                    if let Some(o) = self.outcome.as_mut() {
                        o.other_touched = true;
                    }
                }
                return Some(p);
            }
            match self.stage {
                Stage::Start => self.start(state),
                Stage::Multipartite => self.after_multipartite(state),
                Stage::PairwiseRest => self.choose_family(state),
                Stage::PairwiseFamily => self.fill(state, "family did not force a win"),
                Stage::Endgame => self.fill(state, "no target clique inside the parts"),
                Stage::Fill => {
                    if state.graph().unbuilt_count() == 0 {
                        return None;
                    }
                    self.queue.replace(state.graph().unbuilt_pairs());
                }
            }
        }
    }

    fn phase_log(&self) -> Vec<PhaseRecord> {
        let mut log = self.log.records();
        if let Some(o) = &self.outcome {
            if let Some(first) = log.iter_mut().find(|r| r.name == "pairwise-rest") {
                first.witness["outcome"] = serde_json::to_value(o).expect("serializable");
            }
        }
        log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, GameConfig, GameStatus};
    use crate::graph::Color;
    use crate::painters::{AlternatingPainter, ConstantPainter, RandomPainter};
    use crate::rational::ratio;

    fn params(parts: usize) -> PaperStrategyParams {
        PaperStrategyParams {
            parts,
            ..PaperStrategyParams::for_vertices(4)
        }
    }

    #[test]
    fn multipartite_counts() {
        let cfg = GameConfig::new(5, 5, 4).unwrap();
        let mut s = GameState::new(cfg, None).unwrap();
        let (layout, reduced) =
            multipartite_phase(&mut s, &mut RandomPainter::new(3), &params(2)).unwrap();
        assert_eq!(s.moves_made(), 4);
        assert_eq!(layout.part_count(), 2);
        assert_eq!(reduced.unwrap().part_count(), 2);

        let cfg = GameConfig::new(5, 5, 6).unwrap();
        let mut s = GameState::new(cfg, None).unwrap();
        multipartite_phase(&mut s, &mut RandomPainter::new(3), &params(3)).unwrap();
        assert_eq!(s.moves_made(), 12);
    }

    #[test]
    fn all_red_gives_complete_red_reduced_graph() {
        let cfg = GameConfig::new(9, 9, 9).unwrap();
        let mut s = GameState::new(cfg, None).unwrap();
        let (layout, reduced) =
            multipartite_phase(&mut s, &mut ConstantPainter::new(Color::Red), &params(3)).unwrap();
        let reduced = reduced.unwrap();
        assert!(reduced.is_complete());
        assert!((0..3).all(|i| (i + 1..3).all(|j| reduced.label(i, j) == Some(Color::Red))));
        assert_eq!(balanced_pair_search(s.graph(), &layout, ratio(1, 10)).unwrap(), None);
    }

    #[test]
    fn alternating_painter_gives_balanced_pair() {
        let cfg = GameConfig::new(9, 9, 8).unwrap();
        let mut s = GameState::new(cfg, None).unwrap();
        let (layout, reduced) =
            multipartite_phase(&mut s, &mut AlternatingPainter, &params(2)).unwrap();
        let found = balanced_pair_search(s.graph(), &layout, ratio(1, 10)).unwrap();
        assert_eq!(found, Some((0, 1)));
        assert_eq!(s.graph().red_density(&layout.parts()[0], &layout.parts()[1]).unwrap(), ratio(1, 2));
        assert_eq!(reduced.unwrap().first_unlabeled(), found);
    }

    #[test]
    fn wins_small_games_against_fixed_painters() {
        for n in 6..=12 {
            let cfg = GameConfig::new(3, 3, n).unwrap();
            for mut painter in [
                Box::new(ConstantPainter::new(Color::Red)) as Box<dyn PainterPolicy>,
                Box::new(ConstantPainter::new(Color::Blue)),
                Box::new(AlternatingPainter),
            ] {
                let mut b = PaperBuilder::new(PaperStrategyParams::for_vertices(n)).unwrap();
                let (t, r) = play(cfg, &mut b, painter.as_mut(), None).unwrap();
                assert!(matches!(t.status, GameStatus::BuilderWon { .. }));
                assert_eq!(r.moves_used + r.savings, cfg.total_pairs());
                assert_eq!(r.phase_log[0].name, "multipartite");
            }
        }
    }

    #[test]
    fn pairwise_families_are_independent_when_set_up() {
        // two parts: the multipartite phase is bipartite and cannot end the game
        let cfg = GameConfig::new(3, 3, 12).unwrap();
        let mut b = PaperBuilder::new(params(2)).unwrap();
        let mut state = GameState::new(cfg, None).unwrap();
        let mut painter = AlternatingPainter;
        let mut verified = false;
        while !state.status().is_over() {
            let p = b.next_edge(&state).unwrap();
            if !verified && b.families().is_some() {
                assert!(b.families().unwrap().verify(state.graph()));
                verified = true;
            }
            let c = painter.paint(&state, p).unwrap();
            state.apply(p, c).unwrap();
        }
        assert!(verified);
        let outcome = b.pairwise_outcome().expect("alternating colors give a balanced pair");
        assert!(outcome.p_len > 0 && outcome.q_len > 0);
    }
}
