//! The `(m, n; N)` game loop: Builder proposes an unbuilt pair, Painter
//! colors it, and the game ends as soon as a red `K_m` or blue `K_n` exists.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{pair_count, BichromaticGraph, Color, GraphError, Pair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    /// Red clique target.
    pub m: usize,
    /// Blue clique target.
    pub n: usize,
    /// Number of vertices.
    #[serde(rename = "N")]
    pub vertices: usize,
}

impl GameConfig {
    pub fn new(m: usize, n: usize, vertices: usize) -> Result<Self, GameError> {
        if m < 2 || n < 2 {
            return Err(GameError::InvalidConfig(format!(
                "clique targets must be at least 2 (got m={m}, n={n})"
            )));
        }
        if vertices < 2 {
            return Err(GameError::InvalidConfig(format!(
                "need at least 2 vertices (got N={vertices})"
            )));
        }
        Ok(GameConfig { m, n, vertices })
    }

    pub fn target(&self, c: Color) -> usize {
        match c {
            Color::Red => self.m,
            Color::Blue => self.n,
        }
    }

    pub fn total_pairs(&self) -> usize {
        pair_count(self.vertices)
    }
}

impl fmt::Display for GameConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.m, self.n, self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameStatus {
    InProgress,
    BuilderWon { color: Color, clique: Vec<usize> },
    Stalemate,
}

impl GameStatus {
    pub fn is_over(&self) -> bool {
        !matches!(self, GameStatus::InProgress)
    }

    /// Tag used in transcripts and JSON reports.
    pub fn tag(&self) -> &'static str {
        match self {
            GameStatus::InProgress => "IN_PROGRESS",
            GameStatus::BuilderWon { color: Color::Red, .. } => "RED_WIN",
            GameStatus::BuilderWon { color: Color::Blue, .. } => "BLUE_WIN",
            GameStatus::Stalemate => "STALEMATE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub pair: Pair,
    pub color: Color,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
    #[error("illegal builder move {pair}: {source}")]
    IllegalBuilderMove { pair: Pair, source: GraphError },
    #[error("builder policy produced no move with {0} unbuilt pairs left")]
    PolicyExhausted(usize),
    #[error("game is already over")]
    GameOver,
    #[error("painter failed: {0}")]
    Painter(String),
    #[error("seed graph has {got} vertices, config expects {expected}")]
    SeedMismatch { expected: usize, got: usize },
    #[error("transcript: {0}")]
    Transcript(String),
}

/// A position of the game together with its move history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    config: GameConfig,
    graph: BichromaticGraph,
    seed_edges: usize,
    history: Vec<Move>,
    status: GameStatus,
}

impl GameState {
    pub fn new(config: GameConfig, seed: Option<BichromaticGraph>) -> Result<Self, GameError> {
        let graph = match seed {
            Some(g) if g.vertex_count() != config.vertices => {
                return Err(GameError::SeedMismatch {
                    expected: config.vertices,
                    got: g.vertex_count(),
                })
            }
            Some(g) => g,
            None => BichromaticGraph::new(config.vertices).expect("N >= 2"),
        };
        let mut state = GameState {
            config,
            seed_edges: graph.built_count(),
            graph,
            history: Vec::new(),
            status: GameStatus::InProgress,
        };
        state.status = state.full_status();
        Ok(state)
    }

    /// Status computed from scratch on the current graph.
    fn full_status(&self) -> GameStatus {
        for c in Color::BOTH {
            if let Some(clique) = self.graph.find_mono_clique(c, self.config.target(c)) {
                return GameStatus::BuilderWon { color: c, clique };
            }
        }
        if self.graph.is_complete() {
            GameStatus::Stalemate
        } else {
            GameStatus::InProgress
        }
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn graph(&self) -> &BichromaticGraph {
        &self.graph
    }

    pub fn status(&self) -> &GameStatus {
        &self.status
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn moves_made(&self) -> usize {
        self.history.len()
    }

    pub fn seed_edges(&self) -> usize {
        self.seed_edges
    }

    /// Pairs still unbuilt: `C(N,2) - e(G)`.
    pub fn savings(&self) -> usize {
        self.graph.unbuilt_count()
    }

    /// Validates a Builder proposal without applying it.
    pub fn check_proposal(&self, pair: Pair) -> Result<(), GameError> {
        if self.status.is_over() {
            return Err(GameError::GameOver);
        }
        self.graph
            .check_buildable(pair.lo, pair.hi)
            .map_err(|source| GameError::IllegalBuilderMove { pair, source })
    }

    /// Builds `pair` in `color` and updates the status. Win detection only
    /// looks at cliques through the new edge.
    pub fn apply(&mut self, pair: Pair, color: Color) -> Result<&GameStatus, GameError> {
        self.check_proposal(pair)?;
        self.graph
            .build_edge(pair.lo, pair.hi, color)
            .map_err(|source| GameError::IllegalBuilderMove { pair, source })?;
        self.history.push(Move { pair, color });
        let k = self.config.target(color);
        if let Some(clique) = self.graph.incremental_clique_check(pair.lo, pair.hi, color, k) {
            self.status = GameStatus::BuilderWon { color, clique };
        } else if self.graph.is_complete() {
            self.status = GameStatus::Stalemate;
        }
        Ok(&self.status)
    }
}

/// One step of a Builder strategy's bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub name: String,
    pub moves: usize,
    pub witness: serde_json::Value,
}

impl PhaseRecord {
    pub fn new(name: &str, witness: serde_json::Value) -> Self {
        PhaseRecord {
            name: name.to_string(),
            moves: 0,
            witness,
        }
    }
}

pub trait BuilderPolicy: Send {
    fn name(&self) -> String;

    /// The next pair to build, or `None` if the policy has nothing to offer.
    fn next_edge(&mut self, state: &GameState) -> Option<Pair>;

    fn phase_log(&self) -> Vec<PhaseRecord> {
        Vec::new()
    }
}

pub trait PainterPolicy: Send {
    fn name(&self) -> String;

    fn paint(&mut self, state: &GameState, pair: Pair) -> Result<Color, GameError>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub moves_used: usize,
    pub savings: usize,
    pub phase_log: Vec<PhaseRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub config: GameConfig,
    pub seed: Option<BichromaticGraph>,
    pub moves: Vec<Move>,
    pub status: GameStatus,
}

impl Transcript {
    pub fn of(state: &GameState, seed: Option<BichromaticGraph>) -> Self {
        Transcript {
            config: state.config,
            seed,
            moves: state.history.clone(),
            status: state.status.clone(),
        }
    }

    /// Unbuilt pairs left at the end of the game.
    pub fn savings(&self) -> usize {
        let seeded = self.seed.as_ref().map_or(0, BichromaticGraph::built_count);
        self.config.total_pairs() - seeded - self.moves.len()
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!("{} {} {}\n", c.m, c.n, c.vertices);
        if let Some(seed) = &self.seed {
            out.push_str(&format!("SEED {}\n", seed.built_count()));
            for (u, v, col) in seed.edges() {
                out.push_str(&format!("{u} {v} {}\n", col.letter()));
            }
        }
        for m in &self.moves {
            out.push_str(&format!("{} {} {}\n", m.pair.lo, m.pair.hi, m.color.letter()));
        }
        out.push_str(&format!(
            "RESULT {} moves={} savings={}\n",
            self.status.tag(),
            self.moves.len(),
            self.savings()
        ));
        out
    }

    /// Parses the transcript format and replays it, so the returned value is
    /// always consistent with its moves.
    pub fn from_text(text: &str) -> Result<Self, GameError> {
        let bad = |line: usize, msg: &str| GameError::Transcript(format!("line {line}: {msg}"));
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        let (ln, header) = lines.next().ok_or_else(|| bad(1, "empty transcript"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(ln, "header must be `m n N`"))?;
        let [m, n, vertices] = nums[..] else {
            return Err(bad(ln, "header must be `m n N`"));
        };
        let config = GameConfig::new(m, n, vertices)?;

        let mut seed = None;
        if let Some(&(ln, l)) = lines.peek() {
            if let Some(count) = l.strip_prefix("SEED ") {
                lines.next();
                let count: usize = count.trim().parse().map_err(|_| bad(ln, "bad SEED count"))?;
                let mut g = BichromaticGraph::new(vertices).map_err(|e| bad(ln, &e.to_string()))?;
                for _ in 0..count {
                    let (ln, l) = lines.next().ok_or_else(|| bad(ln, "truncated SEED block"))?;
                    let (u, v, c) = crate::graph::parse_edge_line(l).ok_or_else(|| bad(ln, "bad seed edge"))?;
                    g.build_edge(u, v, c).map_err(|e| bad(ln, &e.to_string()))?;
                }
                seed = Some(g);
            }
        }

        let mut moves = Vec::new();
        let mut result = None;
        for (ln, l) in lines {
            if let Some(rest) = l.strip_prefix("RESULT ") {
                result = Some((ln, rest.to_string()));
                continue;
            }
            if result.is_some() {
                return Err(bad(ln, "content after RESULT line"));
            }
            let (u, v, color) = crate::graph::parse_edge_line(l).ok_or_else(|| bad(ln, "bad move line"))?;
            moves.push(Move { pair: Pair::new(u, v), color });
        }
        let (ln, result) = result.ok_or_else(|| bad(0, "missing RESULT line"))?;

        let state = replay_moves(config, seed.clone(), &moves)?;
        let t = Transcript::of(&state, seed);
        let expected = format!(
            "{} moves={} savings={}",
            t.status.tag(),
            t.moves.len(),
            t.savings()
        );
        if result.split_whitespace().collect::<Vec<_>>() != expected.split_whitespace().collect::<Vec<_>>() {
            return Err(bad(ln, &format!("RESULT disagrees with replay ({expected})")));
        }
        Ok(t)
    }
}

/// Applies `moves` to a fresh game started from `seed`.
pub fn replay_moves(
    config: GameConfig,
    seed: Option<BichromaticGraph>,
    moves: &[Move],
) -> Result<GameState, GameError> {
    let mut state = GameState::new(config, seed)?;
    for m in moves {
        state.apply(m.pair, m.color)?;
    }
    Ok(state)
}

/// Replays a transcript from its seed and checks the terminal status.
pub fn replay(t: &Transcript) -> Result<GameState, GameError> {
    let state = replay_moves(t.config, t.seed.clone(), &t.moves)?;
    if state.status.tag() != t.status.tag() {
        return Err(GameError::Transcript(format!(
            "replay ends in {}, transcript says {}",
            state.status.tag(),
            t.status.tag()
        )));
    }
    Ok(state)
}

/// Runs a full game.
pub fn play(
    config: GameConfig,
    builder: &mut dyn BuilderPolicy,
    painter: &mut dyn PainterPolicy,
    seed: Option<BichromaticGraph>,
) -> Result<(Transcript, StrategyReport), GameError> {
    let mut state = GameState::new(config, seed.clone())?;
    while !state.status.is_over() {
        let pair = builder
            .next_edge(&state)
            .ok_or(GameError::PolicyExhausted(state.graph.unbuilt_count()))?;
        state.check_proposal(pair)?;
        let color = painter.paint(&state, pair)?;
        state.apply(pair, color)?;
    }
    let report = StrategyReport {
        moves_used: state.moves_made(),
        savings: state.savings(),
        phase_log: builder.phase_log(),
    };
    Ok((Transcript::of(&state, seed), report))
}

/// `report.savings >= min(s, t)`.
pub fn savings_lower_bound_check(report: &StrategyReport, s: usize, t: usize) -> bool {
    report.savings >= s.min(t)
}
