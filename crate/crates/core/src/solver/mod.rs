//! Exact values of the restricted online Ramsey game on tiny boards.
//!
//! `value(g)` is 0 when `g` already holds a red `K_m` or blue `K_n`,
//! otherwise `1 + min_e max_c value(g + e:c)`. Positions are memoized on
//! their canonical code, and the search prunes with two admissible bounds:
//! the fewest missing pairs of any live target clique (lower) and the value
//! already achieved by an earlier move (upper). Only exact values are stored.
//!
//! [`brute_value`] is an independent oracle: plain recursion on raw positions
//! for `N ≤ 5` and a retrograde table over all `3^15` pair vectors for `N = 6`.

mod board;
mod canon;
mod retro;

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameConfig, Move};
use crate::graph::{BichromaticGraph, Color, Pair};

pub use board::{Board, Position, MAX_ENCODED_VERTICES};
pub use canon::{canonical_code, CanonicalCode};
pub use retro::RetrogradeTable;

pub(crate) use canon::canonical_key;

/// Default limit on `N` for [`Solver::new`].
pub const DEFAULT_MAX_VERTICES: usize = 6;

/// Largest `N` for the plain recursive oracle; `N = 6` uses the retrograde table.
pub const BRUTE_TREE_MAX_VERTICES: usize = 5;

const INF: u8 = u8::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("position has {vertices} vertices, solver supports at most {max}")]
    PositionTooLarge { vertices: usize, max: usize },
    #[error("graph has {got} vertices but the game is played on {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("node budget exhausted after {nodes} expansions (value in [{lower}, {}])",
        upper.map_or("∞".to_string(), |u| u.to_string()))]
    BudgetExceeded { nodes: u64, lower: u32, upper: Option<u32> },
    #[error("Builder cannot force a win from this position")]
    Unwinnable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverResult {
    /// Moves Builder needs under optimal play; `None` if Painter can avoid
    /// both target cliques forever.
    pub value: Option<u32>,
    pub principal_variation: Vec<Move>,
    pub nodes_expanded: u64,
    pub table_hits: u64,
}

#[derive(Debug)]
struct Exhausted;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Child {
    Settled(u8),
    Open(u64),
}

/// Memoized minimax search for one `(m, n; N)` configuration. The table is
/// kept across calls, so repeated queries on one game are cheap.
pub struct Solver {
    board: Board,
    table: HashMap<u64, u8>,
    budget: Option<u64>,
    nodes: u64,
    hits: u64,
    root_best: u8,
}

impl Solver {
    pub fn new(config: GameConfig) -> Result<Self, SolverError> {
        Self::with_limits(config, DEFAULT_MAX_VERTICES, None)
    }

    /// `max_vertices` may be raised up to [`MAX_ENCODED_VERTICES`]; `budget`
    /// caps node expansions per query.
    pub fn with_limits(
        config: GameConfig,
        max_vertices: usize,
        budget: Option<u64>,
    ) -> Result<Self, SolverError> {
        let max = max_vertices.min(MAX_ENCODED_VERTICES);
        if config.vertices > max {
            return Err(SolverError::PositionTooLarge { vertices: config.vertices, max });
        }
        Ok(Solver {
            board: Board::new(config)?,
            table: HashMap::new(),
            budget,
            nodes: 0,
            hits: 0,
            root_best: INF,
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.board.config
    }

    /// Number of stored exact values.
    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn value_of(&mut self, g: &BichromaticGraph) -> Result<Option<u32>, SolverError> {
        let pos = self.board.position_of(g)?;
        self.value_at(pos)
    }

    fn value_at(&mut self, pos: Position) -> Result<Option<u32>, SolverError> {
        let nodes_before = self.nodes;
        self.root_best = INF;
        match self.eval(pos, None, 0) {
            Ok(v) => Ok(decode(v)),
            Err(Exhausted) => Err(SolverError::BudgetExceeded {
                nodes: self.nodes - nodes_before,
                lower: self.board.lower_bound(pos).unwrap_or(0),
                upper: decode(self.root_best),
            }),
        }
    }

    /// Exact value plus a principal variation (optimal Builder pairs, Painter
    /// replies maximizing the value with ties to red).
    pub fn solve(&mut self, g: &BichromaticGraph) -> Result<SolverResult, SolverError> {
        let (nodes0, hits0) = (self.nodes, self.hits);
        let mut pos = self.board.position_of(g)?;
        let value = self.value_at(pos)?;
        let mut pv = Vec::new();
        if let Some(mut remaining) = value {
            while remaining > 0 {
                let (pair, color, next) = self.best_move(pos, remaining)?;
                pv.push(Move { pair, color });
                pos = pos.with(pair_index(pair), color);
                remaining = next;
            }
        }
        Ok(SolverResult {
            value,
            principal_variation: pv,
            nodes_expanded: self.nodes - nodes0,
            table_hits: self.hits - hits0,
        })
    }

    /// An optimal Builder pair from `g` with Painter's best reply, or `None`
    /// when the game is already won or cannot be won.
    pub fn optimal_move(&mut self, g: &BichromaticGraph) -> Result<Option<Move>, SolverError> {
        let pos = self.board.position_of(g)?;
        match self.value_at(pos)? {
            Some(v) if v > 0 => {
                let (pair, color, _) = self.best_move(pos, v)?;
                Ok(Some(Move { pair, color }))
            }
            _ => Ok(None),
        }
    }

    /// Builder's first optimal pair in move order, Painter's best reply, and
    /// the value after it.
    fn best_move(&mut self, pos: Position, value: u32) -> Result<(Pair, Color, u32), SolverError> {
        for e in self.ordered_moves(pos) {
            let r = self.value_at(pos.with(e, Color::Red))?;
            let b = self.value_at(pos.with(e, Color::Blue))?;
            let (Some(r), Some(b)) = (r, b) else { continue };
            if 1 + r.max(b) == value {
                let (color, next) = if r >= b { (Color::Red, r) } else { (Color::Blue, b) };
                let (u, v) = self.board.pairs[e];
                return Ok((Pair::new(u, v), color, next));
            }
        }
        unreachable!("a finite value is realized by some move")
    }

    /// Checks `value(g) = 1 + min_e max_c value(g + e:c)` (or the terminal
    /// cases) against freshly queried child values.
    pub fn minimax_consistent(&mut self, g: &BichromaticGraph) -> Result<bool, SolverError> {
        let pos = self.board.position_of(g)?;
        let v = self.value_at(pos)?;
        if self.board.is_won(pos) {
            return Ok(v == Some(0));
        }
        let unbuilt: Vec<usize> = (0..self.board.pair_len())
            .filter(|&e| pos.built() & 1 << e == 0)
            .collect();
        let mut best: Option<u32> = None;
        for e in unbuilt {
            let r = self.value_at(pos.with(e, Color::Red))?;
            let b = self.value_at(pos.with(e, Color::Blue))?;
            if let (Some(r), Some(b)) = (r, b) {
                let here = 1 + r.max(b);
                best = Some(best.map_or(here, |x| x.min(here)));
            }
        }
        Ok(v == best)
    }

    fn classify(&self, pos: Position) -> Child {
        if self.board.is_won(pos) {
            Child::Settled(0)
        } else if self.board.lower_bound(pos).is_none() {
            Child::Settled(INF)
        } else {
            Child::Open(canonical_key(self.board.config.vertices, pos))
        }
    }

    fn eval(&mut self, pos: Position, key: Option<u64>, depth: u32) -> Result<u8, Exhausted> {
        let key = match key {
            Some(k) => k,
            None => match self.classify(pos) {
                Child::Settled(v) => return Ok(v),
                Child::Open(k) => k,
            },
        };
        if let Some(&v) = self.table.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        if self.budget.is_some_and(|b| self.nodes >= b) {
            return Err(Exhausted);
        }
        self.nodes += 1;
        let lower = self.board.lower_bound(pos).expect("open position") as u8;
        let mut best = INF;
        let mut seen = HashSet::new();
        for e in self.ordered_moves(pos) {
            let children = [pos.with(e, Color::Red), pos.with(e, Color::Blue)];
            let kinds = [self.classify(children[0]), self.classify(children[1])];
            if !seen.insert(kinds) {
                continue;
            }
            // evaluate the child with the larger bound first so the second
            // one is more often cut off
            let order = if self.child_bound(children[1]) > self.child_bound(children[0]) {
                [1, 0]
            } else {
                [0, 1]
            };
            let mut worst = 0u8;
            let mut cut = false;
            for i in order {
                let v = match kinds[i] {
                    Child::Settled(v) => v,
                    Child::Open(k) => self.eval(children[i], Some(k), depth + 1)?,
                };
                worst = worst.max(v);
                if succ(worst) >= best {
                    cut = true;
                    break;
                }
            }
            if !cut {
                best = succ(worst);
                if depth == 0 {
                    self.root_best = best;
                }
                if best == lower {
                    break;
                }
            }
        }
        self.table.insert(key, best);
        Ok(best)
    }

    fn child_bound(&self, pos: Position) -> u32 {
        if self.board.is_won(pos) {
            0
        } else {
            self.board.lower_bound(pos).unwrap_or(u32::MAX)
        }
    }

    /// Unbuilt pairs, most promising first: pairs lying in many live target
    /// cliques that are close to completion.
    fn ordered_moves(&self, pos: Position) -> Vec<usize> {
        let mut scored: Vec<(u64, usize)> = (0..self.board.pair_len())
            .filter(|&e| pos.built() & 1 << e == 0)
            .map(|e| (self.board.move_score(pos, e), e))
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.into_iter().map(|(_, e)| e).collect()
    }
}

#[inline]
fn succ(v: u8) -> u8 {
    if v == INF {
        INF
    } else {
        v + 1
    }
}

fn decode(v: u8) -> Option<u32> {
    (v != INF).then_some(v as u32)
}

fn pair_index(p: Pair) -> usize {
    crate::graph::pair_rank(p.lo, p.hi)
}

/// Solves `g` with a fresh [`Solver`] under the default limits.
pub fn solve_from(g: &BichromaticGraph, config: GameConfig) -> Result<SolverResult, SolverError> {
    Solver::new(config)?.solve(g)
}

/// `C(N,2) − e(g) − value(g)`: moves Builder can save from `g`.
pub fn savings_of(g: &BichromaticGraph, config: GameConfig) -> Result<usize, SolverError> {
    let value = Solver::new(config)?.value_of(g)?.ok_or(SolverError::Unwinnable)?;
    Ok(g.unbuilt_count() - value as usize)
}

/// Oracle value by unpruned recursion (`N ≤ 5`) or retrograde analysis
/// (`N = 6`). No canonicalization is involved.
pub fn brute_value(g: &BichromaticGraph, config: GameConfig) -> Result<Option<u32>, SolverError> {
    let n = config.vertices;
    if n > retro::RETROGRADE_MAX_VERTICES {
        return Err(SolverError::PositionTooLarge {
            vertices: n,
            max: retro::RETROGRADE_MAX_VERTICES,
        });
    }
    if g.vertex_count() != n {
        return Err(SolverError::SizeMismatch { expected: n, got: g.vertex_count() });
    }
    if n > BRUTE_TREE_MAX_VERTICES {
        return RetrogradeTable::build(config)?.value_of(g);
    }
    let mut memo = HashMap::new();
    Ok(decode(brute_rec(&mut g.clone(), &config, &mut memo)))
}

fn brute_rec(
    g: &mut BichromaticGraph,
    config: &GameConfig,
    memo: &mut HashMap<Vec<(usize, usize, Color)>, u8>,
) -> u8 {
    if g.find_mono_clique(Color::Red, config.m).is_some()
        || g.find_mono_clique(Color::Blue, config.n).is_some()
    {
        return 0;
    }
    let key: Vec<_> = g.edges().collect();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let unbuilt: Vec<Pair> = g.unbuilt_pairs().collect();
    let mut best = INF;
    for p in unbuilt {
        let mut worst = 0;
        for c in Color::BOTH {
            g.build_edge(p.lo, p.hi, c).expect("unbuilt");
            worst = worst.max(brute_rec(g, config, memo));
            g.unbuild_edge(p.lo, p.hi);
        }
        best = best.min(succ(worst));
    }
    memo.insert(key, best);
    best
}
