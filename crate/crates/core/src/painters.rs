//! Painter policies.
//!
//! Tie-break chains are fixed so every painter is a deterministic function
//! of its seed and the game history.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{GameError, GameState, Move, PainterPolicy, Transcript};
use crate::graph::{Color, Pair};
use crate::solver::{Solver, SolverError};

/// Fair coin flips from a seeded ChaCha8 stream.
pub struct RandomPainter {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomPainter {
    pub fn new(seed: u64) -> Self {
        RandomPainter { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl PainterPolicy for RandomPainter {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn paint(&mut self, _: &GameState, _: Pair) -> Result<Color, GameError> {
        Ok(if self.rng.random_bool(0.5) { Color::Red } else { Color::Blue })
    }
}

/// Always the same color.
pub struct ConstantPainter(Color);

impl ConstantPainter {
    pub fn new(color: Color) -> Self {
        ConstantPainter(color)
    }
}

impl PainterPolicy for ConstantPainter {
    fn name(&self) -> String {
        self.0.to_string()
    }

    fn paint(&mut self, _: &GameState, _: Pair) -> Result<Color, GameError> {
        Ok(self.0)
    }
}

/// Red on even move numbers, blue on odd ones.
pub struct AlternatingPainter;

impl PainterPolicy for AlternatingPainter {
    fn name(&self) -> String {
        "alternating".into()
    }

    fn paint(&mut self, state: &GameState, _: Pair) -> Result<Color, GameError> {
        Ok(if state.moves_made().is_multiple_of(2) { Color::Red } else { Color::Blue })
    }
}

/// Minimizes the largest monochromatic clique through the pair; ties go to
/// the color with fewer built edges, then to red.
pub struct GreedyPainter;

impl PainterPolicy for GreedyPainter {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn paint(&mut self, state: &GameState, pair: Pair) -> Result<Color, GameError> {
        let g = state.graph();
        let red = g.max_clique_through_if(pair.lo, pair.hi, Color::Red);
        let blue = g.max_clique_through_if(pair.lo, pair.hi, Color::Blue);
        Ok(match red.cmp(&blue) {
            std::cmp::Ordering::Less => Color::Red,
            std::cmp::Ordering::Greater => Color::Blue,
            std::cmp::Ordering::Equal => {
                if g.color_count(Color::Blue) < g.color_count(Color::Red) {
                    Color::Blue
                } else {
                    Color::Red
                }
            }
        })
    }
}

/// Keeps the global red and blue counts within one of each other; ties go
/// to red.
pub struct BalancedPainter;

impl PainterPolicy for BalancedPainter {
    fn name(&self) -> String {
        "balanced".into()
    }

    fn paint(&mut self, state: &GameState, _: Pair) -> Result<Color, GameError> {
        let g = state.graph();
        Ok(if g.color_count(Color::Red) > g.color_count(Color::Blue) {
            Color::Blue
        } else {
            Color::Red
        })
    }
}

/// Picks the color with the larger exact remaining value (unwinnable beats
/// everything, ties go to red).
pub struct MinimaxPainter {
    solver: Solver,
}

impl MinimaxPainter {
    pub fn new(config: crate::game::GameConfig) -> Result<Self, SolverError> {
        Ok(MinimaxPainter { solver: Solver::new(config)? })
    }
}

impl PainterPolicy for MinimaxPainter {
    fn name(&self) -> String {
        "minimax".into()
    }

    fn paint(&mut self, state: &GameState, pair: Pair) -> Result<Color, GameError> {
        let mut value = |c: Color| -> Result<Option<u32>, GameError> {
            let next = state
                .graph()
                .with_edge(pair.lo, pair.hi, c)
                .map_err(|e| GameError::Painter(e.to_string()))?;
            self.solver.value_of(&next).map_err(|e| GameError::Painter(e.to_string()))
        };
        let red = value(Color::Red)?;
        let blue = value(Color::Blue)?;
        let rank = |v: Option<u32>| v.map_or(u64::MAX, u64::from);
        Ok(if rank(blue) > rank(red) { Color::Blue } else { Color::Red })
    }
}

/// Replays the colors of a recorded game; fails if Builder deviates from
/// the recorded pairs or asks for more moves than were recorded.
pub struct ReplayPainter {
    moves: Vec<Move>,
    label: String,
}

impl ReplayPainter {
    pub fn new(transcript: &Transcript, label: impl Into<String>) -> Self {
        ReplayPainter { moves: transcript.moves.clone(), label: label.into() }
    }
}

impl PainterPolicy for ReplayPainter {
    fn name(&self) -> String {
        format!("replay:{}", self.label)
    }

    fn paint(&mut self, state: &GameState, pair: Pair) -> Result<Color, GameError> {
        let k = state.moves_made();
        match self.moves.get(k) {
            Some(mv) if mv.pair == pair => Ok(mv.color),
            Some(mv) => Err(GameError::Painter(format!(
                "replay diverged at move {}: transcript has {}, builder proposed {}",
                k + 1,
                mv.pair,
                pair
            ))),
            None => Err(GameError::Painter(format!(
                "replay exhausted after {} moves",
                self.moves.len()
            ))),
        }
    }
}

/// Colors supplied from outside (a human through the session service).
/// Choices are queued by [`RemoteHandle::push`] and consumed in order.
pub struct RemotePainter {
    label: String,
    queue: Arc<Mutex<VecDeque<Color>>>,
}

/// Sending side of a [`RemotePainter`].
#[derive(Clone)]
pub struct RemoteHandle(Arc<Mutex<VecDeque<Color>>>);

impl RemoteHandle {
    pub fn push(&self, c: Color) {
        self.0.lock().expect("remote queue poisoned").push_back(c);
    }
}

impl RemotePainter {
    pub fn new(label: impl Into<String>) -> (Self, RemoteHandle) {
        let queue = Arc::new(Mutex::new(VecDeque::new()));
        (
            RemotePainter { label: label.into(), queue: queue.clone() },
            RemoteHandle(queue),
        )
    }
}

impl PainterPolicy for RemotePainter {
    fn name(&self) -> String {
        format!("remote:{}", self.label)
    }

    fn paint(&mut self, _: &GameState, pair: Pair) -> Result<Color, GameError> {
        self.queue
            .lock()
            .expect("remote queue poisoned")
            .pop_front()
            .ok_or_else(|| GameError::Painter(format!("no remote choice queued for {pair}")))
    }
}
