use crate::game::GameConfig;
use crate::graph::{pair_count, pair_rank, BichromaticGraph, Color};

use super::SolverError;

/// Hard limit of the compact encoding (28 pairs fit in a `u32`).
pub const MAX_ENCODED_VERTICES: usize = 8;

/// A position as two pair bitmasks indexed by colex pair rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Position {
    pub red: u32,
    pub blue: u32,
}

impl Position {
    #[inline]
    pub fn built(self) -> u32 {
        self.red | self.blue
    }

    #[inline]
    pub fn with(self, pair: usize, c: Color) -> Position {
        match c {
            Color::Red => Position { red: self.red | 1 << pair, ..self },
            Color::Blue => Position { blue: self.blue | 1 << pair, ..self },
        }
    }
}

/// Static data of an `(m, n; N)` board: pair endpoints and target cliques.
#[derive(Clone, Debug)]
pub struct Board {
    pub config: GameConfig,
    pub pairs: Vec<(usize, usize)>,
    pub all_pairs: u32,
    red_cliques: Vec<u32>,
    blue_cliques: Vec<u32>,
}

impl Board {
    pub fn new(config: GameConfig) -> Result<Self, SolverError> {
        let n = config.vertices;
        if n > MAX_ENCODED_VERTICES {
            return Err(SolverError::PositionTooLarge { vertices: n, max: MAX_ENCODED_VERTICES });
        }
        let mut pairs = vec![(0, 0); pair_count(n)];
        for v in 1..n {
            for u in 0..v {
                pairs[pair_rank(u, v)] = (u, v);
            }
        }
        let all_pairs = if pairs.len() == 32 { u32::MAX } else { (1u32 << pairs.len()) - 1 };
        Ok(Board {
            config,
            all_pairs,
            red_cliques: clique_masks(n, config.m),
            blue_cliques: clique_masks(n, config.n),
            pairs,
        })
    }

    pub fn pair_len(&self) -> usize {
        self.pairs.len()
    }

    pub fn position_of(&self, g: &BichromaticGraph) -> Result<Position, SolverError> {
        if g.vertex_count() != self.config.vertices {
            return Err(SolverError::SizeMismatch {
                expected: self.config.vertices,
                got: g.vertex_count(),
            });
        }
        let mut pos = Position::default();
        for (u, v, c) in g.edges() {
            pos = pos.with(pair_rank(u, v), c);
        }
        Ok(pos)
    }

    pub fn graph_of(&self, pos: Position) -> BichromaticGraph {
        let mut g = BichromaticGraph::new(self.config.vertices).expect("n > 0");
        for (k, &(u, v)) in self.pairs.iter().enumerate() {
            if pos.red & 1 << k != 0 {
                g.build_edge(u, v, Color::Red).expect("distinct pairs");
            } else if pos.blue & 1 << k != 0 {
                g.build_edge(u, v, Color::Blue).expect("distinct pairs");
            }
        }
        g
    }

    #[inline]
    pub fn is_won(&self, pos: Position) -> bool {
        self.red_cliques.iter().any(|&c| (c & pos.red) == c)
            || self.blue_cliques.iter().any(|&c| (c & pos.blue) == c)
    }

    /// Fewest further builds any target clique still needs, or `None` when
    /// every candidate clique already contains an edge of the wrong color.
    #[inline]
    pub fn lower_bound(&self, pos: Position) -> Option<u32> {
        let red = self
            .red_cliques
            .iter()
            .filter(|&&c| c & pos.blue == 0)
            .map(|&c| (c & !pos.red).count_ones());
        let blue = self
            .blue_cliques
            .iter()
            .filter(|&&c| c & pos.red == 0)
            .map(|&c| (c & !pos.blue).count_ones());
        red.chain(blue).min()
    }

    /// Move-ordering heuristic: live target cliques through pair `e`,
    /// weighted towards those with few missing pairs.
    pub fn move_score(&self, pos: Position, e: usize) -> u64 {
        let bit = 1u32 << e;
        let score = |cliques: &[u32], own: u32, other: u32| -> u64 {
            cliques
                .iter()
                .filter(|&&c| c & bit != 0 && c & other == 0)
                .map(|&c| 1u64 << (32 - (c & !own).count_ones()))
                .sum()
        };
        score(&self.red_cliques, pos.red, pos.blue) + score(&self.blue_cliques, pos.blue, pos.red)
    }
}

/// Pair masks of all `k`-subsets of `0..n`.
fn clique_masks(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut set = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, set: &mut Vec<usize>, out: &mut Vec<u32>) {
        if set.len() == k {
            let mut mask = 0u32;
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    mask |= 1 << pair_rank(u, v);
                }
            }
            out.push(mask);
            return;
        }
        for v in start..n {
            set.push(v);
            rec(n, k, v + 1, set, out);
            set.pop();
        }
    }
    rec(n, k, 0, &mut set, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_mask_counts() {
        assert_eq!(clique_masks(6, 3).len(), 20);
        assert_eq!(clique_masks(4, 5).len(), 0);
        assert!(clique_masks(5, 2).iter().all(|m| m.count_ones() == 1));
    }

    #[test]
    fn position_round_trip() {
        let b = Board::new(GameConfig::new(3, 3, 5).unwrap()).unwrap();
        let g = BichromaticGraph::from_edges(5, [(0, 4, Color::Red), (2, 3, Color::Blue)]).unwrap();
        let pos = b.position_of(&g).unwrap();
        assert_eq!(b.graph_of(pos), g);
        assert_eq!(b.lower_bound(pos), Some(2));
        assert!(Board::new(GameConfig::new(3, 3, 9).unwrap()).is_err());
    }
}
