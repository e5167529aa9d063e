use crate::game::GameConfig;
use crate::graph::{pair_count, pair_rank, BichromaticGraph, Color};

use super::{decode, SolverError, INF};

/// Largest `N` the retrograde table supports (`3^15` states).
pub const RETROGRADE_MAX_VERTICES: usize = 6;

/// Value of every pair-state vector of an `(m, n; N)` board, `N ≤ 6`.
///
/// States are ranked in base 3 with digit `0` unbuilt, `1` red, `2` blue on
/// the colex pair order. Building a pair only raises the rank, so a single
/// pass in decreasing rank order sees every child before its parent.
pub struct RetrogradeTable {
    config: GameConfig,
    values: Vec<u8>,
}

impl RetrogradeTable {
    pub fn build(config: GameConfig) -> Result<Self, SolverError> {
        let n = config.vertices;
        if n > RETROGRADE_MAX_VERTICES {
            return Err(SolverError::PositionTooLarge {
                vertices: n,
                max: RETROGRADE_MAX_VERTICES,
            });
        }
        let pairs = pair_count(n);
        let red_win = winning_masks(n, Color::Red, config.m);
        let blue_win = winning_masks(n, Color::Blue, config.n);
        let pow: Vec<usize> = (0..pairs).map(|k| 3usize.pow(k as u32)).collect();
        let states = 3usize.pow(pairs as u32);
        let mut values = vec![0u8; states];

        // odometer over digits, starting from the all-blue state
        let mut digits = vec![2u8; pairs];
        let mut red = 0u32;
        let mut blue = if pairs == 0 { 0 } else { (1u32 << pairs) - 1 };
        for s in (0..states).rev() {
            values[s] = if red_win[red as usize] || blue_win[blue as usize] {
                0
            } else {
                let mut best = INF;
                for e in 0..pairs {
                    if digits[e] == 0 {
                        let worst = values[s + pow[e]].max(values[s + 2 * pow[e]]);
                        best = best.min(if worst == INF { INF } else { worst + 1 });
                    }
                }
                best
            };
            // decrement
            for k in 0..pairs {
                let bit = 1u32 << k;
                match digits[k] {
                    2 => {
                        digits[k] = 1;
                        blue &= !bit;
                        red |= bit;
                        break;
                    }
                    1 => {
                        digits[k] = 0;
                        red &= !bit;
                        break;
                    }
                    _ => {
                        digits[k] = 2;
                        blue |= bit;
                    }
                }
            }
        }
        Ok(RetrogradeTable { config, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_of(&self, g: &BichromaticGraph) -> Result<Option<u32>, SolverError> {
        if g.vertex_count() != self.config.vertices {
            return Err(SolverError::SizeMismatch {
                expected: self.config.vertices,
                got: g.vertex_count(),
            });
        }
        let mut rank = 0usize;
        for (u, v, c) in g.edges() {
            let digit = match c {
                Color::Red => 1,
                Color::Blue => 2,
            };
            rank += digit * 3usize.pow(pair_rank(u, v) as u32);
        }
        Ok(decode(self.values[rank]))
    }
}

/// For every pair mask, whether those pairs alone contain a `K_k`.
fn winning_masks(n: usize, c: Color, k: usize) -> Vec<bool> {
    let pairs = pair_count(n);
    let mut endpoints = Vec::with_capacity(pairs);
    for v in 1..n {
        for u in 0..v {
            endpoints.push((pair_rank(u, v), u, v));
        }
    }
    endpoints.sort_unstable();
    (0..1usize << pairs)
        .map(|mask| {
            let g = BichromaticGraph::from_edges(
                n,
                endpoints
                    .iter()
                    .filter(|&&(r, _, _)| mask & 1 << r != 0)
                    .map(|&(_, u, v)| (u, v, c)),
            )
            .expect("distinct pairs");
            g.find_mono_clique(c, k).is_some()
        })
        .collect()
}
