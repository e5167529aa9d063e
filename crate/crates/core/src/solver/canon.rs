//! Canonical codes of bichromatic graphs up to vertex relabeling.
//!
//! Vertices are first split into cells by color refinement on the 3-state
//! pair coloring. The code is then the minimum encoding over all relabelings
//! that list the cells in refined order, which makes it a complete invariant:
//! isomorphic graphs refine to the same cell sequence and so range over the
//! same set of encodings.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::{pair_rank, BichromaticGraph};

use super::board::{Position, MAX_ENCODED_VERTICES};

/// Byte code identifying a bichromatic graph up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self:?}"))
    }
}

/// Canonical code of `g`; panics above eight vertices.
pub fn canonical_code(g: &BichromaticGraph) -> CanonicalCode {
    let n = g.vertex_count();
    assert!(n <= MAX_ENCODED_VERTICES, "canonical codes support at most 8 vertices");
    let mut pos = Position::default();
    for (u, v, c) in g.edges() {
        pos = pos.with(pair_rank(u, v), c);
    }
    let key = canonical_key(n, pos);
    let mut bytes = vec![n as u8];
    bytes.extend_from_slice(&key.to_be_bytes());
    CanonicalCode(bytes)
}

#[inline]
fn state_of(pos: Position, u: usize, v: usize) -> u8 {
    let bit = 1u32 << pair_rank(u, v);
    if pos.red & bit != 0 {
        1
    } else if pos.blue & bit != 0 {
        2
    } else {
        0
    }
}

/// Minimum `(red << 32) | blue` encoding over cell-respecting relabelings.
pub(crate) fn canonical_key(n: usize, pos: Position) -> u64 {
    if n <= 1 {
        return 0;
    }
    let cells = refine(n, pos);
    let mut order = Vec::with_capacity(n);
    let mut best = u64::MAX;
    let mut used = [false; MAX_ENCODED_VERTICES];
    search(n, pos, &cells, 0, &mut order, &mut used, &mut best);
    best
}

/// Equitable-ish partition by iterated signatures, returned as the cell of
/// each position in the final order.
fn refine(n: usize, pos: Position) -> Vec<Vec<usize>> {
    let mut color = vec![0usize; n];
    let mut classes = 1;
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| w != v)
                    .map(|w| (color[w], state_of(pos, v, w)))
                    .collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let new_color: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        sigs.clear();
        let stable = distinct.len() == classes;
        color = new_color;
        classes = distinct.len();
        if stable || classes == n {
            break;
        }
    }
    let mut cells = vec![Vec::new(); classes];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    cells
}

fn search(
    n: usize,
    pos: Position,
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    used: &mut [bool; MAX_ENCODED_VERTICES],
    best: &mut u64,
) {
    if order.len() == n {
        let (mut red, mut blue) = (0u32, 0u32);
        for j in 1..n {
            for i in 0..j {
                let bit = 1u32 << pair_rank(i, j);
                match state_of(pos, order[i], order[j]) {
                    1 => red |= bit,
                    2 => blue |= bit,
                    _ => {}
                }
            }
        }
        *best = (*best).min(((red as u64) << 32) | blue as u64);
        return;
    }
    let members = &cells[cell];
    let placed_in_cell = members.iter().filter(|&&v| used[v]).count();
    let next_cell = if placed_in_cell + 1 == members.len() { cell + 1 } else { cell };
    for &v in members {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(n, pos, cells, next_cell, order, used, best);
        order.pop();
        used[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color;
    use crate::rng_for_tests;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn random_graph(n: usize, rng: &mut impl Rng) -> BichromaticGraph {
        let mut g = BichromaticGraph::new(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                match rng.random_range(0..3) {
                    1 => g.build_edge(u, v, Color::Red).unwrap(),
                    2 => g.build_edge(u, v, Color::Blue).unwrap(),
                    _ => {}
                }
            }
        }
        g
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn invariant_under_all_relabelings() {
        let mut rng = rng_for_tests(5);
        let perms = permutations(6);
        assert_eq!(perms.len(), 720);
        for _ in 0..100 {
            let g = random_graph(6, &mut rng);
            let code = canonical_code(&g);
            for p in &perms {
                assert_eq!(canonical_code(&g.relabeled(p)), code);
            }
        }
    }

    /// Brute-force isomorphism check used as the oracle for completeness.
    fn isomorphic(a: &BichromaticGraph, b: &BichromaticGraph) -> bool {
        permutations(a.vertex_count())
            .iter()
            .any(|p| &a.relabeled(p) == b)
    }

    #[test]
    fn codes_separate_non_isomorphic_graphs() {
        let mut rng = rng_for_tests(6);
        for _ in 0..300 {
            let n = rng.random_range(3..=5);
            let a = random_graph(n, &mut rng);
            let b = if rng.random_bool(0.5) {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                a.relabeled(&p)
            } else {
                random_graph(n, &mut rng)
            };
            assert_eq!(canonical_code(&a) == canonical_code(&b), isomorphic(&a, &b));
        }
    }

    #[test]
    fn colors_are_not_interchangeable() {
        let red = BichromaticGraph::from_edges(3, [(0, 1, Color::Red), (1, 2, Color::Red), (0, 2, Color::Red)]).unwrap();
        assert_ne!(canonical_code(&red), canonical_code(&red.color_swapped()));
        assert_eq!(
            canonical_code(&BichromaticGraph::new(6).unwrap()),
            canonical_code(&BichromaticGraph::new(6).unwrap())
        );
        assert_ne!(
            canonical_code(&BichromaticGraph::new(5).unwrap()),
            canonical_code(&BichromaticGraph::new(6).unwrap())
        );
    }
}
