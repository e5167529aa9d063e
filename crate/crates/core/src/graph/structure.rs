//! Multipartite layouts, ε-reduced graphs and vertex-pair incidence graphs.

use serde::{Deserialize, Serialize};

use super::{clique, pair_count, pair_rank, BichromaticGraph, Color, GraphError, Pair, VertexSet};
use crate::rational::{check_epsilon, Rational};

/// `X` pairwise disjoint parts of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionLayout {
    parts: Vec<Vec<usize>>,
}

impl PartitionLayout {
    pub fn new(parts: Vec<Vec<usize>>, vertex_count: usize) -> Result<Self, GraphError> {
        if parts.is_empty() {
            return Err(GraphError::InvalidLayout("no parts".into()));
        }
        let size = parts[0].len();
        let mut seen = VertexSet::new(vertex_count);
        for part in &parts {
            if part.len() != size || size == 0 {
                return Err(GraphError::InvalidLayout("parts must be nonempty and of equal size".into()));
            }
            for &v in part {
                if v >= vertex_count {
                    return Err(GraphError::OutOfRange { vertex: v, n: vertex_count });
                }
                if seen.contains(v) {
                    return Err(GraphError::InvalidLayout(format!("vertex {v} appears twice")));
                }
                seen.insert(v);
            }
        }
        Ok(PartitionLayout { parts })
    }

    /// `count` consecutive blocks of `⌊n / count⌋` vertices; remainder
    /// vertices are left out of the layout.
    pub fn consecutive(vertex_count: usize, count: usize) -> Result<Self, GraphError> {
        if count == 0 || count > vertex_count {
            return Err(GraphError::InvalidLayout(format!(
                "cannot split {vertex_count} vertices into {count} parts"
            )));
        }
        let size = vertex_count / count;
        let parts = (0..count)
            .map(|i| (i * size..(i + 1) * size).collect())
            .collect();
        Self::new(parts, vertex_count)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_size(&self) -> usize {
        self.parts[0].len()
    }

    /// All pairs with endpoints in different parts, lexicographically.
    pub fn cross_pairs(&self) -> Vec<Pair> {
        let mut pairs = Vec::new();
        for (i, a) in self.parts.iter().enumerate() {
            for b in &self.parts[i + 1..] {
                for &u in a {
                    for &v in b {
                        pairs.push(Pair::new(u, v));
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Pairs inside the given parts, lexicographically.
    pub fn inner_pairs(&self, which: &[usize]) -> Vec<Pair> {
        let mut pairs = Vec::new();
        for &i in which {
            let part = &self.parts[i];
            for (k, &u) in part.iter().enumerate() {
                for &v in &part[k + 1..] {
                    pairs.push(Pair::new(u, v));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// The ε-reduced graph: one vertex per part, colored by near-monochromatic
/// cross densities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedGraph {
    part_count: usize,
    labels: Vec<Option<Color>>,
    densities: Vec<Rational>,
    epsilon: Rational,
}

impl ReducedGraph {
    /// Labels every part pair: Red iff `d_R > 1 - ε`, Blue iff `d_R < ε`.
    pub fn build(
        g: &BichromaticGraph,
        layout: &PartitionLayout,
        epsilon: Rational,
    ) -> Result<Self, GraphError> {
        check_epsilon(epsilon).map_err(|_| GraphError::InvalidEpsilon(epsilon))?;
        let parts = layout.parts();
        let x = parts.len();
        let mut labels = vec![None; pair_count(x)];
        let mut densities = vec![Rational::from_integer(0); pair_count(x)];
        for i in 0..x {
            for j in i + 1..x {
                for &u in &parts[i] {
                    for &v in &parts[j] {
                        if !g.is_built(u, v) {
                            return Err(GraphError::IncompleteCrossEdges(u.min(v), u.max(v)));
                        }
                    }
                }
                let d = g.red_density(&parts[i], &parts[j])?;
                densities[pair_rank(i, j)] = d;
                labels[pair_rank(i, j)] = threshold_label(d, epsilon);
            }
        }
        Ok(ReducedGraph {
            part_count: x,
            labels,
            densities,
            epsilon,
        })
    }

    pub fn part_count(&self) -> usize {
        self.part_count
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn label(&self, i: usize, j: usize) -> Option<Color> {
        self.labels[pair_rank(i, j)]
    }

    pub fn density(&self, i: usize, j: usize) -> Rational {
        self.densities[pair_rank(i, j)]
    }

    /// No part pair is left unlabeled.
    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    /// First unlabeled (hence ε-balanced) part pair in lexicographic order.
    pub fn first_unlabeled(&self) -> Option<(usize, usize)> {
        (0..self.part_count)
            .flat_map(|i| (i + 1..self.part_count).map(move |j| (i, j)))
            .find(|&(i, j)| self.label(i, j).is_none())
    }

    pub fn color_adjacency(&self, c: Color) -> Vec<VertexSet> {
        let x = self.part_count;
        let mut adj = vec![VertexSet::new(x); x];
        for i in 0..x {
            for j in i + 1..x {
                if self.label(i, j) == Some(c) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        adj
    }

    /// Largest monochromatic clique of parts; ties go to Blue.
    pub fn largest_mono_clique(&self) -> (Color, Vec<usize>) {
        let all = VertexSet::full(self.part_count);
        let blue = clique::max_clique(&self.color_adjacency(Color::Blue), &all);
        let red = clique::max_clique(&self.color_adjacency(Color::Red), &all);
        if red.len() > blue.len() {
            (Color::Red, red)
        } else {
            (Color::Blue, blue)
        }
    }
}

pub(crate) fn threshold_label(d: Rational, epsilon: Rational) -> Option<Color> {
    if d > Rational::from_integer(1) - epsilon {
        Some(Color::Red)
    } else if d < epsilon {
        Some(Color::Blue)
    } else {
        None
    }
}

/// Which bipartition class contributes the single vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Bipartite graph between the vertices of one class and the vertex pairs of
/// the other: `(u, {v1, v2})` is an edge iff `uv1` and `uv2` are built in
/// different colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    side: Side,
    left: Vec<usize>,
    right: Vec<Pair>,
    adj: Vec<VertexSet>,
}

impl IncidenceGraph {
    /// `Left` uses `v1` for single vertices and pairs from `v2`; `Right`
    /// swaps the classes.
    pub fn build(
        g: &BichromaticGraph,
        v1: &[usize],
        v2: &[usize],
        side: Side,
    ) -> Result<Self, GraphError> {
        let (singles, paired) = match side {
            Side::Left => (v1, v2),
            Side::Right => (v2, v1),
        };
        let n = g.vertex_count();
        let single_set = VertexSet::from_iter_in(n, singles.iter().copied());
        let paired_set = VertexSet::from_iter_in(n, paired.iter().copied());
        if single_set.intersection_len(&paired_set) > 0 {
            return Err(GraphError::InvalidVertexSets);
        }
        let k = paired.len();
        let mut right = Vec::with_capacity(pair_count(k));
        for b in 1..k {
            for a in 0..b {
                right.push(Pair::new(paired[a], paired[b]));
            }
        }
        let mut adj = Vec::with_capacity(singles.len());
        for &u in singles {
            let mut row = VertexSet::new(right.len());
            let reds: Vec<usize> = (0..k).filter(|&i| g.color(u, paired[i]) == Some(Color::Red)).collect();
            let blues: Vec<usize> = (0..k).filter(|&i| g.color(u, paired[i]) == Some(Color::Blue)).collect();
            for &r in &reds {
                for &b in &blues {
                    row.insert(pair_rank(r, b));
                }
            }
            adj.push(row);
        }
        Ok(IncidenceGraph {
            side,
            left: singles.to_vec(),
            right,
            adj,
        })
    }

    /// Builds an incidence graph directly from left-to-right adjacency rows.
    pub fn from_rows(side: Side, left: Vec<usize>, right: Vec<Pair>, rows: Vec<Vec<usize>>) -> Self {
        let adj = rows
            .into_iter()
            .map(|r| VertexSet::from_iter_in(right.len(), r))
            .collect();
        IncidenceGraph { side, left, right, adj }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[Pair] {
        &self.right
    }

    /// Right-side indices adjacent to left index `i`.
    pub fn row(&self, i: usize) -> &VertexSet {
        &self.adj[i]
    }

    pub fn has_edge(&self, left_vertex: usize, pair: Pair) -> bool {
        let Some(i) = self.left.iter().position(|&u| u == left_vertex) else {
            return false;
        };
        self.right
            .iter()
            .position(|&p| p == pair)
            .is_some_and(|j| self.adj[i].contains(j))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum()
    }

    pub fn max_left_degree(&self) -> usize {
        self.adj.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Pair)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(move |(i, row)| row.iter().map(move |j| (self.left[i], self.right[j])))
    }
}
