//! Bichromatic graphs: every unordered vertex pair is unbuilt, red or blue.
//!
//! Pair states live in a dense triangular array indexed by [`pair_rank`], and
//! every vertex additionally carries a red and a blue neighbourhood bitset that
//! is kept in sync on every build. Clique searches run on those bitsets.

mod bitset;
pub mod clique;
mod format;
mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

pub use bitset::VertexSet;
pub use structure::{IncidenceGraph, PartitionLayout, ReducedGraph, Side};
pub(crate) use format::parse_edge_line;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    /// Single-letter tag used by the text formats.
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_letter(s: &str) -> Option<Color> {
        match s {
            "R" => Some(Color::Red),
            "B" => Some(Color::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => f.write_str("red"),
            Color::Blue => f.write_str("blue"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PairState {
    #[default]
    Unbuilt,
    Built(Color),
}

/// Unordered vertex pair, stored with `lo < hi` (or `lo == hi` for the
/// degenerate self-pair, which graph operations reject).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    pub lo: usize,
    pub hi: usize,
}

impl Pair {
    pub fn new(u: usize, v: usize) -> Pair {
        Pair {
            lo: u.min(v),
            hi: u.max(v),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn shares_vertex(&self, other: &Pair) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Colex rank of the pair `{u, v}` with `u != v`.
#[inline]
pub fn pair_rank(u: usize, v: usize) -> usize {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    hi * (hi - 1) / 2 + lo
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("pair ({0},{1}) is already built")]
    AlreadyBuilt(usize, usize),
    #[error("no built edges between the vertex sets")]
    NoBuiltEdges,
    #[error("vertex sets must be nonempty and disjoint")]
    InvalidVertexSets,
    #[error("cross pair ({0},{1}) of the layout is unbuilt")]
    IncompleteCrossEdges(usize, usize),
    #[error("invalid partition layout: {0}")]
    InvalidLayout(String),
    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    InvalidEpsilon(Rational),
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BichromaticGraph {
    n: usize,
    states: Vec<PairState>,
    red: Vec<VertexSet>,
    blue: Vec<VertexSet>,
    red_count: usize,
    blue_count: usize,
}

impl BichromaticGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(BichromaticGraph {
            n,
            states: vec![PairState::Unbuilt; pair_count(n)],
            red: vec![VertexSet::new(n); n],
            blue: vec![VertexSet::new(n); n],
            red_count: 0,
            blue_count: 0,
        })
    }

    /// Builds a graph from `(u, v, color)` triples.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Color)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for (u, v, c) in edges {
            g.build_edge(u, v, c)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.states.len()
    }

    pub fn built_count(&self) -> usize {
        self.red_count + self.blue_count
    }

    pub fn unbuilt_count(&self) -> usize {
        self.pair_count() - self.built_count()
    }

    pub fn color_count(&self, c: Color) -> usize {
        match c {
            Color::Red => self.red_count,
            Color::Blue => self.blue_count,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.unbuilt_count() == 0
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::OutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Checks that `{u, v}` names a legal unbuilt pair.
    pub fn check_buildable(&self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.is_built(u, v) {
            return Err(GraphError::AlreadyBuilt(u.min(v), u.max(v)));
        }
        Ok(())
    }

    /// Builds the pair `{u, v}` in color `c`. Rejected moves leave the graph
    /// untouched.
    pub fn build_edge(&mut self, u: usize, v: usize, c: Color) -> Result<(), GraphError> {
        self.check_buildable(u, v)?;
        self.states[pair_rank(u, v)] = PairState::Built(c);
        let (nbrs, count) = match c {
            Color::Red => (&mut self.red, &mut self.red_count),
            Color::Blue => (&mut self.blue, &mut self.blue_count),
        };
        nbrs[u].insert(v);
        nbrs[v].insert(u);
        *count += 1;
        Ok(())
    }

    /// Reverts a built pair to unbuilt. Used by backtracking searches.
    pub(crate) fn unbuild_edge(&mut self, u: usize, v: usize) {
        if let PairState::Built(c) = self.state(u, v) {
            self.states[pair_rank(u, v)] = PairState::Unbuilt;
            let (nbrs, count) = match c {
                Color::Red => (&mut self.red, &mut self.red_count),
                Color::Blue => (&mut self.blue, &mut self.blue_count),
            };
            nbrs[u].remove(v);
            nbrs[v].remove(u);
            *count -= 1;
        }
    }

    /// Copy of this graph with one more edge.
    pub fn with_edge(&self, u: usize, v: usize, c: Color) -> Result<Self, GraphError> {
        let mut g = self.clone();
        g.build_edge(u, v, c)?;
        Ok(g)
    }

    /// State of `{u, v}`; panics on out-of-range vertices or `u == v`.
    #[inline]
    pub fn state(&self, u: usize, v: usize) -> PairState {
        self.states[pair_rank(u, v)]
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        match self.state(u, v) {
            PairState::Built(c) => Some(c),
            PairState::Unbuilt => None,
        }
    }

    #[inline]
    pub fn is_built(&self, u: usize, v: usize) -> bool {
        self.state(u, v) != PairState::Unbuilt
    }

    pub fn neighbors(&self, v: usize, c: Color) -> &VertexSet {
        match c {
            Color::Red => &self.red[v],
            Color::Blue => &self.blue[v],
        }
    }

    pub fn adjacency(&self, c: Color) -> &[VertexSet] {
        match c {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    pub fn degree(&self, v: usize, c: Color) -> usize {
        self.neighbors(v, c).len()
    }

    /// Built edges in lexicographic `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Color)> + '_ {
        self.lex_pairs()
            .filter_map(|p| self.color(p.lo, p.hi).map(|c| (p.lo, p.hi, c)))
    }

    /// Unbuilt pairs in lexicographic order.
    pub fn unbuilt_pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.lex_pairs().filter(|p| !self.is_built(p.lo, p.hi))
    }

    pub fn first_unbuilt(&self) -> Option<Pair> {
        self.unbuilt_pairs().next()
    }

    fn lex_pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| Pair { lo: u, hi: v }))
    }

    fn cross_counts(&self, a: &[usize], b: &[usize]) -> Result<(i64, i64), GraphError> {
        if a.is_empty() || b.is_empty() {
            return Err(GraphError::InvalidVertexSets);
        }
        for &v in a.iter().chain(b) {
            self.check_vertex(v)?;
        }
        let a_set = VertexSet::from_iter_in(self.n, a.iter().copied());
        let b_set = VertexSet::from_iter_in(self.n, b.iter().copied());
        if a_set.intersection_len(&b_set) > 0 {
            return Err(GraphError::InvalidVertexSets);
        }
        let (mut red, mut blue) = (0i64, 0i64);
        for u in a_set.iter() {
            red += self.red[u].intersection_len(&b_set) as i64;
            blue += self.blue[u].intersection_len(&b_set) as i64;
        }
        Ok((red, blue))
    }

    /// Fraction of built `A`–`B` cross edges that are red.
    pub fn red_density(&self, a: &[usize], b: &[usize]) -> Result<Rational, GraphError> {
        let (red, blue) = self.cross_counts(a, b)?;
        if red + blue == 0 {
            return Err(GraphError::NoBuiltEdges);
        }
        Ok(Rational::new(red, red + blue))
    }

    pub fn blue_density(&self, a: &[usize], b: &[usize]) -> Result<Rational, GraphError> {
        Ok(Rational::from_integer(1) - self.red_density(a, b)?)
    }

    /// `eps <= d_R <= 1 - eps` on the cross edges between `a` and `b`.
    pub fn is_color_balanced(
        &self,
        a: &[usize],
        b: &[usize],
        eps: Rational,
    ) -> Result<bool, GraphError> {
        let d = self.red_density(a, b)?;
        Ok(eps <= d && d <= Rational::from_integer(1) - eps)
    }

    /// Independence of two pairs: vertex-disjoint, both unbuilt, and the four
    /// cross pairs carry at least one red and one blue edge.
    pub fn are_independent(&self, p: Pair, q: Pair) -> bool {
        let in_range = [p.lo, p.hi, q.lo, q.hi].iter().all(|&v| v < self.n);
        if !in_range || p.lo == p.hi || q.lo == q.hi || p.shares_vertex(&q) {
            return false;
        }
        if self.is_built(p.lo, p.hi) || self.is_built(q.lo, q.hi) {
            return false;
        }
        let mut seen_red = false;
        let mut seen_blue = false;
        for x in [p.lo, p.hi] {
            for y in [q.lo, q.hi] {
                match self.color(x, y) {
                    Some(Color::Red) => seen_red = true,
                    Some(Color::Blue) => seen_blue = true,
                    None => {}
                }
            }
        }
        seen_red && seen_blue
    }

    /// Some `k`-set whose pairs are all built in color `c`, if one exists.
    pub fn find_mono_clique(&self, c: Color, k: usize) -> Option<Vec<usize>> {
        clique::find_clique(self.adjacency(c), &VertexSet::full(self.n), k)
    }

    /// A `c`-colored `k`-clique through the pair `{u, v}`, which must already
    /// be built in color `c`.
    pub fn incremental_clique_check(
        &self,
        u: usize,
        v: usize,
        c: Color,
        k: usize,
    ) -> Option<Vec<usize>> {
        if self.color(u, v) != Some(c) {
            return None;
        }
        self.clique_through_if(u, v, c, k)
    }

    /// The `c`-colored `k`-clique that coloring `{u, v}` with `c` would
    /// complete, ignoring the pair's current state.
    pub fn clique_through_if(&self, u: usize, v: usize, c: Color, k: usize) -> Option<Vec<usize>> {
        if k < 2 {
            return Some(vec![u]);
        }
        let common = self.neighbors(u, c).intersection(self.neighbors(v, c));
        let mut rest = clique::find_clique(self.adjacency(c), &common, k - 2)?;
        rest.push(u);
        rest.push(v);
        rest.sort_unstable();
        Some(rest)
    }

    /// Size of the largest `c`-colored clique containing `{u, v}` if the
    /// pair were colored `c`.
    pub fn max_clique_through_if(&self, u: usize, v: usize, c: Color) -> usize {
        let common = self.neighbors(u, c).intersection(self.neighbors(v, c));
        2 + clique::max_clique(self.adjacency(c), &common).len()
    }

    pub fn max_mono_clique(&self, c: Color) -> Vec<usize> {
        clique::max_clique(self.adjacency(c), &VertexSet::full(self.n))
    }

    /// Same pairs with red and blue exchanged.
    pub fn color_swapped(&self) -> Self {
        let mut g = self.clone();
        std::mem::swap(&mut g.red, &mut g.blue);
        std::mem::swap(&mut g.red_count, &mut g.blue_count);
        for s in &mut g.states {
            if let PairState::Built(c) = s {
                *c = c.opposite();
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match vertex count");
        let mut g = Self::new(self.n).expect("n > 0");
        for (u, v, c) in self.edges() {
            g.build_edge(perm[u], perm[v], c)
                .expect("permutation maps distinct pairs to distinct pairs");
        }
        g
    }

    /// Induced bichromatic subgraph on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut g = Self::new(vertices.len())?;
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if let Some(c) = self.color(u, v) {
                    g.build_edge(i, j, c)?;
                }
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        format::to_text(self)
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        format::from_text(text)
    }
}

impl fmt::Debug for BichromaticGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BichromaticGraph(n={}, ", self.n)?;
        let edges: Vec<String> = self
            .edges()
            .map(|(u, v, c)| format!("{u}{}{v}", c.letter()))
            .collect();
        write!(f, "[{}])", edges.join(" "))
    }
}
