use rand::Rng;
use serde::Serialize;

use crate::graph::clique::max_clique;
use super::LabError;
use crate::graph::{parse_edge_line, GraphError, VertexSet};

/// Largest graph `es_extract` accepts.
pub const ES_MAX_VERTICES: usize = 40;

/// An uncolored simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<VertexSet>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![VertexSet::new(n); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.adj.len();
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u >= n || v >= n {
            return Err(GraphError::OutOfRange { vertex: u.max(v), n });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn complement(&self) -> SimpleGraph {
        let n = self.adj.len();
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n);
                s.difference_with(&self.adj[v]);
                s.remove(v);
                s
            })
            .collect();
        SimpleGraph { adj }
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Parses the edge-list format: vertex count on the first line, then one
    /// `u v` line per edge. Lines carrying a color letter count as edges only
    /// when the letter is `R`, so a bichromatic graph file reads as its red
    /// graph.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lineno, first) = lines.next().ok_or(GraphError::NoVertices)?;
        let n: usize = first.parse().map_err(|_| GraphError::Parse {
            line: lineno,
            msg: format!("expected vertex count, got {first:?}"),
        })?;
        let mut g = SimpleGraph::new(n);
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let keep = match fields.len() {
                2 => true,
                3 => {
                    let (_, _, c) = parse_edge_line(line).ok_or_else(|| GraphError::Parse {
                        line: lineno,
                        msg: format!("expected `u v R|B`, got {line:?}"),
                    })?;
                    c == crate::Color::Red
                }
                _ => {
                    return Err(GraphError::Parse { line: lineno, msg: format!("expected `u v`, got {line:?}") })
                }
            };
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| GraphError::Parse { line: lineno, msg: format!("bad vertex {s:?}") })
            };
            if keep {
                g.add_edge(parse(fields[0])?, parse(fields[1])?)?;
            }
        }
        Ok(g)
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random(n: usize, p: f64, rng: &mut impl Rng) -> Self {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.adj[u].insert(v);
                    g.adj[v].insert(u);
                }
            }
        }
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Clique,
    Independent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub vertices: Vec<usize>,
    pub kind: SetKind,
}

/// The larger of a maximum clique and a maximum independent set of `g`
/// (ties go to the clique). Exact; `g` must have at most 40 vertices.
pub fn es_extract(g: &SimpleGraph) -> Result<Extraction, LabError> {
    let n = g.vertex_count();
    if n > ES_MAX_VERTICES {
        return Err(LabError::Domain(format!(
            "es_extract supports at most {ES_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let all = VertexSet::full(n);
    let clique = max_clique(&g.adj, &all);
    let independent = max_clique(&g.complement().adj, &all);
    Ok(if independent.len() > clique.len() {
        Extraction { vertices: independent, kind: SetKind::Independent }
    } else {
        Extraction { vertices: clique, kind: SetKind::Clique }
    })
}

/// One sample of the empirical constant in `s > a·log N / (ε log ε⁻¹)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EsSample {
    pub n: usize,
    pub edges: usize,
    /// `e(G) / N²`.
    pub epsilon: f64,
    pub extracted: usize,
    /// `extracted · ε · ln(1/ε) / ln N`: the largest `a` this instance allows.
    pub a_hat: f64,
}

/// Samples sparse random graphs with edge probability `2ε` (so roughly
/// `εN²` edges) and records the implied constant for each.
pub fn es_constant_sweep(
    sizes: &[usize],
    epsilon: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> Vec<EsSample> {
    let mut out = Vec::new();
    for &n in sizes {
        for _ in 0..trials {
            let g = SimpleGraph::random(n, (2.0 * epsilon).min(1.0), rng);
            let extracted = es_extract(&g).expect("size checked by caller").vertices.len();
            let eps = (g.edge_count().max(1) as f64) / (n * n) as f64;
            out.push(EsSample {
                n,
                edges: g.edge_count(),
                epsilon: eps,
                extracted,
                a_hat: extracted as f64 * eps * (1.0 / eps).ln() / (n as f64).ln(),
            });
        }
    }
    out
}
