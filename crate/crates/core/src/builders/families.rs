//! Independent-pair families: biclique mining in incidence graphs, family
//! assembly, and the endgame decision of which family to build.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::GameConfig;
use crate::graph::{BichromaticGraph, Color, IncidenceGraph, Pair, VertexSet};

/// A complete bipartite subgraph of an incidence graph: every vertex of
/// `left` is adjacent to every pair of `right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biclique {
    pub left: Vec<usize>,
    pub right: Vec<Pair>,
}

/// Largest `a` for which [`biclique_mine`] is exhaustive.
pub const EXACT_MINE_LIMIT: usize = 4;

/// Looks for a `K_{a,b}` in `h`.
///
/// For `a <= 4` every left `a`-set is tried (with neighbourhood-intersection
/// pruning), so `None` means no such biclique exists. Beyond that a greedy
/// search is used and `None` is inconclusive.
pub fn biclique_mine(h: &IncidenceGraph, a: usize, b: usize) -> Option<Biclique> {
    if a == 0 || b == 0 || a > h.left().len() || b > h.right().len() {
        return None;
    }
    let candidates: Vec<usize> = (0..h.left().len()).filter(|&i| h.row(i).len() >= b).collect();
    if candidates.len() < a {
        return None;
    }
    let chosen = if a <= EXACT_MINE_LIMIT {
        let mut stack = Vec::with_capacity(a);
        exact_search(h, &candidates, 0, None, a, b, &mut stack)
    } else {
        greedy_search(h, &candidates, a, b)
    }?;
    let mut common = h.row(chosen[0]).clone();
    for &i in &chosen[1..] {
        common.intersect_with(h.row(i));
    }
    Some(Biclique {
        left: chosen.iter().map(|&i| h.left()[i]).collect(),
        right: common.iter().take(b).map(|j| h.right()[j]).collect(),
    })
}

fn exact_search(
    h: &IncidenceGraph,
    candidates: &[usize],
    start: usize,
    common: Option<&VertexSet>,
    a: usize,
    b: usize,
    stack: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if stack.len() == a {
        return Some(stack.clone());
    }
    let need = a - stack.len();
    for k in start..candidates.len() {
        if candidates.len() - k < need {
            break;
        }
        let i = candidates[k];
        let next = match common {
            Some(c) => c.intersection(h.row(i)),
            None => h.row(i).clone(),
        };
        if next.len() < b {
            continue;
        }
        stack.push(i);
        if let Some(found) = exact_search(h, candidates, k + 1, Some(&next), a, b, stack) {
            return Some(found);
        }
        stack.pop();
    }
    None
}

fn greedy_search(h: &IncidenceGraph, candidates: &[usize], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut starts = candidates.to_vec();
    starts.sort_by_key(|&i| (std::cmp::Reverse(h.row(i).len()), i));
    for &start in &starts {
        let mut chosen = vec![start];
        let mut common = h.row(start).clone();
        while chosen.len() < a {
            let best = candidates
                .iter()
                .filter(|i| !chosen.contains(i))
                .map(|&i| (common.intersection_len(h.row(i)), i))
                .max_by_key(|&(size, i)| (size, std::cmp::Reverse(i)));
            match best {
                Some((size, i)) if size >= b => {
                    chosen.push(i);
                    common.intersect_with(h.row(i));
                }
                _ => break,
            }
        }
        if chosen.len() == a {
            chosen.sort_unstable();
            return Some(chosen);
        }
    }
    None
}

/// Two families of unbuilt pairs with every `p ∈ P` independent of every
/// `q ∈ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFamilies {
    pub p: Vec<Pair>,
    pub q: Vec<Pair>,
}

impl PairFamilies {
    /// Checks the cross-independence invariant against `g`.
    pub fn verify(&self, g: &BichromaticGraph) -> bool {
        self.p
            .iter()
            .all(|&p| self.q.iter().all(|&q| g.are_independent(p, q)))
    }

    pub fn min_len(&self) -> usize {
        self.p.len().min(self.q.len())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family {0} has no unbuilt pairs")]
    EmptyFamily(&'static str),
}

/// `P` pairs every biclique vertex with the rest of its own class; `Q` is the
/// biclique's pair side. Only unbuilt pairs are kept.
pub fn assemble_pair_families(
    g: &BichromaticGraph,
    biclique: &Biclique,
    side_class: &[usize],
) -> Result<PairFamilies, FamilyError> {
    let mut p = BTreeSet::new();
    for &u in &biclique.left {
        for &w in side_class {
            if w != u && !g.is_built(u, w) {
                p.insert(Pair::new(u, w));
            }
        }
    }
    let q: BTreeSet<Pair> = biclique
        .right
        .iter()
        .copied()
        .filter(|q| !g.is_built(q.lo, q.hi))
        .collect();
    if p.is_empty() {
        return Err(FamilyError::EmptyFamily("P"));
    }
    if q.is_empty() {
        return Err(FamilyError::EmptyFamily("Q"));
    }
    Ok(PairFamilies {
        p: p.into_iter().collect(),
        q: q.into_iter().collect(),
    })
}

/// Savings guaranteed by `t` mutually cross-independent families:
/// `Σ s_j − max s_j`.
pub fn generalized_family_savings(sizes: &[usize]) -> usize {
    let total: usize = sizes.iter().sum();
    total - sizes.iter().copied().max().unwrap_or(0)
}

/// Whether building a family is certain to produce a target clique.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Forcing {
    /// Every coloring of the family completes a target clique.
    Forces,
    /// Some coloring of the family avoids every target clique.
    Escapes,
    /// Search budget ran out.
    Unknown,
}

/// Decides whether Painter can color all unbuilt pairs of `family` without
/// creating a red `K_m` or blue `K_n` (all other pairs keep their state).
pub fn family_forces(
    g: &BichromaticGraph,
    config: &GameConfig,
    family: &[Pair],
    node_budget: u64,
) -> Forcing {
    let pending: Vec<Pair> = family
        .iter()
        .copied()
        .filter(|p| !g.is_built(p.lo, p.hi))
        .collect();
    let mut work = g.clone();
    let mut budget = node_budget;
    match escape(&mut work, config, &pending, &mut budget) {
        Some(true) => Forcing::Escapes,
        Some(false) => Forcing::Forces,
        None => Forcing::Unknown,
    }
}

/// `Some(true)` if a clique-free coloring of `pending` exists, `None` when
/// the budget is exhausted.
fn escape(
    g: &mut BichromaticGraph,
    config: &GameConfig,
    pending: &[Pair],
    budget: &mut u64,
) -> Option<bool> {
    let Some((&pair, rest)) = pending.split_first() else {
        return Some(true);
    };
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut exhausted = false;
    for c in Color::BOTH {
        if g.clique_through_if(pair.lo, pair.hi, c, config.target(c)).is_some() {
            continue;
        }
        g.build_edge(pair.lo, pair.hi, c).expect("pending pairs are unbuilt");
        let r = escape(g, config, rest, budget);
        g.unbuild_edge(pair.lo, pair.hi);
        match r {
            Some(true) => return Some(true),
            None => exhausted = true,
            Some(false) => {}
        }
    }
    if exhausted {
        None
    } else {
        Some(false)
    }
}
