//! Exact clique search over bitset adjacency.

use std::cmp::Reverse;

use super::VertexSet;

/// Finds some `k`-clique inside `candidates`, returned sorted.
///
/// Candidates are tried by descending degree; a branch is cut as soon as
/// fewer candidates remain than vertices are still needed.
pub fn find_clique(adj: &[VertexSet], candidates: &VertexSet, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let mut order: Vec<usize> = candidates.iter().collect();
    if order.len() < k {
        return None;
    }
    order.sort_by_key(|&v| (Reverse(adj[v].len()), v));
    let mut clique = Vec::with_capacity(k);
    if extend(adj, &order, candidates.clone(), k, &mut clique) {
        clique.sort_unstable();
        Some(clique)
    } else {
        None
    }
}

fn extend(
    adj: &[VertexSet],
    order: &[usize],
    mut cand: VertexSet,
    need: usize,
    clique: &mut Vec<usize>,
) -> bool {
    if need == 0 {
        return true;
    }
    let mut remaining = cand.len();
    for &v in order {
        if remaining < need {
            return false;
        }
        if !cand.contains(v) {
            continue;
        }
        cand.remove(v);
        remaining -= 1;
        let next = cand.intersection(&adj[v]);
        if next.len() + 1 >= need {
            clique.push(v);
            if extend(adj, order, next, need - 1, clique) {
                return true;
            }
            clique.pop();
        }
    }
    false
}

/// A maximum clique inside `candidates` (branch and bound with a greedy
/// coloring bound), returned sorted.
pub fn max_clique(adj: &[VertexSet], candidates: &VertexSet) -> Vec<usize> {
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, candidates.clone(), &mut current, &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[VertexSet], mut cand: VertexSet, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let (order, bounds) = color_sort(adj, &cand);
    for i in (0..order.len()).rev() {
        if current.len() + bounds[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let next = cand.intersection(&adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                best.clone_from(current);
            }
        } else {
            expand(adj, next, current, best);
        }
        current.pop();
        cand.remove(v);
    }
}

/// Greedy sequential coloring; `bounds[i]` is the color class of `order[i]`,
/// an upper bound on the clique size among `order[..=i]`.
fn color_sort(adj: &[VertexSet], cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.len());
    let mut bounds = Vec::with_capacity(cand.len());
    let mut uncolored = cand.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut class = uncolored.clone();
        while let Some(v) = class.first() {
            class.remove(v);
            class.difference_with(&adj[v]);
            uncolored.remove(v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}
