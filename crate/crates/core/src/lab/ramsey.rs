use crate::graph::{BichromaticGraph, Color};

/// Known classical Ramsey numbers `r(m, n)` for small arguments.
pub fn classical_ramsey(m: usize, n: usize) -> Option<usize> {
    let (a, b) = (m.min(n), m.max(n));
    match (a, b) {
        (0, _) => None,
        (1, _) => Some(1),
        (2, b) => Some(b),
        (3, 3) => Some(6),
        (3, 4) => Some(9),
        (3, 5) => Some(14),
        (3, 6) => Some(18),
        (3, 7) => Some(23),
        (3, 8) => Some(28),
        (3, 9) => Some(36),
        (4, 4) => Some(18),
        (4, 5) => Some(25),
        _ => None,
    }
}

/// A coloring of `K_vertices` with no red `K_m` and no blue `K_n`, found by
/// backtracking vertex by vertex, or `None` if none exists.
pub fn ramsey_coloring(m: usize, n: usize, vertices: usize) -> Option<BichromaticGraph> {
    let mut g = BichromaticGraph::new(vertices).ok()?;
    // colex order closes small cliques early
    let pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .collect();
    fn rec(g: &mut BichromaticGraph, pairs: &[(usize, usize)], m: usize, n: usize) -> bool {
        let Some((&(u, v), rest)) = pairs.split_first() else {
            return true;
        };
        for (c, k) in [(Color::Red, m), (Color::Blue, n)] {
            if g.clique_through_if(u, v, c, k).is_none() {
                g.build_edge(u, v, c).expect("unbuilt");
                if rec(g, rest, m, n) {
                    return true;
                }
                g.unbuild_edge(u, v);
            }
        }
        false
    }
    rec(&mut g, &pairs, m, n).then_some(g)
}
