//! Plain-text graph format: first line `N`, then one `u v R|B` line per built
//! edge in lexicographic order.

use super::{BichromaticGraph, Color, GraphError};

pub(super) fn to_text(g: &BichromaticGraph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v, c) in g.edges() {
        out.push_str(&format!("{u} {v} {}\n", c.letter()));
    }
    out
}

pub(super) fn from_text(text: &str) -> Result<BichromaticGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("bad vertex count {header:?}"),
    })?;
    let mut g = BichromaticGraph::new(n)?;
    for (line, l) in lines {
        let (u, v, c) = parse_edge_line(l).ok_or_else(|| GraphError::Parse {
            line,
            msg: format!("expected `u v R|B`, got {l:?}"),
        })?;
        g.build_edge(u, v, c).map_err(|e| GraphError::Parse {
            line,
            msg: e.to_string(),
        })?;
    }
    Ok(g)
}

pub(crate) fn parse_edge_line(l: &str) -> Option<(usize, usize, Color)> {
    let mut it = l.split_whitespace();
    let u = it.next()?.parse().ok()?;
    let v = it.next()?.parse().ok()?;
    let c = Color::from_letter(it.next()?)?;
    if it.next().is_some() {
        return None;
    }
    Some((u, v, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_text() {
        let g = BichromaticGraph::from_edges(3, [(1, 2, Color::Blue), (0, 1, Color::Red)]).unwrap();
        assert_eq!(g.to_text(), "3\n0 1 R\n1 2 B\n");
        assert_eq!(BichromaticGraph::from_text("3\n0 1 R\n1 2 B\n").unwrap(), g);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(from_text(""), Err(GraphError::Parse { .. })));
        assert!(matches!(from_text("3\n0 1 G\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(from_text("3\n0 1 R\n1 0 B\n"), Err(GraphError::Parse { line: 3, .. })));
        assert!(matches!(from_text("2\n0 2 R\n"), Err(GraphError::Parse { .. })));
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..12, states in proptest::collection::vec(0u8..3, 66)) {
            let mut g = BichromaticGraph::new(n).unwrap();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match states[k] {
                        1 => g.build_edge(u, v, Color::Red).unwrap(),
                        2 => g.build_edge(u, v, Color::Blue).unwrap(),
                        _ => {}
                    }
                    k += 1;
                }
            }
            let text = g.to_text();
            let back = BichromaticGraph::from_text(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_text(), text);
        }
    }
}
