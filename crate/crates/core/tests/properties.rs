//! Property and cross-module tests over the public API.

use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_core::builders::{
    biclique_mine, ForcedEdgeBuilder, NaiveBuilder, PaperBuilder, PaperStrategyParams,
};
use ramsey_core::game::{
    play, replay, BuilderPolicy, GameConfig, GameState, GameStatus, Move, PainterPolicy,
    Transcript,
};
use ramsey_core::graph::{IncidenceGraph, PartitionLayout, ReducedGraph, Side};
use ramsey_core::harness::random_position;
use ramsey_core::painters::{
    AlternatingPainter, BalancedPainter, ConstantPainter, GreedyPainter, MinimaxPainter,
    RandomPainter, ReplayPainter,
};
use ramsey_core::solver::{savings_of, Solver};
use ramsey_core::{BichromaticGraph, Color, Pair, Rational};

fn cfg(m: usize, n: usize, vertices: usize) -> GameConfig {
    GameConfig::new(m, n, vertices).unwrap()
}

fn graph_strategy(max_vertices: usize) -> impl Strategy<Value = BichromaticGraph> {
    (2..=max_vertices).prop_flat_map(|n| {
        proptest::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |states| {
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
            g
        })
    })
}

fn complete_strategy(n: usize) -> impl Strategy<Value = BichromaticGraph> {
    proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
        let mut g = BichromaticGraph::new(n).unwrap();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                g.build_edge(u, v, if bits[k] { Color::Red } else { Color::Blue }).unwrap();
                k += 1;
            }
        }
        g
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn is_mono(g: &BichromaticGraph, vs: &[usize], c: Color) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.color(u, v) == Some(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn densities_sum_to_one(g in graph_strategy(10), split in any::<u32>()) {
        let n = g.vertex_count();
        let a: Vec<usize> = (0..n).filter(|v| split >> v & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|v| split >> v & 1 == 0).collect();
        if let (Ok(r), Ok(bl)) = (g.red_density(&a, &b), g.blue_density(&a, &b)) {
            prop_assert_eq!(r + bl, Rational::from_integer(1));
        }
    }

    #[test]
    fn reduced_labels_follow_the_threshold(g in complete_strategy(12), parts in 2usize..=4, den in 3i64..20) {
        let eps = Rational::new(1, den);
        let layout = PartitionLayout::consecutive(12, parts).unwrap();
        let reduced = ReducedGraph::build(&g, &layout, eps).unwrap();
        let p = layout.parts();
        for i in 0..parts {
            for j in i + 1..parts {
                let d = g.red_density(&p[i], &p[j]).unwrap();
                let want = if d > Rational::from_integer(1) - eps {
                    Some(Color::Red)
                } else if d < eps {
                    Some(Color::Blue)
                } else {
                    None
                };
                prop_assert_eq!(reduced.label(i, j), want);
            }
        }
    }

    #[test]
    fn incremental_check_matches_cliques_through_the_edge(g in graph_strategy(8), k in 2usize..=4) {
        let n = g.vertex_count();
        for (u, v, c) in g.edges().collect::<Vec<_>>() {
            let brute = subsets(n, k)
                .into_iter()
                .any(|s| s.contains(&u) && s.contains(&v) && is_mono(&g, &s, c));
            let found = g.incremental_clique_check(u, v, c, k);
            prop_assert_eq!(found.is_some(), brute);
            if let Some(s) = found {
                prop_assert!(s.len() == k && s.contains(&u) && s.contains(&v) && is_mono(&g, &s, c));
            }
        }
    }

    #[test]
    fn find_mono_clique_is_exact(g in graph_strategy(8), k in 1usize..=5) {
        for c in Color::BOTH {
            let brute = subsets(g.vertex_count(), k).into_iter().any(|s| is_mono(&g, &s, c));
            let found = g.find_mono_clique(c, k);
            prop_assert_eq!(found.is_some(), brute);
            if let Some(s) = found {
                prop_assert!(s.len() == k && is_mono(&g, &s, c));
            }
        }
    }

    #[test]
    fn incidence_edges_survive_color_swap(g in complete_strategy(9), cut in 2usize..=7) {
        let v1: Vec<usize> = (0..cut).collect();
        let v2: Vec<usize> = (cut..9).collect();
        let swapped = g.color_swapped();
        for side in [Side::Left, Side::Right] {
            let h = IncidenceGraph::build(&g, &v1, &v2, side).unwrap();
            let hs = IncidenceGraph::build(&swapped, &v1, &v2, side).unwrap();
            prop_assert_eq!(h.edge_count(), hs.edge_count());
            prop_assert_eq!(h.edges().collect::<Vec<_>>(), hs.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn biclique_mine_is_exact_for_small_a(
        left in 1usize..=12,
        right in 1usize..=20,
        density in 0.2f64..0.95,
        a in 1usize..=4,
        b in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<Pair> = (0..right).map(|i| Pair::new(100 + 2 * i, 101 + 2 * i)).collect();
        let rows: Vec<Vec<usize>> = (0..left)
            .map(|_| (0..right).filter(|_| rng.random_bool(density)).collect())
            .collect();
        let h = IncidenceGraph::from_rows(Side::Left, (0..left).collect(), pairs, rows.clone());
        let brute = a <= left && subsets(left, a).into_iter().any(|s| {
            (0..right).filter(|j| s.iter().all(|&i| rows[i].contains(j))).count() >= b
        });
        let mined = biclique_mine(&h, a, b);
        prop_assert_eq!(mined.is_some(), brute);
        if let Some(bc) = mined {
            prop_assert_eq!((bc.left.len(), bc.right.len()), (a, b));
            for &u in &bc.left {
                for &p in &bc.right {
                    prop_assert!(h.has_edge(u, p));
                }
            }
        }
    }

    #[test]
    fn transcripts_replay_byte_for_byte(vertices in 6usize..=14, seed in any::<u64>()) {
        let config = cfg(3, 3, vertices);
        let mut builder = PaperBuilder::new(PaperStrategyParams::for_vertices(vertices)).unwrap();
        let (t, report) = play(config, &mut builder, &mut RandomPainter::new(seed), None).unwrap();
        let text = t.to_text();
        let parsed = Transcript::from_text(&text).unwrap();
        prop_assert_eq!(&parsed, &t);
        prop_assert_eq!(&parsed.to_text(), &text);
        let state = replay(&t).unwrap();
        prop_assert_eq!(state.status(), &t.status);
        prop_assert_eq!(state.moves_made(), report.moves_used);
        let (again, _) = play(
            config,
            &mut PaperBuilder::new(PaperStrategyParams::for_vertices(vertices)).unwrap(),
            &mut RandomPainter::new(seed),
            None,
        ).unwrap();
        prop_assert_eq!(again.to_text(), text);
        let mut rebuilt = BichromaticGraph::new(vertices).unwrap();
        for mv in &t.moves {
            rebuilt.build_edge(mv.pair.lo, mv.pair.hi, mv.color).unwrap();
        }
        prop_assert_eq!(state.graph().to_text(), rebuilt.to_text());
    }

    #[test]
    fn wins_are_detected_on_the_completing_move(vertices in 6usize..=10, seed in any::<u64>()) {
        let config = cfg(3, 3, vertices);
        let (t, _) = play(config, &mut NaiveBuilder::new(&config), &mut RandomPainter::new(seed), None).unwrap();
        let GameStatus::BuilderWon { color, clique } = &t.status else {
            panic!("N >= 6 always ends in a win");
        };
        let last = t.moves.last().unwrap();
        prop_assert_eq!(last.color, *color);
        prop_assert!(clique.contains(&last.pair.lo) && clique.contains(&last.pair.hi));
        let mut state = GameState::new(config, None).unwrap();
        for (k, mv) in t.moves.iter().enumerate() {
            prop_assert_eq!(state.status(), &GameStatus::InProgress, "already over before move {}", k + 1);
            state.apply(mv.pair, mv.color).unwrap();
        }
        prop_assert_eq!(state.status(), &t.status);
    }

    #[test]
    fn forced_edge_builder_skips_exactly_forced_pairs(vertices in 4usize..=10, seed in any::<u64>()) {
        let config = cfg(3, 4, vertices);
        let mut builder = ForcedEdgeBuilder::new(&config);
        let mut painter = RandomPainter::new(seed);
        let mut state = GameState::new(config, None).unwrap();
        while !state.status().is_over() {
            let p = builder.next_edge(&state).unwrap();
            // the certification stage builds forced pairs on purpose: they
            // are the ones Painter has to color blue
            let sweeping = builder.phase_log().last().is_some_and(|r| r.name == "sweep");
            if sweeping {
                prop_assert!(!builder.forced().contains(&p), "built forced pair {}", p);
            }
            for q in builder.forced() {
                if !state.graph().is_built(q.lo, q.hi) {
                    prop_assert!(ramsey_core::builders::is_forced(state.graph(), *q, config.m));
                }
            }
            let c = painter.paint(&state, p).unwrap();
            state.apply(p, c).unwrap();
        }
    }
}

#[test]
fn pentagon_coloring_stalemates() {
    let config = cfg(3, 3, 5);
    let color_of = |u: usize, v: usize| {
        if (v + 5 - u) % 5 == 1 || (u + 5 - v) % 5 == 1 {
            Color::Red
        } else {
            Color::Blue
        }
    };
    let moves: Vec<Move> = (0..5)
        .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
        .map(|(u, v)| Move { pair: Pair::new(u, v), color: color_of(u, v) })
        .collect();
    let recorded = Transcript { config, seed: None, moves, status: GameStatus::Stalemate };
    let mut painter = ReplayPainter::new(&recorded, "pentagon");
    let (t, report) = play(config, &mut NaiveBuilder::new(&config), &mut painter, None).unwrap();
    assert_eq!(t.status, GameStatus::Stalemate);
    assert_eq!((report.moves_used, report.savings), (10, 0));
    assert_eq!(t, recorded);
}

#[test]
fn three_three_six_is_always_won() {
    let config = cfg(3, 3, 6);
    let mut pool: Vec<Box<dyn PainterPolicy>> = vec![
        Box::new(ConstantPainter::new(Color::Red)),
        Box::new(ConstantPainter::new(Color::Blue)),
        Box::new(AlternatingPainter),
        Box::new(GreedyPainter),
        Box::new(BalancedPainter),
        Box::new(MinimaxPainter::new(config).unwrap()),
    ];
    pool.extend((0..1000).map(|s| Box::new(RandomPainter::new(s)) as Box<dyn PainterPolicy>));
    for painter in &mut pool {
        let (t, report) = play(config, &mut NaiveBuilder::new(&config), painter.as_mut(), None).unwrap();
        assert!(matches!(t.status, GameStatus::BuilderWon { .. }), "{}", painter.name());
        assert!(report.moves_used <= 15);
        assert_eq!(report.moves_used + report.savings, 15);
    }
}

fn pool_painters(seed: u64) -> Vec<Box<dyn PainterPolicy>> {
    vec![
        Box::new(RandomPainter::new(seed)),
        Box::new(ConstantPainter::new(Color::Red)),
        Box::new(ConstantPainter::new(Color::Blue)),
        Box::new(AlternatingPainter),
        Box::new(GreedyPainter),
        Box::new(BalancedPainter),
    ]
}

#[test]
fn painters_are_total_and_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // two independent minimax painters per board size; their tables fill
    // in different orders, so agreement is a determinism check
    let mut minimax: HashMap<usize, [MinimaxPainter; 2]> = HashMap::new();
    for i in 0..10_000u64 {
        let vertices = rng.random_range(3..=12);
        let config = cfg(3, 3, vertices);
        let g = random_position(vertices, &mut rng);
        let state = GameState::new(config, Some(g.clone())).unwrap();
        let Some(pair) = g.unbuilt_pairs().nth(rng.random_range(0..g.unbuilt_count().max(1))) else {
            continue;
        };
        let answers = |pool: &mut Vec<Box<dyn PainterPolicy>>| -> Vec<Color> {
            pool.iter_mut().map(|p| p.paint(&state, pair).unwrap()).collect()
        };
        assert_eq!(answers(&mut pool_painters(i)), answers(&mut pool_painters(i)));
        if vertices <= 6 {
            let [a, b] = minimax.entry(vertices).or_insert_with(|| {
                [MinimaxPainter::new(config).unwrap(), MinimaxPainter::new(config).unwrap()]
            });
            if i % 2 == 0 {
                assert_eq!(a.paint(&state, pair).unwrap(), b.paint(&state, pair).unwrap());
            } else {
                assert_eq!(b.paint(&state, pair).unwrap(), a.paint(&state, pair).unwrap());
            }
        }
    }
}

/// Game length when Builder plays optimally against the minimax painter,
/// over every Builder move sequence.
fn length_vs_minimax(
    g: &BichromaticGraph,
    config: GameConfig,
    painter: &mut MinimaxPainter,
    memo: &mut HashMap<String, Option<u32>>,
) -> Option<u32> {
    let key = g.to_text();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let state = GameState::new(config, Some(g.clone())).unwrap();
    let result = match state.status() {
        GameStatus::BuilderWon { .. } => Some(0),
        GameStatus::Stalemate => None,
        GameStatus::InProgress => g
            .unbuilt_pairs()
            .collect::<Vec<_>>()
            .into_iter()
            .filter_map(|p| {
                let c = painter.paint(&state, p).unwrap();
                let next = g.with_edge(p.lo, p.hi, c).unwrap();
                length_vs_minimax(&next, config, painter, memo).map(|v| v + 1)
            })
            .min(),
    };
    memo.insert(key, result);
    result
}

#[test]
fn minimax_painter_never_loses_faster_than_the_value() {
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        for vertices in n.max(2)..=5 {
            let config = cfg(m, n, vertices);
            let mut painter = MinimaxPainter::new(config).unwrap();
            let mut solver = Solver::new(config).unwrap();
            let mut memo = HashMap::new();
            let empty = BichromaticGraph::new(vertices).unwrap();
            length_vs_minimax(&empty, config, &mut painter, &mut memo);
            for (text, length) in memo {
                let g = BichromaticGraph::from_text(&text).unwrap();
                assert_eq!(length, solver.value_of(&g).unwrap(), "{config} at {text}");
            }
        }
    }
}

#[test]
fn minimax_painter_realizes_the_value_at_three_three_six() {
    let config = cfg(3, 3, 6);
    let mut painter = MinimaxPainter::new(config).unwrap();
    let mut solver = Solver::new(config).unwrap();
    let value = solver.value_of(&BichromaticGraph::new(6).unwrap()).unwrap().unwrap();
    let mut state = GameState::new(config, None).unwrap();
    while !state.status().is_over() {
        let mv = solver.optimal_move(state.graph()).unwrap().unwrap();
        let c = painter.paint(&state, mv.pair).unwrap();
        state.apply(mv.pair, c).unwrap();
    }
    assert_eq!(state.moves_made() as u32, value);
    assert_eq!(value, 8);
}

#[test]
fn solver_values_shrink_as_the_board_grows() {
    let rank = |v: Option<u32>| v.unwrap_or(u32::MAX);
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let mut previous = None;
        for vertices in n..=6 {
            let v = Solver::new(cfg(m, n, vertices))
                .unwrap()
                .value_of(&BichromaticGraph::new(vertices).unwrap())
                .unwrap();
            if let Some(p) = previous {
                assert!(rank(v) <= rank(p), "({m},{n}) N={vertices}");
            }
            previous = Some(v);
        }
    }
}

#[test]
fn value_at_the_ramsey_number_is_at_least_half_of_it() {
    for (m, n, r) in [(2, 2, 2), (2, 3, 3), (3, 3, 6)] {
        let v = Solver::new(cfg(m, n, r))
            .unwrap()
            .value_of(&BichromaticGraph::new(r).unwrap())
            .unwrap()
            .unwrap();
        assert!(2 * v as usize >= r, "({m},{n};{r}) value {v}");
        assert!(v as usize <= r * (r - 1) / 2);
    }
}

#[test]
fn solver_is_minimax_consistent_and_savings_are_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let config = cfg(3, 3, 6);
    let mut solver = Solver::new(config).unwrap();
    for _ in 0..40 {
        let g = random_position(6, &mut rng);
        assert!(solver.minimax_consistent(&g).unwrap());
        let v = solver.value_of(&g).unwrap().unwrap();
        assert_eq!(savings_of(&g, config).unwrap(), g.unbuilt_count() - v as usize);
        assert_eq!(v == 0, state_is_won(&g, config));
    }
}

fn state_is_won(g: &BichromaticGraph, config: GameConfig) -> bool {
    g.find_mono_clique(Color::Red, config.m).is_some()
        || g.find_mono_clique(Color::Blue, config.n).is_some()
}

#[test]
fn assembled_families_are_independent() {
    let mut checked = 0;
    for vertices in 8..=24 {
        for seed in 0..40 {
            let config = cfg(3, 3, vertices);
            let mut builder = PaperBuilder::new(PaperStrategyParams::for_vertices(vertices)).unwrap();
            let mut painter = RandomPainter::new(seed);
            let mut state = GameState::new(config, None).unwrap();
            let mut verified = false;
            while !state.status().is_over() {
                let p = builder.next_edge(&state).unwrap();
                if !verified {
                    if let Some(f) = builder.families() {
                        assert!(f.verify(state.graph()), "N={vertices} seed={seed}");
                        verified = true;
                        checked += 1;
                    }
                }
                let c = painter.paint(&state, p).unwrap();
                state.apply(p, c).unwrap();
            }
        }
    }
    assert!(checked > 0, "no game assembled families");
}
