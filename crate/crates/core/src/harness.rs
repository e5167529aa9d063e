//! Reproducible runs: single games, savings sweeps, and the verification
//! batch behind `ramsey verify`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{play, GameConfig, GameError, PhaseRecord, Transcript};
use crate::graph::{BichromaticGraph, Color, Pair};
use crate::lab::{
    classical_ramsey, kst_bound, random_balanced_instance, random_kst_free, two_block_instance,
    half_half_instance, verify_least_density_halves, below_kst_bound,
};
use crate::policy::{BuilderSpec, PainterSpec, PolicyError};
use crate::rational::ratio;
use crate::solver::{brute_value, savings_of, RetrogradeTable, Solver, SolverError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Everything that determines a single game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameRun {
    pub config: GameConfig,
    pub builder: String,
    pub painter: String,
    pub seed: u64,
}

/// The one-line summary written next to a transcript.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub status: String,
    pub moves: usize,
    pub savings: usize,
    pub phases: Vec<PhaseRecord>,
}

pub fn run_game(run: &GameRun) -> Result<(Transcript, GameReport), HarnessError> {
    let builder: BuilderSpec = run.builder.parse()?;
    let painter: PainterSpec = run.painter.parse()?;
    let mut b = builder.build(&run.config)?;
    let mut p = painter.build(&run.config, run.seed)?;
    let (transcript, report) = play(run.config, b.as_mut(), p.as_mut(), None)?;
    let summary = GameReport {
        status: transcript.status.tag().to_string(),
        moves: report.moves_used,
        savings: report.savings,
        phases: report.phase_log,
    };
    Ok((transcript, summary))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub m: usize,
    pub n: usize,
    pub vertices: Vec<usize>,
    pub builder: BuilderSpec,
    pub painters: Vec<PainterSpec>,
    /// Runs per (N, painter), with run seeds `0..repeats`.
    pub repeats: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub vertices: usize,
    pub painter: String,
    pub seed: u64,
    pub moves: usize,
    pub savings: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub vertices: usize,
    pub painter: String,
    pub median_moves: f64,
    pub median_savings: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
}

pub const SWEEP_CSV_HEADER: [&str; 6] = ["kind", "N", "painter", "seed", "moves", "savings"];

impl SweepResult {
    /// Run rows (`kind = run`) followed by one `median` row per
    /// (N, painter) with an empty seed.
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SWEEP_CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                "run".to_string(),
                r.vertices.to_string(),
                r.painter.clone(),
                r.seed.to_string(),
                r.moves.to_string(),
                r.savings.to_string(),
            ])?;
        }
        for s in &self.summaries {
            w.write_record([
                "median".to_string(),
                s.vertices.to_string(),
                s.painter.clone(),
                String::new(),
                s.median_moves.to_string(),
                s.median_savings.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let k = values.len();
    if k == 0 {
        return 0.0;
    }
    if k % 2 == 1 {
        values[k / 2] as f64
    } else {
        (values[k / 2 - 1] + values[k / 2]) as f64 / 2.0
    }
}

pub fn savings_sweep(spec: &SweepSpec) -> Result<SweepResult, HarnessError> {
    let r = classical_ramsey(spec.m, spec.n).ok_or_else(|| {
        HarnessError::Config(format!("r({},{}) is not tabulated", spec.m, spec.n))
    })?;
    if let Some(&small) = spec.vertices.iter().find(|&&v| v < r) {
        return Err(HarnessError::Config(format!(
            "N={small} is below r({},{}) = {r}; Builder cannot force a win",
            spec.m, spec.n
        )));
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &vertices in &spec.vertices {
        let config = GameConfig::new(spec.m, spec.n, vertices)?;
        for painter in &spec.painters {
            let mut moves = Vec::new();
            let mut savings = Vec::new();
            for seed in 0..spec.repeats {
                let mut b = spec.builder.build(&config)?;
                let mut p = painter.build(&config, seed)?;
                let (_, report) = play(config, b.as_mut(), p.as_mut(), None)?;
                moves.push(report.moves_used);
                savings.push(report.savings);
                rows.push(SweepRow {
                    vertices,
                    painter: painter.to_string(),
                    seed,
                    moves: report.moves_used,
                    savings: report.savings,
                });
            }
            summaries.push(SweepSummary {
                vertices,
                painter: painter.to_string(),
                median_moves: median(&mut moves),
                median_savings: median(&mut savings),
            });
        }
    }
    Ok(SweepResult { rows, summaries })
}

/// A position on `config.vertices` vertices where `p` and `q` are unbuilt,
/// every other pair is built, every pair of `p` is independent of every
/// pair of `q`, and no target clique exists yet. Found by backtracking over
/// the built pairs in colex order; `None` if no such coloring exists.
pub fn cross_independent_fixture(config: GameConfig, p: &[Pair], q: &[Pair]) -> Option<BichromaticGraph> {
    let n = config.vertices;
    let reserved: Vec<Pair> = p.iter().chain(q).copied().collect();
    let pairs: Vec<Pair> = (0..n)
        .flat_map(|v| (0..v).map(move |u| Pair::new(u, v)))
        .filter(|pr| !reserved.contains(pr))
        .collect();
    fn rec(
        g: &mut BichromaticGraph,
        pairs: &[Pair],
        config: &GameConfig,
        p: &[Pair],
        q: &[Pair],
    ) -> bool {
        let Some((&pr, rest)) = pairs.split_first() else {
            return p.iter().all(|&a| q.iter().all(|&b| g.are_independent(a, b)));
        };
        for c in Color::BOTH {
            if g.clique_through_if(pr.lo, pr.hi, c, config.target(c)).is_none() {
                g.build_edge(pr.lo, pr.hi, c).expect("unbuilt");
                if rec(g, rest, config, p, q) {
                    return true;
                }
                g.unbuild_edge(pr.lo, pr.hi);
            }
        }
        false
    }
    let mut g = BichromaticGraph::new(n).ok()?;
    rec(&mut g, &pairs, &config, p, q).then_some(g)
}

/// The two standard fixtures on `(3,3;6)`: one pair against one pair, and a
/// two-pair path against a triangle of three pairs.
pub fn standard_fixtures() -> Vec<(usize, usize, BichromaticGraph)> {
    let config = GameConfig::new(3, 3, 6).expect("valid");
    let one_one = (vec![Pair::new(0, 1)], vec![Pair::new(2, 3)]);
    let two_three = (
        vec![Pair::new(0, 1), Pair::new(1, 2)],
        vec![Pair::new(3, 4), Pair::new(4, 5), Pair::new(3, 5)],
    );
    [one_one, two_three]
        .into_iter()
        .map(|(p, q)| {
            let g = cross_independent_fixture(config, &p, &q).expect("fixture coloring exists");
            (p.len(), q.len(), g)
        })
        .collect()
}

/// Predicate deciding whether two pairs are independent.
pub type IndependencePredicate = fn(&BichromaticGraph, Pair, Pair) -> bool;

fn real_independence(g: &BichromaticGraph, p: Pair, q: Pair) -> bool {
    g.are_independent(p, q)
}

/// Independence with the color condition weakened from "a red and a blue
/// cross edge" to "a red or a blue cross edge". Used to show the fuzz
/// catches a broken predicate.
pub fn mutated_independence(g: &BichromaticGraph, p: Pair, q: Pair) -> bool {
    if p.shares_vertex(&q) || g.is_built(p.lo, p.hi) || g.is_built(q.lo, q.hi) {
        return false;
    }
    [p.lo, p.hi]
        .iter()
        .any(|&x| [q.lo, q.hi].iter().any(|&y| g.is_built(x, y)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FuzzStats {
    pub graphs: usize,
    pub independent_pairs: usize,
    pub completions_checked: usize,
    pub violations: usize,
}

/// Random graphs on 4 to 12 vertices; for every pair of pairs the predicate
/// calls independent, checks that no completion puts all four endpoints in
/// one monochromatic clique (all six pairs among them in one color).
/// Completions are sampled for every graph; on at most 8 vertices every
/// coloring of the unbuilt pairs among the four endpoints is also tried,
/// which covers all completions as far as this property is concerned.
pub fn independence_fuzz(graphs: usize, seed: u64, predicate: IndependencePredicate) -> FuzzStats {
    const SAMPLED_COMPLETIONS: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = FuzzStats { graphs, ..FuzzStats::default() };
    for _ in 0..graphs {
        let n = rng.random_range(4..=12);
        let unbuilt_p = rng.random_range(0.2..0.7);
        let mut g = BichromaticGraph::new(n).expect("n ≥ 4");
        for v in 0..n {
            for u in 0..v {
                if !rng.random_bool(unbuilt_p) {
                    let c = if rng.random_bool(0.5) { Color::Red } else { Color::Blue };
                    g.build_edge(u, v, c).expect("fresh");
                }
            }
        }
        let unbuilt: Vec<Pair> = g.unbuilt_pairs().collect();
        let completions: Vec<BichromaticGraph> = (0..SAMPLED_COMPLETIONS)
            .map(|_| {
                let mut h = g.clone();
                for p in &unbuilt {
                    let c = if rng.random_bool(0.5) { Color::Red } else { Color::Blue };
                    h.build_edge(p.lo, p.hi, c).expect("unbuilt");
                }
                h
            })
            .collect();
        for (i, &p) in unbuilt.iter().enumerate() {
            for &q in &unbuilt[i + 1..] {
                if !predicate(&g, p, q) {
                    continue;
                }
                stats.independent_pairs += 1;
                let four = [p.lo, p.hi, q.lo, q.hi];
                for h in &completions {
                    stats.completions_checked += 1;
                    if four_in_one_color(&four, |u, v| h.color(u, v)) {
                        stats.violations += 1;
                    }
                }
                if n <= 8 {
                    let (checked, bad) = exhaustive_four(&g, &four);
                    stats.completions_checked += checked;
                    stats.violations += bad;
                }
            }
        }
    }
    stats
}

fn four_in_one_color(four: &[usize; 4], color: impl Fn(usize, usize) -> Option<Color>) -> bool {
    let mut seen: Option<Color> = None;
    for i in 0..4 {
        for j in i + 1..4 {
            match (color(four[i], four[j]), seen) {
                (None, _) => return false,
                (Some(c), None) => seen = Some(c),
                (Some(c), Some(s)) if c != s => return false,
                _ => {}
            }
        }
    }
    true
}

fn exhaustive_four(g: &BichromaticGraph, four: &[usize; 4]) -> (usize, usize) {
    let open: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (four[i], four[j])))
        .filter(|&(u, v)| !g.is_built(u, v))
        .collect();
    let mut bad = 0;
    for mask in 0u32..1 << open.len() {
        let color = |u: usize, v: usize| {
            g.color(u, v).or_else(|| {
                let k = open.iter().position(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))?;
                Some(if mask & 1 << k != 0 { Color::Red } else { Color::Blue })
            })
        };
        if four_in_one_color(four, color) {
            bad += 1;
        }
    }
    (1 << open.len(), bad)
}

/// Random positions on `config.vertices` vertices for oracle comparisons.
pub fn random_position(vertices: usize, rng: &mut impl Rng) -> BichromaticGraph {
    let mut g = BichromaticGraph::new(vertices).expect("vertices ≥ 1");
    let built = rng.random_range(0.0..0.8);
    for v in 0..vertices {
        for u in 0..v {
            if rng.random_bool(built) {
                let c = if rng.random_bool(0.5) { Color::Red } else { Color::Blue };
                g.build_edge(u, v, c).expect("fresh");
            }
        }
    }
    g
}

/// Mismatches between the memoized solver and the oracle over every
/// `(m, n; N)` with `m, n ∈ {2, 3}` and `2 ≤ N ≤ 5`, from the empty graph
/// and `samples` random positions each. Returns (comparisons, mismatches).
pub fn oracle_equivalence(samples: usize, seed: u64) -> Result<(usize, Vec<String>), HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for m in 2..=3 {
        for n in 2..=3 {
            for vertices in 2..=5 {
                let config = GameConfig::new(m, n, vertices)?;
                let mut solver = Solver::new(config)?;
                let positions = std::iter::once(BichromaticGraph::new(vertices).expect("n ≥ 2"))
                    .chain((0..samples).map(|_| random_position(vertices, &mut rng)));
                for g in positions {
                    compared += 1;
                    let fast = solver.value_of(&g)?;
                    let slow = brute_value(&g, config)?;
                    if fast != slow {
                        mismatches.push(format!("{config} {:?}: solver {fast:?}, oracle {slow:?}", g.to_text()));
                    }
                }
            }
        }
    }
    Ok((compared, mismatches))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Replace the independence predicate by [`mutated_independence`].
    WeakIndependence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// Runs the property batch. `quick` shrinks sample counts and skips the
/// `3^15`-state retrograde table.
pub fn verify_all(quick: bool, mutation: Mutation) -> VerifyReport {
    let mut items = Vec::new();
    let mut run = |name: &str, f: &mut dyn FnMut() -> Result<(bool, String), HarnessError>| {
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        items.push(VerifyItem {
            name: name.to_string(),
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        });
    };

    run("pairwise-fixture", &mut || {
        let config = GameConfig::new(3, 3, 6)?;
        let mut details = Vec::new();
        let mut ok = true;
        for (s, t, g) in standard_fixtures() {
            let saved = savings_of(&g, config)?;
            let oracle = brute_value(&g, config)?.ok_or(SolverError::Unwinnable)?;
            let consistent = saved == g.unbuilt_count() - oracle as usize;
            ok &= consistent && saved >= s.min(t);
            details.push(format!("({s},{t}): savings {saved}"));
        }
        Ok((ok, details.join(", ")))
    });

    let predicate: IndependencePredicate = match mutation {
        Mutation::None => real_independence,
        Mutation::WeakIndependence => mutated_independence,
    };
    run("independence-exclusion-fuzz", &mut || {
        let stats = independence_fuzz(if quick { 1_000 } else { 10_000 }, 7, predicate);
        Ok((
            stats.violations == 0,
            format!(
                "{} graphs, {} independent pairs, {} completions, {} violations",
                stats.graphs, stats.independent_pairs, stats.completions_checked, stats.violations
            ),
        ))
    });

    run("solver-oracle-equivalence", &mut || {
        let (compared, mismatches) = oracle_equivalence(if quick { 10 } else { 100 }, 11)?;
        Ok((
            mismatches.is_empty(),
            format!("{compared} positions, {} mismatches", mismatches.len()),
        ))
    });

    if !quick {
        run("retrograde-ground-truth", &mut || {
            let config = GameConfig::new(3, 3, 6)?;
            let empty = BichromaticGraph::new(6).expect("6 vertices");
            let table = RetrogradeTable::build(config)?.value_of(&empty)?;
            let search = Solver::new(config)?.value_of(&empty)?;
            let ok = table == search && table.is_some_and(|v| (3..=15).contains(&v));
            Ok((ok, format!("table {table:?}, search {search:?}")))
        });
    }

    run("incidence-identities", &mut || {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let eps = ratio(1, 10);
        let count = if quick { 20 } else { 200 };
        let mut bad = 0;
        for _ in 0..count {
            let n0 = rng.random_range(20..=60);
            let g = random_balanced_instance(n0, eps, &mut rng);
            let w = verify_least_density_halves(&g, eps).map_err(|e| HarnessError::Config(e.to_string()))?;
            let row_sum = |class: std::ops::Range<usize>, other: std::ops::Range<usize>| -> usize {
                class
                    .map(|u| {
                        let r = other.clone().filter(|&v| g.color(u, v) == Some(Color::Red)).count();
                        r * (n0 - r)
                    })
                    .sum()
            };
            let identities = w.e_hl == row_sum(0..n0, n0..2 * n0) && w.e_hr == row_sum(n0..2 * n0, 0..n0);
            if !identities || !w.covered || w.counting_inequality == Some(false) {
                bad += 1;
            }
        }
        let extremes = [two_block_instance(40), half_half_instance(40)]
            .iter()
            .all(|g| verify_least_density_halves(g, eps).is_ok_and(|w| w.dense_incidence));
        Ok((bad == 0 && extremes, format!("{count} instances, {bad} failures, extremes dense: {extremes}")))
    });

    run("kst-conformance", &mut || {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let searches = if quick { 100 } else { 1_000 };
        let mut bad = 0;
        for (s, t) in [(2usize, 2usize), (2, 3)] {
            for _ in 0..searches {
                let m = rng.random_range(s..=12);
                let n = rng.random_range(t..=12);
                let h = random_kst_free(m, n, s, t, &mut rng);
                let bound = kst_bound(m as u64, n as u64, s as u32, t as u64)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                if h.contains_kst(s, t) || !below_kst_bound(h.edge_count(), &bound) {
                    bad += 1;
                }
            }
        }
        let spot = kst_bound(4, 4, 2, 2).map_err(|e| HarnessError::Config(e.to_string()))?;
        let spot_ok = spot == num_rational::BigRational::from_integer(10.into());
        Ok((bad == 0 && spot_ok, format!("{} graphs, {bad} violations, kst(4,4,2,2) = {spot}", 2 * searches)))
    });

    VerifyReport { items }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_the_promised_shape() {
        for (s, t, g) in standard_fixtures() {
            assert_eq!(g.unbuilt_count(), s + t);
            assert!(g.find_mono_clique(Color::Red, 3).is_none());
            assert!(g.find_mono_clique(Color::Blue, 3).is_none());
        }
    }

    #[test]
    fn fuzz_catches_the_mutation() {
        assert_eq!(independence_fuzz(300, 1, real_independence).violations, 0);
        assert!(independence_fuzz(300, 1, mutated_independence).violations > 0);
    }

    #[test]
    fn sweep_accounting_and_csv() {
        let spec = SweepSpec {
            m: 3,
            n: 3,
            vertices: vec![6, 7],
            builder: BuilderSpec::Paper(String::new()),
            painters: vec![PainterSpec::Random(None), PainterSpec::Greedy],
            repeats: 3,
        };
        let res = savings_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 2 * 2 * 3);
        assert_eq!(res.summaries.len(), 4);
        for r in &res.rows {
            assert_eq!(r.moves + r.savings, r.vertices * (r.vertices - 1) / 2);
        }
        let csv = res.to_csv().unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(reader.headers().unwrap(), SWEEP_CSV_HEADER.as_slice());
        assert_eq!(reader.records().count(), 16);
        assert_eq!(res, savings_sweep(&spec).unwrap());
        let low = SweepSpec { vertices: vec![5], ..spec.clone() };
        assert!(savings_sweep(&low).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3, 1, 2]), 2.0);
        assert_eq!(median(&mut [4, 1, 2, 3]), 2.5);
    }

    #[test]
    fn run_game_is_reproducible() {
        let run = GameRun {
            config: GameConfig::new(3, 3, 10).unwrap(),
            builder: "paper".into(),
            painter: "random".into(),
            seed: 5,
        };
        let (t1, r1) = run_game(&run).unwrap();
        let (t2, r2) = run_game(&run).unwrap();
        assert_eq!((t1.to_text(), &r1), (t2.to_text(), &r2));
        assert_eq!(r1.moves + r1.savings, 45);
    }
}
