//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_core::builders::{PaperBuilder, PaperStrategyParams};
use ramsey_core::game::{play, savings_lower_bound_check, GameConfig, GameStatus, PainterPolicy};
use ramsey_core::harness::{
    independence_fuzz, mutated_independence, oracle_equivalence, savings_sweep, standard_fixtures,
    SweepSpec,
};
use ramsey_core::lab::{
    below_kst_bound, half_half_instance, kst_bound, random_balanced_instance, random_kst_free,
    two_block_instance, verify_least_density_halves,
};
use ramsey_core::painters::{
    AlternatingPainter, BalancedPainter, ConstantPainter, GreedyPainter, MinimaxPainter,
    RandomPainter,
};
use ramsey_core::policy::{BuilderSpec, PainterSpec};
use ramsey_core::solver::{brute_value, savings_of, RetrogradeTable, Solver};
use ramsey_core::{BichromaticGraph, Color, Rational};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn cfg(m: usize, n: usize, vertices: usize) -> GameConfig {
    GameConfig::new(m, n, vertices).expect("valid config")
}

fn small_values() -> Outcome {
    let limit = Duration::from_secs(1);
    let mut cases = Vec::new();
    cases.extend((2..=6).map(|v| (2, 2, v, 1)));
    cases.extend((3..=6).map(|v| (2, 3, v, 3)));
    cases.extend((4..=6).map(|v| (2, 4, v, 6)));
    let mut slowest = Duration::ZERO;
    for &(m, n, v, want) in &cases {
        let start = Instant::now();
        let got = Solver::new(cfg(m, n, v))
            .and_then(|mut s| s.value_of(&BichromaticGraph::new(v).unwrap()));
        let took = start.elapsed();
        slowest = slowest.max(took);
        if got != Ok(Some(want)) || took > limit {
            return outcome(false, format!("({m},{n};{v}) gave {got:?} in {took:?}, want {want} under 1 s"));
        }
    }
    outcome(true, format!("{} configurations exact, slowest {slowest:.2?}", cases.len()))
}

fn oracle() -> Outcome {
    let start = Instant::now();
    match oracle_equivalence(100, 20_240_601) {
        Ok((compared, mismatches)) => {
            let took = start.elapsed();
            let ok = mismatches.is_empty() && took <= Duration::from_secs(300);
            let first = mismatches.first().cloned().unwrap_or_default();
            outcome(ok, format!("{compared} positions, {} mismatches, {took:.2?} {first}", mismatches.len()))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn peak_memory_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn retrograde() -> Outcome {
    let config = cfg(3, 3, 6);
    let empty = BichromaticGraph::new(6).unwrap();
    let start = Instant::now();
    let table = match RetrogradeTable::build(config) {
        Ok(t) => t,
        Err(e) => return outcome(false, e.to_string()),
    };
    let retro = table.value_of(&empty);
    let took = start.elapsed();
    let search = Solver::new(config).and_then(|mut s| s.value_of(&empty));
    let peak = peak_memory_kib();
    let in_range = matches!(retro, Ok(Some(v)) if (3..=15).contains(&v));
    let ok = table.len() == 3usize.pow(15)
        && in_range
        && retro == search
        && took <= Duration::from_secs(600)
        && peak.is_some_and(|kib| kib <= 512 * 1024);
    outcome(
        ok,
        format!(
            "{} states, retrograde {retro:?}, search {search:?}, {took:.2?}, peak {} MiB",
            table.len(),
            peak.map_or("?".into(), |k| (k / 1024).to_string())
        ),
    )
}

fn fixtures() -> Outcome {
    let config = cfg(3, 3, 6);
    let mut details = Vec::new();
    let mut ok = true;
    for (s, t, g) in standard_fixtures() {
        let fast = savings_of(&g, config);
        let slow = brute_value(&g, config)
            .ok()
            .flatten()
            .map(|v| g.unbuilt_count() - v as usize);
        let fine = matches!((&fast, slow), (Ok(a), Some(b)) if *a == b && b >= s.min(t));
        ok &= fine;
        details.push(format!("({s},{t}) savings {fast:?} oracle {slow:?}"));
    }
    outcome(ok, details.join(", "))
}

fn independence() -> Outcome {
    let stats = independence_fuzz(10_000, 7, |g, p, q| g.are_independent(p, q));
    // the fuzz must be able to fail: a weakened predicate has to be caught
    let mutant = independence_fuzz(1_000, 7, mutated_independence);
    outcome(
        stats.violations == 0 && stats.independent_pairs > 0 && mutant.violations > 0,
        format!(
            "{} graphs, {} independent pairs, {} completions, {} violations (weakened predicate: {})",
            stats.graphs, stats.independent_pairs, stats.completions_checked, stats.violations, mutant.violations
        ),
    )
}

fn pipeline() -> Outcome {
    let mut games = 0;
    let mut pairwise = 0;
    for vertices in 6..=30 {
        let config = cfg(3, 3, vertices);
        let total = config.total_pairs();
        let mut pool: Vec<Box<dyn PainterPolicy>> = vec![
            Box::new(ConstantPainter::new(Color::Red)),
            Box::new(ConstantPainter::new(Color::Blue)),
            Box::new(AlternatingPainter),
            Box::new(GreedyPainter),
            Box::new(BalancedPainter),
        ];
        if vertices <= 6 {
            pool.push(Box::new(MinimaxPainter::new(config).unwrap()));
        }
        pool.extend((0..1000).map(|s| Box::new(RandomPainter::new(s)) as Box<dyn PainterPolicy>));
        for painter in &mut pool {
            let mut builder = PaperBuilder::new(PaperStrategyParams::for_vertices(vertices)).unwrap();
            let name = painter.name();
            let fail = |msg: String| outcome(false, format!("N={vertices} vs {name}: {msg}"));
            let (t, report) = match play(config, &mut builder, painter.as_mut(), None) {
                Ok(r) => r,
                Err(e) => return fail(e.to_string()),
            };
            games += 1;
            if !matches!(t.status, GameStatus::BuilderWon { .. }) {
                return fail(format!("ended in {}", t.status.tag()));
            }
            if report.moves_used + report.savings != total {
                return fail(format!("{} moves + {} savings != {total}", report.moves_used, report.savings));
            }
            if let Some(o) = builder.pairwise_outcome() {
                if o.built.is_some() && !o.other_touched {
                    pairwise += 1;
                    if !savings_lower_bound_check(&report, o.p_len, o.q_len) {
                        return fail(format!("savings {} < min({}, {})", report.savings, o.p_len, o.q_len));
                    }
                }
            }
        }
    }
    outcome(true, format!("{games} games won, accounting exact, {pairwise} pairwise endgames meet min(|P|,|Q|)"))
}

fn least_density() -> Outcome {
    let eps = Rational::new(1, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut few = 0;
    for i in 0..200 {
        let n0 = rng.random_range(20..=60);
        let g = random_balanced_instance(n0, eps, &mut rng);
        match verify_least_density_halves(&g, eps) {
            Ok(w) => {
                if w.counting_inequality == Some(false) {
                    return outcome(false, format!("instance {i} (N0={n0}): e_HR = {} below the count", w.e_hr));
                }
                few += usize::from(w.few_balanced);
            }
            Err(e) => return outcome(false, format!("instance {i}: {e}")),
        }
    }
    if few == 0 {
        return outcome(false, "no instance had few balanced vertices; the counting branch went unchecked");
    }
    let mut extremes = Vec::new();
    for (name, g) in [("two-block", two_block_instance(40)), ("half-half", half_half_instance(40))] {
        match verify_least_density_halves(&g, eps) {
            Ok(w) if w.dense_incidence => {
                let bound = &w.delta * BigRational::from_integer(BigInt::from(40u32.pow(3)));
                extremes.push(format!("{name} max(e_HL,e_HR)={} vs δN0³≈{:.3}", w.e_hl.max(w.e_hr), ratio_f64(&bound)));
            }
            Ok(w) => return outcome(false, format!("{name}: e_HL={} e_HR={} below δN0³", w.e_hl, w.e_hr)),
            Err(e) => return outcome(false, format!("{name}: {e}")),
        }
    }
    outcome(true, format!("200 instances, {few} with few balanced vertices, 0 violations; {}", extremes.join("; ")))
}

fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn kst() -> Outcome {
    let spot = kst_bound(4, 4, 2, 2).map(|b| b == BigRational::from_integer(10.into()));
    if spot != Ok(true) {
        return outcome(false, format!("kst_bound(4,4,2,2) = {:?}, want 10", kst_bound(4, 4, 2, 2)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut graphs = 0;
    for (s, t) in [(2usize, 2usize), (2, 3)] {
        for _ in 0..1000 {
            let m = rng.random_range(s..=12);
            let n = rng.random_range(t..=12);
            let g = random_kst_free(m, n, s, t, &mut rng);
            let bound = kst_bound(m as u64, n as u64, s as u32, t as u64).unwrap();
            if g.contains_kst(s, t) || !below_kst_bound(g.edge_count(), &bound) {
                return outcome(
                    false,
                    format!("{m}x{n} K_{{{s},{t}}}-free graph with {} edges, bound {bound}", g.edge_count()),
                );
            }
            graphs += 1;
        }
    }
    outcome(true, format!("{graphs} graphs below the bound, kst_bound(4,4,2,2) = 10"))
}

fn savings_curve() -> Outcome {
    let spec = SweepSpec {
        m: 3,
        n: 3,
        vertices: (6..=30).collect(),
        builder: BuilderSpec::Paper(String::new()),
        painters: vec![PainterSpec::Random(None)],
        repeats: 50,
    };
    let result = match savings_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    if let Some(r) = result.rows.iter().find(|r| r.moves + r.savings != r.vertices * (r.vertices - 1) / 2) {
        return outcome(false, format!("accounting broken at N={} seed={}", r.vertices, r.seed));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("savings_sweep.csv");
    if let Err(e) = result.to_csv().map_err(|e| e.to_string()).and_then(|csv| {
        std::fs::write(&path, csv).map_err(|e| e.to_string())
    }) {
        return outcome(false, e);
    }
    let median = |v: usize| {
        result
            .summaries
            .iter()
            .find(|s| s.vertices == v)
            .map_or(f64::NAN, |s| s.median_savings)
    };
    outcome(
        true,
        format!(
            "{} runs written to {}; median savings {} at N=10, {} at N=30 (asymptotic rate not checked)",
            result.rows.len(),
            path.display(),
            median(10),
            median(30)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("small-values", small_values),
        ("oracle-equivalence", oracle),
        ("retrograde-ground-truth", retrograde),
        ("pairwise-fixtures", fixtures),
        ("independence-exclusion", independence),
        ("pipeline-totality", pipeline),
        ("least-density", least_density),
        ("kst-conformance", kst),
        ("savings-curve", savings_curve),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {name}: {} [{:.2?}]", o.detail, start.elapsed());
        failed += usize::from(!o.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
