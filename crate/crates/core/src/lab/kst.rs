use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::LabError;

/// Fractional bits used when a root is not an exact integer.
const ROOT_PRECISION_BITS: u32 = 40;

/// Kővári–Sós–Turán bound `(t−1)^{1/s}(m−s+1)n^{1−1/s} + (s−1)n` on the
/// edges of a `K_{s,t}`-free bipartite graph with parts of sizes `m` (the
/// side holding the `s` vertices) and `n`.
///
/// The irrational factor `((t−1)n^{s−1})^{1/s}` is exact when it is an
/// integer and otherwise rounded up to a multiple of `2^-40`, so the result
/// never understates the bound. For `s ≥ 2` the bound is strict; for `s = 1`
/// it is attained by graphs of maximum degree `t−1`.
pub fn kst_bound(m: u64, n: u64, s: u32, t: u64) -> Result<BigRational, LabError> {
    if !(1 <= s && s as u64 <= m && 1 <= t && t <= n) {
        return Err(LabError::Domain(format!(
            "need m ≥ s ≥ 1 and n ≥ t ≥ 1, got m={m} n={n} s={s} t={t}"
        )));
    }
    let radicand = BigUint::from(t - 1) * BigUint::from(n).pow(s - 1);
    let root = upper_root(&radicand, s);
    let linear = BigRational::from_integer(((m - s as u64 + 1) as i64).into());
    let tail = BigRational::from_integer((((s as u64 - 1) * n) as i64).into());
    Ok(root * linear + tail)
}

/// Smallest multiple of `2^-40` that is at least `x^{1/s}` (exact when the
/// root is an integer).
fn upper_root(x: &BigUint, s: u32) -> BigRational {
    let r = x.nth_root(s);
    if r.pow(s) == *x {
        return BigRational::from_integer(r.into());
    }
    let scale = BigUint::one() << (ROOT_PRECISION_BITS * s) as usize;
    let scaled = x * scale;
    let mut r = scaled.nth_root(s);
    if r.pow(s) != scaled {
        r += 1u32;
    }
    BigRational::new(r.into(), (BigUint::one() << ROOT_PRECISION_BITS as usize).into())
}

/// A bipartite graph with parts `0..m` (rows) and `0..n` (columns), at most
/// 64 columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub rows: Vec<u64>,
    pub columns: usize,
}

impl BipartiteGraph {
    pub fn empty(m: usize, n: usize) -> Self {
        assert!(n <= 64, "at most 64 columns");
        BipartiteGraph { rows: vec![0; m], columns: n }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] & 1 << v != 0
    }

    /// Whether some `s` rows share at least `t` common columns.
    pub fn contains_kst(&self, s: usize, t: usize) -> bool {
        fn rec(rows: &[u64], s: usize, t: usize, start: usize, common: u64) -> bool {
            if s == 0 {
                return common.count_ones() as usize >= t;
            }
            (start..rows.len()).any(|i| {
                let c = common & rows[i];
                c.count_ones() as usize >= t && rec(rows, s - 1, t, i + 1, c)
            })
        }
        let all = if self.columns == 64 { u64::MAX } else { (1u64 << self.columns) - 1 };
        rec(&self.rows, s, t, 0, all)
    }

    /// Whether adding `(u, v)` would create a `K_{s,t}` through that edge.
    fn edge_creates_kst(&self, u: usize, v: usize, s: usize, t: usize) -> bool {
        fn rec(rows: &[u64], skip: usize, s: usize, t: usize, start: usize, common: u64) -> bool {
            if s == 0 {
                return common.count_ones() as usize >= t;
            }
            (start..rows.len()).filter(|&i| i != skip).any(|i| {
                let c = common & rows[i];
                c.count_ones() as usize >= t && rec(rows, skip, s - 1, t, i + 1, c)
            })
        }
        // the graph is K_{s,t}-free before, so any copy found uses (u, v)
        rec(&self.rows, u, s - 1, t, 0, self.rows[u] | 1 << v)
    }
}

/// A maximal `K_{s,t}`-free bipartite graph on `m × n`, built by inserting
/// the `m·n` cells in random order and keeping every edge that stays free.
pub fn random_kst_free(m: usize, n: usize, s: usize, t: usize, rng: &mut impl Rng) -> BipartiteGraph {
    let mut g = BipartiteGraph::empty(m, n);
    let mut cells: Vec<(usize, usize)> = (0..m).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    cells.shuffle(rng);
    for (u, v) in cells {
        if !g.edge_creates_kst(u, v, s, t) {
            g.rows[u] |= 1 << v;
        }
    }
    g
}

/// `count < bound`.
pub fn below_kst_bound(count: usize, bound: &BigRational) -> bool {
    BigRational::from_integer((count as i64).into()) < *bound
}
