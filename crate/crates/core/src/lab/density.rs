use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::{Serialize, Serializer};

use super::LabError;
use crate::graph::{BichromaticGraph, Color, IncidenceGraph, Side};
use crate::rational::Rational;

fn ser_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Constants and counts of the incidence-density dichotomy on one
/// ε-balanced complete bipartite instance with classes `V₁`, `V₂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeastDensityWitness {
    pub n0: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub epsilon: BigRational,
    /// `ε⁵ / (2(1+ε))`
    #[serde(serialize_with = "ser_ratio")]
    pub delta: BigRational,
    /// `ε²`
    #[serde(serialize_with = "ser_ratio")]
    pub mu: BigRational,
    /// `ε / (2(1+ε))`
    #[serde(serialize_with = "ser_ratio")]
    pub nu: BigRational,
    /// Vertices of `V₁` with at least `μN₀` neighbors of each color.
    pub balanced_vertices: Vec<usize>,
    /// Vertices of `V₁` with at least `(1−μ)N₀` red neighbors.
    pub s_red: Vec<usize>,
    /// Vertices of `V₁` with at least `(1−μ)N₀` blue neighbors.
    pub s_blue: Vec<usize>,
    pub e_hl: usize,
    pub e_hr: usize,
    /// `max(e_HL, e_HR) ≥ δN₀³`.
    pub dense_incidence: bool,
    /// Every vertex of `V₁` is balanced or in `S_R ∪ S_B`.
    pub covered: bool,
    /// `|balanced| < νN₀`.
    pub few_balanced: bool,
    /// When `few_balanced`: whether `e_HR ≥ |S_R|·|S_B|·(1−2μ)N₀`.
    pub counting_inequality: Option<bool>,
}

/// Computes the witness for the bipartite subgraph between `v1` and `v2`.
/// Pairs inside a class are ignored.
pub fn verify_least_density(
    g: &BichromaticGraph,
    v1: &[usize],
    v2: &[usize],
    epsilon: Rational,
) -> Result<LeastDensityWitness, LabError> {
    let n0 = v1.len();
    if n0 == 0 || v2.len() != n0 {
        return Err(LabError::NotBipartiteComplete(format!(
            "classes must be nonempty and of equal size, got {} and {}",
            v1.len(),
            v2.len()
        )));
    }
    if let Some((u, v)) = v1
        .iter()
        .flat_map(|&u| v2.iter().map(move |&v| (u, v)))
        .find(|&(u, v)| !g.is_built(u, v))
    {
        return Err(LabError::NotBipartiteComplete(format!("cross pair ({u},{v}) is unbuilt")));
    }
    if !g.is_color_balanced(v1, v2, epsilon)? {
        return Err(LabError::NotBalanced(g.red_density(v1, v2)?.to_string()));
    }

    let eps = big(epsilon);
    let one = BigRational::one();
    let two = int(2);
    let delta = eps.pow(5) / (&two * (&one + &eps));
    let mu = eps.pow(2);
    let nu = &eps / (&two * (&one + &eps));
    let n0q = int(n0);

    let red_degree = |u: usize| v2.iter().filter(|&&v| g.color(u, v) == Some(Color::Red)).count();
    let low = &mu * &n0q;
    let high = (&one - &mu) * &n0q;
    let mut balanced = Vec::new();
    let mut s_red = Vec::new();
    let mut s_blue = Vec::new();
    for &u in v1 {
        let r = int(red_degree(u));
        let b = int(n0 - red_degree(u));
        if r >= low && b >= low {
            balanced.push(u);
        }
        if r >= high {
            s_red.push(u);
        }
        if b >= high {
            s_blue.push(u);
        }
    }
    let covered = v1
        .iter()
        .all(|u| balanced.contains(u) || s_red.contains(u) || s_blue.contains(u));

    let e_hl = IncidenceGraph::build(g, v1, v2, Side::Left)?.edge_count();
    let e_hr = IncidenceGraph::build(g, v1, v2, Side::Right)?.edge_count();
    let dense_incidence = int(e_hl.max(e_hr)) >= &delta * n0q.pow(3);
    let few_balanced = int(balanced.len()) < &nu * &n0q;
    let counting_inequality = few_balanced.then(|| {
        int(e_hr) >= int(s_red.len() * s_blue.len()) * (&one - &two * &mu) * &n0q
    });

    Ok(LeastDensityWitness {
        n0,
        epsilon: eps,
        delta,
        mu,
        nu,
        balanced_vertices: balanced,
        s_red,
        s_blue,
        e_hl,
        e_hr,
        dense_incidence,
        covered,
        few_balanced,
        counting_inequality,
    })
}

/// [`verify_least_density`] on a graph whose vertices split into halves
/// `0..N₀` and `N₀..2N₀` and whose built pairs are exactly the cross pairs.
pub fn verify_least_density_halves(
    g: &BichromaticGraph,
    epsilon: Rational,
) -> Result<LeastDensityWitness, LabError> {
    let n = g.vertex_count();
    if !n.is_multiple_of(2) {
        return Err(LabError::NotBipartiteComplete(format!("odd vertex count {n}")));
    }
    let n0 = n / 2;
    if let Some((u, v, _)) = g.edges().find(|&(u, v, _)| (u < n0) == (v < n0)) {
        return Err(LabError::NotBipartiteComplete(format!("pair ({u},{v}) lies inside a class")));
    }
    let v1: Vec<usize> = (0..n0).collect();
    let v2: Vec<usize> = (n0..n).collect();
    verify_least_density(g, &v1, &v2, epsilon)
}

fn bipartite_instance(n0: usize, mut color: impl FnMut(usize, usize) -> Color) -> BichromaticGraph {
    let mut g = BichromaticGraph::new(2 * n0).expect("n0 > 0");
    for i in 0..n0 {
        for j in 0..n0 {
            g.build_edge(i, n0 + j, color(i, j)).expect("fresh pair");
        }
    }
    g
}

/// First half of `V₁` all red, second half all blue (`N₀` even).
pub fn two_block_instance(n0: usize) -> BichromaticGraph {
    bipartite_instance(n0, |i, _| if i < n0 / 2 { Color::Red } else { Color::Blue })
}

/// Every vertex sees exactly half of the other class in each color
/// (`N₀` even).
pub fn half_half_instance(n0: usize) -> BichromaticGraph {
    bipartite_instance(n0, |i, j| if (i + j) % 2 == 0 { Color::Red } else { Color::Blue })
}

/// A random ε-balanced `K_{N₀,N₀}` coloring. Each `V₁` vertex is either
/// monochromatic towards `V₂` or colors its pairs by a uniformly drawn red
/// probability. Half of the samples keep the mixed vertices below `νN₀` on
/// average, so both branches of the dichotomy occur across samples.
pub fn random_balanced_instance(n0: usize, epsilon: Rational, rng: &mut impl Rng) -> BichromaticGraph {
    let v1: Vec<usize> = (0..n0).collect();
    let v2: Vec<usize> = (n0..2 * n0).collect();
    let eps = *epsilon.numer() as f64 / *epsilon.denom() as f64;
    let nu = eps / (2.0 * (1.0 + eps));
    let mix = if rng.random_bool(0.5) {
        rng.random_range(0.0..nu / 2.0)
    } else {
        rng.random_range(0.0..1.0)
    };
    loop {
        let bias: Vec<f64> = (0..n0)
            .map(|_| {
                if rng.random_bool(mix) {
                    rng.random_range(0.0..1.0)
                } else if rng.random_bool(0.5) {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        let g = bipartite_instance(n0, |i, _| {
            if rng.random_bool(bias[i]) {
                Color::Red
            } else {
                Color::Blue
            }
        });
        if g.is_color_balanced(&v1, &v2, epsilon).expect("complete") {
            return g;
        }
    }
}
