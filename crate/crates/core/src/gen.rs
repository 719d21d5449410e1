//! Seeded random graph generators used by the property suites and the demo.
//!
//! Weights are drawn as small-denominator rationals `p/q` so that the exact
//! oracles in [`crate::exact`] can use the true values, not the `f64`
//! approximations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact::{ratio, ExactWeights};
use crate::graph::WeightedGraph;

/// A generated graph with its exact weights.
#[derive(Debug, Clone)]
pub struct RationalGraph {
    pub graph: WeightedGraph,
    pub exact: ExactWeights,
}

/// Rational `p/q` uniformly among those with `q ≤ max_den` in `[lo, hi]`,
/// where `lo = lo_num/lo_den` and so on.
fn rational_in<R: Rng + ?Sized>(rng: &mut R, max_den: i64, lo: (i64, i64), hi: (i64, i64)) -> (i64, i64) {
    let q = rng.random_range(1..=max_den);
    // ceil(lo * q) ..= floor(hi * q)
    let p_lo = (lo.0 * q + lo.1 - 1) / lo.1;
    let p_hi = hi.0 * q / hi.1;
    (rng.random_range(p_lo..=p_hi), q)
}

/// Options for [`random_graph`].
#[derive(Debug, Clone, Copy)]
pub struct GraphSpec {
    pub vertices: usize,
    /// Probability of each non-tree pair becoming an edge.
    pub extra_edge_prob: f64,
    /// Number of components; vertices are dealt round-robin.
    pub components: usize,
    /// Weight range as `(num, den)` bounds, inclusive.
    pub weight_lo: (i64, i64),
    pub weight_hi: (i64, i64),
    pub max_den: i64,
    /// Draw masses as well as conductances; otherwise masses are 1.
    pub random_masses: bool,
}

impl GraphSpec {
    pub fn connected(vertices: usize) -> Self {
        Self {
            vertices,
            extra_edge_prob: 0.3,
            components: 1,
            weight_lo: (1, 2),
            weight_hi: (3, 1),
            max_den: 6,
            random_masses: true,
        }
    }
}

/// A random graph with the requested number of components: a random spanning
/// tree per component plus independent extra edges inside components. Edge
/// orientation and order are shuffled.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, spec: &GraphSpec) -> RationalGraph {
    assert!(spec.components >= 1 && spec.components <= spec.vertices.max(1));
    let n = spec.vertices;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); spec.components];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for (i, v) in order.into_iter().enumerate() {
        groups[i % spec.components].push(v);
    }

    let mut pairs = Vec::new();
    for group in &groups {
        for k in 1..group.len() {
            let parent = group[rng.random_range(0..k)];
            pairs.push((parent, group[k]));
        }
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let (x, y) = (group[a], group[b]);
                let present = pairs
                    .iter()
                    .any(|&(s, t)| (s, t) == (x, y) || (s, t) == (y, x));
                if !present && rng.random_bool(spec.extra_edge_prob) {
                    pairs.push((x, y));
                }
            }
        }
    }
    pairs.shuffle(rng);
    for p in &mut pairs {
        if rng.random_bool(0.5) {
            *p = (p.1, p.0);
        }
    }

    let draw = |rng: &mut R| rational_in(rng, spec.max_den, spec.weight_lo, spec.weight_hi);
    let masses: Vec<(i64, i64)> = (0..n)
        .map(|_| if spec.random_masses { draw(rng) } else { (1, 1) })
        .collect();
    let conductances: Vec<(i64, i64)> = pairs.iter().map(|_| draw(rng)).collect();

    let as_f64 = |(p, q): (i64, i64)| p as f64 / q as f64;
    let edges: Vec<(usize, usize, f64)> = pairs
        .iter()
        .zip(&conductances)
        .map(|(&(t, h), &c)| (t, h, as_f64(c)))
        .collect();
    let graph = WeightedGraph::from_parts(masses.iter().map(|&m| as_f64(m)).collect(), &edges)
        .expect("generated graphs are valid");
    let exact = ExactWeights {
        masses: masses.iter().map(|&(p, q)| ratio(p, q)).collect(),
        conductances: conductances.iter().map(|&(p, q)| ratio(p, q)).collect(),
    };
    RationalGraph { graph, exact }
}
