//! Exact rational arithmetic oracles.
//!
//! Weights are either given as exact ratios or taken from a graph's `f64`
//! weights, which convert to rationals without loss. Ranks use fraction-free
//! (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::graph::WeightedGraph;
use crate::spectra::Form;
use crate::topology::{Direction, SignedCycle};

pub type Matrix = Vec<Vec<BigRational>>;

/// Exact masses and conductances aligned with a graph's vertex and edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeights {
    pub masses: Vec<BigRational>,
    pub conductances: Vec<BigRational>,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactWeights {
    /// The exact binary values of the graph's `f64` weights.
    pub fn from_graph(g: &WeightedGraph) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("weights are finite");
        Self {
            masses: g.masses().iter().map(|&m| conv(m)).collect(),
            conductances: g.edges().iter().map(|e| conv(e.conductance)).collect(),
        }
    }

    pub fn from_ratios(masses: &[(i64, i64)], conductances: &[(i64, i64)]) -> Self {
        Self {
            masses: masses.iter().map(|&(p, q)| ratio(p, q)).collect(),
            conductances: conductances.iter().map(|&(p, q)| ratio(p, q)).collect(),
        }
    }

    fn check(&self, g: &WeightedGraph) {
        assert_eq!(self.masses.len(), g.num_vertices(), "one mass per vertex");
        assert_eq!(self.conductances.len(), g.num_edges(), "one conductance per edge");
    }
}

fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![BigRational::zero(); c]; r]
}

/// `Δ₀` entrywise: `(Δ₀)_xy = −c(x,y)/m(x)`, diagonal `Σ c / m(x)`.
pub fn laplacian0(g: &WeightedGraph, w: &ExactWeights) -> Matrix {
    w.check(g);
    let n = g.num_vertices();
    let mut l = zeros(n, n);
    for (e, c) in g.edges().iter().zip(&w.conductances) {
        let (t, h) = (e.tail, e.head);
        let ct = c / &w.masses[t];
        let ch = c / &w.masses[h];
        l[t][t] += &ct;
        l[h][h] += &ch;
        l[t][h] -= ct;
        l[h][t] -= ch;
    }
    l
}

/// `Δ₁ = d ∘ δ` entrywise: column `j` is `d(δ eⱼ)`.
pub fn laplacian1(g: &WeightedGraph, w: &ExactWeights) -> Matrix {
    w.check(g);
    let n = g.num_edges();
    let mut l = zeros(n, n);
    for j in 0..n {
        let mut unit = vec![BigRational::zero(); n];
        unit[j] = BigRational::one();
        let col = difference(g, &coboundary(g, w, &unit));
        for (i, v) in col.into_iter().enumerate() {
            l[i][j] = v;
        }
    }
    l
}

pub fn laplacian(g: &WeightedGraph, w: &ExactWeights, form: Form) -> Matrix {
    match form {
        Form::Vertex => laplacian0(g, w),
        Form::Edge => laplacian1(g, w),
    }
}

pub fn difference(g: &WeightedGraph, f: &[BigRational]) -> Vec<BigRational> {
    g.edges().iter().map(|e| &f[e.head] - &f[e.tail]).collect()
}

/// Exact `δφ`.
pub fn coboundary(g: &WeightedGraph, w: &ExactWeights, phi: &[BigRational]) -> Vec<BigRational> {
    w.check(g);
    let mut out = vec![BigRational::zero(); g.num_vertices()];
    for ((e, c), p) in g.edges().iter().zip(&w.conductances).zip(phi) {
        let flux = c * p;
        out[e.head] += &flux;
        out[e.tail] -= flux;
    }
    out.into_iter()
        .zip(&w.masses)
        .map(|(v, m)| v / m)
        .collect()
}

/// `φ(e) = ±1/c(e)` along the cycle, zero elsewhere, in exact arithmetic.
pub fn harmonic_cycle_form(g: &WeightedGraph, w: &ExactWeights, cycle: &SignedCycle) -> Vec<BigRational> {
    w.check(g);
    let mut phi = vec![BigRational::zero(); g.num_edges()];
    for &(e, dir) in &cycle.steps {
        let inv = w.conductances[e].recip();
        phi[e] = match dir {
            Direction::Forward => inv,
            Direction::Backward => -inv,
        };
    }
    phi
}

/// Rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    // Clear denominators row by row; scaling a row does not change the rank.
    let mut rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    bareiss_rank(&mut rows)
}

fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

pub fn kernel_dim(g: &WeightedGraph, w: &ExactWeights, form: Form) -> usize {
    let m = laplacian(g, w, form);
    m.len() - rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), ratio(1, 1)],
        ];
        assert_eq!(rank(&m), 1);
        let id = vec![
            vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 7)],
            vec![ratio(0, 1), ratio(2, 1), ratio(0, 1)],
        ];
        assert_eq!(rank(&id), 3);
    }

    #[test]
    fn c4_incidence_rank_is_three() {
        let g = WeightedGraph::simple(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d: Matrix = g
            .edges()
            .iter()
            .map(|e| {
                (0..4)
                    .map(|v| {
                        if v == e.head {
                            ratio(1, 1)
                        } else if v == e.tail {
                            ratio(-1, 1)
                        } else {
                            ratio(0, 1)
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rank(&d), 3);
    }

    #[test]
    fn weighted_triangle_form_is_exactly_closed() {
        let g = WeightedGraph::from_parts(vec![1.0; 3], &[(0, 1, 1.0), (1, 2, 2.0), (2, 0, 4.0)]).unwrap();
        let w = ExactWeights::from_graph(&g);
        let cycle = SignedCycle::new((0..3).map(|e| (e, Direction::Forward)).collect());
        let phi = harmonic_cycle_form(&g, &w, &cycle);
        assert_eq!(phi, vec![ratio(1, 1), ratio(1, 2), ratio(1, 4)]);
        assert!(coboundary(&g, &w, &phi).iter().all(Zero::is_zero));
    }

    #[test]
    fn exact_kernels_of_k4() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((i, j, 1.0));
            }
        }
        let g = WeightedGraph::from_parts(vec![1.0; 4], &edges).unwrap();
        let w = ExactWeights::from_graph(&g);
        assert_eq!(kernel_dim(&g, &w, Form::Vertex), 1);
        assert_eq!(kernel_dim(&g, &w, Form::Edge), 3);
    }
}
