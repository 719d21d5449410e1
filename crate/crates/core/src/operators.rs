//! The difference operator `d`, its weighted adjoint `δ`, and the Laplacians
//! `Δ₀ = δd` on vertex functions and `Δ₁ = dδ` on edge 1-forms.
//!
//! Vertex functions live in `l²(V, m)` with `⟨f, g⟩ = Σ m(x) f(x) g(x)`.
//! 1-forms are stored on canonical edges only; the value on a reversed edge is
//! the negation, so `⟨φ, ψ⟩ = ½ Σ_E c φ ψ` reduces to `Σ_{E⁺} c φ ψ`.
//!
//! Dense assembly is capped at [`DENSE_LIMIT`] rows; larger problems use the
//! matrix-free `apply` functions.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::graph::WeightedGraph;

/// Largest operator dimension assembled as a dense matrix.
pub const DENSE_LIMIT: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0:?} is not a Laplacian; only Δ₀ and Δ₁ can be symmetrized")]
    NotALaplacian(OperatorKind),
    #[error("operator of dimension {size} exceeds the dense limit {limit}; use the matrix-free path")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    /// `d : l²(V) → l²(E)`
    Difference,
    /// `δ : l²(E) → l²(V)`
    Coboundary,
    Laplacian0,
    Laplacian1,
}

impl OperatorKind {
    pub fn domain(self) -> Space {
        match self {
            OperatorKind::Difference | OperatorKind::Laplacian0 => Space::Vertex,
            OperatorKind::Coboundary | OperatorKind::Laplacian1 => Space::Edge,
        }
    }

    pub fn codomain(self) -> Space {
        match self {
            OperatorKind::Coboundary | OperatorKind::Laplacian0 => Space::Vertex,
            OperatorKind::Difference | OperatorKind::Laplacian1 => Space::Edge,
        }
    }
}

/// A 0-form: one real value per vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexFunction {
    pub values: Vec<f64>,
}

/// A 1-form: one real value per canonical edge; reversed edges carry the
/// negated value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeForm {
    pub values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    fn check(&self, g: &WeightedGraph) -> Result<(), OperatorError> {
        expect_len(g.num_vertices(), self.values.len())
    }
}

impl EdgeForm {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    fn check(&self, g: &WeightedGraph) -> Result<(), OperatorError> {
        expect_len(g.num_edges(), self.values.len())
    }
}

fn expect_len(expected: usize, found: usize) -> Result<(), OperatorError> {
    if expected == found {
        Ok(())
    } else {
        Err(OperatorError::DimensionMismatch { expected, found })
    }
}

pub fn inner_vertex(
    g: &WeightedGraph,
    f: &VertexFunction,
    h: &VertexFunction,
) -> Result<f64, OperatorError> {
    f.check(g)?;
    h.check(g)?;
    Ok(g.masses()
        .iter()
        .zip(f.values.iter().zip(&h.values))
        .map(|(m, (a, b))| m * a * b)
        .sum())
}

pub fn inner_edge(g: &WeightedGraph, phi: &EdgeForm, psi: &EdgeForm) -> Result<f64, OperatorError> {
    phi.check(g)?;
    psi.check(g)?;
    Ok(g.edges()
        .iter()
        .zip(phi.values.iter().zip(&psi.values))
        .map(|(e, (a, b))| e.conductance * a * b)
        .sum())
}

pub fn norm_vertex(g: &WeightedGraph, f: &VertexFunction) -> Result<f64, OperatorError> {
    inner_vertex(g, f, f).map(f64::sqrt)
}

pub fn norm_edge(g: &WeightedGraph, phi: &EdgeForm) -> Result<f64, OperatorError> {
    inner_edge(g, phi, phi).map(f64::sqrt)
}

/// `df(e) = f(e⁺) − f(e⁻)`.
pub fn difference_apply(g: &WeightedGraph, f: &VertexFunction) -> Result<EdgeForm, OperatorError> {
    f.check(g)?;
    Ok(EdgeForm::new(
        g.edges()
            .iter()
            .map(|e| f.values[e.head] - f.values[e.tail])
            .collect(),
    ))
}

/// `δφ(x) = (1/m(x)) Σ_{e⁺ = x} c(e) φ(e)`, the sum running over both
/// orientations; a canonical edge leaving `x` enters with a minus sign.
pub fn coboundary_apply(g: &WeightedGraph, phi: &EdgeForm) -> Result<VertexFunction, OperatorError> {
    phi.check(g)?;
    let mut out = vec![0.0; g.num_vertices()];
    for (e, &value) in g.edges().iter().zip(&phi.values) {
        let flux = e.conductance * value;
        out[e.head] += flux;
        out[e.tail] -= flux;
    }
    for (v, m) in out.iter_mut().zip(g.masses()) {
        *v /= m;
    }
    Ok(VertexFunction::new(out))
}

/// Matrix-free `Δ₀ f = δ(df)`.
pub fn laplacian0_apply(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction, OperatorError> {
    coboundary_apply(g, &difference_apply(g, f)?)
}

/// Matrix-free `Δ₁ φ = d(δφ)`.
pub fn laplacian1_apply(g: &WeightedGraph, phi: &EdgeForm) -> Result<EdgeForm, OperatorError> {
    difference_apply(g, &coboundary_apply(g, phi)?)
}

/// A dense operator with the diagonal weights of the inner product on its
/// domain (`m` for vertex spaces, `c` for edge spaces).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub matrix: DMatrix<f64>,
    pub domain_weights: Vec<f64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// MatrixMarket coordinate format, 1-based indices, explicit zeros omitted.
    pub fn to_matrix_market(&self) -> String {
        let (r, c) = self.matrix.shape();
        let entries: Vec<_> = (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .filter(|&(i, j)| self.matrix[(i, j)] != 0.0)
            .collect();
        let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
        let _ = writeln!(out, "{r} {c} {}", entries.len());
        for (i, j) in entries {
            let _ = writeln!(out, "{} {} {}", i + 1, j + 1, self.matrix[(i, j)]);
        }
        out
    }
}

fn check_dense(size: usize) -> Result<(), OperatorError> {
    if size > DENSE_LIMIT {
        Err(OperatorError::TooLarge {
            size,
            limit: DENSE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Matrix of `d`: one row per canonical edge, `+1` at the head, `−1` at the tail.
pub fn incidence(g: &WeightedGraph) -> Result<OperatorMatrix, OperatorError> {
    check_dense(g.num_edges().max(g.num_vertices()))?;
    let mut d = DMatrix::zeros(g.num_edges(), g.num_vertices());
    for (i, e) in g.edges().iter().enumerate() {
        d[(i, e.head)] = 1.0;
        d[(i, e.tail)] = -1.0;
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::Difference,
        matrix: d,
        domain_weights: g.masses().to_vec(),
    })
}

/// Matrix of `δ = M⁻¹ Dᵀ C`.
pub fn coboundary(g: &WeightedGraph) -> Result<OperatorMatrix, OperatorError> {
    let d = incidence(g)?.matrix;
    let mut delta = d.transpose();
    for (j, e) in g.edges().iter().enumerate() {
        delta.column_mut(j).scale_mut(e.conductance);
    }
    for (i, m) in g.masses().iter().enumerate() {
        delta.row_mut(i).unscale_mut(*m);
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::Coboundary,
        matrix: delta,
        domain_weights: g.conductances(),
    })
}

/// `Δ₀ = M⁻¹(D − C)` assembled entrywise from the vertex formula.
pub fn laplacian0(g: &WeightedGraph) -> Result<OperatorMatrix, OperatorError> {
    let n = g.num_vertices();
    check_dense(n)?;
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges() {
        let c = e.conductance;
        l[(e.tail, e.tail)] += c / g.mass(e.tail);
        l[(e.head, e.head)] += c / g.mass(e.head);
        l[(e.tail, e.head)] -= c / g.mass(e.tail);
        l[(e.head, e.tail)] -= c / g.mass(e.head);
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::Laplacian0,
        matrix: l,
        domain_weights: g.masses().to_vec(),
    })
}

/// `Δ₁ = d ∘ δ` as a product of the assembled matrices.
pub fn laplacian1(g: &WeightedGraph) -> Result<OperatorMatrix, OperatorError> {
    check_dense(g.num_edges())?;
    let d = incidence(g)?.matrix;
    let delta = coboundary(g)?.matrix;
    Ok(OperatorMatrix {
        kind: OperatorKind::Laplacian1,
        matrix: d * delta,
        domain_weights: g.conductances(),
    })
}

/// `Δ₁ = I + A₁` assembled from edge adjacency: the diagonal carries
/// `c(eᵢ)(1/m(eᵢ⁺) + 1/m(eᵢ⁻))`; edges `eᵢ`, `eⱼ` sharing a vertex `x` get
/// `+c(eⱼ)/m(x)` when they meet head-to-head or tail-to-tail and
/// `−c(eⱼ)/m(x)` when one's head is the other's tail.
pub fn laplacian1_adjacency_form(g: &WeightedGraph) -> Result<OperatorMatrix, OperatorError> {
    let n = g.num_edges();
    check_dense(n)?;
    let mut l = DMatrix::zeros(n, n);
    for (i, ei) in g.edges().iter().enumerate() {
        l[(i, i)] = ei.conductance * (1.0 / g.mass(ei.head) + 1.0 / g.mass(ei.tail));
        for x in [ei.tail, ei.head] {
            for &j in g.incident_edges(x) {
                if j == i {
                    continue;
                }
                let ej = g.edge(j);
                let same_end = (ei.head == x) == (ej.head == x);
                let sign = if same_end { 1.0 } else { -1.0 };
                l[(i, j)] += sign * ej.conductance / g.mass(x);
            }
        }
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::Laplacian1,
        matrix: l,
        domain_weights: g.conductances(),
    })
}

/// `W^{1/2} L W^{−1/2}` for a Laplacian self-adjoint in the `W`-weighted
/// inner product. The result is symmetric and similar to `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrized {
    pub kind: OperatorKind,
    pub matrix: DMatrix<f64>,
    pub sqrt_weights: Vec<f64>,
}

impl Symmetrized {
    /// Maps an eigenvector of the symmetric matrix back to the weighted space
    /// (`v ↦ W^{−1/2} v`).
    pub fn pull_back(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.sqrt_weights).map(|(x, s)| x / s).collect()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        max_asymmetry(&self.matrix)
    }
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(op: &OperatorMatrix) -> Result<Symmetrized, OperatorError> {
    match op.kind {
        OperatorKind::Laplacian0 | OperatorKind::Laplacian1 => {}
        other => return Err(OperatorError::NotALaplacian(other)),
    }
    let n = op.matrix.nrows();
    expect_len(n, op.domain_weights.len())?;
    let s: Vec<f64> = op.domain_weights.iter().map(|w| w.sqrt()).collect();
    let mut m = op.matrix.clone();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] *= s[i] / s[j];
        }
    }
    // Remove round-off asymmetry so the eigensolver sees an exactly symmetric
    // matrix.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    Ok(Symmetrized {
        kind: op.kind,
        matrix: m,
        sqrt_weights: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> WeightedGraph {
        WeightedGraph::simple(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn single_edge_incidence_row() {
        let g = WeightedGraph::simple(2, &[(0, 1)]).unwrap();
        let d = incidence(&g).unwrap();
        assert_eq!(d.matrix.row(0).iter().copied().collect::<Vec<_>>(), vec![-1.0, 1.0]);
    }

    #[test]
    fn difference_of_constant_vanishes() {
        let g = c4();
        let df = difference_apply(&g, &VertexFunction::new(vec![1.0; 4])).unwrap();
        assert!(df.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_edge_coboundary() {
        let g = WeightedGraph::simple(2, &[(0, 1)]).unwrap();
        let d = coboundary_apply(&g, &EdgeForm::new(vec![1.0])).unwrap();
        assert_eq!(d.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn cycle_flow_is_divergence_free() {
        let d = coboundary_apply(&c4(), &EdgeForm::new(vec![1.0; 4])).unwrap();
        assert!(d.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn small_laplacians() {
        let g = WeightedGraph::simple(2, &[(0, 1)]).unwrap();
        let l0 = laplacian0(&g).unwrap().matrix;
        assert_eq!(l0, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let l1 = laplacian1(&g).unwrap().matrix;
        assert_eq!(l1, DMatrix::from_row_slice(1, 1, &[2.0]));
    }

    #[test]
    fn c4_laplacian1_matches_printed_matrix() {
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
             2.0, -1.0,  0.0, -1.0,
            -1.0,  2.0, -1.0,  0.0,
             0.0, -1.0,  2.0, -1.0,
            -1.0,  0.0, -1.0,  2.0,
        ]);
        assert_eq!(laplacian1(&c4()).unwrap().matrix, expected);
        assert_eq!(laplacian1_adjacency_form(&c4()).unwrap().matrix, expected);
    }

    #[test]
    fn weighted_assemblies_agree() {
        let g = WeightedGraph::from_parts(
            vec![1.0, 2.0, 0.5, 3.0],
            &[(0, 1, 1.5), (1, 2, 0.7), (2, 0, 2.0), (3, 2, 1.1), (1, 3, 0.9)],
        )
        .unwrap();
        let a = laplacian1(&g).unwrap().matrix;
        let b = laplacian1_adjacency_form(&g).unwrap().matrix;
        assert!((a - b).amax() < 1e-14);
    }

    #[test]
    fn symmetrize_is_identity_for_simple_graphs() {
        let op = laplacian1(&c4()).unwrap();
        let s = symmetrize(&op).unwrap();
        assert_eq!(s.matrix, op.matrix);
    }

    #[test]
    fn symmetrize_rejects_difference_operator() {
        let err = symmetrize(&incidence(&c4()).unwrap()).unwrap_err();
        assert_eq!(err, OperatorError::NotALaplacian(OperatorKind::Difference));
    }

    #[test]
    fn wrong_length_is_reported() {
        let err = coboundary_apply(&c4(), &EdgeForm::zeros(3)).unwrap_err();
        assert_eq!(
            err,
            OperatorError::DimensionMismatch {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn matrix_market_lists_nonzeros() {
        let g = WeightedGraph::simple(2, &[(0, 1)]).unwrap();
        let mm = incidence(&g).unwrap().to_matrix_market();
        assert_eq!(
            mm,
            "%%MatrixMarket matrix coordinate real general\n1 2 2\n1 1 -1\n1 2 1\n"
        );
        assert_eq!(incidence(&g).unwrap().to_csv(), "-1,1\n");
    }
}
