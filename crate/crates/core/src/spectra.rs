//! Eigendecomposition, multiplicity grouping, and the finite-graph spectral
//! identities: equal nonzero spectra of `Δ₀` and `Δ₁`, kernel dimensions
//! against component count and circuit rank, and the `d`/`δ` intertwining of
//! eigenvectors.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};
use crate::operators::{
    self, max_asymmetry, EdgeForm, OperatorError, Symmetrized, VertexFunction,
};
use crate::topology::{self, Direction, SignedCycle};

/// Grouping and zero-detection tolerance for unit-scale weights.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

const ASYMMETRY_LIMIT: f64 = 1e-10;
const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is not symmetric (max |A - Aᵀ| = {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("eigenvalue {value:e} lies in ({tol:e}, {upper:e}); the zero/nonzero split is unreliable")]
    ToleranceAmbiguity { value: f64, tol: f64, upper: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("the intertwining identity requires a nonzero eigenvalue, got {0:e}")]
    ZeroEigenvalueRejected(f64),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A run of eigenvalues within tolerance of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Group {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub groups: Vec<Group>,
    pub kernel_dim: usize,
    pub tolerance: f64,
}

impl SpectrumReport {
    /// Builds a report from unsorted eigenvalues. `tol` is used as given.
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, tol: f64) -> Result<Self, SpectraError> {
        if !(tol > 0.0) {
            return Err(SpectraError::BadTolerance(tol));
        }
        eigenvalues.sort_by(f64::total_cmp);
        let groups = group_sorted(&eigenvalues, tol)?;
        let kernel_dim = eigenvalues.iter().filter(|x| x.abs() <= tol).count();
        Ok(Self {
            eigenvalues,
            groups,
            kernel_dim,
            tolerance: tol,
        })
    }

    pub fn nonzero_groups(&self) -> impl Iterator<Item = &Group> {
        self.groups.iter().filter(move |g| g.value.abs() > self.tolerance)
    }

    /// Aligned two-column table of groups.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:>16}  {:>5}\n", "eigenvalue", "mult");
        for g in &self.groups {
            out.push_str(&format!("{:>16.10}  {:>5}\n", g.value, g.multiplicity));
        }
        out.push_str(&format!(
            "kernel dim {}  (tol {:e})\n",
            self.kernel_dim, self.tolerance
        ));
        out
    }

    /// Compact `0 ×6, 5 ×4` summary.
    pub fn summary(&self) -> String {
        self.groups
            .iter()
            .map(|g| format!("{} ×{}", trim_float(g.value, self.tolerance), g.multiplicity))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn trim_float(x: f64, tol: f64) -> String {
    let r = x.round();
    if (x - r).abs() <= tol {
        format!("{}", r as i64)
    } else {
        format!("{x:.10}")
    }
}

/// Splits ascending values wherever consecutive values differ by more than
/// `tol`; a resulting group wider than `tol` is ambiguous.
fn group_sorted(sorted: &[f64], tol: f64) -> Result<Vec<Group>, SpectraError> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            let run = &sorted[start..i];
            if run[run.len() - 1] - run[0] > tol {
                return Err(SpectraError::ToleranceAmbiguity {
                    value: run[run.len() - 1],
                    tol,
                    upper: run[0] + tol,
                });
            }
            groups.push(Group {
                value: run.iter().sum::<f64>() / run.len() as f64,
                multiplicity: run.len(),
            });
            start = i;
        }
    }
    Ok(groups)
}

/// `tol · max(1, max|A_ij|)`.
pub fn effective_tolerance(m: &DMatrix<f64>, tol: f64) -> f64 {
    tol * m.amax().max(1.0)
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<(), SpectraError> {
    let asym = max_asymmetry(m);
    if asym > ASYMMETRY_LIMIT * m.amax().max(1.0) {
        Err(SpectraError::NotSymmetric(asym))
    } else {
        Ok(())
    }
}

/// Eigenpairs of a real symmetric matrix, ascending. Eigenvectors are the
/// columns of `vectors` and are orthonormal.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn eigenpairs(m: &DMatrix<f64>) -> Result<EigenPairs, SpectraError> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(EigenPairs {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(SpectraError::NoConvergence)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenPairs { values, vectors })
}

/// Spectrum of a symmetric matrix grouped at `effective_tolerance(m, tol)`.
pub fn eigen(m: &DMatrix<f64>, tol: f64) -> Result<SpectrumReport, SpectraError> {
    if !(tol > 0.0) {
        return Err(SpectraError::BadTolerance(tol));
    }
    let pairs = eigenpairs(m)?;
    SpectrumReport::from_eigenvalues(pairs.values, effective_tolerance(m, tol))
}

/// Number of eigenvalues with `|λ| ≤ tol` (tolerance scaled as in [`eigen`]).
/// Fails when some eigenvalue sits in `(tol, 10·tol)`.
pub fn kernel_dim(m: &DMatrix<f64>, tol: f64) -> Result<usize, SpectraError> {
    if !(tol > 0.0) {
        return Err(SpectraError::BadTolerance(tol));
    }
    let tol = effective_tolerance(m, tol);
    let values = eigenpairs(m)?.values;
    if let Some(&value) = values
        .iter()
        .find(|x| x.abs() > tol && x.abs() < 10.0 * tol)
    {
        return Err(SpectraError::ToleranceAmbiguity {
            value,
            tol,
            upper: 10.0 * tol,
        });
    }
    Ok(values.iter().filter(|x| x.abs() <= tol).count())
}

/// Symmetrized `Δ₀` or `Δ₁` of `g`.
pub fn symmetric_laplacian(g: &WeightedGraph, form: Form) -> Result<Symmetrized, SpectraError> {
    let op = match form {
        Form::Vertex => operators::laplacian0(g)?,
        Form::Edge => operators::laplacian1(g)?,
    };
    Ok(operators::symmetrize(&op)?)
}

/// Which Laplacian: `Δ₀` on vertex functions or `Δ₁` on edge forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    Vertex,
    Edge,
}

impl Form {
    pub fn degree(self) -> u8 {
        match self {
            Form::Vertex => 0,
            Form::Edge => 1,
        }
    }
}

pub fn laplacian_spectrum(g: &WeightedGraph, form: Form, tol: f64) -> Result<SpectrumReport, SpectraError> {
    eigen(&symmetric_laplacian(g, form)?.matrix, tol)
}

/// Eigenpairs of `Δ₀` or `Δ₁` with eigenvectors pulled back to the weighted
/// space. Vectors are returned as rows of plain values.
pub fn weighted_eigenpairs(g: &WeightedGraph, form: Form) -> Result<Vec<(f64, Vec<f64>)>, SpectraError> {
    let sym = symmetric_laplacian(g, form)?;
    let pairs = eigenpairs(&sym.matrix)?;
    Ok(pairs
        .values
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let v: Vec<f64> = pairs.vectors.column(k).iter().copied().collect();
            (lambda, sym.pull_back(&v))
        })
        .collect())
}

/// Pairing of one nonzero eigenvalue group of `Δ₀` with one of `Δ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedGroup {
    pub value0: f64,
    pub value1: f64,
    pub mult0: usize,
    pub mult1: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceReport {
    pub groups: Vec<MatchedGroup>,
    pub zero_mult0: usize,
    pub zero_mult1: usize,
    pub circuit_rank: usize,
    pub component_count: usize,
    /// `Some` when the graph is connected and the `Δ₁` kernel was compared to
    /// the circuit rank.
    pub kernel_matches_circuit_rank: Option<bool>,
    pub tolerance: f64,
    pub verdict: bool,
    pub spectrum0: SpectrumReport,
    pub spectrum1: SpectrumReport,
}

impl CoincidenceReport {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "verdict: {}\ncomponents: {}  circuit rank: {}\n",
            if self.verdict { "true" } else { "false" },
            self.component_count,
            self.circuit_rank
        );
        out.push_str(&format!(
            "zero multiplicity: Δ₀ {}  Δ₁ {}\n",
            self.zero_mult0, self.zero_mult1
        ));
        match self.kernel_matches_circuit_rank {
            Some(ok) => out.push_str(&format!(
                "dim ker Δ₁ = circuit rank: {}\n",
                if ok { "yes" } else { "NO" }
            )),
            None => out.push_str(
                "graph is disconnected: dim ker Δ₁ vs circuit rank not asserted\n",
            ),
        }
        out.push_str(&format!(
            "{:>16} {:>16} {:>6} {:>6}\n",
            "Δ₀ value", "Δ₁ value", "mult₀", "mult₁"
        ));
        for g in &self.groups {
            out.push_str(&format!(
                "{:>16.10} {:>16.10} {:>6} {:>6}\n",
                g.value0, g.value1, g.mult0, g.mult1
            ));
        }
        out.push_str(&format!("tolerance {:e}\n", self.tolerance));
        out
    }
}

/// Compares the nonzero spectra of `Δ₀` and `Δ₁` group by group and checks
/// `dim ker Δ₀ = #components` and, for connected graphs,
/// `dim ker Δ₁ = circuit rank`.
pub fn verify_coincidence(g: &WeightedGraph, tol: f64) -> Result<CoincidenceReport, SpectraError> {
    let sym0 = symmetric_laplacian(g, Form::Vertex)?;
    let sym1 = symmetric_laplacian(g, Form::Edge)?;
    // One tolerance for both spectra so that the groups are comparable.
    let tol = effective_tolerance(&sym0.matrix, tol).max(effective_tolerance(&sym1.matrix, tol));
    let spectrum0 = SpectrumReport::from_eigenvalues(eigenpairs(&sym0.matrix)?.values, tol)?;
    let spectrum1 = SpectrumReport::from_eigenvalues(eigenpairs(&sym1.matrix)?.values, tol)?;

    let nz0: Vec<&Group> = spectrum0.nonzero_groups().collect();
    let nz1: Vec<&Group> = spectrum1.nonzero_groups().collect();
    let mut verdict = nz0.len() == nz1.len();
    let groups: Vec<MatchedGroup> = nz0
        .iter()
        .zip(&nz1)
        .map(|(a, b)| {
            let scale = a.value.abs().max(b.value.abs()).max(1.0);
            if (a.value - b.value).abs() > tol * scale || a.multiplicity != b.multiplicity {
                verdict = false;
            }
            MatchedGroup {
                value0: a.value,
                value1: b.value,
                mult0: a.multiplicity,
                mult1: b.multiplicity,
            }
        })
        .collect();

    let components = topology::connected_components(g).count;
    let rank = topology::circuit_rank(g);
    if spectrum0.kernel_dim != components {
        verdict = false;
    }
    let kernel_matches_circuit_rank = (components == 1).then_some(spectrum1.kernel_dim == rank);
    if kernel_matches_circuit_rank == Some(false) {
        verdict = false;
    }

    Ok(CoincidenceReport {
        groups,
        zero_mult0: spectrum0.kernel_dim,
        zero_mult1: spectrum1.kernel_dim,
        circuit_rank: rank,
        component_count: components,
        kernel_matches_circuit_rank,
        tolerance: tol,
        verdict,
        spectrum0,
        spectrum1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntertwineReport {
    pub eigenvalue: f64,
    /// `‖Δ_other(T v) − μ T v‖ / ‖T v‖` where `T` is `d` or `δ`.
    pub residual: f64,
    /// `|‖T v‖² − μ‖v‖²| / (μ‖v‖²)`.
    pub energy_mismatch: f64,
    pub passed: bool,
}

fn reject_zero(mu: f64, tol: f64) -> Result<(), SpectraError> {
    if mu.abs() <= tol {
        Err(SpectraError::ZeroEigenvalueRejected(mu))
    } else {
        Ok(())
    }
}

/// For an eigenpair `(μ, f)` of `Δ₀` with `μ ≠ 0`, checks that `df` is an
/// eigenvector of `Δ₁` for `μ` and that `‖df‖² = μ‖f‖²`.
pub fn intertwine_check(
    g: &WeightedGraph,
    mu: f64,
    f: &VertexFunction,
    tol: f64,
) -> Result<IntertwineReport, SpectraError> {
    reject_zero(mu, tol)?;
    let df = operators::difference_apply(g, f)?;
    let l1df = operators::laplacian1_apply(g, &df)?;
    let diff = EdgeForm::new(
        l1df.values
            .iter()
            .zip(&df.values)
            .map(|(a, b)| a - mu * b)
            .collect(),
    );
    let df_norm = operators::norm_edge(g, &df)?;
    let residual = operators::norm_edge(g, &diff)? / df_norm;
    let f_norm_sq = operators::inner_vertex(g, f, f)?;
    let energy_mismatch = (df_norm * df_norm - mu * f_norm_sq).abs() / (mu.abs() * f_norm_sq);
    Ok(IntertwineReport {
        eigenvalue: mu,
        residual,
        energy_mismatch,
        passed: residual <= tol * mu.abs().max(1.0) && energy_mismatch <= tol,
    })
}

/// For an eigenpair `(λ, φ)` of `Δ₁` with `λ ≠ 0`, checks that `δφ` is an
/// eigenvector of `Δ₀` for `λ` and that `‖δφ‖² = λ‖φ‖²`.
pub fn intertwine_check_edge(
    g: &WeightedGraph,
    lambda: f64,
    phi: &EdgeForm,
    tol: f64,
) -> Result<IntertwineReport, SpectraError> {
    reject_zero(lambda, tol)?;
    let dphi = operators::coboundary_apply(g, phi)?;
    let l0 = operators::laplacian0_apply(g, &dphi)?;
    let diff = VertexFunction::new(
        l0.values
            .iter()
            .zip(&dphi.values)
            .map(|(a, b)| a - lambda * b)
            .collect(),
    );
    let dphi_norm = operators::norm_vertex(g, &dphi)?;
    let residual = operators::norm_vertex(g, &diff)? / dphi_norm;
    let phi_norm_sq = operators::inner_edge(g, phi, phi)?;
    let energy_mismatch =
        (dphi_norm * dphi_norm - lambda * phi_norm_sq).abs() / (lambda.abs() * phi_norm_sq);
    Ok(IntertwineReport {
        eigenvalue: lambda,
        residual,
        energy_mismatch,
        passed: residual <= tol * lambda.abs().max(1.0) && energy_mismatch <= tol,
    })
}

/// The canonical harmonic 1-form of a cycle: `φ(e) = ±1/c(e)` on cycle edges
/// (sign from the traversal direction), zero elsewhere. Each cycle vertex
/// receives flux `+1` from the incoming step and `−1` from the outgoing one,
/// so `δφ = 0`.
pub fn harmonic_cycle_form(g: &WeightedGraph, cycle: &SignedCycle) -> Result<EdgeForm, SpectraError> {
    cycle.check(g)?;
    let mut phi = vec![0.0; g.num_edges()];
    for &(e, dir) in &cycle.steps {
        let inv = 1.0 / g.edge(e).conductance;
        phi[e] = match dir {
            Direction::Forward => inv,
            Direction::Backward => -inv,
        };
    }
    Ok(EdgeForm::new(phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        WeightedGraph::simple(n, &edges).unwrap()
    }

    fn c4() -> WeightedGraph {
        WeightedGraph::simple(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn groups(r: &SpectrumReport) -> Vec<(i64, usize)> {
        r.groups
            .iter()
            .map(|g| (g.value.round() as i64, g.multiplicity))
            .collect()
    }

    #[test]
    fn k5_spectra() {
        let g = complete(5);
        let s1 = laplacian_spectrum(&g, Form::Edge, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(groups(&s1), vec![(0, 6), (5, 4)]);
        assert_eq!(s1.summary(), "0 ×6, 5 ×4");
        let s0 = laplacian_spectrum(&g, Form::Vertex, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(groups(&s0), vec![(0, 1), (5, 4)]);
    }

    #[test]
    fn c4_spectra() {
        let s1 = laplacian_spectrum(&c4(), Form::Edge, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(groups(&s1), vec![(0, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn one_by_one() {
        let r = eigen(&DMatrix::from_element(1, 1, 2.0), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.groups, vec![Group { value: 2.0, multiplicity: 1 }]);
        assert_eq!(r.kernel_dim, 0);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eigen(&m, 1e-8), Err(SpectraError::NotSymmetric(_))));
    }

    #[test]
    fn kernel_dims() {
        let k5 = complete(5);
        let l1 = symmetric_laplacian(&k5, Form::Edge).unwrap().matrix;
        assert_eq!(kernel_dim(&l1, DEFAULT_TOLERANCE).unwrap(), 6);
        let tree = WeightedGraph::simple(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let l1 = symmetric_laplacian(&tree, Form::Edge).unwrap().matrix;
        assert_eq!(kernel_dim(&l1, DEFAULT_TOLERANCE).unwrap(), 0);
        let l0 = symmetric_laplacian(&tree, Form::Vertex).unwrap().matrix;
        assert_eq!(kernel_dim(&l0, DEFAULT_TOLERANCE).unwrap(), 1);
    }

    #[test]
    fn ambiguity_is_surfaced() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 5e-8, 1.0]));
        assert!(matches!(
            kernel_dim(&m, 1e-8),
            Err(SpectraError::ToleranceAmbiguity { .. })
        ));
    }

    #[test]
    fn coincidence_on_paper_examples() {
        let r = verify_coincidence(&complete(5), DEFAULT_TOLERANCE).unwrap();
        assert!(r.verdict);
        assert_eq!((r.zero_mult0, r.zero_mult1, r.circuit_rank), (1, 6, 6));
        assert_eq!(r.groups.len(), 1);
        assert_eq!((r.groups[0].mult0, r.groups[0].mult1), (4, 4));

        let r = verify_coincidence(&c4(), DEFAULT_TOLERANCE).unwrap();
        assert!(r.verdict);
        let got: Vec<_> = r
            .groups
            .iter()
            .map(|g| (g.value0.round() as i64, g.value1.round() as i64, g.mult0, g.mult1))
            .collect();
        assert_eq!(got, vec![(2, 2, 2, 2), (4, 4, 1, 1)]);
    }

    #[test]
    fn disconnected_graph_skips_rank_assertion() {
        let g = WeightedGraph::simple(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let r = verify_coincidence(&g, DEFAULT_TOLERANCE).unwrap();
        assert!(r.verdict);
        assert_eq!(r.zero_mult0, 2);
        assert_eq!(r.kernel_matches_circuit_rank, None);
    }

    #[test]
    fn k5_intertwining() {
        let g = complete(5);
        for (mu, f) in weighted_eigenpairs(&g, Form::Vertex).unwrap() {
            if mu.abs() < 1e-8 {
                assert!(matches!(
                    intertwine_check(&g, mu, &VertexFunction::new(f), 1e-8),
                    Err(SpectraError::ZeroEigenvalueRejected(_))
                ));
                continue;
            }
            let r = intertwine_check(&g, mu, &VertexFunction::new(f), 1e-8).unwrap();
            assert!(r.residual < 1e-10, "{r:?}");
            assert!(r.passed);
        }
    }
}
