use serde::Serialize;

use crate::operators::{self, EdgeForm, VertexFunction};
use crate::spectra;
use crate::topology::{Direction, SignedCycle};

use super::series::NeumaierSum;
use super::{InfiniteError, LineFamily, Truncation};

/// The closed edge form `φ(n, n+1) = a / c(n, n+1)` on a chord-free family,
/// i.e. the solution of `c(n,n+1)φ(n,n+1) = c(n−1,n)φ(n−1,n)` with
/// `φ(0, 1) = φ₀`, restricted to the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicLineForm {
    pub family: String,
    pub radius: usize,
    pub phi0: f64,
    /// The constant flux `a = c(0,1)·φ₀`.
    pub flux: f64,
    /// `φ(n, n+1)` for `n = −N, …, N−1`, the truncation's edge order.
    pub values: Vec<f64>,
    /// `Σ c φ²` over the window's edges.
    pub partial_norm_sq: f64,
    /// `max_{|x| < N} |δφ(x)|` relative to the flux through `x`.
    pub interior_residual: f64,
}

impl HarmonicLineForm {
    pub fn to_edge_form(&self) -> EdgeForm {
        EdgeForm::new(self.values.clone())
    }

    /// `φ(n, n+1)`.
    pub fn value(&self, n: i64) -> f64 {
        self.values[(n + self.radius as i64) as usize]
    }
}

pub fn harmonic_line_form(fam: &LineFamily, radius: usize, phi0: f64) -> Result<HarmonicLineForm, InfiniteError> {
    if fam.has_chords() {
        return Err(InfiniteError::ChordsUnsupported);
    }
    if !(phi0 != 0.0 && phi0.is_finite()) {
        return Err(InfiniteError::BadParameter(format!("phi0 must be nonzero and finite, got {phi0}")));
    }
    if radius < 1 {
        return Err(InfiniteError::WindowTooSmall { radius, min: 1 });
    }
    let r = radius as i64;
    let flux = fam.conductance(0)? * phi0;
    let cs = (-r..r).map(|n| fam.conductance(n)).collect::<Result<Vec<_>, _>>()?;
    let values: Vec<f64> = cs.iter().map(|c| flux / c).collect();
    let mut norm = NeumaierSum::new();
    for (c, phi) in cs.iter().zip(&values) {
        norm.add(c * phi * phi);
    }
    let mut residual: f64 = 0.0;
    for x in 1..values.len() {
        let inflow = cs[x - 1] * values[x - 1];
        let outflow = cs[x] * values[x];
        residual = residual.max((inflow - outflow).abs() / inflow.abs());
    }
    Ok(HarmonicLineForm {
        family: fam.name.clone(),
        radius,
        phi0,
        flux,
        values,
        partial_norm_sq: norm.value(),
        interior_residual: residual,
    })
}

/// Closed forms `φ_k = ±1/c` on the cycles `C_k` of `G2` for odd `k ≤ N`:
/// `C₁ = (0,1), (1,−1), (−1,0)` and for `k ≥ 2`
/// `C_k = (k−1,k), (k,−k), (−k,−k+1), (−k+1,k−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Basis {
    pub truncation: Truncation,
    pub indices: Vec<usize>,
    pub cycles: Vec<SignedCycle>,
    pub forms: Vec<EdgeForm>,
}

pub fn g2_harmonic_basis(radius: usize) -> Result<G2Basis, InfiniteError> {
    if radius < 2 {
        return Err(InfiniteError::WindowTooSmall { radius, min: 2 });
    }
    let t = LineFamily::builtin("G2", None)?.truncate(radius)?;
    let (mut indices, mut cycles, mut forms) = (Vec::new(), Vec::new(), Vec::new());
    for k in (1..=radius as i64).step_by(2) {
        let steps = if k == 1 {
            vec![
                (t.line_edge(0), Direction::Forward),
                (t.chord_edge(1), Direction::Forward),
                (t.line_edge(-1), Direction::Forward),
            ]
        } else {
            vec![
                (t.line_edge(k - 1), Direction::Forward),
                (t.chord_edge(k), Direction::Forward),
                (t.line_edge(-k), Direction::Forward),
                (t.chord_edge(k - 1), Direction::Backward),
            ]
        };
        let cycle = SignedCycle::new(steps);
        forms.push(spectra::harmonic_cycle_form(&t.graph, &cycle)?);
        cycles.push(cycle);
        indices.push(k as usize);
    }
    Ok(G2Basis {
        truncation: t,
        indices,
        cycles,
        forms,
    })
}

/// A test function for [`weyl_residual`].
#[derive(Debug, Clone, PartialEq)]
pub enum WindowFunction {
    Vertex(VertexFunction),
    Edge(EdgeForm),
}

/// `‖(Δ − λ)f‖ / ‖f‖` in the weighted norms, with `Δ = Δ₀` for vertex
/// functions and `Δ₁` for edge forms. `f` must vanish within distance 2 of
/// the window boundary, so the result equals the value on the infinite graph.
pub fn weyl_residual(t: &Truncation, lambda: f64, f: &WindowFunction) -> Result<f64, InfiniteError> {
    let g = &t.graph;
    let support = match f {
        WindowFunction::Vertex(f) => {
            if f.values.len() != g.num_vertices() {
                return Err(operators::OperatorError::DimensionMismatch {
                    expected: g.num_vertices(),
                    found: f.values.len(),
                }
                .into());
            }
            f.values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(v, _)| t.label(v).unsigned_abs() as usize)
                .max()
        }
        WindowFunction::Edge(phi) => {
            if phi.values.len() != g.num_edges() {
                return Err(operators::OperatorError::DimensionMismatch {
                    expected: g.num_edges(),
                    found: phi.values.len(),
                }
                .into());
            }
            phi.values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(e, _)| {
                    let edge = g.edge(e);
                    t.label(edge.tail).unsigned_abs().max(t.label(edge.head).unsigned_abs()) as usize
                })
                .max()
        }
    };
    let support = support.ok_or_else(|| InfiniteError::BadParameter("test function is zero".into()))?;
    if support + 2 > t.radius {
        return Err(InfiniteError::SupportTooCloseToBoundary {
            support,
            needed: support + 2,
            radius: t.radius,
        });
    }
    let ratio = match f {
        WindowFunction::Vertex(f) => {
            let mut r = operators::laplacian0_apply(g, f)?;
            for (ri, fi) in r.values.iter_mut().zip(&f.values) {
                *ri -= lambda * fi;
            }
            operators::norm_vertex(g, &r)? / operators::norm_vertex(g, f)?
        }
        WindowFunction::Edge(phi) => {
            let mut r = operators::laplacian1_apply(g, phi)?;
            for (ri, pi) in r.values.iter_mut().zip(&phi.values) {
                *ri -= lambda * pi;
            }
            operators::norm_edge(g, &r)? / operators::norm_edge(g, phi)?
        }
    };
    Ok(ratio)
}

/// `f(k) = cos(θk)·max(0, 1 − |k|/support)` on the window's vertices.
pub fn tent_wave(t: &Truncation, support: usize, theta: f64) -> VertexFunction {
    let s = support as f64;
    VertexFunction::new(
        (0..t.graph.num_vertices())
            .map(|v| {
                let k = t.label(v) as f64;
                (theta * k).cos() * (1.0 - k.abs() / s).max(0.0)
            })
            .collect(),
    )
}

/// Raised-cosine cutoff: 1 on `|x| ≤ inner`, 0 on `|x| ≥ outer`,
/// `(1 + cos(π(|x| − inner)/(outer − inner)))/2` between.
pub fn smooth_cutoff(x: f64, inner: f64, outer: f64) -> f64 {
    let x = x.abs();
    if x <= inner {
        1.0
    } else if x >= outer {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * (x - inner) / (outer - inner)).cos())
    }
}

/// The closed form `1/c(n, n+1)` of [`harmonic_line_form`] multiplied by
/// [`smooth_cutoff`] at the edge midpoint `n + 1/2`. Chords, if any, get 0.
pub fn tapered_harmonic_form(
    fam: &LineFamily,
    t: &Truncation,
    inner: f64,
    outer: f64,
) -> Result<EdgeForm, InfiniteError> {
    let r = t.radius as i64;
    let mut values = vec![0.0; t.graph.num_edges()];
    for n in -r..r {
        values[t.line_edge(n)] = smooth_cutoff(n as f64 + 0.5, inner, outer) / fam.conductance(n)?;
    }
    Ok(EdgeForm::new(values))
}
