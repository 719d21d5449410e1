//! Weighted oriented graphs.
//!
//! Every undirected pair `{x, y}` is stored once as a canonical oriented edge
//! `(tail, head)`; the reversed edge is implicit. Vertex masses `m(x)` and edge
//! conductances `c(e)` are strictly positive. Vertex ids are opaque strings in
//! the file format and dense indices everywhere else, assigned in input order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge #{index} ({id} -> {id}) is a self-loop")]
    SelfLoop { index: usize, id: String },
    #[error("edge #{index} ({tail} -> {head}) duplicates edge #{first} on the same vertex pair")]
    DuplicateEdge {
        index: usize,
        first: usize,
        tail: String,
        head: String,
    },
    #[error("vertex id {id:?} is declared twice")]
    DuplicateVertex { id: String },
    #[error("{what} has weight {value}; weights must be positive and finite")]
    NonpositiveWeight { what: String, value: f64 },
    #[error("edge #{index} references unknown vertex {id:?}")]
    DanglingVertexReference { index: usize, id: String },
    #[error("edge #{edge} is not a chord of the spanning forest")]
    NotAChord { edge: usize },
    #[error("invalid cycle: {reason}")]
    InvalidCycle { reason: String },
    #[error("malformed graph file: {0}")]
    Parse(String),
}

fn one() -> f64 {
    1.0
}

/// A vertex as it appears in the JSON graph format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    #[serde(default = "one")]
    pub mass: f64,
}

/// An edge as it appears in the JSON graph format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEdge {
    pub tail: String,
    pub head: String,
    #[serde(default = "one")]
    pub c: f64,
}

/// Unvalidated graph description, one-to-one with the JSON file format
/// `{ "vertices": [{"id", "mass"}], "edges": [{"tail", "head", "c"}] }`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<RawEdge>,
}

impl RawGraph {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw graph is always serializable")
    }
}

/// A canonical oriented edge `tail -> head` with conductance `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub conductance: f64,
}

impl Edge {
    /// The endpoint of this edge that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.tail {
            Some(self.head)
        } else if v == self.head {
            Some(self.tail)
        } else {
            None
        }
    }
}

/// A validated finite weighted graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    masses: Vec<f64>,
    edges: Vec<Edge>,
    /// Incident canonical edge ids per vertex, ascending.
    incident: Vec<Vec<usize>>,
}

fn check_weight(what: impl FnOnce() -> String, value: f64) -> Result<(), GraphError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GraphError::NonpositiveWeight {
            what: what(),
            value,
        })
    }
}

impl WeightedGraph {
    /// Validates a raw description. Indices follow input order.
    pub fn validate(raw: &RawGraph) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(raw.vertices.len());
        let mut ids = Vec::with_capacity(raw.vertices.len());
        let mut masses = Vec::with_capacity(raw.vertices.len());
        for v in &raw.vertices {
            if index.insert(v.id.clone(), ids.len()).is_some() {
                return Err(GraphError::DuplicateVertex { id: v.id.clone() });
            }
            check_weight(|| format!("vertex {:?}", v.id), v.mass)?;
            ids.push(v.id.clone());
            masses.push(v.mass);
        }

        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::with_capacity(raw.edges.len());
        for (i, e) in raw.edges.iter().enumerate() {
            let lookup = |id: &String| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingVertexReference {
                        index: i,
                        id: id.clone(),
                    })
            };
            let tail = lookup(&e.tail)?;
            let head = lookup(&e.head)?;
            if tail == head {
                return Err(GraphError::SelfLoop {
                    index: i,
                    id: e.tail.clone(),
                });
            }
            check_weight(|| format!("edge #{i} ({} -> {})", e.tail, e.head), e.c)?;
            let key = (tail.min(head), tail.max(head));
            if let Some(&first) = pairs.get(&key) {
                return Err(GraphError::DuplicateEdge {
                    index: i,
                    first,
                    tail: e.tail.clone(),
                    head: e.head.clone(),
                });
            }
            pairs.insert(key, i);
            edges.push(Edge {
                tail,
                head,
                conductance: e.c,
            });
        }
        Ok(Self::assemble(ids, masses, edges))
    }

    /// Builds a graph from dense indices; vertex ids become `"0"`, `"1"`, ...
    pub fn from_parts(masses: Vec<f64>, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let ids = (0..masses.len()).map(|i| i.to_string()).collect();
        Self::from_parts_with_ids(ids, masses, edges)
    }

    pub fn from_parts_with_ids(
        ids: Vec<String>,
        masses: Vec<f64>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, GraphError> {
        assert_eq!(ids.len(), masses.len(), "one id per mass");
        let id_of = |i: usize| ids.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
        let edges = edges
            .iter()
            .map(|&(t, h, c)| RawEdge {
                tail: id_of(t),
                head: id_of(h),
                c,
            })
            .collect();
        let raw = RawGraph {
            vertices: ids
                .iter()
                .zip(masses)
                .map(|(id, mass)| RawVertex {
                    id: id.clone(),
                    mass,
                })
                .collect(),
            edges,
        };
        Self::validate(&raw)
    }

    /// Simple graph (all masses and conductances 1) on `n` vertices.
    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let edges: Vec<_> = edges.iter().map(|&(t, h)| (t, h, 1.0)).collect();
        Self::from_parts(vec![1.0; n], &edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::validate(&RawGraph::from_json(text)?)
    }

    fn assemble(ids: Vec<String>, masses: Vec<f64>, edges: Vec<Edge>) -> Self {
        let mut incident = vec![Vec::new(); masses.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.tail].push(i);
            incident[e.head].push(i);
        }
        Self {
            ids,
            masses,
            edges,
            incident,
        }
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self
                .ids
                .iter()
                .zip(&self.masses)
                .map(|(id, &mass)| RawVertex {
                    id: id.clone(),
                    mass,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    tail: self.ids[e.tail].clone(),
                    head: self.ids[e.head].clone(),
                    c: e.conductance,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_raw().to_json()
    }

    pub fn num_vertices(&self) -> usize {
        self.masses.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.masses[v]
    }

    pub fn conductances(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.conductance).collect()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Canonical edges touching `v`, in ascending edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// `Σ_{y~x} c(x, y)`.
    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.incident[v]
            .iter()
            .map(|&e| self.edges[e].conductance)
            .sum()
    }

    /// Copy with the canonical orientation of edge `e` reversed.
    pub fn with_flipped_edge(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        let edge = &mut edges[e];
        std::mem::swap(&mut edge.tail, &mut edge.head);
        Self::assemble(self.ids.clone(), self.masses.clone(), edges)
    }

    /// Copy with every mass multiplied by `mass_scale` and every conductance by
    /// `conductance_scale`.
    pub fn scaled(&self, mass_scale: f64, conductance_scale: f64) -> Self {
        let masses = self.masses.iter().map(|m| m * mass_scale).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                conductance: e.conductance * conductance_scale,
                ..*e
            })
            .collect();
        Self::assemble(self.ids.clone(), masses, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vertices: &[&str], edges: &[(&str, &str, f64)]) -> RawGraph {
        RawGraph {
            vertices: vertices
                .iter()
                .map(|id| RawVertex {
                    id: id.to_string(),
                    mass: 1.0,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|&(t, h, c)| RawEdge {
                    tail: t.into(),
                    head: h.into(),
                    c,
                })
                .collect(),
        }
    }

    #[test]
    fn k5_validates_with_ten_canonical_edges() {
        let ids = ["a", "b", "c", "d", "e"];
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((ids[i], ids[j], 1.0));
            }
        }
        let g = WeightedGraph::validate(&raw(&ids, &edges)).unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_edges(), 10);
        assert!((0..5).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn rejects_self_loop() {
        let err = WeightedGraph::validate(&raw(&["a"], &[("a", "a", 1.0)])).unwrap_err();
        assert!(matches!(err, GraphError::SelfLoop { index: 0, .. }));
        assert!(err.to_string().contains("a -> a"));
    }

    #[test]
    fn rejects_zero_and_nan_conductance() {
        for c in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = WeightedGraph::validate(&raw(&["a", "b"], &[("a", "b", c)])).unwrap_err();
            assert!(matches!(err, GraphError::NonpositiveWeight { .. }), "{c}");
        }
    }

    #[test]
    fn rejects_reversed_duplicate() {
        let err = WeightedGraph::validate(&raw(&["a", "b"], &[("a", "b", 1.0), ("b", "a", 2.0)]))
            .unwrap_err();
        assert!(matches!(
            err,
            GraphError::DuplicateEdge {
                index: 1,
                first: 0,
                ..
            }
        ));
    }

    #[test]
    fn rejects_dangling_reference() {
        let err = WeightedGraph::validate(&raw(&["a"], &[("a", "z", 1.0)])).unwrap_err();
        assert_eq!(
            err,
            GraphError::DanglingVertexReference {
                index: 0,
                id: "z".into()
            }
        );
    }

    #[test]
    fn json_defaults_mass_and_conductance_to_one() {
        let g = WeightedGraph::from_json(
            r#"{"vertices":[{"id":"x"},{"id":"y","mass":2.5}],"edges":[{"tail":"x","head":"y"}]}"#,
        )
        .unwrap();
        assert_eq!(g.masses(), &[1.0, 2.5]);
        assert_eq!(g.edge(0).conductance, 1.0);
        let back = WeightedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn from_parts_reports_out_of_range_vertex() {
        let err = WeightedGraph::from_parts(vec![1.0; 2], &[(0, 5, 1.0)]).unwrap_err();
        assert!(matches!(err, GraphError::DanglingVertexReference { .. }));
    }
}
