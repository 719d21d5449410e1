//! Browser bindings. Every export takes plain values and returns a JSON
//! string; failures come back as `{"error": "..."}` so the page has one
//! code path.

use graph_hodge::gen::{random_graph, GraphSpec};
use graph_hodge::infinite::{self, LineFamily};
use graph_hodge::spectra::{self, Form};
use graph_hodge::WeightedGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const MAX_VERTICES: usize = 60;
const MAX_RADIUS: usize = 400;

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Built-in example graphs by name.
pub fn preset(name: &str) -> Option<&'static str> {
    match name {
        "k5" => Some(include_str!("../../core/fixtures/k5.json")),
        "c4" => Some(include_str!("../../core/fixtures/c4.json")),
        "tree" => Some(include_str!("../../core/fixtures/tree.json")),
        "two_triangles" => Some(include_str!("../../core/fixtures/two_triangles.json")),
        _ => None,
    }
}

#[wasm_bindgen]
pub fn preset_graph(name: &str) -> String {
    respond(
        preset(name)
            .ok_or_else(|| format!("unknown preset {name}"))
            .and_then(|text| serde_json::from_str(text).map_err(|e| e.to_string())),
    )
}

/// A connected random graph with rational weights, as a graph file.
#[wasm_bindgen]
pub fn random_graph_json(vertices: usize, seed: u64) -> String {
    respond((|| {
        if !(2..=MAX_VERTICES).contains(&vertices) {
            return Err(format!("vertices must be in 2..={MAX_VERTICES}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &GraphSpec::connected(vertices)).graph;
        serde_json::from_str(&g.to_json()).map_err(|e| e.to_string())
    })())
}

/// Spectra of Δ₀ and Δ₁ plus the coincidence check, for a graph file.
#[wasm_bindgen]
pub fn spectrum(graph_json: &str, tol: f64) -> String {
    respond((|| {
        let g = WeightedGraph::from_json(graph_json).map_err(|e| e.to_string())?;
        if g.num_vertices() > MAX_VERTICES {
            return Err(format!("at most {MAX_VERTICES} vertices in the browser"));
        }
        let v = spectra::laplacian_spectrum(&g, Form::Vertex, tol).map_err(|e| e.to_string())?;
        let e = spectra::laplacian_spectrum(&g, Form::Edge, tol).map_err(|e| e.to_string())?;
        let check = spectra::verify_coincidence(&g, tol).map_err(|e| e.to_string())?;
        let edges: Vec<Value> = g.edges().iter().map(|e| json!([e.tail, e.head, e.conductance])).collect();
        Ok(json!({
            "vertices": (0..g.num_vertices()).map(|v| g.vertex_id(v)).collect::<Vec<_>>(),
            "edges": edges,
            "delta0": v,
            "delta1": e,
            "summary0": v.summary(),
            "summary1": e.summary(),
            "verify": check,
        }))
    })())
}

fn family(name: &str, alpha: Option<f64>) -> Result<LineFamily, String> {
    LineFamily::builtin(name, alpha).map_err(|e| e.to_string())
}

/// Dirichlet gap of the window [−N, N] for N = 2..=n_max.
#[wasm_bindgen]
pub fn gap_curve(name: &str, alpha: Option<f64>, n_max: usize) -> String {
    respond((|| {
        let fam = family(name, alpha)?;
        if !(2..=MAX_RADIUS).contains(&n_max) {
            return Err(format!("N must be in 2..={MAX_RADIUS}"));
        }
        let step = (n_max / 60).max(1);
        let mut points = Vec::new();
        let mut n = 2;
        while n <= n_max {
            let gap = infinite::dirichlet_gap(&fam, n, graph_hodge::DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
            points.push(json!([n, gap]));
            n = if n + step > n_max && n < n_max { n_max } else { n + step };
        }
        Ok(json!({ "family": fam.name, "points": points }))
    })())
}

/// The closed edge form φ = a/c on the window, with its partial norms.
#[wasm_bindgen]
pub fn harmonic_profile(name: &str, alpha: Option<f64>, radius: usize) -> String {
    respond((|| {
        let fam = family(name, alpha)?;
        if !(1..=MAX_RADIUS).contains(&radius) {
            return Err(format!("N must be in 1..={MAX_RADIUS}"));
        }
        let phi0 = 1.0 / fam.conductance(0).map_err(|e| e.to_string())?;
        let form = infinite::harmonic_line_form(&fam, radius, phi0).map_err(|e| e.to_string())?;
        serde_json::to_value(&form).map_err(|e| e.to_string())
    })())
}
