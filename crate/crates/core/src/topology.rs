//! Connectivity, spanning forests, fundamental cycles and circuit rank.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{GraphError, WeightedGraph};

/// Vertex partition by edge-path reachability. Components are numbered in
/// order of their smallest vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub assignment: Vec<usize>,
    pub count: usize,
}

pub fn connected_components(g: &WeightedGraph) -> Components {
    let forest = spanning_forest(g);
    Components {
        count: forest.component_count(),
        assignment: forest.component,
    }
}

/// A breadth-first spanning forest together with its chords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningForest {
    /// Tree edges in discovery order.
    pub tree_edges: Vec<usize>,
    /// Non-tree edges, ascending.
    pub chords: Vec<usize>,
    pub component: Vec<usize>,
    /// For each vertex, the tree edge to its parent and the parent itself.
    /// `None` for component roots.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    roots: Vec<usize>,
}

impl SpanningForest {
    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_chord(&self, e: usize) -> bool {
        self.chords.binary_search(&e).is_ok()
    }

    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }
}

/// BFS from the smallest unvisited vertex of each component; neighbours are
/// explored in edge input order.
pub fn spanning_forest(g: &WeightedGraph) -> SpanningForest {
    let n = g.num_vertices();
    let mut component = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut depth = vec![0; n];
    let mut roots = Vec::new();
    let mut in_tree = vec![false; g.num_edges()];
    let mut tree_edges = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let id = roots.len();
        roots.push(root);
        component[root] = id;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident_edges(v) {
                let w = g.edge(e).other(v).expect("incident edge touches v");
                if component[w] == usize::MAX {
                    component[w] = id;
                    parent[w] = Some((e, v));
                    depth[w] = depth[v] + 1;
                    in_tree[e] = true;
                    tree_edges.push(e);
                    queue.push_back(w);
                }
            }
        }
    }

    let chords = (0..g.num_edges()).filter(|&e| !in_tree[e]).collect();
    SpanningForest {
        tree_edges,
        chords,
        component,
        parent,
        depth,
        roots,
    }
}

/// `|E⁺| − |V| + #components`.
pub fn circuit_rank(g: &WeightedGraph) -> usize {
    let components = connected_components(g).count;
    g.num_edges() + components - g.num_vertices()
}

/// Traversal direction of an edge inside a cycle relative to its canonical
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// A closed walk given as signed canonical edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedCycle {
    pub steps: Vec<(usize, Direction)>,
}

impl SignedCycle {
    pub fn new(steps: Vec<(usize, Direction)>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Vertices visited, starting at the tail of the first step; the start
    /// vertex is not repeated at the end.
    pub fn vertices(&self, g: &WeightedGraph) -> Vec<usize> {
        self.steps
            .iter()
            .map(|&(e, dir)| {
                let edge = g.edge(e);
                match dir {
                    Direction::Forward => edge.tail,
                    Direction::Backward => edge.head,
                }
            })
            .collect()
    }

    /// Checks that consecutive steps chain head-to-tail, that the walk closes,
    /// and that no edge repeats.
    pub fn check(&self, g: &WeightedGraph) -> Result<(), GraphError> {
        let invalid = |reason: String| Err(GraphError::InvalidCycle { reason });
        if self.steps.len() < 3 {
            return invalid(format!("{} steps; a cycle needs at least 3", self.steps.len()));
        }
        let mut seen = vec![false; g.num_edges()];
        let ends = |&(e, dir): &(usize, Direction)| {
            let edge = g.edge(e);
            match dir {
                Direction::Forward => (edge.tail, edge.head),
                Direction::Backward => (edge.head, edge.tail),
            }
        };
        for (i, step) in self.steps.iter().enumerate() {
            if step.0 >= g.num_edges() {
                return invalid(format!("edge #{} does not exist", step.0));
            }
            if std::mem::replace(&mut seen[step.0], true) {
                return invalid(format!("edge #{} repeats", step.0));
            }
            let next = &self.steps[(i + 1) % self.steps.len()];
            if next.0 >= g.num_edges() {
                return invalid(format!("edge #{} does not exist", next.0));
            }
            let (_, head) = ends(step);
            let (tail, _) = ends(next);
            if head != tail {
                return invalid(format!(
                    "step {i} ends at {} but step {} starts at {}",
                    g.vertex_id(head),
                    (i + 1) % self.steps.len(),
                    g.vertex_id(tail)
                ));
            }
        }
        Ok(())
    }

    /// Signed edge-incidence vector of length `|E⁺|`.
    pub fn incidence_vector(&self, num_edges: usize) -> Vec<i64> {
        let mut v = vec![0; num_edges];
        for &(e, dir) in &self.steps {
            v[e] = match dir {
                Direction::Forward => 1,
                Direction::Backward => -1,
            };
        }
        v
    }
}

/// The cycle closed by `chord` in `forest`, traversing the chord forwards
/// first and returning through the tree path.
pub fn fundamental_cycle(
    g: &WeightedGraph,
    forest: &SpanningForest,
    chord: usize,
) -> Result<SignedCycle, GraphError> {
    if chord >= g.num_edges() || !forest.is_chord(chord) {
        return Err(GraphError::NotAChord { edge: chord });
    }
    let edge = g.edge(chord);
    let (mut up, mut down) = (edge.head, edge.tail);

    // Climb from the chord head towards the common ancestor; those steps are
    // walked child -> parent.
    let mut ascent = Vec::new();
    // Climb from the chord tail; walked later in reverse, parent -> child.
    let mut descent = Vec::new();
    while up != down {
        if forest.depth[up] >= forest.depth[down] {
            let (e, p) = forest.parent[up].expect("non-root vertex has a parent");
            let dir = if g.edge(e).tail == up {
                Direction::Forward
            } else {
                Direction::Backward
            };
            ascent.push((e, dir));
            up = p;
        } else {
            let (e, p) = forest.parent[down].expect("non-root vertex has a parent");
            let dir = if g.edge(e).tail == p {
                Direction::Forward
            } else {
                Direction::Backward
            };
            descent.push((e, dir));
            down = p;
        }
    }

    let mut steps = Vec::with_capacity(1 + ascent.len() + descent.len());
    steps.push((chord, Direction::Forward));
    steps.extend(ascent);
    steps.extend(descent.into_iter().rev());
    Ok(SignedCycle { steps })
}

/// One fundamental cycle per chord of the BFS spanning forest.
pub fn cycle_basis(g: &WeightedGraph) -> Vec<SignedCycle> {
    let forest = spanning_forest(g);
    forest
        .chords
        .iter()
        .map(|&c| fundamental_cycle(g, &forest, c).expect("chords of the forest close a cycle"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> WeightedGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((i, j));
            }
        }
        WeightedGraph::simple(5, &edges).unwrap()
    }

    fn c4() -> WeightedGraph {
        WeightedGraph::simple(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn path(n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        WeightedGraph::simple(n, &edges).unwrap()
    }

    #[test]
    fn component_counts() {
        assert_eq!(connected_components(&k5()).count, 1);
        let two = WeightedGraph::simple(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let comps = connected_components(&two);
        assert_eq!(comps.count, 2);
        assert_eq!(comps.assignment, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(connected_components(&WeightedGraph::simple(3, &[]).unwrap()).count, 3);
    }

    #[test]
    fn forest_sizes_and_circuit_rank() {
        let f = spanning_forest(&k5());
        assert_eq!((f.tree_edges.len(), f.chords.len()), (4, 6));
        assert_eq!(circuit_rank(&k5()), 6);

        let f = spanning_forest(&c4());
        assert_eq!((f.tree_edges.len(), f.chords.len()), (3, 1));
        assert_eq!(circuit_rank(&c4()), 1);

        assert_eq!(spanning_forest(&path(10)).chords.len(), 0);
        assert_eq!(circuit_rank(&path(10)), 0);
    }

    #[test]
    fn forest_is_deterministic() {
        assert_eq!(spanning_forest(&k5()), spanning_forest(&k5()));
    }

    #[test]
    fn triangle_and_square_cycles() {
        let tri = WeightedGraph::simple(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let basis = cycle_basis(&tri);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].len(), 3);
        basis[0].check(&tri).unwrap();

        let basis = cycle_basis(&c4());
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].len(), 4);
        basis[0].check(&c4()).unwrap();
        assert_eq!(basis[0].steps[0].1, Direction::Forward);
    }

    #[test]
    fn k5_fundamental_cycles_are_triangles() {
        // BFS from vertex 0 makes every other vertex a child of the root, so
        // each chord {i, j} closes the triangle 0-i-j.
        let g = k5();
        let basis = cycle_basis(&g);
        assert_eq!(basis.len(), 6);
        for c in &basis {
            c.check(&g).unwrap();
            assert_eq!(c.len(), 3);
            assert!(c.vertices(&g).contains(&0));
        }
    }

    #[test]
    fn tree_edge_is_not_a_chord() {
        let g = c4();
        let f = spanning_forest(&g);
        let err = fundamental_cycle(&g, &f, f.tree_edges[0]).unwrap_err();
        assert!(matches!(err, GraphError::NotAChord { .. }));
    }

    #[test]
    fn check_rejects_broken_walks() {
        let g = c4();
        let open = SignedCycle::new(vec![
            (0, Direction::Forward),
            (1, Direction::Forward),
            (2, Direction::Forward),
        ]);
        assert!(open.check(&g).is_err());
        let wrong_sign = SignedCycle::new(vec![
            (0, Direction::Forward),
            (1, Direction::Backward),
            (2, Direction::Forward),
            (3, Direction::Forward),
        ]);
        assert!(wrong_sign.check(&g).is_err());
        let full = SignedCycle::new((0..4).map(|e| (e, Direction::Forward)).collect());
        full.check(&g).unwrap();
    }
}
