//! Simple-graph data model with a stable edge order.
//!
//! The edge order is fixed at construction and drives the signs of the
//! cube differential, so every operation here that produces a graph
//! documents how the order of surviving edges is derived from its
//! input.

mod dsl;
mod enumerate;
mod invariants;

pub use dsl::{build, bridge, complete, cycle, edge_glue_k, path, theta, vertex_glue, wheel};
pub use enumerate::{connected_graphs, sample_connected_graphs};
pub use invariants::{block_count, block_edge_partition, GraphInvariants};

use std::fmt;
use thiserror::Error;

/// Largest supported vertex count. Adjacency rows are `u64` bitmasks.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GraphError {
    #[error("line {line}: malformed line: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: loop edge ({v},{v}) is not allowed in a simple graph")]
    LoopEdge { line: usize, v: usize },
    #[error("line {line}: duplicate edge ({a},{b})")]
    DuplicateEdge { line: usize, a: usize, b: usize },
    #[error("line {line}: vertex index {v} out of range (vertex count {n})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: missing or repeated vertex-count header")]
    BadHeader { line: usize },
    #[error("vertex count {0} exceeds supported maximum {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("edge ({0},{1}) is not in the graph")]
    UnknownEdge(usize, usize),
    #[error("dsl error: {0}")]
    Dsl(String),
}

/// Finite simple graph with a stable, total edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    vertex_count: usize,
    /// Unordered pairs stored as `(min, max)`, in construction order.
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph from an explicit edge list; the list order becomes
    /// the edge order.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if vertex_count > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(vertex_count));
        }
        let mut g = SimpleGraph {
            vertex_count,
            edges: Vec::new(),
        };
        for (line, (a, b)) in edges.into_iter().enumerate() {
            g.push_edge(a, b, line + 1)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, a: usize, b: usize, line: usize) -> Result<(), GraphError> {
        let n = self.vertex_count;
        if a >= n {
            return Err(GraphError::VertexOutOfRange { line, v: a, n });
        }
        if b >= n {
            return Err(GraphError::VertexOutOfRange { line, v: b, n });
        }
        if a == b {
            return Err(GraphError::LoopEdge { line, v: a });
        }
        let e = (a.min(b), a.max(b));
        if self.edges.contains(&e) {
            return Err(GraphError::DuplicateEdge { line, a: e.0, b: e.1 });
        }
        self.edges.push(e);
        Ok(())
    }

    /// Parses the edge-list format: one `v N` header line followed by
    /// `e a b` lines (0-based). Blank lines are ignored; errors carry
    /// 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut graph: Option<SimpleGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            match (toks[0], toks.len()) {
                ("v", 2) => {
                    if graph.is_some() {
                        return Err(GraphError::BadHeader { line });
                    }
                    let n: usize = toks[1].parse().map_err(|_| GraphError::Malformed {
                        line,
                        text: raw.to_string(),
                    })?;
                    if n > MAX_VERTICES {
                        return Err(GraphError::TooManyVertices(n));
                    }
                    graph = Some(SimpleGraph {
                        vertex_count: n,
                        edges: Vec::new(),
                    });
                }
                ("e", 3) => {
                    let g = graph.as_mut().ok_or(GraphError::BadHeader { line })?;
                    let parse = |s: &str| {
                        s.parse::<usize>().map_err(|_| GraphError::Malformed {
                            line,
                            text: raw.to_string(),
                        })
                    };
                    let a = parse(toks[1])?;
                    let b = parse(toks[2])?;
                    g.push_edge(a, b, line)?;
                }
                _ => {
                    return Err(GraphError::Malformed {
                        line,
                        text: raw.to_string(),
                    })
                }
            }
        }
        graph.ok_or(GraphError::BadHeader { line: 0 })
    }

    /// Serializes back to the edge-list format; `parse(serialize(g)) == g`
    /// bit-exactly (edge order included).
    pub fn serialize(&self) -> String {
        let mut out = format!("v {}\n", self.vertex_count);
        for &(a, b) in &self.edges {
            out.push_str(&format!("e {} {}\n", a, b));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Adjacency rows as bitmasks.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    /// Component id per vertex, ids numbered by smallest contained vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.vertex_count);
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        dsu.component_ids()
    }

    pub fn component_count(&self) -> usize {
        if self.vertex_count == 0 {
            return 0;
        }
        *self.components().iter().max().unwrap() + 1
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }

    /// Deletes edge `(a, b)`; remaining edge order is preserved.
    pub fn delete_edge(&self, a: usize, b: usize) -> Result<SimpleGraph, GraphError> {
        let e = (a.min(b), a.max(b));
        if !self.edges.contains(&e) {
            return Err(GraphError::UnknownEdge(e.0, e.1));
        }
        Ok(SimpleGraph {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().copied().filter(|&x| x != e).collect(),
        })
    }

    /// Contracts edge `(a, b)`: merges the larger endpoint into the
    /// smaller, drops the loop and any parallel duplicates, and compacts
    /// vertex indices. Edge order of survivors is preserved (first
    /// occurrence wins among parallels).
    pub fn contract_edge(&self, a: usize, b: usize) -> Result<SimpleGraph, GraphError> {
        let e = (a.min(b), a.max(b));
        if !self.edges.contains(&e) {
            return Err(GraphError::UnknownEdge(e.0, e.1));
        }
        let (keep, gone) = e;
        let remap = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &(x, y) in &self.edges {
            let (x, y) = (remap(x), remap(y));
            if x == y {
                continue;
            }
            let f = (x.min(y), x.max(y));
            if !edges.contains(&f) {
                edges.push(f);
            }
        }
        Ok(SimpleGraph {
            vertex_count: self.vertex_count - 1,
            edges,
        })
    }

    /// Returns the edges that are bridges, as indices into `edges()`.
    pub fn bridges(&self) -> Vec<usize> {
        let base = self.component_count();
        (0..self.edges.len())
            .filter(|&idx| {
                let (a, b) = self.edges[idx];
                self.delete_edge(a, b).unwrap().component_count() > base
            })
            .collect()
    }

    /// Canonical key: adjacency bitmask minimized over permutations that
    /// respect the stable Weisfeiler-Leman color classes. Sound because
    /// isomorphisms preserve the refined colors; the refinement keeps
    /// the class sizes (and so the search) small on everything but
    /// highly regular graphs.
    pub fn canonical_key(&self) -> (usize, Vec<u64>) {
        let n = self.vertex_count;
        let degs: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let nbrs: Vec<Vec<usize>> = (0..n).map(|v| self.neighbors(v)).collect();
        // Iterated color refinement: color = (old color, sorted multiset
        // of neighbor colors); class order is itself isomorphism
        // invariant because it starts from sorted degrees.
        let mut color: Vec<usize> = {
            let mut ds: Vec<usize> = degs.clone();
            ds.sort_unstable();
            ds.dedup();
            (0..n)
                .map(|v| ds.binary_search(&degs[v]).unwrap())
                .collect()
        };
        loop {
            let mut sigs: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut ns: Vec<usize> = nbrs[v].iter().map(|&w| color[w]).collect();
                    ns.sort_unstable();
                    (color[v], ns)
                })
                .collect();
            let mut uniq = sigs.clone();
            uniq.sort();
            uniq.dedup();
            let next: Vec<usize> = (0..n)
                .map(|v| uniq.binary_search(&sigs[v]).unwrap())
                .collect();
            sigs.clear();
            let stable = {
                let old_classes: std::collections::BTreeSet<usize> = color.iter().copied().collect();
                let new_classes: std::collections::BTreeSet<usize> = next.iter().copied().collect();
                old_classes.len() == new_classes.len()
            };
            color = next;
            if stable {
                break;
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let ncolors = color.iter().max().map_or(0, |&m| m + 1);
        for c in 0..ncolors {
            let members: Vec<usize> = (0..n).filter(|&v| color[v] == c).collect();
            if !members.is_empty() {
                classes.push(members);
            }
        }
        let adj = self.adjacency();
        let mut best: Option<Vec<u64>> = None;
        let mut perm: Vec<usize> = Vec::with_capacity(n); // perm[new] = old
        permute_classes(&classes, &mut perm, &mut |perm| {
            let mut inv = vec![0usize; n];
            for (new, &old) in perm.iter().enumerate() {
                inv[old] = new;
            }
            let mut rows = vec![0u64; n];
            for (new, &old) in perm.iter().enumerate() {
                let mut m = adj[old];
                while m != 0 {
                    let w = m.trailing_zeros() as usize;
                    m &= m - 1;
                    rows[new] |= 1 << inv[w];
                }
            }
            if best.as_ref().map_or(true, |b| rows < *b) {
                best = Some(rows);
            }
        });
        (n, best.unwrap_or_default())
    }
}

fn permute_classes(
    classes: &[Vec<usize>],
    perm: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    match classes.split_first() {
        None => f(perm),
        Some((class, rest)) => {
            let mut cur: Vec<usize> = class.clone();
            permutations(&mut cur, 0, &mut |p: &[usize]| {
                let base = perm.len();
                perm.extend_from_slice(p);
                permute_classes(rest, perm, f);
                perm.truncate(base);
            });
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(&items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(v={}, edges={:?})", self.vertex_count, self.edges)
    }
}

/// Union-find over vertex indices.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Keep the smaller index as root so component ids are stable.
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    /// Component ids numbered 0.. in order of smallest member.
    pub fn component_ids(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0usize; n];
        for v in 0..n {
            let r = self.find(v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }
}

/// One step of a contraction sequence: the graph before the step and the
/// contracted edge.
#[derive(Debug, Clone)]
pub struct ContractionStep {
    pub graph: SimpleGraph,
    pub contracted_edge: (usize, usize),
}

/// A contraction sequence per the non-bridge contraction rule: each step
/// contracts a non-bridge edge whose contraction preserves the block
/// count, ending at a tree after exactly `v - b - 1` steps.
#[derive(Debug, Clone)]
pub struct ContractionSequence {
    pub steps: Vec<ContractionStep>,
    pub terminal: SimpleGraph,
}

/// Builds a contraction sequence for a connected graph. The edge chosen
/// at each step is the first (in edge order) non-bridge edge whose
/// contraction keeps the block count unchanged; such an edge always
/// exists while the graph is not a tree.
pub fn contraction_sequence(g: &SimpleGraph) -> ContractionSequence {
    assert!(g.is_connected(), "contraction sequence requires a connected graph");
    let mut steps = Vec::new();
    let mut cur = g.clone();
    loop {
        let blocks = invariants::block_count(&cur);
        let bridges: std::collections::HashSet<usize> = cur.bridges().into_iter().collect();
        if bridges.len() == cur.edge_count() {
            // Every edge is a bridge: the graph is a tree.
            break;
        }
        let mut chosen = None;
        for idx in 0..cur.edge_count() {
            if bridges.contains(&idx) {
                continue;
            }
            let (a, b) = cur.edges()[idx];
            let contracted = cur.contract_edge(a, b).unwrap();
            if invariants::block_count(&contracted) == blocks {
                chosen = Some(((a, b), contracted));
                break;
            }
        }
        let ((a, b), contracted) =
            chosen.expect("a block-preserving non-bridge edge always exists in a non-tree");
        steps.push(ContractionStep {
            graph: cur,
            contracted_edge: (a, b),
        });
        cur = contracted;
    }
    ContractionSequence {
        steps,
        terminal: cur,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::invariants::block_count;

    #[test]
    fn parse_triangle() {
        let g = SimpleGraph::parse("v 3\ne 0 1\ne 1 2\ne 2 0").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn parse_single_vertex() {
        let g = SimpleGraph::parse("v 1").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_rejects_loop() {
        let err = SimpleGraph::parse("v 2\ne 0 0").unwrap_err();
        assert_eq!(err, GraphError::LoopEdge { line: 2, v: 0 });
    }

    #[test]
    fn parse_rejects_duplicate_and_range() {
        let err = SimpleGraph::parse("v 3\ne 0 1\ne 1 0").unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { line: 3, a: 0, b: 1 });
        let err = SimpleGraph::parse("v 2\ne 0 5").unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { line: 2, v: 5, n: 2 });
        assert!(matches!(
            SimpleGraph::parse("v 2\nx 1 2").unwrap_err(),
            GraphError::Malformed { line: 2, .. }
        ));
    }

    #[test]
    fn serialize_round_trips() {
        let g = SimpleGraph::parse("v 4\ne 2 3\ne 0 1\ne 1 2").unwrap();
        let text = g.serialize();
        assert_eq!(SimpleGraph::parse(&text).unwrap(), g);
        assert_eq!(text, "v 4\ne 2 3\ne 0 1\ne 1 2\n");
    }

    #[test]
    fn contract_triangle_edge_collapses_parallel_pair() {
        let g = build("cycle(3)").unwrap();
        let c = g.contract_edge(0, 1).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 1);
    }

    #[test]
    fn delete_cycle_edge_gives_path() {
        let g = build("cycle(5)").unwrap();
        let d = g.delete_edge(0, 4).unwrap();
        assert_eq!(d.vertex_count(), 5);
        assert_eq!(d.edge_count(), 4);
        assert!(d.is_connected());
        assert!(d.bridges().len() == 4);
    }

    #[test]
    fn contract_outer_edge_of_glued_triangles() {
        // (G|P3)/e for e an outer edge is G with a double edge, which the
        // simple-graph model collapses back to the triangle.
        let g = build("edge_glue(cycle(3),cycle(3))").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 5));
        let outer = *g
            .edges()
            .iter()
            .find(|&&(a, b)| !(a <= 1 && b <= 1))
            .unwrap();
        let c = g.contract_edge(outer.0, outer.1).unwrap();
        let tri = build("cycle(3)").unwrap();
        assert_eq!(c.canonical_key(), tri.canonical_key());
    }

    #[test]
    fn contraction_sequence_lengths() {
        let tri = build("cycle(3)").unwrap();
        let seq = contraction_sequence(&tri);
        assert_eq!(seq.steps.len(), 1);
        assert_eq!(seq.terminal.edge_count(), 1);

        let theta = build("theta(3,2,3)").unwrap();
        let seq = contraction_sequence(&theta);
        // v - b - 1 = 7 - 1 - 1
        assert_eq!(seq.steps.len(), 5);
        assert_eq!(seq.terminal.vertex_count(), 2);
        assert_eq!(seq.terminal.edge_count(), 1);

        let path = build("path(5)").unwrap();
        let seq = contraction_sequence(&path);
        assert!(seq.steps.is_empty());
    }

    #[test]
    fn contraction_sequence_invariants_hold_stepwise() {
        let g = build("edge_glue(cycle(4),vertex_glue(cycle(3),cycle(5)))").unwrap();
        let b0 = block_count(&g);
        let seq = contraction_sequence(&g);
        assert_eq!(seq.steps.len(), g.vertex_count() - b0 - 1);
        let mut prev_v = g.vertex_count();
        for step in &seq.steps {
            assert!(step.graph.is_connected());
            assert_eq!(step.graph.vertex_count(), prev_v);
            assert!(block_count(&step.graph) >= b0);
            prev_v -= 1;
        }
        assert_eq!(seq.terminal.edge_count(), seq.terminal.vertex_count() - 1);
    }

    #[test]
    fn canonical_key_identifies_isomorphs() {
        let a = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = SimpleGraph::new(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        let p = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_ne!(a.canonical_key(), p.canonical_key());
    }
}
