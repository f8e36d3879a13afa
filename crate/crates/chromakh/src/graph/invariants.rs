//! Combinatorial invariants consumed by the span, width, coefficient and
//! torsion-pattern formulas: block count, girth, bipartiteness,
//! cyclomatic number, and small-subgraph counts.

use super::SimpleGraph;
use std::collections::VecDeque;

/// Invariant bundle for a graph. For disconnected input every field is
/// reported per component and aggregated: block count and subgraph counts
/// sum, girth is the minimum over components, bipartite means every
/// component is bipartite, and `p1` uses the general cyclomatic number
/// `E - v + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInvariants {
    pub v: usize,
    pub e: usize,
    /// Number of blocks (bridges and maximal 2-connected subgraphs).
    pub blocks: usize,
    /// Girth; 0 for forests.
    pub girth: usize,
    pub bipartite: bool,
    /// Cyclomatic number `E - v + c`.
    pub p1: usize,
    /// Triangle count.
    pub t3: usize,
    /// Induced (chordless) 4-cycle count.
    pub t4: usize,
    /// K4-subgraph count.
    pub k4: usize,
}

impl GraphInvariants {
    pub fn compute(g: &SimpleGraph) -> GraphInvariants {
        let comps = g.component_count();
        GraphInvariants {
            v: g.vertex_count(),
            e: g.edge_count(),
            blocks: block_count(g),
            girth: girth(g),
            bipartite: is_bipartite(g),
            p1: g.edge_count() + comps - g.vertex_count(),
            t3: triangle_count(g),
            t4: induced_c4_count(g),
            k4: k4_count(g),
        }
    }
}

/// Number of biconnected components (blocks), counting bridges.
pub fn block_count(g: &SimpleGraph) -> usize {
    block_edge_partition(g).len()
}

/// Partition of the edge set into blocks (biconnected components), each
/// block a list of edge indices; bridges appear as singleton blocks.
pub fn block_edge_partition(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    if n == 0 {
        return vec![];
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        adj[a].push((b, idx));
        adj[b].push((a, idx));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut on_stack = vec![false; g.edge_count()];

    // Iterative DFS; frames are (vertex, entry edge id, neighbor cursor).
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, entry, ref mut cursor)) = stack.last_mut() {
            if *cursor < adj[v].len() {
                let (w, eid) = adj[v][*cursor];
                *cursor += 1;
                if eid == entry {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(eid);
                    on_stack[eid] = true;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, eid, 0));
                } else if disc[w] < disc[v] {
                    // Back edge.
                    edge_stack.push(eid);
                    on_stack[eid] = true;
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (u, _, _)) = stack.last_mut() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        // The tree edge (u,v) closes a block: pop edges up
                        // to and including it.
                        let tree_edge = entry;
                        let mut block = Vec::new();
                        while let Some(eid) = edge_stack.pop() {
                            on_stack[eid] = false;
                            block.push(eid);
                            if eid == tree_edge {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort();
    blocks
}

/// Girth via BFS from every vertex; 0 when the graph is a forest.
pub fn girth(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut best = usize::MAX;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut q = VecDeque::new();
        dist[s] = 0;
        q.push_back(s);
        while let Some(u) = q.pop_front() {
            if dist[u] * 2 >= best {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    q.push_back(w);
                } else if w != parent[u] {
                    // Non-tree edge closes a walk through s containing a cycle.
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

pub fn is_bipartite(g: &SimpleGraph) -> bool {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    q.push_back(w);
                } else if color[w] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn triangle_count(g: &SimpleGraph) -> usize {
    let adj = g.adjacency();
    let mut total = 0;
    for &(a, b) in g.edges() {
        total += (adj[a] & adj[b]).count_ones() as usize;
    }
    total / 3
}

/// Induced 4-cycles: 4-subsets spanning exactly four edges with every
/// vertex of induced degree two.
pub fn induced_c4_count(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let quad = [a, b, c, d];
                    let mask = (1u64 << a) | (1 << b) | (1 << c) | (1 << d);
                    if quad
                        .iter()
                        .all(|&v| (adj[v] & mask).count_ones() == 2)
                    {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

pub fn k4_count(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if adj[a] & (1 << b) == 0 {
                continue;
            }
            let ab = adj[a] & adj[b];
            for c in b + 1..n {
                if ab & (1 << c) == 0 {
                    continue;
                }
                let abc = ab & adj[c];
                count += (abc >> (c + 1)).count_ones() as usize;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dsl::build;

    #[test]
    fn theta_323_invariants() {
        let g = build("theta(3,2,3)").unwrap();
        let inv = GraphInvariants::compute(&g);
        assert_eq!(inv.v, 7);
        assert_eq!(inv.e, 8);
        assert_eq!(inv.blocks, 1);
        assert_eq!(inv.girth, 5);
        assert_eq!(inv.p1, 2);
        assert!(!inv.bipartite);
    }

    #[test]
    fn four_squares_invariants() {
        let g =
            build("vertex_glue(vertex_glue(vertex_glue(cycle(4),cycle(4)),cycle(4)),cycle(4))")
                .unwrap();
        let inv = GraphInvariants::compute(&g);
        assert_eq!(inv.v, 13);
        assert_eq!(inv.blocks, 4);
        assert_eq!(inv.girth, 4);
        assert!(inv.bipartite);
        assert_eq!(inv.t4, 4);
    }

    #[test]
    fn tree_invariants() {
        let g = build("path(5)").unwrap();
        let inv = GraphInvariants::compute(&g);
        assert_eq!(inv.girth, 0);
        assert_eq!(inv.blocks, 4);
        assert_eq!(inv.p1, 0);
        assert!(inv.bipartite);
    }

    #[test]
    fn k4_invariants() {
        let g = build("complete(4)").unwrap();
        let inv = GraphInvariants::compute(&g);
        assert_eq!(inv.t3, 4);
        assert_eq!(inv.t4, 0);
        assert_eq!(inv.k4, 1);
        assert_eq!(inv.p1, 3);
        assert_eq!(inv.blocks, 1);
        assert_eq!(inv.girth, 3);
    }

    #[test]
    fn k5_counts() {
        let g = build("complete(5)").unwrap();
        let inv = GraphInvariants::compute(&g);
        assert_eq!(inv.t3, 10);
        assert_eq!(inv.k4, 5);
        assert_eq!(inv.t4, 0);
    }

    #[test]
    fn blocks_of_glued_shapes() {
        let g = build("edge_glue(cycle(3),cycle(3))").unwrap();
        assert_eq!(block_count(&g), 1);
        let h = build("vertex_glue(cycle(3),cycle(4))").unwrap();
        assert_eq!(block_count(&h), 2);
        let b = build("bridge(cycle(3),cycle(3))").unwrap();
        assert_eq!(block_count(&b), 3);
    }

    #[test]
    fn girth_of_multibridge_matches_min_pair_sum() {
        // Brute-force confirmation of girth(theta(a1..ak)) = min pairwise sum.
        for lens in [
            vec![2, 2, 2],
            vec![3, 2, 3],
            vec![4, 2, 4],
            vec![2, 3, 4],
            vec![5, 1, 5],
            vec![3, 3, 3, 3],
            vec![5, 4, 3],
        ] {
            let g = crate::graph::dsl::theta(&lens).unwrap();
            let mut expected = usize::MAX;
            for i in 0..lens.len() {
                for j in i + 1..lens.len() {
                    expected = expected.min(lens[i] + lens[j]);
                }
            }
            assert_eq!(girth(&g), expected, "theta({:?})", lens);
        }
    }

    #[test]
    fn blockbound_inequality() {
        // b <= v - M + 1 with M any cycle length, girth included.
        for expr in [
            "edge_glue(cycle(5),cycle(4))",
            "vertex_glue(cycle(3),cycle(6))",
            "theta(3,2,3)",
            "wheel(6)",
        ] {
            let g = build(expr).unwrap();
            let inv = GraphInvariants::compute(&g);
            assert!(inv.girth > 0);
            assert!(inv.blocks <= inv.v - inv.girth + 1, "{}", expr);
        }
    }
}
