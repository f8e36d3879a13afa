//! Construction expressions for the graph families used throughout:
//! `cycle(n)`, `path(n)`, `complete(n)`, `wheel(n)`, `theta(a1,...,ak)`,
//! `edge_glue(g,h)`, `edge_glue_k(g,h,k)`, `vertex_glue(g,h)`,
//! `bridge(g,h)`. Whitespace-insensitive, expressions nest.

use super::{GraphError, SimpleGraph};

/// Builds a graph from a construction expression.
pub fn build(expr: &str) -> Result<SimpleGraph, GraphError> {
    let mut p = Parser {
        src: expr.as_bytes(),
        pos: 0,
    };
    let g = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(g)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> GraphError {
        GraphError::Dsl(format!("at byte {}: {}", self.pos, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), GraphError> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, GraphError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn expr(&mut self) -> Result<SimpleGraph, GraphError> {
        let name = self.ident()?;
        self.eat(b'(')?;
        let g = match name.as_str() {
            "cycle" => cycle(self.number()?)?,
            "path" => path(self.number()?)?,
            "complete" => complete(self.number()?)?,
            "wheel" => wheel(self.number()?)?,
            "theta" => {
                let mut lens = vec![self.number()?];
                while self.peek() == Some(b',') {
                    self.eat(b',')?;
                    lens.push(self.number()?);
                }
                theta(&lens)?
            }
            "edge_glue" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                edge_glue_k(&a, &b, 1)?
            }
            "edge_glue_k" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b',')?;
                let k = self.number()?;
                edge_glue_k(&a, &b, k)?
            }
            "vertex_glue" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                vertex_glue(&a, &b)?
            }
            "bridge" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                bridge(&a, &b)?
            }
            other => return Err(self.err(&format!("unknown constructor {:?}", other))),
        };
        self.eat(b')')?;
        Ok(g)
    }
}

/// Cycle on `n >= 3` vertices; edges in walk order `(0,1),(1,2),...,(n-1,0)`.
pub fn cycle(n: usize) -> Result<SimpleGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Dsl(format!("cycle({}) needs n >= 3", n)));
    }
    SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path on `n >= 1` vertices (`n - 1` edges).
pub fn path(n: usize) -> Result<SimpleGraph, GraphError> {
    if n < 1 {
        return Err(GraphError::Dsl("path(0) is empty".into()));
    }
    SimpleGraph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))
}

/// Complete graph on `n >= 1` vertices, edges in lexicographic order.
pub fn complete(n: usize) -> Result<SimpleGraph, GraphError> {
    if n < 1 {
        return Err(GraphError::Dsl("complete(0) is empty".into()));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    SimpleGraph::new(n, edges)
}

/// Wheel on `n >= 4` vertices: hub 0 joined to a cycle on `1..n`. With
/// this convention the wheel has `n - 1` rim vertices, matching the
/// chromatic-polynomial identity used for its tail multiplicity.
pub fn wheel(n: usize) -> Result<SimpleGraph, GraphError> {
    if n < 4 {
        return Err(GraphError::Dsl(format!("wheel({}) needs n >= 4", n)));
    }
    let rim = n - 1;
    let mut edges: Vec<(usize, usize)> = (0..rim)
        .map(|i| (1 + i, 1 + (i + 1) % rim))
        .collect();
    edges.extend((1..n).map(|v| (0, v)));
    SimpleGraph::new(n, edges)
}

/// Multibridge graph: two terminals joined by `k` internally disjoint
/// paths, the i-th of length `lens[i]` (edge count). At most one path of
/// length 1 is allowed, otherwise the graph would have parallel edges.
pub fn theta(lens: &[usize]) -> Result<SimpleGraph, GraphError> {
    if lens.is_empty() {
        return Err(GraphError::Dsl("theta() needs at least one path".into()));
    }
    if lens.iter().any(|&a| a == 0) {
        return Err(GraphError::Dsl("theta path lengths must be >= 1".into()));
    }
    if lens.iter().filter(|&&a| a == 1).count() > 1 {
        return Err(GraphError::Dsl(
            "theta allows at most one path of length 1".into(),
        ));
    }
    if lens.len() == 1 {
        return path(lens[0] + 1);
    }
    let n = 2 + lens.iter().map(|&a| a - 1).sum::<usize>();
    let mut edges = Vec::new();
    let mut next = 2;
    for &a in lens {
        // Internal vertices next..next+a-1 chain terminal 0 to terminal 1.
        let mut prev = 0;
        for _ in 0..a - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    SimpleGraph::new(n, edges)
}

/// Disjoint union keeping both edge orders, `h` shifted after `g`.
fn disjoint_union(g: &SimpleGraph, h: &SimpleGraph) -> Result<SimpleGraph, GraphError> {
    let off = g.vertex_count();
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(a, b)| (a + off, b + off)));
    SimpleGraph::new(off + h.vertex_count(), edges)
}

/// Glues `h` onto `g` along a path of `k` consecutive edges: the first
/// such path found by DFS in each operand (for `k = 1`, the
/// lexicographically first edge). Identified vertices take `g`'s labels;
/// the surviving edges keep `g`'s order followed by `h`'s order.
pub fn edge_glue_k(
    g: &SimpleGraph,
    h: &SimpleGraph,
    k: usize,
) -> Result<SimpleGraph, GraphError> {
    if k == 0 {
        return Err(GraphError::Dsl("edge_glue_k needs k >= 1".into()));
    }
    let pg = find_path(g, k)
        .ok_or_else(|| GraphError::Dsl(format!("left operand has no path of {} edges", k)))?;
    let ph = find_path(h, k)
        .ok_or_else(|| GraphError::Dsl(format!("right operand has no path of {} edges", k)))?;

    // Map h's vertices: path vertices onto g's path, the rest appended.
    let mut map = vec![usize::MAX; h.vertex_count()];
    for (i, &v) in ph.iter().enumerate() {
        map[v] = pg[i];
    }
    let mut next = g.vertex_count();
    for v in 0..h.vertex_count() {
        if map[v] == usize::MAX {
            map[v] = next;
            next += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for &(a, b) in h.edges() {
        let (x, y) = (map[a], map[b]);
        let e = (x.min(y), x.max(y));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    SimpleGraph::new(next, edges)
}

/// First simple path with `k` edges in DFS order from the lowest vertex.
fn find_path(g: &SimpleGraph, k: usize) -> Option<Vec<usize>> {
    fn dfs(g: &SimpleGraph, path: &mut Vec<usize>, k: usize) -> bool {
        if path.len() == k + 1 {
            return true;
        }
        let last = *path.last().unwrap();
        let mut nbrs = g.neighbors(last);
        nbrs.sort_unstable();
        for w in nbrs {
            if !path.contains(&w) {
                path.push(w);
                if dfs(g, path, k) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    for start in 0..g.vertex_count() {
        let mut path = vec![start];
        if dfs(g, &mut path, k) {
            return Some(path);
        }
    }
    None
}

/// Identifies vertex 0 of each operand.
pub fn vertex_glue(g: &SimpleGraph, h: &SimpleGraph) -> Result<SimpleGraph, GraphError> {
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        return Err(GraphError::Dsl("vertex_glue needs nonempty operands".into()));
    }
    let map = |v: usize| if v == 0 { 0 } else { g.vertex_count() + v - 1 };
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(a, b)| (map(a), map(b))));
    SimpleGraph::new(g.vertex_count() + h.vertex_count() - 1, edges)
}

/// Disjoint union plus a new bridge between vertex 0 of each operand.
pub fn bridge(g: &SimpleGraph, h: &SimpleGraph) -> Result<SimpleGraph, GraphError> {
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        return Err(GraphError::Dsl("bridge needs nonempty operands".into()));
    }
    let mut u = disjoint_union(g, h)?;
    u.push_edge(0, g.vertex_count(), u.edge_count() + 1)?;
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_shape_examples() {
        let t = build("theta(3,2,3)").unwrap();
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.edge_count(), 8);
    }

    #[test]
    fn four_squares_at_a_vertex() {
        let g =
            build("vertex_glue(vertex_glue(vertex_glue(cycle(4),cycle(4)),cycle(4)),cycle(4))")
                .unwrap();
        assert_eq!(g.vertex_count(), 13);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.degree(0), 8);
    }

    #[test]
    fn glued_triangles_share_an_edge() {
        let g = build("edge_glue(cycle(3),cycle(3))").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn glue_two_edges_matches_theta() {
        // P5 |^2 P5 is the multibridge graph theta(3,2,3).
        let g = build("edge_glue_k(cycle(5),cycle(5),2)").unwrap();
        let t = build("theta(3,2,3)").unwrap();
        assert_eq!(g.canonical_key(), t.canonical_key());
    }

    #[test]
    fn wheel_and_complete() {
        let w = build("wheel(5)").unwrap();
        assert_eq!((w.vertex_count(), w.edge_count()), (5, 8));
        let k4 = build("complete(4)").unwrap();
        assert_eq!((k4.vertex_count(), k4.edge_count()), (4, 6));
    }

    #[test]
    fn rejects_bad_arity_and_params() {
        assert!(build("cycle(2)").is_err());
        assert!(build("cycle(3,4)").is_err());
        assert!(build("nonsense(3)").is_err());
        assert!(build("edge_glue_k(cycle(3),cycle(3),9)").is_err());
        assert!(build("theta(1,1,3)").is_err());
    }

    #[test]
    fn whitespace_insensitive() {
        let a = build("edge_glue( cycle( 3 ) ,cycle(4) )").unwrap();
        let b = build("edge_glue(cycle(3),cycle(4))").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bridge_adds_one_edge() {
        let g = build("bridge(cycle(3),cycle(3))").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
    }
}
