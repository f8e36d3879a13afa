//! Exact integer polynomials and chromatic polynomial computation via
//! deletion-contraction with block decomposition and memoization on
//! canonical small-graph keys.

use crate::graph::{self, GraphInvariants, SimpleGraph};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no block count")]
    ZeroPolynomial,
    #[error("polynomial json: {0}")]
    Json(String),
}

/// Integer-coefficient polynomial, `coeffs[k]` the coefficient of degree
/// `k`, trailing zeros trimmed. The zero polynomial has no degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn lowest_nonzero_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = IntPolynomial::monomial(1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division by `x^k`; panics if not divisible.
    pub fn div_by_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        assert!(
            self.coeffs.iter().take(k).all(|c| c.is_zero()),
            "polynomial not divisible by x^{}",
            k
        );
        Self::from_coeffs(self.coeffs[k..].to_vec())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Re-expands `p(lambda)` in the variable `q = lambda - 1` by exact
    /// binomial substitution, i.e. returns `p(1 + q)`.
    pub fn to_q_basis(&self) -> IntPolynomial {
        let shift = IntPolynomial::from_i64(&[1, 1]);
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift);
            acc = acc.add(&IntPolynomial::monomial(c.clone(), 0));
        }
        acc
    }

    /// JSON per the documented schema:
    /// `{"var": "...", "coeffs": ["c0", "c1", ...]}` with exact decimal
    /// strings.
    pub fn to_json(&self, var: &str) -> serde_json::Value {
        json!({
            "var": var,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<(String, IntPolynomial), PolyError> {
        let var = v
            .get("var")
            .and_then(|x| x.as_str())
            .ok_or_else(|| PolyError::Json("missing var".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| PolyError::Json("missing coeffs".into()))?;
        let coeffs: Result<Vec<BigInt>, _> = coeffs
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| PolyError::Json("coefficients must be strings".into()))
                    .and_then(|s| {
                        s.parse::<BigInt>()
                            .map_err(|e| PolyError::Json(e.to_string()))
                    })
            })
            .collect();
        Ok((var.to_string(), IntPolynomial::from_coeffs(coeffs?)))
    }
}

impl IntPolynomial {
    /// Renders with a chosen variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{}", k));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

/// Memo table for deletion-contraction, keyed on canonical forms of
/// subgraphs small enough to canonicalize cheaply.
pub type ChromaticMemo = HashMap<(usize, Vec<u64>), IntPolynomial>;

const MEMO_MAX_VERTICES: usize = 8;

/// Exact chromatic polynomial in the variable lambda.
pub fn chromatic_polynomial(g: &SimpleGraph) -> IntPolynomial {
    let mut memo = ChromaticMemo::new();
    chromatic_polynomial_memo(g, &mut memo)
}

/// Chromatic polynomial with a caller-supplied memo table. The memo is
/// the only shared state; shard one per worker for concurrent use.
pub fn chromatic_polynomial_memo(g: &SimpleGraph, memo: &mut ChromaticMemo) -> IntPolynomial {
    // Components multiply.
    if g.vertex_count() == 0 {
        return IntPolynomial::monomial(1, 0);
    }
    if !g.is_connected() {
        let comp = g.components();
        let count = comp.iter().max().unwrap() + 1;
        let mut acc = IntPolynomial::monomial(1, 0);
        for c in 0..count {
            let verts: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] == c).collect();
            acc = acc.mul(&chromatic_polynomial_memo(&induced(g, &verts), memo));
        }
        return acc;
    }
    connected_chromatic(g, memo)
}

fn induced(g: &SimpleGraph, verts: &[usize]) -> SimpleGraph {
    let mut idx = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        idx[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(a, b)| idx[a] != usize::MAX && idx[b] != usize::MAX)
        .map(|&(a, b)| (idx[a], idx[b]));
    SimpleGraph::new(verts.len(), edges).unwrap()
}

fn connected_chromatic(g: &SimpleGraph, memo: &mut ChromaticMemo) -> IntPolynomial {
    let v = g.vertex_count();
    let e = g.edge_count();

    // Closed forms for the shapes deletion-contraction reaches most often.
    if e == v - 1 {
        // Tree: lambda (lambda-1)^(v-1).
        return IntPolynomial::from_i64(&[0, 1])
            .mul(&IntPolynomial::from_i64(&[-1, 1]).pow(v - 1));
    }
    if e == v && g.adjacency().iter().all(|r| r.count_ones() == 2) {
        return cycle_chromatic(v);
    }
    if e == v * (v - 1) / 2 {
        // Complete: falling factorial.
        let mut acc = IntPolynomial::monomial(1, 0);
        for k in 0..v {
            acc = acc.mul(&IntPolynomial::from_i64(&[-(k as i64), 1]));
        }
        return acc;
    }

    // Block decomposition: P(G) = prod P(B_i) / lambda^(b-1).
    let blocks = block_subgraphs(g);
    if blocks.len() > 1 {
        let mut acc = IntPolynomial::monomial(1, 0);
        for b in &blocks {
            acc = acc.mul(&connected_chromatic(b, memo));
        }
        return acc.div_by_power(blocks.len() - 1);
    }

    let key = if v <= MEMO_MAX_VERTICES {
        let key = g.canonical_key();
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        Some(key)
    } else {
        None
    };

    // 2-connected, not a cycle or complete graph: delete-contract on the
    // first edge (necessarily a non-bridge here).
    let (a, b) = g.edges()[0];
    let deleted = g.delete_edge(a, b).unwrap();
    let contracted = g.contract_edge(a, b).unwrap();
    let p = chromatic_polynomial_memo(&deleted, memo)
        .sub(&chromatic_polynomial_memo(&contracted, memo));

    if let Some(key) = key {
        memo.insert(key, p.clone());
    }
    p
}

/// `(lambda-1)^n + (-1)^n (lambda-1)`.
pub fn cycle_chromatic(n: usize) -> IntPolynomial {
    let lm1 = IntPolynomial::from_i64(&[-1, 1]);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    lm1.pow(n).add(&IntPolynomial::from_i64(&[-sign, sign]))
}

/// Blocks realized as standalone graphs (edge order inherited from `g`,
/// vertices compacted).
fn block_subgraphs(g: &SimpleGraph) -> Vec<SimpleGraph> {
    graph::block_edge_partition(g)
        .into_iter()
        .map(|idxs| {
            let mut verts: Vec<usize> = idxs
                .iter()
                .flat_map(|&i| {
                    let (a, b) = g.edges()[i];
                    [a, b]
                })
                .collect();
            verts.sort_unstable();
            verts.dedup();
            let mut idx = vec![usize::MAX; g.vertex_count()];
            for (k, &v) in verts.iter().enumerate() {
                idx[v] = k;
            }
            SimpleGraph::new(
                verts.len(),
                idxs.iter().map(|&i| {
                    let (a, b) = g.edges()[i];
                    (idx[a], idx[b])
                }),
            )
            .unwrap()
        })
        .collect()
}

/// First four coefficients `(c_v, c_{v-1}, c_{v-2}, c_{v-3})` of the
/// chromatic polynomial from subgraph counts. The `k4` term enters with
/// coefficient -2 (the variant confirmed by direct expansion on K4).
pub fn farrell_coefficients(inv: &GraphInvariants) -> (BigInt, BigInt, BigInt, BigInt) {
    let e = BigInt::from(inv.e);
    let t3 = BigInt::from(inv.t3);
    let t4 = BigInt::from(inv.t4);
    let k4 = BigInt::from(inv.k4);
    let c2 = binom(inv.e, 2) - &t3;
    let c3 = -binom(inv.e, 3) + (&e - 2) * &t3 + &t4 - 2 * &k4;
    (BigInt::one(), -e, c2, c3)
}

pub fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Multiplicity of the factor `(lambda - 1)`, read off as the lowest
/// nonzero degree in the q-basis; equals the block count for chromatic
/// polynomials of connected graphs.
pub fn block_count_from_polynomial(p: &IntPolynomial) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(p.to_q_basis()
        .lowest_nonzero_degree()
        .expect("nonzero polynomial"))
}

/// The state-sum form of the chromatic polynomial: brute force over all
/// spanning subgraphs, used as an independent oracle in tests.
pub fn chromatic_state_sum(g: &SimpleGraph) -> IntPolynomial {
    let e = g.edge_count();
    assert!(e <= 20, "state sum oracle is for small graphs");
    let mut acc = IntPolynomial::zero();
    for s in 0u64..(1 << e) {
        let k = subset_components(g, s);
        let term = IntPolynomial::monomial(1, k);
        if s.count_ones() % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

pub(crate) fn subset_components(g: &SimpleGraph, subset: u64) -> usize {
    let mut dsu = graph::Dsu::new(g.vertex_count());
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if subset & (1 << i) != 0 {
            dsu.union(a, b);
        }
    }
    let ids = dsu.component_ids();
    if ids.is_empty() {
        0
    } else {
        ids.iter().max().unwrap() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build;

    fn poly_lambda(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    #[test]
    fn k4_polynomial() {
        let p = chromatic_polynomial(&build("complete(4)").unwrap());
        // lambda^4 - 6 lambda^3 + 11 lambda^2 - 6 lambda, rechecked
        // against the state sum below.
        assert_eq!(p, poly_lambda(&[0, -6, 11, -6, 1]));
        assert_eq!(p, chromatic_state_sum(&build("complete(4)").unwrap()));
    }

    #[test]
    fn cycle5_polynomial() {
        let g = build("cycle(5)").unwrap();
        let p = chromatic_polynomial(&g);
        assert_eq!(p, chromatic_state_sum(&g));
        assert_eq!(p, cycle_chromatic(5));
        // q-basis: q^5 - q.
        assert_eq!(p.to_q_basis(), poly_lambda(&[0, -1, 0, 0, 0, 1]));
    }

    #[test]
    fn single_vertex_polynomial() {
        let g = SimpleGraph::new(1, []).unwrap();
        assert_eq!(chromatic_polynomial(&g), poly_lambda(&[0, 1]));
    }

    #[test]
    fn q_basis_examples() {
        // K4: q^4 - 2q^3 - q^2 + 2q.
        let k4 = chromatic_polynomial(&build("complete(4)").unwrap());
        assert_eq!(k4.to_q_basis(), poly_lambda(&[0, 2, -1, -2, 1]));
        // lambda -> q + 1.
        assert_eq!(poly_lambda(&[0, 1]).to_q_basis(), poly_lambda(&[1, 1]));
    }

    #[test]
    fn farrell_matches_k4_and_cycle() {
        let k4inv = GraphInvariants::compute(&build("complete(4)").unwrap());
        let (c0, c1, c2, c3) = farrell_coefficients(&k4inv);
        assert_eq!(c0, BigInt::from(1));
        assert_eq!(c1, BigInt::from(-6));
        assert_eq!(c2, BigInt::from(11));
        assert_eq!(c3, BigInt::from(-6));

        let c5inv = GraphInvariants::compute(&build("cycle(5)").unwrap());
        let (_, _, c2, _) = farrell_coefficients(&c5inv);
        assert_eq!(c2, BigInt::from(10));
    }

    #[test]
    fn block_counts_from_polynomials() {
        let k4 = chromatic_polynomial(&build("complete(4)").unwrap());
        assert_eq!(block_count_from_polynomial(&k4).unwrap(), 1);
        let tree = chromatic_polynomial(&build("path(6)").unwrap());
        assert_eq!(block_count_from_polynomial(&tree).unwrap(), 5);
        let two_squares = chromatic_polynomial(&build("vertex_glue(cycle(4),cycle(4))").unwrap());
        assert_eq!(block_count_from_polynomial(&two_squares).unwrap(), 2);
        assert_eq!(
            block_count_from_polynomial(&IntPolynomial::zero()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn deletion_contraction_identity() {
        for expr in ["complete(4)", "theta(3,2,3)", "wheel(5)", "edge_glue(cycle(4),cycle(5))"] {
            let g = build(expr).unwrap();
            let p = chromatic_polynomial(&g);
            for &(a, b) in g.edges() {
                let del = chromatic_polynomial(&g.delete_edge(a, b).unwrap());
                let con = chromatic_polynomial(&g.contract_edge(a, b).unwrap());
                assert_eq!(p, del.sub(&con), "{} at ({},{})", expr, a, b);
            }
        }
    }

    #[test]
    fn matches_state_sum_on_small_graphs() {
        for expr in [
            "theta(3,2,3)",
            "wheel(5)",
            "vertex_glue(cycle(3),cycle(4))",
            "bridge(cycle(3),cycle(4))",
            "complete(5)",
        ] {
            let g = build(expr).unwrap();
            assert_eq!(
                chromatic_polynomial(&g),
                chromatic_state_sum(&g),
                "{}",
                expr
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let p = chromatic_polynomial(&build("complete(4)").unwrap());
        let j = p.to_json("lambda");
        let (var, q) = IntPolynomial::from_json(&j).unwrap();
        assert_eq!(var, "lambda");
        assert_eq!(p, q);
    }
}
