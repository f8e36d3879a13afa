//! The brute-force homology oracle: builds the chromatic cube complex
//! over `A_m = Z[x]/(x^m)` slice by slice, never materializing the whole
//! cube, and computes integral homology per bigrading through Smith
//! normal form. The same slice machinery is reused by the Khovanov cube.

pub mod snf;

use crate::chrompoly::IntPolynomial;
use crate::graph::{Dsu, SimpleGraph};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde_json::json;
use snf::{snf_diagonal, SnfOutcome, SparseIntMat};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("edge count {0} exceeds the configured limit {1}")]
    EdgeLimit(usize, usize),
    #[error("crossing count {0} exceeds the configured limit {1}")]
    CrossingLimit(usize, usize),
    #[error("algebra requires 2 <= m <= 16, got {0}")]
    BadAlgebra(usize),
    #[error("state labels support at most 16 components, graph has {0} vertices")]
    TooManyComponents(usize),
}

/// The algebra `A_m = Z[x]/(x^m)` with basis `1, x, ..., x^(m-1)`;
/// `deg(x^k) = k`, so `qdim = 1 + q + ... + q^(m-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraSpec {
    m: usize,
}

impl AlgebraSpec {
    pub fn new(m: usize) -> Result<Self, HomError> {
        if !(2..=16).contains(&m) {
            return Err(HomError::BadAlgebra(m));
        }
        Ok(AlgebraSpec { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `1 + q + ... + q^(m-1)`.
    pub fn qdim(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(vec![BigInt::one(); self.m])
    }
}

/// One homology group: free rank plus a torsion multiset, stored as
/// (order, multiplicity) with orders ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupData {
    pub free: usize,
    pub torsion: Vec<(BigUint, usize)>,
}

impl GroupData {
    pub fn free(rank: usize) -> Self {
        GroupData {
            free: rank,
            torsion: vec![],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    /// Multiplicity of `Z_order` summands.
    pub fn torsion_mult(&self, order: u32) -> usize {
        let order = BigUint::from(order);
        self.torsion
            .iter()
            .find(|(o, _)| *o == order)
            .map_or(0, |(_, m)| *m)
    }

    pub fn total_torsion(&self) -> usize {
        self.torsion.iter().map(|(_, m)| m).sum()
    }

    fn from_torsion_list(free: usize, orders: &[BigInt]) -> Self {
        let mut torsion: BTreeMap<BigUint, usize> = BTreeMap::new();
        for o in orders {
            *torsion.entry(o.magnitude().clone()).or_insert(0) += 1;
        }
        GroupData {
            free,
            torsion: torsion.into_iter().collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for (o, m) in &self.torsion {
            if *m == 1 {
                parts.push(format!("Z_{}", o));
            } else {
                parts.push(format!("Z_{}^{}", o, m));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Map `(i, j) -> group`, the output of every homology computation.
/// Trivial groups are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedGroups {
    groups: BTreeMap<(i32, i32), GroupData>,
}

impl BigradedGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: i32, j: i32, g: GroupData) {
        if !g.is_trivial() {
            self.groups.insert((i, j), g);
        }
    }

    pub fn add_free(&mut self, i: i32, j: i32, rank: usize) {
        if rank == 0 {
            return;
        }
        self.groups.entry((i, j)).or_default().free += rank;
    }

    pub fn add_torsion(&mut self, i: i32, j: i32, order: u32, mult: usize) {
        if mult == 0 {
            return;
        }
        let g = self.groups.entry((i, j)).or_default();
        let order = BigUint::from(order);
        match g.torsion.iter_mut().find(|(o, _)| *o == order) {
            Some((_, m)) => *m += mult,
            None => {
                g.torsion.push((order, mult));
                g.torsion.sort();
            }
        }
    }

    pub fn get(&self, i: i32, j: i32) -> GroupData {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i32, i32), &GroupData)> {
        self.groups.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Smallest and largest homological degree with a nontrivial group.
    pub fn i_range(&self) -> Option<(i32, i32)> {
        let mut it = self.groups.keys().map(|&(i, _)| i);
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for i in it {
            lo = lo.min(i);
            hi = hi.max(i);
        }
        Some((lo, hi))
    }

    pub fn hspan(&self) -> usize {
        self.i_range().map_or(0, |(lo, hi)| (hi - lo + 1) as usize)
    }

    /// Homological span of torsion.
    pub fn hspan_torsion(&self) -> usize {
        let tors: Vec<i32> = self
            .groups
            .iter()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(&(i, _), _)| i)
            .collect();
        match (tors.iter().min(), tors.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    /// Minimal quantum grading with a nontrivial group.
    pub fn j_min(&self) -> Option<i32> {
        self.groups.keys().map(|&(_, j)| j).min()
    }

    /// Homological width over slope-1 diagonals `i + j`.
    pub fn hw_diagonal(&self) -> usize {
        let ds: Vec<i32> = self.groups.keys().map(|&(i, j)| i + j).collect();
        match (ds.iter().min(), ds.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    /// Homological width over slope-2 diagonals `j - 2i` (Khovanov
    /// convention): half the diagonal spread plus one.
    pub fn hw_khovanov(&self) -> usize {
        let ds: Vec<i32> = self.groups.keys().map(|&(i, j)| j - 2 * i).collect();
        match (ds.iter().min(), ds.iter().max()) {
            (Some(lo), Some(hi)) => ((hi - lo) / 2 + 1) as usize,
            _ => 0,
        }
    }

    /// Torsion width over slope-1 diagonals.
    pub fn hw_torsion_diagonal(&self) -> usize {
        let ds: Vec<i32> = self
            .groups
            .iter()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(&(i, j), _)| i + j)
            .collect();
        match (ds.iter().min(), ds.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    /// Total Z_2 exponent per homological degree `i` (all quantum
    /// gradings combined), for torsion-pattern comparisons.
    pub fn z2_exponents_by_i(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(i, _), g) in &self.groups {
            let m = g.torsion_mult(2);
            if m > 0 {
                *out.entry(i).or_insert(0) += m;
            }
        }
        out
    }

    /// Shifts every group: `(i, j) -> (i + di, j + dj)`.
    pub fn shifted(&self, di: i32, dj: i32) -> BigradedGroups {
        BigradedGroups {
            groups: self
                .groups
                .iter()
                .map(|(&(i, j), g)| ((i + di, j + dj), g.clone()))
                .collect(),
        }
    }

    /// Graded Euler characteristic as a polynomial in q. Only valid for
    /// non-negative quantum gradings (chromatic homology).
    pub fn euler_characteristic(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for (&(i, j), g) in &self.groups {
            assert!(j >= 0, "chromatic Euler characteristic needs j >= 0");
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            let term = IntPolynomial::monomial(sign * g.free as i64, j as usize);
            acc = acc.add(&term);
        }
        acc
    }

    /// JSON per the documented schema, sorted by `(i, j)`:
    /// `{"groups": [{"i": .., "j": .., "free": .., "torsion": [["2", 3]]}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_with_keys("i", "j")
    }

    /// Same schema with the Khovanov key names `p`, `q`.
    pub fn to_json_with_keys(&self, ikey: &str, jkey: &str) -> serde_json::Value {
        let groups: Vec<serde_json::Value> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| {
                json!({
                    ikey: i,
                    jkey: j,
                    "free": g.free,
                    "torsion": g
                        .torsion
                        .iter()
                        .map(|(o, m)| json!([o.to_string(), m]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "groups": groups })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<BigradedGroups> {
        Self::from_json_with_keys(v, "i", "j")
    }

    pub fn from_json_with_keys(
        v: &serde_json::Value,
        ikey: &str,
        jkey: &str,
    ) -> Option<BigradedGroups> {
        let mut out = BigradedGroups::new();
        for g in v.get("groups")?.as_array()? {
            let i = g.get(ikey)?.as_i64()? as i32;
            let j = g.get(jkey)?.as_i64()? as i32;
            let free = g.get("free")?.as_u64()? as usize;
            let mut torsion = Vec::new();
            for t in g.get("torsion")?.as_array()? {
                let pair = t.as_array()?;
                let order: BigUint = pair.first()?.as_str()?.parse().ok()?;
                let mult = pair.get(1)?.as_u64()? as usize;
                torsion.push((order, mult));
            }
            torsion.sort();
            out.insert(i, j, GroupData { free, torsion });
        }
        Some(out)
    }
}

/// Default cap on the cube dimension for graph homology.
pub const DEFAULT_EDGE_LIMIT: usize = 24;

/// An enhanced state: a spanning-subgraph bitmask plus one algebra label
/// per component, packed 4 bits each in component order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnhancedState {
    pub subset: u32,
    pub labels: u64,
}

/// One `(i, j)` slice of the chromatic complex: its basis and the
/// differential matrix into the `(i+1, j)` slice.
pub struct GradedChainSlice {
    pub i: usize,
    pub j: i32,
    pub basis: Vec<EnhancedState>,
    pub target_dim: usize,
    pub d_out: SparseIntMat,
}

/// Streams all `2^E` spanning subgraphs with their component counts, in
/// deterministic order (edge count, then subset value).
pub fn enumerate_states(
    g: &SimpleGraph,
    limit: usize,
) -> Result<Vec<(u32, usize)>, HomError> {
    let e = g.edge_count();
    if e > limit {
        return Err(HomError::EdgeLimit(e, limit));
    }
    let mut by_size: Vec<Vec<(u32, usize)>> = vec![Vec::new(); e + 1];
    for s in 0u32..(1u32 << e) {
        let k = crate::chrompoly::subset_components(g, s as u64);
        by_size[s.count_ones() as usize].push((s, k));
    }
    Ok(by_size.into_iter().flatten().collect())
}

/// Component structure of one subset: component id per vertex, ids
/// numbered by smallest member vertex, plus the count.
fn subset_comps(g: &SimpleGraph, subset: u32) -> (Vec<u8>, usize) {
    let mut dsu = Dsu::new(g.vertex_count());
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        if subset & (1 << idx) != 0 {
            dsu.union(a, b);
        }
    }
    let ids = dsu.component_ids();
    let k = ids.iter().max().map_or(0, |&m| m + 1);
    (ids.iter().map(|&x| x as u8).collect(), k)
}

fn label_of(labels: u64, comp: usize) -> u64 {
    (labels >> (4 * comp)) & 0xf
}

fn with_label(labels: u64, comp: usize, val: u64) -> u64 {
    (labels & !(0xfu64 << (4 * comp))) | (val << (4 * comp))
}

/// Sum of label degrees: `deg(x^a) = a`.
fn quantum_degree(labels: u64, k: usize) -> i32 {
    (0..k).map(|c| label_of(labels, c) as i32).sum()
}

/// Basis of level `i` grouped by quantum degree, each group sorted by
/// (subset, labels).
fn level_basis(
    m: usize,
    subsets: &[(u32, usize)],
) -> BTreeMap<i32, Vec<EnhancedState>> {
    let mut by_j: BTreeMap<i32, Vec<EnhancedState>> = BTreeMap::new();
    for &(subset, k) in subsets {
        // All m^k labelings in lexicographic label order.
        let total = (m as u64).pow(k as u32);
        for code in 0..total {
            let mut labels = 0u64;
            let mut c = code;
            let mut j = 0i32;
            for comp in 0..k {
                let a = c % m as u64;
                c /= m as u64;
                labels = with_label(labels, comp, a);
                j += a as i32;
            }
            by_j.entry(j)
                .or_default()
                .push(EnhancedState { subset, labels });
        }
    }
    for states in by_j.values_mut() {
        states.sort_unstable_by_key(|s| (s.subset, s.labels));
    }
    by_j
}

/// Sign exponent: number of edges present in `subset` before `edge`.
fn edge_sign(subset: u32, edge: usize) -> i64 {
    let below = subset & ((1u32 << edge) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Builds the differential matrix from the `(i, j)` slice into
/// `(i+1, j)`. Rows index the domain basis, columns the target basis.
fn slice_matrix(
    g: &SimpleGraph,
    m: usize,
    domain: &[EnhancedState],
    target: &[EnhancedState],
    comp_cache: &BTreeMap<u32, (Vec<u8>, usize)>,
) -> SparseIntMat {
    let mut mat = SparseIntMat::new(domain.len(), target.len());
    let e = g.edge_count();
    for (row, st) in domain.iter().enumerate() {
        let (comp, k) = &comp_cache[&st.subset];
        for edge in 0..e {
            if st.subset & (1 << edge) != 0 {
                continue;
            }
            let new_subset = st.subset | (1 << edge);
            let (ncomp, nk) = &comp_cache[&new_subset];
            let (a, b) = g.edges()[edge];
            let sign = edge_sign(st.subset, edge);
            let new_labels = if nk == k {
                // Edge within a component: identity on labels, but the
                // component numbering is unchanged as a partition.
                relabel(st.labels, comp, ncomp, *k, None)
            } else {
                // Merge: multiply the two labels; x^a * x^b = x^(a+b),
                // zero when a + b >= m.
                let ca = comp[a] as usize;
                let cb = comp[b] as usize;
                let sum = label_of(st.labels, ca) + label_of(st.labels, cb);
                if sum >= m as u64 {
                    continue;
                }
                relabel(st.labels, comp, ncomp, *k, Some((comp[a], comp[b], sum)))
            };
            let key = EnhancedState {
                subset: new_subset,
                labels: new_labels,
            };
            debug_assert_eq!(
                quantum_degree(st.labels, *k),
                quantum_degree(new_labels, *nk),
                "differential must preserve the quantum grading"
            );
            let col = target
                .binary_search_by_key(&(key.subset, key.labels), |s| (s.subset, s.labels))
                .expect("target state must exist in the (i+1, j) basis");
            mat.push(row, col, sign);
        }
    }
    mat
}

/// Transfers labels from the old component structure to the new one.
/// For a merge, `merged = (old comp a, old comp b, merged label)`.
fn relabel(
    labels: u64,
    old_comp: &[u8],
    new_comp: &[u8],
    old_k: usize,
    merged: Option<(u8, u8, u64)>,
) -> u64 {
    let mut out = 0u64;
    let mut seen = 0u64;
    for v in 0..old_comp.len() {
        let nc = new_comp[v] as usize;
        if seen & (1 << nc) != 0 {
            continue;
        }
        seen |= 1 << nc;
        let oc = old_comp[v];
        let val = match merged {
            Some((a, b, sum)) if oc == a || oc == b => sum,
            _ => label_of(labels, oc as usize),
        };
        out = with_label(out, nc, val);
    }
    let _ = old_k;
    out
}

/// Per-slice rank/torsion data assembled into homology groups.
pub(crate) struct SliceReduction {
    pub(crate) i: usize,
    pub(crate) j: i32,
    pub(crate) dim: usize,
    pub(crate) out: SnfOutcome,
}

/// Integral chromatic homology of `g` over `A_m`.
pub fn homology(g: &SimpleGraph, m: usize) -> Result<BigradedGroups, HomError> {
    homology_with_limit(g, m, DEFAULT_EDGE_LIMIT)
}

pub fn homology_with_limit(
    g: &SimpleGraph,
    m: usize,
    limit: usize,
) -> Result<BigradedGroups, HomError> {
    AlgebraSpec::new(m)?;
    if g.vertex_count() > 16 {
        return Err(HomError::TooManyComponents(g.vertex_count()));
    }
    let states = enumerate_states(g, limit)?;
    let e = g.edge_count();

    // Group subsets by size once.
    let mut by_size: Vec<Vec<(u32, usize)>> = vec![Vec::new(); e + 1];
    for (s, k) in states {
        by_size[s.count_ones() as usize].push((s, k));
    }

    let debug = std::env::var("CHROMAKH_SNF_DEBUG").is_ok();
    let mut reductions: Vec<SliceReduction> = Vec::new();
    let mut prev_basis: Option<BTreeMap<i32, Vec<EnhancedState>>> = None;
    for i in 0..=e {
        if debug {
            eprintln!("level {} of {}: {} subsets", i, e, by_size[i].len());
        }
        let this = match prev_basis.take() {
            Some(b) => b,
            None => level_basis(m, &by_size[i]),
        };
        let next = if i < e {
            level_basis(m, &by_size[i + 1])
        } else {
            BTreeMap::new()
        };
        let mut comp_cache: BTreeMap<u32, (Vec<u8>, usize)> = BTreeMap::new();
        for &(s, _) in by_size[i].iter() {
            comp_cache.insert(s, subset_comps(g, s));
        }
        if i < e {
            for &(s, _) in by_size[i + 1].iter() {
                comp_cache.insert(s, subset_comps(g, s));
            }
        }
        let empty: Vec<EnhancedState> = Vec::new();
        let js: Vec<i32> = this.keys().copied().collect();
        let mut level: Vec<SliceReduction> = js
            .par_iter()
            .map(|&j| {
                let domain = &this[&j];
                let target = next.get(&j).unwrap_or(&empty);
                let mat = slice_matrix(g, m, domain, target, &comp_cache);
                SliceReduction {
                    i,
                    j,
                    dim: domain.len(),
                    out: snf_diagonal(&mat),
                }
            })
            .collect();
        reductions.append(&mut level);
        prev_basis = Some(next);
    }

    Ok(assemble(&reductions))
}

/// Combines per-slice reductions into homology groups:
/// `rank H^(i,j) = dim C^(i,j) - rank d^(i,j) - rank d^(i-1,j)` and the
/// torsion of `H^(i,j)` is the nontrivial SNF diagonal of `d^(i-1,j)`.
pub(crate) fn assemble(reductions: &[SliceReduction]) -> BigradedGroups {
    let mut by_key: BTreeMap<(usize, i32), &SliceReduction> = BTreeMap::new();
    for r in reductions {
        by_key.insert((r.i, r.j), r);
    }
    let mut h = BigradedGroups::new();
    for (&(i, j), r) in &by_key {
        let rank_in = if i > 0 {
            by_key.get(&(i - 1, j)).map_or(0, |p| p.out.rank)
        } else {
            0
        };
        let free = r
            .dim
            .checked_sub(r.out.rank + rank_in)
            .expect("slice ranks cannot exceed the chain dimension");
        let torsion_in: Vec<BigInt> = if i > 0 {
            by_key
                .get(&(i - 1, j))
                .map(|p| p.out.torsion.clone())
                .unwrap_or_default()
        } else {
            vec![]
        };
        let group = GroupData::from_torsion_list(free, &torsion_in);
        h.insert(i as i32, j as i32, group);
    }
    h
}

/// Graded Euler characteristic of the homology, `sum (-1)^i rk q^j`.
pub fn euler_characteristic(h: &BigradedGroups) -> IntPolynomial {
    h.euler_characteristic()
}

/// Homology restricted to `i <= max_i` (cheap: only subsets of size up
/// to `max_i + 1` are enumerated). Torsion at `i = max_i` is exact; the
/// free rank at `i = max_i` requires the outgoing differential, which is
/// still within the subset budget.
pub fn homology_low_degrees(
    g: &SimpleGraph,
    m: usize,
    max_i: usize,
) -> Result<BigradedGroups, HomError> {
    AlgebraSpec::new(m)?;
    if g.vertex_count() > 16 {
        return Err(HomError::TooManyComponents(g.vertex_count()));
    }
    let e = g.edge_count();
    let cap = max_i.min(e);
    let mut by_size: Vec<Vec<(u32, usize)>> = vec![Vec::new(); cap + 2];
    // Enumerate subsets of size <= cap + 1 only.
    let mut stack: Vec<(u32, usize, usize)> = vec![(0, 0, 0)];
    while let Some((subset, from, size)) = stack.pop() {
        by_size[size].push((subset, 0));
        if size <= cap {
            for edge in from..e {
                stack.push((subset | (1 << edge), edge + 1, size + 1));
            }
        }
    }
    for level in by_size.iter_mut() {
        level.sort_unstable();
        for entry in level.iter_mut() {
            entry.1 = crate::chrompoly::subset_components(g, entry.0 as u64);
        }
    }

    let mut reductions: Vec<SliceReduction> = Vec::new();
    for i in 0..=cap {
        let this = level_basis(m, &by_size[i]);
        let next = if i + 1 <= e {
            level_basis(m, &by_size[i + 1])
        } else {
            BTreeMap::new()
        };
        let mut comp_cache: BTreeMap<u32, (Vec<u8>, usize)> = BTreeMap::new();
        for &(s, _) in by_size[i].iter().chain(by_size[i + 1].iter()) {
            comp_cache.insert(s, subset_comps(g, s));
        }
        let empty: Vec<EnhancedState> = Vec::new();
        for (&j, domain) in &this {
            let target = next.get(&j).unwrap_or(&empty);
            let mat = slice_matrix(g, m, domain, target, &comp_cache);
            reductions.push(SliceReduction {
                i,
                j,
                dim: domain.len(),
                out: snf_diagonal(&mat),
            });
        }
    }
    let mut h = assemble(&reductions);
    // Degrees above max_i are incomplete; drop them.
    let keep: Vec<((i32, i32), GroupData)> = h
        .iter()
        .filter(|(&(i, _), _)| i <= max_i as i32)
        .map(|(&k, g)| (k, g.clone()))
        .collect();
    h = BigradedGroups::new();
    for ((i, j), g) in keep {
        h.insert(i, j, g);
    }
    Ok(h)
}

/// A `(i, j)` slice of the chromatic complex, exposed for inspection and
/// d^2 = 0 checks. Out-of-support gradings yield an empty slice.
pub fn chromatic_slice(
    g: &SimpleGraph,
    m: usize,
    i: usize,
    j: i32,
    limit: usize,
) -> Result<GradedChainSlice, HomError> {
    AlgebraSpec::new(m)?;
    let e = g.edge_count();
    if e > limit {
        return Err(HomError::EdgeLimit(e, limit));
    }
    let mut this_level: Vec<(u32, usize)> = Vec::new();
    let mut next_level: Vec<(u32, usize)> = Vec::new();
    for s in 0u32..(1u32 << e) {
        let size = s.count_ones() as usize;
        if size == i || size == i + 1 {
            let k = crate::chrompoly::subset_components(g, s as u64);
            if size == i {
                this_level.push((s, k));
            } else {
                next_level.push((s, k));
            }
        }
    }
    let this = level_basis(m, &this_level);
    let next = level_basis(m, &next_level);
    let mut comp_cache: BTreeMap<u32, (Vec<u8>, usize)> = BTreeMap::new();
    for &(s, _) in this_level.iter().chain(next_level.iter()) {
        comp_cache.insert(s, subset_comps(g, s));
    }
    let empty = Vec::new();
    let domain = this.get(&j).unwrap_or(&empty);
    let target = next.get(&j).cloned().unwrap_or_default();
    let mat = slice_matrix(g, m, domain, &target, &comp_cache);
    Ok(GradedChainSlice {
        i,
        j,
        basis: domain.clone(),
        target_dim: target.len(),
        d_out: mat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chrompoly::chromatic_polynomial;
    use crate::graph::build;

    fn groups(pairs: &[(i32, i32, usize, usize)]) -> BigradedGroups {
        // (i, j, free, z2_mult)
        let mut h = BigradedGroups::new();
        for &(i, j, free, z2) in pairs {
            h.add_free(i, j, free);
            h.add_torsion(i, j, 2, z2);
        }
        h
    }

    #[test]
    fn enumerate_states_counts() {
        let tri = build("cycle(3)").unwrap();
        let states = enumerate_states(&tri, 24).unwrap();
        assert_eq!(states.len(), 8);
        let ks: Vec<usize> = states.iter().map(|&(_, k)| k).collect();
        assert_eq!(ks, vec![3, 2, 2, 2, 1, 1, 1, 1]);

        let edge = SimpleGraph::new(2, [(0, 1)]).unwrap();
        let states = enumerate_states(&edge, 24).unwrap();
        assert_eq!(states, vec![(0, 2), (1, 1)]);

        let theta = build("theta(3,2,3)").unwrap();
        assert_eq!(enumerate_states(&theta, 24).unwrap().len(), 256);
        assert_eq!(
            enumerate_states(&theta, 4),
            Err(HomError::EdgeLimit(8, 4))
        );
    }

    #[test]
    fn triangle_homology_a2() {
        let h = homology(&build("cycle(3)").unwrap(), 2).unwrap();
        let expected = groups(&[(0, 3, 1, 0), (1, 2, 0, 1), (1, 1, 1, 0)]);
        assert_eq!(h, expected);
    }

    #[test]
    fn cycle5_homology_a2() {
        let h = homology(&build("cycle(5)").unwrap(), 2).unwrap();
        let expected = groups(&[
            (0, 5, 1, 0),
            (1, 4, 0, 1),
            (1, 3, 1, 0),
            (2, 3, 1, 0),
            (3, 2, 0, 1),
            (3, 1, 1, 0),
        ]);
        assert_eq!(h, expected);
    }

    #[test]
    fn d_squared_is_zero_on_p4_slices() {
        let g = build("cycle(4)").unwrap();
        for i in 0..3 {
            for j in 0..=4 {
                let s1 = chromatic_slice(&g, 2, i, j, 24).unwrap();
                let s2 = chromatic_slice(&g, 2, i + 1, j, 24).unwrap();
                // Compose: every domain basis vector maps to zero.
                let mut m1 = vec![vec![0i64; s1.target_dim]; s1.basis.len()];
                for &(r, c, v) in &s1.d_out.entries {
                    m1[r as usize][c as usize] += v;
                }
                let mut m2 = vec![vec![0i64; s2.target_dim]; s2.basis.len()];
                for &(r, c, v) in &s2.d_out.entries {
                    m2[r as usize][c as usize] += v;
                }
                for row in 0..s1.basis.len() {
                    for tgt in 0..s2.target_dim {
                        let mut acc = 0i64;
                        for mid in 0..s1.target_dim {
                            acc += m1[row][mid] * m2[mid][tgt];
                        }
                        assert_eq!(acc, 0, "d^2 != 0 at i={} j={}", i, j);
                    }
                }
            }
        }
    }

    #[test]
    fn top_group_for_m3() {
        // H^(0, (m-1)v) = Z for the square over A_3.
        let h = homology(&build("cycle(4)").unwrap(), 3).unwrap();
        assert_eq!(h.get(0, 8), GroupData::free(1));
    }

    #[test]
    fn euler_characteristic_matches_polynomial() {
        for (expr, m) in [
            ("cycle(5)", 2usize),
            ("complete(4)", 2),
            ("cycle(3)", 3),
            ("path(4)", 3),
            ("complete(4)", 3),
            ("cycle(4)", 4),
        ] {
            let g = build(expr).unwrap();
            let h = homology(&g, m).unwrap();
            let p = chromatic_polynomial(&g);
            let qdim = AlgebraSpec::new(m).unwrap().qdim();
            // chi = P_G evaluated at qdim: compose polynomials.
            let mut expected = IntPolynomial::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let term = qdim.pow(k).mul(&IntPolynomial::from_coeffs(vec![c.clone()]));
                expected = expected.add(&term);
            }
            assert_eq!(h.euler_characteristic(), expected, "{} m={}", expr, m);
        }
    }

    #[test]
    fn single_vertex_euler() {
        let g = SimpleGraph::new(1, []).unwrap();
        let h = homology(&g, 2).unwrap();
        assert_eq!(
            h.euler_characteristic(),
            IntPolynomial::from_i64(&[1, 1])
        );
    }

    #[test]
    fn low_degree_shortcut_agrees_with_full() {
        for (expr, m) in [("complete(4)", 2usize), ("theta(2,2,2)", 3)] {
            let g = build(expr).unwrap();
            let full = homology(&g, m).unwrap();
            let low = homology_low_degrees(&g, m, 1).unwrap();
            for (&(i, j), grp) in low.iter() {
                assert!(i <= 1);
                assert_eq!(*grp, full.get(i, j), "{} m={} at ({},{})", expr, m, i, j);
            }
            // Everything the full homology has at i <= 1 must be present.
            for (&(i, j), grp) in full.iter() {
                if i <= 1 {
                    assert_eq!(*grp, low.get(i, j), "{} m={} at ({},{})", expr, m, i, j);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let h = homology(&build("theta(2,2,2)").unwrap(), 3).unwrap();
        let j = h.to_json();
        assert_eq!(BigradedGroups::from_json(&j).unwrap(), h);
    }
}
