//! Closed-form evaluators: every structural result about chromatic and
//! Khovanov homology implemented as an independent formula, each
//! cross-checkable against the brute-force oracle in `homcore`.

use crate::chrompoly::{binom, IntPolynomial};
use crate::graph::{GraphInvariants, SimpleGraph};
use crate::homcore::{BigradedGroups, GroupData};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("inconsistent polynomial: {0}")]
    Integrity(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

type Result<T> = std::result::Result<T, ClosedFormError>;

/// A finite sequence of Z_2-exponents indexed by homological degree,
/// starting at degree 1; degrees past the range are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionPattern {
    pub start_i: i32,
    pub exponents: Vec<usize>,
}

impl TorsionPattern {
    pub fn new(exponents: Vec<usize>) -> Self {
        TorsionPattern {
            start_i: 1,
            exponents,
        }
    }

    /// `C_p = (1,1,2,2,...,p,p)`.
    pub fn c_seq(p: usize) -> Self {
        let mut v = Vec::with_capacity(2 * p);
        for k in 1..=p {
            v.push(k);
            v.push(k);
        }
        Self::new(v)
    }

    /// `A_p = (2,1,3,2,...,p+1,p)`.
    pub fn a_seq(p: usize) -> Self {
        let mut v = Vec::with_capacity(2 * p);
        for k in 1..=p {
            v.push(k + 1);
            v.push(k);
        }
        Self::new(v)
    }

    pub fn constant(val: usize, len: usize) -> Self {
        Self::new(vec![val; len])
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.exponents.clone();
        v.extend_from_slice(&other.exponents);
        Self::new(v)
    }

    pub fn reverse(&self) -> Self {
        let mut v = self.exponents.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn drop_last(&self) -> Self {
        let mut v = self.exponents.clone();
        v.pop();
        Self::new(v)
    }

    /// Cuts or zero-pads to exactly `len` entries.
    pub fn resized(&self, len: usize) -> Self {
        let mut v = self.exponents.clone();
        v.resize(len, 0);
        Self::new(v)
    }

    /// Exponent at homological degree `i` (zero outside the range).
    pub fn at(&self, i: i32) -> usize {
        let idx = i - self.start_i;
        if idx < 0 {
            return 0;
        }
        self.exponents.get(idx as usize).copied().unwrap_or(0)
    }

    /// Z_2-exponents of a homology as a pattern over degrees 1..=max.
    pub fn from_homology(h: &BigradedGroups) -> Self {
        let by_i = h.z2_exponents_by_i();
        let max_i = by_i.keys().max().copied().unwrap_or(0);
        let mut v = Vec::new();
        for i in 1..=max_i {
            v.push(by_i.get(&i).copied().unwrap_or(0));
        }
        Self::new(v)
    }

    /// Exact agreement with the homology's Z_2 torsion on every degree.
    pub fn matches_homology(&self, h: &BigradedGroups) -> bool {
        let other = Self::from_homology(h);
        let hi = (self.exponents.len().max(other.exponents.len())) as i32;
        (1..=hi).all(|i| self.at(i) == other.at(i))
    }

    /// Agreement on degrees 1..=upto only.
    pub fn prefix_matches(&self, h: &BigradedGroups, upto: i32) -> bool {
        let by_i = h.z2_exponents_by_i();
        (1..=upto).all(|i| self.at(i) == by_i.get(&i).copied().unwrap_or(0))
    }
}

/// Chromatic homology of the cycle `P_n` over `A_m`: the Hochschild
/// pattern in positive degrees, with the degree-zero ranks pinned down
/// by the Euler characteristic (no torsion can occur at i = 0).
pub fn cycle_homology(n: usize, m: usize) -> Result<BigradedGroups> {
    if n < 3 {
        return Err(ClosedFormError::Parameter(format!(
            "cycle needs n >= 3, got {}",
            n
        )));
    }
    if m < 2 {
        return Err(ClosedFormError::Parameter(format!(
            "algebra needs m >= 2, got {}",
            m
        )));
    }
    let mut h = BigradedGroups::new();
    for i in 1..=n.saturating_sub(2) {
        if (n - i) % 2 == 0 {
            let j = (n - i) * m / 2;
            h.add_torsion(i as i32, j as i32, m as u32, 1);
        }
        let base = (n - i - 1) / 2 * m;
        for j in base + 1..=base + m - 1 {
            h.add_free(i as i32, j as i32, 1);
        }
    }
    // chi = (q u)^n + (-1)^n q u with u = 1 + q + ... + q^(m-2).
    let u = IntPolynomial::from_coeffs(vec![BigInt::from(1); m - 1]);
    let qu = u.mul(&IntPolynomial::monomial(1, 1));
    let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
    let chi = qu.pow(n).add(&qu.mul(&IntPolynomial::monomial(sign, 0)));
    for j in 0..=(m - 1) * n {
        let mut rest = BigInt::zero();
        for i in 1..=(n - 2) {
            let term = BigInt::from(h.get(i as i32, j as i32).free as i64);
            if i % 2 == 0 {
                rest += term;
            } else {
                rest -= term;
            }
        }
        let c0 = chi.coeff(j) - rest;
        if c0.is_negative() {
            return Err(ClosedFormError::Integrity(format!(
                "negative rank at (0,{}) for cycle({}) over A_{}",
                j, n, m
            )));
        }
        h.add_free(0, j as i32, parse_usize(&c0)?);
    }
    Ok(h)
}

fn parse_usize(x: &BigInt) -> Result<usize> {
    x.to_string()
        .parse()
        .map_err(|_| ClosedFormError::Integrity(format!("value {} out of range", x)))
}

/// Torsion width (diagonal count) of cycle homology over `A_m`.
pub fn cycle_torsion_width(n: usize, m: usize) -> usize {
    if n % 2 == 0 {
        m * n / 2 + 5 - 2 * m - n
    } else {
        m * n / 2 - 3 * m / 2 + 4 - n
    }
}

/// One homological degree of thin homology: the groups on the upper
/// (`i + j = v`) and lower (`i + j = v - 1`) diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyColumn {
    pub i: i32,
    pub upper: GroupData,
    pub lower: GroupData,
}

fn with_z2(free: usize, z2: usize) -> GroupData {
    let mut g = GroupData::free(free);
    if z2 > 0 {
        g.torsion.push((2u32.into(), z2));
    }
    g
}

/// The first three columns (i = 0, 1, 2) of A_2 chromatic homology from
/// the cyclomatic number, triangle count and bipartiteness. The lower
/// diagonal entries follow from the knight-move pairing.
pub fn low_degree_groups(inv: &GraphInvariants) -> Vec<HomologyColumn> {
    let p1 = inv.p1;
    let bip = inv.bipartite;
    let u1_free = if bip { p1 } else { p1 - 1 };
    let u2 = if bip {
        with_z2(parse_usize(&binom(p1, 2)).unwrap(), p1)
    } else {
        with_z2(
            (parse_usize(&binom(p1, 2)).unwrap() + 1).saturating_sub(inv.t3),
            p1 - 1,
        )
    };
    vec![
        HomologyColumn {
            i: 0,
            upper: GroupData::free(1),
            lower: GroupData::free(usize::from(bip)),
        },
        HomologyColumn {
            i: 1,
            upper: with_z2(u1_free, usize::from(!bip)),
            lower: GroupData::free(usize::from(!bip)),
        },
        HomologyColumn {
            i: 2,
            upper: u2,
            lower: GroupData::free(u1_free),
        },
    ]
}

/// Rank of `H^(3, v-3)` and the Z_2-exponent of `H^(4, v-4)` (they
/// coincide), from subgraph counts.
pub fn third_fourth_groups(inv: &GraphInvariants) -> (i64, i64) {
    let p1 = inv.p1 as i64;
    let c3 = i64::try_from(binom(inv.p1 + 1, 3)).unwrap();
    let value = if inv.bipartite {
        p1 + c3 - inv.t4 as i64
    } else {
        p1 + c3 - inv.t3 as i64 * (p1 - 1) - inv.t4 as i64 + 2 * inv.k4 as i64 - 1
    };
    (value, value)
}

/// Rebuilds the full two-diagonal A_2 homology from `P_G(1+q)`: peel the
/// bipartite exceptional pair, then solve the alternating-sum system for
/// the knight-move multiplicities degree by degree. A polynomial that is
/// not the q-form chromatic polynomial of a connected graph with `v`
/// vertices fails with an integrity error.
pub fn reconstruct_a2_homology(
    p_q: &IntPolynomial,
    v: usize,
    bipartite: bool,
) -> Result<BigradedGroups> {
    if p_q.degree() != Some(v) {
        return Err(ClosedFormError::Integrity(format!(
            "polynomial degree {:?} does not match vertex count {}",
            p_q.degree(),
            v
        )));
    }
    let c = |j: i64| -> BigInt {
        if j < 0 {
            BigInt::zero()
        } else {
            p_q.coeff(j as usize)
        }
    };
    // n_i - n_{i-2} = (-1)^i (c_{v-i} - bip_i), bip corrections 1 at i <= 1.
    let mut n: Vec<BigInt> = vec![BigInt::zero(); v + 3];
    for i in 0..=(v + 2) {
        let bip_corr = if bipartite && i <= 1 {
            BigInt::from(1)
        } else {
            BigInt::zero()
        };
        let rhs = c(v as i64 - i as i64) - bip_corr;
        let prev = if i >= 2 {
            n[i - 2].clone()
        } else {
            BigInt::zero()
        };
        let val = if i % 2 == 0 { prev + rhs } else { prev - rhs };
        if val.is_negative() {
            return Err(ClosedFormError::Integrity(format!(
                "no non-negative knight-move solution at degree {}",
                i
            )));
        }
        n[i] = val;
    }
    // Support ends at i = v - 2; the remaining equations must close.
    for (i, ni) in n.iter().enumerate().skip(v.saturating_sub(1)) {
        if !ni.is_zero() {
            return Err(ClosedFormError::Integrity(format!(
                "knight-move count {} at out-of-support degree {}",
                ni, i
            )));
        }
    }
    let mut h = BigradedGroups::new();
    if bipartite {
        h.add_free(0, v as i32, 1);
        h.add_free(0, v as i32 - 1, 1);
    }
    for (i, ni) in n.iter().enumerate().take(v.saturating_sub(1)) {
        let ni = parse_usize(ni)?;
        if ni == 0 {
            continue;
        }
        let i = i as i32;
        h.add_free(i, v as i32 - i, ni);
        h.add_free(i + 1, v as i32 - i - 2, ni);
        h.add_torsion(i + 1, v as i32 - i - 1, 2, ni);
    }
    Ok(h)
}

/// Upper-diagonal groups of `H(G|P_n)` from the homology of `G`, with
/// the lower diagonal completed through the knight-move pairing.
pub fn edge_glue_homology(
    h_g: &BigradedGroups,
    inv_g: &GraphInvariants,
    n: usize,
) -> Result<BigradedGroups> {
    if n < 3 {
        return Err(ClosedFormError::Parameter(format!(
            "glued cycle needs n >= 3, got {}",
            n
        )));
    }
    if h_g
        .iter()
        .any(|(_, g)| g.torsion.iter().any(|(o, _)| *o != 2u32.into()))
    {
        return Err(ClosedFormError::Parameter(
            "input homology is not an A_2 homology (non-Z_2 torsion present)".into(),
        ));
    }
    let (v, e) = (inv_g.v, inv_g.e);
    let vp = v + n - 2;
    let bip_glued = inv_g.bipartite && n % 2 == 0;

    let mut upper: Vec<GroupData> = Vec::new();
    for i in 0..=vp.saturating_sub(2) {
        let grp = if i == 0 {
            GroupData::free(1)
        } else if i <= n - 2 {
            let s = s_sum(h_g, v, i as i32, i as i32 - 2);
            if inv_g.bipartite && (n - i) % 2 == 1 {
                add_groups(&GroupData::free(e - v + 2), &s)
            } else {
                add_groups(&with_z2(e - v + 1, 1), &s)
            }
        } else {
            s_sum(h_g, v, i as i32, n as i32 - 2)
        };
        upper.push(grp);
    }

    let mut h = BigradedGroups::new();
    for (i, grp) in upper.iter().enumerate() {
        h.insert(i as i32, (vp - i) as i32, grp.clone());
    }
    if bip_glued {
        h.add_free(0, vp as i32 - 1, 1);
    }
    for (i, grp) in upper.iter().enumerate() {
        let knight = grp.free - usize::from(i == 0 && bip_glued);
        h.add_free(i as i32 + 1, (vp - i) as i32 - 2, knight);
    }
    Ok(h)
}

/// `S_t(G) = sum over k = 0..t of H^(i-k, v-i+k)(G)` along the upper
/// diagonal of `G`.
fn s_sum(h_g: &BigradedGroups, v: usize, i: i32, t: i32) -> GroupData {
    let mut acc = GroupData::default();
    let mut k = 0;
    while k <= t {
        let ik = i - k;
        if ik >= 0 {
            acc = add_groups(&acc, &h_g.get(ik, v as i32 - ik));
        }
        k += 1;
    }
    acc
}

fn add_groups(a: &GroupData, b: &GroupData) -> GroupData {
    let mut out = a.clone();
    out.free += b.free;
    for (o, m) in &b.torsion {
        match out.torsion.iter_mut().find(|(oo, _)| oo == o) {
            Some((_, mm)) => *mm += m,
            None => out.torsion.push((o.clone(), *m)),
        }
    }
    out.torsion.sort();
    out
}

/// `H(G * P_n)` is `H(G|P_n)` shifted up one quantum degree.
pub fn vertex_glue_homology(
    h_g: &BigradedGroups,
    inv_g: &GraphInvariants,
    n: usize,
) -> Result<BigradedGroups> {
    Ok(edge_glue_homology(h_g, inv_g, n)?.shifted(0, 1))
}

/// Expanding the glue vertex of `G1 * G2` into a bridge shifts the whole
/// homology up one quantum degree.
pub fn bridge_homology(h_glued: &BigradedGroups) -> BigradedGroups {
    h_glued.shifted(0, 1)
}

/// Z_2-torsion pattern of `P_s|P_t` (one shared edge, `glue_edges = 1`)
/// or `P_s|^2 P_t` (two shared edges, `glue_edges = 2`), selected by the
/// parities of `s` and `t`. Both-even inputs are bipartite, so their
/// pattern opens with a forced zero at degree 1.
pub fn two_cycle_torsion(s: usize, t: usize, glue_edges: usize) -> Result<TorsionPattern> {
    if !(glue_edges == 1 || glue_edges == 2) {
        return Err(ClosedFormError::Parameter(format!(
            "gluing along {} edges is not covered",
            glue_edges
        )));
    }
    let min_len = glue_edges + 2;
    if s < min_len || t < min_len {
        return Err(ClosedFormError::Parameter(format!(
            "cycles must have length >= {} for a {}-edge gluing, got {} and {}",
            min_len, glue_edges, s, t
        )));
    }
    let pattern = match (s % 2, t % 2) {
        (1, 1) => {
            let (n, m) = ((s - 1) / 2, (t - 1) / 2);
            let big_m = n.min(m);
            TorsionPattern::c_seq(big_m - 1)
                .concat(&TorsionPattern::constant(big_m, 2 * n.abs_diff(m) + 2))
                .concat(&TorsionPattern::c_seq(big_m - 1).reverse())
        }
        (1, 0) | (0, 1) => {
            let (odd, even) = if s % 2 == 1 { (s, t) } else { (t, s) };
            let (n, m) = ((odd - 1) / 2, even / 2);
            let big_m = n.min(m);
            if n <= m {
                TorsionPattern::c_seq(big_m - 1)
                    .concat(&TorsionPattern::constant(big_m, 2 * (m - n) + 1))
                    .concat(&TorsionPattern::c_seq(big_m - 1).reverse())
            } else {
                TorsionPattern::c_seq(big_m - 1)
                    .concat(&TorsionPattern::constant(big_m, 1))
                    .concat(&alternating(big_m, n - m))
                    .concat(&TorsionPattern::c_seq(big_m - 1).reverse())
            }
        }
        (0, 0) => {
            let (n, m) = (s / 2, t / 2);
            let big_m = n.min(m);
            TorsionPattern::constant(0, 1)
                .concat(&TorsionPattern::a_seq(big_m.saturating_sub(2)))
                .concat(&TorsionPattern::constant(big_m, 1))
                .concat(&alternating(big_m, n.abs_diff(m)))
                .concat(&TorsionPattern::c_seq(big_m - 1).reverse())
        }
        _ => unreachable!(),
    };
    Ok(if glue_edges == 2 {
        pattern.drop_last()
    } else {
        pattern
    })
}

/// `(M-1, M)` repeated `reps` times.
fn alternating(big_m: usize, reps: usize) -> TorsionPattern {
    let mut v = Vec::with_capacity(2 * reps);
    for _ in 0..reps {
        v.push(big_m - 1);
        v.push(big_m);
    }
    TorsionPattern::new(v)
}

/// Diagram constants placing chromatic bigradings inside Khovanov
/// homology for a standard alternating diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhovanovOffsets {
    pub c_plus: usize,
    pub c_minus: usize,
    pub v: usize,
    pub girth: usize,
}

impl KhovanovOffsets {
    /// Khovanov grading of a chromatic bigrading `(i, j)`.
    pub fn place(&self, i: i32, j: i32) -> (i32, i32) {
        (
            i - self.c_minus as i32,
            self.v as i32 - 2 * j + self.c_plus as i32 - 2 * self.c_minus as i32,
        )
    }
}

/// Khovanov torsion pattern of the alternating pretzel `(-a1, -2, -a3)`:
/// the chromatic pattern of `theta(a1, 2, a3) = P_(a1+2) |^2 P_(a3+2)`
/// cut to the correspondence range (the girth), plus the standard
/// diagram's placement constants.
pub fn pretzel_torsion(
    a1: usize,
    a2: usize,
    a3: usize,
) -> Result<(TorsionPattern, KhovanovOffsets)> {
    if a2 != 2 || a1 < 2 || a3 < 2 {
        return Err(ClosedFormError::Parameter(format!(
            "pretzel patterns cover (-a1, -2, -a3) with a1, a3 >= 2; got ({}, {}, {})",
            a1, a2, a3
        )));
    }
    let girth = (a1 + 2).min(a3 + 2).min(a1 + a3);
    let pattern = two_cycle_torsion(a1 + 2, a3 + 2, 2)?.resized(girth);
    let d = crate::khovanov::pretzel_diagram(&[a1, a2, a3])
        .map_err(|e| ClosedFormError::Parameter(format!("pretzel diagram: {}", e)))?;
    let offsets = KhovanovOffsets {
        c_plus: d.positive_crossings(),
        c_minus: d.negative_crossings(),
        v: a1 + a2 + a3 - 1,
        girth,
    };
    Ok((pattern, offsets))
}

/// Khovanov torsion pattern of the rational link with Conway notation
/// `-P Q`: the chromatic pattern of `P_P | P_Q` cut to the girth.
pub fn rational_torsion(p: usize, q: usize) -> Result<(TorsionPattern, KhovanovOffsets)> {
    if p < 3 || q < 3 {
        return Err(ClosedFormError::Parameter(format!(
            "rational patterns need both twist parameters >= 3, got {} {}",
            p, q
        )));
    }
    let girth = p.min(q);
    let pattern = two_cycle_torsion(p, q, 1)?.resized(girth);
    let d = crate::khovanov::rational_diagram(p, q)
        .map_err(|e| ClosedFormError::Parameter(format!("rational diagram: {}", e)))?;
    let offsets = KhovanovOffsets {
        c_plus: d.positive_crossings(),
        c_minus: d.negative_crossings(),
        v: p + q - 2,
        girth,
    };
    Ok((pattern, offsets))
}

/// Span, width and torsion-span bounds from combinatorial data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBounds {
    /// Exact homological span of A_2 chromatic homology, `v - b`.
    pub hspan: usize,
    /// Lower bound on the torsion span of the Khovanov homology of any
    /// link with this all-positive graph.
    pub kh_torsion_bound: usize,
    /// Lower bound on hspan from the girth alone.
    pub girth_lower_bound: usize,
    v: usize,
}

impl SpanBounds {
    /// Exact homological width of `H_(A_m)`: `(m-2) v + 2`.
    pub fn width_m(&self, m: usize) -> usize {
        (m - 2) * self.v + 2
    }
}

pub fn span_bounds(inv: &GraphInvariants) -> SpanBounds {
    let interior = inv.v - inv.blocks;
    let kh = if inv.girth + 1 >= interior {
        // girth >= v - b - 1
        if inv.bipartite {
            interior.saturating_sub(2)
        } else {
            interior.saturating_sub(1)
        }
    } else if inv.bipartite {
        inv.girth.saturating_sub(1)
    } else {
        inv.girth
    };
    SpanBounds {
        hspan: interior,
        kh_torsion_bound: kh,
        girth_lower_bound: inv.girth.saturating_sub(1),
        v: inv.v,
    }
}

/// Multiplicity of the terminal column `Tl_2` (the pair `Z^k` at
/// `(v-b-1, b)` and `Z_2^k` at `(v-b-1, b+1)`): the absolute value of
/// the lowest-degree coefficient of `P_G(1+q)`.
pub fn tail(g: &SimpleGraph) -> usize {
    let q = crate::chrompoly::chromatic_polynomial(g).to_q_basis();
    match q.lowest_nonzero_degree() {
        Some(d) => parse_usize(&q.coeff(d).abs()).unwrap_or(usize::MAX),
        None => 0,
    }
}

/// Density flag and the maximal torsion gaps of an A_2 homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    /// Some Z_2 in every degree from 2 through `v - b - 1`.
    pub dense: bool,
    /// Maximal runs `(start, length)` without torsion, flanked by
    /// torsion on both sides.
    pub gaps: Vec<(i32, usize)>,
}

pub fn density_and_gaps(h: &BigradedGroups, inv: &GraphInvariants) -> DensityReport {
    let torsion_i: Vec<i32> = h
        .iter()
        .filter(|(_, g)| !g.torsion.is_empty())
        .map(|(&(i, _), _)| i)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let hi = inv.v as i32 - inv.blocks as i32 - 1;
    let dense = (2..=hi).all(|i| torsion_i.contains(&i));
    let mut gaps = Vec::new();
    for w in torsion_i.windows(2) {
        if w[1] > w[0] + 1 {
            gaps.push((w[0] + 1, (w[1] - w[0] - 1) as usize));
        }
    }
    DensityReport { dense, gaps }
}

/// Leading four coefficients `(a, b, c, d)` of the normalized Jones
/// polynomial of a thin link whose all-positive graph has girth >= 4:
/// `(1, -p1, binom(p1+1, 2), -binom(p1+2, 3) + t4)`.
pub fn jones_coefficients(inv: &GraphInvariants) -> Result<(BigInt, BigInt, BigInt, BigInt)> {
    if inv.girth < 4 {
        return Err(ClosedFormError::Hypothesis(format!(
            "girth {} < 4: the leading Jones coefficients are not determined by p1 and t4",
            inv.girth
        )));
    }
    Ok((
        BigInt::from(1),
        -BigInt::from(inv.p1 as i64),
        binom(inv.p1 + 1, 2),
        -binom(inv.p1 + 2, 3) + BigInt::from(inv.t4 as i64),
    ))
}

/// `hspan` of a connected outerplanar graph from its induced cycle
/// lengths: `sum r_k (k - 2) + 1`.
pub fn outerplanar_hspan(cycle_lengths: &[usize]) -> usize {
    cycle_lengths.iter().map(|&k| k - 2).sum::<usize>() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chrompoly::chromatic_polynomial;
    use crate::graph::{build, cycle, edge_glue_k};
    use crate::homcore::homology;

    fn inv(expr: &str) -> GraphInvariants {
        GraphInvariants::compute(&build(expr).unwrap())
    }

    fn glue_cycles(s: usize, t: usize, k: usize) -> SimpleGraph {
        edge_glue_k(&cycle(s).unwrap(), &cycle(t).unwrap(), k).unwrap()
    }

    #[test]
    fn pattern_constructors() {
        assert_eq!(TorsionPattern::c_seq(3).exponents, vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(TorsionPattern::a_seq(3).exponents, vec![2, 1, 3, 2, 4, 3]);
        assert_eq!(
            TorsionPattern::c_seq(2).reverse().drop_last().exponents,
            vec![2, 2, 1]
        );
        assert_eq!(TorsionPattern::c_seq(0).exponents, Vec::<usize>::new());
        assert_eq!(TorsionPattern::a_seq(0).exponents, Vec::<usize>::new());
        assert_eq!(TorsionPattern::constant(4, 3).exponents, vec![4, 4, 4]);
    }

    #[test]
    fn cycle_homology_matches_oracle_small() {
        for n in 3..=7 {
            for m in 2..=3 {
                let cf = cycle_homology(n, m).unwrap();
                let bf = homology(&cycle(n).unwrap(), m).unwrap();
                assert_eq!(cf, bf, "cycle({}) over A_{}", n, m);
            }
        }
    }

    #[test]
    fn cycle_homology_examples() {
        let h = cycle_homology(5, 2).unwrap();
        assert_eq!(h.get(0, 5), GroupData::free(1));
        assert_eq!(h.get(1, 4), with_z2(0, 1));
        assert_eq!(h.get(1, 3), GroupData::free(1));
        assert_eq!(h.get(2, 3), GroupData::free(1));
        assert_eq!(h.get(3, 2), with_z2(0, 1));
        assert_eq!(h.get(3, 1), GroupData::free(1));
        assert_eq!(h.iter().count(), 6);

        let h = cycle_homology(4, 2).unwrap();
        assert_eq!(h.get(0, 4), GroupData::free(1));
        assert_eq!(h.get(0, 3), GroupData::free(1));
        assert_eq!(h.get(1, 3), GroupData::free(1));
        assert_eq!(h.get(2, 2), with_z2(0, 1));
        assert_eq!(h.get(2, 1), GroupData::free(1));
        assert_eq!(h.iter().count(), 5);

        // cycle(5) over A_3: exactly ceil(5/2 - 1) = 2 copies of Z_3 on
        // distinct diagonals.
        let h = cycle_homology(5, 3).unwrap();
        let z3: Vec<(i32, i32)> = h
            .iter()
            .filter(|(_, g)| g.torsion_mult(3) > 0)
            .map(|(&k, _)| k)
            .collect();
        assert_eq!(z3.len(), 2);
        let diags: std::collections::BTreeSet<i32> = z3.iter().map(|&(i, j)| i + j).collect();
        assert_eq!(diags.len(), 2);

        assert!(cycle_homology(2, 2).is_err());
        assert!(cycle_homology(5, 1).is_err());
    }

    #[test]
    fn torsion_width_formula_matches_cycles() {
        for n in 3..=8 {
            for m in 2..=4 {
                let h = cycle_homology(n, m).unwrap();
                assert_eq!(
                    h.hw_torsion_diagonal(),
                    cycle_torsion_width(n, m),
                    "cycle({}) over A_{}",
                    n,
                    m
                );
            }
        }
    }

    #[test]
    fn low_degree_examples() {
        let cols = low_degree_groups(&inv("cycle(4)"));
        assert_eq!(cols[1].upper, GroupData::free(1));
        let cols = low_degree_groups(&inv("complete(4)"));
        assert_eq!(cols[2].upper, with_z2(0, 2));
        let cols = low_degree_groups(&inv("theta(3,2,3)"));
        assert_eq!(cols[1].upper, with_z2(1, 1));
    }

    #[test]
    fn low_degree_matches_oracle() {
        for expr in [
            "cycle(5)",
            "complete(4)",
            "theta(3,2,3)",
            "wheel(5)",
            "edge_glue(cycle(4),cycle(4))",
        ] {
            let g = build(expr).unwrap();
            let gi = GraphInvariants::compute(&g);
            let h = homology(&g, 2).unwrap();
            let v = gi.v as i32;
            for col in low_degree_groups(&gi) {
                assert_eq!(
                    col.upper,
                    h.get(col.i, v - col.i),
                    "{} upper i={}",
                    expr,
                    col.i
                );
                assert_eq!(
                    col.lower,
                    h.get(col.i, v - col.i - 1),
                    "{} lower i={}",
                    expr,
                    col.i
                );
            }
        }
    }

    #[test]
    fn third_fourth_examples() {
        assert_eq!(third_fourth_groups(&inv("cycle(6)")).0, 1);
        assert_eq!(third_fourth_groups(&inv("cycle(4)")).0, 0);
        assert_eq!(third_fourth_groups(&inv("complete(4)")).0, 0);
    }

    #[test]
    fn third_fourth_matches_oracle() {
        for expr in ["cycle(5)", "cycle(6)", "complete(4)", "theta(3,2,3)", "wheel(5)"] {
            let g = build(expr).unwrap();
            let gi = GraphInvariants::compute(&g);
            let h = homology(&g, 2).unwrap();
            let v = gi.v as i32;
            let (rk3, t4) = third_fourth_groups(&gi);
            assert_eq!(rk3, h.get(3, v - 3).free as i64, "{} rank", expr);
            assert_eq!(t4, h.get(4, v - 4).torsion_mult(2) as i64, "{} torsion", expr);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let g = cycle(5).unwrap();
        let p = chromatic_polynomial(&g).to_q_basis();
        let h = reconstruct_a2_homology(&p, 5, false).unwrap();
        assert_eq!(h, cycle_homology(5, 2).unwrap());

        let t = build("path(4)").unwrap();
        let p = chromatic_polynomial(&t).to_q_basis();
        let h = reconstruct_a2_homology(&p, 4, true).unwrap();
        assert_eq!(h.get(0, 4), GroupData::free(1));
        assert_eq!(h.get(0, 3), GroupData::free(1));
        assert_eq!(h.iter().count(), 2);

        let junk = IntPolynomial::from_i64(&[0, 3, 0, 0, 0, 1]);
        assert!(reconstruct_a2_homology(&junk, 5, false).is_err());
        let wrong_v = chromatic_polynomial(&g).to_q_basis();
        assert!(reconstruct_a2_homology(&wrong_v, 7, false).is_err());
    }

    #[test]
    fn reconstruct_matches_oracle() {
        for expr in [
            "complete(4)",
            "theta(3,2,3)",
            "wheel(5)",
            "vertex_glue(cycle(3),cycle(4))",
            "bridge(cycle(3),cycle(3))",
            "edge_glue(cycle(4),cycle(6))",
        ] {
            let g = build(expr).unwrap();
            let gi = GraphInvariants::compute(&g);
            let p = chromatic_polynomial(&g).to_q_basis();
            let h = reconstruct_a2_homology(&p, gi.v, gi.bipartite).unwrap();
            assert_eq!(h, homology(&g, 2).unwrap(), "{}", expr);
        }
    }

    #[test]
    fn edge_glue_matches_oracle() {
        for (gexpr, n) in [
            ("cycle(3)", 3usize),
            ("cycle(3)", 5),
            ("cycle(4)", 4),
            ("cycle(4)", 5),
            ("cycle(5)", 5),
            ("theta(2,2,2)", 4),
        ] {
            let g = build(gexpr).unwrap();
            let gi = GraphInvariants::compute(&g);
            let hg = homology(&g, 2).unwrap();
            let glued = edge_glue_k(&g, &cycle(n).unwrap(), 1).unwrap();
            let expected = homology(&glued, 2).unwrap();
            let got = edge_glue_homology(&hg, &gi, n).unwrap();
            assert_eq!(got, expected, "{} | P_{}", gexpr, n);
        }
    }

    #[test]
    fn tri_edge_ranks() {
        // rk H^(i, v-i)(P3|Pn) = 1 for 0 <= i <= n-2, 0 beyond.
        for n in 3..=6 {
            let g = cycle(3).unwrap();
            let gi = GraphInvariants::compute(&g);
            let hg = homology(&g, 2).unwrap();
            let h = edge_glue_homology(&hg, &gi, n).unwrap();
            let vp = (3 + n - 2) as i32;
            for i in 0..=(n - 2) as i32 {
                assert_eq!(h.get(i, vp - i).free, 1, "n={} i={}", n, i);
            }
            assert_eq!(h.get((n - 1) as i32, vp - (n - 1) as i32).free, 0);
        }
    }

    #[test]
    fn square_edge_ranks() {
        // Cor SquareEdge, odd case: rank 2 for 0 < i < n-1 even.
        let g = cycle(4).unwrap();
        let gi = GraphInvariants::compute(&g);
        let hg = homology(&g, 2).unwrap();
        let n = 5;
        let h = edge_glue_homology(&hg, &gi, n).unwrap();
        let vp = (4 + n - 2) as i32;
        let rank = |i: i32| h.get(i, vp - i).free;
        assert_eq!(rank(0), 1);
        assert_eq!(rank(1), 1);
        assert_eq!(rank(2), 2);
        assert_eq!(rank(3), 1);
        assert_eq!(rank(4), 1);
        assert_eq!(rank(5), 0);
    }

    #[test]
    fn glue_shift_and_bridge_match_oracle() {
        let g = cycle(3).unwrap();
        let gi = GraphInvariants::compute(&g);
        let hg = homology(&g, 2).unwrap();

        let star = build("vertex_glue(cycle(3),cycle(4))").unwrap();
        let got = vertex_glue_homology(&hg, &gi, 4).unwrap();
        assert_eq!(got, homology(&star, 2).unwrap());

        let bridged = build("bridge(cycle(3),cycle(4))").unwrap();
        let got = bridge_homology(&got);
        assert_eq!(got, homology(&bridged, 2).unwrap());
    }

    #[test]
    fn two_cycle_examples() {
        assert_eq!(
            two_cycle_torsion(5, 5, 2).unwrap().exponents,
            vec![1, 1, 2, 2, 1]
        );
        assert_eq!(
            two_cycle_torsion(5, 5, 1).unwrap().exponents,
            vec![1, 1, 2, 2, 1, 1]
        );
        assert_eq!(
            two_cycle_torsion(4, 6, 1).unwrap().exponents,
            vec![0, 2, 1, 2, 1, 1]
        );
        assert!(two_cycle_torsion(2, 5, 1).is_err());
        assert!(two_cycle_torsion(3, 5, 2).is_err());
    }

    #[test]
    fn two_cycle_matches_oracle_sweep() {
        for s in 3..=6 {
            for t in s..=6 {
                let g = glue_cycles(s, t, 1);
                let h = homology(&g, 2).unwrap();
                let pat = two_cycle_torsion(s, t, 1).unwrap();
                assert!(
                    pat.matches_homology(&h),
                    "P{}|P{}: {:?} vs {:?}",
                    s,
                    t,
                    pat.exponents,
                    h.z2_exponents_by_i()
                );
            }
        }
    }

    #[test]
    fn patterns2_matches_oracle_sweep() {
        for s in 4..=6 {
            for t in s..=6 {
                let g = glue_cycles(s, t, 2);
                let h = homology(&g, 2).unwrap();
                let pat = two_cycle_torsion(s, t, 2).unwrap();
                assert!(
                    pat.matches_homology(&h),
                    "P{}|^2P{}: {:?} vs {:?}",
                    s,
                    t,
                    pat.exponents,
                    h.z2_exponents_by_i()
                );
            }
        }
    }

    #[test]
    fn pretzel_pattern_examples() {
        let (pat, off) = pretzel_torsion(3, 2, 3).unwrap();
        assert_eq!(pat.exponents, vec![1, 1, 2, 2, 1]);
        assert_eq!((off.c_plus, off.c_minus, off.v, off.girth), (2, 6, 7, 5));

        let (pat, _) = pretzel_torsion(3, 2, 5).unwrap();
        assert_eq!(pat.exponents, vec![1, 1, 2, 2, 2]);

        assert!(pretzel_torsion(3, 3, 3).is_err());
        assert!(pretzel_torsion(1, 2, 3).is_err());
    }

    #[test]
    fn rational_pattern_examples() {
        let (pat, off) = rational_torsion(3, 3).unwrap();
        assert_eq!(pat.exponents, vec![1, 1, 0]);
        assert_eq!(off.v, 4);
        assert!(rational_torsion(2, 3).is_err());
    }

    #[test]
    fn span_bounds_theta() {
        let b = span_bounds(&inv("theta(3,2,3)"));
        assert_eq!(b.hspan, 6);
        assert_eq!(b.kh_torsion_bound, 5);
        assert_eq!(b.width_m(2), 2);
        assert_eq!(b.width_m(3), 9);
        assert_eq!(b.girth_lower_bound, 4);
    }

    #[test]
    fn tails() {
        assert_eq!(tail(&build("complete(4)").unwrap()), 2);
        assert_eq!(tail(&build("wheel(5)").unwrap()), 3);
        assert_eq!(tail(&build("edge_glue(cycle(3),cycle(5))").unwrap()), 1);
        assert_eq!(tail(&build("complete(5)").unwrap()), 6);
    }

    #[test]
    fn density_examples() {
        let g = build("edge_glue(cycle(3),edge_glue(cycle(4),cycle(5)))").unwrap();
        let gi = GraphInvariants::compute(&g);
        let h = homology(&g, 2).unwrap();
        let rep = density_and_gaps(&h, &gi);
        assert!(rep.dense);
        assert!(rep.gaps.is_empty());

        let g = build("cycle(4)").unwrap();
        let gi = GraphInvariants::compute(&g);
        let h = homology(&g, 2).unwrap();
        assert!(density_and_gaps(&h, &gi).dense);

        // theta(2,3,2) has no homology at i = v - b = 5, the basis of
        // the Khovanov torsion-gap conclusion.
        let g = build("theta(2,3,2)").unwrap();
        let h = homology(&g, 2).unwrap();
        assert_eq!(h.i_range().unwrap().1, 4);
    }

    #[test]
    fn jones_coefficient_examples() {
        let (a, b, c, d) = jones_coefficients(&inv("cycle(5)")).unwrap();
        assert_eq!(
            (a, b, c, d),
            (
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(1),
                BigInt::from(-1)
            )
        );
        let (_, _, _, d) = jones_coefficients(&inv("cycle(4)")).unwrap();
        assert_eq!(d, BigInt::from(0));
        let (_, _, _, d) = jones_coefficients(&inv("theta(2,3,2)")).unwrap();
        assert_eq!(d, BigInt::from(-3));
        assert!(jones_coefficients(&inv("cycle(3)")).is_err());
    }

    #[test]
    fn outerplanar_span() {
        // Polygon tree of a triangle, square and pentagon.
        let g = build("edge_glue(cycle(3),edge_glue(cycle(4),cycle(5)))").unwrap();
        let h = homology(&g, 2).unwrap();
        assert_eq!(h.hspan(), outerplanar_hspan(&[3, 4, 5]));
    }
}
