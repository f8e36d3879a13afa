//! Smith normal form of sparse integer matrices, tuned for cube
//! differentials: almost all entries are +-1 and most rows are short, so
//! a cascade of fill-free unit pivots (row and column singletons)
//! removes the bulk of the matrix near-linearly, a Markowitz-scored
//! unit-pivot phase shrinks the remaining core, and a dense
//! arbitrary-precision pass handles the small residue that carries the
//! torsion.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

/// Sorted association list; rows are short, so binary search beats hashing.
type Row<T> = Vec<(u32, T)>;

fn row_get<T: Clone>(row: &Row<T>, c: u32) -> Option<T> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| row[i].1.clone())
}

fn row_remove<T>(row: &mut Row<T>, c: u32) -> Option<T> {
    match row.binary_search_by_key(&c, |e| e.0) {
        Ok(i) => Some(row.remove(i).1),
        Err(_) => None,
    }
}

/// Returns true if the entry is new.
fn row_set<T>(row: &mut Row<T>, c: u32, v: T) -> bool {
    match row.binary_search_by_key(&c, |e| e.0) {
        Ok(i) => {
            row[i].1 = v;
            false
        }
        Err(i) => {
            row.insert(i, (c, v));
            true
        }
    }
}

/// Row-major sparse integer matrix builder.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMat {
    pub nrows: usize,
    pub ncols: usize,
    /// (row, col, value) triplets; duplicates are summed.
    pub entries: Vec<(u32, u32, i64)>,
}

impl SparseIntMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseIntMat {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.nrows && c < self.ncols);
        if v != 0 {
            self.entries.push((r as u32, c as u32, v));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

/// Rank and the nontrivial part of the Smith normal form diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SnfOutcome {
    pub rank: usize,
    /// Diagonal entries with absolute value > 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

/// Rank plus torsion diagonal of an integer matrix.
pub fn snf_diagonal(mat: &SparseIntMat) -> SnfOutcome {
    match Eliminator::<i64>::reduce(mat) {
        Some(out) => out,
        // Entry growth overflowed i64: redo exactly in BigInt.
        None => Eliminator::<BigInt>::reduce(mat).expect("bigint elimination cannot overflow"),
    }
}

/// Integer entry abstraction so the sparse phase can run in machine
/// words and escalate to BigInt only when fill-in grows.
trait Entry: Clone + PartialEq + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self - a * b`, None on overflow.
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    /// Exact division by a unit (+1 or -1).
    fn div_unit(&self, unit: &Self) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(a.checked_mul(*b)?)
    }
    fn div_unit(&self, unit: &Self) -> Self {
        self * unit
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude() == &1u32.into()
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }
    fn div_unit(&self, unit: &Self) -> Self {
        self * unit
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

struct Eliminator<T: Entry> {
    rows: Vec<Row<T>>,
    live_row: Vec<bool>,
    /// Lazily maintained candidate lists per column; `col_nnz` is exact.
    col_rows: Vec<Vec<usize>>,
    col_nnz: Vec<u32>,
    rank: usize,
}

impl<T: Entry> Eliminator<T> {
    fn reduce(mat: &SparseIntMat) -> Option<SnfOutcome> {
        let mut me: Eliminator<T> = Eliminator {
            rows: vec![Vec::new(); mat.nrows],
            live_row: vec![true; mat.nrows],
            col_rows: vec![Vec::new(); mat.ncols],
            col_nnz: vec![0; mat.ncols],
            rank: 0,
        };
        for &(r, c, v) in &mat.entries {
            let r = r as usize;
            match row_get(&me.rows[r], c) {
                Some(e) => {
                    let sum = e.add(&T::from_i64(v))?;
                    if sum.is_nil() {
                        row_remove(&mut me.rows[r], c);
                        me.col_nnz[c as usize] -= 1;
                    } else {
                        row_set(&mut me.rows[r], c, sum);
                    }
                }
                None => {
                    row_set(&mut me.rows[r], c, T::from_i64(v));
                    me.col_rows[c as usize].push(r);
                    me.col_nnz[c as usize] += 1;
                }
            }
        }
        me.eliminate_min_degree()?;
        if std::env::var("CHROMAKH_SNF_DEBUG").is_ok() {
            let residue_rows = me.live_row.iter().filter(|&&l| l).count();
            eprintln!(
                "snf: {}x{} nnz={} unit_rank={} residue_rows={}",
                mat.nrows,
                mat.ncols,
                mat.entries.len(),
                me.rank,
                residue_rows,
            );
        }
        let residue = me.collect_residue();
        let diag = dense_snf(residue);
        let torsion = diag
            .iter()
            .filter(|d| d.magnitude() > &1u32.into())
            .cloned()
            .collect();
        Some(SnfOutcome {
            rank: me.rank + diag.len(),
            torsion,
        })
    }

    /// Live rows currently holding column `c`, compacting the lazy list.
    fn live_in_col(&mut self, c: u32) -> Vec<u32> {
        let list = std::mem::take(&mut self.col_rows[c as usize]);
        let mut clean: Vec<u32> = list
            .into_iter()
            .filter(|&r| self.live_row[r as usize] && row_get(&self.rows[r as usize], c).is_some())
            .map(|r| r as u32)
            .collect();
        clean.sort_unstable();
        clean.dedup();
        self.col_rows[c as usize] = clean.iter().map(|&r| r as usize).collect();
        debug_assert_eq!(clean.len() as u32, self.col_nnz[c as usize]);
        clean
    }

    /// Removes entry (r, c), updating column bookkeeping.
    fn clear_entry(&mut self, r: usize, c: u32) {
        if row_remove(&mut self.rows[r], c).is_some() {
            self.col_nnz[c as usize] -= 1;
        }
    }

    fn set_entry(&mut self, r: usize, c: u32, v: T) {
        if v.is_nil() {
            self.clear_entry(r, c);
            return;
        }
        if row_set(&mut self.rows[r], c, v) {
            self.col_nnz[c as usize] += 1;
            self.col_rows[c as usize].push(r);
        }
    }

    /// Unit-pivot elimination in minimum-column-degree order. Columns
    /// are drawn from a lazy priority queue keyed by live column count;
    /// an entry is pushed whenever a count changes, stale pops are
    /// discarded. Columns with no unit entry are deferred to the dense
    /// pass (they are revisited automatically if touched again).
    fn eliminate_min_degree(&mut self) -> Option<()> {
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..self.col_nnz.len())
            .filter(|&c| self.col_nnz[c] > 0)
            .map(|c| Reverse((self.col_nnz[c], c as u32)))
            .collect();
        let mut dirty: Vec<u32> = Vec::new();
        while let Some(Reverse((n, c))) = heap.pop() {
            let cur = self.col_nnz[c as usize];
            if cur == 0 || cur != n {
                // Stale entry; a fresh one was pushed when the count changed.
                continue;
            }
            let rows = self.live_in_col(c);
            // Within the column, pivot on the unit entry in the shortest row.
            let pivot_row_id = rows
                .iter()
                .copied()
                .filter(|&r| row_get(&self.rows[r as usize], c).unwrap().is_unit())
                .min_by_key(|&r| self.rows[r as usize].len());
            let Some(pr) = pivot_row_id else {
                continue; // no unit entry; leave for the dense pass
            };
            self.eliminate(pr as usize, c, &rows, &mut dirty)?;
            for d in dirty.drain(..) {
                if self.col_nnz[d as usize] > 0 {
                    heap.push(Reverse((self.col_nnz[d as usize], d)));
                }
            }
        }
        Some(())
    }

    /// Clears column `pc` using the unit pivot in row `pr`, then retires
    /// the pivot row. Touched columns are appended to `dirty`.
    fn eliminate(
        &mut self,
        pr: usize,
        pc: u32,
        col_rows: &[u32],
        dirty: &mut Vec<u32>,
    ) -> Option<()> {
        let pivot = row_get(&self.rows[pr], pc).unwrap();
        let pivot_row: Row<T> = self.rows[pr].clone();
        for &r in col_rows {
            let r = r as usize;
            if r == pr {
                continue;
            }
            let factor = row_get(&self.rows[r], pc).unwrap().div_unit(&pivot);
            for (c, pv) in &pivot_row {
                let cur = row_get(&self.rows[r], *c).unwrap_or_else(|| T::from_i64(0));
                let next = cur.sub_mul(&factor, pv)?;
                self.set_entry(r, *c, next);
                dirty.push(*c);
            }
            debug_assert!(row_get(&self.rows[r], pc).is_none());
        }
        let cols: Vec<u32> = self.rows[pr].iter().map(|e| e.0).collect();
        for c in cols {
            self.clear_entry(pr, c);
            dirty.push(c);
        }
        self.live_row[pr] = false;
        self.rank += 1;
        Some(())
    }

    /// Remaining live rows, densified over their surviving columns.
    fn collect_residue(&mut self) -> Vec<Vec<BigInt>> {
        let mut cols: Vec<u32> = Vec::new();
        for r in 0..self.rows.len() {
            if self.live_row[r] {
                cols.extend(self.rows[r].iter().map(|e| e.0));
            }
        }
        cols.sort_unstable();
        cols.dedup();
        let pos: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = Vec::new();
        for r in 0..self.rows.len() {
            if !self.live_row[r] || self.rows[r].is_empty() {
                continue;
            }
            let mut dense = vec![BigInt::zero(); cols.len()];
            for (c, v) in self.rows[r].iter() {
                dense[pos[c]] = v.to_bigint();
            }
            out.push(dense);
        }
        out
    }
}

/// Classical dense SNF over BigInt; returns every nonzero diagonal entry
/// (absolute value, divisibility order).
fn dense_snf(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let mut diag: Vec<BigInt> = Vec::new();
    if m.is_empty() {
        return diag;
    }
    let ncols = m[0].len();
    let nrows = m.len();
    let mut tr = 0usize;
    let mut tc = 0usize;
    while tr < nrows && tc < ncols {
        let mut pivot: Option<(usize, usize)> = None;
        for r in tr..nrows {
            for c in tc..ncols {
                if !m[r][c].is_zero()
                    && pivot.map_or(true, |(pr, pc)| m[r][c].magnitude() < m[pr][pc].magnitude())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(tr, pr);
        for row in m.iter_mut() {
            row.swap(tc, pc);
        }

        loop {
            // Clear the pivot column, restarting with any smaller remainder.
            let mut clean = true;
            let p = m[tr][tc].clone();
            for r in tr + 1..nrows {
                if m[r][tc].is_zero() {
                    continue;
                }
                let q = div_round(&m[r][tc], &p);
                if !q.is_zero() {
                    for c in tc..ncols {
                        let sub = &m[tr][c] * &q;
                        m[r][c] -= sub;
                    }
                }
                if !m[r][tc].is_zero() {
                    m.swap(tr, r);
                    clean = false;
                    break;
                }
            }
            if !clean {
                continue;
            }
            // Clear the pivot row.
            let p = m[tr][tc].clone();
            for c in tc + 1..ncols {
                if m[tr][c].is_zero() {
                    continue;
                }
                let q = div_round(&m[tr][c], &p);
                if !q.is_zero() {
                    for r in tr..nrows {
                        let sub = &m[r][tc] * &q;
                        m[r][c] -= sub;
                    }
                }
                if !m[tr][c].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(tc, c);
                    }
                    clean = false;
                    break;
                }
            }
            if clean {
                break;
            }
        }

        // The pivot must divide every remaining entry; if not, merge the
        // offending row into the pivot row and redo this pivot.
        let p = m[tr][tc].clone();
        let mut fixed = true;
        'outer: for r in tr + 1..nrows {
            for c in tc + 1..ncols {
                if !(&m[r][c] % &p).is_zero() {
                    for cc in tc..ncols {
                        let add = m[r][cc].clone();
                        m[tr][cc] += add;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(p.abs());
        tr += 1;
        tc += 1;
    }
    diag
}

/// Round-to-nearest integer division, keeping remainders at most |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if (&r * 2i32).magnitude() > b.magnitude() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseIntMat {
        let nrows = rows.len();
        let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut m = SparseIntMat::new(nrows, ncols.max(1));
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.push(r, c, v);
            }
        }
        m
    }

    fn diag_of(rows: &[&[i64]]) -> (usize, Vec<i64>) {
        let out = snf_diagonal(&mat(rows));
        (
            out.rank,
            out.torsion
                .iter()
                .map(|d| i64::try_from(d).unwrap())
                .collect(),
        )
    }

    #[test]
    fn textbook_example() {
        // det = 624; gcd of entries 2, gcd of 2x2 minors 4, so the
        // elementary divisors are (2, 2, 156).
        let (rank, tors) = diag_of(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        assert_eq!(rank, 3);
        assert_eq!(tors, vec![2, 2, 156]);
    }

    #[test]
    fn unit_and_zero_matrices() {
        let (rank, tors) = diag_of(&[&[1, 0], &[0, 1]]);
        assert_eq!((rank, tors.len()), (2, 0));
        let (rank, tors) = diag_of(&[&[0, 0], &[0, 0]]);
        assert_eq!((rank, tors.len()), (0, 0));
    }

    #[test]
    fn lone_torsion_entries_survive_the_cascade() {
        let (rank, tors) = diag_of(&[&[2, 0], &[0, 0]]);
        assert_eq!(rank, 1);
        assert_eq!(tors, vec![2]);
        // diag(2,3) has SNF diagonal (1,6).
        let (rank, tors) = diag_of(&[&[2, 0], &[0, 3]]);
        assert_eq!(rank, 2);
        assert_eq!(tors, vec![6]);
    }

    #[test]
    fn mixed_units_and_torsion() {
        let (rank, tors) = diag_of(&[&[1, 2, 3, 0], &[0, 2, 0, 2], &[0, 0, 4, 4], &[0, 0, 0, 0]]);
        assert_eq!(rank, 3);
        assert_eq!(tors, vec![2, 4]);
    }

    #[test]
    fn random_matrices_match_naive_rank_and_det() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let nr = rng.gen_range(1..7);
            let nc = rng.gen_range(1..7);
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.gen_range(-4i64..=4)).collect())
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let out = snf_diagonal(&mat(&refs));
            assert_eq!(out.rank, naive_rank(&rows), "matrix {:?}", rows);
            // For square full-rank matrices, the product of all SNF
            // diagonal entries equals |det|.
            if nr == nc && out.rank == nr {
                let det = naive_det(&rows).unsigned_abs();
                let prod: num_bigint::BigUint = out
                    .torsion
                    .iter()
                    .map(|t| t.magnitude().clone())
                    .product();
                assert_eq!(prod, num_bigint::BigUint::from(det.max(1)), "{:?}", rows);
            }
        }
    }

    fn naive_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let (nr, nc) = (m.len(), m[0].len());
        let (mut rank, mut col) = (0, 0);
        while rank < nr && col < nc {
            let piv = (rank..nr)
                .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
                .unwrap();
            if m[piv][col].abs() > 1e-9 {
                m.swap(rank, piv);
                for r in 0..nr {
                    if r != rank {
                        let f = m[r][col] / m[rank][col];
                        for c in col..nc {
                            m[r][c] -= f * m[rank][c];
                        }
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank
    }

    fn naive_det(rows: &[Vec<i64>]) -> i64 {
        let n = rows.len();
        if n == 1 {
            return rows[0][0];
        }
        let mut det = 0i64;
        for c in 0..n {
            let minor: Vec<Vec<i64>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != c)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = rows[0][c] * naive_det(&minor);
            det += if c % 2 == 0 { term } else { -term };
        }
        det
    }
}
