//! Exact sparse linear algebra: ranks and kernels over fields, and Smith
//! normal form over `ℤ`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::Field;

/// A sparse integer matrix stored by rows. Row entries are sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let ncols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged dense matrix");
                r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, v)).collect()
            })
            .collect();
        SparseMatrix { nrows: dense.len(), ncols, rows }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) out of bounds");
            *acc[r].entry(c).or_insert(0) += v;
        }
        let rows = acc.into_iter().map(|m| m.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.rows[r]
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c].push((r, v));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                d[r][c] = v;
            }
        }
        d
    }

    /// `self · other` over `ℤ`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut triplets = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(c, b) in &other.rows[k] {
                    triplets.push((r, c, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }
}

pub type SparseVec<E> = Vec<(usize, E)>;

/// `a - factor * b` for sorted sparse vectors.
fn axpy<F: Field>(field: &F, a: &SparseVec<F::Elem>, factor: &F::Elem, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = field.neg(&field.mul(factor, &b[j].1));
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A row-echelon basis over a field, grown one vector at a time.
///
/// Stored rows are monic: the leading coefficient is one.
#[derive(Debug, Clone)]
pub struct EchelonBasis<F: Field> {
    field: F,
    ncols: usize,
    pivots: BTreeMap<usize, SparseVec<F::Elem>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        EchelonBasis { field, ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        v.retain(|(_, x)| !self.field.is_zero(x));
        let mut k = 0;
        while k < v.len() {
            let col = v[k].0;
            match self.pivots.get(&col) {
                Some(row) => {
                    let factor = v[k].1.clone();
                    v = axpy(&self.field, &v, &factor, row);
                }
                None => k += 1,
            }
        }
        v
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        let mut v = v;
        v.sort_by_key(|(c, _)| *c);
        v.retain(|(_, x)| !self.field.is_zero(x));
        // Only the leading entry needs to avoid existing pivots.
        loop {
            let Some((col, lead)) = v.first().cloned() else {
                return false;
            };
            match self.pivots.get(&col) {
                Some(row) => v = axpy(&self.field, &v, &lead, row),
                None => {
                    let inv = self.field.inv(&lead);
                    for (_, x) in v.iter_mut() {
                        *x = self.field.mul(x, &inv);
                    }
                    self.pivots.insert(col, v);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: SparseVec<F::Elem>) -> bool {
        let mut v = v;
        v.sort_by_key(|(c, _)| *c);
        self.reduce(v).is_empty()
    }

    /// Fully reduced rows, keyed by pivot column.
    pub fn into_reduced(self) -> BTreeMap<usize, SparseVec<F::Elem>> {
        let field = self.field;
        let mut done: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
        // Back-substitute from the rightmost pivot.
        for (col, mut row) in self.pivots.into_iter().rev() {
            let mut k = 1;
            while k < row.len() {
                let c = row[k].0;
                match done.get(&c) {
                    Some(prow) => {
                        let factor = row[k].1.clone();
                        row = axpy(&field, &row, &factor, prow);
                    }
                    None => k += 1,
                }
            }
            done.insert(col, row);
        }
        done
    }
}

fn row_as_field<F: Field>(field: &F, row: &[(usize, i64)]) -> SparseVec<F::Elem> {
    row.iter().map(|&(c, v)| (c, field.from_i64(v))).filter(|(_, x)| !field.is_zero(x)).collect()
}

/// Rank of an integer matrix over the given field.
pub fn rank_over<F: Field>(m: &SparseMatrix, field: &F) -> usize {
    // Eliminating the shorter side is cheaper.
    let work = if m.nrows() > m.ncols() { m.transpose() } else { m.clone() };
    let mut basis = EchelonBasis::new(field.clone(), work.ncols());
    for r in 0..work.nrows() {
        basis.insert(row_as_field(field, work.row(r)));
    }
    basis.rank()
}

/// Basis of `{x : m x = 0}` over the field, one dense vector per basis element.
pub fn kernel_basis<F: Field>(m: &SparseMatrix, field: &F) -> Vec<Vec<F::Elem>> {
    let mut basis = EchelonBasis::new(field.clone(), m.ncols());
    for r in 0..m.nrows() {
        basis.insert(row_as_field(field, m.row(r)));
    }
    let reduced = basis.into_reduced();
    let free: Vec<usize> = (0..m.ncols()).filter(|c| !reduced.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); m.ncols()];
            v[f] = field.one();
            for (&pc, row) in &reduced {
                if let Some((_, x)) = row.iter().find(|(c, _)| *c == f) {
                    v[pc] = field.neg(x);
                }
            }
            v
        })
        .collect()
}

/// Invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Working storage for integer elimination with both row and column operations.
struct IntWork {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl IntWork {
    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// `row_t -= q * row_s`
    fn row_op(&mut self, t: usize, s: usize, q: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[s].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[t].get(&c).cloned().unwrap_or_default();
            self.set(t, c, cur - q * v);
        }
    }

    /// `col_t -= q * col_s`
    fn col_op(&mut self, t: usize, s: usize, q: &BigInt) {
        let src: Vec<usize> = self.cols[s].iter().copied().collect();
        for r in src {
            let v = self.rows[r][&s].clone();
            let cur = self.rows[r].get(&t).cloned().unwrap_or_default();
            self.set(r, t, cur - q * v);
        }
    }

    fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.rows[r][&c]
    }
}

/// Smith normal form by elimination with minimal-absolute-value pivots.
pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let mut w = IntWork {
        rows: m.rows.iter().map(|row| row.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()).collect(),
        cols: vec![BTreeSet::new(); m.ncols()],
    };
    for (r, row) in m.rows.iter().enumerate() {
        for &(c, _) in row {
            w.cols[c].insert(r);
        }
    }

    let mut diagonal: Vec<BigInt> = Vec::new();
    loop {
        // Global pivot: smallest |entry|, stopping early at a unit.
        let mut best: Option<(usize, usize, BigInt)> = None;
        'search: for (r, row) in w.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                    let unit = a.is_one();
                    best = Some((r, c, a));
                    if unit {
                        break 'search;
                    }
                }
            }
        }
        let Some((mut pr, mut pc, _)) = best else { break };

        loop {
            // Clear the pivot column with row operations.
            let mut smaller: Option<(usize, BigInt)> = None;
            let others: Vec<usize> = w.cols[pc].iter().copied().filter(|&r| r != pr).collect();
            let pivot = w.get(pr, pc).clone();
            for r in others {
                let q = w.get(r, pc).div_floor(&pivot);
                w.row_op(r, pr, &q);
                if let Some(rem) = w.rows[r].get(&pc) {
                    let a = rem.abs();
                    if smaller.as_ref().is_none_or(|(_, b)| a < *b) {
                        smaller = Some((r, a));
                    }
                }
            }
            if let Some((r, _)) = smaller {
                pr = r;
                continue;
            }
            // Clear the pivot row with column operations.
            let mut smaller: Option<(usize, BigInt)> = None;
            let others: Vec<usize> = w.rows[pr].keys().copied().filter(|&c| c != pc).collect();
            for c in others {
                let q = w.get(pr, c).div_floor(&pivot);
                w.col_op(c, pc, &q);
                if let Some(rem) = w.rows[pr].get(&c) {
                    let a = rem.abs();
                    if smaller.as_ref().is_none_or(|(_, b)| a < *b) {
                        smaller = Some((c, a));
                    }
                }
            }
            if let Some((c, _)) = smaller {
                pc = c;
                continue;
            }
            break;
        }
        let d = w.get(pr, pc).abs();
        w.set(pr, pc, BigInt::zero());
        diagonal.push(d);
    }

    let rank = diagonal.len();
    let units = diagonal.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diagonal.into_iter().filter(|d| !d.is_one()).collect();
    // Enforce the divisibility chain: (a, b) -> (gcd, lcm).
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            if g != rest[i] {
                let l = rest[i].lcm(&rest[j]);
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    let mut invariant_factors = vec![BigInt::one(); units];
    invariant_factors.extend(rest);
    invariant_factors.sort_by_key(|d| !d.is_one());
    SmithForm { invariant_factors, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, Rationals};
    use num_rational::BigRational;

    /// Dense rational Gaussian elimination, used only as an oracle.
    fn dense_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            m.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let (nr, nc) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for c in 0..nc {
            let Some(p) = (rank..nr).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            for r in 0..nr {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in 0..nc {
                        let sub = &f * &a[rank][k];
                        a[r][k] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn snf_examples() {
        let id = SparseMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let s = smith_normal_form(&id);
        assert_eq!(s.invariant_factors, vec![BigInt::one(); 3]);
        let d = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 0]]);
        let s = smith_normal_form(&d);
        assert_eq!(s.rank, 1);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2)]);
        let z = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&z);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let c = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&c).invariant_factors, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn snf_rank_matches_rational_rank_on_random_matrices() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let mut dense: Vec<Vec<i64>> = (0..6).map(|_| (0..6).map(|_| rng.random_range(-9..=9)).collect()).collect();
            if trial % 3 == 0 {
                // force a dependency
                let (a, b) = (dense[0].clone(), dense[1].clone());
                dense[5] = a.iter().zip(&b).map(|(x, y)| 2 * x - 3 * y).collect();
            }
            let m = SparseMatrix::from_dense(&dense);
            let expected = dense_rank(&dense);
            assert_eq!(smith_normal_form(&m).rank, expected);
            assert_eq!(rank_over(&m, &Rationals), expected);
            let s = smith_normal_form(&m);
            for w in s.invariant_factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn kernels_and_field_rank() {
        // rank 1 over F2, rank 2 over Q
        let m = SparseMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(rank_over(&m, &Rationals), 2);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(rank_over(&m, &f2), 1);
        let k = kernel_basis(&m, &f2);
        assert_eq!(k, vec![vec![1, 1]]);
        assert!(kernel_basis(&m, &Rationals).is_empty());

        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&m, &Rationals);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigRational = v.iter().zip([1, 2, 3]).map(|(x, c)| x * BigRational::from_integer(c.into())).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn echelon_incremental() {
        let f = PrimeField::new(5).unwrap();
        let mut b = EchelonBasis::new(f, 3);
        assert!(b.insert(vec![(0, 1), (1, 2)]));
        assert!(!b.insert(vec![(0, 2), (1, 4)]));
        assert!(b.insert(vec![(1, 1)]));
        assert!(b.contains(vec![(0, 3)]));
        assert!(!b.contains(vec![(2, 1)]));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn transpose_and_product() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 3]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![2, 3]]);
        assert_eq!(a.mul(&a).to_dense(), vec![vec![1, 8], vec![0, 9]]);
    }
}
