//! Sparse exact linear algebra: vectors, row-sparse matrices, incremental
//! echelon forms, rank, kernels and linear solves.
//!
//! Every elimination pivots on the first nonzero column, so results are
//! deterministic. Rank, kernel and solve first split the matrix into the
//! connected components of its row/column incidence graph; the homology
//! matrices here are block diagonal under the path-length grading and the
//! split turns one large elimination into many small ones.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::field::{FieldSpec, Scalar};

/// Sorted `(index, coefficient)` pairs with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Scalar)>>(entries: I) -> Self {
        let mut raw: Vec<(usize, Scalar)> = entries.into_iter().collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { entries: out }
    }

    pub fn unit(index: usize, field: FieldSpec) -> Self {
        Self { entries: vec![(index, field.one())] }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: FieldSpec) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn scaled(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Self::new();
        }
        Self { entries: self.entries.iter().map(|(i, c)| (*i, c * factor)).collect() }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &SparseVector, factor: &Scalar) -> Self {
        if factor.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * factor));
                        b.next();
                    } else {
                        let v = x + &(y * factor);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * factor));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &SparseVector) -> Self {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &SparseVector) -> Self {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &-c.field().one()),
        }
    }

    pub fn dot(&self, other: &SparseVector) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                let t = x * y;
                acc = Some(match acc {
                    Some(s) => s + t,
                    None => t,
                });
                a += 1;
                b += 1;
            }
        }
        acc
    }

    fn remap(&self, map: &HashMap<usize, usize>) -> Self {
        let mut entries: Vec<(usize, Scalar)> =
            self.entries.iter().map(|(i, c)| (map[i], c.clone())).collect();
        entries.sort_by_key(|(i, _)| *i);
        Self { entries }
    }
}

/// Row-sparse matrix over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    cols: usize,
    rows: Vec<SparseVector>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self { field, cols, rows: vec![SparseVector::new(); rows] }
    }

    pub fn identity(field: FieldSpec, size: usize) -> Self {
        Self { field, cols: size, rows: (0..size).map(|i| SparseVector::unit(i, field)).collect() }
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<SparseVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.entries.last().is_none_or(|(i, _)| *i < cols)));
        Self { field, cols, rows }
    }

    pub fn from_dense(field: FieldSpec, data: &[Vec<i64>]) -> Self {
        let cols = data.first().map_or(0, Vec::len);
        let rows = data
            .iter()
            .map(|r| SparseVector::from_entries(r.iter().enumerate().map(|(j, v)| (j, field.from_i64(*v)))))
            .collect();
        Self { field, cols, rows }
    }

    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets<I>(field: FieldSpec, rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            debug_assert!(i < rows && j < cols);
            buckets[i].push((j, v));
        }
        let rows = buckets.into_iter().map(SparseVector::from_entries).collect();
        Self { field, cols, rows }
    }

    /// Builds from columns given as sparse vectors of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[SparseVector]) -> Self {
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, c)| (i, j, c.clone())));
        Self::from_triplets(field, rows, columns.len(), triplets)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVector::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVector::nnz).sum()
    }

    pub fn transpose(&self) -> Matrix {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, c)| (j, i, c.clone())));
        Matrix::from_triplets(self.field, self.cols, self.rows.len(), triplets)
    }

    pub fn mul_vec(&self, v: &SparseVector) -> SparseVector {
        SparseVector::from_entries(
            self.rows.iter().enumerate().filter_map(|(i, r)| r.dot(v).map(|c| (i, c))),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch in matrix product");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter().fold(SparseVector::new(), |acc, (k, c)| acc.add_scaled(&other.rows[k], c))
            })
            .collect();
        Matrix { field: self.field, cols: other.cols, rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|r| r.to_dense(self.cols, self.field)).collect()
    }
}

/// A subspace held in echelon form. Pivot rows are normalized to leading
/// coefficient 1; inserting reduces against the existing pivots.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: FieldSpec,
    rows: Vec<SparseVector>,
    pivot_of: HashMap<usize, usize>,
}

impl Subspace {
    pub fn new(field: FieldSpec) -> Self {
        Self { field, rows: Vec::new(), pivot_of: HashMap::new() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Echelon rows in insertion order.
    pub fn basis(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().expect("pivot rows are nonzero").0)
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut v = v.clone();
        let mut pos = 0;
        while pos < v.entries.len() {
            let (col, coef) = &v.entries[pos];
            match self.pivot_of.get(col) {
                Some(&r) => {
                    let factor = -coef;
                    v = v.add_scaled(&self.rows[r], &factor);
                }
                None => pos += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let r = self.reduce(v);
        let Some((col, lead)) = r.leading() else {
            return false;
        };
        let inv = lead.inv().expect("leading entry is nonzero");
        let r = r.scaled(&inv);
        self.pivot_of.insert(col, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Rows sorted by pivot column, each with zeros in the other pivot columns.
    pub fn reduced_basis(&self) -> Vec<SparseVector> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.rows[k].leading().unwrap().0));
        let mut done: Vec<SparseVector> = vec![SparseVector::new(); self.rows.len()];
        let mut back = Subspace::new(self.field);
        for k in order {
            let row = &self.rows[k];
            let lead = row.leading().unwrap().0;
            let tail = SparseVector { entries: row.entries[1..].to_vec() };
            let reduced = back.reduce(&tail);
            let mut entries = vec![(lead, self.field.one())];
            entries.extend(reduced.entries);
            let full = SparseVector { entries };
            back.pivot_of.insert(lead, back.rows.len());
            back.rows.push(full.clone());
            done[k] = full;
        }
        done.sort_by_key(|r| r.leading().unwrap().0);
        done
    }
}

pub fn span_dim<'a, I>(field: FieldSpec, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a SparseVector>,
{
    let mut s = Subspace::new(field);
    for v in vectors {
        s.insert(v);
    }
    s.dim()
}

/// Connected components of the bipartite row/column graph. Each block lists
/// its rows and columns in increasing order; blocks are ordered by their
/// smallest column. Zero rows form no block.
struct Blocks {
    blocks: Vec<(Vec<usize>, Vec<usize>)>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn split_blocks(m: &Matrix) -> Blocks {
    let mut parent: Vec<usize> = (0..m.cols).collect();
    for r in &m.rows {
        let mut it = r.iter();
        if let Some((first, _)) = it.next() {
            let a = find(&mut parent, first);
            for (j, _) in it {
                let b = find(&mut parent, j);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
    }
    // Path compression so roots are final; a root is the smallest column in
    // its block because unions always keep the smaller index.
    let mut index_of_root: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for j in 0..m.cols {
        let root = find(&mut parent, j);
        let k = *index_of_root.entry(root).or_insert_with(|| {
            blocks.push((Vec::new(), Vec::new()));
            blocks.len() - 1
        });
        blocks[k].1.push(j);
    }
    for (i, r) in m.rows.iter().enumerate() {
        if let Some((j, _)) = r.leading() {
            let root = find(&mut parent, j);
            blocks[index_of_root[&root]].0.push(i);
        }
    }
    Blocks { blocks }
}

const PARALLEL_THRESHOLD: usize = 64;

fn block_subspace(m: &Matrix, rows: &[usize], cols: &[usize]) -> (Subspace, HashMap<usize, usize>) {
    let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let mut s = Subspace::new(m.field);
    for &i in rows {
        s.insert(&m.rows[i].remap(&local));
    }
    (s, local)
}

pub fn rank(m: &Matrix) -> usize {
    let blocks = split_blocks(m);
    let work = |(rows, cols): &(Vec<usize>, Vec<usize>)| {
        if rows.is_empty() {
            0
        } else {
            block_subspace(m, rows, cols).0.dim()
        }
    };
    if blocks.blocks.len() >= PARALLEL_THRESHOLD || m.nnz() > 20_000 {
        blocks.blocks.par_iter().map(work).sum()
    } else {
        blocks.blocks.iter().map(work).sum()
    }
}

/// Kernel vectors from an echelon form: one per free column `f`, the unique
/// kernel element with `x_f = 1` and every other free coordinate zero.
fn echelon_kernel(field: FieldSpec, echelon: &Subspace, ncols: usize) -> Vec<SparseVector> {
    let reduced = echelon.reduced_basis();
    let pivots: HashMap<usize, &SparseVector> =
        reduced.iter().map(|r| (r.leading().unwrap().0, r)).collect();
    let mut per_free: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    for r in &reduced {
        let p = r.leading().unwrap().0;
        for (j, c) in r.iter().skip(1) {
            per_free.entry(j).or_default().push((p, -c));
        }
    }
    (0..ncols)
        .filter(|j| !pivots.contains_key(j))
        .map(|f| {
            let mut entries = per_free.remove(&f).unwrap_or_default();
            entries.push((f, field.one()));
            SparseVector::from_entries(entries)
        })
        .collect()
}

/// Basis of the right null space, ordered by free column.
pub fn kernel_basis(m: &Matrix) -> Vec<SparseVector> {
    let blocks = split_blocks(m);
    let per_block = |(rows, cols): &(Vec<usize>, Vec<usize>)| -> Vec<SparseVector> {
        let (s, _) = block_subspace(m, rows, cols);
        echelon_kernel(m.field, &s, cols.len())
            .into_iter()
            .map(|v| SparseVector { entries: v.entries.into_iter().map(|(k, c)| (cols[k], c)).collect() })
            .collect()
    };
    let nested: Vec<Vec<SparseVector>> = if blocks.blocks.len() >= PARALLEL_THRESHOLD {
        blocks.blocks.par_iter().map(per_block).collect()
    } else {
        blocks.blocks.iter().map(per_block).collect()
    };
    let mut all: Vec<SparseVector> = nested.into_iter().flatten().collect();
    all.sort_by_key(free_column);
    all
}

/// Pivots precede the free columns they depend on, so the free column of
/// a kernel vector built above is its last entry.
fn free_column(v: &SparseVector) -> usize {
    v.entries.last().map_or(0, |(j, _)| *j)
}

/// Some `x` with `m x = b`, the one whose free coordinates are zero; `None`
/// if the system is inconsistent.
pub fn solve(m: &Matrix, b: &SparseVector) -> Option<SparseVector> {
    assert!(b.entries.last().is_none_or(|(i, _)| *i < m.nrows()), "right-hand side too long");
    for (i, _) in b.iter() {
        if m.rows[i].is_zero() {
            return None;
        }
    }
    let blocks = split_blocks(m);
    let per_block = |(rows, cols): &(Vec<usize>, Vec<usize>)| -> Option<Vec<(usize, Scalar)>> {
        let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let rhs_col = cols.len();
        let mut s = Subspace::new(m.field);
        for &i in rows {
            let mut row = m.rows[i].remap(&local);
            if let Some(c) = b.get(i) {
                row.entries.push((rhs_col, c.clone()));
            }
            s.insert(&row);
        }
        if s.pivot_columns().any(|p| p == rhs_col) {
            return None;
        }
        let reduced = s.reduced_basis();
        Some(
            reduced
                .iter()
                .filter_map(|r| {
                    let p = r.leading().unwrap().0;
                    r.get(rhs_col).map(|c| (cols[p], c.clone()))
                })
                .collect(),
        )
    };
    let parts: Vec<Option<Vec<(usize, Scalar)>>> = if blocks.blocks.len() >= PARALLEL_THRESHOLD {
        blocks.blocks.par_iter().map(per_block).collect()
    } else {
        blocks.blocks.iter().map(per_block).collect()
    };
    let mut entries = Vec::new();
    for p in parts {
        entries.extend(p?);
    }
    Some(SparseVector::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant(field: FieldSpec, s: usize) -> Matrix {
        let mut t = Vec::new();
        for i in 0..s {
            t.push((i, i, field.from_i64(-1)));
            t.push(((i + 1) % s, i, field.one()));
        }
        Matrix::from_triplets(field, s, s, t)
    }

    fn fields() -> Vec<FieldSpec> {
        vec![FieldSpec::rationals(), FieldSpec::new(2).unwrap(), FieldSpec::new(3).unwrap()]
    }

    #[test]
    fn trivial_ranks() {
        let q = FieldSpec::rationals();
        assert_eq!(rank(&Matrix::zeros(q, 3, 3)), 0);
        assert_eq!(rank(&Matrix::identity(q, 4)), 4);
        assert!(kernel_basis(&Matrix::identity(q, 2)).is_empty());
    }

    #[test]
    fn circulant_rank_and_kernel() {
        for f in fields() {
            let c = circulant(f, 3);
            assert_eq!(rank(&c), 2);
            assert_eq!(rank(&c.transpose()), 2);
            let k = kernel_basis(&c.transpose());
            assert_eq!(k.len(), 1);
            assert_eq!(k[0], SparseVector::from_entries((0..3).map(|i| (i, f.one()))));
        }
    }

    #[test]
    fn all_ones_row_over_f2() {
        let f = FieldSpec::new(2).unwrap();
        let m = Matrix::from_dense(f, &[vec![1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_identity_and_zero() {
        let q = FieldSpec::rationals();
        let b = SparseVector::from_entries([(0, q.from_i64(5)), (2, q.from_i64(-1))]);
        assert_eq!(solve(&Matrix::identity(q, 3), &b), Some(b.clone()));
        assert_eq!(solve(&Matrix::zeros(q, 3, 3), &b), None);
        assert_eq!(solve(&Matrix::zeros(q, 3, 3), &SparseVector::new()), Some(SparseVector::new()));
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let q = FieldSpec::rationals();
        let m = Matrix::from_dense(q, &[vec![1, 1, 0], vec![0, 0, 2]]);
        let b = SparseVector::from_entries([(0, q.from_i64(3)), (1, q.from_i64(4))]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(x, SparseVector::from_entries([(0, q.from_i64(3)), (2, q.from_i64(2))]));
    }

    #[test]
    fn block_split_matches_whole() {
        let q = FieldSpec::rationals();
        let m = Matrix::from_dense(
            q,
            &[vec![1, 0, 2, 0], vec![0, 1, 0, 1], vec![2, 0, 4, 0], vec![0, 3, 0, 3]],
        );
        assert_eq!(rank(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn reduced_basis_is_reduced() {
        let q = FieldSpec::rationals();
        let mut s = Subspace::new(q);
        s.insert(&SparseVector::from_entries([(0, q.one()), (1, q.one())]));
        s.insert(&SparseVector::from_entries([(1, q.one()), (2, q.one())]));
        let r = s.reduced_basis();
        assert_eq!(r[0], SparseVector::from_entries([(0, q.one()), (2, q.from_i64(-1))]));
        assert_eq!(r[1], SparseVector::from_entries([(1, q.one()), (2, q.one())]));
    }
}
