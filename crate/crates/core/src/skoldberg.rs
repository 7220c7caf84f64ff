//! Degree-`q` slices of `A ⊗_{A^e} P_i` for Sköldberg's resolution and the
//! second Hochschild homology they compute.
//!
//! A slice basis element is a cycle `a_1 ⋯ a_q` together with a split
//! position: the left tensor factor is `a_1 ⋯ a_split ∈ A` and the right one
//! is the remaining arrows. Term 1 splits after `q - 1` arrows, term 2 after
//! `q - n`, term 3 after `q - n - 1`. The left factor must survive in `A`,
//! so a slice is nonempty only when `0 ≤ split ≤ n - 1`.
//!
//! Terms 1 and 2 list cycles in sorted order. Term 3 lists `γ` at the
//! position of `c(γ)`, so that `d̃₃` of element `k` is `v_{k+1} - v_k` and
//! the matrix is the circulant with `-1` on the diagonal.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{kernel_basis, rank, Matrix, SparseVector, Subspace};
use crate::quiver::{orbit_decomposition, CycleOrbit, Path, Quiver};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    degree: usize,
    term: usize,
    split: usize,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl GradedSlice {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn term(&self) -> usize {
        self.term
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Underlying cycles `a_1 ⋯ a_q`.
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn index_of(&self, word: &Path) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn left(&self, k: usize) -> Path {
        self.basis[k].subpath(0, self.split)
    }

    pub fn right(&self, k: usize) -> Path {
        let w = &self.basis[k];
        w.subpath(self.split, w.len())
    }

    pub fn label(&self, k: usize) -> String {
        format!("{} ⊗ {}", self.left(k).label(), self.right(k).label())
    }
}

pub fn slice_basis(a: &TruncatedAlgebra, term: usize, q: usize) -> Result<GradedSlice> {
    let n = a.truncation();
    let offset = match term {
        1 => 1,
        2 => n,
        3 => n + 1,
        _ => return Err(Error::Invalid(format!("slice term must be 1, 2 or 3, got {term}"))),
    };
    let valid = q >= offset && q - offset < n && q > 0;
    let split = q.saturating_sub(offset);
    let mut basis = if valid { a.quiver().cycles(q) } else { Vec::new() };
    if term == 3 {
        // c^{-1} moves the first arrow to the end
        basis = basis.iter().map(|g| g.rotate_to(1)).collect();
    }
    let index = basis.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
    Ok(GradedSlice { degree: q, term, split, basis, index })
}

/// A differential between two slices; the matrix has one column per source
/// basis element.
#[derive(Clone, Debug)]
pub struct SliceDifferential {
    pub source: GradedSlice,
    pub target: GradedSlice,
    pub matrix: Matrix,
}

/// `(d̃₂)_q`: `a_1 ⋯ a_{q-n} ⊗ a_{q-n+1} ⋯ a_q` maps to the sum over
/// `j < n` of the term-1 element whose word is the rotation starting at
/// `a_{j+q-n+2}`.
pub fn d2_matrix(a: &TruncatedAlgebra, q: usize) -> Result<SliceDifferential> {
    let source = slice_basis(a, 2, q)?;
    let target = slice_basis(a, 1, q)?;
    let n = a.truncation();
    let field = a.field();
    let mut columns = Vec::with_capacity(source.dim());
    for w in source.basis() {
        let mut entries = Vec::new();
        if !target.is_empty() {
            for j in 0..n {
                let r = w.rotate_to(j + q + 1 - n);
                let row = target.index_of(&r).expect("rotation of a cycle is a cycle");
                entries.push((row, field.one()));
            }
        }
        columns.push(SparseVector::from_entries(entries));
    }
    let matrix = Matrix::from_columns(field, target.dim(), &columns);
    Ok(SliceDifferential { source, target, matrix })
}

/// `(d̃₃)_q`: a term-3 element with word `γ` maps to `γ - c(γ)` in term 2.
pub fn d3_matrix(a: &TruncatedAlgebra, q: usize) -> Result<SliceDifferential> {
    let source = slice_basis(a, 3, q)?;
    let target = slice_basis(a, 2, q)?;
    let field = a.field();
    let mut columns = Vec::with_capacity(source.dim());
    for w in source.basis() {
        let mut entries = Vec::new();
        if !target.is_empty() {
            entries.push((target.index_of(w).unwrap(), field.one()));
            entries.push((target.index_of(&w.rotate()).unwrap(), -field.one()));
        }
        columns.push(SparseVector::from_entries(entries));
    }
    let matrix = Matrix::from_columns(field, target.dim(), &columns);
    Ok(SliceDifferential { source, target, matrix })
}

/// `dim Ker(d̃₂)_q - rank(d̃₃)_q`.
pub fn hh2_dimension(a: &TruncatedAlgebra, q: usize) -> Result<usize> {
    let d2 = d2_matrix(a, q)?;
    let d3 = d3_matrix(a, q)?;
    Ok(d2.source.dim() - rank(&d2.matrix) - rank(&d3.matrix))
}

/// Closed form of `dim HH_{2,q}`: `a_q` for `n+1 ≤ q ≤ 2n-1`; at `q = n`
/// the sum over `r | n` of `b_r · (r - 1 + dim Ker(·n/r))`; zero otherwise.
pub fn hh2_formula(quiver: &Quiver, n: usize, field: FieldSpec, q: usize) -> usize {
    if q > n && q < 2 * n {
        quiver.cycle_orbit_count(q)
    } else if q == n {
        (1..=n)
            .filter(|r| n % r == 0)
            .map(|r| quiver.basic_orbit_count(r) * (r - 1 + field.multiplication_kernel_dim((n / r) as u64)))
            .sum()
    } else {
        0
    }
}

/// Coefficients on the dual basis of the degree-`q` term-2 slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSliceVector {
    pub degree: usize,
    pub coeffs: SparseVector,
}

impl DualSliceVector {
    pub fn new(degree: usize, coeffs: SparseVector) -> Self {
        Self { degree, coeffs }
    }

    pub fn basis(degree: usize, index: usize, field: FieldSpec) -> Self {
        Self { degree, coeffs: SparseVector::unit(index, field) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::MixedDegree(self.degree, other.degree));
        }
        Ok(Self { degree: self.degree, coeffs: self.coeffs.add(&other.coeffs) })
    }
}

/// Representatives of a basis of `Ker(d̃₃ᵀ)/Im(d̃₂ᵀ)`: kernel vectors in
/// reduced echelon order, kept whenever they enlarge the span of the image.
pub fn dual_hh2_basis(a: &TruncatedAlgebra, q: usize) -> Result<Vec<DualSliceVector>> {
    let d2 = d2_matrix(a, q)?;
    let d3 = d3_matrix(a, q)?;
    let mut span = Subspace::new(a.field());
    for row in d2.matrix.rows() {
        span.insert(row);
    }
    let kernel = if d3.source.is_empty() {
        (0..d3.target.dim()).map(|i| SparseVector::unit(i, a.field())).collect()
    } else {
        kernel_basis(&d3.matrix.transpose())
    };
    let mut out = Vec::new();
    for v in kernel {
        if span.insert(&v) {
            out.push(DualSliceVector::new(q, v));
        }
    }
    Ok(out)
}

/// Orbit blocks of the slice basis, as index lists.
pub fn orbit_blocks(slice: &GradedSlice) -> Vec<Vec<usize>> {
    let orbits: Vec<CycleOrbit> = orbit_decomposition(slice.basis()).expect("slices hold equal-length cycles");
    orbits
        .iter()
        .map(|o| {
            let mut idx: Vec<usize> = o.members.iter().map(|m| slice.index_of(m).unwrap()).collect();
            idx.sort_unstable();
            idx
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub q: usize,
    pub dim: usize,
    pub formula: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Computed and closed-form dimensions for `q = 1..=2n`.
pub fn homology_table(a: &TruncatedAlgebra) -> Result<Vec<HomologyRow>> {
    let n = a.truncation();
    (1..=2 * n)
        .map(|q| {
            let dim = hh2_dimension(a, q)?;
            let formula = hh2_formula(a.quiver(), n, a.field(), q);
            Ok(HomologyRow { q, dim, formula, matches: dim == formula })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: usize, n: usize, c: u64) -> TruncatedAlgebra {
        TruncatedAlgebra::cyclic(s, n, FieldSpec::new(c).unwrap()).unwrap()
    }

    #[test]
    fn slice_shapes() {
        let a = alg(3, 4, 0);
        let v = slice_basis(&a, 2, 6).unwrap();
        assert_eq!(v.dim(), 3);
        // v_1 = x5x6 ⊗ x1x2x3x4, i.e. x2x3 ⊗ x1x2x3x4 mod 3
        assert_eq!(v.label(1), "x2x3 ⊗ x1x2x3x1");
        let b = alg(3, 3, 0);
        let v = slice_basis(&b, 2, 3).unwrap();
        assert_eq!(v.label(0), "e1 ⊗ x1x2x3");
        assert!(slice_basis(&b, 3, 3).unwrap().is_empty());
        assert!(slice_basis(&b, 4, 3).is_err());
    }

    #[test]
    fn d2_at_q_equal_n() {
        let a = alg(3, 6, 0);
        let d2 = d2_matrix(&a, 6).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d2.matrix.get(i, j), FieldSpec::rationals().from_i64(2));
            }
        }
        assert!(d2_matrix(&a, 7).unwrap().matrix.is_zero());
        let f2 = alg(1, 2, 2);
        let d2 = d2_matrix(&f2, 2).unwrap();
        assert_eq!((d2.matrix.nrows(), d2.matrix.ncols()), (1, 1));
        assert!(d2.matrix.is_zero());
    }

    #[test]
    fn d3_is_the_circulant() {
        let a = alg(3, 2, 0);
        let m = d3_matrix(&a, 3).unwrap().matrix;
        let f = FieldSpec::rationals();
        for i in 0..3 {
            assert_eq!(m.get(i, i), -f.one());
            assert_eq!(m.get((i + 1) % 3, i), f.one());
            assert!(m.get(i, (i + 1) % 3).is_zero());
        }
        assert!(d3_matrix(&alg(3, 3, 0), 3).unwrap().matrix.nrows() == 3);
        assert!(d3_matrix(&alg(3, 3, 0), 3).unwrap().matrix.is_zero());
    }

    #[test]
    fn paper_dimensions() {
        let a = alg(3, 4, 0);
        let dims: Vec<usize> = (1..=8).map(|q| hh2_dimension(&a, q).unwrap()).collect();
        assert_eq!(dims, [0, 0, 0, 0, 0, 1, 0, 0]);
        assert_eq!(hh2_dimension(&alg(3, 3, 0), 3).unwrap(), 2);
        assert_eq!(hh2_dimension(&alg(1, 2, 2), 2).unwrap(), 1);
        assert_eq!(hh2_dimension(&alg(1, 2, 0), 2).unwrap(), 0);
    }

    #[test]
    fn dual_bases() {
        let f = FieldSpec::rationals();
        let all = SparseVector::from_entries((0..3).map(|i| (i, f.one())));
        assert_eq!(dual_hh2_basis(&alg(3, 4, 0), 6).unwrap(), vec![DualSliceVector::new(6, all.clone())]);
        assert_eq!(dual_hh2_basis(&alg(3, 2, 0), 3).unwrap(), vec![DualSliceVector::new(3, all)]);
        let case2 = dual_hh2_basis(&alg(3, 3, 0), 3).unwrap();
        assert_eq!(case2, vec![DualSliceVector::basis(3, 0, f), DualSliceVector::basis(3, 1, f)]);
        assert!(dual_hh2_basis(&alg(3, 4, 0), 5).unwrap().is_empty());
    }

    #[test]
    fn mixed_degree_sum_rejected() {
        let f = FieldSpec::rationals();
        let a = DualSliceVector::basis(3, 0, f);
        let b = DualSliceVector::basis(4, 0, f);
        assert_eq!(a.add(&b), Err(Error::MixedDegree(3, 4)));
    }
}
