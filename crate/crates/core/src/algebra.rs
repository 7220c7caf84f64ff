//! The truncated path algebra `A = KΔ/R^n` and its dual bimodule `D(A)`.
//!
//! The dual acts by `(a·f)(x) = f(xa)` and `(f·a)(x) = f(ax)`. On dual
//! basis vectors this strips a suffix or a prefix: `a·p* = x*` when
//! `p = x·a`, and `p*·a = y*` when `p = a·y`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{span_dim, SparseVector};
use crate::quiver::{Path, PathJson, Quiver};

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
pub struct TruncatedAlgebra {
    quiver: Quiver,
    truncation: usize,
    field: FieldSpec,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    product: Vec<Vec<Option<usize>>>,
    strip_suffix: Vec<Vec<Option<usize>>>,
    strip_prefix: Vec<Vec<Option<usize>>>,
    tag: u64,
}

/// Coefficients on the path basis of one specific algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    tag: u64,
    coeffs: SparseVector,
}

/// Coefficients on the dual basis `{p*}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    tag: u64,
    coeffs: SparseVector,
}

pub trait Coefficients {
    fn tag(&self) -> u64;
    fn coeffs(&self) -> &SparseVector;
}

impl Coefficients for AlgebraElement {
    fn tag(&self) -> u64 {
        self.tag
    }
    fn coeffs(&self) -> &SparseVector {
        &self.coeffs
    }
}

impl Coefficients for DualElement {
    fn tag(&self) -> u64 {
        self.tag
    }
    fn coeffs(&self) -> &SparseVector {
        &self.coeffs
    }
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
    pub fn into_coeffs(self) -> SparseVector {
        self.coeffs
    }
}

impl DualElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
    pub fn into_coeffs(self) -> SparseVector {
        self.coeffs
    }
}

/// `(path, scalar)` pair as serialized in element JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub path: PathJson,
    pub coefficient: Scalar,
}

impl TruncatedAlgebra {
    pub fn new(quiver: Quiver, truncation: usize, field: FieldSpec) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::InvalidTruncation(truncation));
        }
        let basis: Vec<Path> = (0..truncation).flat_map(|l| quiver.paths_of_length(l)).collect();
        let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let d = basis.len();
        let mut product = vec![vec![None; d]; d];
        let mut strip_suffix = vec![vec![None; d]; d];
        let mut strip_prefix = vec![vec![None; d]; d];
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                if x.len() + y.len() >= truncation {
                    continue;
                }
                if let Some(p) = x.concat(y) {
                    let k = index[&p];
                    product[i][j] = Some(k);
                    // y·(xy)* = x* and (xy)*·x = y*
                    strip_suffix[j][k] = Some(i);
                    strip_prefix[i][k] = Some(j);
                }
            }
        }
        Ok(Self {
            quiver,
            truncation,
            field,
            basis,
            index,
            product,
            strip_suffix,
            strip_prefix,
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// `KΔ/R^n` on the cyclic quiver with `s` vertices.
    pub fn cyclic(s: usize, n: usize, field: FieldSpec) -> Result<Self> {
        Self::new(Quiver::cyclic(s)?, n, field)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_path(&self, i: usize) -> &Path {
        &self.basis[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vertex_index(&self, v: usize) -> usize {
        self.index[&self.quiver.trivial_path(v)]
    }

    /// Index of `b_i b_j`, `None` when the product vanishes.
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.product[i][j]
    }

    /// Index of `b_a · b_p*`.
    pub fn left_action_index(&self, a: usize, p: usize) -> Option<usize> {
        self.strip_suffix[a][p]
    }

    /// Index of `b_p* · b_a`.
    pub fn right_action_index(&self, p: usize, a: usize) -> Option<usize> {
        self.strip_prefix[a][p]
    }

    fn check<T: Coefficients>(&self, x: &T) -> Result<()> {
        if x.tag() == self.tag {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn element(&self, terms: &[(Path, Scalar)]) -> Result<AlgebraElement> {
        let entries = terms
            .iter()
            .map(|(p, c)| self.index_of(p).map(|i| (i, c.clone())).ok_or(Error::NotABasisPath))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.element_from_vector(SparseVector::from_entries(entries)))
    }

    pub fn element_from_vector(&self, coeffs: SparseVector) -> AlgebraElement {
        AlgebraElement { tag: self.tag, coeffs }
    }

    pub fn dual_from_vector(&self, coeffs: SparseVector) -> DualElement {
        DualElement { tag: self.tag, coeffs }
    }

    pub fn dual(&self, terms: &[(Path, Scalar)]) -> Result<DualElement> {
        let e = self.element(terms)?;
        Ok(self.dual_from_vector(e.coeffs))
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        self.element_from_vector(SparseVector::unit(i, self.field))
    }

    pub fn dual_basis_element(&self, i: usize) -> DualElement {
        self.dual_from_vector(SparseVector::unit(i, self.field))
    }

    pub fn path_element(&self, p: &Path) -> Result<AlgebraElement> {
        self.index_of(p).map(|i| self.basis_element(i)).ok_or(Error::NotABasisPath)
    }

    pub fn zero(&self) -> AlgebraElement {
        self.element_from_vector(SparseVector::new())
    }

    pub fn one(&self) -> AlgebraElement {
        let entries = (0..self.quiver.vertex_count()).map(|v| (self.vertex_index(v), self.field.one()));
        self.element_from_vector(SparseVector::from_entries(entries))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element_from_vector(self.bilinear(&a.coeffs, &b.coeffs, |i, j| self.product[i][j])))
    }

    pub fn act_left(&self, a: &AlgebraElement, f: &DualElement) -> Result<DualElement> {
        self.check(a)?;
        self.check(f)?;
        Ok(self.dual_from_vector(self.bilinear(&a.coeffs, &f.coeffs, |i, p| self.strip_suffix[i][p])))
    }

    pub fn act_right(&self, f: &DualElement, a: &AlgebraElement) -> Result<DualElement> {
        self.check(a)?;
        self.check(f)?;
        Ok(self.dual_from_vector(self.bilinear(&f.coeffs, &a.coeffs, |p, i| self.strip_prefix[i][p])))
    }

    fn bilinear<F>(&self, x: &SparseVector, y: &SparseVector, table: F) -> SparseVector
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let mut entries = Vec::new();
        for (i, c) in x.iter() {
            for (j, d) in y.iter() {
                if let Some(k) = table(i, j) {
                    entries.push((k, c * d));
                }
            }
        }
        SparseVector::from_entries(entries)
    }

    /// Basis paths spanning `J^k`: lengths `k..n`.
    pub fn radical_power_basis(&self, k: usize) -> Vec<Path> {
        self.basis.iter().filter(|p| p.len() >= k).cloned().collect()
    }

    pub fn radical_power_indices(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].len() >= k).collect()
    }

    pub fn subspace_dim<T: Coefficients>(&self, vectors: &[T]) -> Result<usize> {
        for v in vectors {
            self.check(v)?;
        }
        Ok(span_dim(self.field, vectors.iter().map(Coefficients::coeffs)))
    }

    /// Basis paths of `e_i A e_j`: paths from `i` to `j`.
    pub fn corner_indices(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].source() == i && self.basis[k].target() == j).collect()
    }

    /// Dual basis indices spanning `e_i D(A) e_j`: duals of paths from `j` to `i`.
    pub fn dual_corner_indices(&self, i: usize, j: usize) -> Vec<usize> {
        self.corner_indices(j, i)
    }

    pub fn element_json(&self, coeffs: &SparseVector) -> Vec<TermJson> {
        coeffs
            .iter()
            .map(|(i, c)| TermJson { path: self.quiver.path_json(&self.basis[i]), coefficient: c.clone() })
            .collect()
    }

    /// Human-readable form such as `2 x1x2 + e3`, with a trailing `*` for duals.
    pub fn format(&self, coeffs: &SparseVector, dual: bool) -> String {
        if coeffs.is_zero() {
            return "0".into();
        }
        let star = if dual { "*" } else { "" };
        coeffs
            .iter()
            .map(|(i, c)| {
                let label = self.basis[i].label();
                if c.is_one() {
                    format!("{label}{star}")
                } else {
                    format!("{c}·{label}{star}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
