//! Hochschild 2-cocycles `A × A → D(A)`: construction from dual homology
//! classes, the cocycle relation, coboundary tests and the radical
//! conditions that control the Gabriel quiver of the extension.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{DualElement, TermJson, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{rank, solve, Matrix, SparseVector, Subspace};
use crate::quiver::PathJson;
use crate::skoldberg::{slice_basis, DualSliceVector};
use crate::Coefficients;

/// Bilinear map stored by its values on pairs of basis paths; missing pairs
/// are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    tag: u64,
    dim: usize,
    values: BTreeMap<(usize, usize), SparseVector>,
}

/// A linear map `A → D(A)`, given by the image of each basis path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub images: Vec<SparseVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleEntryJson {
    pub a: PathJson,
    pub b: PathJson,
    pub value: Vec<TermJson>,
}

impl Cocycle {
    pub fn zero(a: &TruncatedAlgebra) -> Self {
        Self { tag: a.tag(), dim: a.dim(), values: BTreeMap::new() }
    }

    /// Adds `value` to the stored value at `(i, j)`.
    pub fn add_value(&mut self, i: usize, j: usize, value: &SparseVector) {
        let slot = self.values.entry((i, j)).or_default();
        *slot = slot.add(value);
        if slot.is_zero() {
            self.values.remove(&(i, j));
        }
    }

    pub fn value(&self, i: usize, j: usize) -> Option<&SparseVector> {
        self.values.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVector)> + '_ {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    fn same(&self, other: &Cocycle) -> Result<()> {
        if self.tag == other.tag {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        self.same(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.values {
            out.add_value(i, j, v);
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> Cocycle {
        let values = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.values.iter().map(|(k, v)| (*k, v.scaled(c))).collect()
        };
        Cocycle { tag: self.tag, dim: self.dim, values }
    }

    pub fn sub(&self, other: &Cocycle) -> Result<Cocycle> {
        let minus = other.values.values().next().map(|v| -v.entries()[0].1.field().one());
        match minus {
            None => Ok(self.clone()),
            Some(m) => self.add(&other.scaled(&m)),
        }
    }

    /// `α(a, b)` extended bilinearly.
    pub fn evaluate(&self, alg: &TruncatedAlgebra, a: &crate::AlgebraElement, b: &crate::AlgebraElement) -> Result<DualElement> {
        if a.tag() != self.tag || b.tag() != self.tag || alg.tag() != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        let mut acc = SparseVector::new();
        for (i, x) in a.coeffs().iter() {
            for (j, y) in b.coeffs().iter() {
                if let Some(v) = self.value(i, j) {
                    acc = acc.add_scaled(v, &(x * y));
                }
            }
        }
        Ok(alg.dual_from_vector(acc))
    }

    /// Flattened coordinates: `(a, b, x*) ↦ (a·d + b)·d + x`.
    pub fn to_vector(&self) -> SparseVector {
        let d = self.dim;
        SparseVector::from_entries(
            self.values
                .iter()
                .flat_map(|(&(i, j), v)| v.iter().map(move |(x, c)| ((i * d + j) * d + x, c.clone())))
                .collect::<Vec<_>>(),
        )
    }

    pub fn to_json(&self, alg: &TruncatedAlgebra) -> Vec<CocycleEntryJson> {
        let q = alg.quiver();
        self.values
            .iter()
            .map(|(&(i, j), v)| CocycleEntryJson {
                a: q.path_json(alg.basis_path(i)),
                b: q.path_json(alg.basis_path(j)),
                value: alg.element_json(v),
            })
            .collect()
    }

    /// Lines such as `α(x1x2, x3x1) = x2x3*`.
    pub fn to_text(&self, alg: &TruncatedAlgebra) -> Vec<String> {
        self.values
            .iter()
            .map(|(&(i, j), v)| {
                format!("α({}, {}) = {}", alg.basis_path(i).label(), alg.basis_path(j).label(), alg.format(v, true))
            })
            .collect()
    }
}

/// The cocycle attached to a dual homology class in degree `q`: for the
/// dual of the slice element with word `a_1 ⋯ a_q` (right factor first),
/// `α(a_1 ⋯ a_{m₁}, a_{m₁+1} ⋯ a_m) = (a_{m+1} ⋯ a_q)*` whenever
/// `n ≤ m ≤ q` and both arguments are nontrivial basis paths.
pub fn theta(alg: &TruncatedAlgebra, u: &DualSliceVector) -> Result<Cocycle> {
    let n = alg.truncation();
    let q = u.degree;
    if q < n || q > 2 * n - 1 {
        return Err(Error::InvalidDegree { q, lo: n, hi: 2 * n - 1 });
    }
    let slice = slice_basis(alg, 2, q)?;
    let mut out = Cocycle::zero(alg);
    for (k, c) in u.coeffs.iter() {
        if k >= slice.dim() {
            return Err(Error::SliceIndex { index: k, size: slice.dim() });
        }
        let word = slice.basis()[k].rotate_to(slice.split());
        for m1 in 1..n {
            for m2 in 1..n {
                let m = m1 + m2;
                if m < n || m > q {
                    continue;
                }
                let b1 = alg.index_of(&word.subpath(0, m1)).expect("short paths are basis paths");
                let b2 = alg.index_of(&word.subpath(m1, m)).expect("short paths are basis paths");
                let rest = alg.index_of(&word.subpath(m, q)).expect("short paths are basis paths");
                out.add_value(b1, b2, &SparseVector::from_entries([(rest, c.clone())]));
            }
        }
    }
    Ok(out)
}

/// Sum of `theta` over vectors that may live in different degrees.
pub fn theta_sum(alg: &TruncatedAlgebra, parts: &[DualSliceVector]) -> Result<Cocycle> {
    parts.iter().try_fold(Cocycle::zero(alg), |acc, u| acc.add(&theta(alg, u)?))
}

fn left(alg: &TruncatedAlgebra, a: usize, f: &SparseVector) -> SparseVector {
    SparseVector::from_entries(
        f.iter().filter_map(|(p, c)| alg.left_action_index(a, p).map(|x| (x, c.clone()))).collect::<Vec<_>>(),
    )
}

fn right(alg: &TruncatedAlgebra, f: &SparseVector, b: usize) -> SparseVector {
    SparseVector::from_entries(
        f.iter().filter_map(|(p, c)| alg.right_action_index(p, b).map(|y| (y, c.clone()))).collect::<Vec<_>>(),
    )
}

/// `a₁α(a₂,a₃) − α(a₁a₂,a₃) + α(a₁,a₂a₃) − α(a₁,a₂)a₃ = 0` on all basis triples.
pub fn cocycle_check(alg: &TruncatedAlgebra, alpha: &Cocycle) -> bool {
    if alpha.tag != alg.tag() {
        return false;
    }
    let d = alg.dim();
    let one = alg.field().one();
    let minus = -&one;
    let empty = SparseVector::new();
    let val = |i: usize, j: usize| alpha.value(i, j).unwrap_or(&empty);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut acc = left(alg, i, val(j, k));
                if let Some(ij) = alg.product_index(i, j) {
                    acc = acc.add_scaled(val(ij, k), &minus);
                }
                if let Some(jk) = alg.product_index(j, k) {
                    acc = acc.add_scaled(val(i, jk), &one);
                }
                acc = acc.add_scaled(&right(alg, val(i, j), k), &minus);
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Matrix of `f ↦ δ̄₂f`, `(δ̄₂f)(a,b) = a·f(b) − f(ab) + f(a)·b`. Columns are
/// indexed `c·d + p` for the coefficient of `p*` in `f(c)`; rows use the
/// flattening of [`Cocycle::to_vector`].
pub fn coboundary_matrix(alg: &TruncatedAlgebra) -> Matrix {
    let d = alg.dim();
    let f = alg.field();
    let mut t = Vec::new();
    for c in 0..d {
        for p in 0..d {
            let col = c * d + p;
            for a in 0..d {
                if let Some(x) = alg.left_action_index(a, p) {
                    t.push(((a * d + c) * d + x, col, f.one()));
                }
                if let Some(y) = alg.right_action_index(p, a) {
                    t.push(((c * d + a) * d + y, col, f.one()));
                }
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            if let Some(c) = alg.product_index(a, b) {
                for p in 0..d {
                    t.push(((a * d + b) * d + p, c * d + p, -f.one()));
                }
            }
        }
    }
    Matrix::from_triplets(f, d * d * d, d * d, t)
}

/// Some `f` with `δ̄₂f = α`, or `None` when the class of `α` is nonzero.
pub fn is_coboundary(alg: &TruncatedAlgebra, alpha: &Cocycle) -> Result<Option<LinearMap>> {
    if !cocycle_check(alg, alpha) {
        return Err(Error::NotACocycle);
    }
    let m = coboundary_matrix(alg);
    let d = alg.dim();
    Ok(solve(&m, &alpha.to_vector()).map(|x| {
        let mut images = vec![Vec::new(); d];
        for (k, c) in x.iter() {
            images[k / d].push((k % d, c.clone()));
        }
        LinearMap { images: images.into_iter().map(SparseVector::from_entries).collect() }
    }))
}

/// Number of linearly independent classes among the given cocycles modulo
/// coboundaries.
pub fn class_rank(alg: &TruncatedAlgebra, cocycles: &[Cocycle]) -> usize {
    let m = coboundary_matrix(alg);
    let base = rank(&m);
    let mut columns: Vec<SparseVector> = Vec::new();
    let t = m.transpose();
    columns.extend(t.rows().iter().cloned());
    columns.extend(cocycles.iter().map(Cocycle::to_vector));
    let stacked = Matrix::from_rows(alg.field(), m.nrows(), columns);
    rank(&stacked) - base
}

/// Whether `α` vanishes as soon as one argument is a trivial path.
pub fn vanishes_on_idempotents(alg: &TruncatedAlgebra, alpha: &Cocycle) -> bool {
    alpha.values.keys().all(|&(i, j)| !alg.basis_path(i).is_trivial() && !alg.basis_path(j).is_trivial())
}

/// Basis of the subbimodule `J·D + D·J` of `D(A)`.
pub fn radical_dual_subspace(alg: &TruncatedAlgebra) -> Subspace {
    let mut s = Subspace::new(alg.field());
    let d = alg.dim();
    for a in alg.radical_power_indices(1) {
        for p in 0..d {
            if let Some(x) = alg.left_action_index(a, p) {
                s.insert(&SparseVector::unit(x, alg.field()));
            }
            if let Some(y) = alg.right_action_index(p, a) {
                s.insert(&SparseVector::unit(y, alg.field()));
            }
        }
    }
    s
}

/// `α(J, J) ⊆ J·D + D·J`.
pub fn radical_image_contained(alg: &TruncatedAlgebra, alpha: &Cocycle) -> bool {
    let s = radical_dual_subspace(alg);
    alpha.values.iter().all(|(&(i, j), v)| {
        alg.basis_path(i).is_trivial() || alg.basis_path(j).is_trivial() || s.contains(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::skoldberg::dual_hh2_basis;

    fn alg(s: usize, n: usize, c: u64) -> TruncatedAlgebra {
        TruncatedAlgebra::cyclic(s, n, FieldSpec::new(c).unwrap()).unwrap()
    }

    fn idx(a: &TruncatedAlgebra, arrows: &[usize]) -> usize {
        if arrows.is_empty() {
            panic!("use vertex_index for trivial paths");
        }
        a.index_of(&a.quiver().path(arrows).unwrap()).unwrap()
    }

    #[test]
    fn case1_cocycle_table() {
        let a = alg(3, 4, 0);
        let u = &dual_hh2_basis(&a, 6).unwrap()[0];
        let alpha = theta(&a, u).unwrap();
        for i in 0..3 {
            let (i1, i2, i3, i4, i5) = ((i + 1) % 3, (i + 2) % 3, i, (i + 1) % 3, (i + 2) % 3);
            let v = alpha.value(idx(&a, &[i, i1]), idx(&a, &[i2, i3])).unwrap();
            assert_eq!(v, &SparseVector::unit(idx(&a, &[i4, i5]), a.field()));
        }
        assert!(cocycle_check(&a, &alpha));
        assert!(vanishes_on_idempotents(&a, &alpha));
        assert!(radical_image_contained(&a, &alpha));
    }

    #[test]
    fn case2_boundary_output_is_vertex_dual() {
        let a = alg(3, 3, 0);
        let basis = dual_hh2_basis(&a, 3).unwrap();
        let beta1 = theta(&a, &basis[0]).unwrap();
        let v = beta1.value(idx(&a, &[0]), idx(&a, &[1, 2])).unwrap();
        assert_eq!(v, &SparseVector::unit(a.vertex_index(0), a.field()));
        assert!(cocycle_check(&a, &beta1));
        let beta2 = theta(&a, &basis[1]).unwrap();
        let diff = beta1.sub(&beta2).unwrap();
        assert_eq!(is_coboundary(&a, &diff).unwrap(), None);
    }

    #[test]
    fn case3_gamma() {
        let a = alg(3, 2, 0);
        let u = &dual_hh2_basis(&a, 3).unwrap()[0];
        let gamma = theta(&a, u).unwrap();
        let v = gamma.value(idx(&a, &[0]), idx(&a, &[1])).unwrap();
        assert_eq!(v, &SparseVector::unit(idx(&a, &[2]), a.field()));
        assert!(cocycle_check(&a, &gamma));
        assert!(!radical_image_contained(&a, &gamma));
        assert_eq!(is_coboundary(&a, &gamma).unwrap(), None);
    }

    #[test]
    fn zero_cocycle() {
        let a = alg(2, 2, 0);
        let z = Cocycle::zero(&a);
        assert!(cocycle_check(&a, &z));
        assert!(vanishes_on_idempotents(&a, &z));
        assert!(radical_image_contained(&a, &z));
        let f = is_coboundary(&a, &z).unwrap().unwrap();
        assert!(f.images.iter().all(SparseVector::is_zero));
    }

    #[test]
    fn hand_built_maps_on_the_loop() {
        let a = alg(1, 3, 0);
        let x = idx(&a, &[0]);
        let xx = idx(&a, &[0, 0]);
        let e = SparseVector::unit(a.vertex_index(0), a.field());
        // (x, x) ↦ e* is the coboundary of x ↦ x*/2
        let mut good = Cocycle::zero(&a);
        good.add_value(x, x, &e);
        assert!(cocycle_check(&a, &good));
        assert!(is_coboundary(&a, &good).unwrap().is_some());
        // (x, x²) ↦ e* fails at the triple (x, x, x)
        let mut bad = Cocycle::zero(&a);
        bad.add_value(x, xx, &e);
        assert!(!cocycle_check(&a, &bad));
        assert_eq!(is_coboundary(&a, &bad), Err(Error::NotACocycle));
    }

    #[test]
    fn idempotent_counterexample() {
        let a = alg(1, 2, 0);
        let mut bad = Cocycle::zero(&a);
        let e = a.vertex_index(0);
        bad.add_value(e, e, &SparseVector::unit(e, a.field()));
        assert!(!vanishes_on_idempotents(&a, &bad));
    }

    #[test]
    fn coboundary_solution_is_exact() {
        let a = alg(2, 3, 3);
        let d = a.dim();
        // δ̄₂ of f = (x1 ↦ x1*) is a cocycle with zero class
        let mut images = vec![SparseVector::new(); d];
        let x1 = idx(&a, &[0]);
        images[x1] = SparseVector::unit(x1, a.field());
        let flat = SparseVector::from_entries(images.iter().enumerate().flat_map(|(c, v)| {
            v.iter().map(move |(p, s)| (c * d + p, s.clone())).collect::<Vec<_>>()
        }));
        let m = coboundary_matrix(&a);
        let target = m.mul_vec(&flat);
        let mut alpha = Cocycle::zero(&a);
        for (k, c) in target.iter() {
            alpha.add_value(k / (d * d), (k / d) % d, &SparseVector::from_entries([(k % d, c.clone())]));
        }
        assert!(cocycle_check(&a, &alpha));
        let f = is_coboundary(&a, &alpha).unwrap().unwrap();
        let flat_f = SparseVector::from_entries(f.images.iter().enumerate().flat_map(|(c, v)| {
            v.iter().map(move |(p, s)| (c * d + p, s.clone())).collect::<Vec<_>>()
        }));
        assert_eq!(m.mul_vec(&flat_f), alpha.to_vector());
    }

    #[test]
    fn theta_rejects_bad_degree() {
        let a = alg(3, 2, 0);
        let u = DualSliceVector::basis(4, 0, a.field());
        assert!(matches!(theta(&a, &u), Err(Error::InvalidDegree { .. })));
    }
}
