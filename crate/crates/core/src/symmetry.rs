//! Searching for a nondegenerate associative symmetric bilinear form on a
//! finite-dimensional algebra.
//!
//! A form is stored as its Gram matrix `G[i][j] = B(b_i, b_j)`, flattened
//! to the vector index `i * dim + j` inside the form space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::extension::AlgebraTable;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{kernel_basis, rank, Matrix, SparseVector};

/// Largest `|form space|` enumerated exhaustively over a finite field.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Basis of all bilinear forms with `B(x,y) = B(y,x)` and `B(xy,z) = B(x,yz)`.
#[derive(Clone, Debug)]
pub struct FormSpace {
    dim: usize,
    field: FieldSpec,
    basis: Vec<SparseVector>,
}

impl FormSpace {
    /// Dimension of the algebra the forms live on.
    pub fn algebra_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVector] {
        &self.basis
    }

    pub fn gram(&self, form: &SparseVector) -> Matrix {
        let d = self.dim;
        Matrix::from_triplets(self.field, d, d, form.iter().map(|(k, c)| (k / d, k % d, c.clone())))
    }

    pub fn combine(&self, coefficients: &[Scalar]) -> SparseVector {
        let mut acc = SparseVector::new();
        for (b, c) in self.basis.iter().zip(coefficients) {
            if !c.is_zero() {
                acc = acc.add_scaled(b, c);
            }
        }
        acc
    }

    fn is_nondegenerate(&self, form: &SparseVector) -> bool {
        rank(&self.gram(form)) == self.dim
    }

    /// Vectors `x` with `B(x, -) = 0` for every form in the space.
    pub fn common_radical(&self) -> Vec<SparseVector> {
        let rows: Vec<SparseVector> = self.basis.iter().flat_map(|b| self.gram(b).rows().to_vec()).collect();
        kernel_basis(&Matrix::from_rows(self.field, self.dim, rows))
    }
}

pub fn form_space(t: &AlgebraTable) -> FormSpace {
    let d = t.dim();
    let f = t.field();
    let var = |i: usize, j: usize| i * d + j;
    let mut rows = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            rows.push(SparseVector::from_entries([(var(i, j), f.one()), (var(j, i), -f.one())]));
        }
    }
    for i in 0..d {
        for j in 0..d {
            let ij = t.basis_product(i, j);
            for l in 0..d {
                let jl = t.basis_product(j, l);
                let mut entries: Vec<(usize, Scalar)> = ij.iter().map(|(k, c)| (var(k, l), c.clone())).collect();
                entries.extend(jl.iter().map(|(k, c)| (var(i, k), -c)));
                let row = SparseVector::from_entries(entries);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    let basis = kernel_basis(&Matrix::from_rows(f, d * d, rows));
    FormSpace { dim: d, field: f, basis }
}

/// Exhaustive check that a Gram matrix is symmetric, associative and of full rank.
pub fn verify_form(t: &AlgebraTable, gram: &Matrix) -> bool {
    let d = t.dim();
    if gram.nrows() != d || gram.ncols() != d || rank(gram) != d {
        return false;
    }
    let f = t.field();
    let pair = |x: &SparseVector, y: &SparseVector| -> Scalar {
        let mut acc = f.zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                acc += &(&(a * b) * &gram.get(i, j));
            }
        }
        acc
    };
    for i in 0..d {
        for j in 0..d {
            if gram.get(i, j) != gram.get(j, i) {
                return false;
            }
            for l in 0..d {
                let lhs = pair(t.basis_product(i, j), &SparseVector::unit(l, f));
                let rhs = pair(&SparseVector::unit(i, f), t.basis_product(j, l));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryKind {
    #[serde(rename = "SYMMETRIC")]
    Symmetric,
    #[serde(rename = "NOT_SYMMETRIC")]
    NotSymmetric,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymmetryKind::Symmetric => "SYMMETRIC",
            SymmetryKind::NotSymmetric => "NOT_SYMMETRIC",
            SymmetryKind::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    BasisMember,
    RandomSample,
    Exhaustive,
    ZeroFormSpace,
    CommonRadical,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryVerdict {
    pub verdict: SymmetryKind,
    pub certificate: Certificate,
    pub seed: u64,
    pub samples: usize,
    pub samples_used: usize,
    pub form_space_dim: usize,
    /// Largest absolute integer coefficient drawn when sampling over ℚ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Scalar>>>,
}

impl SymmetryVerdict {
    pub fn witness(&self, field: FieldSpec) -> Option<Matrix> {
        let g = self.gram.as_ref()?;
        let rows = g.iter().map(|r| SparseVector::from_dense(r)).collect();
        Some(Matrix::from_rows(field, g.len(), rows))
    }
}

/// Samples over ℚ are drawn from `[-R, R]` with `R = dim T + 1 + t` on
/// trial `t`, so every range is larger than the degree of the determinant.
pub fn symmetry_verdict(t: &AlgebraTable, seed: u64, samples: usize) -> SymmetryVerdict {
    let space = form_space(t);
    let field = t.field();
    let mut out = SymmetryVerdict {
        verdict: SymmetryKind::Inconclusive,
        certificate: Certificate::None,
        seed,
        samples,
        samples_used: 0,
        form_space_dim: space.dim(),
        coefficient_bound: None,
        gram: None,
    };
    let found = |out: &mut SymmetryVerdict, form: &SparseVector, how: Certificate| {
        out.verdict = SymmetryKind::Symmetric;
        out.certificate = how;
        out.gram = Some(space.gram(form).to_dense());
    };
    if space.dim() == 0 {
        out.verdict = SymmetryKind::NotSymmetric;
        out.certificate = Certificate::ZeroFormSpace;
        return out;
    }
    if !space.common_radical().is_empty() {
        out.verdict = SymmetryKind::NotSymmetric;
        out.certificate = Certificate::CommonRadical;
        return out;
    }
    if let Some(b) = space.basis().iter().find(|b| space.is_nondegenerate(b)) {
        found(&mut out, b, Certificate::BasisMember);
        return out;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = space.dim();
    let base = t.dim() as i64 + 1;
    let draws: Vec<Vec<Scalar>> = (0..samples)
        .map(|trial| {
            (0..k)
                .map(|_| match field.order() {
                    Some(p) => field.element(rng.random_range(0..p)),
                    None => {
                        let r = base + trial as i64;
                        field.from_i64(rng.random_range(-r..=r))
                    }
                })
                .collect()
        })
        .collect();
    if !field.is_finite() && samples > 0 {
        out.coefficient_bound = Some((base + samples as i64 - 1) as u64);
    }
    let hit = draws.par_iter().position_first(|c| space.is_nondegenerate(&space.combine(c)));
    if let Some(i) = hit {
        out.samples_used = i + 1;
        found(&mut out, &space.combine(&draws[i]), Certificate::RandomSample);
        return out;
    }
    out.samples_used = samples;

    if let Some(p) = field.order() {
        if let Some(total) = p.checked_pow(k as u32).filter(|&n| n <= EXHAUSTIVE_LIMIT) {
            let coeffs = |mut idx: u64| -> Vec<Scalar> {
                (0..k)
                    .map(|_| {
                        let c = field.element(idx % p);
                        idx /= p;
                        c
                    })
                    .collect()
            };
            let hit = (1..total).into_par_iter().find_first(|&i| space.is_nondegenerate(&space.combine(&coeffs(i))));
            match hit {
                Some(i) => found(&mut out, &space.combine(&coeffs(i)), Certificate::Exhaustive),
                None => {
                    out.verdict = SymmetryKind::NotSymmetric;
                    out.certificate = Certificate::Exhaustive;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncatedAlgebra;
    use crate::cocycle::Cocycle;
    use crate::extension::build_extension;

    fn trivial_ext(s: usize, n: usize, c: u64) -> AlgebraTable {
        let a = TruncatedAlgebra::cyclic(s, n, FieldSpec::new(c).unwrap()).unwrap();
        let t = build_extension(&a, &Cocycle::zero(&a)).unwrap();
        t.table().clone()
    }

    #[test]
    fn ground_field_is_symmetric() {
        let f = FieldSpec::rationals();
        let t = AlgebraTable::new(f, vec![vec![SparseVector::unit(0, f)]], SparseVector::unit(0, f));
        let space = form_space(&t);
        assert_eq!(space.dim(), 1);
        let v = symmetry_verdict(&t, 0, 4);
        assert_eq!(v.verdict, SymmetryKind::Symmetric);
        assert_eq!(v.gram.unwrap()[0][0], f.one());
    }

    #[test]
    fn trivial_extensions_are_symmetric() {
        for (s, n, c) in [(3, 3, 0), (3, 2, 2), (1, 2, 0), (2, 3, 3)] {
            let t = trivial_ext(s, n, c);
            assert!(form_space(&t).dim() >= 1);
            let v = symmetry_verdict(&t, 7, 16);
            assert_eq!(v.verdict, SymmetryKind::Symmetric, "{s} {n} {c}");
            assert!(verify_form(&t, &v.witness(t.field()).unwrap()));
        }
    }

    #[test]
    fn base_algebra_is_not_symmetric() {
        let a = TruncatedAlgebra::cyclic(3, 2, FieldSpec::rationals()).unwrap();
        let t = AlgebraTable::from_truncated(&a);
        let space = form_space(&t);
        // λ(e_i) is free, λ vanishes on arrows, so every form kills the arrows
        assert_eq!(space.dim(), 3);
        assert_eq!(space.common_radical().len(), 3);
        let v = symmetry_verdict(&t, 1, 8);
        assert_eq!(v.verdict, SymmetryKind::NotSymmetric);
        assert_eq!(v.certificate, Certificate::CommonRadical);
    }

    #[test]
    fn upper_triangular_matrices_rejected() {
        let f = FieldSpec::prime(2).unwrap();
        let u = |i| SparseVector::unit(i, f);
        let z = SparseVector::new();
        // basis e1, e2, a with e1 a = a = a e2
        let table = vec![
            vec![u(0), z.clone(), u(2)],
            vec![z.clone(), u(1), z.clone()],
            vec![z.clone(), u(2), z.clone()],
        ];
        let t = AlgebraTable::new(f, table, SparseVector::from_entries([(0, f.one()), (1, f.one())]));
        assert!(t.is_associative() && t.unit_is_two_sided());
        assert_eq!(symmetry_verdict(&t, 3, 4).verdict, SymmetryKind::NotSymmetric);
    }

    #[test]
    fn finite_field_search_without_sampling_is_decisive() {
        let t = trivial_ext(3, 2, 3);
        let v = symmetry_verdict(&t, 0, 0);
        assert_eq!(v.verdict, SymmetryKind::Symmetric);
        assert!(verify_form(&t, &v.witness(t.field()).unwrap()));
    }

    #[test]
    fn reproducible_under_seed() {
        let t = trivial_ext(3, 2, 0);
        let a = serde_json::to_string(&symmetry_verdict(&t, 11, 8)).unwrap();
        let b = serde_json::to_string(&symmetry_verdict(&t, 11, 8)).unwrap();
        assert_eq!(a, b);
    }
}
