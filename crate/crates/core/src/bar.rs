//! Brute-force Hochschild (co)homology from the unnormalized bar complex,
//! used as an independent check of the slice computation.
//!
//! Cochains `Hom(A^{⊗m}, D(A))` are indexed by a tuple of basis paths
//! followed by a dual basis index, flattened in base `dim A`; chains
//! `A^{⊗(m+1)}` by tuples of basis paths flattened the same way.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::cocycle::coboundary_matrix;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{rank, Matrix};
use crate::skoldberg::hh2_dimension;

/// Largest algebra the oracle accepts; its matrices have `(dim A)^4` rows.
pub const ORACLE_DIM_LIMIT: usize = 12;

fn pairs_by_product(a: &TruncatedAlgebra) -> Vec<Vec<(usize, usize)>> {
    let d = a.dim();
    let mut out = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            if let Some(k) = a.product_index(i, j) {
                out[k].push((i, j));
            }
        }
    }
    out
}

/// Matrix of `δ̄_m : Hom(A^{⊗(m-1)}, D) → Hom(A^{⊗m}, D)` for `m ∈ {2, 3}`.
pub fn bar_coboundary_matrix(a: &TruncatedAlgebra, m: usize) -> Result<Matrix> {
    match m {
        2 => Ok(coboundary_matrix(a)),
        3 => Ok(delta_bar_3(a)),
        _ => Err(Error::Invalid(format!("bar coboundary degree must be 2 or 3, got {m}"))),
    }
}

fn delta_bar_3(a: &TruncatedAlgebra) -> Matrix {
    let d = a.dim();
    let f = a.field();
    let by_product = pairs_by_product(a);
    let one = f.one();
    let minus = -&one;
    let row = |a1: usize, a2: usize, a3: usize, x: usize| ((a1 * d + a2) * d + a3) * d + x;
    // column (i, j, p): α(b_i, b_j) has coefficient 1 on p*
    let triplets: Vec<(usize, usize, Scalar)> = (0..d)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut t = Vec::new();
            for j in 0..d {
                for p in 0..d {
                    let col = (i * d + j) * d + p;
                    for a1 in 0..d {
                        if let Some(x) = a.left_action_index(a1, p) {
                            t.push((row(a1, i, j, x), col, one.clone()));
                        }
                    }
                    for &(a1, a2) in &by_product[i] {
                        t.push((row(a1, a2, j, p), col, minus.clone()));
                    }
                    for &(a2, a3) in &by_product[j] {
                        t.push((row(i, a2, a3, p), col, one.clone()));
                    }
                    for a3 in 0..d {
                        if let Some(y) = a.right_action_index(p, a3) {
                            t.push((row(i, j, a3, y), col, minus.clone()));
                        }
                    }
                }
            }
            t
        })
        .collect();
    Matrix::from_triplets(f, d * d * d * d, d * d * d, triplets)
}

/// Matrix of `δ̃_m : A^{⊗(m+1)} → A^{⊗m}` for `m ∈ {2, 3}`:
/// `Σ_{i<m} (−1)^i (… ⊗ a_i a_{i+1} ⊗ …) + (−1)^m a_m a_0 ⊗ a_1 ⊗ ⋯ ⊗ a_{m−1}`.
pub fn bar_boundary_matrix(a: &TruncatedAlgebra, m: usize) -> Result<Matrix> {
    if !(2..=3).contains(&m) {
        return Err(Error::Invalid(format!("bar boundary degree must be 2 or 3, got {m}")));
    }
    let d = a.dim();
    let f = a.field();
    let flat = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * d + x);
    let sources = d.pow(m as u32 + 1);
    let sign = |k: usize| if k % 2 == 0 { f.one() } else { -f.one() };
    let triplets: Vec<(usize, usize, Scalar)> = (0..sources)
        .into_par_iter()
        .flat_map_iter(|col| {
            let mut tuple = vec![0; m + 1];
            let mut c = col;
            for k in (0..=m).rev() {
                tuple[k] = c % d;
                c /= d;
            }
            let mut t = Vec::new();
            for i in 0..m {
                if let Some(p) = a.product_index(tuple[i], tuple[i + 1]) {
                    let mut out: Vec<usize> = tuple[..i].to_vec();
                    out.push(p);
                    out.extend_from_slice(&tuple[i + 2..]);
                    t.push((flat(&out), col, sign(i)));
                }
            }
            if let Some(p) = a.product_index(tuple[m], tuple[0]) {
                let mut out = vec![p];
                out.extend_from_slice(&tuple[1..m]);
                t.push((flat(&out), col, sign(m)));
            }
            t
        })
        .collect();
    Ok(Matrix::from_triplets(f, d.pow(m as u32), sources, triplets))
}

fn guard(a: &TruncatedAlgebra) -> Result<()> {
    if a.dim() > ORACLE_DIM_LIMIT {
        return Err(Error::OracleTooLarge { dim: a.dim(), limit: ORACLE_DIM_LIMIT });
    }
    Ok(())
}

/// `dim H²(A, D(A)) = dim Ker δ̄₃ − rank δ̄₂`.
pub fn bar_h2_dim(a: &TruncatedAlgebra) -> Result<usize> {
    guard(a)?;
    let d3 = bar_coboundary_matrix(a, 3)?;
    let d2 = bar_coboundary_matrix(a, 2)?;
    Ok(d3.ncols() - rank(&d3) - rank(&d2))
}

/// `dim HH₂(A) = dim Ker δ̃₂ − rank δ̃₃`.
pub fn bar_hh2_dim(a: &TruncatedAlgebra) -> Result<usize> {
    guard(a)?;
    let d2 = bar_boundary_matrix(a, 2)?;
    let d3 = bar_boundary_matrix(a, 3)?;
    Ok(d2.ncols() - rank(&d2) - rank(&d3))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub schema: u32,
    pub s: usize,
    pub n: usize,
    pub char: u64,
    pub h2_bar: usize,
    pub hh2_bar: usize,
    pub hh2_skoldberg_sum: usize,
    pub agree: bool,
}

pub fn oracle_report(a: &TruncatedAlgebra) -> Result<OracleReport> {
    guard(a)?;
    let (h2_bar, hh2_bar) = rayon::join(|| bar_h2_dim(a), || bar_hh2_dim(a));
    let (h2_bar, hh2_bar) = (h2_bar?, hh2_bar?);
    let n = a.truncation();
    let hh2_skoldberg_sum = (1..=2 * n).map(|q| hh2_dimension(a, q)).sum::<Result<usize>>()?;
    Ok(OracleReport {
        schema: 1,
        s: a.quiver().vertex_count(),
        n,
        char: a.field().characteristic(),
        h2_bar,
        hh2_bar,
        hh2_skoldberg_sum,
        agree: h2_bar == hh2_bar && hh2_bar == hh2_skoldberg_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn alg(s: usize, n: usize, c: u64) -> TruncatedAlgebra {
        TruncatedAlgebra::cyclic(s, n, FieldSpec::new(c).unwrap()).unwrap()
    }

    #[test]
    fn complexes_square_to_zero() {
        let a = alg(3, 2, 0);
        let d2 = bar_coboundary_matrix(&a, 2).unwrap();
        let d3 = bar_coboundary_matrix(&a, 3).unwrap();
        assert_eq!((d3.nrows(), d3.ncols()), (1296, 216));
        assert!(d3.mul(&d2).is_zero());
        let b2 = bar_boundary_matrix(&a, 2).unwrap();
        let b3 = bar_boundary_matrix(&a, 3).unwrap();
        assert!(b2.mul(&b3).is_zero());
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(bar_h2_dim(&alg(1, 2, 0)).unwrap(), 1);
        assert_eq!(bar_h2_dim(&alg(1, 2, 2)).unwrap(), 2);
        assert_eq!(bar_hh2_dim(&alg(1, 2, 2)).unwrap(), 2);
        assert_eq!(bar_h2_dim(&alg(3, 2, 0)).unwrap(), 1);
        assert_eq!(bar_hh2_dim(&alg(3, 2, 0)).unwrap(), 1);
    }

    #[test]
    fn oversized_algebra_refused() {
        let a = alg(4, 4, 0);
        assert_eq!(oracle_report(&a), Err(Error::OracleTooLarge { dim: 16, limit: 12 }));
    }

    #[test]
    fn report_agrees() {
        let r = oracle_report(&alg(3, 2, 0)).unwrap();
        assert!(r.agree);
        assert_eq!(r.h2_bar, 1);
    }
}
