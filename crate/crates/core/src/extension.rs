//! Hochschild extension algebras `T_α(A) = A ⊕ D(A)` with product
//! `(a,x)(b,y) = (ab, a·y + x·b + α(a,b))`, their radicals, and their
//! Gabriel quivers.
//!
//! Basis index `i < dim A` stands for `(b_i, 0)` and `dim A + p` for `(0, p*)`.

use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::cocycle::{
    cocycle_check, is_coboundary, radical_dual_subspace, radical_image_contained, theta, vanishes_on_idempotents,
    Cocycle, CocycleEntryJson,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{SparseVector, Subspace};
use crate::skoldberg::{dual_hh2_basis, DualSliceVector};
use crate::Coefficients;

/// A finite-dimensional algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    field: FieldSpec,
    table: Vec<Vec<SparseVector>>,
    unit: SparseVector,
}

impl AlgebraTable {
    pub fn new(field: FieldSpec, table: Vec<Vec<SparseVector>>, unit: SparseVector) -> Self {
        Self { field, table, unit }
    }

    /// Structure constants of a truncated algebra in its path basis.
    pub fn from_truncated(a: &TruncatedAlgebra) -> Self {
        let d = a.dim();
        let field = a.field();
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| a.product_index(i, j).map_or_else(SparseVector::new, |k| SparseVector::unit(k, field)))
                    .collect()
            })
            .collect();
        let unit = a.one().coeffs().clone();
        Self { field, table, unit }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> &SparseVector {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVector {
        &self.table[i][j]
    }

    pub fn multiply(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut acc = SparseVector::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let p = &self.table[i][j];
                if !p.is_zero() {
                    acc = acc.add_scaled(p, &(a * b));
                }
            }
        }
        acc
    }

    /// `(b_i b_j) b_k = b_i (b_j b_k)` for every basis triple.
    pub fn is_associative(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i][j];
                for k in 0..d {
                    let lhs = self.multiply(ij, &SparseVector::unit(k, self.field));
                    let rhs = self.multiply(&SparseVector::unit(i, self.field), &self.table[j][k]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn unit_is_two_sided(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = SparseVector::unit(i, self.field);
            self.multiply(&self.unit, &e) == e && self.multiply(&e, &self.unit) == e
        })
    }

    /// Span of `{x y : x ∈ xs, y ∈ ys}`.
    pub fn product_space(&self, xs: &[SparseVector], ys: &[SparseVector]) -> Subspace {
        let mut s = Subspace::new(self.field);
        for x in xs {
            for y in ys {
                s.insert(&self.multiply(x, y));
            }
        }
        s
    }

    /// `dim e·W·f` for a subspace `W` given by a spanning set.
    pub fn corner_dim(&self, e: &SparseVector, w: &[SparseVector], f: &SparseVector) -> usize {
        let mut s = Subspace::new(self.field);
        for x in w {
            s.insert(&self.multiply(&self.multiply(e, x), f));
        }
        s.dim()
    }
}

/// `T_α(A)` for a truncated algebra `A` and a 2-cocycle `α`.
#[derive(Clone, Debug)]
pub struct ExtensionAlgebra<'a> {
    base: &'a TruncatedAlgebra,
    alpha: Cocycle,
    table: AlgebraTable,
}

/// Arrow counts `N(i,j)` between the vertices of a Gabriel quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ArrowCountMatrix {
    counts: Vec<Vec<usize>>,
}

impl ArrowCountMatrix {
    pub fn new(counts: Vec<Vec<usize>>) -> Self {
        Self { counts }
    }

    pub fn size(&self) -> usize {
        self.counts.len()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.counts[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.counts
    }

    /// Entrywise `≤`.
    pub fn le(&self, other: &ArrowCountMatrix) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y))
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Lines `i → j: N` for nonzero entries, 1-based.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    out.push(format!("{} → {}: {}", i + 1, j + 1, c));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuiverVerdict {
    #[serde(rename = "BASE")]
    Base,
    #[serde(rename = "TRIVIAL_EXT")]
    TrivialExt,
    #[serde(rename = "OTHER")]
    Other,
}

impl std::fmt::Display for QuiverVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QuiverVerdict::Base => "BASE",
            QuiverVerdict::TrivialExt => "TRIVIAL_EXT",
            QuiverVerdict::Other => "OTHER",
        })
    }
}

/// Radical of `T` with its powers `J, J², …` down to zero.
#[derive(Clone, Debug)]
pub struct Radical {
    pub basis: Vec<SparseVector>,
    pub powers: Vec<Subspace>,
}

impl Radical {
    /// Least `k` with `J^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.powers.len() + 1
    }
}

pub fn build_extension<'a>(base: &'a TruncatedAlgebra, alpha: &Cocycle) -> Result<ExtensionAlgebra<'a>> {
    if alpha.tag() != base.tag() {
        return Err(Error::AlgebraMismatch);
    }
    if !cocycle_check(base, alpha) {
        return Err(Error::NotACocycle);
    }
    let d = base.dim();
    let field = base.field();
    let mut table = vec![vec![SparseVector::new(); 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            let mut entries: Vec<(usize, Scalar)> = Vec::new();
            if let Some(k) = base.product_index(i, j) {
                entries.push((k, field.one()));
            }
            if let Some(v) = alpha.value(i, j) {
                entries.extend(v.iter().map(|(x, c)| (d + x, c.clone())));
            }
            table[i][j] = SparseVector::from_entries(entries);
        }
        for p in 0..d {
            if let Some(x) = base.left_action_index(i, p) {
                table[i][d + p] = SparseVector::unit(d + x, field);
            }
            if let Some(y) = base.right_action_index(p, i) {
                table[d + p][i] = SparseVector::unit(d + y, field);
            }
        }
    }
    let one = base.one();
    let mut unit: Vec<(usize, Scalar)> = one.coeffs().iter().map(|(i, c)| (i, c.clone())).collect();
    let alpha11 = alpha.evaluate(base, &one, &one)?;
    unit.extend(alpha11.coeffs().iter().map(|(x, c)| (d + x, -c)));
    let table = AlgebraTable::new(field, table, SparseVector::from_entries(unit));
    if !table.is_associative() {
        return Err(Error::Consistency("extension product is not associative".into()));
    }
    if !table.unit_is_two_sided() {
        return Err(Error::Consistency("(1, -α(1,1)) is not a two-sided identity".into()));
    }
    Ok(ExtensionAlgebra { base, alpha: alpha.clone(), table })
}

impl<'a> ExtensionAlgebra<'a> {
    pub fn base(&self) -> &'a TruncatedAlgebra {
        self.base
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.alpha
    }

    pub fn table(&self) -> &AlgebraTable {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn multiply(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.table.multiply(x, y)
    }

    /// `(e_i, 0)` for every vertex, checked to be a complete set of
    /// orthogonal idempotents.
    pub fn lifted_idempotents(&self) -> Result<Vec<SparseVector>> {
        if !vanishes_on_idempotents(self.base, &self.alpha) {
            return Err(Error::IdempotentHypothesis);
        }
        let f = self.base.field();
        let es: Vec<SparseVector> = (0..self.base.quiver().vertex_count())
            .map(|v| SparseVector::unit(self.base.vertex_index(v), f))
            .collect();
        let mut sum = SparseVector::new();
        for (i, e) in es.iter().enumerate() {
            for (j, g) in es.iter().enumerate() {
                let p = self.multiply(e, g);
                let ok = if i == j { &p == e } else { p.is_zero() };
                if !ok {
                    return Err(Error::Consistency(format!("idempotents {} and {} are not orthogonal", i + 1, j + 1)));
                }
            }
            sum = sum.add(e);
        }
        if &sum != self.table.unit() {
            return Err(Error::Consistency("idempotents do not sum to the identity".into()));
        }
        Ok(es)
    }

    /// `J(A) ⊕ D(A)`, verified to be a nilpotent two-sided ideal with a
    /// basic semisimple quotient.
    pub fn radical(&self) -> Result<Radical> {
        let d = self.base.dim();
        let f = self.base.field();
        let in_radical = |k: usize| k >= d || !self.base.basis_path(k).is_trivial();
        let basis: Vec<SparseVector> = (0..2 * d).filter(|&k| in_radical(k)).map(|k| SparseVector::unit(k, f)).collect();
        for k in 0..2 * d {
            for r in &basis {
                let e = SparseVector::unit(k, f);
                for p in [self.multiply(&e, r), self.multiply(r, &e)] {
                    if p.iter().any(|(i, _)| !in_radical(i)) {
                        return Err(Error::Consistency("radical is not a two-sided ideal".into()));
                    }
                }
            }
        }
        let s = self.base.quiver().vertex_count();
        if self.dim() - basis.len() != s {
            return Err(Error::Consistency("quotient by the radical has the wrong dimension".into()));
        }
        // Quotient is spanned by the idempotent classes; distinct ones multiply to zero.
        for i in 0..s {
            for j in 0..s {
                let (a, b) = (self.base.vertex_index(i), self.base.vertex_index(j));
                let p = self.table.basis_product(a, b);
                let top: Vec<usize> = p.iter().map(|(k, _)| k).filter(|&k| !in_radical(k)).collect();
                let expected = if i == j { vec![a] } else { vec![] };
                if top != expected {
                    return Err(Error::Consistency("quotient by the radical is not basic semisimple".into()));
                }
            }
        }
        let mut powers = Vec::new();
        let mut current = Subspace::new(f);
        for r in &basis {
            current.insert(r);
        }
        let limit = 2 * self.dim() + 2;
        while current.dim() > 0 {
            if powers.len() > limit {
                return Err(Error::Consistency("radical is not nilpotent".into()));
            }
            let next = self.table.product_space(current.basis(), &basis);
            powers.push(current);
            current = next;
        }
        Ok(Radical { basis, powers })
    }

    /// Arrow counts computed twice: directly as `dim e_i J e_j / e_i J² e_j`
    /// inside `T`, and from the decomposition
    /// `N_A(i,j) + dim e_i D e_j − dim e_i (JD + DJ + α(J,J)) e_j`.
    pub fn gabriel_quiver(&self) -> Result<ArrowCountMatrix> {
        let es = self.lifted_idempotents()?;
        let rad = self.radical()?;
        let j1: Vec<SparseVector> = rad.powers[0].basis().to_vec();
        let j2: Vec<SparseVector> = rad.powers.get(1).map(|s| s.basis().to_vec()).unwrap_or_default();
        let s = es.len();
        let mut direct = vec![vec![0; s]; s];
        for i in 0..s {
            for j in 0..s {
                direct[i][j] = self.table.corner_dim(&es[i], &j1, &es[j]) - self.table.corner_dim(&es[i], &j2, &es[j]);
            }
        }
        let via_lemma = self.lemma_counts()?;
        if direct != via_lemma.counts {
            return Err(Error::Consistency(format!(
                "arrow counts disagree: direct {direct:?}, decomposition {:?}",
                via_lemma.counts
            )));
        }
        Ok(ArrowCountMatrix::new(direct))
    }

    fn lemma_counts(&self) -> Result<ArrowCountMatrix> {
        let a = self.base;
        let base_counts = base_counts(a);
        let mut w = radical_dual_subspace(a);
        let rad = a.radical_power_indices(1);
        for &i in &rad {
            for &j in &rad {
                if let Some(v) = self.alpha.value(i, j) {
                    w.insert(v);
                }
            }
        }
        Ok(add_dual_counts(a, base_counts, w.basis()))
    }
}

/// `N_A(i,j) = dim e_i J e_j − dim e_i J² e_j` for `A` itself.
pub fn base_counts(a: &TruncatedAlgebra) -> ArrowCountMatrix {
    let s = a.quiver().vertex_count();
    let mut counts = vec![vec![0; s]; s];
    for i in 0..s {
        for j in 0..s {
            let corner = a.corner_indices(i, j);
            let j1 = corner.iter().filter(|&&k| a.basis_path(k).len() >= 1).count();
            let j2 = corner.iter().filter(|&&k| a.basis_path(k).len() >= 2).count();
            counts[i][j] = j1 - j2;
        }
    }
    ArrowCountMatrix::new(counts)
}

/// Adds `dim e_i D e_j − dim e_i W e_j` to each entry, for `W ⊆ D(A)`
/// spanned by `w`.
fn add_dual_counts(a: &TruncatedAlgebra, base: ArrowCountMatrix, w: &[SparseVector]) -> ArrowCountMatrix {
    let s = base.size();
    let f = a.field();
    let mut counts = base.counts;
    for i in 0..s {
        for j in 0..s {
            let ei = a.basis_element(a.vertex_index(i));
            let ej = a.basis_element(a.vertex_index(j));
            let full = a.dual_corner_indices(i, j).len();
            let mut sub = Subspace::new(f);
            for v in w {
                let x = a.dual_from_vector(v.clone());
                let y = a.act_right(&a.act_left(&ei, &x).expect("same algebra"), &ej).expect("same algebra");
                sub.insert(y.coeffs());
            }
            counts[i][j] += full - sub.dim();
        }
    }
    ArrowCountMatrix::new(counts)
}

/// Arrow counts of the trivial extension `T₀(A)`.
pub fn trivial_extension_counts(a: &TruncatedAlgebra) -> ArrowCountMatrix {
    let w = radical_dual_subspace(a);
    add_dual_counts(a, base_counts(a), w.basis())
}

pub fn classify(a: &TruncatedAlgebra, counts: &ArrowCountMatrix) -> QuiverVerdict {
    if counts == &base_counts(a) {
        QuiverVerdict::Base
    } else if counts == &trivial_extension_counts(a) {
        QuiverVerdict::TrivialExt
    } else {
        QuiverVerdict::Other
    }
}

/// Whether `T_α(A)` can be symmetric by the degree criterion `2n ≡ 1 (mod s)`.
pub fn corollary46_predicate(s: usize, n: usize) -> bool {
    s > 0 && (2 * n - 1) % s == 0
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub schema: u32,
    pub s: usize,
    pub n: usize,
    pub q: usize,
    pub char: u64,
    pub coefficients: Vec<String>,
    pub quiver_counts: ArrowCountMatrix,
    pub verdict: QuiverVerdict,
    pub expected: QuiverVerdict,
    pub lemma42: bool,
    #[serde(rename = "dim_T")]
    pub dim_t: usize,
    pub zero_class: bool,
    pub cocycle: Vec<CocycleEntryJson>,
    #[serde(skip)]
    pub cocycle_text: Vec<String>,
}

impl VerdictReport {
    pub fn agrees(&self) -> bool {
        self.verdict == self.expected
    }
}

fn check_degree(s: usize, n: usize, q: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    if q < n || q > 2 * n - 1 {
        return Err(Error::InvalidDegree { q, lo: n, hi: 2 * n - 1 });
    }
    if q % s != 0 {
        return Err(Error::DegreeNotDivisible { q, s });
    }
    Ok(())
}

/// `Σ_k c_k u_k` for the dual homology basis `u_k` in degree `q`.
pub fn combine_basis(a: &TruncatedAlgebra, q: usize, coefficients: &[Scalar]) -> Result<DualSliceVector> {
    let basis = dual_hh2_basis(a, q)?;
    if basis.len() != coefficients.len() {
        return Err(Error::CoefficientCount { expected: basis.len(), got: coefficients.len() });
    }
    let mut acc = SparseVector::new();
    for (u, c) in basis.iter().zip(coefficients) {
        acc = acc.add_scaled(&u.coeffs, c);
    }
    Ok(DualSliceVector::new(q, acc))
}

/// Builds `α = Θ(Σ c_k u_k)` in degree `q` on the cyclic quiver and returns
/// the Gabriel-quiver verdict for `T_α(A)`.
pub fn theorem44_verdict(s: usize, n: usize, q: usize, field: FieldSpec, coefficients: &[Scalar]) -> Result<VerdictReport> {
    check_degree(s, n, q)?;
    let a = TruncatedAlgebra::cyclic(s, n, field)?;
    let u = combine_basis(&a, q, coefficients)?;
    let alpha = theta(&a, &u)?;
    let zero_class = is_coboundary(&a, &alpha)?.is_some();
    let expected = if zero_class || q < 2 * n - 1 { QuiverVerdict::TrivialExt } else { QuiverVerdict::Base };
    report(&a, &alpha, q, coefficients, zero_class, expected)
}

fn report(
    a: &TruncatedAlgebra,
    alpha: &Cocycle,
    q: usize,
    coefficients: &[Scalar],
    zero_class: bool,
    expected: QuiverVerdict,
) -> Result<VerdictReport> {
    let t = build_extension(a, alpha)?;
    let counts = t.gabriel_quiver()?;
    Ok(VerdictReport {
        schema: 1,
        s: a.quiver().vertex_count(),
        n: a.truncation(),
        q,
        char: a.field().characteristic(),
        coefficients: coefficients.iter().map(ToString::to_string).collect(),
        verdict: classify(a, &counts),
        quiver_counts: counts,
        expected,
        lemma42: radical_image_contained(a, alpha),
        dim_t: t.dim(),
        zero_class,
        cocycle: alpha.to_json(a),
        cocycle_text: alpha.to_text(a),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedVerdictReport {
    pub schema: u32,
    pub s: usize,
    pub n: usize,
    pub char: u64,
    pub degrees: Vec<usize>,
    pub quiver_counts: ArrowCountMatrix,
    pub verdict: QuiverVerdict,
    pub top_class_nonzero: bool,
    pub expected: QuiverVerdict,
}

/// Sum of per-degree cocycles; the verdict should be `BASE` exactly when the
/// degree `2n − 1` component has a nonzero class.
pub fn corollary45_verdict(s: usize, n: usize, field: FieldSpec, parts: &[(usize, Vec<Scalar>)]) -> Result<MixedVerdictReport> {
    let a = TruncatedAlgebra::cyclic(s, n, field)?;
    let mut alpha = Cocycle::zero(&a);
    let mut top = Cocycle::zero(&a);
    for (q, coeffs) in parts {
        check_degree(s, n, *q)?;
        let part = theta(&a, &combine_basis(&a, *q, coeffs)?)?;
        if *q == 2 * n - 1 {
            top = top.add(&part)?;
        }
        alpha = alpha.add(&part)?;
    }
    let top_class_nonzero = is_coboundary(&a, &top)?.is_none();
    let t = build_extension(&a, &alpha)?;
    let counts = t.gabriel_quiver()?;
    Ok(MixedVerdictReport {
        schema: 1,
        s,
        n,
        char: field.characteristic(),
        degrees: parts.iter().map(|(q, _)| *q).collect(),
        verdict: classify(&a, &counts),
        quiver_counts: counts,
        top_class_nonzero,
        expected: if top_class_nonzero { QuiverVerdict::Base } else { QuiverVerdict::TrivialExt },
    })
}
