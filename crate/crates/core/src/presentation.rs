//! Checking that an extension algebra `T` is presented by a quiver with
//! relations `KQ'/⟨R⟩`.
//!
//! Each arrow of `Q'` is sent to a fixed element of `T` plus an unknown
//! combination of free directions inside `D(A)`. Because `D(A)` squares to
//! zero, every relation evaluates to an affine-linear expression in the
//! unknowns, so the images are found by an exact linear solve.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::extension::{ArrowCountMatrix, ExtensionAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{kernel_basis, solve, Matrix, SparseVector, Subspace};

/// Attempts at picking a point of the solution space whose arrow images
/// are independent modulo `J²(T)`.
const IMAGE_ATTEMPTS: usize = 64;

/// Largest number of paths enumerated while waiting for the quotient
/// dimension to stabilise.
const PATH_LIMIT: usize = 20_000;

/// Longest path length considered while waiting for stabilisation.
const LENGTH_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct PresentedArrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
    /// Arrow of the underlying quiver giving the fixed `A`-part, if any.
    pub base_arrow: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PresentedQuiver {
    vertex_count: usize,
    arrows: Vec<PresentedArrow>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl PresentedQuiver {
    pub fn new(vertex_count: usize, arrows: Vec<PresentedArrow>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyQuiver);
        }
        let mut outgoing = vec![Vec::new(); vertex_count];
        let mut incoming = vec![Vec::new(); vertex_count];
        for (k, a) in arrows.iter().enumerate() {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::ArrowOutOfRange { arrow: k + 1, vertex_count });
            }
            outgoing[a.source].push(k);
            incoming[a.target].push(k);
        }
        Ok(Self { vertex_count, arrows, outgoing, incoming })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[PresentedArrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn counts(&self) -> ArrowCountMatrix {
        let mut c = vec![vec![0; self.vertex_count]; self.vertex_count];
        for a in &self.arrows {
            c[a.source][a.target] += 1;
        }
        ArrowCountMatrix::new(c)
    }

    fn composable(&self, word: &[usize]) -> bool {
        word.windows(2).all(|w| self.arrows[w[0]].target == self.arrows[w[1]].source)
    }

    /// Parses a word of space-separated arrow labels such as `"x1 x2' x3"`.
    pub fn word(&self, text: &str) -> Result<Vec<usize>> {
        let word = text
            .split_whitespace()
            .map(|l| self.arrow_index(l).ok_or_else(|| Error::Invalid(format!("unknown arrow {l}"))))
            .collect::<Result<Vec<_>>>()?;
        if word.is_empty() {
            return Err(Error::ZeroLength);
        }
        if !self.composable(&word) {
            return Err(Error::Invalid(format!("word '{text}' is not a path")));
        }
        Ok(word)
    }
}

/// A linear combination of paths of length at least one.
#[derive(Clone, Debug)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl Relation {
    pub fn new(terms: Vec<(Scalar, Vec<usize>)>) -> Self {
        Self { terms }
    }

    pub fn monomial(word: Vec<usize>, field: FieldSpec) -> Self {
        Self { terms: vec![(field.one(), word)] }
    }

    /// `u − k·v`.
    pub fn binomial(u: Vec<usize>, k: Scalar, v: Vec<usize>) -> Self {
        let one = k.field().one();
        Self { terms: vec![(one, u), (-k, v)] }
    }

    fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

/// Image template of one arrow: `fixed + Σ t_u · free[u]`.
#[derive(Clone, Debug)]
pub struct ArrowImage {
    pub fixed: SparseVector,
    pub free: Vec<SparseVector>,
}

/// Default templates: `(x_k, 0)` for arrows carried over from the
/// underlying quiver, `0` otherwise, each with free directions spanning
/// `(0, e_s D(A) e_t)`.
pub fn default_templates(base: &TruncatedAlgebra, pq: &PresentedQuiver) -> Result<Vec<ArrowImage>> {
    let d = base.dim();
    let f = base.field();
    pq.arrows
        .iter()
        .map(|a| {
            let fixed = match a.base_arrow {
                Some(k) => {
                    let p = base.quiver().arrow_path(k);
                    let (s, t) = base.quiver().arrow(k);
                    if (s, t) != (a.source, a.target) {
                        return Err(Error::Invalid(format!("arrow {} does not match x{}", a.label, k + 1)));
                    }
                    SparseVector::unit(base.index_of(&p).ok_or(Error::NotABasisPath)?, f)
                }
                None => SparseVector::new(),
            };
            let free = base.dual_corner_indices(a.source, a.target).into_iter().map(|p| SparseVector::unit(d + p, f)).collect();
            Ok(ArrowImage { fixed, free })
        })
        .collect()
}

/// Dimension of `KQ'/⟨R⟩`, computed as `dim KQ'/(⟨R⟩ + R^L)` for growing
/// `L` until two consecutive values agree. Returns the dimension and `L`.
///
/// These truncated dimensions only grow with `L`, so once one exceeds
/// `bound` it is returned as is.
pub fn presented_dimension(
    pq: &PresentedQuiver,
    relations: &[Relation],
    field: FieldSpec,
    bound: Option<usize>,
) -> Result<(usize, usize)> {
    for r in relations {
        if r.terms.iter().any(|(_, w)| w.len() < 2) {
            return Err(Error::NonAdmissible("relation has a term of length below 2".into()));
        }
        if r.terms.iter().any(|(_, w)| !pq.composable(w)) {
            return Err(Error::NonAdmissible("relation term is not a path".into()));
        }
        let ends: Vec<(usize, usize)> =
            r.terms.iter().map(|(_, w)| (pq.arrows[w[0]].source, pq.arrows[*w.last().unwrap()].target)).collect();
        if ends.windows(2).any(|e| e[0] != e[1]) {
            return Err(Error::NonAdmissible("relation mixes paths with different endpoints".into()));
        }
    }
    let longest = relations.iter().map(Relation::max_len).max().unwrap_or(2);
    let mut previous = truncated_quotient_dim(pq, relations, field, 1).expect("trivial paths fit");
    for l in 2..=LENGTH_LIMIT.max(longest + 2) {
        let Some(current) = truncated_quotient_dim(pq, relations, field, l) else {
            return Err(Error::NonAdmissible(format!("quotient dimension did not stabilise below path length {l}")));
        };
        if current == previous && l > longest {
            return Ok((current, l - 1));
        }
        if bound.is_some_and(|b| current > b) {
            return Ok((current, l));
        }
        previous = current;
    }
    Err(Error::NonAdmissible(format!("quotient dimension did not stabilise below path length {LENGTH_LIMIT}")))
}

/// `dim KQ'/(⟨R⟩ + R^L)`, or `None` past [`PATH_LIMIT`] paths.
fn truncated_quotient_dim(pq: &PresentedQuiver, relations: &[Relation], field: FieldSpec, l: usize) -> Option<usize> {
    // paths keyed by (source vertex, arrow word)
    let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut layer: Vec<(usize, Vec<usize>)> = (0..pq.vertex_count).map(|v| (v, Vec::new())).collect();
    for _ in 0..l {
        let mut next = Vec::new();
        for (v, w) in layer {
            let end = w.last().map_or(v, |&a| pq.arrows[a].target);
            for &a in &pq.outgoing[end] {
                let mut w2 = w.clone();
                w2.push(a);
                next.push((v, w2));
            }
            let k = index.len();
            index.insert((v, w), k);
        }
        if index.len() + next.len() > PATH_LIMIT {
            return None;
        }
        layer = next;
    }
    let key = |w: &[usize]| (pq.arrows[w[0]].source, w.to_vec());
    let mut span = Subspace::new(field);
    let mut queue: Vec<Vec<(Scalar, Vec<usize>)>> = Vec::new();
    let vectorize = |terms: &[(Scalar, Vec<usize>)]| {
        SparseVector::from_entries(terms.iter().filter_map(|(c, w)| index.get(&key(w)).map(|&i| (i, c.clone()))))
    };
    for r in relations {
        let terms: Vec<_> = r.terms.iter().filter(|(_, w)| w.len() < l).cloned().collect();
        if span.insert(&vectorize(&terms)) {
            queue.push(terms);
        }
    }
    while let Some(terms) = queue.pop() {
        // every term of a queued element shares source and target
        let (s, t) = {
            let w = &terms[0].1;
            (pq.arrows[w[0]].source, pq.arrows[*w.last().unwrap()].target)
        };
        let mut products = Vec::new();
        for &a in &pq.incoming[s] {
            products.push(
                terms
                    .iter()
                    .filter(|(_, w)| w.len() + 1 < l)
                    .map(|(c, w)| (c.clone(), std::iter::once(a).chain(w.iter().copied()).collect::<Vec<_>>()))
                    .collect::<Vec<_>>(),
            );
        }
        for &a in &pq.outgoing[t] {
            products.push(
                terms
                    .iter()
                    .filter(|(_, w)| w.len() + 1 < l)
                    .map(|(c, w)| (c.clone(), w.iter().copied().chain(std::iter::once(a)).collect::<Vec<_>>()))
                    .collect::<Vec<_>>(),
            );
        }
        for p in products {
            if !p.is_empty() && span.insert(&vectorize(&p)) {
                queue.push(p);
            }
        }
    }
    Some(index.len() - span.dim())
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageTerm {
    pub basis: String,
    pub coefficient: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowImageReport {
    pub arrow: String,
    pub image: Vec<ImageTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub relations_vanish: bool,
    pub images_in_radical: bool,
    pub independent_mod_radical_square: bool,
    pub counts_match: bool,
    pub surjective: bool,
    /// `dim KQ'/⟨R⟩`, or the first truncated dimension above `dim T`.
    pub presented_dim: usize,
    pub algebra_dim: usize,
    pub stable_length: usize,
    pub verified: bool,
    /// Arrow images found by the solve; the normalisation the relations force.
    pub images: Vec<ArrowImageReport>,
}

fn basis_label(base: &TruncatedAlgebra, k: usize) -> String {
    let d = base.dim();
    if k < d {
        base.basis_path(k).label()
    } else {
        format!("{}*", base.basis_path(k - d).label())
    }
}

fn product(t: &ExtensionAlgebra<'_>, factors: &[&SparseVector]) -> SparseVector {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        if acc.is_zero() {
            break;
        }
        acc = t.multiply(&acc, f);
    }
    acc
}

/// Searches arrow images satisfying the relations and checks that they
/// induce an isomorphism `KQ'/⟨R⟩ ≅ T`.
pub fn verify_presentation(
    t: &ExtensionAlgebra<'_>,
    pq: &PresentedQuiver,
    relations: &[Relation],
    templates: &[ArrowImage],
    seed: u64,
) -> Result<PresentationReport> {
    if templates.len() != pq.arrows.len() {
        return Err(Error::Invalid("one image template per arrow is required".into()));
    }
    let base = t.base();
    let field = base.field();
    let dim = t.dim();
    let (presented_dim, stable_length) = presented_dimension(pq, relations, field, Some(dim))?;

    let offsets: Vec<usize> = templates
        .iter()
        .scan(0, |acc, tpl| {
            let o = *acc;
            *acc += tpl.free.len();
            Some(o)
        })
        .collect();
    let unknowns: usize = templates.iter().map(|tpl| tpl.free.len()).sum();

    // constant part and per-unknown coefficient vector of each relation
    let mut triplets = Vec::new();
    let mut rhs = Vec::new();
    for (r_idx, r) in relations.iter().enumerate() {
        let mut constant = SparseVector::new();
        let mut linear: Vec<SparseVector> = vec![SparseVector::new(); unknowns];
        for (c, w) in &r.terms {
            let fixed: Vec<&SparseVector> = w.iter().map(|&a| &templates[a].fixed).collect();
            constant = constant.add_scaled(&product(t, &fixed), c);
            for (pos, &a) in w.iter().enumerate() {
                for (u, g) in templates[a].free.iter().enumerate() {
                    let mut factors = fixed.clone();
                    factors[pos] = g;
                    let v = &mut linear[offsets[a] + u];
                    *v = v.add_scaled(&product(t, &factors), c);
                }
            }
        }
        for (u, v) in linear.iter().enumerate() {
            for (coord, c) in v.iter() {
                triplets.push((r_idx * dim + coord, u, c.clone()));
            }
        }
        rhs.extend(constant.iter().map(|(coord, c)| (r_idx * dim + coord, -c)));
    }
    let system = Matrix::from_triplets(field, relations.len() * dim, unknowns, triplets);
    let rhs = SparseVector::from_entries(rhs);

    let es = t.lifted_idempotents()?;
    let rad = t.radical()?;
    let j1 = &rad.powers[0];
    let j2 = rad.powers.get(1).cloned().unwrap_or_else(|| Subspace::new(field));
    let images_for = |x: &SparseVector| -> Vec<SparseVector> {
        templates
            .iter()
            .enumerate()
            .map(|(a, tpl)| {
                let mut v = tpl.fixed.clone();
                for (u, g) in tpl.free.iter().enumerate() {
                    if let Some(c) = x.get(offsets[a] + u) {
                        v = v.add_scaled(g, c);
                    }
                }
                v
            })
            .collect()
    };
    let independent = |images: &[SparseVector]| {
        let mut s = j2.clone();
        images.iter().all(|v| s.insert(v))
    };

    let counts_match = pq.counts() == t.gabriel_quiver()?;
    let mut chosen: Option<Vec<SparseVector>> = None;
    if let Some(particular) = solve(&system, &rhs) {
        let kernel = kernel_basis(&system);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..=IMAGE_ATTEMPTS {
            let mut x = particular.clone();
            if attempt > 0 {
                for k in &kernel {
                    let c = match field.order() {
                        Some(p) => field.element(rng.random_range(0..p)),
                        None => field.from_i64(rng.random_range(-3..=3)),
                    };
                    x = x.add_scaled(k, &c);
                }
            }
            let images = images_for(&x);
            if independent(&images) {
                chosen = Some(images);
                break;
            }
            if kernel.is_empty() {
                break;
            }
        }
        if chosen.is_none() {
            chosen = Some(images_for(&particular));
        }
    }

    let Some(images) = chosen else {
        return Ok(PresentationReport {
            relations_vanish: false,
            images_in_radical: false,
            independent_mod_radical_square: false,
            counts_match,
            surjective: false,
            presented_dim,
            algebra_dim: dim,
            stable_length,
            verified: false,
            images: Vec::new(),
        });
    };

    let relations_vanish = relations.iter().all(|r| {
        let mut acc = SparseVector::new();
        for (c, w) in &r.terms {
            let factors: Vec<&SparseVector> = w.iter().map(|&a| &images[a]).collect();
            acc = acc.add_scaled(&product(t, &factors), c);
        }
        acc.is_zero()
    });
    let images_in_radical = images.iter().all(|v| j1.contains(v));
    let independent_mod_radical_square = independent(&images);

    let mut span = Subspace::new(field);
    let mut queue: Vec<SparseVector> = es.iter().chain(images.iter()).filter(|v| span.insert(v)).cloned().collect();
    while let Some(v) = queue.pop() {
        for img in &images {
            let p = t.multiply(&v, img);
            if span.insert(&p) {
                queue.push(p);
            }
        }
    }
    let surjective = span.dim() == dim;

    let verified = relations_vanish
        && images_in_radical
        && independent_mod_radical_square
        && counts_match
        && surjective
        && presented_dim == dim;
    let images = pq
        .arrows
        .iter()
        .zip(&images)
        .map(|(a, v)| ArrowImageReport {
            arrow: a.label.clone(),
            image: v.iter().map(|(k, c)| ImageTerm { basis: basis_label(base, k), coefficient: c.clone() }).collect(),
        })
        .collect();
    Ok(PresentationReport {
        relations_vanish,
        images_in_radical,
        independent_mod_radical_square,
        counts_match,
        surjective,
        presented_dim,
        algebra_dim: dim,
        stable_length,
        verified,
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_presented(s: usize) -> PresentedQuiver {
        let arrows = (0..s)
            .map(|i| PresentedArrow { label: format!("x{}", i + 1), source: i, target: (i + 1) % s, base_arrow: Some(i) })
            .collect();
        PresentedQuiver::new(s, arrows).unwrap()
    }

    #[test]
    fn truncated_path_algebra_dimension() {
        let f = FieldSpec::rationals();
        let pq = cyclic_presented(3);
        // all paths of length 3 as relations: 3 vertices × lengths 0..2
        let rels: Vec<Relation> = (0..3).map(|i| Relation::monomial(vec![i, (i + 1) % 3, (i + 2) % 3], f)).collect();
        assert_eq!(presented_dimension(&pq, &rels, f, None).unwrap().0, 9);
    }

    #[test]
    fn loop_with_binomial_relation() {
        // x² = x³ together with x³ = 0 leaves K[x]/(x²)
        let f = FieldSpec::rationals();
        let pq = PresentedQuiver::new(1, vec![PresentedArrow { label: "x".into(), source: 0, target: 0, base_arrow: None }])
            .unwrap();
        let rels = vec![
            Relation::binomial(vec![0, 0], f.one(), vec![0, 0, 0]),
            Relation::monomial(vec![0, 0, 0], f),
        ];
        assert_eq!(presented_dimension(&pq, &rels, f, None).unwrap().0, 2);
    }

    #[test]
    fn free_quiver_rejected() {
        let f = FieldSpec::rationals();
        let pq = cyclic_presented(2);
        let err = presented_dimension(&pq, &[], f, None).unwrap_err();
        assert!(matches!(err, Error::NonAdmissible(_)));
        let linear = Relation::monomial(vec![0], f);
        assert!(matches!(presented_dimension(&pq, &[linear], f, None), Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn word_parsing() {
        let pq = cyclic_presented(3);
        assert_eq!(pq.word("x1 x2 x3").unwrap(), vec![0, 1, 2]);
        assert!(pq.word("x1 x3").is_err());
        assert!(pq.word("y").is_err());
    }
}
