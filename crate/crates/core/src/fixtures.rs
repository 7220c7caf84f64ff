//! Worked examples on the 3-cycle: extension algebras together with the
//! quivers with relations that present them.

use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::cocycle::{theta, Cocycle};
use crate::error::Result;
use crate::extension::{build_extension, classify, combine_basis, ArrowCountMatrix, QuiverVerdict};
use crate::field::{FieldSpec, Scalar};
use crate::presentation::{
    default_templates, verify_presentation, PresentationReport, PresentedArrow, PresentedQuiver, Relation,
};
use crate::symmetry::{symmetry_verdict, SymmetryKind};

/// Where the extra arrow `x_i'` of the 3-cycle example starts and ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ExtraArrows {
    None,
    /// `x_i'` is a loop at `i`.
    Loops,
    /// `x_i' : i → i+1`, parallel to `x_i`.
    Parallel,
    /// `x_i' : i+1 → i`, opposite to `x_i`.
    Reversed,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub s: usize,
    pub n: usize,
    /// Degree of the class and its coefficients; `None` for the trivial extension.
    pub class: Option<(usize, Vec<Scalar>)>,
    pub quiver: PresentedQuiver,
    pub relations: Vec<Relation>,
    pub expected_dim: usize,
    pub expected_verdict: QuiverVerdict,
    pub check_symmetry: bool,
}

fn three_cycle_quiver(extra: ExtraArrows) -> PresentedQuiver {
    let mut arrows: Vec<PresentedArrow> = (0..3)
        .map(|i| PresentedArrow { label: format!("x{}", i + 1), source: i, target: (i + 1) % 3, base_arrow: Some(i) })
        .collect();
    let ends = |i: usize| match extra {
        ExtraArrows::None => None,
        ExtraArrows::Loops => Some((i, i)),
        ExtraArrows::Parallel => Some((i, (i + 1) % 3)),
        ExtraArrows::Reversed => Some(((i + 1) % 3, i)),
    };
    for i in 0..3 {
        if let Some((source, target)) = ends(i) {
            arrows.push(PresentedArrow { label: format!("x{}'", i + 1), source, target, base_arrow: None });
        }
    }
    PresentedQuiver::new(3, arrows).expect("3-cycle presentation is well formed")
}

struct RelationBuilder<'a> {
    quiver: &'a PresentedQuiver,
    field: FieldSpec,
    relations: Vec<Relation>,
}

impl RelationBuilder<'_> {
    /// Parses `"x1 x2' | k | x3 x1"` as `u − k·v`, or a single monomial `u`.
    /// Arrow numbers are taken mod 3 after substituting `i`.
    fn add(&mut self, i: usize, text: &str, k: Option<Scalar>) {
        let resolve = |part: &str| -> Vec<usize> {
            let words: Vec<String> = part
                .split_whitespace()
                .map(|tok| {
                    let prime = tok.ends_with('\'');
                    let body = tok.trim_start_matches('x').trim_end_matches('\'');
                    let shift: usize = body.trim_start_matches("i+").parse().unwrap_or(0);
                    let index = if body.starts_with('i') { (i + shift) % 3 + 1 } else { shift };
                    format!("x{index}{}", if prime { "'" } else { "" })
                })
                .collect();
            self.quiver.word(&words.join(" ")).expect("fixture relation is a path")
        };
        let parts: Vec<&str> = text.split('|').collect();
        let relation = match parts.as_slice() {
            [u] => Relation::monomial(resolve(u), self.field),
            [u, v] => Relation::binomial(resolve(u), k.unwrap_or_else(|| self.field.one()), resolve(v)),
            _ => unreachable!("relation text has at most one separator"),
        };
        self.relations.push(relation);
    }

    fn each(&mut self, text: &str) {
        for i in 0..3 {
            self.add(i, text, None);
        }
    }
}

fn fixture(
    name: String,
    n: usize,
    class: Option<(usize, Vec<Scalar>)>,
    extra: ExtraArrows,
    field: FieldSpec,
    build: impl FnOnce(&mut RelationBuilder<'_>),
) -> Fixture {
    let quiver = three_cycle_quiver(extra);
    let mut b = RelationBuilder { quiver: &quiver, field, relations: Vec::new() };
    build(&mut b);
    let relations = b.relations;
    let expected_verdict = if extra == ExtraArrows::None { QuiverVerdict::Base } else { QuiverVerdict::TrivialExt };
    Fixture {
        name,
        s: 3,
        n,
        class,
        quiver,
        relations,
        expected_dim: 2 * 3 * n,
        expected_verdict,
        check_symmetry: extra == ExtraArrows::None,
    }
}

/// Every worked example over the given field. `x_{i+k}` in a relation
/// template stands for the arrow numbered `i + k` mod 3, for `i = 1, 2, 3`.
pub fn three_cycle_examples(field: FieldSpec) -> Vec<Fixture> {
    let one = field.one();
    let zero = field.zero();
    let mut out = vec![
        fixture("n4-alpha".into(), 4, Some((6, vec![one.clone()])), ExtraArrows::Loops, field, |b| {
            b.each("xi' xi | xi xi+1'");
            b.each("xi xi+1 xi+2 xi+3 | xi' xi");
            b.each("xi' xi'");
        }),
        fixture("n4-trivial".into(), 4, None, ExtraArrows::Loops, field, |b| {
            b.each("xi' xi | xi xi+1'");
            b.each("xi xi+1 xi+2 xi+3");
            b.each("xi' xi'");
        }),
    ];
    for (k1, k2) in [(one.clone(), zero.clone()), (zero.clone(), one.clone()), (one.clone(), one.clone())] {
        let name = format!("n3-beta-{k1}-{k2}");
        let coeffs = vec![k1.clone(), k2.clone()];
        out.push(fixture(name, 3, Some((3, coeffs)), ExtraArrows::Parallel, field, |b| {
            b.each("xi xi+1' | xi' xi+1");
            b.each("xi' xi+1'");
            b.add(0, "x1 x2 x3 | x1 x2 x3'", Some(k1));
            b.add(0, "x2 x3 x1 | x2 x3 x1'", Some(k2));
            b.add(0, "x3 x1 x2", None);
        }));
    }
    out.push(fixture("n3-trivial".into(), 3, None, ExtraArrows::Parallel, field, |b| {
        b.each("xi xi+1' | xi' xi+1");
        b.each("xi' xi+1'");
        b.each("xi xi+1 xi+2");
    }));
    out.push(fixture("n2-trivial".into(), 2, None, ExtraArrows::Reversed, field, |b| {
        b.each("xi xi' | xi+2' xi+2");
        b.each("xi xi+1");
        b.each("xi' xi+2'");
    }));
    out.push(fixture("n2-gamma".into(), 2, Some((3, vec![one])), ExtraArrows::None, field, |b| {
        b.each("xi xi+1 xi+2 xi+3");
    }));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub s: usize,
    pub n: usize,
    pub char: u64,
    pub quiver_counts: ArrowCountMatrix,
    pub verdict: QuiverVerdict,
    pub expected_verdict: QuiverVerdict,
    pub presentation: PresentationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryKind>,
    pub passed: bool,
}

pub fn run_fixture(fx: &Fixture, field: FieldSpec, seed: u64) -> Result<FixtureReport> {
    let a = TruncatedAlgebra::cyclic(fx.s, fx.n, field)?;
    let alpha = match &fx.class {
        Some((q, coeffs)) => theta(&a, &combine_basis(&a, *q, coeffs)?)?,
        None => Cocycle::zero(&a),
    };
    let t = build_extension(&a, &alpha)?;
    let counts = t.gabriel_quiver()?;
    let verdict = classify(&a, &counts);
    let templates = default_templates(&a, &fx.quiver)?;
    let presentation = verify_presentation(&t, &fx.quiver, &fx.relations, &templates, seed)?;
    let symmetry = fx.check_symmetry.then(|| symmetry_verdict(t.table(), seed, 64).verdict);
    let passed = verdict == fx.expected_verdict
        && presentation.verified
        && presentation.presented_dim == fx.expected_dim
        && symmetry.is_none_or(|v| v == SymmetryKind::Symmetric);
    Ok(FixtureReport {
        name: fx.name.clone(),
        s: fx.s,
        n: fx.n,
        char: field.characteristic(),
        quiver_counts: counts,
        verdict,
        expected_verdict: fx.expected_verdict,
        presentation,
        symmetry,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_is_presented_over_the_rationals() {
        let f = FieldSpec::rationals();
        for fx in three_cycle_examples(f) {
            let r = run_fixture(&fx, f, 0).unwrap();
            assert!(r.passed, "{}: {:#?}", fx.name, r);
        }
    }

    #[test]
    fn fixture_dimensions() {
        let dims: Vec<usize> = three_cycle_examples(FieldSpec::rationals()).iter().map(|f| f.expected_dim).collect();
        assert_eq!(dims, vec![24, 24, 18, 18, 18, 18, 12, 12]);
    }

    #[test]
    fn wrong_relations_fail() {
        // dropping the squares of the loops leaves an infinite-dimensional quotient
        let f = FieldSpec::rationals();
        let mut fx = three_cycle_examples(f).remove(0);
        fx.relations.truncate(6);
        let r = run_fixture(&fx, f, 0).unwrap();
        assert!(!r.passed && r.presentation.presented_dim > 24);
        // the trivial-extension relations do not hold in a nontrivial extension
        let mut fx = three_cycle_examples(f).remove(0);
        fx.relations = three_cycle_examples(f).remove(1).relations;
        assert!(!run_fixture(&fx, f, 0).unwrap().presentation.relations_vanish);
    }
}
