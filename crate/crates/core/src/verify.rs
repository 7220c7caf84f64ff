//! The full consistency sweep for one cyclic truncated algebra.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::bar::{oracle_report, ORACLE_DIM_LIMIT};
use crate::cocycle::{class_rank, cocycle_check, is_coboundary, radical_image_contained, theta, vanishes_on_idempotents, Cocycle};
use crate::error::{Error, Result};
use crate::extension::{
    base_counts, build_extension, combine_basis, corollary45_verdict, corollary46_predicate,
    theorem44_verdict, trivial_extension_counts, QuiverVerdict,
};
use crate::field::{FieldSpec, Scalar};
use crate::fixtures::{run_fixture, three_cycle_examples};
use crate::skoldberg::{dual_hh2_basis, homology_table};
use crate::symmetry::{symmetry_verdict, SymmetryKind};

/// Largest `dim T` for which the trivial extension is also searched for a
/// symmetric form.
const TRIVIAL_SYMMETRY_LIMIT: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub s: usize,
    pub n: usize,
    pub char: u64,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Unit vectors, then (for more than one coefficient) all ones and `1, 2, …, k`.
pub fn coefficient_patterns(k: usize, field: FieldSpec) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    if k > 1 {
        for p in [vec![field.one(); k], (1..=k).map(|j| field.from_u64(j as u64)).collect()] {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn format_coeffs(c: &[Scalar]) -> String {
    format!("[{}]", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

/// Degrees `q` with `s | q` and `n ≤ q ≤ 2n − 1`.
pub fn valid_degrees(s: usize, n: usize) -> Vec<usize> {
    (n..2 * n).filter(|q| q % s == 0).collect()
}

/// Associativity, the two arrow-count routes, the entrywise sandwich
/// `N_A ≤ N_T ≤ N_{T₀}`, `dim T = 2 dim A`, `J^{2n} = 0`, and the
/// equivalence between the radical-image condition and `N_T = N_{T₀}`.
pub fn structural_check(a: &TruncatedAlgebra, alpha: &Cocycle) -> Result<(bool, String)> {
    let t = build_extension(a, alpha)?;
    let counts = t.gabriel_quiver()?;
    let trivial = trivial_extension_counts(a);
    let sandwich = base_counts(a).le(&counts) && counts.le(&trivial);
    let dim_ok = t.dim() == 2 * a.dim();
    let nil = t.radical()?.nilpotency_index();
    let nil_ok = nil <= 2 * a.truncation();
    let lemma = radical_image_contained(a, alpha) == (counts == trivial);
    let passed = sandwich && dim_ok && nil_ok && lemma;
    Ok((passed, format!("sandwich={sandwich} dim_T={} nilpotency={nil} radical_image_equivalence={lemma}", t.dim())))
}

enum Job {
    Homology,
    Cocycles(usize),
    Verdict(usize, Vec<Scalar>),
    Mixed(Vec<(usize, Vec<Scalar>)>),
    Oracle,
    Fixture(usize),
    TrivialSymmetry,
    NotCoboundaryDifference,
}

pub fn verify(s: usize, n: usize, field: FieldSpec, seed: u64, samples: usize) -> Result<VerifyReport> {
    if s == 0 {
        return Err(Error::EmptyQuiver);
    }
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    let a = TruncatedAlgebra::cyclic(s, n, field)?;
    let degrees = valid_degrees(s, n);
    let mut jobs = vec![Job::Homology];
    let mut nonzero = Vec::new();
    for &q in &degrees {
        let k = dual_hh2_basis(&a, q)?.len();
        jobs.push(Job::Cocycles(q));
        if k > 0 {
            nonzero.push((q, k));
            for p in coefficient_patterns(k, field) {
                jobs.push(Job::Verdict(q, p));
            }
        }
    }
    let top = 2 * n - 1;
    if let Some(&(_, k_top)) = nonzero.iter().find(|(q, _)| *q == top) {
        let lower: Vec<(usize, Vec<Scalar>)> =
            nonzero.iter().filter(|(q, _)| *q < top).map(|&(q, k)| (q, vec![field.one(); k])).collect();
        let mut with_top = lower.clone();
        with_top.push((top, vec![field.one(); k_top]));
        let mut zero_top = lower;
        zero_top.push((top, vec![field.zero(); k_top]));
        jobs.push(Job::Mixed(with_top));
        jobs.push(Job::Mixed(zero_top));
    }
    if a.dim() <= ORACLE_DIM_LIMIT {
        jobs.push(Job::Oracle);
    }
    if s == 3 {
        let fixtures = three_cycle_examples(field);
        jobs.extend((0..fixtures.len()).filter(|&i| fixtures[i].n == n).map(Job::Fixture));
        if n == 3 {
            jobs.push(Job::NotCoboundaryDifference);
        }
    }
    if 2 * a.dim() <= TRIVIAL_SYMMETRY_LIMIT {
        jobs.push(Job::TrivialSymmetry);
    }

    let checks: Vec<CheckResult> =
        jobs.par_iter().flat_map_iter(|job| run_job(&a, job, field, seed, samples)).collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { schema: 1, s, n, char: field.characteristic(), seed, checks, passed })
}

fn run_job(a: &TruncatedAlgebra, job: &Job, field: FieldSpec, seed: u64, samples: usize) -> Vec<CheckResult> {
    let (s, n) = (a.quiver().vertex_count(), a.truncation());
    match job {
        Job::Homology => match homology_table(a) {
            Ok(rows) => rows
                .into_iter()
                .map(|r| {
                    CheckResult::new(format!("homology q={}", r.q), r.matches, format!("rank {} formula {}", r.dim, r.formula))
                })
                .collect(),
            Err(e) => vec![CheckResult::new("homology", false, format!("error: {e}"))],
        },
        Job::Cocycles(q) => {
            let r = (|| {
                let basis = dual_hh2_basis(a, *q)?;
                let thetas = basis.iter().map(|u| theta(a, u)).collect::<Result<Vec<_>>>()?;
                let sound = thetas.iter().all(|c| cocycle_check(a, c) && vanishes_on_idempotents(a, c));
                let rank = class_rank(a, &thetas);
                Ok((sound && rank == basis.len(), format!("{} cocycles, class rank {rank}", basis.len())))
            })();
            vec![CheckResult::from_result(format!("cocycles q={q}"), r)]
        }
        Job::Verdict(q, coeffs) => {
            let label = format_coeffs(coeffs);
            let mut out = Vec::new();
            let r = theorem44_verdict(s, n, *q, field, coeffs);
            match r {
                Ok(rep) => {
                    let lemma_expected = *q < 2 * n - 1 || rep.zero_class;
                    let ok = rep.agrees() && rep.lemma42 == lemma_expected && !rep.zero_class;
                    out.push(CheckResult::new(
                        format!("verdict q={q} coeffs={label}"),
                        ok,
                        format!("verdict {} expected {} radical_image {}", rep.verdict, rep.expected, rep.lemma42),
                    ));
                    let alpha = combine_basis(a, *q, coeffs).and_then(|u| theta(a, &u));
                    out.push(CheckResult::from_result(
                        format!("structure q={q} coeffs={label}"),
                        alpha.and_then(|alpha| structural_check(a, &alpha)),
                    ));
                    if rep.verdict == QuiverVerdict::Base && corollary46_predicate(s, n) {
                        let sym = combine_basis(a, *q, coeffs)
                            .and_then(|u| theta(a, &u))
                            .and_then(|alpha| {
                                let t = build_extension(a, &alpha)?;
                                let v = symmetry_verdict(t.table(), seed, samples);
                                Ok((v.verdict == SymmetryKind::Symmetric, format!("{} via {:?}", v.verdict, v.certificate)))
                            });
                        out.push(CheckResult::from_result(format!("symmetric q={q} coeffs={label}"), sym));
                    }
                }
                Err(e) => out.push(CheckResult::new(format!("verdict q={q} coeffs={label}"), false, format!("error: {e}"))),
            }
            out
        }
        Job::Mixed(parts) => {
            let label: Vec<String> = parts.iter().map(|(q, c)| format!("{q}:{}", format_coeffs(c))).collect();
            let r = corollary45_verdict(s, n, field, parts)
                .map(|m| (m.verdict == m.expected, format!("verdict {} expected {}", m.verdict, m.expected)));
            vec![CheckResult::from_result(format!("mixed {}", label.join(" ")), r)]
        }
        Job::Oracle => {
            let r = oracle_report(a).map(|o| {
                (o.agree, format!("bar {} chain {} slices {}", o.h2_bar, o.hh2_bar, o.hh2_skoldberg_sum))
            });
            vec![CheckResult::from_result("oracle", r)]
        }
        Job::Fixture(i) => {
            let fx = &three_cycle_examples(field)[*i];
            let r = run_fixture(fx, field, seed).map(|rep| {
                let d = &rep.presentation;
                (
                    rep.passed,
                    format!(
                        "verdict {} presented dim {} relations {} independent {} surjective {}",
                        rep.verdict, d.presented_dim, d.relations_vanish, d.independent_mod_radical_square, d.surjective
                    ),
                )
            });
            vec![CheckResult::from_result(format!("fixture {}", fx.name), r)]
        }
        Job::TrivialSymmetry => {
            let r = build_extension(a, &Cocycle::zero(a)).map(|t| {
                let v = symmetry_verdict(t.table(), seed, samples);
                (v.verdict == SymmetryKind::Symmetric, format!("{} via {:?}", v.verdict, v.certificate))
            });
            vec![CheckResult::from_result("symmetric trivial extension", r)]
        }
        Job::NotCoboundaryDifference => {
            let r = (|| {
                let basis = dual_hh2_basis(a, n)?;
                if basis.len() < 2 {
                    return Ok((false, format!("expected two classes, found {}", basis.len())));
                }
                let diff = theta(a, &basis[0])?.sub(&theta(a, &basis[1])?)?;
                let nonzero = is_coboundary(a, &diff)?.is_none();
                Ok((nonzero, format!("difference of the two degree-{n} cocycles is a coboundary: {}", !nonzero)))
            })();
            vec![CheckResult::from_result("inequivalent extensions", r)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        let f = FieldSpec::rationals();
        assert_eq!(coefficient_patterns(1, f).len(), 1);
        assert_eq!(coefficient_patterns(2, f).len(), 4);
        // over F_2, 1,2 ≡ 1,0 duplicates a unit vector
        assert_eq!(coefficient_patterns(2, FieldSpec::prime(2).unwrap()).len(), 3);
    }

    #[test]
    fn degrees() {
        assert_eq!(valid_degrees(3, 4), vec![6]);
        assert_eq!(valid_degrees(2, 5), vec![6, 8]);
        assert_eq!(valid_degrees(1, 2), vec![2, 3]);
    }

    #[test]
    fn sweep_three_cycle_n2() {
        let r = verify(3, 2, FieldSpec::prime(3).unwrap(), 0, 32).unwrap();
        let failed: Vec<_> = r.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(r.checks.iter().any(|c| c.name.starts_with("symmetric q=3")));
        assert!(r.checks.iter().any(|c| c.name == "fixture n2-gamma"));
    }

    #[test]
    fn sweep_two_cycle_n5() {
        let r = verify(2, 5, FieldSpec::rationals(), 0, 16).unwrap();
        assert!(r.passed, "{:#?}", r.failures().collect::<Vec<_>>());
    }
}
