//! Exact computation of second Hochschild homology of truncated quiver
//! algebras, the cocycles it produces, and the Gabriel quivers of the
//! resulting Hochschild extension algebras.

pub mod algebra;
pub mod bar;
pub mod cocycle;
pub mod error;
pub mod extension;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod presentation;
pub mod quiver;
pub mod skoldberg;
pub mod symmetry;
pub mod verify;

pub use algebra::{AlgebraElement, Coefficients, DualElement, TruncatedAlgebra};
pub use bar::{bar_boundary_matrix, bar_coboundary_matrix, bar_h2_dim, bar_hh2_dim, oracle_report, OracleReport};
pub use cocycle::{
    class_rank, coboundary_matrix, cocycle_check, is_coboundary, radical_image_contained, theta, theta_sum, vanishes_on_idempotents, Cocycle,
    LinearMap,
};
pub use error::{Error, Result};
pub use extension::{
    base_counts, build_extension, classify, combine_basis, corollary45_verdict, corollary46_predicate,
    theorem44_verdict, trivial_extension_counts, AlgebraTable, ArrowCountMatrix, ExtensionAlgebra,
    MixedVerdictReport, QuiverVerdict, Radical, VerdictReport,
};
pub use field::{FieldSpec, Scalar};
pub use linalg::{kernel_basis, rank, solve, Matrix, SparseVector, Subspace};
pub use quiver::{cyclic_quiver, is_basic, orbit_decomposition, CycleOrbit, Path, Quiver};
pub use skoldberg::{
    d2_matrix, d3_matrix, dual_hh2_basis, hh2_dimension, hh2_formula, homology_table, slice_basis, DualSliceVector,
    GradedSlice, HomologyRow, SliceDifferential,
};
pub use symmetry::{form_space, symmetry_verdict, verify_form, Certificate, FormSpace, SymmetryKind, SymmetryVerdict};
pub use fixtures::{run_fixture, three_cycle_examples, Fixture, FixtureReport};
pub use presentation::{
    default_templates, presented_dimension, verify_presentation, ArrowImage, PresentationReport, PresentedArrow,
    PresentedQuiver, Relation,
};
pub use verify::{coefficient_patterns, structural_check, valid_degrees, verify, CheckResult, VerifyReport};
