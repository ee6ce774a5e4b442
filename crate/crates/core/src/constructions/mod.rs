//! Example factory: the catalog, Hurwitz–Radon spheres, torus-bundle
//! circles and the pullback identities.

pub mod bundle;
pub mod catalog;
pub mod hurwitz;
pub mod scan;

pub use bundle::{
    pullback_formula_verify, pullback_reduction_verify, t3_circle, torus_bundle_circle, IdentityCheck, PullbackFormulaReport,
    PullbackReductionReport,
};
pub use catalog::{
    example_catalog, lookup, r5_pair, r7_round_not_taut, r7_taut_not_round, s3_hat, s3_quaternionic, verify_entry, Basis, EntryReport,
    ExampleEntry, Expectation, ExpectationResult, Property,
};
pub use hurwitz::{ax, family_check, hr_relation_checks, hurwitz_radon_family, matrix_contact_sphere, rho, HurwitzRadonFamily};
pub use scan::{invariant_nondegeneracy_scan, ScanReport};
