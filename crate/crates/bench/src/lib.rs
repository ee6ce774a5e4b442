//! Named inputs shared by the benchmarks.

use csl_core::constructions::lookup;
use csl_core::psphere::PSphereSpec;

/// Catalog entries timed by `psphere_check`, smallest first.
pub const PSPHERE_CASES: [&str; 5] = ["t3-circle(2)", "s3-quaternionic", "t2-bundle-circle(-2,3)", "r7-taut-not-round", "hr-sphere(8)"];

pub fn spec(name: &str) -> PSphereSpec {
    lookup(name).unwrap_or_else(|e| panic!("{name}: {e}")).spec
}
