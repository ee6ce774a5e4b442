//! Exact arithmetic: rationals, sparse polynomials, relation normal forms,
//! fraction-free solving and Sturm sign analysis.

pub mod gcd;
pub mod linsolve;
pub mod poly;
pub mod rational;
pub mod relations;
pub mod sturm;

pub use gcd::{gcd, PolyFraction};
pub use linsolve::{det_rational, determinant, solve_linear, solve_linear_common, solve_rational, CommonSolution};
pub use poly::{Monomial, Poly, Var};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use relations::{RelationGroup, Relations};
pub use sturm::{isolate_sign_change, sturm_sign_on_interval, Dense, Interval, SturmResult, SturmVerdict};
