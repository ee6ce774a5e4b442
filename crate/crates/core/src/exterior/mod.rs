//! Charts and the graded algebra of differential forms over them.

pub mod chart;
pub mod eq;
pub mod eval;
pub mod form;

pub use chart::{coordinate_chart, Chart, ChartBuilder, GenDecl, GenKind, Mode, VarDecl, VarKind};
pub use eq::{form_eq, EqMethod, FormEq, FormRelationContext};
pub use eval::{evaluate_at, evaluate_partial};
pub use form::{Blade, DiffForm, Terms, VectorField};

#[cfg(test)]
mod tests;
