//! The spec-file language: one chart, named forms, an optional p-sphere
//! family, bound hints, expected properties and scan functions.
//!
//! ```text
//! chart r5
//! vars x1 x2 x3 x4 x5
//! form w1 = x1*dx2 + x3*dx4 + dx5
//! form w2 = -x1*dx2 + x3*dx4 + dx5
//! family w1, w2
//! expect psphere = false
//! ```
//!
//! In expressions `^` is the wedge product, `*` multiplies by a scalar
//! (at least one side must be a function), `d(..)` is the exterior
//! derivative and `wpow(w, n)` the n-fold wedge power. Binding strength,
//! tightest first: `d`, `*` and `/`, `^`, `+` and `-`.

mod lexer;
mod parser;
mod print;

use std::sync::Arc;

use csl_core::algebra::Rational;
use csl_core::constructions::Property;
use csl_core::contact::BoundHint;
use csl_core::exterior::{Chart, DiffForm};
use csl_core::psphere::PSphereSpec;
use thiserror::Error;

pub use lexer::{tokenize, Pos, Tok, Token};
pub use parser::parse_spec;
pub use print::print_spec;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl DslError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        DslError { line: pos.line, col: pos.col, message: message.into() }
    }
}

#[derive(Clone, Debug)]
pub struct NamedForm {
    pub name: String,
    pub form: DiffForm,
}

/// A parsed spec file. Hint polynomials use the chart's variables followed
/// by `lambda1..` for the family coefficients.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub chart: Arc<Chart>,
    pub forms: Vec<NamedForm>,
    /// Explicit `family` line; empty means every 1-form in order.
    pub family: Vec<String>,
    pub hints: Vec<BoundHint>,
    pub expectations: Vec<(Property, bool)>,
    pub scan: Vec<String>,
}

impl SpecFile {
    pub fn form(&self, name: &str) -> Option<&DiffForm> {
        self.forms.iter().find(|f| f.name == name).map(|f| &f.form)
    }

    pub fn family_names(&self) -> Vec<String> {
        if !self.family.is_empty() {
            return self.family.clone();
        }
        self.forms.iter().filter(|f| f.form.is_homogeneous(1) && !f.form.is_zero()).map(|f| f.name.clone()).collect()
    }

    pub fn psphere(&self) -> csl_core::Result<PSphereSpec> {
        let gens = self
            .family_names()
            .iter()
            .map(|n| self.form(n).cloned().ok_or_else(|| csl_core::Error::Input(format!("family member `{n}` is not a form"))))
            .collect::<csl_core::Result<Vec<_>>>()?;
        Ok(PSphereSpec::new(self.chart.name().to_string(), gens)?.with_hints(self.hints.clone()))
    }
}

fn same_chart(a: &Chart, b: &Chart) -> bool {
    a.name() == b.name()
        && a.layout_eq(b)
        && (0..a.num_vars())
            .all(|i| a.var_differential(csl_core::algebra::Var(i as u32)) == b.var_differential(csl_core::algebra::Var(i as u32)))
        && (0..a.num_gens()).all(|g| a.gen_differential(g) == b.gen_differential(g))
}

fn same_hint(a: &BoundHint, b: &BoundHint) -> bool {
    a.name == b.name && a.auxiliary == b.auxiliary && a.lo == b.lo && a.hi == b.hi && a.assumed == b.assumed
}

/// Structural equality: same chart declarations and differentials, same
/// named forms, family, hints, expectations and scan list.
impl PartialEq for SpecFile {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart)
            && self.forms.len() == other.forms.len()
            && self.forms.iter().zip(&other.forms).all(|(a, b)| a.name == b.name && a.form.terms() == b.form.terms())
            && self.family == other.family
            && self.hints.len() == other.hints.len()
            && self.hints.iter().zip(&other.hints).all(|(a, b)| same_hint(a, b))
            && self.expectations == other.expectations
            && self.scan == other.scan
    }
}

pub fn parse_property(name: &str) -> Option<Property> {
    match name {
        "contact" => Some(Property::Contact),
        "psphere" => Some(Property::Psphere),
        "taut" => Some(Property::Taut),
        "round" => Some(Property::Round),
        _ => None,
    }
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "d" | "wpow"
            | "chart"
            | "vars"
            | "params"
            | "funcs"
            | "gen"
            | "with"
            | "let"
            | "relation"
            | "form"
            | "family"
            | "hint"
            | "in"
            | "assumed"
            | "expect"
            | "scan"
            | "sphere"
            | "true"
            | "false"
    ) || name.strip_prefix("lambda").is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
}

pub(crate) fn rational_text(r: &Rational) -> String {
    csl_core::algebra::format_rational(r)
}
