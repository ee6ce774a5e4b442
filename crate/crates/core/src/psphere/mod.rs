//! Contact p-spheres: families `Σ λ_i ω_i` with `Σ λ_i² = 1`.

pub mod checks;
pub mod dim7;
pub mod obstruction;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Var;
use crate::contact::BoundHint;
use crate::error::{Error, Result};
use crate::exterior::{form_eq, Chart, DiffForm};

pub use checks::{
    psphere_check, reeb_independence_check, round_check, taut_check, IndependenceReport, PSphereReport, RoundnessReport, TautnessReport,
};
pub use dim7::{roundtaut7_necessary, taut7_check, Dim7Report};
pub use obstruction::{obstruction_applies, odd_dim_obstruction, ObstructionReport};

/// Generators `ω_1, ..., ω_{p+1}` on one chart, with optional bound hints.
/// Hints may use the λ variables of [`PSphereSpec::lambda_vars`].
#[derive(Clone, Debug)]
pub struct PSphereSpec {
    pub name: String,
    pub chart: Arc<Chart>,
    pub generators: Vec<DiffForm>,
    pub hints: Vec<BoundHint>,
}

/// The base chart extended by `lambda1..lambda{p+1}` and the generic member `Ω_λ`.
#[derive(Clone, Debug)]
pub struct LambdaExtension {
    pub chart: Arc<Chart>,
    pub lambdas: Vec<Var>,
    pub generators: Vec<DiffForm>,
    pub omega: DiffForm,
}

impl PSphereSpec {
    pub fn new(name: impl Into<String>, generators: Vec<DiffForm>) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::Input("a p-sphere needs at least one generator".into()))?;
        let chart = first.chart().clone();
        for g in &generators {
            if !Chart::same(&chart, g.chart()) {
                return Err(Error::MixedCharts);
            }
            if !g.is_homogeneous(1) {
                return Err(Error::DegreeMismatch { expected: 1, found: g.degree().unwrap_or(0) });
            }
        }
        Ok(PSphereSpec { name: name.into(), chart, generators, hints: Vec::new() })
    }

    pub fn with_hints(mut self, hints: Vec<BoundHint>) -> Self {
        self.hints = hints;
        self
    }

    pub fn p(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn lambda_names(&self) -> Vec<String> {
        lambda_names(self.generators.len())
    }

    /// Variables the λ extension assigns to `lambda1..`.
    pub fn lambda_vars(&self) -> Vec<Var> {
        let base = self.chart.num_vars() as u32;
        (0..self.generators.len() as u32).map(|i| Var(base + i)).collect()
    }

    /// The hints at `λ = e_i`, kept when they no longer mention λ; these
    /// bound the volume coefficient of the single generator `ω_i`.
    pub fn generator_hints(&self, i: usize) -> Vec<BoundHint> {
        let lambdas = self.lambda_vars();
        self.hints
            .iter()
            .filter_map(|h| {
                let mut aux = h.auxiliary.clone();
                for (j, l) in lambdas.iter().enumerate() {
                    aux = aux.substitute(*l, &crate::algebra::Poly::from_int(i64::from(i == j)));
                }
                let local = aux.vars().iter().all(|v| v.index() < self.chart.num_vars());
                (local && !aux.is_constant()).then(|| BoundHint { auxiliary: aux, ..h.clone() })
            })
            .collect()
    }

    /// With `unit` the λ's form a relation group; without it they are free
    /// parameters and `Ω_λ` stays homogeneous in them.
    pub fn extension(&self, unit: bool) -> Result<LambdaExtension> {
        let (chart, lambdas) = self.chart.with_params(&self.lambda_names(), unit)?;
        let generators: Vec<DiffForm> = self.generators.iter().map(|g| g.transfer(&chart)).collect::<Result<_>>()?;
        let mut omega = DiffForm::zero(&chart);
        for (g, l) in generators.iter().zip(&lambdas) {
            omega = omega.try_add(&g.scale(&crate::algebra::Poly::var(*l)))?;
        }
        Ok(LambdaExtension { chart, lambdas, generators, omega })
    }
}

pub fn lambda_names(count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("lambda{i}")).collect()
}

/// One identity check: `label` holds iff the residue vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueEntry {
    pub label: String,
    pub zero: bool,
    pub residue: String,
}

impl ResidueEntry {
    pub fn of_form(label: impl Into<String>, form: &DiffForm) -> Result<Self> {
        let eq = form_eq(form, &DiffForm::zero(form.chart()))?;
        Ok(ResidueEntry { label: label.into(), zero: eq.equal, residue: eq.residue.render() })
    }

    pub fn of_poly(label: impl Into<String>, chart: &Chart, p: &crate::algebra::Poly) -> Self {
        let r = chart.relations().reduce(p);
        ResidueEntry { label: label.into(), zero: r.is_zero(), residue: chart.render_poly(&r) }
    }
}
