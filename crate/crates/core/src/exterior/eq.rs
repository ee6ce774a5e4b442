//! Equality of forms modulo the chart relations.
//!
//! Coefficients are compared through their normal forms. For every relation
//! group of coordinates the differentiated relation `Σ v dv = 0` also holds on
//! the variety, so the residue is first rewritten with `pivot·d(pivot) ->
//! -Σ w dw`, then cleared once by the pivot, and finally tested with the
//! annihilator `ι = Σ v dv`: a form vanishes on the variety exactly when its
//! wedge with every `ι` has coefficients in the relation ideal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::chart::Chart;
use super::form::{reduce_all, wedge_terms, Blade, DiffForm, Terms};
use num_traits::One;

use crate::algebra::{Monomial, Poly, Rational, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct PivotRule {
    pivot: Var,
    pivot_gen: usize,
    others: Vec<(Var, usize)>,
}

/// The rewrite rules `v·dv -> -Σ w dw`, one per coordinate group.
#[derive(Clone, Debug)]
pub struct FormRelationContext {
    chart: Arc<Chart>,
    rules: Vec<PivotRule>,
}

const MAX_REWRITE_ROUNDS: usize = 64;

impl FormRelationContext {
    pub fn new(chart: &Arc<Chart>) -> Self {
        let rules = chart
            .coordinate_groups()
            .into_iter()
            .map(|g| PivotRule {
                pivot: g.pivot(),
                pivot_gen: chart.gen_of_var(g.pivot()).expect("coordinate owns a generator"),
                others: g.others().iter().map(|&w| (w, chart.gen_of_var(w).unwrap())).collect(),
            })
            .collect();
        FormRelationContext { chart: chart.clone(), rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rewrites to a fixpoint.
    pub fn rewrite(&self, terms: &Terms) -> Terms {
        let mut current = terms.clone();
        for _ in 0..MAX_REWRITE_ROUNDS {
            let mut changed = false;
            for rule in &self.rules {
                if let Some(next) = self.apply(rule, &current) {
                    current = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        current
    }

    fn apply(&self, rule: &PivotRule, terms: &Terms) -> Option<Terms> {
        let mut out = Terms::new();
        let mut changed = false;
        for (blade, c) in terms {
            if !blade.contains(rule.pivot_gen) || c.degree_in(rule.pivot) == 0 {
                accumulate(&mut out, *blade, c.clone());
                continue;
            }
            let mut divisible = Poly::zero();
            let mut rest = Poly::zero();
            for (m, k) in c.terms() {
                if m.exponent(rule.pivot) > 0 {
                    let e = m.exponent(rule.pivot);
                    divisible.add_term(m.with_exponent(rule.pivot, e - 1), k.clone());
                } else {
                    rest.add_term(m.clone(), k.clone());
                }
            }
            changed = true;
            accumulate(&mut out, *blade, rest);
            let base = blade.without(rule.pivot_gen);
            for &(w, gw) in &rule.others {
                if base.contains(gw) {
                    continue;
                }
                let between = base.gens().filter(|&g| (g > gw.min(rule.pivot_gen)) && (g < gw.max(rule.pivot_gen))).count();
                let term = divisible.mul_monomial(&Monomial::var(w), &-Rational::one());
                accumulate(&mut out, base.with(gw), if between % 2 == 1 { -term } else { term });
            }
        }
        changed.then(|| reduce_all(self.chart.relations(), out))
    }

    /// The annihilator `ι_1 ∧ ... ∧ ι_k` of all coordinate groups.
    pub fn annihilator(&self) -> Terms {
        let rel = self.chart.relations();
        let mut acc = Terms::from([(Blade::EMPTY, Poly::one())]);
        for g in self.chart.coordinate_groups() {
            acc = wedge_terms(rel, &acc, &self.chart.iota(g));
        }
        acc
    }
}

fn accumulate(terms: &mut Terms, blade: Blade, value: Poly) {
    if value.is_zero() {
        return;
    }
    let entry = terms.entry(blade).or_insert_with(Poly::zero);
    *entry += &value;
    if entry.is_zero() {
        terms.remove(&blade);
    }
}

/// Which stage of [`form_eq`] settled the comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqMethod {
    NormalForm,
    PivotRewrite,
    Clearing,
    Annihilator,
}

#[derive(Clone, Debug)]
pub struct FormEq {
    pub equal: bool,
    pub method: EqMethod,
    /// Zero when equal; otherwise the rewritten difference.
    pub residue: DiffForm,
}

/// Decides `a = b` on the relation variety.
pub fn form_eq(a: &DiffForm, b: &DiffForm) -> Result<FormEq> {
    if !Chart::same(a.chart(), b.chart()) {
        return Err(Error::MixedCharts);
    }
    let chart = a.chart();
    let zero = DiffForm::zero(chart);
    let diff = a.try_add(&-b)?;
    if diff.is_zero() {
        return Ok(FormEq { equal: true, method: EqMethod::NormalForm, residue: zero });
    }
    let ctx = FormRelationContext::new(chart);
    if ctx.is_empty() {
        return Ok(FormEq { equal: false, method: EqMethod::NormalForm, residue: diff });
    }
    let rewritten = ctx.rewrite(diff.terms());
    if rewritten.is_empty() {
        return Ok(FormEq { equal: true, method: EqMethod::PivotRewrite, residue: zero });
    }
    let mut cleared = rewritten.clone();
    for rule in &ctx.rules {
        let pivot = Poly::var(rule.pivot);
        let scaled = cleared.iter().map(|(bl, c)| (*bl, c * &pivot)).collect();
        cleared = ctx.rewrite(&reduce_all(chart.relations(), scaled));
    }
    if cleared.is_empty() {
        return Ok(FormEq { equal: true, method: EqMethod::Clearing, residue: zero });
    }
    let test = wedge_terms(chart.relations(), &rewritten, &ctx.annihilator());
    if test.is_empty() {
        return Ok(FormEq { equal: true, method: EqMethod::Annihilator, residue: zero });
    }
    Ok(FormEq { equal: false, method: EqMethod::Annihilator, residue: DiffForm::from_terms(chart, rewritten) })
}
