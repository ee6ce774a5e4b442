//! Pointwise evaluation of forms on frames.

use std::collections::HashMap;

use num_traits::Zero;

use super::form::{DiffForm, VectorField};
use crate::algebra::{determinant, Poly, Rational, Var};
use crate::error::{Error, Result};

/// Evaluates a `k`-form on `k` frame vectors at a point. Variables missing
/// from `point` stay symbolic; every relation group must be either fully
/// assigned (and satisfied exactly) or fully unassigned.
pub fn evaluate_partial(form: &DiffForm, point: &HashMap<Var, Rational>, frame: &[VectorField]) -> Result<Poly> {
    let chart = form.chart();
    if !form.is_homogeneous(frame.len()) {
        return Err(Error::DegreeMismatch { expected: frame.len(), found: form.degree().unwrap_or(0) });
    }
    for group in chart.relations().groups() {
        let assigned = group.vars().iter().filter(|v| point.contains_key(v)).count();
        if assigned == 0 {
            continue;
        }
        if assigned < group.vars().len() {
            return Err(Error::Input("point assigns only part of a relation group".into()));
        }
        let value = group.relation_poly().eval(point).expect("group fully assigned");
        if !value.is_zero() {
            let names: Vec<String> = group.vars().iter().map(|&v| chart.var_name(v)).collect();
            return Err(Error::Input(format!("point violates the relation on {}", names.join(", "))));
        }
    }
    let frame_vals: Vec<Vec<Poly>> = frame.iter().map(|v| v.coeffs().iter().map(|c| c.partial_eval(point)).collect()).collect();
    let mut total = Poly::zero();
    for (blade, coeff) in form.terms() {
        let gens: Vec<usize> = blade.gens().collect();
        let m: Vec<Vec<Poly>> = frame_vals.iter().map(|row| gens.iter().map(|&g| row[g].clone()).collect()).collect();
        let det = determinant(&m);
        if det.is_zero() {
            continue;
        }
        total += &(&coeff.partial_eval(point) * &det);
    }
    Ok(chart.relations().reduce(&total))
}

/// Exact value of a `k`-form on `k` frame vectors at a fully specified point.
pub fn evaluate_at(form: &DiffForm, point: &HashMap<Var, Rational>, frame: &[VectorField]) -> Result<Rational> {
    for i in 0..form.chart().num_vars() {
        if !point.contains_key(&Var(i as u32)) {
            return Err(Error::Input(format!("point does not assign `{}`", form.chart().var_name(Var(i as u32)))));
        }
    }
    let p = evaluate_partial(form, point, frame)?;
    p.constant_value().ok_or_else(|| Error::Internal("full evaluation left a symbolic value".into()))
}
