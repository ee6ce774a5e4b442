//! The dimension-7 identity systems for tautness and for tautness together
//! with roundness.

use serde::Serialize;

use super::{PSphereSpec, ResidueEntry};
use crate::algebra::{rat, Poly};
use crate::error::{Error, Result};
use crate::exterior::DiffForm;

#[derive(Clone, Debug, Serialize)]
pub struct Dim7Report {
    pub equations: Vec<ResidueEntry>,
    pub holds: bool,
}

struct Pair {
    w1: DiffForm,
    w2: DiffForm,
    d1: DiffForm,
    d2: DiffForm,
}

fn pair(spec: &PSphereSpec) -> Result<Pair> {
    if spec.p() != 1 {
        return Err(Error::Precondition(format!("expected a circle (two generators), got {}", spec.generators.len())));
    }
    if spec.chart.manifold_dim() != 7 {
        return Err(Error::Precondition(format!("expected dimension 7, got {}", spec.chart.manifold_dim())));
    }
    let (w1, w2) = (spec.generators[0].clone(), spec.generators[1].clone());
    Ok(Pair { d1: w1.ext_d(), d2: w2.ext_d(), w1, w2 })
}

fn w(forms: &[&DiffForm]) -> Result<DiffForm> {
    let mut acc = forms[0].clone();
    for f in &forms[1..] {
        acc = acc.wedge(f)?;
    }
    Ok(acc)
}

fn times(k: i64, f: &DiffForm) -> DiffForm {
    f.scale(&Poly::constant(rat(k)))
}

fn report(equations: Vec<ResidueEntry>) -> Dim7Report {
    let holds = equations.iter().all(|e| e.zero);
    Dim7Report { equations, holds }
}

/// The four 7-form identities equivalent to tautness of a circle in dimension 7.
pub fn taut7_check(spec: &PSphereSpec) -> Result<Dim7Report> {
    let Pair { w1, w2, d1, d2 } = pair(spec)?;
    let d1_2 = d1.wedge(&d1)?;
    let d2_2 = d2.wedge(&d2)?;
    let a = w(&[&w1, &d1_2, &d1])?;
    let b = w(&[&w2, &d2_2, &d2])?;
    let e2 = &(&times(3, &w(&[&w2, &d2, &d1_2])?) + &times(3, &w(&[&w1, &d1, &d2_2])?)) - &times(2, &a);
    let e3 = &w(&[&w1, &d2_2, &d2])? + &times(3, &w(&[&w2, &d1, &d2_2])?);
    let e4 = &w(&[&w2, &d1_2, &d1])? + &times(3, &w(&[&w1, &d2, &d1_2])?);
    Ok(report(vec![
        ResidueEntry::of_form("ω1∧(dω1)^3 - ω2∧(dω2)^3", &(&a - &b))?,
        ResidueEntry::of_form("3 ω2∧dω2∧(dω1)^2 + 3 ω1∧dω1∧(dω2)^2 - 2 ω1∧(dω1)^3", &e2)?,
        ResidueEntry::of_form("ω1∧(dω2)^3 + 3 ω2∧dω1∧(dω2)^2", &e3)?,
        ResidueEntry::of_form("ω2∧(dω1)^3 + 3 ω1∧dω2∧(dω1)^2", &e4)?,
    ]))
}

/// The two 6-form identities necessary for a circle that is both taut and round.
pub fn roundtaut7_necessary(spec: &PSphereSpec) -> Result<Dim7Report> {
    let Pair { d1, d2, .. } = pair(spec)?;
    let d1_2 = d1.wedge(&d1)?;
    let d2_2 = d2.wedge(&d2)?;
    let e1 = &d1_2.wedge(&d1)? - &times(3, &d1.wedge(&d2_2)?);
    let e2 = &d2_2.wedge(&d2)? - &times(3, &d2.wedge(&d1_2)?);
    Ok(report(vec![ResidueEntry::of_form("(dω1)^3 - 3 dω1∧(dω2)^2", &e1)?, ResidueEntry::of_form("(dω2)^3 - 3 dω2∧(dω1)^2", &e2)?]))
}
