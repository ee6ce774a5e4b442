//! p-sphere, tautness, roundness and Reeb independence checks.

use serde::Serialize;

use super::obstruction::{obstruction_applies, odd_dim_obstruction, ObstructionReport};
use super::{PSphereSpec, ResidueEntry};
use crate::algebra::Poly;
use crate::contact::{
    nonvanishing_certificate, reeb_field, volume_coefficient, Certificate, ReebField, SampleConfig, Status, VolumeReport, Witness,
};
use crate::error::{Error, Result};
use crate::exterior::DiffForm;

#[derive(Clone, Debug, Serialize)]
pub struct PSphereReport {
    /// Volume coefficient of `Ω_λ` on the λ-extended chart.
    pub volume: VolumeReport,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
}

/// Certifies that every member `Σ λ_i ω_i` is contact.
pub fn psphere_check(spec: &PSphereSpec, cfg: &SampleConfig) -> Result<PSphereReport> {
    let ext = spec.extension(true)?;
    let volume = volume_coefficient(&ext.omega)?;
    if obstruction_applies(spec) {
        let report = odd_dim_obstruction(spec, None, None)?;
        if report.all_odd {
            let trace = vec![
                format!("dimension {} ≡ 1 mod 4: restricting to the circle through ω1, ω2", spec.chart.manifold_dim()),
                format!("circle polynomial {} has only odd-degree terms", report.circle_polynomial),
                format!(
                    "sign change isolated in τ ∈ [{}, {}]",
                    crate::algebra::format_rational(&report.tau.lo),
                    crate::algebra::format_rational(&report.tau.hi)
                ),
            ];
            let witness = Witness::CircleZero {
                point: report.point.clone(),
                circle_polynomial: report.circle_polynomial.clone(),
                tau: report.tau.clone(),
            };
            let certificate = Certificate { status: Status::Refuted { witness }, trace };
            return Ok(PSphereReport { volume, certificate, obstruction: Some(report) });
        }
    }
    let certificate = nonvanishing_certificate(&volume.coefficient, &ext.chart, &spec.hints, cfg);
    Ok(PSphereReport { volume, certificate, obstruction: None })
}

#[derive(Clone, Debug, Serialize)]
pub struct TautnessReport {
    #[serde(skip)]
    pub coefficient: Poly,
    pub coefficient_text: String,
    pub taut: bool,
    /// The λ-dependent terms of the coefficient.
    pub residual: String,
    /// The two equations `ω1∧dω1 = ω2∧dω2`, `ω1∧dω2 = -ω2∧dω1` (dimension 3, p = 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<Vec<ResidueEntry>>,
}

/// Taut iff the normal form of the `Ω_λ` volume coefficient is free of λ.
pub fn taut_check(spec: &PSphereSpec) -> Result<TautnessReport> {
    let ext = spec.extension(true)?;
    let coefficient = volume_coefficient(&ext.omega)?.coefficient;
    let residual = Poly::from_terms(
        coefficient.terms().filter(|(m, _)| m.pairs().iter().any(|(v, _)| ext.lambdas.contains(v))).map(|(m, c)| (m.clone(), c.clone())),
    );
    let cross_check = if spec.chart.manifold_dim() == 3 && spec.p() == 1 {
        let (w1, w2) = (&spec.generators[0], &spec.generators[1]);
        let (d1, d2) = (w1.ext_d(), w2.ext_d());
        Some(vec![
            ResidueEntry::of_form("ω1∧dω1 - ω2∧dω2", &(&w1.wedge(&d1)? - &w2.wedge(&d2)?))?,
            ResidueEntry::of_form("ω1∧dω2 + ω2∧dω1", &(&w1.wedge(&d2)? + &w2.wedge(&d1)?))?,
        ])
    } else {
        None
    };
    Ok(TautnessReport {
        coefficient_text: ext.chart.render_poly(&coefficient),
        taut: residual.is_zero(),
        residual: ext.chart.render_poly(&residual),
        coefficient,
        cross_check,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundnessReport {
    pub reeb_fields: Vec<String>,
    /// `ω_i(R_j) + ω_j(R_i)` for `i < j`, cleared of denominators.
    pub condition_i: Vec<ResidueEntry>,
    /// `R_i⌟dω_j + R_j⌟dω_i` for `i <= j`, cleared of denominators.
    pub condition_ii: Vec<ResidueEntry>,
    pub round: bool,
    pub first_failure: Option<String>,
}

pub fn reeb_fields(spec: &PSphereSpec) -> Result<Vec<ReebField>> {
    spec.generators.iter().map(reeb_field).collect()
}

/// The pairwise criteria for `R_λ = Σ λ_i R_i`.
pub fn round_check(spec: &PSphereSpec) -> Result<RoundnessReport> {
    let chart = &spec.chart;
    let reebs = reeb_fields(spec)?;
    let dws: Vec<DiffForm> = spec.generators.iter().map(DiffForm::ext_d).collect();
    let k = spec.generators.len();
    let mut condition_i = Vec::new();
    let mut condition_ii = Vec::new();
    for i in 0..k {
        for j in i..k {
            let (ri, rj) = (&reebs[i], &reebs[j]);
            if i != j {
                let p = &(&spec.generators[i].apply(&rj.numerators)? * &ri.denominator)
                    + &(&spec.generators[j].apply(&ri.numerators)? * &rj.denominator);
                condition_i.push(ResidueEntry::of_poly(format!("(i) ω{}(R{}) + ω{}(R{})", i + 1, j + 1, j + 1, i + 1), chart, &p));
            }
            let form = &dws[i].contract(&rj.numerators)?.scale(&ri.denominator) + &dws[j].contract(&ri.numerators)?.scale(&rj.denominator);
            condition_ii.push(ResidueEntry::of_form(format!("(ii) R{}⌟dω{} + R{}⌟dω{}", j + 1, i + 1, i + 1, j + 1), &form)?);
        }
    }
    let first_failure = condition_i.iter().chain(&condition_ii).find(|e| !e.zero).map(|e| e.label.clone());
    if let Some(bad) = condition_ii.iter().zip(diagonal_indices(k)).find(|(e, diag)| *diag && !e.zero) {
        return Err(Error::Internal(format!("Reeb field fails {}", bad.0.label)));
    }
    Ok(RoundnessReport {
        reeb_fields: reebs.iter().map(|r| r.render(chart)).collect(),
        round: first_failure.is_none(),
        first_failure,
        condition_i,
        condition_ii,
    })
}

fn diagonal_indices(k: usize) -> Vec<bool> {
    (0..k).flat_map(|i| (i..k).map(move |j| i == j)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub reeb_fields: Vec<String>,
    /// Sum of squares of the 2×2 minors of the numerator matrix.
    pub minors_sum: String,
    pub certificate: Certificate,
}

/// Checks that the Reeb fields `R_1, R_2` of a contact circle are everywhere linearly independent.
pub fn reeb_independence_check(spec: &PSphereSpec, cfg: &SampleConfig) -> Result<IndependenceReport> {
    if spec.p() != 1 {
        return Err(Error::Precondition(format!("independence is checked for circles (p = 1), got p = {}", spec.p())));
    }
    let chart = &spec.chart;
    let reebs = reeb_fields(spec)?;
    let (a, b) = (reebs[0].numerators.coeffs(), reebs[1].numerators.coeffs());
    let mut sum = Poly::zero();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let minor = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            sum += &(&minor * &minor);
        }
    }
    let sum = chart.relations().reduce(&sum);
    let certificate = nonvanishing_certificate(&sum, chart, &[], cfg);
    Ok(IndependenceReport {
        reeb_fields: reebs.iter().map(|r| r.render(chart)).collect(),
        minors_sum: chart.render_poly(&sum),
        certificate,
    })
}

/// `Σ λ_i R_i` and the Reeb field of `Σ λ_i ω_i` at fixed rational λ,
/// for the linearity property of round spheres.
pub fn reeb_linearity(spec: &PSphereSpec, lambda: &[crate::algebra::Rational]) -> Result<bool> {
    let reebs = reeb_fields(spec)?;
    let chart = &spec.chart;
    let mut omega = DiffForm::zero(chart);
    for (g, l) in spec.generators.iter().zip(lambda) {
        omega = omega.try_add(&g.scale(&Poly::constant(l.clone())))?;
    }
    let r = reeb_field(&omega)?;
    // Compare r.N / r.D with Σ λ_i N_i / D_i componentwise.
    let n = chart.num_gens();
    let rel = chart.relations();
    for g in 0..n {
        let mut lhs = Poly::zero();
        let mut den = Poly::one();
        for (ri, l) in reebs.iter().zip(lambda) {
            lhs = &(&lhs * &ri.denominator) + &(&ri.numerators.coeffs()[g] * &den).scale(l);
            den = &den * &ri.denominator;
        }
        let diff = &(&lhs * &r.denominator) - &(&r.numerators.coeffs()[g] * &den);
        if !rel.reduce(&diff).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
