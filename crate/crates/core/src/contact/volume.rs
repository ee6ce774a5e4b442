//! Volume coefficients `ω∧(dω)^n` (wedged with `ι_k = Σ x dx` per sphere).

use serde::Serialize;

use super::certificate::{nonvanishing_certificate, BoundHint, Certificate};
use super::sampler::SampleConfig;
use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::exterior::{Blade, DiffForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeReport {
    /// Normal-form `c` with `top form = c · reference_volume`.
    #[serde(skip)]
    pub coefficient: Poly,
    pub coefficient_text: String,
    pub reference_volume: String,
    /// Power of `dω` used.
    pub n: usize,
}

/// `ω ∧ (dω)^n ∧ ι_1 ∧ ... ∧ ι_k`, a top-degree form.
pub fn volume_form(omega: &DiffForm) -> Result<DiffForm> {
    if !omega.is_homogeneous(1) {
        return Err(Error::DegreeMismatch { expected: 1, found: omega.degree().unwrap_or(0) });
    }
    let chart = omega.chart();
    let groups = chart.coordinate_groups();
    let dim = chart.num_gens() - groups.len();
    if dim.is_multiple_of(2) {
        return Err(Error::Input(format!("a contact form needs odd dimension, this chart has dimension {dim}")));
    }
    let n = (dim - 1) / 2;
    // 2-forms commute with everything, so the ι factors may come first.
    let mut top = omega.clone();
    for g in groups {
        top = top.wedge(&DiffForm::from_terms(chart, chart.iota(g)))?;
    }
    let dw = omega.ext_d();
    for _ in 0..n {
        top = top.wedge(&dw)?;
    }
    Ok(top)
}

pub fn volume_coefficient(omega: &DiffForm) -> Result<VolumeReport> {
    let chart = omega.chart();
    let top = volume_form(omega)?;
    let coefficient = top.top_coefficient();
    let n = (chart.manifold_dim() - 1) / 2;
    Ok(VolumeReport {
        coefficient_text: chart.render_poly(&coefficient),
        coefficient,
        reference_volume: top.blade_name(Blade::full(chart.num_gens())),
        n,
    })
}

/// Volume coefficient together with its nonvanishing certificate.
pub fn contact_check(omega: &DiffForm, hints: &[BoundHint], cfg: &SampleConfig) -> Result<(VolumeReport, Certificate)> {
    let report = volume_coefficient(omega)?;
    let cert = nonvanishing_certificate(&report.coefficient, omega.chart(), hints, cfg);
    Ok((report, cert))
}
