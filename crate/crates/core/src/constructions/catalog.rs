//! Named example specs with their expected properties.

use std::sync::Arc;

use serde::Serialize;

use super::bundle::{t3_circle, torus_bundle_circle};
use super::hurwitz::{hurwitz_radon_family, matrix_contact_sphere};
use crate::algebra::{parse_rational, Poly, Var};
use crate::contact::{contact_check, Certificate, Outcome, SampleConfig};
use crate::error::{Error, Result};
use crate::exterior::{coordinate_chart, Chart, DiffForm};
use crate::psphere::{psphere_check, round_check, taut_check, PSphereReport, PSphereSpec, RoundnessReport, TautnessReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Every generator is a contact form.
    Contact,
    /// Every normalized combination is a contact form.
    Psphere,
    Taut,
    Round,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Contact => "contact",
            Property::Psphere => "psphere",
            Property::Taut => "taut",
            Property::Round => "round",
        }
    }
}

/// Where an expectation comes from: a statement in the literature (quoted)
/// or a computation recorded alongside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "basis", content = "note", rename_all = "snake_case")]
pub enum Basis {
    Stated(String),
    Computed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub property: Property,
    pub holds: bool,
    #[serde(flatten)]
    pub basis: Basis,
}

#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub name: String,
    pub summary: String,
    pub spec: PSphereSpec,
    pub expectations: Vec<Expectation>,
}

fn stated(property: Property, holds: bool, quote: &str) -> Expectation {
    Expectation { property, holds, basis: Basis::Stated(quote.into()) }
}

fn computed(property: Property, holds: bool, note: &str) -> Expectation {
    Expectation { property, holds, basis: Basis::Computed(note.into()) }
}

const ROUND_IFF_TAUT: &str = "in dimension 3 a contact circle or sphere is taut if and only if it is round";

fn v(i: u32) -> Poly {
    Poly::var(Var(i))
}

fn linear(chart: &Arc<Chart>, coeffs: Vec<Poly>) -> DiffForm {
    coeffs.iter().enumerate().fold(DiffForm::zero(chart), |acc, (g, c)| &acc + &DiffForm::generator(chart, g).scale(c))
}

/// `⟨q i, dq⟩, ⟨q j, dq⟩, ⟨q k, dq⟩` on `S³`.
pub fn s3_quaternionic() -> Result<PSphereSpec> {
    let c = coordinate_chart("s3", &["q1", "q2", "q3", "q4"], true)?;
    let (q1, q2, q3, q4) = (v(0), v(1), v(2), v(3));
    let a = linear(&c, vec![-q2.clone(), q1.clone(), q4.clone(), -q3.clone()]);
    let b = linear(&c, vec![-q3.clone(), -q4.clone(), q1.clone(), q2.clone()]);
    let g = linear(&c, vec![-q4, q3, -q2, q1]);
    PSphereSpec::new("s3-quaternionic", vec![a, b, g])
}

/// `⟨i q, dq⟩, ⟨j q, dq⟩, ⟨k q, dq⟩` on `S³`.
pub fn s3_hat() -> Result<PSphereSpec> {
    let c = coordinate_chart("s3", &["q1", "q2", "q3", "q4"], true)?;
    let (q1, q2, q3, q4) = (v(0), v(1), v(2), v(3));
    let i = linear(&c, vec![-q2.clone(), q1.clone(), -q4.clone(), q3.clone()]);
    let j = linear(&c, vec![-q3.clone(), q4.clone(), q1.clone(), -q2.clone()]);
    let k = linear(&c, vec![-q4, -q3, q2, q1]);
    PSphereSpec::new("s3-hat", vec![i, j, k])
}

fn r7_pair(name: &str, second: Vec<Poly>) -> Result<PSphereSpec> {
    let c = coordinate_chart("r7", &["x1", "x2", "x3", "x4", "x5", "x6", "x7"], false)?;
    let z = Poly::zero;
    let w1 = linear(&c, vec![z(), v(0), z(), v(2), z(), v(4), Poly::one()]);
    PSphereSpec::new(name, vec![w1, linear(&c, second)])
}

/// `ω1 = x1dx2 + x3dx4 + x5dx6 + dx7`,
/// `ω2 = -(x5 + x6)dx3 - x5dx4 + (x1 + x3)dx6 + x1dx7 - dx2`.
pub fn r7_round_not_taut() -> Result<PSphereSpec> {
    let z = Poly::zero;
    r7_pair("r7-round-not-taut", vec![z(), -Poly::one(), -(&v(4) + &v(5)), -v(4), z(), &v(0) + &v(2), v(0)])
}

/// `ω1` as above, `ω2 = x5dx4 - x3dx6 + (x1 + x3)dx7 - dx2`.
pub fn r7_taut_not_round() -> Result<PSphereSpec> {
    let z = Poly::zero;
    r7_pair("r7-taut-not-round", vec![z(), -Poly::one(), z(), v(4), z(), -v(2), &v(0) + &v(2)])
}

/// `x1dx2 + x3dx4 + dx5` and `-x1dx2 + x3dx4 + dx5` on `R⁵`.
pub fn r5_pair() -> Result<PSphereSpec> {
    let c = coordinate_chart("r5", &["x1", "x2", "x3", "x4", "x5"], false)?;
    let z = Poly::zero;
    let w1 = linear(&c, vec![z(), v(0), z(), v(2), Poly::one()]);
    let w2 = linear(&c, vec![z(), -v(0), z(), v(2), Poly::one()]);
    PSphereSpec::new("r5-pair", vec![w1, w2])
}

fn quaternion_entry(name: &str, spec: PSphereSpec, summary: &str) -> ExampleEntry {
    ExampleEntry {
        name: name.into(),
        summary: summary.into(),
        spec,
        expectations: vec![
            stated(Property::Contact, true, "induce three contact forms"),
            stated(Property::Psphere, true, "contact sphere"),
            stated(Property::Taut, true, "ω̃∧dω̃∧(q1dq1 + ... + q4dq4) = dq1∧dq2∧dq3∧dq4"),
            computed(Property::Round, true, ROUND_IFF_TAUT),
        ],
    }
}

fn t3_entry(n: i64) -> Result<ExampleEntry> {
    Ok(ExampleEntry {
        name: format!("t3-circle({n})"),
        summary: format!("cos/sin({n}θ1) pencil on T³; volume coefficient -{n}"),
        spec: t3_circle(n)?,
        expectations: vec![
            stated(Property::Contact, true, "ω∧dω = -n dθ1∧dθ2∧dθ3"),
            stated(Property::Psphere, true, "generate a taut contact circle"),
            stated(Property::Taut, true, "generate a taut contact circle"),
            computed(Property::Round, true, ROUND_IFF_TAUT),
        ],
    })
}

fn bundle_entry(f: &str, k: &str) -> Result<ExampleEntry> {
    let (fr, kr) = (parse_rational(f)?, parse_rational(k)?);
    let spec = torus_bundle_circle(&fr, &kr)?;
    let flat = num_traits::Zero::is_zero(&fr);
    Ok(ExampleEntry {
        name: format!("t2-bundle-circle({f},{k})"),
        summary: format!("invariant circle on a T² bundle with dα = {f} dθ1∧dθ2, scale {k}"),
        spec,
        expectations: vec![
            computed(Property::Contact, true, "ω1∧dω1 = -k dθ1∧dθ2∧α"),
            stated(Property::Psphere, true, "generate an invariant contact circle"),
            computed(Property::Taut, flat, "volume coefficient k(k f u² - 1) depends on λ unless f = 0"),
            computed(Property::Round, flat, ROUND_IFF_TAUT),
        ],
    })
}

fn hr_entry(m: usize) -> Result<ExampleEntry> {
    let family = hurwitz_radon_family(m)?;
    let spec = matrix_contact_sphere(&family)?;
    let p = family.len().saturating_sub(1);
    Ok(ExampleEntry {
        name: format!("hr-sphere({m})"),
        summary: format!("⟨A_i x, dx⟩ for a Hurwitz–Radon family of {} matrices on S^{}", family.len(), m - 1),
        spec,
        expectations: vec![
            stated(Property::Contact, true, "(ω̃_i)_x = ⟨A_i x, dx⟩ induce contact forms"),
            stated(Property::Psphere, true, &format!("there exists a contact {p}-sphere")),
            stated(Property::Taut, true, "taut contact p-sphere"),
            stated(Property::Round, true, "round contact p-sphere"),
        ],
    })
}

fn fixed_entries() -> Result<Vec<ExampleEntry>> {
    Ok(vec![
        quaternion_entry("s3-quaternionic", s3_quaternionic()?, "⟨qi,dq⟩, ⟨qj,dq⟩, ⟨qk,dq⟩ on S³"),
        quaternion_entry("s3-hat", s3_hat()?, "⟨iq,dq⟩, ⟨jq,dq⟩, ⟨kq,dq⟩ on S³"),
        ExampleEntry {
            name: "r7-round-not-taut".into(),
            summary: "first R⁷ pair: round, volume depends on λ".into(),
            spec: r7_round_not_taut()?,
            expectations: vec![
                computed(Property::Contact, true, "constant volume coefficients 6 and 12"),
                computed(Property::Psphere, true, "volume coefficient 12 - 6λ1² on the unit circle"),
                stated(Property::Taut, false, "is round and not taut"),
                stated(Property::Round, true, "is round and not taut"),
            ],
        },
        ExampleEntry {
            name: "r7-taut-not-round".into(),
            summary: "second R⁷ pair: taut, Reeb fields not linear in λ".into(),
            spec: r7_taut_not_round()?,
            expectations: vec![
                computed(Property::Contact, true, "constant volume coefficient 6"),
                stated(Property::Psphere, true, "taut contact circle"),
                stated(Property::Taut, true, "taut contact circle"),
                stated(Property::Round, false, "is not round"),
            ],
        },
        ExampleEntry {
            name: "r5-pair".into(),
            summary: "x1dx2 + x3dx4 + dx5 and -x1dx2 + x3dx4 + dx5: both contact, no contact circle in dimension 5".into(),
            spec: r5_pair()?,
            expectations: vec![
                computed(Property::Contact, true, "each form is a Darboux form up to sign"),
                stated(Property::Psphere, false, "on manifolds of dimension 4n+1, contact circles do not exist"),
            ],
        },
    ])
}

/// Every catalog entry, in a fixed order.
pub fn example_catalog() -> Result<Vec<ExampleEntry>> {
    let mut out = fixed_entries()?;
    for n in [1, 2, 5] {
        out.push(t3_entry(n)?);
    }
    for (f, k) in [("-1", "1"), ("-2", "3"), ("0", "1")] {
        out.push(bundle_entry(f, k)?);
    }
    for m in [4, 8] {
        out.push(hr_entry(m)?);
    }
    Ok(out)
}

fn args<'a>(name: &'a str, prefix: &str) -> Option<Vec<&'a str>> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(rest.split(',').map(str::trim).collect())
}

/// Looks up a catalog name. Parameterized names accept any admissible
/// arguments: `t3-circle(n)`, `t2-bundle-circle(f,k)`, `hr-sphere(m)`.
pub fn lookup(name: &str) -> Result<ExampleEntry> {
    let bad = |why: String| Error::Input(format!("{name}: {why}"));
    if let Some(a) = args(name, "t3-circle") {
        let [n] = a[..] else { return Err(bad("expected one argument".into())) };
        return t3_entry(n.parse().map_err(|e| bad(format!("{e}")))?);
    }
    if let Some(a) = args(name, "t2-bundle-circle") {
        let [f, k] = a[..] else { return Err(bad("expected two arguments".into())) };
        return bundle_entry(f, k);
    }
    if let Some(a) = args(name, "hr-sphere") {
        let [m] = a[..] else { return Err(bad("expected one argument".into())) };
        return hr_entry(m.parse().map_err(|e| bad(format!("{e}")))?);
    }
    fixed_entries()?.into_iter().find(|e| e.name == name).ok_or_else(|| Error::NotFound(format!("no catalog entry named `{name}`")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    pub property: Property,
    pub expected: bool,
    pub observed: bool,
    /// Outcome of the underlying check; an inconclusive certificate never
    /// counts as agreement.
    pub outcome: Outcome,
    pub agrees: bool,
    #[serde(flatten)]
    pub basis: Basis,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub dimension: usize,
    pub p: usize,
    pub results: Vec<ExpectationResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generator_certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psphere: Option<PSphereReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taut: Option<TautnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<RoundnessReport>,
    pub all_agree: bool,
}

fn certificate_verdict(c: &Certificate) -> (bool, Outcome) {
    let o = c.outcome();
    (o == Outcome::Certified, o)
}

/// Runs the checker behind each expectation of `entry`.
pub fn verify_entry(entry: &ExampleEntry, cfg: &SampleConfig) -> Result<EntryReport> {
    let spec = &entry.spec;
    let mut report = EntryReport {
        name: entry.name.clone(),
        dimension: spec.chart.manifold_dim(),
        p: spec.p(),
        results: Vec::new(),
        generator_certificates: Vec::new(),
        psphere: None,
        taut: None,
        round: None,
        all_agree: true,
    };
    for e in &entry.expectations {
        let (observed, outcome) = match e.property {
            Property::Contact => {
                let mut all = Outcome::Certified;
                for (i, g) in spec.generators.iter().enumerate() {
                    let (_, cert) = contact_check(g, &spec.generator_hints(i), cfg)?;
                    all = all.combine(cert.outcome());
                    report.generator_certificates.push(cert);
                }
                (all == Outcome::Certified, all)
            }
            Property::Psphere => {
                let r = psphere_check(spec, cfg)?;
                let v = certificate_verdict(&r.certificate);
                report.psphere = Some(r);
                v
            }
            Property::Taut => {
                let r = taut_check(spec)?;
                let v = r.taut;
                report.taut = Some(r);
                (v, if v { Outcome::Certified } else { Outcome::Refuted })
            }
            Property::Round => {
                let r = round_check(spec)?;
                let v = r.round;
                report.round = Some(r);
                (v, if v { Outcome::Certified } else { Outcome::Refuted })
            }
        };
        let agrees = outcome != Outcome::Inconclusive && observed == e.holds;
        report.all_agree &= agrees;
        report.results.push(ExpectationResult {
            property: e.property,
            expected: e.holds,
            observed,
            outcome,
            agrees,
            basis: e.basis.clone(),
        });
    }
    Ok(report)
}
