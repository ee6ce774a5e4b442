//! Subcommands and their dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use csl_core::constructions::{
    example_catalog, family_check, hurwitz_radon_family, invariant_nondegeneracy_scan, lookup, rho, verify_entry, EntryReport, Property,
};
use csl_core::contact::{contact_check, reeb_field, Certificate, Outcome, SampleConfig, Status};
use csl_core::exterior::Blade;
use csl_core::psphere::{obstruction_applies, odd_dim_obstruction, psphere_check, reeb_independence_check, round_check, taut_check};
use serde_json::{json, Value};

use crate::dsl::{parse_spec, SpecFile};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "csl", version, about = "Exact verification of contact circles and contact p-spheres")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Random sample points for the last-resort numeric search.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    /// Seed for the sample search (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in examples and their expected properties.
    Catalog,
    /// Check a catalog entry (or all of them) against its expectations.
    Verify { name: Option<String> },
    /// Run checks on a spec file; without --property, its `expect` lines.
    Check {
        file: PathBuf,
        #[arg(long = "property", value_enum)]
        properties: Vec<CheckProperty>,
    },
    /// Reeb field of one named form.
    Reeb {
        file: PathBuf,
        #[arg(long)]
        form: String,
    },
    /// Adams' count ρ(n).
    Rho { n: u64 },
    /// Build and validate a Hurwitz–Radon family of size m.
    Hr {
        m: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Circle-polynomial obstruction in dimension 4n+1.
    Obstruct { file: PathBuf },
    /// Grid search for common zeros of the `scan` functions.
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        density: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckProperty {
    Contact,
    Psphere,
    Taut,
    Round,
    ReebIndep,
}

impl Cli {
    fn config(&self) -> SampleConfig {
        SampleConfig { samples: self.samples, seed: self.seed }
    }
}

fn echo(cmd: &Command) -> (&'static str, Vec<String>) {
    let path = |p: &Path| p.display().to_string();
    match cmd {
        Command::Catalog => ("catalog", vec![]),
        Command::Verify { name } => ("verify", name.iter().cloned().collect()),
        Command::Check { file, properties } => {
            let mut args = vec![path(file)];
            args.extend(
                properties.iter().map(|p| format!("--property={}", p.to_possible_value().expect("no skipped variants").get_name())),
            );
            ("check", args)
        }
        Command::Reeb { file, form } => ("reeb", vec![path(file), format!("--form={form}")]),
        Command::Rho { n } => ("rho", vec![n.to_string()]),
        Command::Hr { m, emit } => {
            ("hr", std::iter::once(m.to_string()).chain(emit.iter().map(|p| format!("--emit={}", path(p)))).collect())
        }
        Command::Obstruct { file } => ("obstruct", vec![path(file)]),
        Command::Scan { file, density } => ("scan", vec![path(file), format!("--density={density}")]),
    }
}

/// Runs one command. Errors end up in the report with exit code 3.
pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let (name, args) = echo(&cli.command);
    let mut report = Report::new(name, args);
    match dispatch(cli, &mut report) {
        Ok(()) => report.finish(),
        Err(e) => report.fail(e),
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn load(file: &Path) -> Result<SpecFile, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_spec(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn describe(cert: &Certificate) -> String {
    match &cert.status {
        Status::CertifiedConstant { value } => format!("certified constant {}", csl_core::algebra::format_rational(value)),
        Status::CertifiedSign { sign, method, .. } => format!("constant sign {sign:?} ({method:?})"),
        Status::Conditional { sign, assumption, .. } => format!("sign {sign:?} assuming {assumption}"),
        Status::Refuted { witness } => format!("refuted by {}", witness_kind(witness)),
        Status::NumericUnrefuted { samples, min_abs } => {
            format!("no zero among {samples} samples (min |value| {}); not a proof", csl_core::algebra::format_rational(min_abs))
        }
    }
}

fn witness_kind(w: &csl_core::contact::Witness) -> &'static str {
    match w {
        csl_core::contact::Witness::ExactZero { .. } => "an exact zero",
        csl_core::contact::Witness::SignChange { .. } => "a sign change",
        csl_core::contact::Witness::CircleZero { .. } => "a zero on the circle of combinations",
    }
}

fn bool_outcome(b: bool) -> Outcome {
    if b {
        Outcome::Certified
    } else {
        Outcome::Refuted
    }
}

fn dispatch(cli: &Cli, report: &mut Report) -> Result<(), String> {
    let cfg = cli.config();
    let err = |e: csl_core::Error| e.to_string();
    match &cli.command {
        Command::Catalog => {
            let entries = example_catalog().map_err(err)?;
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "summary": e.summary,
                        "dimension": e.spec.chart.manifold_dim(),
                        "p": e.spec.p(),
                        "expectations": to_value(&e.expectations),
                    })
                })
                .collect();
            report.data = Some(Value::Array(list));
            let mut text = String::new();
            for e in &entries {
                let props: Vec<String> =
                    e.expectations.iter().map(|x| format!("{}{}", if x.holds { "" } else { "!" }, x.property.name())).collect();
                text += &format!(
                    "{:<24} dim {:<2} p={} {:<30} {}\n",
                    e.name,
                    e.spec.chart.manifold_dim(),
                    e.spec.p(),
                    props.join(" "),
                    e.summary
                );
            }
            report.text = Some(text);
        }
        Command::Verify { name } => {
            let entries = match name {
                Some(n) => vec![lookup(n).map_err(err)?],
                None => example_catalog().map_err(err)?,
            };
            for e in &entries {
                let r = verify_entry(e, &cfg).map_err(err)?;
                push_entry(report, &r);
            }
        }
        Command::Check { file, properties } => {
            let spec_file = load(file)?;
            let spec = spec_file.psphere().map_err(err)?;
            let requested: Vec<(CheckProperty, Option<bool>)> = if properties.is_empty() {
                if spec_file.expectations.is_empty() {
                    return Err("no --property given and the file has no `expect` lines".into());
                }
                spec_file.expectations.iter().map(|(p, holds)| (from_property(*p), Some(*holds))).collect()
            } else {
                properties.iter().map(|p| (*p, None)).collect()
            };
            for (prop, expected) in requested {
                let (observed, outcome, summary, detail) = run_property(&spec_file, &spec, prop, &cfg).map_err(err)?;
                let label = prop.to_possible_value().expect("no skipped variants").get_name().to_string();
                match expected {
                    None => report.push(label, outcome, summary, detail),
                    Some(want) => {
                        let agree = outcome != Outcome::Inconclusive && observed == want;
                        let o = if agree {
                            Outcome::Certified
                        } else if outcome == Outcome::Inconclusive {
                            Outcome::Inconclusive
                        } else {
                            Outcome::Refuted
                        };
                        let seen = if outcome == Outcome::Inconclusive { "undecided".to_string() } else { format!("observed {observed}") };
                        report.push(format!("expect {label} = {want}"), o, format!("{seen}: {summary}"), detail);
                    }
                }
            }
        }
        Command::Reeb { file, form } => {
            let spec_file = load(file)?;
            let omega = spec_file.form(form).ok_or_else(|| format!("no form named `{form}`"))?;
            match reeb_field(omega) {
                Ok(r) => {
                    let text = r.render(&spec_file.chart);
                    let detail = json!({
                        "field": text,
                        "components": r.numerators.components().into_iter().map(|(g, c)| json!([g, c])).collect::<Vec<_>>(),
                        "denominator": spec_file.chart.render_poly(&r.denominator),
                    });
                    report.push(format!("reeb {form}"), Outcome::Certified, text, detail);
                }
                Err(e @ (csl_core::Error::NotContact(_) | csl_core::Error::NotContactOnSphere(_))) => {
                    report.push(format!("reeb {form}"), Outcome::Refuted, e.to_string(), Value::Null);
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Command::Rho { n } => {
            if *n == 0 {
                return Err("rho is defined for n >= 1".into());
            }
            report.data = Some(json!(rho(*n)));
        }
        Command::Hr { m, emit } => {
            let family = hurwitz_radon_family(*m).map_err(err)?;
            family_check(&family).map_err(err)?;
            report.push(
                format!("hurwitz-radon({m})"),
                Outcome::Certified,
                format!("{} matrices: antisymmetric, orthogonal, squares -I, pairwise anticommuting", family.len()),
                json!({"m": m, "count": family.len(), "rho": rho(*m as u64)}),
            );
            if let Some(path) = emit {
                let text = serde_json::to_string(&family).expect("families serialize");
                std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
        Command::Obstruct { file } => {
            let spec = load(file)?.psphere().map_err(err)?;
            if !obstruction_applies(&spec) {
                return Err(format!(
                    "the circle-polynomial obstruction needs p >= 1, dimension ≡ 1 mod 4 and no sphere relation (dimension {}, p = {})",
                    spec.chart.manifold_dim(),
                    spec.p()
                ));
            }
            let r = odd_dim_obstruction(&spec, None, None).map_err(err)?;
            let (outcome, summary) = if r.all_odd && r.verify() {
                (
                    Outcome::Refuted,
                    format!(
                        "circle polynomial {} is odd; zero isolated in τ ∈ [{}, {}]: no contact circle",
                        r.circle_polynomial,
                        csl_core::algebra::format_rational(&r.tau.lo),
                        csl_core::algebra::format_rational(&r.tau.hi)
                    ),
                )
            } else {
                (Outcome::Inconclusive, format!("circle polynomial {} has even-degree terms", r.circle_polynomial))
            };
            report.push("obstruction", outcome, summary, to_value(&r));
        }
        Command::Scan { file, density } => {
            let spec_file = load(file)?;
            if spec_file.scan.is_empty() {
                return Err("the file has no `scan` line".into());
            }
            let functions: Vec<_> =
                spec_file.scan.iter().map(|n| spec_file.form(n).expect("validated by the parser").coefficient(Blade::EMPTY)).collect();
            let r = invariant_nondegeneracy_scan(&spec_file.chart, &functions, *density).map_err(err)?;
            let (outcome, summary) = if r.refuted {
                (Outcome::Refuted, format!("common zero at direction ({})", r.direction.join(", ")))
            } else {
                (Outcome::Inconclusive, format!("minimum {} over the grid; a positive minimum proves nothing", r.minimum))
            };
            report.push("scan", outcome, summary, to_value(&r));
        }
    }
    Ok(())
}

fn from_property(p: Property) -> CheckProperty {
    match p {
        Property::Contact => CheckProperty::Contact,
        Property::Psphere => CheckProperty::Psphere,
        Property::Taut => CheckProperty::Taut,
        Property::Round => CheckProperty::Round,
    }
}

type PropertyResult = (bool, Outcome, String, Value);

fn run_property(
    file: &SpecFile,
    spec: &csl_core::psphere::PSphereSpec,
    prop: CheckProperty,
    cfg: &SampleConfig,
) -> csl_core::Result<PropertyResult> {
    Ok(match prop {
        CheckProperty::Contact => {
            let mut all = Outcome::Certified;
            let mut details = Vec::new();
            let mut parts = Vec::new();
            for (i, (g, name)) in spec.generators.iter().zip(file.family_names()).enumerate() {
                let (vol, cert) = contact_check(g, &spec.generator_hints(i), cfg)?;
                all = all.combine(cert.outcome());
                parts.push(format!("{name}: {}", describe(&cert)));
                details.push(json!({"form": name, "volume": to_value(&vol), "certificate": to_value(&cert)}));
            }
            (all == Outcome::Certified, all, parts.join("; "), Value::Array(details))
        }
        CheckProperty::Psphere => {
            let r = psphere_check(spec, cfg)?;
            let o = r.certificate.outcome();
            (o == Outcome::Certified, o, describe(&r.certificate), to_value(&r))
        }
        CheckProperty::Taut => {
            let r = taut_check(spec)?;
            let summary = if r.taut {
                format!("volume coefficient {} is free of λ", r.coefficient_text)
            } else {
                format!("λ-dependent part {}", r.residual)
            };
            (r.taut, bool_outcome(r.taut), summary, to_value(&r))
        }
        CheckProperty::Round => {
            let r = round_check(spec)?;
            let summary = match &r.first_failure {
                None => "Reeb fields combine linearly".to_string(),
                Some(f) => format!("fails {f}"),
            };
            (r.round, bool_outcome(r.round), summary, to_value(&r))
        }
        CheckProperty::ReebIndep => {
            let r = reeb_independence_check(spec, cfg)?;
            let o = r.certificate.outcome();
            (o == Outcome::Certified, o, format!("Σ minors² = {}: {}", r.minors_sum, describe(&r.certificate)), to_value(&r))
        }
    })
}

fn push_entry(report: &mut Report, r: &EntryReport) {
    for res in &r.results {
        let outcome = if res.agrees {
            Outcome::Certified
        } else if res.outcome == Outcome::Inconclusive {
            Outcome::Inconclusive
        } else {
            Outcome::Refuted
        };
        let detail = match res.property {
            Property::Contact => to_value(&r.generator_certificates),
            Property::Psphere => to_value(&r.psphere),
            Property::Taut => to_value(&r.taut),
            Property::Round => to_value(&r.round),
        };
        let seen = if res.outcome == Outcome::Inconclusive { "undecided".to_string() } else { format!("observed {}", res.observed) };
        let mut summary = format!("expected {}, {seen}", res.expected);
        if let (Property::Psphere, Some(p)) = (res.property, &r.psphere) {
            summary.push_str(&format!(" ({})", describe(&p.certificate)));
        }
        report.push(format!("{}: {}", r.name, res.property.name()), outcome, summary, detail);
    }
}
