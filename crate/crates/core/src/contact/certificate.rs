//! Nonvanishing certificates for polynomial volume coefficients.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::sampler::{base_point, relation_points, SampleConfig};
use crate::algebra::{
    format_rational, parse_rational, sturm_sign_on_interval, Interval, Monomial, Poly, Rational, Relations, SturmVerdict, Var,
};
use crate::exterior::Chart;

/// A point given by variable name.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NamedPoint(pub BTreeMap<String, Rational>);

impl NamedPoint {
    pub fn from_vars(chart: &Chart, point: &HashMap<Var, Rational>) -> Self {
        NamedPoint(point.iter().map(|(v, x)| (chart.var_name(*v), x.clone())).collect())
    }

    /// Resolves names on `chart`; unknown names are an error.
    pub fn to_vars(&self, chart: &Chart) -> crate::Result<HashMap<Var, Rational>> {
        self.0
            .iter()
            .map(|(n, x)| {
                chart.var(n).map(|v| (v, x.clone())).ok_or_else(|| crate::Error::Input(format!("unknown variable `{n}` in point")))
            })
            .collect()
    }
}

impl Serialize for NamedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<&str, String> = self.0.iter().map(|(k, v)| (k.as_str(), format_rational(v))).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NamedPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        m.into_iter()
            .map(|(k, v)| parse_rational(&v).map(|r| (k, r)).map_err(serde::de::Error::custom))
            .collect::<Result<_, _>>()
            .map(NamedPoint)
    }
}

mod rational_str {
    pub use crate::algebra::rational::serde_rational::{deserialize, serialize};
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(r: &Rational) -> Option<Sign> {
        if r.is_positive() {
            Some(Sign::Positive)
        } else if r.is_negative() {
            Some(Sign::Negative)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMethod {
    CoefficientBound,
    Sturm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundData {
    /// `c = K + N` with every monomial of `N` bounded by 1 on the domain.
    Coefficient {
        #[serde(with = "rational_str")]
        constant: Rational,
        #[serde(with = "rational_str")]
        perturbation: Rational,
    },
    /// `c = q(u)` with `u` confined to `[lo, hi]`.
    Hint {
        hint: String,
        auxiliary: String,
        #[serde(with = "rational_str")]
        lo: Rational,
        #[serde(with = "rational_str")]
        hi: Rational,
        /// `q` written in the hint name.
        reduced: String,
        /// Coefficients of `q`, lowest degree first.
        coefficients: Vec<String>,
        justification: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The coefficient vanishes exactly at `point`.
    ExactZero { point: NamedPoint },
    /// Opposite signs at two points of a connected domain.
    SignChange {
        positive: NamedPoint,
        negative: NamedPoint,
        #[serde(with = "rational_str")]
        value_positive: Rational,
        #[serde(with = "rational_str")]
        value_negative: Rational,
    },
    /// The restricted circle polynomial changes sign inside `tau`, where
    /// `λ = ((1 - τ²)/(1 + τ²), 2τ/(1 + τ²))`. A degenerate interval is an exact zero.
    CircleZero { point: NamedPoint, circle_polynomial: String, tau: Interval },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    CertifiedConstant {
        #[serde(with = "rational_str")]
        value: Rational,
    },
    CertifiedSign {
        sign: Sign,
        method: SignMethod,
        bound: BoundData,
    },
    /// Sign proved under an assumption the engine could not check.
    Conditional {
        sign: Sign,
        assumption: String,
        bound: BoundData,
    },
    Refuted {
        witness: Witness,
    },
    NumericUnrefuted {
        samples: usize,
        #[serde(with = "rational_str")]
        min_abs: Rational,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Certified,
    Refuted,
    Inconclusive,
}

impl Outcome {
    /// Process exit code for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Certified => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }

    /// The weaker of two outcomes: refutation dominates, then inconclusive.
    pub fn combine(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Certified,
        }
    }
}

impl Status {
    pub fn outcome(&self) -> Outcome {
        match self {
            Status::CertifiedConstant { .. } | Status::CertifiedSign { .. } => Outcome::Certified,
            Status::Refuted { .. } => Outcome::Refuted,
            Status::Conditional { .. } | Status::NumericUnrefuted { .. } => Outcome::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: Status,
    pub trace: Vec<String>,
}

impl Certificate {
    pub fn outcome(&self) -> Outcome {
        self.status.outcome()
    }
}

/// Claimed range `lo <= u <= hi` of an auxiliary polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundHint {
    pub name: String,
    pub auxiliary: Poly,
    pub lo: Rational,
    pub hi: Rational,
    /// Accept the range without proof; signs proved with it are `Conditional`.
    pub assumed: bool,
}

/// Proves `|u| <= B` with `B² <= min(lo², hi²)` and `lo <= 0 <= hi`.
/// Returns the justification, or the reason the bound is not established.
pub fn verify_hint(hint: &BoundHint, chart: &Chart) -> Result<String, String> {
    if hint.lo >= hint.hi {
        return Err("empty range".into());
    }
    if hint.lo.is_positive() || hint.hi.is_negative() {
        return Err("range does not contain 0; only symmetric norm bounds are supported".into());
    }
    let rel = chart.relations();
    let u = rel.reduce(&hint.auxiliary);
    if u.is_zero() {
        return Ok("auxiliary is identically zero".into());
    }
    let limit = (&hint.lo * &hint.lo).min(&hint.hi * &hint.hi);
    let group_index = |v: Var| rel.groups().iter().position(|g| g.contains(v));
    let names = |gi: usize| rel.groups()[gi].vars().iter().map(|&v| chart.var_name(v)).collect::<Vec<_>>().join(", ");

    if u.terms().all(|(m, _)| m.degree() == 1) {
        let groups: Vec<Option<usize>> = u.terms().map(|(m, _)| group_index(m.pairs()[0].0)).collect();
        let Some(g) = groups[0] else {
            return Err("linear auxiliary involves an unconstrained variable".into());
        };
        if groups.iter().any(|x| *x != Some(g)) {
            return Err("linear auxiliary spans several groups".into());
        }
        let b2: Rational = u.terms().map(|(_, c)| c * c).sum();
        return if b2 <= limit {
            Ok(format!("Cauchy-Schwarz on the unit group {{{}}}: u² <= {}", names(g), format_rational(&b2)))
        } else {
            Err(format!("Cauchy-Schwarz only gives u² <= {}", format_rational(&b2)))
        };
    }

    if u.terms().all(|(m, _)| m.degree() == 2 && m.pairs().len() == 2) {
        let mut pair: Option<(usize, usize)> = None;
        let mut entries: Vec<(Var, Var, Rational)> = Vec::new();
        for (m, c) in u.terms() {
            let (a, b) = (m.pairs()[0].0, m.pairs()[1].0);
            let (Some(ga), Some(gb)) = (group_index(a), group_index(b)) else {
                return Err("bilinear auxiliary involves an unconstrained variable".into());
            };
            if ga == gb {
                return Err("bilinear auxiliary pairs a group with itself".into());
            }
            let key = (ga.min(gb), ga.max(gb));
            if pair.is_some_and(|p| p != key) {
                return Err("bilinear auxiliary spans more than two groups".into());
            }
            pair = Some(key);
            let (row, col) = if ga < gb { (a, b) } else { (b, a) };
            entries.push((row, col, c.abs()));
        }
        let (g1, g2) = pair.expect("nonzero auxiliary");
        let mut rows: BTreeMap<Var, Rational> = BTreeMap::new();
        let mut cols: BTreeMap<Var, Rational> = BTreeMap::new();
        for (r, c, a) in &entries {
            *rows.entry(*r).or_insert_with(Rational::zero) += a;
            *cols.entry(*c).or_insert_with(Rational::zero) += a;
        }
        let b2 = rows.values().max().unwrap() * cols.values().max().unwrap();
        return if b2 <= limit {
            Ok(format!(
                "Cauchy-Schwarz on the unit groups {{{}}} and {{{}}} with the Schur bound: u² <= {}",
                names(g1),
                names(g2),
                format_rational(&b2)
            ))
        } else {
            Err(format!("Schur bound only gives u² <= {}", format_rational(&b2)))
        };
    }
    Err("auxiliary is neither a linear form on one unit group nor a bilinear pairing of two".into())
}

/// Coefficients of `q` with `c ≡ q(u)` modulo the relations, if any.
pub fn express_in(c: &Poly, u: &Poly, rel: &Relations) -> Option<Vec<Rational>> {
    let u = rel.reduce(u);
    let du = u.total_degree();
    if du == 0 {
        return None;
    }
    let top = (c.total_degree() / du + 1) as usize;
    let mut powers = vec![Poly::one()];
    for j in 1..=top {
        powers.push(rel.reduce(&(&powers[j - 1] * &u)));
    }
    let mut monomials: Vec<Monomial> = c.terms().map(|(m, _)| m.clone()).collect();
    for p in &powers {
        monomials.extend(p.terms().map(|(m, _)| m.clone()));
    }
    monomials.sort();
    monomials.dedup();
    let rows: Vec<Vec<Rational>> = monomials.iter().map(|m| powers.iter().map(|p| p.coefficient(m)).collect()).collect();
    let rhs: Vec<Rational> = monomials.iter().map(|m| c.coefficient(m)).collect();
    let mut q = crate::algebra::solve_rational(&rows, &rhs)?;
    while q.last().is_some_and(Zero::is_zero) {
        q.pop();
    }
    Some(q)
}

fn render_univariate(q: &[Rational], name: &str) -> String {
    let p = Poly::from_terms(q.iter().enumerate().map(|(i, c)| (Monomial::var_pow(Var(0), i as u32), c.clone())));
    p.render(&|_| name.to_string())
}

/// Runs the certificate ladder on a volume coefficient: exact constant,
/// coefficient bound, hint-driven Sturm sign, then exact sampling.
pub fn nonvanishing_certificate(c: &Poly, chart: &Chart, hints: &[BoundHint], cfg: &SampleConfig) -> Certificate {
    let rel = chart.relations();
    let c = rel.reduce(c);
    let mut trace = vec![format!("coefficient (normal form): {}", chart.render_poly(&c))];

    if c.is_zero() {
        trace.push("coefficient is identically zero".into());
        let point = NamedPoint::from_vars(chart, &base_point(rel));
        return Certificate { status: Status::Refuted { witness: Witness::ExactZero { point } }, trace };
    }
    if let Some(value) = c.constant_value() {
        trace.push(format!("nonzero constant {}", format_rational(&value)));
        return Certificate { status: Status::CertifiedConstant { value }, trace };
    }

    let constant = c.constant_term();
    let perturbation = c.nonconstant_abs_sum();
    let confined = c.vars().iter().all(|&v| rel.group_of(v).is_some());
    if confined && perturbation < constant.abs() {
        let sign = Sign::of(&constant).expect("nonzero");
        trace.push(format!(
            "all variables lie in unit groups; |nonconstant part| <= {} < |{}|",
            format_rational(&perturbation),
            format_rational(&constant)
        ));
        let bound = BoundData::Coefficient { constant, perturbation };
        return Certificate { status: Status::CertifiedSign { sign, method: SignMethod::CoefficientBound, bound }, trace };
    } else if confined {
        trace.push(format!("coefficient bound inconclusive: {} >= |{}|", format_rational(&perturbation), format_rational(&constant)));
    } else {
        trace.push("coefficient bound skipped: unconstrained variables present".into());
    }

    for hint in hints {
        let verified = verify_hint(hint, chart);
        let justification = match (&verified, hint.assumed) {
            (Ok(j), _) => j.clone(),
            (Err(why), true) => format!("assumed without proof ({why})"),
            (Err(why), false) => {
                trace.push(format!("hint {} rejected: {why}", hint.name));
                continue;
            }
        };
        let Some(q) = express_in(&c, &hint.auxiliary, rel) else {
            trace.push(format!("hint {}: coefficient is not a polynomial in {}", hint.name, chart.render_poly(&hint.auxiliary)));
            continue;
        };
        let reduced = render_univariate(&q, &hint.name);
        trace.push(format!("hint {}: coefficient = {} with {} = {}", hint.name, reduced, hint.name, chart.render_poly(&hint.auxiliary)));
        let qpoly = Poly::from_terms(q.iter().enumerate().map(|(i, c)| (Monomial::var_pow(Var(0), i as u32), c.clone())));
        let sturm = match sturm_sign_on_interval(&qpoly, &hint.lo, &hint.hi) {
            Ok(s) => s,
            Err(e) => {
                trace.push(format!("hint {}: Sturm analysis failed: {e}", hint.name));
                continue;
            }
        };
        let sign = match sturm.verdict {
            SturmVerdict::StrictlyPositive => Sign::Positive,
            SturmVerdict::StrictlyNegative => Sign::Negative,
            SturmVerdict::HasZero => {
                let w = sturm.witness.expect("HasZero carries a witness");
                trace.push(format!(
                    "hint {}: reduced polynomial vanishes in [{}, {}]; the range may not be attained",
                    hint.name,
                    format_rational(&w.lo),
                    format_rational(&w.hi)
                ));
                continue;
            }
        };
        trace.push(format!("Sturm: {} is strictly {:?} on [{}, {}]", reduced, sign, format_rational(&hint.lo), format_rational(&hint.hi)));
        let bound = BoundData::Hint {
            hint: hint.name.clone(),
            auxiliary: chart.render_poly(&hint.auxiliary),
            lo: hint.lo.clone(),
            hi: hint.hi.clone(),
            reduced,
            coefficients: q.iter().map(format_rational).collect(),
            justification: justification.clone(),
        };
        let status = if verified.is_ok() {
            Status::CertifiedSign { sign, method: SignMethod::Sturm, bound }
        } else {
            Status::Conditional { sign, assumption: justification, bound }
        };
        return Certificate { status, trace };
    }

    sample_verdict(&c, chart, cfg, trace)
}

fn sample_verdict(c: &Poly, chart: &Chart, cfg: &SampleConfig, mut trace: Vec<String>) -> Certificate {
    let rel = chart.relations();
    let points = relation_points(rel, cfg.samples, cfg.seed);
    let values: Vec<Rational> = points.par_iter().map(|p| c.eval(p).expect("point assigns every variable")).collect();
    trace.push(format!("sampled {} exact points (seed {})", points.len(), cfg.seed));
    let restrict = |p: &HashMap<Var, Rational>| {
        let vars = c.vars();
        let keep: HashMap<Var, Rational> = p
            .iter()
            .filter(|(v, _)| vars.contains(v) || rel.group_of(**v).is_some_and(|g| g.vars().iter().any(|w| vars.contains(w))))
            .map(|(v, x)| (*v, x.clone()))
            .collect();
        NamedPoint::from_vars(chart, &keep)
    };
    if let Some(i) = values.iter().position(Zero::is_zero) {
        trace.push(format!("exact zero at sample {i}"));
        let witness = Witness::ExactZero { point: restrict(&points[i]) };
        return Certificate { status: Status::Refuted { witness }, trace };
    }
    let pos = values.iter().position(Signed::is_positive);
    let neg = values.iter().position(Signed::is_negative);
    if let (Some(p), Some(n)) = (pos, neg) {
        let connected = c.vars().iter().all(|&v| rel.group_of(v).is_none_or(|g| g.vars().len() >= 2));
        if connected {
            trace.push(format!("sign change between samples {p} and {n} on a connected domain forces a zero"));
            let witness = Witness::SignChange {
                positive: restrict(&points[p]),
                negative: restrict(&points[n]),
                value_positive: values[p].clone(),
                value_negative: values[n].clone(),
            };
            return Certificate { status: Status::Refuted { witness }, trace };
        }
        trace.push("both signs occur, but the domain is disconnected".into());
    }
    let min_abs = values.iter().map(Signed::abs).min().unwrap_or_else(Rational::zero);
    trace.push(format!("no zero found; minimum |value| {}", format_rational(&min_abs)));
    Certificate { status: Status::NumericUnrefuted { samples: points.len(), min_abs }, trace }
}

impl Witness {
    /// Re-checks a point witness against `c` on `chart`. Circle witnesses
    /// are re-checked by the obstruction report that produced them (`None`).
    pub fn verify(&self, c: &Poly, chart: &Chart) -> Option<bool> {
        let eval = |p: &NamedPoint| -> Option<Rational> {
            let mut vars = p.to_vars(chart).ok()?;
            let rel = chart.relations();
            for g in rel.groups() {
                let assigned = g.vars().iter().filter(|v| vars.contains_key(v)).count();
                if assigned != 0 && assigned != g.vars().len() {
                    return None;
                }
            }
            if !rel
                .groups()
                .iter()
                .filter(|g| vars.contains_key(&g.vars()[0]))
                .all(|g| g.relation_poly().eval(&vars).is_some_and(|x| x.is_zero()))
            {
                return None;
            }
            for v in c.vars() {
                vars.entry(v).or_insert_with(Rational::zero);
            }
            c.eval(&vars)
        };
        match self {
            Witness::ExactZero { point } => Some(eval(point).is_some_and(|v| v.is_zero())),
            Witness::SignChange { positive, negative, .. } => {
                Some(eval(positive).is_some_and(|v| v.is_positive()) && eval(negative).is_some_and(|v| v.is_negative()))
            }
            Witness::CircleZero { .. } => None,
        }
    }
}
