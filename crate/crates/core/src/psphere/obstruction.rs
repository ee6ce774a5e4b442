//! The odd-degree obstruction to contact circles in dimensions `4k + 1`.
//!
//! At a point `x` with a frame `v_1..v_{2n+1}`, the value of
//! `Ω_λ ∧ (dΩ_λ)^n` on the frame is a homogeneous polynomial of degree
//! `n + 1` in `(λ_1, λ_2)`. For `n` even that degree is odd, so
//! `P(-λ) = -P(λ)` and `P` has a zero on the unit circle. The zero is
//! located on the rational parametrisation `λ(τ) = ((1 - τ²), 2τ) / (1 + τ²)`
//! which runs from `(1, 0)` at `τ = 0` towards `(-1, 0)` as `τ → ∞`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::PSphereSpec;
use crate::algebra::sturm::SturmChain;
use crate::algebra::{isolate_sign_change, rat, Dense, Interval, Poly, Rational, Var};
use crate::contact::{base_point, NamedPoint};
use crate::error::{Error, Result};
use crate::exterior::{evaluate_at, evaluate_partial, VectorField};

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub point: NamedPoint,
    pub frame: Vec<String>,
    /// `P(c, s)`: the top form of `c ω1 + s ω2` on the frame.
    pub circle_polynomial: String,
    #[serde(skip)]
    pub polynomial: Poly,
    pub degree: u32,
    pub all_odd: bool,
    /// `Q(τ) = P(1 - τ², 2τ)` changes sign (or vanishes) on this interval.
    pub tau: Interval,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub value_at_lo: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub value_at_hi: Rational,
    /// Sturm count of distinct roots of `Q` in `(0, T]`.
    pub roots_in_range: usize,
    /// `ω1 ∧ (dω1)^n` on the frame, which must equal `P(1, 0)`.
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub direct_value: Rational,
}

const C: Var = Var(0);
const S: Var = Var(1);
const TAU: Var = Var(2);

/// Whether [`super::psphere_check`] routes through the obstruction: at least
/// two generators, dimension `≡ 1 mod 4`, and a chart whose generators form
/// a frame of the manifold.
pub fn obstruction_applies(spec: &PSphereSpec) -> bool {
    let dim = spec.chart.manifold_dim();
    spec.p() >= 1 && dim % 4 == 1 && spec.chart.coordinate_groups().is_empty()
}

fn tau_poly(p: &Poly) -> Result<Dense> {
    let t = Poly::var(TAU);
    let c = &Poly::one() - &(&t * &t);
    let s = t.scale(&rat(2));
    Dense::from_poly(&p.substitute(C, &c).substitute(S, &s))
}

impl ObstructionReport {
    /// Re-derives `Q` from the stored polynomial and checks the interval.
    pub fn verify(&self) -> bool {
        let Ok(q) = tau_poly(&self.polynomial) else { return false };
        let (a, b) = (q.eval(&self.tau.lo), q.eval(&self.tau.hi));
        let exact = self.tau.lo == self.tau.hi && a.is_zero();
        let change = (a.is_positive() && b.is_negative()) || (a.is_negative() && b.is_positive());
        let width = Rational::new(BigInt::one(), BigInt::one() << 30);
        self.all_odd && (exact || change) && self.tau.width() <= width
    }
}

/// Evaluates the circle polynomial of `ω1, ω2` at `point` on `frame` and
/// isolates a zero. Defaults: the base point of the chart relations (the
/// origin when there are none) and the frame dual to the generators.
pub fn odd_dim_obstruction(
    spec: &PSphereSpec,
    point: Option<&HashMap<Var, Rational>>,
    frame: Option<&[VectorField]>,
) -> Result<ObstructionReport> {
    let chart = &spec.chart;
    let dim = chart.manifold_dim();
    if spec.p() < 1 {
        return Err(Error::Precondition("the obstruction needs two generators".into()));
    }
    if dim % 4 != 1 {
        return Err(Error::Precondition(format!("dimension {dim} is not ≡ 1 mod 4")));
    }
    let point = match point {
        Some(p) => complete(chart, p),
        None => base_point(chart.relations()),
    };
    if !chart.relations().satisfied_by(&point) {
        return Err(Error::Input("obstruction point violates the chart relations".into()));
    }
    let frame: Vec<VectorField> = match frame {
        Some(f) => f.to_vec(),
        None if chart.num_gens() == dim => (0..dim).map(|g| VectorField::dual(chart, g)).collect(),
        None => return Err(Error::Precondition("charts with coordinate relations need an explicit tangent frame".into())),
    };
    if frame.len() != dim {
        return Err(Error::DegreeMismatch { expected: dim, found: frame.len() });
    }
    let n = ((dim - 1) / 2) as u32;

    let pair = PSphereSpec::new(spec.name.clone(), spec.generators[..2].to_vec())?;
    let ext = pair.extension(false)?;
    let ext_frame: Vec<VectorField> = frame.iter().map(|v| v.transfer(&ext.chart)).collect::<Result<_>>()?;
    let top = ext.omega.wedge(&ext.omega.ext_d().wedge_pow(n))?;
    let raw = evaluate_partial(&top, &point, &ext_frame)?;
    let (l1, l2) = (ext.lambdas[0], ext.lambdas[1]);
    let polynomial = raw.map_vars(|v| {
        if v == l1 {
            C
        } else if v == l2 {
            S
        } else {
            v
        }
    });
    if polynomial.vars().iter().any(|v| *v != C && *v != S) {
        return Err(Error::Internal("circle polynomial depends on base variables".into()));
    }
    let all_odd = polynomial.terms().all(|(m, _)| m.degree() % 2 == 1);
    if !all_odd {
        return Err(Error::Internal(format!("circle polynomial {} has an even-degree term", polynomial.render(&circle_names))));
    }

    let w1 = &spec.generators[0];
    let direct = w1.wedge(&w1.ext_d().wedge_pow(n))?;
    let direct_value = evaluate_at(&direct, &point, &frame)?;

    let q = tau_poly(&polynomial)?;
    let width = Rational::new(BigInt::one(), BigInt::one() << 30);
    let (tau, hi_end) = if q.is_zero() || q.eval(&Rational::zero()).is_zero() {
        (Interval { lo: Rational::zero(), hi: Rational::zero() }, Rational::one())
    } else {
        let q0 = q.eval(&Rational::zero());
        let mut t = Rational::one();
        while (q.eval(&t) * &q0).is_positive() {
            t *= rat(2);
        }
        (isolate_sign_change(&q, &Rational::zero(), &t, &width)?, t)
    };
    let roots_in_range = if q.is_zero() { 0 } else { SturmChain::new(&q.squarefree()).count_roots(&Rational::zero(), &hi_end) };
    Ok(ObstructionReport {
        point: NamedPoint::from_vars(chart, &point),
        frame: frame.iter().map(|v| format!("{v:?}")).collect(),
        circle_polynomial: polynomial.render(&circle_names),
        degree: n + 1,
        all_odd,
        value_at_lo: q.eval(&tau.lo),
        value_at_hi: q.eval(&tau.hi),
        tau,
        roots_in_range,
        direct_value,
        polynomial,
    })
}

fn circle_names(v: Var) -> String {
    match v {
        C => "c".into(),
        S => "s".into(),
        _ => format!("v{}", v.0),
    }
}

/// Fills unassigned free variables with 0 so a full evaluation is possible.
fn complete(chart: &crate::exterior::Chart, point: &HashMap<Var, Rational>) -> HashMap<Var, Rational> {
    let mut p = point.clone();
    for i in 0..chart.num_vars() as u32 {
        p.entry(Var(i)).or_insert_with(Rational::zero);
    }
    p
}
