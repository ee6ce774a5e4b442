//! Reeb vector fields.
//!
//! Unknowns are the frame components `r` of `R` and, for every coordinate
//! relation group, a multiplier `μ`. The equations are `ω(R) = 1`,
//! `(R⌟dω)_h = Σ μ_k ι_k[h]` for every generator `h`, and tangency
//! `⟨x_k, R⟩ = 0`. This is one equation more than unknowns; rows are dropped
//! one at a time (tangency rows first) until the square system is
//! nonsingular modulo the relations and its solution satisfies every row.

use crate::algebra::{gcd, solve_linear_common, Poly, Rational};
use crate::error::{Error, Result};
use crate::exterior::{Blade, DiffForm, Mode, VectorField};

/// `R = numerators / denominator`, with coefficients in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct ReebField {
    pub numerators: VectorField,
    pub denominator: Poly,
    /// Multiplier numerators, one per coordinate relation group.
    pub multipliers: Vec<Poly>,
}

impl ReebField {
    pub fn is_polynomial(&self) -> bool {
        self.denominator == Poly::one()
    }

    /// The field itself when the denominator is 1.
    pub fn field(&self) -> Option<&VectorField> {
        self.is_polynomial().then_some(&self.numerators)
    }

    pub fn render(&self, chart: &crate::exterior::Chart) -> String {
        let parts: Vec<String> = self.numerators.components().into_iter().map(|(g, c)| format!("({c}){g}")).collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.is_polynomial() {
            body
        } else {
            format!("[{body}] / ({})", chart.render_poly(&self.denominator))
        }
    }
}

struct System {
    rows: Vec<Vec<Poly>>,
    rhs: Vec<Poly>,
    labels: Vec<String>,
}

fn build_system(omega: &DiffForm) -> System {
    let chart = omega.chart();
    let n = chart.num_gens();
    let groups = chart.coordinate_groups();
    let k = groups.len();
    let width = n + k;
    let dw = omega.ext_d();
    let mut m = vec![vec![Poly::zero(); n]; n];
    for (blade, w) in dw.terms() {
        let gens: Vec<usize> = blade.gens().collect();
        let (a, b) = (gens[0], gens[1]);
        m[b][a] += w;
        m[a][b] -= w;
    }
    let iotas: Vec<Vec<Poly>> = groups
        .iter()
        .map(|g| {
            let mut col = vec![Poly::zero(); n];
            for &v in g.vars() {
                col[chart.gen_of_var(v).expect("coordinate")] = Poly::var(v);
            }
            col
        })
        .collect();

    let mut sys = System { rows: vec![], rhs: vec![], labels: vec![] };
    let mut first = vec![Poly::zero(); width];
    for g in 0..n {
        first[g] = omega.coefficient(Blade::single(g));
    }
    sys.rows.push(first);
    sys.rhs.push(Poly::one());
    sys.labels.push("ω(R) = 1".into());
    for h in 0..n {
        let mut row = m[h].clone();
        row.extend(iotas.iter().map(|io| -&io[h]));
        sys.rows.push(row);
        sys.rhs.push(Poly::zero());
        sys.labels.push(format!("(R⌟dω)[{}]", chart.gen_name(h)));
    }
    for (i, io) in iotas.iter().enumerate() {
        let mut row = io.clone();
        row.extend(std::iter::repeat_n(Poly::zero(), k));
        sys.rows.push(row);
        sys.rhs.push(Poly::zero());
        sys.labels.push(format!("tangency to group {}", i + 1));
    }
    sys
}

/// Solves the Reeb system of a 1-form and verifies the result by substitution.
pub fn reeb_field(omega: &DiffForm) -> Result<ReebField> {
    if !omega.is_homogeneous(1) {
        return Err(Error::DegreeMismatch { expected: 1, found: omega.degree().unwrap_or(0) });
    }
    let chart = omega.chart();
    let rel = chart.relations();
    let sphere = matches!(chart.mode(), Mode::Sphere(_)) || !chart.coordinate_groups().is_empty();
    let fail = |msg: String| if sphere { Error::NotContactOnSphere(msg) } else { Error::NotContact(msg) };
    if omega.is_zero() {
        return Err(fail("the zero form".into()));
    }
    let sys = build_system(omega);
    let total = sys.rows.len();
    let n = chart.num_gens();
    for drop in (1..total).rev() {
        let rows: Vec<Vec<Poly>> = (0..total).filter(|&i| i != drop).map(|i| sys.rows[i].clone()).collect();
        let rhs: Vec<Poly> = (0..total).filter(|&i| i != drop).map(|i| sys.rhs[i].clone()).collect();
        let sol = match solve_linear_common(&rows, &rhs) {
            Ok(s) => s,
            Err(Error::SingularSystem { .. }) => continue,
            Err(e) => return Err(e),
        };
        if rel.reduce(&sol.denominator).is_zero() {
            continue;
        }
        let residual_ok =
            sys.rows[drop].iter().zip(&sol.numerators).fold(-&(&sys.rhs[drop] * &sol.denominator), |acc, (a, x)| &acc + &(a * x));
        if !rel.reduce(&residual_ok).is_zero() {
            continue;
        }
        let field = finish(omega, sol.numerators, sol.denominator, n)?;
        verify(omega, &field)?;
        return Ok(field);
    }
    Err(fail(format!("no nonsingular subsystem of the {} Reeb equations has a consistent solution", total)))
}

fn finish(omega: &DiffForm, nums: Vec<Poly>, den: Poly, n: usize) -> Result<ReebField> {
    let chart = omega.chart();
    let rel = chart.relations();
    let mut g = den.clone();
    for x in &nums {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, x);
    }
    let div = |p: &Poly| p.div_exact(&g).ok_or_else(|| Error::Internal("gcd does not divide".into()));
    let mut den = rel.reduce(&div(&den)?);
    let mut nums: Vec<Poly> = nums.iter().map(|x| div(x).map(|p| rel.reduce(&p))).collect::<Result<_>>()?;
    let scale: Rational = match den.constant_value() {
        Some(c) => c.recip(),
        None => den.leading_coefficient().recip(),
    };
    den = den.scale(&scale);
    for x in nums.iter_mut() {
        *x = x.scale(&scale);
    }
    let multipliers = nums.split_off(n);
    Ok(ReebField { numerators: VectorField::new(chart, nums)?, denominator: den, multipliers })
}

/// Substitutes `R` back into the defining equations.
fn verify(omega: &DiffForm, r: &ReebField) -> Result<()> {
    let chart = omega.chart();
    let rel = chart.relations();
    let bad = |what: &str| Err(Error::Internal(format!("Reeb self-check failed: {what}")));
    if !rel.reduce(&(&omega.apply(&r.numerators)? - &r.denominator)).is_zero() {
        return bad("ω(R) != 1");
    }
    let mut lhs = omega.ext_d().contract(&r.numerators)?;
    for (group, mu) in chart.coordinate_groups().into_iter().zip(&r.multipliers) {
        let iota = DiffForm::from_terms(chart, chart.iota(group));
        lhs = lhs.try_add(&-&iota.scale(mu))?;
        let tangency = DiffForm::from_terms(chart, chart.iota(group)).apply(&r.numerators)?;
        if !rel.reduce(&tangency).is_zero() {
            return bad("R is not tangent");
        }
    }
    if !lhs.is_zero() {
        return bad("R⌟dω is not normal");
    }
    Ok(())
}
