//! Differential forms and vector fields with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use rayon::prelude::*;

use super::chart::{Chart, VarKind};
use crate::algebra::{format_rational, Poly, Relations, Var};
use crate::error::{Error, Result};

/// Sorted set of generator indices, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Blade(pub u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(g: usize) -> Blade {
        Blade(1 << g)
    }

    pub fn from_gens(gens: &[usize]) -> Blade {
        Blade(gens.iter().fold(0, |acc, &g| acc | (1 << g)))
    }

    /// Blade of the first `n` generators.
    pub fn full(n: usize) -> Blade {
        if n == 64 {
            Blade(u64::MAX)
        } else {
            Blade((1u64 << n) - 1)
        }
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, g: usize) -> bool {
        self.0 & (1 << g) != 0
    }

    pub fn gens(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let g = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(g)
        })
    }

    pub fn without(self, g: usize) -> Blade {
        Blade(self.0 & !(1 << g))
    }

    pub fn with(self, g: usize) -> Blade {
        Blade(self.0 | (1 << g))
    }

    /// `self ∧ other` as `sign * (self | other)`, or `None` if they overlap.
    pub fn wedge(self, other: Blade) -> Option<(Blade, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for g in other.gens() {
            inversions += (self.0 >> g).count_ones();
        }
        Some((Blade(self.0 | other.0), inversions % 2 == 1))
    }
}

pub type Terms = BTreeMap<Blade, Poly>;

fn add_into(terms: &mut Terms, blade: Blade, value: Poly) {
    if value.is_zero() {
        return;
    }
    match terms.entry(blade) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn reduce_all(rel: &Relations, terms: Terms) -> Terms {
    terms
        .into_iter()
        .filter_map(|(b, c)| {
            let r = rel.reduce(&c);
            (!r.is_zero()).then_some((b, r))
        })
        .collect()
}

const PARALLEL_THRESHOLD: usize = 256;

/// Raw wedge of term maps, coefficients reduced at the end.
pub(crate) fn wedge_terms(rel: &Relations, a: &Terms, b: &Terms) -> Terms {
    let partial = |(ba, ca): (&Blade, &Poly)| {
        let mut out = Terms::new();
        for (bb, cb) in b {
            if let Some((blade, negate)) = ba.wedge(*bb) {
                let p = ca * cb;
                add_into(&mut out, blade, if negate { -p } else { p });
            }
        }
        out
    };
    let merge = |mut x: Terms, y: Terms| {
        for (bl, c) in y {
            add_into(&mut x, bl, c);
        }
        x
    };
    let raw = if a.len() * b.len() >= PARALLEL_THRESHOLD {
        a.par_iter().map(partial).reduce(Terms::new, merge)
    } else {
        a.iter().map(partial).fold(Terms::new(), merge)
    };
    reduce_all(rel, raw)
}

/// A differential form on a chart; coefficients are kept in normal form.
#[derive(Clone)]
pub struct DiffForm {
    chart: Arc<Chart>,
    terms: Terms,
}

impl DiffForm {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        DiffForm { chart: chart.clone(), terms: Terms::new() }
    }

    pub fn scalar(chart: &Arc<Chart>, p: Poly) -> Self {
        DiffForm::from_terms(chart, Terms::from([(Blade::EMPTY, p)]))
    }

    pub fn generator(chart: &Arc<Chart>, g: usize) -> Self {
        DiffForm { chart: chart.clone(), terms: Terms::from([(Blade::single(g), Poly::one())]) }
    }

    /// `d v`: the owned generator, zero, or the declared differential.
    pub fn var_differential(chart: &Arc<Chart>, v: Var) -> Self {
        DiffForm { chart: chart.clone(), terms: chart.var_differential(v).clone() }
    }

    pub fn from_terms(chart: &Arc<Chart>, terms: Terms) -> Self {
        DiffForm { chart: chart.clone(), terms: reduce_all(chart.relations(), terms) }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms; `None` for the zero form or mixed degrees.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.degree() == k)
    }

    pub fn coefficient(&self, blade: Blade) -> Poly {
        self.terms.get(&blade).cloned().unwrap_or_else(Poly::zero)
    }

    /// Coefficient of the ordered wedge of all generators.
    pub fn top_coefficient(&self) -> Poly {
        self.coefficient(Blade::full(self.chart.num_gens()))
    }

    /// Moves the form to a chart that extends this one (same generators,
    /// variables appended).
    pub fn transfer(&self, chart: &Arc<Chart>) -> Result<DiffForm> {
        let ok = chart.num_gens() == self.chart.num_gens()
            && chart.gens() == self.chart.gens()
            && chart.num_vars() >= self.chart.num_vars()
            && chart.vars()[..self.chart.num_vars()] == *self.chart.vars();
        if !ok {
            return Err(Error::MixedCharts);
        }
        Ok(DiffForm::from_terms(chart, self.terms.clone()))
    }

    fn check_chart(&self, other: &DiffForm) -> Result<()> {
        if Chart::same(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(Error::MixedCharts)
        }
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_chart(other)?;
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            add_into(&mut terms, *b, c.clone());
        }
        Ok(DiffForm { chart: self.chart.clone(), terms: reduce_all(self.chart.relations(), terms) })
    }

    pub fn scale(&self, p: &Poly) -> DiffForm {
        let terms = self.terms.iter().map(|(b, c)| (*b, c * p)).collect();
        DiffForm::from_terms(&self.chart, terms)
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_chart(other)?;
        Ok(DiffForm { chart: self.chart.clone(), terms: wedge_terms(self.chart.relations(), &self.terms, &other.terms) })
    }

    /// `self ∧ self ∧ ... ∧ self` (`n` factors); `n = 0` gives the constant 1.
    pub fn wedge_pow(&self, n: u32) -> DiffForm {
        let mut acc = DiffForm::scalar(&self.chart, Poly::one());
        for _ in 0..n {
            acc = acc.wedge(self).expect("same chart");
        }
        acc
    }

    fn d_poly(&self, p: &Poly) -> Terms {
        let mut out = Terms::new();
        for v in p.vars() {
            if self.chart.var_kind(v) == VarKind::Param {
                continue;
            }
            let dp = p.derivative(v);
            for (b, c) in self.chart.var_differential(v) {
                add_into(&mut out, *b, &dp * c);
            }
        }
        out
    }

    fn d_blade(&self, blade: Blade) -> Terms {
        let rel = self.chart.relations();
        let mut out = Terms::new();
        let gens: Vec<usize> = blade.gens().collect();
        for (j, &g) in gens.iter().enumerate() {
            let dg = self.chart.gen_differential(g);
            if dg.is_empty() {
                continue;
            }
            let prefix = Terms::from([(Blade::from_gens(&gens[..j]), Poly::one())]);
            let suffix = Terms::from([(Blade::from_gens(&gens[j + 1..]), Poly::one())]);
            let t = wedge_terms(rel, &wedge_terms(rel, &prefix, dg), &suffix);
            for (b, c) in t {
                add_into(&mut out, b, if j % 2 == 1 { -c } else { c });
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> DiffForm {
        let rel = self.chart.relations();
        let mut out = Terms::new();
        for (blade, c) in &self.terms {
            let dc = self.d_poly(c);
            if !dc.is_empty() {
                for (b, v) in wedge_terms(rel, &dc, &Terms::from([(*blade, Poly::one())])) {
                    add_into(&mut out, b, v);
                }
            }
            for (b, v) in self.d_blade(*blade) {
                add_into(&mut out, b, c * &v);
            }
        }
        DiffForm::from_terms(&self.chart, out)
    }

    /// Interior product `V ⌟ self`.
    pub fn contract(&self, v: &VectorField) -> Result<DiffForm> {
        if !Chart::same(&self.chart, &v.chart) {
            return Err(Error::MixedCharts);
        }
        let mut out = Terms::new();
        for (blade, c) in &self.terms {
            for (j, g) in blade.gens().enumerate() {
                let vg = &v.coeffs[g];
                if vg.is_zero() {
                    continue;
                }
                let p = c * vg;
                add_into(&mut out, blade.without(g), if j % 2 == 1 { -p } else { p });
            }
        }
        Ok(DiffForm::from_terms(&self.chart, out))
    }

    /// `self(V)` for a 1-form.
    pub fn apply(&self, v: &VectorField) -> Result<Poly> {
        if !self.is_homogeneous(1) {
            return Err(Error::DegreeMismatch { expected: 1, found: self.degree().unwrap_or(0) });
        }
        Ok(self.contract(v)?.coefficient(Blade::EMPTY))
    }

    pub fn blade_name(&self, blade: Blade) -> String {
        blade.gens().map(|g| self.chart.gen_name(g).to_string()).collect::<Vec<_>>().join("^")
    }

    /// Rendering in the spec-file expression syntax.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(b, _)| (b.degree(), **b));
        for (i, (blade, c)) in terms.into_iter().enumerate() {
            let (neg, body) = render_term(&self.chart, c, &self.blade_name(*blade), blade.degree() == 0);
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

fn render_term(chart: &Chart, c: &Poly, blade: &str, scalar: bool) -> (bool, String) {
    if let Some(v) = c.constant_value() {
        let neg = v < num_traits::Zero::zero();
        let abs = if neg { -v } else { v };
        let body = match (scalar, num_traits::One::is_one(&abs)) {
            (true, _) => format_rational(&abs),
            (false, true) => blade.to_string(),
            (false, false) => format!("{}*{}", format_rational(&abs), blade),
        };
        return (neg, body);
    }
    let poly = chart.render_poly(c);
    let single = c.num_terms() == 1;
    if single && poly.starts_with('-') {
        let p = &poly[1..];
        return (true, if scalar { p.to_string() } else { format!("{p}*{blade}") });
    }
    let wrapped = if single { poly } else { format!("({poly})") };
    (false, if scalar { wrapped } else { format!("{wrapped}*{blade}") })
}

impl PartialEq for DiffForm {
    fn eq(&self, other: &Self) -> bool {
        Chart::same(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Panics when the operands live on different charts; use
/// [`DiffForm::try_add`] for a checked sum.
impl Add<&DiffForm> for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.try_add(rhs).expect("operands live on different charts")
    }
}

impl Sub<&DiffForm> for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self.try_add(&-rhs).expect("operands live on different charts")
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        DiffForm { chart: self.chart.clone(), terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect() }
    }
}

/// Vector field in the frame dual to the chart's generators.
#[derive(Clone)]
pub struct VectorField {
    chart: Arc<Chart>,
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(chart: &Arc<Chart>, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != chart.num_gens() {
            return Err(Error::DegreeMismatch { expected: chart.num_gens(), found: coeffs.len() });
        }
        let coeffs = coeffs.iter().map(|c| chart.relations().reduce(c)).collect();
        Ok(VectorField { chart: chart.clone(), coeffs })
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField { chart: chart.clone(), coeffs: vec![Poly::zero(); chart.num_gens()] }
    }

    /// The frame vector dual to generator `g`.
    pub fn dual(chart: &Arc<Chart>, g: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.coeffs[g] = Poly::one();
        v
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn scale(&self, p: &Poly) -> VectorField {
        VectorField::new(&self.chart, self.coeffs.iter().map(|c| c * p).collect()).expect("same length")
    }

    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        if !Chart::same(&self.chart, &other.chart) {
            return Err(Error::MixedCharts);
        }
        VectorField::new(&self.chart, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn transfer(&self, chart: &Arc<Chart>) -> Result<VectorField> {
        if chart.gens() != self.chart.gens() {
            return Err(Error::MixedCharts);
        }
        VectorField::new(chart, self.coeffs.clone())
    }

    /// `(dual name, coefficient)` pairs for the nonzero components.
    pub fn components(&self) -> Vec<(String, String)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (self.chart.dual_name(g), self.chart.render_poly(c)))
            .collect()
    }
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        Chart::same(&self.chart, &other.chart) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().into_iter().map(|(g, c)| format!("({c}){g}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blade_wedge_sign() {
        let a = Blade::single(1);
        let b = Blade::single(0);
        assert_eq!(a.wedge(b), Some((Blade(0b11), true)));
        assert_eq!(b.wedge(a), Some((Blade(0b11), false)));
        assert_eq!(a.wedge(a), None);
        // (g0 g2) ∧ (g1 g3): one inversion (2 > 1)
        assert_eq!(Blade(0b0101).wedge(Blade(0b1010)), Some((Blade(0b1111), true)));
    }

    #[test]
    fn blade_gens_are_sorted() {
        assert_eq!(Blade(0b10110).gens().collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
