//! Grid search for common zeros of `Σ λ_i φ_i` and `Σ λ_i dφ_i`.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{format_rational, Poly, Rational};
use crate::contact::{relation_points, NamedPoint};
use crate::error::{Error, Result};
use crate::exterior::{Chart, DiffForm};

/// Smallest value of `(|Σλφ| + Σ_g |Σλ ∂_g φ|) / max|λ_i|` over the grid.
/// A zero minimum refutes nondegeneracy; a positive one proves nothing.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub functions: Vec<String>,
    pub base_points: usize,
    pub directions: usize,
    pub minimum: String,
    pub point: NamedPoint,
    pub direction: Vec<String>,
    pub refuted: bool,
}

/// Integer directions in `[-r, r]^k` with a positive first nonzero entry.
/// The measure is homogeneous in λ, so these cover the rational directions
/// of the unit sphere up to scale, including irrational unit vectors such as
/// `(1, -1)/√2`.
fn directions(k: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (-r..=r).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|v| v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0));
    out
}

pub fn invariant_nondegeneracy_scan(chart: &Arc<Chart>, functions: &[Poly], density: usize) -> Result<ScanReport> {
    if functions.is_empty() {
        return Err(Error::Input("the scan needs at least one function".into()));
    }
    if density == 0 {
        return Err(Error::Input("grid density must be positive".into()));
    }
    for f in functions {
        chart.relations().check_declared(f)?;
    }
    let differentials: Vec<Vec<Poly>> = functions
        .iter()
        .map(|f| {
            let d = DiffForm::scalar(chart, f.clone()).ext_d();
            (0..chart.num_gens()).map(|g| d.coefficient(crate::exterior::Blade::single(g))).collect()
        })
        .collect();
    let points = relation_points(chart.relations(), density, 0);
    let dirs = directions(functions.len(), 2);
    let best = points
        .par_iter()
        .enumerate()
        .map(|(pi, point)| {
            let value = |p: &Poly| p.eval(point).expect("relation points assign every variable");
            let a: Vec<Rational> = functions.iter().map(value).collect();
            let b: Vec<Vec<Rational>> = differentials.iter().map(|row| row.iter().map(value).collect()).collect();
            let mut best: Option<(Rational, usize, usize)> = None;
            for (di, lam) in dirs.iter().enumerate() {
                let comb = |xs: &dyn Fn(usize) -> Rational| -> Rational {
                    lam.iter().enumerate().fold(Rational::zero(), |acc, (i, l)| acc + xs(i) * Rational::from_integer((*l).into()))
                };
                let mut m = comb(&|i| a[i].clone()).abs();
                for g in 0..chart.num_gens() {
                    m += comb(&|i| b[i][g].clone()).abs();
                }
                let norm = lam.iter().map(|x| x.abs()).max().expect("k >= 1");
                let m = m / Rational::from_integer(norm.into());
                if best.as_ref().is_none_or(|(v, _, _)| m < *v) {
                    best = Some((m, pi, di));
                }
            }
            best.expect("at least one direction")
        })
        .reduce_with(|x, y| if (&y.0, y.1, y.2) < (&x.0, x.1, x.2) { y } else { x })
        .expect("at least one point");
    let (min, pi, di) = best;
    Ok(ScanReport {
        functions: functions.iter().map(|f| chart.render_poly(f)).collect(),
        base_points: points.len(),
        directions: dirs.len(),
        refuted: min.is_zero(),
        minimum: format_rational(&min),
        point: NamedPoint::from_vars(chart, &points[pi]),
        direction: dirs[di].iter().map(|x| x.to_string()).collect(),
    })
}
