//! Engine identities as runnable suites, shared by the property tests and
//! the acceptance target.

#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use csl_core::algebra::sturm::SturmChain;
use csl_core::algebra::{ratio, solve_linear_common, sturm_sign_on_interval, Dense, Monomial, Poly, Rational, SturmVerdict, Var};
use csl_core::exterior::{form_eq, Chart, ChartBuilder, DiffForm, VectorField};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// `x, y` coordinates, `s, c` a circle of functions with `ds = c g1`,
/// `dc = -s g1`, abstract `g1, g2, alpha` with `dα = g1∧g2`.
pub fn chart() -> &'static Arc<Chart> {
    static CHART: OnceLock<Arc<Chart>> = OnceLock::new();
    CHART.get_or_init(|| {
        let mut b = ChartBuilder::new("prop");
        b.coordinate("x");
        b.coordinate("y");
        let s = b.func("s");
        let c = b.func("c");
        b.relation(vec![s, c]);
        for g in ["g1", "g2", "alpha"] {
            b.generator(g);
        }
        let sk = b.skeleton().unwrap();
        let g = |n: &str| DiffForm::generator(&sk, sk.generator(n).unwrap());
        b.set_var_differential(s, &g("g1").scale(&Poly::var(c))).unwrap();
        b.set_var_differential(c, &-&g("g1").scale(&Poly::var(s))).unwrap();
        b.set_gen_differential("alpha", &g("g1").wedge(&g("g2")).unwrap()).unwrap();
        b.build().unwrap()
    })
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
}

pub fn poly_in(vars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, vars), small_rational()), 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(
            terms.into_iter().map(|(exps, c)| (Monomial::from_pairs(exps.into_iter().enumerate().map(|(i, e)| (Var(i as u32), e))), c)),
        )
    })
}

pub fn form(degree: usize) -> impl Strategy<Value = DiffForm> {
    let n = 5usize;
    let blades: Vec<Vec<usize>> =
        (0u32..1 << n).filter(|b| b.count_ones() as usize == degree).map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect()).collect();
    let k = blades.len();
    prop::collection::vec(prop::option::weighted(0.6, poly_in(4, 2, 3)), k).prop_map(move |coeffs| {
        let chart = chart();
        let mut out = DiffForm::zero(chart);
        for (gens, c) in blades.iter().zip(coeffs) {
            if let Some(c) = c {
                let blade =
                    gens.iter().fold(DiffForm::scalar(chart, Poly::one()), |acc, g| acc.wedge(&DiffForm::generator(chart, *g)).unwrap());
                out = &out + &blade.scale(&c);
            }
        }
        out
    })
}

pub fn field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly_in(4, 2, 2), 5).prop_map(|c| VectorField::new(chart(), c).unwrap())
}

pub fn equal(a: &DiffForm, b: &DiffForm) -> bool {
    form_eq(a, b).unwrap().equal
}

pub fn sign(p: i32) -> Poly {
    Poly::from_int(if p % 2 == 0 { 1 } else { -1 })
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn outcome<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn d_squared(cases: u32) -> Result<(), String> {
    let strategy = ((0usize..=3).prop_flat_map(form), poly_in(4, 3, 5));
    outcome(runner(cases).run(&strategy, |(w, f)| {
        prop_assert!(equal(&w.ext_d().ext_d(), &DiffForm::zero(chart())));
        let f = DiffForm::scalar(chart(), f);
        prop_assert!(equal(&f.ext_d().ext_d(), &DiffForm::zero(chart())));
        Ok(())
    }))
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    let strategy = (0usize..=2, form(1), form(2), poly_in(4, 2, 3));
    outcome(runner(cases).run(&strategy, |(p, a, b, f)| {
        let a = if p == 0 {
            DiffForm::scalar(chart(), f)
        } else if p == 1 {
            a
        } else {
            b.clone()
        };
        let lhs = a.wedge(&b).unwrap().ext_d();
        let rhs = &a.ext_d().wedge(&b).unwrap() + &a.wedge(&b.ext_d()).unwrap().scale(&sign(p as i32));
        prop_assert!(equal(&lhs, &rhs));
        Ok(())
    }))
}

pub fn antiderivation(cases: u32) -> Result<(), String> {
    let strategy = (1usize..=2, form(1), form(2), form(2), field());
    outcome(runner(cases).run(&strategy, |(p, a1, a2, b, x)| {
        let a = if p == 1 { a1 } else { a2 };
        let lhs = a.wedge(&b).unwrap().contract(&x).unwrap();
        let rhs = &a.contract(&x).unwrap().wedge(&b).unwrap() + &a.wedge(&b.contract(&x).unwrap()).unwrap().scale(&sign(p as i32));
        prop_assert!(equal(&lhs, &rhs));
        Ok(())
    }))
}

pub fn normal_form(cases: u32) -> Result<(), String> {
    let strategy = (poly_in(4, 3, 4), poly_in(4, 3, 4));
    outcome(runner(cases).run(&strategy, |(p, q)| {
        let rel = chart().relations();
        let (np, nq) = (rel.reduce(&p), rel.reduce(&q));
        prop_assert_eq!(rel.reduce(&np), np.clone());
        prop_assert_eq!(rel.reduce(&(&p + &q)), &np + &nq);
        prop_assert_eq!(rel.reduce(&(&p * &q)), rel.reduce(&(&np * &nq)));
        // The relation itself reduces to zero.
        let s = Poly::var(Var(2));
        let c = Poly::var(Var(3));
        prop_assert!(rel.reduce(&(&(&(&s * &s) + &(&c * &c)) - &Poly::one())).is_zero());
        Ok(())
    }))
}

pub fn solve_linear(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(poly_in(2, 1, 3), 9), prop::collection::vec(poly_in(2, 1, 2), 3));
    outcome(runner(cases).run(&strategy, |(m, b)| {
        let rows: Vec<Vec<Poly>> = m.chunks(3).map(<[Poly]>::to_vec).collect();
        match solve_linear_common(&rows, &b) {
            Ok(sol) => {
                prop_assert!(!sol.denominator.is_zero());
                for (row, bi) in rows.iter().zip(&b) {
                    let lhs = row.iter().zip(&sol.numerators).fold(Poly::zero(), |acc, (a, x)| &acc + &(a * x));
                    prop_assert_eq!(lhs, &sol.denominator * bi);
                }
            }
            Err(csl_core::Error::SingularSystem { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
        Ok(())
    }))
}

pub fn sturm_vs_sampling(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(small_rational(), 1..=6), -4i64..=3, 1i64..=4);
    outcome(runner(cases).run(&strategy, |(coeffs, lo, width)| {
        let dense = Dense::new(coeffs);
        prop_assume!(!dense.is_zero());
        let (lo, hi) = (Rational::from_integer(lo.into()), Rational::from_integer((lo + width).into()));
        let p = Poly::from_univariate(Var(0), &dense.coeffs().iter().map(|c| Poly::constant(c.clone())).collect::<Vec<_>>());
        let r = sturm_sign_on_interval(&p, &lo, &hi).unwrap();
        let samples: Vec<Rational> = (0..1000).map(|i| &lo + (&hi - &lo) * ratio(i, 999)).collect();
        let values: Vec<Rational> = samples.iter().map(|x| dense.eval(x)).collect();
        match r.verdict {
            SturmVerdict::StrictlyPositive => prop_assert!(values.iter().all(Signed::is_positive)),
            SturmVerdict::StrictlyNegative => prop_assert!(values.iter().all(Signed::is_negative)),
            SturmVerdict::HasZero => {
                let w = r.witness.unwrap();
                prop_assert!(lo <= w.lo && w.hi <= hi);
                if w.lo == w.hi {
                    prop_assert!(dense.eval(&w.lo).is_zero());
                } else {
                    let chain = SturmChain::new(&dense.squarefree());
                    prop_assert!(chain.count_roots(&w.lo, &w.hi) >= 1 || dense.eval(&w.lo).is_zero());
                }
            }
        }
        let has_pos = values.iter().any(Signed::is_positive);
        let has_neg = values.iter().any(Signed::is_negative);
        if (has_pos && has_neg) || values.iter().any(Zero::is_zero) {
            prop_assert_eq!(r.verdict, SturmVerdict::HasZero);
        }
        Ok(())
    }))
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 6] = [
    ("d∘d = 0", d_squared),
    ("Leibniz rule", leibniz),
    ("contraction antiderivation", antiderivation),
    ("normal form idempotent ring map", normal_form),
    ("solve_linear substitution", solve_linear),
    ("Sturm vs dense sampling", sturm_vs_sampling),
];
