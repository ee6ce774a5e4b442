use std::collections::HashMap;
use std::sync::Arc;

use super::*;
use crate::algebra::{rat, ratio, Poly, Var};

fn x(chart: &Arc<Chart>, name: &str) -> Poly {
    Poly::var(chart.var(name).unwrap())
}

fn dx(chart: &Arc<Chart>, name: &str) -> DiffForm {
    DiffForm::var_differential(chart, chart.var(name).unwrap())
}

fn r7() -> Arc<Chart> {
    coordinate_chart("r7", &["x1", "x2", "x3", "x4", "x5", "x6", "x7"], false).unwrap()
}

fn w(a: &DiffForm, b: &DiffForm) -> DiffForm {
    a.wedge(b).unwrap()
}

#[test]
fn wedge_anticommutes() {
    let c = r7();
    assert_eq!(w(&dx(&c, "x1"), &dx(&c, "x2")), -&w(&dx(&c, "x2"), &dx(&c, "x1")));
}

#[test]
fn square_of_one_form_vanishes() {
    let c = r7();
    let a = dx(&c, "x2").scale(&x(&c, "x1"));
    assert!(w(&a, &a).is_zero());
}

#[test]
fn quaternion_wedge_by_hand() {
    let c = coordinate_chart("r4", &["q1", "q2", "q3", "q4"], false).unwrap();
    let q = |n: &str| x(&c, n);
    let a = &dx(&c, "q2").scale(&q("q1")) - &dx(&c, "q1").scale(&q("q2"));
    let b = &dx(&c, "q4").scale(&q("q3")) - &dx(&c, "q3").scale(&q("q4"));
    let expected = &(&(&w(&dx(&c, "q2"), &dx(&c, "q4")).scale(&(&q("q1") * &q("q3")))
        - &w(&dx(&c, "q2"), &dx(&c, "q3")).scale(&(&q("q1") * &q("q4"))))
        - &w(&dx(&c, "q1"), &dx(&c, "q4")).scale(&(&q("q2") * &q("q3"))))
        + &w(&dx(&c, "q1"), &dx(&c, "q3")).scale(&(&q("q2") * &q("q4")));
    assert_eq!(w(&a, &b), expected);
}

#[test]
fn d_of_standard_contact_form() {
    let c = r7();
    let omega =
        &(&(&dx(&c, "x2").scale(&x(&c, "x1")) + &dx(&c, "x4").scale(&x(&c, "x3"))) + &dx(&c, "x6").scale(&x(&c, "x5"))) + &dx(&c, "x7");
    let expected = &(&w(&dx(&c, "x1"), &dx(&c, "x2")) + &w(&dx(&c, "x3"), &dx(&c, "x4"))) + &w(&dx(&c, "x5"), &dx(&c, "x6"));
    assert_eq!(omega.ext_d(), expected);
    assert!(omega.ext_d().ext_d().is_zero());
}

fn bundle_chart() -> Arc<Chart> {
    let mut b = ChartBuilder::new("bundle");
    let s = b.func("s");
    let cv = b.func("c");
    let f = b.param("f");
    b.relation(vec![s, cv]);
    b.generator("g1");
    b.generator("g2");
    b.generator("alpha");
    let sk = b.skeleton().unwrap();
    let g1 = DiffForm::generator(&sk, 0);
    let g2 = DiffForm::generator(&sk, 1);
    b.set_var_differential(s, &g1.scale(&Poly::var(cv))).unwrap();
    b.set_var_differential(cv, &g1.scale(&-Poly::var(s))).unwrap();
    b.set_gen_differential("alpha", &g1.wedge(&g2).unwrap().scale(&Poly::var(f))).unwrap();
    b.build().unwrap()
}

#[test]
fn leibniz_on_bundle_chart() {
    let c = bundle_chart();
    let g1 = DiffForm::generator(&c, 0);
    let g2 = DiffForm::generator(&c, 1);
    let alpha = DiffForm::generator(&c, 2);
    let lhs = alpha.scale(&x(&c, "s")).ext_d();
    let rhs = &w(&g1, &alpha).scale(&x(&c, "c")) + &w(&g1, &g2).scale(&(&x(&c, "f") * &x(&c, "s")));
    assert_eq!(lhs, rhs);
}

#[test]
fn inconsistent_function_group_is_rejected() {
    let mut b = ChartBuilder::new("bad");
    let s = b.func("s");
    let cv = b.func("c");
    b.relation(vec![s, cv]);
    b.generator("g");
    let sk = b.skeleton().unwrap();
    let g = DiffForm::generator(&sk, 0);
    b.set_var_differential(s, &g.scale(&Poly::var(cv))).unwrap();
    b.set_var_differential(cv, &g.scale(&Poly::var(s))).unwrap();
    assert!(b.build().is_err());
}

#[test]
fn non_closed_generator_differential_is_rejected() {
    let mut b = ChartBuilder::new("bad");
    b.coordinate("t");
    let u = b.coordinate("u");
    b.generator("a");
    let sk = b.skeleton().unwrap();
    let du = DiffForm::var_differential(&sk, u);
    let a = DiffForm::generator(&sk, 2);
    let t = Poly::var(sk.var("t").unwrap());
    b.set_gen_differential("a", &du.wedge(&a).unwrap().scale(&t)).unwrap();
    assert!(b.build().is_err());
}

#[test]
fn contraction_examples() {
    let c = r7();
    let d12 = w(&dx(&c, "x1"), &dx(&c, "x2"));
    let d7 = VectorField::dual(&c, c.gen_of_var(c.var("x7").unwrap()).unwrap());
    let d1 = VectorField::dual(&c, c.gen_of_var(c.var("x1").unwrap()).unwrap());
    assert!(d12.contract(&d7).unwrap().is_zero());
    assert_eq!(d12.contract(&d1).unwrap(), dx(&c, "x2"));
}

#[test]
fn quaternionic_contraction_symmetry() {
    let c = coordinate_chart("r4", &["q1", "q2", "q3", "q4"], false).unwrap();
    let q: Vec<Poly> = (0..4).map(|i| Poly::var(Var(i))).collect();
    let dq: Vec<DiffForm> = (0..4).map(|i| DiffForm::generator(&c, i)).collect();
    let form = |v: [Poly; 4]| v.iter().zip(&dq).fold(DiffForm::zero(&c), |acc, (p, d)| &acc + &d.scale(p));
    let iq = [-q[1].clone(), q[0].clone(), -q[3].clone(), q[2].clone()];
    let jq = [-q[2].clone(), q[3].clone(), q[0].clone(), -q[1].clone()];
    let w1 = form(iq.clone());
    let w2 = form(jq.clone());
    let r1 = VectorField::new(&c, iq.to_vec()).unwrap();
    let r2 = VectorField::new(&c, jq.to_vec()).unwrap();
    let lhs = w2.ext_d().contract(&r1).unwrap();
    let rhs = -&w1.ext_d().contract(&r2).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn form_eq_examples() {
    let c = r7();
    let a = w(&dx(&c, "x1"), &dx(&c, "x2"));
    let b = -&w(&dx(&c, "x2"), &dx(&c, "x1"));
    assert!(form_eq(&a, &b).unwrap().equal);

    let mut bld = ChartBuilder::new("phi");
    let p: Vec<Var> = ["p1", "p2", "p3"].iter().map(|n| bld.coordinate(n)).collect();
    bld.relation(p.clone());
    let c = bld.build().unwrap();
    let lhs = dx(&c, "p3").scale(&x(&c, "p3"));
    let rhs = -&(&dx(&c, "p1").scale(&x(&c, "p1")) + &dx(&c, "p2").scale(&x(&c, "p2")));
    let eq = form_eq(&lhs, &rhs).unwrap();
    assert!(eq.equal);
    assert_eq!(eq.method, EqMethod::PivotRewrite);
    let unequal = form_eq(&lhs, &dx(&c, "p1")).unwrap();
    assert!(!unequal.equal);
    assert!(!unequal.residue.is_zero());
}

#[test]
fn annihilator_settles_tangential_identities() {
    // On S^2, (p1 dp2 - p2 dp1) ∧ ι vanishes only via the relation.
    let mut bld = ChartBuilder::new("s2");
    let p: Vec<Var> = ["p1", "p2", "p3"].iter().map(|n| bld.coordinate(n)).collect();
    bld.relation(p);
    let c = bld.build().unwrap();
    let iota = &(&dx(&c, "p1").scale(&x(&c, "p1")) + &dx(&c, "p2").scale(&x(&c, "p2"))) + &dx(&c, "p3").scale(&x(&c, "p3"));
    let two = w(&dx(&c, "p1"), &dx(&c, "p2"));
    let eq = form_eq(&w(&iota, &two), &DiffForm::zero(&c)).unwrap();
    assert!(eq.equal, "a 3-form on a 2-sphere vanishes");
    let eq = form_eq(&iota.scale(&x(&c, "p1")), &DiffForm::zero(&c)).unwrap();
    assert!(eq.equal);
    let eq = form_eq(&two, &DiffForm::zero(&c)).unwrap();
    assert!(!eq.equal);
}

#[test]
fn evaluation_examples() {
    let c = r7();
    let point: HashMap<Var, _> = (0..7).map(|i| (Var(i), rat(0))).collect();
    let e = |n: &str| VectorField::dual(&c, c.gen_of_var(c.var(n).unwrap()).unwrap());
    let d12 = w(&dx(&c, "x1"), &dx(&c, "x2"));
    assert_eq!(evaluate_at(&d12, &point, &[e("x1"), e("x2")]).unwrap(), rat(1));
    assert_eq!(evaluate_at(&d12, &point, &[e("x2"), e("x1")]).unwrap(), rat(-1));
    let mut pt = point.clone();
    pt.insert(c.var("x1").unwrap(), ratio(3, 2));
    let form = dx(&c, "x2").scale(&x(&c, "x1"));
    assert_eq!(evaluate_at(&form, &pt, &[e("x2")]).unwrap(), ratio(3, 2));
}

#[test]
fn evaluation_rejects_points_off_the_relation() {
    let c = coordinate_chart("s1", &["a", "b"], true).unwrap();
    let point: HashMap<Var, _> = [(Var(0), rat(1)), (Var(1), rat(1))].into();
    let form = DiffForm::generator(&c, 0);
    assert!(evaluate_at(&form, &point, &[VectorField::dual(&c, 0)]).is_err());
}

#[test]
fn mixed_charts_are_rejected() {
    let a = DiffForm::generator(&r7(), 0);
    let other = coordinate_chart("r2", &["y1", "y2"], false).unwrap();
    let b = DiffForm::generator(&other, 0);
    assert!(a.wedge(&b).is_err());
    assert!(form_eq(&a, &b).is_err());
}

#[test]
fn render_uses_expression_syntax() {
    let c = r7();
    let form = &(&dx(&c, "x2").scale(&x(&c, "x1")) - &dx(&c, "x7")) + &w(&dx(&c, "x3"), &dx(&c, "x4")).scale(&Poly::constant(ratio(1, 2)));
    assert_eq!(form.render(), "x1*dx2 - dx7 + 1/2*dx3^dx4");
}
