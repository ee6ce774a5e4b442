use std::sync::Arc;

use super::*;
use crate::algebra::{rat, ratio, Poly, Var};
use crate::exterior::{coordinate_chart, Chart, ChartBuilder, DiffForm};

fn linear_form(chart: &Arc<Chart>, coeffs: &[Poly]) -> DiffForm {
    coeffs.iter().enumerate().fold(DiffForm::zero(chart), |acc, (g, c)| &acc + &DiffForm::generator(chart, g).scale(c))
}

fn v(i: u32) -> Poly {
    Poly::var(Var(i))
}

fn r7_omega1() -> DiffForm {
    let c = coordinate_chart("r7", &["x1", "x2", "x3", "x4", "x5", "x6", "x7"], false).unwrap();
    let z = Poly::zero;
    linear_form(&c, &[z(), v(0), z(), v(2), z(), v(4), Poly::one()])
}

#[test]
fn standard_form_on_r7() {
    let omega = r7_omega1();
    let r = reeb_field(&omega).unwrap();
    assert!(r.is_polynomial());
    assert_eq!(r.numerators, crate::exterior::VectorField::dual(omega.chart(), 6));
    let vol = volume_coefficient(&omega).unwrap();
    assert_eq!(vol.coefficient, Poly::from_int(6));
    assert_eq!(vol.reference_volume, "dx1^dx2^dx3^dx4^dx5^dx6^dx7");
}

#[test]
fn volume_scales_with_power() {
    let omega = r7_omega1();
    let doubled = omega.scale(&Poly::from_int(2));
    assert_eq!(volume_coefficient(&doubled).unwrap().coefficient, Poly::from_int(6 * 16));
    let c = coordinate_chart("r3", &["x", "y", "z"], false).unwrap();
    let w = linear_form(&c, &[Poly::zero(), v(0), Poly::one()]);
    assert_eq!(volume_coefficient(&w.scale(&Poly::from_int(2))).unwrap().coefficient, Poly::from_int(4));
}

#[test]
fn quaternionic_reeb_field_on_sphere() {
    let c = coordinate_chart("s3", &["q1", "q2", "q3", "q4"], true).unwrap();
    let iq = vec![-v(1), v(0), -v(3), v(2)];
    let omega = linear_form(&c, &iq);
    let r = reeb_field(&omega).unwrap();
    assert!(r.is_polynomial());
    assert_eq!(r.numerators.coeffs(), &iq[..]);
    // At q = e1: dq2 ∧ 2(dq1∧dq2 + dq3∧dq4) ∧ dq1 = -2 dq1∧dq2∧dq3∧dq4.
    assert_eq!(volume_coefficient(&omega).unwrap().coefficient, Poly::from_int(-2));
    let alpha = linear_form(&c, &[-v(1), v(0), v(3), -v(2)]);
    assert_eq!(volume_coefficient(&alpha).unwrap().coefficient, Poly::from_int(2));
}

#[test]
fn degenerate_form_is_not_contact() {
    let c = coordinate_chart("r3", &["x", "y", "z"], false).unwrap();
    let w = DiffForm::generator(&c, 2);
    assert!(matches!(reeb_field(&w), Err(crate::Error::NotContact(_))));
    let (_, cert) = contact_check(&w, &[], &SampleConfig::default()).unwrap();
    assert_eq!(cert.outcome(), Outcome::Refuted);
}

#[test]
fn rational_reeb_field() {
    // ω = x dy + (1 + x²) dz: R = (2x ∂y - ∂z) / (x² - 1).
    let c = coordinate_chart("r3", &["x", "y", "z"], false).unwrap();
    let w = linear_form(&c, &[Poly::zero(), v(0), &Poly::one() + &(&v(0) * &v(0))]);
    let r = reeb_field(&w).unwrap();
    assert!(!r.is_polynomial());
    assert_eq!(r.numerators.coeffs(), &[Poly::zero(), v(0).scale(&rat(2)), -Poly::one()]);
    assert_eq!(r.denominator, &(&v(0) * &v(0)) - &Poly::one());
}

#[test]
fn ladder_constant_and_bound() {
    let c = coordinate_chart("s2", &["a", "b", "e"], true).unwrap();
    let cfg = SampleConfig { samples: 200, seed: 1 };
    let cert = nonvanishing_certificate(&Poly::from_int(-3), &c, &[], &cfg);
    assert_eq!(cert.status, Status::CertifiedConstant { value: rat(-3) });
    let p = &Poly::from_int(3) + &(&v(0) * &v(1)).scale(&rat(2));
    let cert = nonvanishing_certificate(&p, &c, &[], &cfg);
    assert!(matches!(cert.status, Status::CertifiedSign { sign: Sign::Positive, method: SignMethod::CoefficientBound, .. }));
    // Every sampled value has the certified sign.
    for pt in relation_points(c.relations(), 100, 3) {
        assert!(p.eval(&pt).unwrap() > rat(0));
    }
}

#[test]
fn ladder_refutes_sign_change() {
    let c = coordinate_chart("s2", &["a", "b", "e"], true).unwrap();
    let p = &v(0) - &Poly::constant(ratio(1, 3));
    let cert = nonvanishing_certificate(&p, &c, &[], &SampleConfig { samples: 500, seed: 0 });
    match &cert.status {
        Status::Refuted { witness } => assert_eq!(witness.verify(&p, &c), Some(true)),
        other => panic!("expected refutation, got {other:?}"),
    }
    let cert = nonvanishing_certificate(&v(0), &c, &[], &SampleConfig { samples: 50, seed: 0 });
    match &cert.status {
        Status::Refuted { witness: w @ Witness::ExactZero { .. } } => assert_eq!(w.verify(&v(0), &c), Some(true)),
        other => panic!("expected exact zero, got {other:?}"),
    }
}

#[test]
fn ladder_is_inconclusive_without_proof() {
    let c = coordinate_chart("r1", &["t"], false).unwrap();
    let p = &Poly::one() + &(&v(0) * &v(0));
    let cert = nonvanishing_certificate(&p, &c, &[], &SampleConfig { samples: 100, seed: 0 });
    assert!(matches!(cert.status, Status::NumericUnrefuted { samples: 100, .. }));
}

fn circle_bundle(k: i64, f: i64) -> (Arc<Chart>, Poly, BoundHint) {
    let mut b = ChartBuilder::new("bundle");
    let s = b.param("s1");
    let cv = b.param("c1");
    b.relation(vec![s, cv]);
    let l1 = b.param("lambda1");
    let l2 = b.param("lambda2");
    b.relation(vec![l1, l2]);
    b.generator("g1");
    b.generator("g2");
    let chart = b.build().unwrap();
    let u = &(&Poly::var(l1) * &Poly::var(s)) + &(&Poly::var(l2) * &Poly::var(cv));
    let c = &(&u * &u).scale(&rat(k * k * f)) - &Poly::from_int(k);
    let hint = BoundHint { name: "u".into(), auxiliary: u, lo: rat(-1), hi: rat(1), assumed: false };
    (chart, c, hint)
}

#[test]
fn hint_certifies_via_sturm() {
    let (chart, c, hint) = circle_bundle(3, -2);
    assert!(verify_hint(&hint, &chart).is_ok());
    let q = express_in(&chart.relations().reduce(&c), &hint.auxiliary, chart.relations()).unwrap();
    assert_eq!(q, vec![rat(-3), rat(0), rat(-18)]);
    let cert = nonvanishing_certificate(&c, &chart, std::slice::from_ref(&hint), &SampleConfig::default());
    assert!(matches!(cert.status, Status::CertifiedSign { sign: Sign::Negative, method: SignMethod::Sturm, .. }));

    let wide = BoundHint { lo: rat(-2), hi: rat(2), ..hint.clone() };
    assert!(verify_hint(&wide, &chart).is_ok());
    let loose = BoundHint { lo: ratio(-1, 2), hi: ratio(1, 2), ..hint.clone() };
    assert!(verify_hint(&loose, &chart).is_err());
    let assumed = BoundHint { assumed: true, ..loose };
    let cert = nonvanishing_certificate(&c, &chart, &[assumed], &SampleConfig::default());
    assert_eq!(cert.outcome(), Outcome::Inconclusive);
    assert!(matches!(cert.status, Status::Conditional { .. }));
}

#[test]
fn certificate_json_shape() {
    let c = coordinate_chart("r1", &["t"], false).unwrap();
    let cert = nonvanishing_certificate(&Poly::from_int(2), &c, &[], &SampleConfig::default());
    let json = serde_json::to_value(&cert).unwrap();
    assert_eq!(json["status"]["status"], "certified_constant");
    assert_eq!(json["status"]["value"], "2");
    let back: Certificate = serde_json::from_value(json).unwrap();
    assert_eq!(back, cert);
}
