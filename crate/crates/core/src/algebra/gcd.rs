//! Multivariate gcd over the rationals by recursive primitive remainder sequences.

use super::poly::Poly;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant polynomial has a variable");
    let ua = a.as_univariate(v);
    let ub = b.as_univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let pa = primitive(&ua, &ca);
    let pb = primitive(&ub, &cb);
    let c = gcd(&ca, &cb);
    let g = prs_gcd(pa, pb);
    (&c * &Poly::from_univariate(v, &g)).monic()
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive(coeffs: &[Poly], content: &Poly) -> Vec<Poly> {
    coeffs.iter().map(|c| c.div_exact(content).expect("content divides every coefficient")).collect()
}

fn trim(p: &mut Vec<Poly>) {
    while p.last().is_some_and(Poly::is_zero) {
        p.pop();
    }
}

fn prs_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return a;
        }
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let mut r = pseudo_remainder(&a, &b);
        trim(&mut r);
        a = b;
        b = if r.is_empty() {
            r
        } else {
            let c = content(&r);
            primitive(&r, &c)
        };
    }
}

fn pseudo_remainder(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &lcr;
            r[i + shift] -= &t;
        }
        trim(&mut r);
    }
    r
}

/// Numerator and denominator with no common polynomial factor and a monic
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFraction {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl PolyFraction {
    pub fn new(numerator: Poly, denominator: Poly) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        if numerator.is_zero() {
            return PolyFraction { numerator, denominator: Poly::one() };
        }
        let g = gcd(&numerator, &denominator);
        let num = numerator.div_exact(&g).expect("gcd divides numerator");
        let den = denominator.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading_coefficient();
        PolyFraction { numerator: num.scale(&lc.recip()), denominator: den.scale(&lc.recip()) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Var;
    use crate::algebra::rational::{rat, ratio};

    fn x(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn recovers_planted_common_factor() {
        let g = &(&x(0) * &x(1)) + &x(2).scale(&rat(3));
        let a = &g * &(&x(0) + &Poly::one());
        let b = &g * &(&x(1) - &x(2));
        assert_eq!(gcd(&a, &b), g.monic());
    }

    #[test]
    fn coprime_inputs_have_unit_gcd() {
        let a = &(&x(0) * &x(0)) + &Poly::one();
        let b = &x(0) + &x(1);
        assert_eq!(gcd(&a, &b), Poly::one());
    }

    #[test]
    fn fraction_is_reduced() {
        let common = &x(0) - &x(1);
        let f = PolyFraction::new(&common * &x(2), common.scale(&rat(2)));
        assert!(f.is_polynomial());
        assert_eq!(f.numerator, x(2).scale(&ratio(1, 2)));
    }
}
