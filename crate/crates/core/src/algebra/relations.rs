//! Reduction modulo unit-sphere relations `v_1^2 + ... + v_k^2 = 1`.
//!
//! Each group rewrites `pivot^2 -> 1 - (sum of the other squares)`, where the
//! pivot is the last variable of the group. With pairwise disjoint groups the
//! relation polynomials form a Gröbner basis, so the result is the unique
//! remainder: two polynomials agree on the relation variety iff their normal
//! forms are equal.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, Poly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationGroup {
    vars: Vec<Var>,
}

impl RelationGroup {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Input("empty relation group".into()));
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::Input("relation group repeats a variable".into()));
        }
        Ok(RelationGroup { vars })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn pivot(&self) -> Var {
        *self.vars.last().unwrap()
    }

    pub fn others(&self) -> &[Var] {
        &self.vars[..self.vars.len() - 1]
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }

    /// `sum v^2 - 1`.
    pub fn relation_poly(&self) -> Poly {
        let mut p = Poly::constant(-Rational::one());
        for &v in &self.vars {
            p.add_term(Monomial::var_pow(v, 2), Rational::one());
        }
        p
    }

    /// `1 - sum of the non-pivot squares`, the image of `pivot^2`.
    fn pivot_square_image(&self) -> Poly {
        let mut p = Poly::one();
        for &v in self.others() {
            p.add_term(Monomial::var_pow(v, 2), -Rational::one());
        }
        p
    }
}

/// A set of pairwise disjoint relation groups over `num_vars` declared variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relations {
    groups: Vec<RelationGroup>,
    num_vars: usize,
    pivot_group: HashMap<Var, usize>,
}

impl Relations {
    pub fn new(groups: Vec<RelationGroup>, num_vars: usize) -> Result<Self> {
        let mut seen = vec![false; num_vars];
        for g in &groups {
            for &v in g.vars() {
                let slot = seen.get_mut(v.index()).ok_or(Error::UndeclaredVariable(v.0))?;
                if *slot {
                    return Err(Error::Input(format!("relation groups overlap in variable {}", v.0)));
                }
                *slot = true;
            }
        }
        let pivot_group = groups.iter().enumerate().map(|(i, g)| (g.pivot(), i)).collect();
        Ok(Relations { groups, num_vars, pivot_group })
    }

    pub fn groups(&self) -> &[RelationGroup] {
        &self.groups
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn group_of(&self, v: Var) -> Option<&RelationGroup> {
        self.groups.iter().find(|g| g.contains(v))
    }

    pub fn check_declared(&self, p: &Poly) -> Result<()> {
        match p.max_var() {
            Some(v) if v.index() >= self.num_vars => Err(Error::UndeclaredVariable(v.0)),
            _ => Ok(()),
        }
    }

    /// Unique representative of `p` modulo the relation ideal.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check_declared(p)?;
        Ok(self.reduce(p))
    }

    /// [`Relations::normal_form`] for polynomials already known to be declared.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.groups.is_empty() || p.is_zero() {
            return p.clone();
        }
        let needs_work = p.terms().any(|(m, _)| m.pairs().iter().any(|&(v, e)| e >= 2 && self.pivot_group.contains_key(&v)));
        if !needs_work {
            return p.clone();
        }
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut base = m.clone();
            let mut factor = Poly::one();
            for &(v, e) in m.pairs() {
                if e < 2 {
                    continue;
                }
                if let Some(&gi) = self.pivot_group.get(&v) {
                    base = base.with_exponent(v, e % 2);
                    let q = e / 2;
                    let power = cache.entry((gi, q)).or_insert_with(|| self.groups[gi].pivot_square_image().pow(q)).clone();
                    factor = &factor * &power;
                }
            }
            out += &factor.mul_monomial(&base, c);
        }
        out
    }

    /// True iff every relation holds exactly at the point.
    pub fn satisfied_by(&self, point: &HashMap<Var, Rational>) -> bool {
        self.groups.iter().all(|g| g.relation_poly().eval(point).map(|v| v.is_zero()).unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn x(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn relation_itself_reduces_to_one() {
        let g = RelationGroup::new((0..4).map(Var).collect()).unwrap();
        let rel = Relations::new(vec![g.clone()], 4).unwrap();
        let sum = &g.relation_poly() + &Poly::one();
        assert_eq!(rel.normal_form(&sum).unwrap(), Poly::one());
    }

    #[test]
    fn no_pivot_square_is_untouched() {
        let rel = Relations::new(vec![RelationGroup::new(vec![Var(0), Var(1)]).unwrap()], 2).unwrap();
        let p = &x(0) * &x(1);
        assert_eq!(rel.normal_form(&p).unwrap(), p);
    }

    #[test]
    fn two_group_hand_substitution() {
        // vars: s=0, c=1, l1=2, l2=3; groups {s,c}, {l1,l2}
        let rel =
            Relations::new(vec![RelationGroup::new(vec![Var(0), Var(1)]).unwrap(), RelationGroup::new(vec![Var(2), Var(3)]).unwrap()], 4)
                .unwrap();
        let (s, c, l1, l2) = (x(0), x(1), x(2), x(3));
        let u = &(&l1 * &s) + &(&l2 * &c);
        let input = &u * &u;
        let expected = &(&(&(&l1 * &l1) * &(&s * &s)) + &(&(&l1 * &l2) * &(&s * &c)).scale(&rat(2)))
            + &(&(&Poly::one() - &(&l1 * &l1)) * &(&Poly::one() - &(&s * &s)));
        assert_eq!(rel.normal_form(&input).unwrap(), expected);
    }

    #[test]
    fn undeclared_variable_is_rejected() {
        let rel = Relations::new(vec![], 2).unwrap();
        assert!(matches!(rel.normal_form(&x(5)), Err(Error::UndeclaredVariable(5))));
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        let a = RelationGroup::new(vec![Var(0), Var(1)]).unwrap();
        let b = RelationGroup::new(vec![Var(1), Var(2)]).unwrap();
        assert!(Relations::new(vec![a, b], 3).is_err());
    }
}
