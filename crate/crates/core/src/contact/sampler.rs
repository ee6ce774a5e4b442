//! Exact rational points on the relation variety.
//!
//! Unit groups are sampled through the inverse stereographic projection, so
//! every point satisfies its relation exactly; free variables come from a
//! small rational grid.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ratio, Rational, Relations, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { samples: 10_000, seed: 0 }
    }
}

/// Point on the unit sphere in `t.len() + 1` dimensions:
/// `(2t / (1 + |t|²), (|t|² - 1) / (1 + |t|²))`.
pub fn unit_point(t: &[Rational]) -> Vec<Rational> {
    let s: Rational = t.iter().map(|x| x * x).sum();
    let den = &s + Rational::one();
    let mut out: Vec<Rational> = t.iter().map(|x| x * Rational::from_integer(2.into()) / &den).collect();
    out.push((&s - Rational::one()) / &den);
    out
}

fn small_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Random exact unit vector with `k` entries.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    if k == 1 {
        return vec![if rng.gen_bool(0.5) { Rational::one() } else { -Rational::one() }];
    }
    let t: Vec<Rational> = (0..k - 1).map(|_| small_rational(rng, 12, 6)).collect();
    unit_point(&t)
}

/// Deterministic point: free variables zero, each group at `(0, ..., 0, 1)`.
pub fn base_point(relations: &Relations) -> HashMap<Var, Rational> {
    let mut point: HashMap<Var, Rational> = (0..relations.num_vars() as u32).map(|i| (Var(i), Rational::zero())).collect();
    for g in relations.groups() {
        point.insert(g.pivot(), Rational::one());
    }
    point
}

/// `count` exact points satisfying every relation. The first is
/// [`base_point`]; the rest are drawn from a ChaCha stream seeded by `seed`.
pub fn relation_points(relations: &Relations, count: usize, seed: u64) -> Vec<HashMap<Var, Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(base_point(relations));
    while out.len() < count {
        let mut point = HashMap::new();
        for i in 0..relations.num_vars() as u32 {
            if relations.group_of(Var(i)).is_none() {
                point.insert(Var(i), small_rational(&mut rng, 8, 4));
            }
        }
        for g in relations.groups() {
            for (v, x) in g.vars().iter().zip(random_unit_vector(&mut rng, g.vars().len())) {
                point.insert(*v, x);
            }
        }
        out.push(point);
    }
    out
}
