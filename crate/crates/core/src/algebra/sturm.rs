//! Exact sign analysis of univariate rational polynomials on closed intervals.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Poly, Var};
use super::rational::{rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SturmVerdict {
    StrictlyPositive,
    StrictlyNegative,
    HasZero,
}

/// Closed rational interval `[lo, hi]`; `lo == hi` marks an exact root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "super::rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "super::rational::serde_rational")]
    pub hi: Rational,
}

impl Interval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmResult {
    pub verdict: SturmVerdict,
    pub witness: Option<Interval>,
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense(Vec<Rational>);

impl Dense {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Dense(coeffs)
    }

    /// Requires `p` to involve at most one variable.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let vars = p.vars();
        if vars.len() > 1 {
            return Err(Error::Input(format!("expected a univariate polynomial, found {} variables", vars.len())));
        }
        let v = vars.into_iter().next().unwrap_or(Var(0));
        let coeffs = p.as_univariate(v).iter().map(Poly::constant_term).collect();
        Ok(Dense::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Dense {
        Dense::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    fn rem(&self, d: &Dense) -> Dense {
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.0.last().expect("division by zero polynomial");
        while r.len() > dd && !r.is_empty() {
            let q = r.last().unwrap() / lc;
            let shift = r.len() - 1 - dd;
            for (i, c) in d.0.iter().enumerate() {
                r[i + shift] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Dense::new(r)
    }

    fn div_exact(&self, d: &Dense) -> Dense {
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.0.last().expect("division by zero polynomial");
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let c = r.last().unwrap() / lc;
            let shift = r.len() - 1 - dd;
            for (i, dc) in d.0.iter().enumerate() {
                r[i + shift] -= &c * dc;
            }
            q[shift] = c;
            r.pop();
        }
        Dense::new(q)
    }

    fn monic(&self) -> Dense {
        match self.0.last() {
            Some(lc) => Dense(self.0.iter().map(|c| c / lc).collect()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Dense) -> Dense {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> Dense {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g)
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of a squarefree polynomial.
pub struct SturmChain {
    chain: Vec<Dense>,
}

impl SturmChain {
    pub fn new(p: &Dense) -> Self {
        let mut chain = vec![p.clone()];
        if p.degree() > 0 {
            chain.push(p.derivative());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(Dense(r.0.into_iter().map(|c| -c).collect()));
            }
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign_of(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Exact sign classification of `p` on `[lo, hi]`. A `HasZero` witness has
/// width at most `2^-30 * (hi - lo)`.
pub fn sturm_sign_on_interval(p: &Poly, lo: &Rational, hi: &Rational) -> Result<SturmResult> {
    if lo >= hi {
        return Err(Error::Input("interval must satisfy lo < hi".into()));
    }
    let dense = Dense::from_poly(p)?;
    if dense.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let target = (hi - lo) / Rational::from_integer(num_bigint::BigInt::one() << 30);
    Ok(sign_on_interval(&dense, lo, hi, &target))
}

/// As [`sturm_sign_on_interval`] with an absolute witness width.
pub fn sign_on_interval(p: &Dense, lo: &Rational, hi: &Rational, width: &Rational) -> SturmResult {
    let sq = p.squarefree();
    // Dropping repeated factors can flip the sign, so read it off `p`.
    let at_lo = p.eval(lo);
    if at_lo.is_zero() {
        return has_zero(lo.clone(), lo.clone());
    }
    let chain = SturmChain::new(&sq);
    if chain.count_roots(lo, hi) == 0 {
        let verdict = if at_lo.is_positive() { SturmVerdict::StrictlyPositive } else { SturmVerdict::StrictlyNegative };
        return SturmResult { verdict, witness: None };
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while &(&b - &a) > width {
        let mid = (&a + &b) / rat(2);
        if sq.eval(&mid).is_zero() {
            return has_zero(mid.clone(), mid);
        }
        if chain.count_roots(&a, &mid) > 0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    if sq.eval(&b).is_zero() {
        return has_zero(b.clone(), b);
    }
    has_zero(a, b)
}

fn has_zero(lo: Rational, hi: Rational) -> SturmResult {
    SturmResult { verdict: SturmVerdict::HasZero, witness: Some(Interval { lo, hi }) }
}

/// Bisects on the sign of `p` itself. Requires `p(a)` and `p(b)` of opposite
/// signs; returns an interval of width at most `width` whose endpoints keep
/// opposite signs, or a degenerate interval at an exact root.
pub fn isolate_sign_change(p: &Dense, a: &Rational, b: &Rational, width: &Rational) -> Result<Interval> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let sa = sign_of(&p.eval(&a));
    let sb = sign_of(&p.eval(&b));
    if sa == 0 {
        return Ok(Interval { lo: a.clone(), hi: a });
    }
    if sb == 0 {
        return Ok(Interval { lo: b.clone(), hi: b });
    }
    if sa == sb {
        return Err(Error::Precondition("endpoints do not bracket a sign change".into()));
    }
    while &(&b - &a) > width {
        let mid = (&a + &b) / rat(2);
        let sm = sign_of(&p.eval(&mid));
        if sm == 0 {
            return Ok(Interval { lo: mid.clone(), hi: mid });
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Interval { lo: a, hi: b })
}
