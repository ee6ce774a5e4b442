//! Circle-valued pencils on torus bundles, the `T³` family and the
//! pullback identities for maps to `S²`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{format_rational, Poly, Rational, Var};
use crate::contact::BoundHint;
use crate::error::{Error, Result};
use crate::exterior::{form_eq, Chart, ChartBuilder, DiffForm};
use crate::psphere::PSphereSpec;

fn p(v: Var) -> Poly {
    Poly::var(v)
}

fn gen(chart: &Arc<Chart>, name: &str) -> DiffForm {
    DiffForm::generator(chart, chart.generator(name).expect("generator declared by this module"))
}

fn konst(r: &Rational) -> Poly {
    Poly::constant(r.clone())
}

/// `ω1 = cos θ1 dθ2 + k sin θ1 α`, `ω2 = -sin θ1 dθ2 + k cos θ1 α` on a
/// torus bundle with connection form `α`, `dα = f dθ1∧dθ2`. The volume
/// coefficient is `k(k f u² - 1)` with `u = λ1 sin θ1 + λ2 cos θ1`, so the
/// pencil is contact when `k ≠ 0` and `k f <= 0`.
pub fn torus_bundle_circle(f: &Rational, k: &Rational) -> Result<PSphereSpec> {
    use num_traits::Zero;
    if k.is_zero() {
        return Err(Error::Precondition("k must be nonzero".into()));
    }
    if (f * k) > Rational::zero() {
        return Err(Error::Precondition(format!("k·f = {} must not be positive", format_rational(&(f * k)))));
    }
    let mut b = ChartBuilder::new(format!("t2-bundle-circle({},{})", format_rational(f), format_rational(k)));
    let s = b.func("s1");
    let c = b.func("c1");
    b.relation(vec![s, c]);
    for g in ["g1", "g2", "alpha"] {
        b.generator(g);
    }
    let sk = b.skeleton()?;
    let (g1, g2) = (gen(&sk, "g1"), gen(&sk, "g2"));
    b.set_var_differential(s, &g1.scale(&p(c)))?;
    b.set_var_differential(c, &-&g1.scale(&p(s)))?;
    b.set_gen_differential("alpha", &g1.wedge(&g2)?.scale(&konst(f)))?;
    let chart = b.build()?;
    let (g2, alpha) = (gen(&chart, "g2"), gen(&chart, "alpha"));
    let kp = konst(k);
    let w1 = &g2.scale(&p(c)) + &alpha.scale(&(&kp * &p(s)));
    let w2 = &(-&g2.scale(&p(s))) + &alpha.scale(&(&kp * &p(c)));
    let spec = PSphereSpec::new(chart.name().to_string(), vec![w1, w2])?;
    let l = spec.lambda_vars();
    let u = &(&p(l[0]) * &p(s)) + &(&p(l[1]) * &p(c));
    let hint = BoundHint {
        name: "u".into(),
        auxiliary: u,
        lo: Rational::from_integer((-1).into()),
        hi: Rational::from_integer(1.into()),
        assumed: false,
    };
    Ok(spec.with_hints(vec![hint]))
}

/// `ω1 = cos nθ1 dθ2 + sin nθ1 dθ3`, `ω2 = -sin nθ1 dθ2 + cos nθ1 dθ3` on `T³`.
pub fn t3_circle(n: i64) -> Result<PSphereSpec> {
    if n == 0 {
        return Err(Error::Precondition("n must be nonzero".into()));
    }
    let mut b = ChartBuilder::new(format!("t3-circle({n})"));
    let s = b.func("s");
    let c = b.func("c");
    b.relation(vec![s, c]);
    for g in ["g1", "g2", "g3"] {
        b.generator(g);
    }
    let sk = b.skeleton()?;
    let g1 = gen(&sk, "g1");
    let np = Poly::from_int(n);
    b.set_var_differential(s, &g1.scale(&(&np * &p(c))))?;
    b.set_var_differential(c, &-&g1.scale(&(&np * &p(s))))?;
    let chart = b.build()?;
    let (g2, g3) = (gen(&chart, "g2"), gen(&chart, "g3"));
    let w1 = &g2.scale(&p(c)) + &g3.scale(&p(s));
    let w2 = &(-&g2.scale(&p(s))) + &g3.scale(&p(c));
    PSphereSpec::new(chart.name().to_string(), vec![w1, w2])
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub equal: bool,
    pub residue: String,
}

impl IdentityCheck {
    fn compare(label: impl Into<String>, lhs: &DiffForm, rhs: &DiffForm) -> Result<Self> {
        let eq = form_eq(lhs, rhs)?;
        Ok(IdentityCheck { label: label.into(), equal: eq.equal, residue: eq.residue.render() })
    }
}

/// The pullback pencil `ω_i = φ_j dφ_k - φ_k dφ_j + k φ_i α` ((i, j, k) cyclic)
/// on a chart with `Σ φ_i² = 1` and a connection form `α`.
struct PullbackChart {
    chart: Arc<Chart>,
    phi: [Var; 3],
    lambda: [Poly; 3],
    k: Poly,
    alpha: DiffForm,
    dphi: [DiffForm; 3],
}

impl PullbackChart {
    /// `lambda = None` keeps λ symbolic on its unit circle. `curvature`
    /// chooses `dα = ν1 dφ2∧dφ3 + ν2 dφ3∧dφ1 + ν3 dφ1∧dφ2` (`false`) or
    /// `dα = f Φ*Ω` (`true`).
    fn new(lambda: Option<&[Rational; 3]>, curvature: bool) -> Result<Self> {
        let mut b = ChartBuilder::new("s2-pullback");
        let phi = [b.coordinate("phi1"), b.coordinate("phi2"), b.coordinate("phi3")];
        b.relation(phi.to_vec());
        let lambda = match lambda {
            None => {
                let l = [b.param("lambda1"), b.param("lambda2"), b.param("lambda3")];
                b.relation(l.to_vec());
                l.map(p)
            }
            Some(vals) => vals.clone().map(Poly::constant),
        };
        let k = p(b.param("k"));
        b.generator("alpha");
        let coeffs: Vec<Poly> = if curvature {
            let f = p(b.param("f"));
            phi.iter().map(|&v| &f * &p(v)).collect()
        } else {
            (1..=3).map(|i| p(b.param(&format!("nu{i}")))).collect()
        };
        let sk = b.skeleton()?;
        let d = |v: Var| DiffForm::var_differential(&sk, v);
        let mut da = DiffForm::zero(&sk);
        for i in 0..3 {
            let (j, l) = ((i + 1) % 3, (i + 2) % 3);
            da = &da + &d(phi[j]).wedge(&d(phi[l]))?.scale(&coeffs[i]);
        }
        b.set_gen_differential("alpha", &da)?;
        let chart = b.build()?;
        let alpha = gen(&chart, "alpha");
        let dphi = phi.map(|v| DiffForm::var_differential(&chart, v));
        Ok(PullbackChart { chart, phi, lambda, k, alpha, dphi })
    }

    fn omega(&self, i: usize) -> DiffForm {
        let (j, l) = ((i + 1) % 3, (i + 2) % 3);
        let rot = &self.dphi[l].scale(&p(self.phi[j])) - &self.dphi[j].scale(&p(self.phi[l]));
        &rot + &self.alpha.scale(&(&self.k * &p(self.phi[i])))
    }

    fn omega_lambda(&self) -> DiffForm {
        (0..3).fold(DiffForm::zero(&self.chart), |acc, i| &acc + &self.omega(i).scale(&self.lambda[i]))
    }

    fn lambda_phi(&self) -> Poly {
        (0..3).fold(Poly::zero(), |acc, i| &acc + &(&self.lambda[i] * &p(self.phi[i])))
    }

    fn pair(&self, i: usize) -> Result<DiffForm> {
        let (j, l) = ((i + 1) % 3, (i + 2) % 3);
        self.dphi[j].wedge(&self.dphi[l])
    }

    /// `Φ*Ω = φ1 dφ2∧dφ3 + φ2 dφ3∧dφ1 + φ3 dφ1∧dφ2`.
    fn area(&self) -> Result<DiffForm> {
        let mut out = DiffForm::zero(&self.chart);
        for i in 0..3 {
            out = &out + &self.pair(i)?.scale(&p(self.phi[i]));
        }
        Ok(out)
    }

    /// `k(Σλφ)(Σ λ_i P_i)∧α + k_area Φ*Ω∧α + k²(Σλφ)² α∧dα`.
    fn formula_rhs(&self, pairs: &[DiffForm; 3], area: &DiffForm, k_area: &Poly) -> Result<DiffForm> {
        let lp = self.lambda_phi();
        let mixed = (0..3).fold(DiffForm::zero(&self.chart), |acc, i| &acc + &pairs[i].scale(&self.lambda[i]));
        let t1 = mixed.wedge(&self.alpha)?.scale(&(&self.k * &lp));
        let t2 = area.wedge(&self.alpha)?.scale(k_area);
        let t3 = self.alpha.wedge(&self.alpha.ext_d())?.scale(&(&(&self.k * &self.k) * &(&lp * &lp)));
        Ok(&(&t1 + &t2) + &t3)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackFormulaReport {
    /// `Ω_λ∧dΩ_λ` against the closed form, λ on the unit circle.
    pub symbolic: IdentityCheck,
    /// The same identity at `λ = (1, 0, 0)`.
    pub specialized: IdentityCheck,
    /// Control: the `Φ*Ω∧α` coefficient `k` replaced by `k + 1`; must fail.
    pub mutated: IdentityCheck,
    pub holds: bool,
}

/// Verifies the closed form of `Ω_λ∧dΩ_λ` for the pullback pencil.
pub fn pullback_formula_verify() -> Result<PullbackFormulaReport> {
    let check = |lambda: Option<&[Rational; 3]>, bump: bool, label: &str| -> Result<IdentityCheck> {
        let c = PullbackChart::new(lambda, false)?;
        let w = c.omega_lambda();
        let lhs = w.wedge(&w.ext_d())?;
        let pairs = [c.pair(0)?, c.pair(1)?, c.pair(2)?];
        let k_area = if bump { &c.k + &Poly::one() } else { c.k.clone() };
        let rhs = c.formula_rhs(&pairs, &c.area()?, &k_area)?;
        IdentityCheck::compare(label, &lhs, &rhs)
    };
    let e1 = [Rational::from_integer(1.into()), Rational::from_integer(0.into()), Rational::from_integer(0.into())];
    let symbolic = check(None, false, "Ω∧dΩ = closed form")?;
    let specialized = check(Some(&e1), false, "ω1∧dω1 = closed form at λ = (1, 0, 0)")?;
    let mutated = check(None, true, "control: k → k + 1 on Φ*Ω∧α")?;
    let holds = symbolic.equal && specialized.equal && !mutated.equal;
    Ok(PullbackFormulaReport { symbolic, specialized, mutated, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReductionReport {
    /// With `dφ_j∧dφ_k = C_i Φ*Ω` and `dα = f Φ*Ω` imposed on a frame
    /// `e1, e2, α`, the closed form reduces to
    /// `k(1 + k f (Σλφ)² + (Σλφ)(Σ λ_i C_i)) Φ*Ω∧α`.
    pub reduction: IdentityCheck,
    /// Control: the `C` substitutions dropped; must fail.
    pub control: IdentityCheck,
    /// Identity map of `S²` (`C_i = φ_i`): direct `Ω∧dΩ` against
    /// `k(1 + (k f + 1)(Σλφ)²) Φ*Ω∧α`.
    pub identity_instance: IdentityCheck,
    pub holds: bool,
}

pub fn pullback_reduction_verify() -> Result<PullbackReductionReport> {
    let mut b = ChartBuilder::new("s2-pullback-frame");
    let phi: Vec<Var> = (1..=3).map(|i| b.param(&format!("phi{i}"))).collect();
    b.relation(phi.clone());
    let lam: Vec<Var> = (1..=3).map(|i| b.param(&format!("lambda{i}"))).collect();
    b.relation(lam.clone());
    let cs: Vec<Var> = (1..=3).map(|i| b.param(&format!("C{i}"))).collect();
    let k = p(b.param("k"));
    let f = p(b.param("f"));
    for g in ["e1", "e2", "alpha"] {
        b.generator(g);
    }
    let sk = b.skeleton()?;
    b.set_gen_differential("alpha", &gen(&sk, "e1").wedge(&gen(&sk, "e2"))?.scale(&f))?;
    let chart = b.build()?;
    let (e1, e2, alpha) = (gen(&chart, "e1"), gen(&chart, "e2"), gen(&chart, "alpha"));
    let area = e1.wedge(&e2)?;
    let lp = (0..3).fold(Poly::zero(), |acc, i| &acc + &(&p(lam[i]) * &p(phi[i])));
    let lc = (0..3).fold(Poly::zero(), |acc, i| &acc + &(&p(lam[i]) * &p(cs[i])));
    let rhs_with = |pairs: Vec<DiffForm>| -> Result<DiffForm> {
        let mixed = (0..3).fold(DiffForm::zero(&chart), |acc, i| &acc + &pairs[i].scale(&p(lam[i])));
        let t1 = mixed.wedge(&alpha)?.scale(&(&k * &lp));
        let t2 = area.wedge(&alpha)?.scale(&k);
        let t3 = alpha.wedge(&alpha.ext_d())?.scale(&(&(&k * &k) * &(&lp * &lp)));
        Ok(&(&t1 + &t2) + &t3)
    };
    let inner = &(&Poly::one() + &(&(&k * &f) * &(&lp * &lp))) + &(&lp * &lc);
    let expected = area.wedge(&alpha)?.scale(&(&k * &inner));
    let substituted = rhs_with(cs.iter().map(|&c| area.scale(&p(c))).collect())?;
    let dropped = rhs_with(vec![DiffForm::zero(&chart); 3])?;
    let reduction = IdentityCheck::compare("closed form reduces to the scalar expression", &substituted, &expected)?;
    let control = IdentityCheck::compare("control: C substitutions dropped", &dropped, &expected)?;

    let c = PullbackChart::new(None, true)?;
    let w = c.omega_lambda();
    let lhs = w.wedge(&w.ext_d())?;
    let fv = p(c.chart.var("f").expect("declared above"));
    let lpc = c.lambda_phi();
    let coeff = &c.k * &(&Poly::one() + &(&(&(&c.k * &fv) + &Poly::one()) * &(&lpc * &lpc)));
    let rhs = c.area()?.wedge(&c.alpha)?.scale(&coeff);
    let identity_instance = IdentityCheck::compare("identity map: Ω∧dΩ = k(1 + (kf + 1)(Σλφ)²) Φ*Ω∧α", &lhs, &rhs)?;
    let holds = reduction.equal && !control.equal && identity_instance.equal;
    Ok(PullbackReductionReport { reduction, control, identity_instance, holds })
}
