//! Adams' ρ, Hurwitz–Radon matrix families and their contact spheres.

use serde::{Deserialize, Serialize};

use crate::algebra::Poly;
use crate::algebra::Var;
use crate::error::{Error, Result};
use crate::exterior::{coordinate_chart, DiffForm, VectorField};
use crate::psphere::{PSphereSpec, ResidueEntry};

/// `ρ(n) = 2^c + 8d - 1` for `n = odd · 2^(c + 4d)`, `0 <= c <= 3`.
pub fn rho(n: u64) -> u64 {
    assert!(n >= 1, "rho is defined for positive integers");
    let k = n.trailing_zeros() as u64;
    let (c, d) = (k % 4, k / 4);
    (1 << c) + 8 * d - 1
}

type Matrix = Vec<Vec<i64>>;

/// Antisymmetric orthogonal integer matrices with `A_i² = -I` and
/// `A_i A_j + A_j A_i = 0`. Serialised as `{"m": .., "matrices": [[row-major]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzRadonFamily {
    pub m: usize,
    pub matrices: Vec<Vec<i64>>,
}

impl HurwitzRadonFamily {
    pub fn from_matrices(m: usize, mats: &[Matrix]) -> Self {
        HurwitzRadonFamily { m, matrices: mats.iter().map(|a| a.iter().flatten().copied().collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrix(&self, i: usize) -> Matrix {
        self.matrices[i].chunks(self.m).map(<[i64]>::to_vec).collect()
    }

    pub fn entry(&self, i: usize, row: usize, col: usize) -> i64 {
        self.matrices[i][row * self.m + col]
    }
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn neg(a: &Matrix) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|i| (0..n * m).map(|j| a[i / m][j / m] * b[i % m][j % m]).collect()).collect()
}

fn quat_mul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_conj(a: [i64; 4]) -> [i64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Cayley–Dickson: `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.
fn oct_mul(x: [i64; 8], y: [i64; 8]) -> [i64; 8] {
    let split = |v: [i64; 8]| ([v[0], v[1], v[2], v[3]], [v[4], v[5], v[6], v[7]]);
    let ((a, b), (c, d)) = (split(x), split(y));
    let sub = |p: [i64; 4], q: [i64; 4]| [p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]];
    let plus = |p: [i64; 4], q: [i64; 4]| [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]];
    let l = sub(quat_mul(a, c), quat_mul(quat_conj(d), b));
    let r = plus(quat_mul(d, a), quat_mul(b, quat_conj(c)));
    [l[0], l[1], l[2], l[3], r[0], r[1], r[2], r[3]]
}

fn left_mult_quat(u: usize) -> Matrix {
    let mut e = [0; 4];
    e[u] = 1;
    let mut m = vec![vec![0; 4]; 4];
    for j in 0..4 {
        let mut b = [0; 4];
        b[j] = 1;
        let col = quat_mul(e, b);
        for i in 0..4 {
            m[i][j] = col[i];
        }
    }
    m
}

fn left_mult_oct(u: usize) -> Matrix {
    let mut e = [0; 8];
    e[u] = 1;
    let mut m = vec![vec![0; 8]; 8];
    for j in 0..8 {
        let mut b = [0; 8];
        b[j] = 1;
        let col = oct_mul(e, b);
        for i in 0..8 {
            m[i][j] = col[i];
        }
    }
    m
}

fn power_of_two_family(k: u32) -> Vec<Matrix> {
    match k {
        0 => vec![],
        1 => vec![vec![vec![0, -1], vec![1, 0]]],
        2 => (1..4).map(left_mult_quat).collect(),
        3 => (1..8).map(left_mult_oct).collect(),
        _ => {
            // Size 16n from size n: J⊗I8⊗In, P⊗E_j⊗In, Q⊗I8⊗B_i.
            let inner = power_of_two_family(k - 4);
            let n = 1usize << (k - 4);
            let j = vec![vec![0, -1], vec![1, 0]];
            let p = vec![vec![1, 0], vec![0, -1]];
            let q = vec![vec![0, 1], vec![1, 0]];
            let mut out = vec![kron(&kron(&j, &identity(8)), &identity(n))];
            out.extend((1..8).map(|u| kron(&kron(&p, &left_mult_oct(u)), &identity(n))));
            out.extend(inner.iter().map(|b| kron(&kron(&q, &identity(8)), b)));
            out
        }
    }
}

/// A family of `ρ(m)` matrices of size `m`, validated before it is returned.
pub fn hurwitz_radon_family(m: usize) -> Result<HurwitzRadonFamily> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::Input(format!("matrix size must be a positive even integer, got {m}")));
    }
    let k = m.trailing_zeros();
    let odd = m >> k;
    let mats: Vec<Matrix> = power_of_two_family(k).iter().map(|a| kron(a, &identity(odd))).collect();
    let family = HurwitzRadonFamily::from_matrices(m, &mats);
    family_check(&family)?;
    if family.len() as u64 != rho(m as u64) {
        return Err(Error::Internal(format!("built {} matrices for m = {m}, expected {}", family.len(), rho(m as u64))));
    }
    Ok(family)
}

/// Exact integer check of every family invariant.
pub fn family_check(family: &HurwitzRadonFamily) -> Result<()> {
    let m = family.m;
    if family.matrices.iter().any(|a| a.len() != m * m) {
        return Err(Error::Input(format!("every matrix must have {} entries", m * m)));
    }
    let id = identity(m);
    let zero = vec![vec![0; m]; m];
    let mats: Vec<Matrix> = (0..family.len()).map(|i| family.matrix(i)).collect();
    for (i, a) in mats.iter().enumerate() {
        if transpose(a) != neg(a) {
            return Err(Error::Internal(format!("A{} is not antisymmetric", i + 1)));
        }
        if mul(&transpose(a), a) != id {
            return Err(Error::Internal(format!("A{} is not orthogonal", i + 1)));
        }
        if mul(a, a) != neg(&id) {
            return Err(Error::Internal(format!("A{}² != -I", i + 1)));
        }
        for (j, b) in mats.iter().enumerate().skip(i + 1) {
            if add(&mul(a, b), &mul(b, a)) != zero {
                return Err(Error::Internal(format!("A{} and A{} do not anticommute", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn coordinate_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// `ω_i = ⟨A_i x, dx⟩` on the unit sphere of `R^m`.
pub fn matrix_contact_sphere(family: &HurwitzRadonFamily) -> Result<PSphereSpec> {
    let m = family.m;
    if !m.is_multiple_of(4) {
        return Err(Error::Precondition(format!("matrix contact spheres need m ≡ 0 mod 4, got {m}")));
    }
    if family.is_empty() {
        return Err(Error::Input("empty family".into()));
    }
    family_check(family)?;
    let names = coordinate_names(m);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let chart = coordinate_chart(&format!("hr{m}"), &refs, true)?;
    let generators = (0..family.len())
        .map(|i| {
            let coeffs: Vec<Poly> = ax(family, i);
            VectorField::new(&chart, coeffs).map(|v| dual_form(&chart, &v))
        })
        .collect::<Result<Vec<_>>>()?;
    PSphereSpec::new(format!("hr-sphere({m})"), generators)
}

/// `A_i x` as polynomials in the coordinates.
pub fn ax(family: &HurwitzRadonFamily, i: usize) -> Vec<Poly> {
    let m = family.m;
    (0..m)
        .map(|h| {
            let mut p = Poly::zero();
            for j in 0..m {
                let a = family.entry(i, h, j);
                if a != 0 {
                    p += &Poly::var(Var(j as u32)).scale(&crate::algebra::rat(a));
                }
            }
            p
        })
        .collect()
}

fn dual_form(chart: &std::sync::Arc<crate::exterior::Chart>, v: &VectorField) -> DiffForm {
    v.coeffs().iter().enumerate().fold(DiffForm::zero(chart), |acc, (g, c)| &acc + &DiffForm::generator(chart, g).scale(c))
}

/// The relation-level identities: `ω_i(R_j) ≡ δ_ij` and
/// `R_i⌟dω_j + R_j⌟dω_i ≡ 0` on the sphere with `R_i = A_i x`, for `i <= j`.
/// No wedge powers are formed, so this scales to large `m`.
pub fn hr_relation_checks(family: &HurwitzRadonFamily) -> Result<Vec<ResidueEntry>> {
    let spec = matrix_contact_sphere(family)?;
    let chart = &spec.chart;
    let fields: Vec<VectorField> = (0..family.len()).map(|i| VectorField::new(chart, ax(family, i))).collect::<Result<_>>()?;
    let dws: Vec<DiffForm> = spec.generators.iter().map(DiffForm::ext_d).collect();
    let mut out = Vec::new();
    for i in 0..family.len() {
        for j in i..family.len() {
            let delta = if i == j { Poly::one() } else { Poly::zero() };
            let value = &spec.generators[i].apply(&fields[j])? - &delta;
            out.push(ResidueEntry::of_poly(format!("ω{}(R{}) - δ", i + 1, j + 1), chart, &value));
            let form = &dws[j].contract(&fields[i])? + &dws[i].contract(&fields[j])?;
            out.push(ResidueEntry::of_form(format!("R{}⌟dω{} + R{}⌟dω{}", i + 1, j + 1, j + 1, i + 1), &form)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        let table = [(1, 0), (2, 1), (4, 3), (8, 7), (12, 3), (16, 8), (32, 9), (64, 11), (128, 15), (256, 16)];
        for (n, r) in table {
            assert_eq!(rho(n), r, "rho({n})");
        }
    }

    #[test]
    fn small_families() {
        assert_eq!(hurwitz_radon_family(2).unwrap().matrix(0), vec![vec![0, -1], vec![1, 0]]);
        let f4 = hurwitz_radon_family(4).unwrap();
        // i·q = (-q2, q1, -q4, q3)
        assert_eq!(f4.matrix(0), vec![vec![0, -1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, 0, 1, 0]]);
        for m in [6, 8, 12, 16, 32] {
            let f = hurwitz_radon_family(m).unwrap();
            assert_eq!(f.len() as u64, rho(m as u64));
        }
        assert!(hurwitz_radon_family(3).is_err());
    }

    #[test]
    fn broken_family_is_rejected() {
        let mut f = hurwitz_radon_family(4).unwrap();
        f.matrices[1] = f.matrices[0].clone();
        assert!(family_check(&f).is_err());
    }

    #[test]
    fn json_shape() {
        let f = hurwitz_radon_family(2).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, serde_json::json!({"m": 2, "matrices": [[0, -1, 1, 0]]}));
    }

    #[test]
    fn relation_level_checks_hold() {
        for m in [4, 8] {
            let checks = hr_relation_checks(&hurwitz_radon_family(m).unwrap()).unwrap();
            assert!(checks.iter().all(|e| e.zero), "{checks:?}");
        }
    }
}
