//! Fraction-free (Bareiss) elimination over polynomial rings, plus dense
//! rational helpers.

use num_traits::Zero;

use super::gcd::PolyFraction;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Solution `x_i = numerators[i] / denominator` sharing one denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonSolution {
    pub numerators: Vec<Poly>,
    pub denominator: Poly,
}

fn pivot_cost(p: &Poly) -> (u32, usize) {
    (p.total_degree(), p.num_terms())
}

/// Solves the square system `m * x = b` over the fraction field.
pub fn solve_linear(m: &[Vec<Poly>], b: &[Poly]) -> Result<Vec<PolyFraction>> {
    let sol = solve_linear_common(m, b)?;
    Ok(sol.numerators.into_iter().map(|n| PolyFraction::new(n, sol.denominator.clone())).collect())
}

/// Bareiss elimination with full pivoting followed by exact
/// back-substitution. Every division performed is exact.
pub fn solve_linear_common(m: &[Vec<Poly>], b: &[Poly]) -> Result<CommonSolution> {
    let n = m.len();
    if b.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::Input(format!("expected a square {n}x{n} system with {n} right-hand sides")));
    }
    if n == 0 {
        return Ok(CommonSolution { numerators: vec![], denominator: Poly::one() });
    }
    let mut a: Vec<Vec<Poly>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut prev = Poly::one();
    for k in 0..n {
        let pivot = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| pivot_cost(&a[i][j]));
        let Some((pi, pj)) = pivot else {
            return Err(Error::SingularSystem { determinant: Poly::zero() });
        };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            cols.swap(k, pj);
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            if row[k].is_zero() {
                // (pivot * a_ij - 0) / prev
                for j in k + 1..=n {
                    let t = &pivot_row[k] * &row[j];
                    row[j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
            } else {
                for j in k + 1..=n {
                    let t = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                    row[j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                row[k] = Poly::zero();
            }
        }
        prev = a[k][k].clone();
    }
    let det = prev;
    let mut y = vec![Poly::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det * &a[i][n];
        for j in i + 1..n {
            acc -= &(&a[i][j] * &y[j]);
        }
        y[i] = acc.div_exact(&a[i][i]).expect("back-substitution division is exact");
    }
    let mut numerators = vec![Poly::zero(); n];
    for (k, &c) in cols.iter().enumerate() {
        numerators[c] = std::mem::take(&mut y[k]);
    }
    Ok(CommonSolution { numerators, denominator: det })
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let mut a = m.to_vec();
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pi) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| pivot_cost(&a[i][k])) else {
            return Poly::zero();
        };
        if pi != k {
            a.swap(k, pi);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Exact determinant of a rational matrix.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(pi) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if pi != k {
            a.swap(k, pi);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// One solution of a possibly overdetermined rational system (free unknowns
/// set to zero), or `None` when the system is inconsistent.
pub fn solve_rational(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pi) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, pi);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=ncols {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols].clone();
    }
    Some(x)
}
