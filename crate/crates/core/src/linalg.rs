//! Dense determinants and linear solves over [`Scalar`].
//!
//! Exact matrices go through fraction-free (Bareiss) elimination on integers
//! after clearing row denominators. Anything containing a float falls back to
//! Gaussian elimination with partial pivoting at the widest float precision.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

fn all_exact(a: &[Vec<Scalar>]) -> bool {
    a.iter().all(|row| row.iter().all(Scalar::is_exact))
}

fn check_square(a: &[Vec<Scalar>]) -> usize {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix is not square");
    n
}

/// Scales a rational row to integers; returns the row and the multiplier used.
fn integer_row(row: &[&Rational]) -> (Vec<Integer>, Integer) {
    let mut lcm = Integer::from(1);
    for r in row {
        lcm.lcm_mut(r.denom());
    }
    let ints = row
        .iter()
        .map(|r| Integer::from(r.numer() * Integer::from(&lcm / r.denom())))
        .collect();
    (ints, lcm)
}

/// Bareiss forward elimination in place. Returns the row permutation sign, or
/// `None` when the matrix is singular. Columns `n..` are carried along.
fn bareiss(m: &mut [Vec<Integer>], n: usize) -> Option<i32> {
    let cols = m.first().map_or(0, Vec::len);
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        let pivot = (k..n).find(|&i| m[i][k] != 0)?;
        if pivot != k {
            m.swap(pivot, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let v = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

pub fn determinant(a: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = check_square(a);
    if n == 0 {
        return Ok(Scalar::one());
    }
    if all_exact(a) {
        let mut scale = Integer::from(1);
        let mut m = Vec::with_capacity(n);
        for row in a {
            let rats: Vec<&Rational> = row.iter().map(|s| s.as_rational().unwrap()).collect();
            let (ints, l) = integer_row(&rats);
            scale *= l;
            m.push(ints);
        }
        return Ok(match bareiss(&mut m, n) {
            None => Scalar::zero(),
            Some(sign) => {
                let det = Integer::from(&m[n - 1][n - 1] * sign);
                Scalar::from_rational(Rational::from((det, scale)))
            }
        });
    }
    let (mut m, _) = float_copy(a, None);
    let mut det = Scalar::one();
    for k in 0..n {
        let Some(p) = pivot_row(&m, k) else {
            return Ok(Scalar::zero().promote(widest(a))?);
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det = &det * &m[k][k];
        eliminate_below(&mut m, k)?;
    }
    Ok(det)
}

/// Solves `a x = b`. A singular matrix yields [`Error::DegenerateBasis`].
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = check_square(a);
    assert_eq!(b.len(), n, "right-hand side has the wrong length");
    if n == 0 {
        return Ok(Vec::new());
    }
    if all_exact(a) && b.iter().all(Scalar::is_exact) {
        let mut m = Vec::with_capacity(n);
        for (row, rhs) in a.iter().zip(b) {
            let mut rats: Vec<&Rational> = row.iter().map(|s| s.as_rational().unwrap()).collect();
            rats.push(rhs.as_rational().unwrap());
            m.push(integer_row(&rats).0);
        }
        bareiss(&mut m, n).ok_or(Error::DegenerateBasis)?;
        // Back substitution over the rationals on the echelon form.
        let mut x = vec![Rational::new(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from(&m[i][n]);
            for j in i + 1..n {
                acc -= Rational::from(&m[i][j]) * &x[j];
            }
            x[i] = acc / Rational::from(&m[i][i]);
        }
        return Ok(x.into_iter().map(Scalar::from_rational).collect());
    }
    let (mut m, _) = float_copy(a, Some(b));
    for k in 0..n {
        let p = pivot_row(&m, k).ok_or(Error::DegenerateBasis)?;
        m.swap(p, k);
        eliminate_below(&mut m, k)?;
    }
    let mut x = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = &acc - &(&m[i][j] * &x[j]);
        }
        x[i] = acc.checked_div(&m[i][i])?;
    }
    Ok(x)
}

fn widest(a: &[Vec<Scalar>]) -> u32 {
    a.iter()
        .flatten()
        .filter_map(Scalar::precision)
        .max()
        .unwrap_or(crate::scalar::DEFAULT_PRECISION)
}

fn float_copy(a: &[Vec<Scalar>], b: Option<&[Scalar]>) -> (Matrix, u32) {
    let mut prec = widest(a);
    if let Some(b) = b {
        prec = b.iter().filter_map(Scalar::precision).fold(prec, u32::max);
    }
    let m = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Scalar> = row.iter().map(|s| Scalar::Float(s.to_float(prec))).collect();
            if let Some(b) = b {
                r.push(Scalar::Float(b[i].to_float(prec)));
            }
            r
        })
        .collect();
    (m, prec)
}

fn pivot_row(m: &Matrix, k: usize) -> Option<usize> {
    let n = m.len();
    let mut best: Option<(usize, Scalar)> = None;
    for i in k..n {
        let v = m[i][k].abs();
        if v.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

fn eliminate_below(m: &mut Matrix, k: usize) -> Result<()> {
    let n = m.len();
    let cols = m[k].len();
    for i in k + 1..n {
        let f = m[i][k].checked_div(&m[k][k])?;
        for j in k..cols {
            let v = &m[i][j] - &(&f * &m[k][j]);
            m[i][j] = v;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
            .collect()
    }

    #[test]
    fn exact_determinants() {
        assert_eq!(determinant(&int_matrix(&[&[1, 1], &[1, 2]])).unwrap(), Scalar::int(1));
        assert_eq!(determinant(&int_matrix(&[&[1, 2], &[2, 4]])).unwrap(), Scalar::zero());
        // Needs a row swap.
        assert_eq!(
            determinant(&int_matrix(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]])).unwrap(),
            Scalar::int(-3)
        );
        let m = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]];
        assert_eq!(determinant(&m).unwrap(), q(1, 10) - q(1, 12));
    }

    #[test]
    fn float_determinant_matches_exact() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let f: Matrix = m.iter().map(|r| r.iter().map(|s| s.promote(128).unwrap()).collect()).collect();
        let d = determinant(&f).unwrap();
        assert!((d.to_f64() - 4.0).abs() < 1e-30);
    }

    #[test]
    fn exact_solve_and_singular() {
        let a = int_matrix(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[Scalar::int(3), Scalar::int(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let s = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&s, &[Scalar::one(), Scalar::one()]), Err(Error::DegenerateBasis));
    }

    #[test]
    fn float_solve() {
        let a: Matrix = int_matrix(&[&[0, 1], &[1, 1]])
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.promote(128).unwrap()).collect())
            .collect();
        let x = solve(&a, &[Scalar::int(2), Scalar::int(3)]).unwrap();
        assert!((x[0].to_f64() - 1.0).abs() < 1e-30 && (x[1].to_f64() - 2.0).abs() < 1e-30);
    }
}
