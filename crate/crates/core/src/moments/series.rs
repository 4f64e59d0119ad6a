//! Summation of positive-tailed atomic series with a geometric tail bound.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: Scalar,
    /// Bound on the absolute value of the omitted tail.
    pub tail_bound: Scalar,
    pub terms: usize,
}

const MAX_TERMS: usize = 200_000;

/// Sums `term(0) + term(1) + ...`.
///
/// `ratio_sup(j)` must bound `|term(i+1) / term(i)|` for every `i >= j`, or
/// return `None` when no such bound is available yet. After adding
/// `term(j)` with a bound `rho < 1`, the rest is at most
/// `|term(j)| rho / (1 - rho)`; summation stops once that is below
/// `rel_tol` times the partial sum.
pub fn sum_with_tail(
    term: impl Fn(usize) -> Scalar,
    ratio_sup: impl Fn(usize) -> Option<Scalar>,
    rel_tol: &Scalar,
) -> Result<SeriesValue> {
    let one = Scalar::one();
    let mut sum = Scalar::zero();
    for j in 0..MAX_TERMS {
        let t = term(j);
        sum = &sum + &t;
        if let Some(rho) = ratio_sup(j) {
            if rho < one {
                let tail = (&t.abs() * &rho).checked_div(&(&one - &rho))?;
                if tail <= &sum.abs() * rel_tol {
                    return Ok(SeriesValue { value: sum, tail_bound: tail, terms: j + 1 });
                }
            }
        }
    }
    Err(Error::SeriesDiverged { terms: MAX_TERMS })
}

/// `sup_{i >= j} (i + a) / (i + b)` for `j + a > 0`, `j + b > 0`.
pub fn ratio_factor_sup(j: usize, a: &Scalar, b: &Scalar) -> Scalar {
    if a >= b {
        let jj = Scalar::int(j as i64);
        (&jj + a).checked_div(&(&jj + b)).expect("denominator is positive")
    } else {
        Scalar::one()
    }
}

/// Sums a finite series exactly.
pub fn sum_finite(n: usize, term: impl Fn(usize) -> Scalar) -> Scalar {
    (0..n).fold(Scalar::zero(), |acc, j| &acc + &term(j))
}
