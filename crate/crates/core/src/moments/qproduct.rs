//! Exact quotients of infinite q-products whose arguments differ by a power
//! of `q`.

use crate::error::{Error, Result};
use crate::scalar::{q_pochhammer, QLength, Scalar};

/// Largest exponent searched when matching `a = q^n b`.
const MAX_SHIFT: i64 = 4096;

fn shift_between(a: &Scalar, b: &Scalar, q: &Scalar) -> Option<i64> {
    let r = a.checked_div(b).ok()?;
    let mut up = Scalar::one();
    for n in 0..=MAX_SHIFT {
        if up == r {
            return Some(n);
        }
        if up.recip().ok()? == r {
            return Some(-n);
        }
        up = &up * q;
    }
    None
}

/// `(a; q)_inf / (b; q)_inf` in exact arithmetic.
///
/// Requires `a = q^n b` for an integer `n` (or `a = b = 0`); then the quotient
/// is a finite product: `1 / (b; q)_n` for `n >= 0` and `(a; q)_{-n}` for
/// `n < 0`.
pub fn infinite_ratio(a: &Scalar, b: &Scalar, q: &Scalar) -> Result<Scalar> {
    a.rational("infinite_ratio")?;
    b.rational("infinite_ratio")?;
    q.rational("infinite_ratio")?;
    if a.is_zero() && b.is_zero() {
        return Ok(Scalar::one());
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InfiniteProduct(format!(
            "({a}; q)_inf / ({b}; q)_inf does not reduce to a finite product"
        )));
    }
    let n = shift_between(a, b, q).ok_or_else(|| {
        Error::InfiniteProduct(format!("{a} / {b} is not an integer power of q = {q}"))
    })?;
    if n >= 0 {
        q_pochhammer(b, q, QLength::Finite(n as usize))?.recip()
    } else {
        q_pochhammer(a, q, QLength::Finite((-n) as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_by_one() {
        // (aq; q)_inf / (a; q)_inf = 1 / (1 - a)
        let q = Scalar::ratio(1, 3);
        let a = Scalar::ratio(2, 5);
        let v = infinite_ratio(&(&a * &q), &a, &q).unwrap();
        assert_eq!(v, (Scalar::one() - a).recip().unwrap());
    }

    #[test]
    fn negative_shift() {
        let q = Scalar::ratio(1, 2);
        let b = Scalar::ratio(1, 8);
        let a = Scalar::ratio(1, 2);
        // a = q^-2 b: quotient (a; q)_2 = (1 - 1/2)(1 - 1/4)
        assert_eq!(infinite_ratio(&a, &b, &q).unwrap(), Scalar::ratio(3, 8));
    }

    #[test]
    fn unrelated_arguments() {
        let q = Scalar::ratio(1, 2);
        assert!(infinite_ratio(&Scalar::ratio(1, 3), &Scalar::ratio(1, 5), &q).is_err());
    }
}
