//! Dense univariate polynomials over [`Scalar`] and certified real-root
//! isolation (see [`roots`]).

pub mod roots;

use std::fmt;

use crate::scalar::Scalar;

pub use roots::{all_roots_in, isolate_real_roots, refine_root, square_free_part, Bound, Interval, RootInterval, RootSet};

/// Coefficients in increasing degree; trailing zeros are always trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Polynomial::new(c.iter().map(|&v| Scalar::int(v)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// `a + b x`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Polynomial::new(vec![a, b])
    }

    /// Monic polynomial with exactly the given multiset of roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        roots.iter().fold(Polynomial::one(), |acc, r| {
            acc.mul(&Polynomial::linear(-r, Scalar::one()))
        })
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(out)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::int(i as i64))
                .collect(),
        )
    }

    /// `p(a x + b)`.
    pub fn compose_affine(&self, a: &Scalar, b: &Scalar) -> Polynomial {
        let lin = Polynomial::linear(b.clone(), a.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, c| acc.mul(&lin).add(&Polynomial::constant(c.clone())))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_roots_examples() {
        assert_eq!(Polynomial::from_roots(&[]), Polynomial::from_ints(&[1]));
        assert_eq!(
            Polynomial::from_roots(&[Scalar::int(1), Scalar::int(2)]),
            Polynomial::from_ints(&[2, -3, 1])
        );
        assert_eq!(
            Polynomial::from_roots(&[Scalar::int(-1), Scalar::int(-1)]),
            Polynomial::from_ints(&[1, 2, 1])
        );
    }

    #[test]
    fn evaluate_examples() {
        let p = Polynomial::from_ints(&[2, -3, 1]);
        assert_eq!(p.evaluate(&Scalar::int(1)), Scalar::zero());
        assert_eq!(Polynomial::from_ints(&[1]).evaluate(&Scalar::int(7)), Scalar::one());
        assert_eq!(p.evaluate(&Scalar::zero()), Scalar::int(2));
    }

    #[test]
    fn multiply_examples() {
        let x = Polynomial::from_ints(&[0, 1]);
        assert_eq!(x.mul(&x), Polynomial::from_ints(&[0, 0, 1]));
        let p = Polynomial::from_ints(&[2, -3, 1]);
        assert_eq!(Polynomial::one().mul(&p), p);
        assert_eq!(
            Polynomial::from_ints(&[-1, 1]).mul(&Polynomial::from_ints(&[-2, 1])),
            p
        );
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::from_ints(&[1, 0, 0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Polynomial::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn compose_affine_shifts() {
        // (x-1)(x-2) at x -> -x + 3 is (2-x)(1-x).
        let p = Polynomial::from_ints(&[2, -3, 1]);
        let q = p.compose_affine(&Scalar::int(-1), &Scalar::int(3));
        assert_eq!(q, Polynomial::from_ints(&[2, -3, 1]));
    }
}
