//! Newton bases, mixed product bases and the zero map itself.
//!
//! A polynomial of degree `m` is written as `sum d_k B_k` with
//! `B_k = g_0 ... g_{k-1} h_k ... h_{m-1}` and sent to `sum d_k rho_k`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::TransformSpec;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// One `(g, h)` pair: `g(x) = alpha + beta x`, `h(x) = gamma + delta x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinePair {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
}

impl AffinePair {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar) -> Self {
        AffinePair { alpha, beta, gamma, delta }
    }

    pub fn g(&self) -> Polynomial {
        Polynomial::linear(self.alpha.clone(), self.beta.clone())
    }

    pub fn h(&self) -> Polynomial {
        Polynomial::linear(self.gamma.clone(), self.delta.clone())
    }

    /// `g(mu) / h(mu)`; a vanishing denominator is reported as a pole.
    pub fn ratio_at(&self, k: usize, mu: &Scalar) -> Result<Scalar> {
        let num = &self.alpha + &(&self.beta * mu);
        let den = &self.gamma + &(&self.delta * mu);
        num.checked_div(&den).map_err(|_| Error::Pole { k, mu: mu.to_string() })
    }
}

/// `alpha delta - beta gamma`.
///
/// Up to sign this is the constant Wronskian `g h' - g' h`; only whether it
/// vanishes matters for the construction.
pub fn nondegeneracy(pair: &AffinePair) -> Scalar {
    &(&pair.alpha * &pair.delta) - &(&pair.beta * &pair.gamma)
}

type SigmaFn = dyn Fn(usize) -> Scalar + Send + Sync;

/// Shifts `sigma_1, sigma_2, ...` of `rho_k = (x - sigma_1) ... (x - sigma_k)`.
#[derive(Clone)]
pub struct NewtonBasis {
    sigma: Arc<SigmaFn>,
    len: Option<usize>,
}

impl NewtonBasis {
    /// Shifts from a generator; `f(i)` is `sigma_i` with `i >= 1`.
    pub fn from_fn(f: impl Fn(usize) -> Scalar + Send + Sync + 'static) -> Self {
        NewtonBasis { sigma: Arc::new(f), len: None }
    }

    /// The monomial basis, `sigma_i = 0`.
    pub fn monomial() -> Self {
        NewtonBasis::from_fn(|_| Scalar::zero())
    }

    /// A finite list of shifts; only `rho_0 ..= rho_len` are available.
    pub fn from_sigmas(sigmas: Vec<Scalar>) -> Self {
        let len = sigmas.len();
        let s = Arc::new(sigmas);
        NewtonBasis {
            sigma: Arc::new(move |i| s[i - 1].clone()),
            len: Some(len),
        }
    }

    /// `sigma_i`, 1-based.
    pub fn sigma(&self, i: usize) -> Scalar {
        assert!(i >= 1, "shifts are indexed from 1");
        if let Some(n) = self.len {
            assert!(i <= n, "shift sigma_{i} requested from a basis of length {n}");
        }
        (self.sigma)(i)
    }

    pub fn sigmas(&self, k: usize) -> Vec<Scalar> {
        (1..=k).map(|i| self.sigma(i)).collect()
    }

    /// `rho_k(x)`.
    pub fn eval(&self, k: usize, x: &Scalar) -> Scalar {
        (1..=k).fold(Scalar::one(), |acc, i| &acc * &(x - &self.sigma(i)))
    }
}

impl fmt::Debug for NewtonBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.len.unwrap_or(4).min(4);
        f.debug_struct("NewtonBasis")
            .field("sigmas", &self.sigmas(shown))
            .field("len", &self.len)
            .finish()
    }
}

/// `rho_k` in monomial form.
pub fn newton_expand(basis: &NewtonBasis, k: usize) -> Polynomial {
    (1..=k).fold(Polynomial::one(), |acc, i| {
        acc.mul(&Polynomial::linear(-basis.sigma(i), Scalar::one()))
    })
}

/// `sum d_k rho_k` in monomial form.
pub fn newton_synthesize(d: &[Scalar], basis: &NewtonBasis) -> Polynomial {
    let mut out = Polynomial::zero();
    let mut rho = Polynomial::one();
    for (k, dk) in d.iter().enumerate() {
        if k > 0 {
            rho = rho.mul(&Polynomial::linear(-basis.sigma(k), Scalar::one()));
        }
        out = out.add(&rho.scale(dk));
    }
    out
}

/// Newton coefficients of `p`: the `d` with `p = sum d_k rho_k`.
pub fn newton_coefficients(p: &Polynomial, basis: &NewtonBasis) -> Result<Vec<Scalar>> {
    // Repeated synthetic division by (x - sigma_1), (x - sigma_2), ...
    let mut rest: Vec<Scalar> = p.coeffs().to_vec();
    let mut d = Vec::with_capacity(rest.len());
    let mut i = 1;
    while !rest.is_empty() {
        let n = rest.len();
        if n == 1 {
            d.push(rest.pop().expect("one coefficient left"));
            break;
        }
        let s = basis.sigma(i);
        let mut q = vec![Scalar::zero(); n - 1];
        let mut carry = Scalar::zero();
        for j in (0..n).rev() {
            let v = &rest[j] + &(&carry * &s);
            if j == 0 {
                d.push(v);
            } else {
                q[j - 1] = v.clone();
                carry = v;
            }
        }
        rest = q;
        i += 1;
    }
    Ok(d)
}

/// `B_0, ..., B_m` for the first `m` pairs.
pub fn mixed_basis(pairs: &[AffinePair], m: usize) -> Result<Vec<Polynomial>> {
    if pairs.len() < m {
        return Err(Error::InsufficientPairs { needed: m, got: pairs.len() });
    }
    let gs: Vec<Polynomial> = pairs[..m].iter().map(AffinePair::g).collect();
    let hs: Vec<Polynomial> = pairs[..m].iter().map(AffinePair::h).collect();
    // suffix[k] = h_k ... h_{m-1}
    let mut suffix = vec![Polynomial::one(); m + 1];
    for k in (0..m).rev() {
        suffix[k] = suffix[k + 1].mul(&hs[k]);
    }
    let mut prefix = Polynomial::one();
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..=m {
        out.push(prefix.mul(&suffix[k]));
        if k < m {
            prefix = prefix.mul(&gs[k]);
        }
    }
    Ok(out)
}

/// Coordinates of `p` in the mixed basis of length `m` (`m = deg p` when
/// `None`).
pub fn decompose_mixed(p: &Polynomial, pairs: &[AffinePair], m: Option<usize>) -> Result<Vec<Scalar>> {
    let deg = p.degree().unwrap_or(0);
    let m = m.unwrap_or(deg);
    if deg > m {
        return Err(Error::DegreeExceedsBasis { degree: deg, m });
    }
    let basis = mixed_basis(pairs, m)?;
    // Column k holds the coefficients of B_k.
    let a: Vec<Vec<Scalar>> = (0..=m)
        .map(|i| basis.iter().map(|b| b.coeff(i)).collect())
        .collect();
    let rhs: Vec<Scalar> = (0..=m).map(|i| p.coeff(i)).collect();
    linalg::solve(&a, &rhs)
}

/// The zero map with an explicit basis length `m >= deg p`.
pub fn apply_zero_map_with(
    p: &Polynomial,
    pairs: &[AffinePair],
    basis: &NewtonBasis,
    m: Option<usize>,
) -> Result<Polynomial> {
    let d = decompose_mixed(p, pairs, m)?;
    Ok(newton_synthesize(&d, basis))
}

/// `T p` for the transform `spec`, with the basis length equal to `deg p`.
pub fn apply_zero_map(p: &Polynomial, spec: &TransformSpec) -> Result<Polynomial> {
    apply_zero_map_degree(p, spec, p.degree().unwrap_or(0))
}

/// `T p` on the degree-`m` mixed basis.
pub fn apply_zero_map_degree(p: &Polynomial, spec: &TransformSpec, m: usize) -> Result<Polynomial> {
    if let Some(max) = spec.max_degree() {
        if m > max {
            return Err(Error::OutsideDomain {
                op: "apply_zero_map",
                reason: format!("degree {m} exceeds the maximum degree {max} of this family"),
            });
        }
    }
    let pairs = spec.pairs(m);
    apply_zero_map_with(p, &pairs, &spec.newton_basis(), Some(m))
}
