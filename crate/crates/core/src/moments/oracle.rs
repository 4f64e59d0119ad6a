//! Moments computed from the measures themselves, independently of the
//! catalog ratios.
//!
//! Continuous measures go through quadrature, atomic ones through their
//! series. Krawtchouk and q-Krawtchouk have finitely many atoms and are
//! summed exactly when `mu` is exact.

use rug::Float;
use serde::Serialize;

use super::quadrature::{integrate_half_line, integrate_interval};
use super::series::{ratio_factor_sup, sum_with_tail};
use crate::catalog::{FamilyParams, TransformSpec};
use crate::error::{Error, Result};
use crate::scalar::{pochhammer, q_pochhammer, q_pochhammer_infinite, QLength, Scalar, DEFAULT_PRECISION};

#[derive(Debug, Clone, Serialize)]
pub struct OracleValue {
    pub value: Scalar,
    /// Bound on the absolute error; zero for exact sums.
    pub error_bound: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Absolutely continuous weight on an interval.
    Quadrature,
    /// Atoms at a discrete set of nodes; `finite` when only finitely many
    /// jumps are nonzero.
    Atomic { finite: bool },
}

pub fn measure_kind(spec: &TransformSpec) -> MeasureKind {
    match spec.params() {
        FamilyParams::Laguerre { .. } | FamilyParams::Jacobi { .. } => MeasureKind::Quadrature,
        FamilyParams::Krawtchouk { .. } | FamilyParams::QKrawtchouk { .. } => MeasureKind::Atomic { finite: true },
        _ => MeasureKind::Atomic { finite: false },
    }
}

fn working_prec(mu: &Scalar, prec: u32) -> u32 {
    mu.working_precision(prec)
}

fn series_tol(prec: u32) -> Scalar {
    Scalar::Float(Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32))))
}

fn rounding_slack(v: &Scalar, prec: u32) -> Scalar {
    if v.is_exact() {
        return Scalar::zero();
    }
    let ulp = Scalar::Float(Float::with_val(prec, Float::i_exp(1, 24 - prec as i32)));
    &v.abs() * &ulp
}

fn to_scalar(f: Float) -> Scalar {
    Scalar::Float(f)
}

/// Jump of the (unnormalized) measure at its `j`-th node, with the kernel
/// factor left out. Nodes are `sigma_1 - j` (Charlier), `j` (Meixner,
/// Krawtchouk) and `q^j` (Wall, q-Krawtchouk, Wall0).
pub fn jump(spec: &TransformSpec, j: usize) -> Result<Scalar> {
    let jj = j as i64;
    let fact = pochhammer(&Scalar::one(), j);
    match spec.params() {
        FamilyParams::Charlier { alpha0, .. } => (-alpha0).powi(jj)?.checked_div(&fact),
        FamilyParams::Meixner { beta0, gamma0, .. } => {
            meixner_jump(beta0, gamma0, j)
        }
        FamilyParams::Krawtchouk { n, gamma0, .. } => meixner_jump(&Scalar::int(*n as i64), gamma0, j),
        FamilyParams::Wall { beta0, q, .. } | FamilyParams::QKrawtchouk { beta0, q, .. } => {
            let delta0 = spec.delta0().expect("q-family");
            let c = delta0.checked_div(beta0)?;
            let num = q_pochhammer(&c, q, QLength::Finite(j))?;
            let den = q_pochhammer(q, q, QLength::Finite(j))?;
            Ok(&num.checked_div(&den)? * &(-beta0).powi(jj)?)
        }
        FamilyParams::Wall0 { delta0, q } => {
            let tri = (jj * (jj - 1)) / 2;
            let num = &delta0.powi(jj)? * &q.powi(tri)?;
            num.checked_div(&q_pochhammer(q, q, QLength::Finite(j))?)
        }
        FamilyParams::Laguerre { .. } | FamilyParams::Jacobi { .. } => Err(Error::Unsupported {
            op: "jump",
            family: spec.family().to_string(),
        }),
    }
}

/// `(-1)^j (-beta0)_j / (j! gamma0^j)`.
fn meixner_jump(beta0: &Scalar, gamma0: &Scalar, j: usize) -> Result<Scalar> {
    let sign = if j % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
    let num = &sign * &pochhammer(&(-beta0), j);
    let den = &pochhammer(&Scalar::one(), j) * &gamma0.powi(j as i64)?;
    num.checked_div(&den)
}

/// Normalized moment `I_k(mu)` at the default precision.
pub fn moment_oracle(spec: &TransformSpec, k: usize, mu: &Scalar) -> Result<Scalar> {
    moment_oracle_with(spec, k, mu, DEFAULT_PRECISION).map(|v| v.value)
}

/// Normalized moment, so that `I_0 = 1`, with its error bound.
pub fn moment_oracle_with(spec: &TransformSpec, k: usize, mu: &Scalar, prec: u32) -> Result<OracleValue> {
    spec.check_mu(mu)?;
    let raw = moment_oracle_raw(spec, k, mu, prec)?;
    let p = working_prec(mu, prec);
    let (norm, norm_rel_err) = normalizer(spec, mu, p)?;
    let value = &raw.value * &norm;
    let mut err = &raw.error_bound * &norm.abs();
    err = &err + &(&value.abs() * &norm_rel_err);
    err = &err + &rounding_slack(&value, p);
    Ok(OracleValue { value, error_bound: err })
}

/// Factor turning raw moments into normalized ones, with a bound on its
/// relative error.
fn normalizer(spec: &TransformSpec, mu: &Scalar, prec: u32) -> Result<(Scalar, Scalar)> {
    let zero = Scalar::zero();
    match spec.params() {
        FamilyParams::Laguerre { alpha0, beta0 } => {
            let s = mu + &alpha0.checked_div(beta0)?;
            let g = s.gamma(prec)?;
            let b = beta0.pow(&s, prec)?;
            Ok(((&g * &b).recip()?, zero))
        }
        FamilyParams::Jacobi { alpha0, beta0, gamma0 } => {
            let a = alpha0.checked_div(beta0)?;
            let s = mu + &a;
            let num = (mu + gamma0).gamma(prec)?;
            let den = &(&s.gamma(prec)? * &(gamma0 - &a).gamma(prec)?) * &beta0.pow(&s, prec)?;
            Ok((num.checked_div(&den)?, zero))
        }
        FamilyParams::Charlier { alpha0, sigma1 } => {
            let e = alpha0.checked_div(mu)?.exp(prec)?;
            let m = mu.pow(&(-sigma1), prec)?;
            Ok((&e * &m, zero))
        }
        FamilyParams::Meixner { beta0, gamma0, .. } => {
            let base = &Scalar::one() + &mu.checked_div(gamma0)?;
            Ok((base.pow(&(-beta0), prec)?, zero))
        }
        FamilyParams::Krawtchouk { n, gamma0, .. } => {
            let base = &Scalar::one() + &mu.checked_div(gamma0)?;
            Ok((base.powi(-(*n as i64))?, zero))
        }
        FamilyParams::Wall { beta0, q, .. } => {
            let delta0 = spec.delta0().expect("q-family");
            let mu_f = mu.promote(prec)?;
            let num = q_pochhammer_infinite(&(&(-beta0) * &mu_f), q)?;
            let den = q_pochhammer_infinite(&(&(-&delta0) * &mu_f), q)?;
            let log_err = &num.log_tail_bound + &den.log_tail_bound;
            Ok((num.value.checked_div(&den.value)?, &log_err * &Scalar::int(2)))
        }
        FamilyParams::QKrawtchouk { n, q, .. } => {
            let delta0 = spec.delta0().expect("q-family");
            let d = q_pochhammer(&(&(-&delta0) * mu), q, QLength::Finite(*n))?;
            Ok((d.recip()?, zero))
        }
        FamilyParams::Wall0 { delta0, q } => {
            let mu_f = mu.promote(prec)?;
            let den = q_pochhammer_infinite(&(&(-delta0) * &mu_f), q)?;
            Ok((den.value.recip()?, &den.log_tail_bound * &Scalar::int(2)))
        }
    }
}

/// Raw moment `int rho_k dphi` against the unnormalized measure.
///
/// The x-power families only need the integral to converge, so `mu` may
/// leave the source interval as long as `mu + alpha0/beta0 > 0`.
pub fn moment_oracle_raw(spec: &TransformSpec, k: usize, mu: &Scalar, prec: u32) -> Result<OracleValue> {
    let p = working_prec(mu, prec);
    match spec.params() {
        FamilyParams::Laguerre { alpha0, beta0 } => {
            let s = &(mu + &alpha0.checked_div(beta0)?) + &Scalar::int(k as i64);
            require_positive(&(&s - &Scalar::int(k as i64)), "Laguerre integral needs mu + alpha0/beta0 > 0")?;
            let e = (&s - &Scalar::one()).to_float(p);
            let inv_b = beta0.recip()?.to_float(p);
            let q = integrate_half_line(p, |x| {
                let lx = Float::with_val(p, x.ln_ref());
                let arg = Float::with_val(p, &e * &lx) - Float::with_val(p, x * &inv_b);
                arg.exp()
            })?;
            let value = to_scalar(q.value);
            let err = &to_scalar(q.error) + &rounding_slack(&value, p);
            Ok(OracleValue { value, error_bound: err })
        }
        FamilyParams::Jacobi { alpha0, beta0, gamma0 } => {
            let a = alpha0.checked_div(beta0)?;
            let s0 = mu + &a;
            require_positive(&s0, "Jacobi integral needs mu + alpha0/beta0 > 0")?;
            require_positive(&(gamma0 - &a), "Jacobi integral needs gamma0 > alpha0/beta0")?;
            let e1 = (&(&s0 + &Scalar::int(k as i64)) - &Scalar::one()).to_float(p);
            let e2 = (&(gamma0 - &a) - &Scalar::one()).to_float(p);
            let len = beta0.to_float(p);
            let inv_len = beta0.recip()?.to_float(p);
            let q = integrate_interval(&len, p, |x, xc| {
                let l1 = Float::with_val(p, x.ln_ref());
                let t = Float::with_val(p, xc * &inv_len);
                let l2 = t.ln();
                (Float::with_val(p, &e1 * &l1) + Float::with_val(p, &e2 * &l2)).exp()
            })?;
            let value = to_scalar(q.value);
            let err = &to_scalar(q.error) + &rounding_slack(&value, p);
            Ok(OracleValue { value, error_bound: err })
        }
        FamilyParams::Charlier { alpha0, sigma1 } => {
            require_positive(mu, "Charlier needs mu > 0")?;
            let basis = spec.newton_basis();
            let mu_f = mu.promote(p)?;
            let c = (-alpha0).checked_div(&mu_f)?;
            let lead = mu_f.pow(sigma1, p)?;
            let v = sum_with_tail(
                |j| {
                    let node = sigma1 - &Scalar::int(j as i64);
                    let rho = basis.eval(k, &node);
                    let jmp = jump(spec, j).expect("Charlier jumps are finite");
                    &(&jmp * &rho) * &mu_f.powi(-(j as i64)).expect("mu > 0")
                },
                |j| (j >= k).then(|| c.checked_div(&Scalar::int((j + 1 - k) as i64)).expect("positive")),
                &series_tol(p),
            )?;
            let value = &v.value * &lead;
            let err = &(&v.tail_bound * &lead.abs()) + &rounding_slack(&value, p);
            Ok(OracleValue { value, error_bound: err })
        }
        FamilyParams::Meixner { beta0, gamma0, .. } => {
            require_positive(mu, "Meixner needs mu > 0")?;
            require_positive(&(&gamma0.abs() - mu), "Meixner needs mu < |gamma0|")?;
            let basis = spec.newton_basis();
            let sigmas = basis.sigmas(k);
            let mu_f = mu.promote(p)?;
            let z = mu_f.checked_div(&gamma0.abs())?;
            let first = first_index_past(&sigmas);
            let b_abs = beta0.abs();
            let v = sum_with_tail(
                |j| {
                    let jmp = meixner_jump(beta0, gamma0, j).expect("gamma0 is nonzero");
                    let rho = basis.eval(k, &Scalar::int(j as i64));
                    &(&jmp * &rho) * &mu_f.powi(j as i64).expect("integer power")
                },
                |j| {
                    if j < first {
                        return None;
                    }
                    let mut r = &z * &ratio_factor_sup(j, &b_abs, &Scalar::one());
                    for s in &sigmas {
                        r = &r * &ratio_factor_sup(j, &(&Scalar::one() - s), &(-s));
                    }
                    Some(r)
                },
                &series_tol(p),
            )?;
            let err = &v.tail_bound + &rounding_slack(&v.value, p);
            Ok(OracleValue { value: v.value, error_bound: err })
        }
        FamilyParams::Krawtchouk { n, gamma0, .. } => {
            let basis = spec.newton_basis();
            let nn = Scalar::int(*n as i64);
            let mut sum = Scalar::zero();
            for j in 0..=*n {
                let jmp = meixner_jump(&nn, gamma0, j)?;
                let rho = basis.eval(k, &Scalar::int(j as i64));
                sum = &sum + &(&(&jmp * &rho) * &mu.powi(j as i64)?);
            }
            let err = rounding_slack(&sum, p);
            Ok(OracleValue { value: sum, error_bound: err })
        }
        FamilyParams::QKrawtchouk { n, q, .. } => {
            let mut sum = Scalar::zero();
            for l in 0..=*n {
                let node = q.powi(l as i64)?;
                let term = &(&jump(spec, l)? * &mu.powi(l as i64)?) * &node.powi(k as i64)?;
                sum = &sum + &term;
            }
            let err = rounding_slack(&sum, p);
            Ok(OracleValue { value: sum, error_bound: err })
        }
        FamilyParams::Wall { beta0, q, .. } => {
            let delta0 = spec.delta0().expect("q-family");
            let c_abs = delta0.checked_div(beta0)?.abs();
            let mu_f = mu.promote(p)?;
            let qk = q.powi(k as i64)?;
            let z = &(&beta0.abs() * &mu_f) * &qk;
            let v = sum_with_tail(
                |l| {
                    let jmp = jump(spec, l).expect("Wall jumps are finite");
                    &jmp * &(&mu_f * &qk).powi(l as i64).expect("integer power")
                },
                |l| {
                    let ql = q.powi(l as i64).expect("q is nonzero");
                    let num = &Scalar::one() + &(&c_abs * &ql);
                    let den = &Scalar::one() - &(&ql * q);
                    Some(&z * &num.checked_div(&den).expect("q < 1"))
                },
                &series_tol(p),
            )?;
            let err = &v.tail_bound + &rounding_slack(&v.value, p);
            Ok(OracleValue { value: v.value, error_bound: err })
        }
        FamilyParams::Wall0 { delta0, q } => {
            let mu_f = mu.promote(p)?;
            let qk = q.powi(k as i64)?;
            let z = &(delta0 * &mu_f) * &qk;
            let v = sum_with_tail(
                |l| {
                    let jmp = jump(spec, l).expect("Wall0 jumps are finite");
                    &jmp * &(&mu_f * &qk).powi(l as i64).expect("integer power")
                },
                |l| {
                    let ql = q.powi(l as i64).expect("q is nonzero");
                    let den = &Scalar::one() - &(&ql * q);
                    Some((&z * &ql).checked_div(&den).expect("q < 1"))
                },
                &series_tol(p),
            )?;
            let err = &v.tail_bound + &rounding_slack(&v.value, p);
            Ok(OracleValue { value: v.value, error_bound: err })
        }
    }
}

fn require_positive(v: &Scalar, reason: &str) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::OutsideDomain { op: "moment_oracle", reason: reason.into() })
    }
}

/// Smallest integer `j` exceeding every shift, so that each factor of
/// `rho_k(i)` is positive for `i >= j`.
fn first_index_past(sigmas: &[Scalar]) -> usize {
    let mut j = 0usize;
    while sigmas.iter().any(|s| Scalar::int(j as i64) <= *s) {
        j += 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Schedule;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn laguerre_second_moment() {
        let s = TransformSpec::laguerre(Scalar::zero(), Scalar::one()).unwrap();
        let v = moment_oracle(&s, 2, &Scalar::one()).unwrap();
        assert!((v.to_f64() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn krawtchouk_total_mass_is_exact() {
        let s = TransformSpec::krawtchouk(2, Scalar::one(), Schedule::trivial()).unwrap();
        for mu in [q(1, 3), Scalar::one(), Scalar::int(5)] {
            assert_eq!(moment_oracle(&s, 0, &mu).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn wall_first_moment() {
        let s = TransformSpec::wall(q(-1, 2), q(1, 2), q(1, 2)).unwrap();
        let v = moment_oracle_with(&s, 1, &Scalar::one(), 256).unwrap();
        assert!((&v.value - &q(1, 3)).abs() <= &v.error_bound + &Scalar::float(1e-60, 256).unwrap());
        assert!(v.error_bound.to_f64() < 1e-30);
    }

    #[test]
    fn jumps_are_nonnegative() {
        let specs = [
            TransformSpec::charlier(q(-3, 2), Scalar::zero()).unwrap(),
            TransformSpec::meixner(q(-1, 2), Scalar::int(-2), Schedule::trivial()).unwrap(),
            TransformSpec::krawtchouk(5, q(1, 2), Schedule::trivial()).unwrap(),
            TransformSpec::wall(q(-1, 2), q(-1, 4), q(1, 2)).unwrap(),
            TransformSpec::q_krawtchouk(q(1, 3), 4, q(1, 2)).unwrap(),
            TransformSpec::wall0(Scalar::int(2), q(3, 4)).unwrap(),
        ];
        for s in &specs {
            for j in 0..=40 {
                assert!(!jump(s, j).unwrap().is_negative(), "{} jump {j}", s.family());
            }
        }
    }

    #[test]
    fn finite_families_have_finitely_many_jumps() {
        let k = TransformSpec::krawtchouk(3, Scalar::one(), Schedule::trivial()).unwrap();
        let qk = TransformSpec::q_krawtchouk(Scalar::one(), 3, q(1, 2)).unwrap();
        for j in 4..20 {
            assert!(jump(&k, j).unwrap().is_zero());
            assert!(jump(&qk, j).unwrap().is_zero());
        }
        assert!(!jump(&k, 3).unwrap().is_zero());
        assert!(!jump(&qk, 3).unwrap().is_zero());
    }

    #[test]
    fn wall_jumps_tend_to_wall0() {
        let qq = q(1, 2);
        let w0 = TransformSpec::wall0(Scalar::one(), qq.clone()).unwrap();
        for beta0 in [q(-1, 1000), q(-1, 1_000_000)] {
            let w = TransformSpec::wall(beta0.clone(), Scalar::one(), qq.clone()).unwrap();
            for l in 0..8 {
                let a = jump(&w, l).unwrap().to_f64();
                let b = jump(&w0, l).unwrap().to_f64();
                // prod (q^i - beta0) over prod q^i: relative change below |beta0| sum 2^i
                let tol = beta0.abs().to_f64() * 2f64.powi(l as i32 + 1);
                assert!(((a - b) / b).abs() < tol, "l = {l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mu_outside_source_is_rejected() {
        let s = TransformSpec::wall(q(-1, 2), q(1, 2), q(1, 2)).unwrap();
        assert!(matches!(moment_oracle(&s, 0, &Scalar::int(3)), Err(Error::OutsideDomain { .. })));
    }
}
