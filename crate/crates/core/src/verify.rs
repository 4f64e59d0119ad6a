//! Determinant criteria and the end-to-end zero-mapping check.
//!
//! Random batches draw every instance from its own ChaCha stream, so a batch
//! is reproducible from its seed regardless of how rayon schedules it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::apply_zero_map;
use crate::catalog::{Classical, Family, FamilyParams, Schedule, TransformSpec};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::moments::{check_q_functional, check_ratio_identity, meixner_closed_vs_series, moment_closed};
use crate::poly::{all_roots_in, Bound, Interval, Polynomial};
use crate::report::{Check, VerificationReport};
use crate::scalar::Scalar;

/// Degree cap of the finite families in random batches.
pub const RANDOM_FINITE_N: usize = 8;
/// Largest degree drawn by [`random_roots`].
pub const MAX_RANDOM_DEGREE: usize = 8;

fn strictly_increasing(xs: &[Scalar]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// `det [I_i(mu_j)]` for any moment function.
pub fn moment_matrix_det(moment: impl Fn(usize, &Scalar) -> Result<Scalar>, mus: &[Scalar]) -> Result<Scalar> {
    let n = mus.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(mus.iter().map(|mu| moment(i, mu)).collect::<Result<Vec<_>>>()?);
    }
    determinant(&rows)
}

/// `det [I_{i-1}(mu_j)]` from the closed-form moments of `spec`.
pub fn regularity_det(spec: &TransformSpec, mus: &[Scalar]) -> Result<Scalar> {
    if !strictly_increasing(mus) {
        return Err(Error::OutsideDomain { op: "regularity_det", reason: "mus must increase strictly".into() });
    }
    for mu in mus {
        spec.check_mu(mu)?;
    }
    moment_matrix_det(|k, mu| moment_closed(spec, k, mu), mus)
}

/// The Hankel determinant `det [m_{i+j}]_{i,j=0..n}`.
pub fn hankel_delta(moments: impl Fn(usize) -> Scalar, n: usize) -> Scalar {
    let m: Vec<Scalar> = (0..=2 * n).map(&moments).collect();
    let rows: Vec<Vec<Scalar>> = (0..=n).map(|i| m[i..=i + n].to_vec()).collect();
    determinant(&rows).expect("Hankel matrices are square")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta1Case {
    /// The first block is linear for at least two indices, so `sigma_1 = sigma_2`.
    N0Ge2,
    /// The first block has length one and `sigma_2 = 0`.
    N0Eq1,
}

/// `Delta_1` for the mixed pattern that starts with
/// `I_1 / I_0 = alpha0 / (gamma0 + mu)`, computed directly from the monomial
/// moments and from the closed expression. `I_0 = 1`.
pub fn delta1_counterexamples(
    alpha0: &Scalar,
    gamma0: &Scalar,
    sigma: &Scalar,
    mu: &Scalar,
    case: Delta1Case,
) -> Result<(Scalar, Scalar)> {
    delta1_counterexamples_scaled(alpha0, gamma0, sigma, mu, case, &Scalar::one())
}

/// [`delta1_counterexamples`] with a given `I_0`.
pub fn delta1_counterexamples_scaled(
    alpha0: &Scalar,
    gamma0: &Scalar,
    sigma: &Scalar,
    mu: &Scalar,
    case: Delta1Case,
    i0: &Scalar,
) -> Result<(Scalar, Scalar)> {
    let one = Scalar::one();
    let h0 = gamma0 + mu;
    let h1 = &h0 + &one;
    let g1 = match case {
        Delta1Case::N0Ge2 => alpha0.clone(),
        Delta1Case::N0Eq1 => alpha0 + &(sigma * &h0),
    };
    let i1 = (alpha0 * i0).checked_div(&h0)?;
    let i2 = (&g1 * &i1).checked_div(&h1)?;
    let m0 = i0.clone();
    let m1 = &i1 + &(sigma * i0);
    let s2 = sigma * sigma;
    let m2 = match case {
        Delta1Case::N0Ge2 => &(&i2 + &(&(&Scalar::int(2) * sigma) * &i1)) + &(&s2 * i0),
        Delta1Case::N0Eq1 => &(&i2 + &(sigma * &i1)) + &(&s2 * i0),
    };
    let direct = hankel_delta(|j| [m0.clone(), m1.clone(), m2.clone()][j].clone(), 1);
    let numer = match case {
        Delta1Case::N0Ge2 => alpha0 * alpha0,
        Delta1Case::N0Eq1 => alpha0 * &(alpha0 + &(sigma * &h0)),
    };
    let formula = (&(-numer) * &(i0 * i0)).checked_div(&(&(&h0 * &h0) * &h1))?;
    Ok((direct, formula))
}

/// Smallest `mu = mu0 * 2^j` (`j < 64`) with `Delta_1(mu) < 0`, searching
/// from `mu0`, or `None`.
pub fn delta1_mu_star(
    alpha0: &Scalar,
    gamma0: &Scalar,
    sigma: &Scalar,
    case: Delta1Case,
    mu0: &Scalar,
) -> Result<Option<Scalar>> {
    let mut mu = mu0.clone();
    for _ in 0..64 {
        let h0 = gamma0 + &mu;
        if h0.is_positive() {
            let (direct, _) = delta1_counterexamples(alpha0, gamma0, sigma, &mu, case)?;
            if direct.is_negative() {
                return Ok(Some(mu));
            }
        }
        mu = &mu * &Scalar::int(2);
    }
    Ok(None)
}

/// Kernels whose grid determinants are sampled for sign consistency.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega {
    XPowMu,
    MuPowX,
    /// `x^(log_q mu)`, which equals `mu^(log_q x)`.
    XPowLogqMu(Scalar),
}

impl Omega {
    /// The kernel of a catalog family.
    pub fn for_family(spec: &TransformSpec) -> Omega {
        match spec.params() {
            FamilyParams::Laguerre { .. } | FamilyParams::Jacobi { .. } => Omega::XPowMu,
            FamilyParams::Charlier { .. } | FamilyParams::Meixner { .. } | FamilyParams::Krawtchouk { .. } => {
                Omega::MuPowX
            }
            FamilyParams::Wall { q, .. } | FamilyParams::QKrawtchouk { q, .. } | FamilyParams::Wall0 { q, .. } => {
                Omega::XPowLogqMu(q.clone())
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Omega::XPowMu => "x_pow_mu",
            Omega::MuPowX => "mu_pow_x",
            Omega::XPowLogqMu(_) => "x_pow_logq_mu",
        }
    }

    pub fn eval(&self, x: &Scalar, mu: &Scalar, prec: u32) -> Result<Scalar> {
        match self {
            Omega::XPowMu => x.pow(mu, prec),
            Omega::MuPowX => mu.pow(x, prec),
            Omega::XPowLogqMu(q) => {
                if let Some(n) = exact_log(mu, q) {
                    return x.powi(n);
                }
                if let Some(n) = exact_log(x, q) {
                    return mu.powi(n);
                }
                let p = prec.max(x.working_precision(prec));
                let e = mu.ln(p)?.checked_div(&q.ln(p)?)?;
                x.pow(&e, p)
            }
        }
    }
}

/// `n` with `q^n = v`, both exact, for `|n| <= 64`.
fn exact_log(v: &Scalar, q: &Scalar) -> Option<i64> {
    if !v.is_exact() || !q.is_exact() || !v.is_positive() {
        return None;
    }
    let mut up = Scalar::one();
    for n in 0..=64 {
        if up == *v {
            return Some(n);
        }
        if up.recip().ok()? == *v {
            return Some(-n);
        }
        up = &up * q;
    }
    None
}

/// `det [omega(x_i, mu_j)]` on one grid.
pub fn ssc_sample_check(omega: &Omega, x_grid: &[Scalar], mu_grid: &[Scalar], prec: u32) -> Result<Scalar> {
    if x_grid.len() != mu_grid.len() {
        return Err(Error::OutsideDomain { op: "ssc_sample_check", reason: "grids must have equal length".into() });
    }
    if !strictly_increasing(x_grid) || !strictly_increasing(mu_grid) {
        return Err(Error::OutsideDomain { op: "ssc_sample_check", reason: "grids must increase strictly".into() });
    }
    if x_grid.iter().chain(mu_grid).any(|v| !v.is_positive()) {
        return Err(Error::OutsideDomain { op: "ssc_sample_check", reason: "grid points must be positive".into() });
    }
    let mut rows = Vec::with_capacity(x_grid.len());
    for x in x_grid {
        rows.push(mu_grid.iter().map(|mu| omega.eval(x, mu, prec)).collect::<Result<Vec<_>>>()?);
    }
    determinant(&rows)
}

/// A grid determinant whose sign is certified: exact, or stable between
/// `prec` and `2 prec` with the change below half its size. Passing means
/// no violation was found on this grid.
pub fn ssc_certified(omega: &Omega, x_grid: &[Scalar], mu_grid: &[Scalar], prec: u32) -> Result<Check> {
    let hi = ssc_sample_check(omega, x_grid, mu_grid, 2 * prec)?;
    let (pass, margin) = if hi.is_exact() {
        (!hi.is_zero(), hi.abs())
    } else {
        let lo = ssc_sample_check(omega, x_grid, mu_grid, prec)?;
        let drift = (&lo - &hi).abs();
        let half = hi.abs().checked_div(&Scalar::int(2))?;
        (!hi.is_zero() && lo.signum() == hi.signum() && drift < half, &half - &drift)
    };
    let list = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
    let mut c = Check::new("ssc_sample", hi, pass, margin);
    c = c
        .param("omega", omega.name())
        .param("x", list(x_grid))
        .param("mu", list(mu_grid))
        .param("result", if pass { "no violation found" } else { "vanishing or uncertified determinant" });
    if let Omega::XPowLogqMu(q) = omega {
        c = c.param("q", q);
    }
    Ok(c)
}

/// Builds `prod (x - mu_l)`, applies the transform and checks that every
/// zero of the image is real and inside the target interval.
pub fn zero_map_property(spec: &TransformSpec, roots: &[Scalar]) -> Result<VerificationReport> {
    for r in roots {
        if !r.is_exact() {
            return Err(Error::NotExact { op: "zero_map_property" });
        }
        spec.check_mu(r)?;
    }
    let p = Polynomial::from_roots(roots);
    let image = apply_zero_map(&p, spec)?;
    let list = roots.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
    let mut report = VerificationReport::new();
    let degree_kept = image.degree() == p.degree();
    report.push(
        Check::new("image_degree", Scalar::int(image.degree().map_or(-1, |d| d as i64)), degree_kept, Scalar::zero())
            .param("family", spec.family())
            .param("roots", &list),
    );
    let inside = !image.is_zero() && all_roots_in(&image, spec.target_interval())?;
    report.push(
        Check::new("zero_map_property", Scalar::int(roots.len() as i64), inside, Scalar::zero())
            .param("family", spec.family())
            .param("roots", &list)
            .param("target", spec.target_interval()),
    );
    Ok(report)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A rational in `(0, max]` with denominator at most 12.
fn random_positive(rng: &mut impl Rng, max: i64) -> Scalar {
    let den = rng.random_range(1..=12i64);
    let num = rng.random_range(1..=max * den);
    Scalar::ratio(num, den)
}

/// A rational strictly inside `(0, 1)`.
fn random_unit(rng: &mut impl Rng) -> Scalar {
    let den = rng.random_range(2..=16i64);
    Scalar::ratio(rng.random_range(1..den), den)
}

fn random_schedule(rng: &mut impl Rng) -> Schedule {
    let count = rng.random_range(0..=3usize);
    let mut b = Vec::with_capacity(count);
    let mut next = 0usize;
    for _ in 0..count {
        next += rng.random_range(if b.is_empty() { 0..=2 } else { 1..=2 });
        b.push(next);
    }
    Schedule::new(b).expect("breakpoints increase")
}

/// Admissible random parameters for `family`.
pub fn random_spec(family: Family, rng: &mut impl Rng) -> Result<TransformSpec> {
    match family {
        Family::Laguerre => {
            let alpha0 = if rng.random_bool(0.3) { Scalar::zero() } else { random_positive(rng, 3) };
            TransformSpec::laguerre(alpha0, random_positive(rng, 3))
        }
        Family::Jacobi => {
            let alpha0 = if rng.random_bool(0.3) { Scalar::zero() } else { random_positive(rng, 3) };
            let beta0 = random_positive(rng, 3);
            let gamma0 = &alpha0.checked_div(&beta0)? + &random_positive(rng, 3);
            TransformSpec::jacobi(alpha0, beta0, gamma0)
        }
        Family::Charlier => {
            let sigma1 = &random_positive(rng, 6) - &Scalar::int(3);
            TransformSpec::charlier(-random_positive(rng, 3), sigma1)
        }
        Family::Meixner => {
            TransformSpec::meixner(-random_positive(rng, 3), -random_positive(rng, 3), random_schedule(rng))
        }
        Family::Krawtchouk => TransformSpec::krawtchouk(RANDOM_FINITE_N, random_positive(rng, 3), random_schedule(rng)),
        Family::Wall => {
            let beta0 = -random_positive(rng, 2);
            let delta0 = &beta0 + &random_positive(rng, 3);
            TransformSpec::wall(beta0, delta0, random_unit(rng))
        }
        Family::QKrawtchouk => TransformSpec::q_krawtchouk(random_positive(rng, 2), RANDOM_FINITE_N, random_unit(rng)),
        Family::Wall0 => TransformSpec::wall0(random_positive(rng, 3), random_unit(rng)),
    }
}

/// A rational point of the source interval; unbounded intervals are sampled
/// within 10 of their finite end. Closed endpoints are hit occasionally.
pub fn random_source_point(spec: &TransformSpec, rng: &mut impl Rng) -> Scalar {
    let iv = spec.source_interval();
    if iv.lo_closed && rng.random_bool(0.1) {
        if let Bound::Finite(a) = &iv.lo {
            return a.clone();
        }
    }
    let (lo, width) = match (&iv.lo, &iv.hi) {
        (Bound::Finite(a), Bound::Finite(b)) => (a.clone(), b - a),
        (Bound::Finite(a), _) => (a.clone(), Scalar::int(10)),
        (_, Bound::Finite(b)) => (b - &Scalar::int(10), Scalar::int(10)),
        _ => (Scalar::int(-5), Scalar::int(10)),
    };
    &lo + &(&width * &random_unit(rng))
}

/// A random root multiset in the source interval, degree at most
/// [`MAX_RANDOM_DEGREE`] (and the transform's maximum); about a fifth of the
/// roots repeat an earlier one.
pub fn random_roots(spec: &TransformSpec, rng: &mut impl Rng) -> Vec<Scalar> {
    let cap = spec.max_degree().map_or(MAX_RANDOM_DEGREE, |n| n.min(MAX_RANDOM_DEGREE));
    let degree = rng.random_range(0..=cap);
    let mut roots: Vec<Scalar> = Vec::with_capacity(degree);
    for _ in 0..degree {
        if !roots.is_empty() && rng.random_bool(0.2) {
            let i = rng.random_range(0..roots.len());
            roots.push(roots[i].clone());
        } else {
            roots.push(random_source_point(spec, rng));
        }
    }
    roots
}

/// `count` admissible (spec, roots) instances of `family` through
/// [`zero_map_property`].
pub fn zero_map_batch(family: Family, count: usize, seed: u64) -> Result<VerificationReport> {
    let reports: Vec<Result<VerificationReport>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let spec = random_spec(family, &mut rng)?;
            let roots = random_roots(&spec, &mut rng);
            let mut r = zero_map_property(&spec, &roots)?;
            for c in &mut r.checks {
                c.parameters.insert("params".into(), params_label(&spec));
            }
            Ok(r)
        })
        .collect();
    collect_reports(reports)
}

/// Random root multisets for one fixed transform.
pub fn zero_map_batch_for(spec: &TransformSpec, count: usize, seed: u64) -> Result<VerificationReport> {
    let reports: Vec<Result<VerificationReport>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            zero_map_property(spec, &random_roots(spec, &mut rng))
        })
        .collect();
    collect_reports(reports)
}

fn collect_reports(reports: Vec<Result<VerificationReport>>) -> Result<VerificationReport> {
    let mut out = VerificationReport::new();
    for r in reports {
        out.extend(r?);
    }
    Ok(out)
}

fn params_label(spec: &TransformSpec) -> String {
    serde_json_like(spec.params())
}

fn serde_json_like(p: &FamilyParams) -> String {
    format!("{p:?}")
}

/// `n` strictly increasing points of the source interval.
pub fn random_mu_tuple(spec: &TransformSpec, n: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    loop {
        let mut mus: Vec<Scalar> = (0..n).map(|_| random_source_point(spec, rng)).collect();
        mus.sort_by(|a, b| a.partial_cmp(b).expect("exact rationals are ordered"));
        mus.dedup();
        if mus.len() == n && mus.iter().all(|m| spec.source_interval().contains(m) && !m.is_zero()) {
            return mus;
        }
    }
}

/// Regularity determinants of random specs at random mu-tuples of size
/// `1..=max_n`, compared with zero exactly.
pub fn regularity_batch(family: Family, count: usize, max_n: usize, seed: u64) -> Result<VerificationReport> {
    let checks: Vec<Result<Check>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let spec = random_spec(family, &mut rng)?;
            let n = rng.random_range(1..=max_n);
            let mus = random_mu_tuple(&spec, n, &mut rng);
            regularity_check(&spec, &mus)
        })
        .collect();
    checks.into_iter().collect::<Result<VerificationReport>>()
}

pub fn regularity_check(spec: &TransformSpec, mus: &[Scalar]) -> Result<Check> {
    let det = regularity_det(spec, mus)?;
    let nonzero = !det.is_zero();
    let margin = det.abs();
    Ok(Check::new("regularity_det", det, nonzero, margin)
        .param("family", spec.family())
        .param("params", params_label(spec))
        .param("mus", mus.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
}

/// Sampled SSC checks on `count` random grids of size `1..=max_size`.
pub fn ssc_batch(omega: &Omega, count: usize, max_size: usize, seed: u64, prec: u32) -> Result<VerificationReport> {
    let checks: Vec<Result<Check>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let n = rng.random_range(1..=max_size);
            let grid = |rng: &mut ChaCha8Rng| loop {
                let mut g: Vec<Scalar> = (0..n).map(|_| random_positive(rng, 4)).collect();
                g.sort_by(|a, b| a.partial_cmp(b).expect("exact rationals are ordered"));
                g.dedup();
                if g.len() == n {
                    return g;
                }
            };
            let xs = grid(&mut rng);
            let mus = grid(&mut rng);
            ssc_certified(omega, &xs, &mus, prec)
        })
        .collect();
    checks.into_iter().collect::<Result<VerificationReport>>()
}

/// Checks the claimed zero behaviour of a classical transform on one input:
/// real zeros stay real for the derivative multiplier, positive zeros stay
/// positive for the other two.
pub fn classical_property(which: Classical, roots: &[Scalar]) -> Result<Check> {
    let p = Polynomial::from_roots(roots);
    let image = crate::catalog::make_classical(which).apply(&p);
    let (domain, target) = match which {
        Classical::DerivativeMultiplier => (Interval::real_line(), Interval::real_line()),
        Classical::InverseFactorial | Classical::ChebyshevExpand => {
            (Interval::positive_reals(), Interval::positive_reals())
        }
    };
    if let Some(r) = roots.iter().find(|r| !domain.contains(r)) {
        return Err(Error::OutsideDomain { op: "classical_property", reason: format!("root {r} is outside {domain}") });
    }
    let pass = if image.is_zero() { false } else { all_roots_in(&image, &target)? };
    let name = match which {
        Classical::DerivativeMultiplier => "derivative_multiplier_real_zeros",
        Classical::InverseFactorial => "inverse_factorial_positive_zeros",
        Classical::ChebyshevExpand => "chebyshev_expand_positive_zeros",
    };
    Ok(Check::new(name, Scalar::int(roots.len() as i64), pass, Scalar::zero())
        .param("roots", roots.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
        .param("image", image.coeffs().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
}

/// `count` random inputs of degree `1..=8` for [`classical_property`].
pub fn classical_batch(which: Classical, count: usize, seed: u64) -> Result<VerificationReport> {
    let checks: Vec<Result<Check>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let degree = rng.random_range(1..=MAX_RANDOM_DEGREE);
            let mut roots: Vec<Scalar> = Vec::with_capacity(degree);
            for _ in 0..degree {
                if !roots.is_empty() && rng.random_bool(0.2) {
                    let j = rng.random_range(0..roots.len());
                    roots.push(roots[j].clone());
                } else {
                    let r = random_positive(&mut rng, 5);
                    let signed = match which {
                        Classical::DerivativeMultiplier if rng.random_bool(0.5) => -r,
                        _ => r,
                    };
                    roots.push(signed);
                }
            }
            classical_property(which, &roots)
        })
        .collect();
    checks.into_iter().collect::<Result<VerificationReport>>()
}

/// Three admissible exact samples of `mu` for oracle comparisons.
pub fn sample_mus(spec: &TransformSpec) -> Vec<Scalar> {
    let iv = spec.source_interval();
    match (&iv.lo, &iv.hi) {
        (Bound::Finite(a), Bound::Finite(b)) => {
            let w = b - a;
            [Scalar::ratio(1, 4), Scalar::ratio(1, 2), Scalar::ratio(3, 4)]
                .iter()
                .map(|t| a + &(&w * t))
                .collect()
        }
        _ => vec![Scalar::ratio(1, 2), Scalar::one(), Scalar::ratio(5, 2)],
    }
}

/// Tolerances of the float comparisons in [`verify_spec`].
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Oracle ratio against catalog ratio, absolute.
    pub ratio: Scalar,
    /// Block series against block closed form, relative.
    pub series: Scalar,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { ratio: Scalar::ratio(1, 1_000_000_000), series: Scalar::ratio(1, 1_000_000_000_000) }
    }
}

/// The verification suite of one transform: zero mapping on random root
/// multisets, regularity at random mu-tuples, the ratio identity, and the
/// family-specific identities.
pub fn verify_spec(
    spec: &TransformSpec,
    count: usize,
    seed: u64,
    prec: u32,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let mut report = zero_map_batch_for(spec, count, seed)?;
    let mut rng = rng_for(seed, u64::MAX);
    for _ in 0..count.min(50) {
        let n = rng.random_range(1..=6usize);
        let mus = random_mu_tuple(spec, n, &mut rng);
        report.push(regularity_check(spec, &mus)?);
    }
    let mus = sample_mus(spec);
    let exact = spec.max_degree().is_some();
    let ratio_tol = if exact { Scalar::zero() } else { tol.ratio.clone() };
    report.extend(check_ratio_identity(spec, 6, &mus, &ratio_tol, prec)?);
    match spec.family() {
        Family::Meixner | Family::Krawtchouk => {
            let k_max = spec.max_degree().map_or(4, |n| n.min(4));
            report.extend(meixner_closed_vs_series(spec, k_max, &mus, &tol.series, prec)?);
        }
        Family::Wall | Family::QKrawtchouk | Family::Wall0 => {
            for mu in &mus {
                for k in 0..=6 {
                    let r = check_q_functional(spec, k, mu)?;
                    report.push(
                        Check::exact_zero("q_functional", r)
                            .param("family", spec.family())
                            .param("k", k)
                            .param("mu", mu),
                    );
                }
            }
        }
        _ => {}
    }
    Ok(report)
}
