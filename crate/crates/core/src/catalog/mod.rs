//! The transformation families and the three classical coefficient maps.

pub mod schedule;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::basis::{AffinePair, NewtonBasis};
use crate::error::{Error, Result};
use crate::poly::{Bound, Interval, Polynomial};
use crate::scalar::Scalar;

pub use schedule::{pairs_for_schedule, Pattern, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Laguerre,
    Jacobi,
    Charlier,
    Meixner,
    Krawtchouk,
    Wall,
    QKrawtchouk,
    Wall0,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Laguerre,
        Family::Jacobi,
        Family::Charlier,
        Family::Meixner,
        Family::Krawtchouk,
        Family::Wall,
        Family::QKrawtchouk,
        Family::Wall0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Laguerre => "laguerre",
            Family::Jacobi => "jacobi",
            Family::Charlier => "charlier",
            Family::Meixner => "meixner",
            Family::Krawtchouk => "krawtchouk",
            Family::Wall => "wall",
            Family::QKrawtchouk => "q_krawtchouk",
            Family::Wall0 => "wall0",
        }
    }

    /// Families whose kernel is `x^mu`.
    pub fn is_x_power(self) -> bool {
        matches!(self, Family::Laguerre | Family::Jacobi)
    }

    /// Families whose kernel is `mu^x`.
    pub fn is_mu_power(self) -> bool {
        matches!(self, Family::Charlier | Family::Meixner | Family::Krawtchouk)
    }

    /// Families whose kernel is `x^(log_q mu)`.
    pub fn is_q_type(self) -> bool {
        matches!(self, Family::Wall | Family::QKrawtchouk | Family::Wall0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.to_ascii_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        Ok(match key.as_str() {
            "laguerre" => Family::Laguerre,
            "jacobi" => Family::Jacobi,
            "charlier" => Family::Charlier,
            "meixner" => Family::Meixner,
            "krawtchouk" => Family::Krawtchouk,
            "wall" => Family::Wall,
            "qkrawtchouk" => Family::QKrawtchouk,
            "wall0" => Family::Wall0,
            _ => {
                return Err(Error::InvalidParams {
                    family: s.to_string(),
                    reason: "unknown family".into(),
                })
            }
        })
    }
}

/// A named parameter as supplied by a caller.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Scalar(Scalar),
    Breakpoints(Vec<usize>),
}

pub type NamedParams = BTreeMap<String, ParamValue>;

/// Validated family parameters. All values are exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Laguerre { alpha0: Scalar, beta0: Scalar },
    Jacobi { alpha0: Scalar, beta0: Scalar, gamma0: Scalar },
    Charlier { alpha0: Scalar, sigma1: Scalar },
    Meixner { beta0: Scalar, gamma0: Scalar, schedule: Schedule },
    Krawtchouk { n: usize, gamma0: Scalar, schedule: Schedule },
    Wall { beta0: Scalar, delta0: Scalar, q: Scalar },
    QKrawtchouk { beta0: Scalar, n: usize, q: Scalar },
    Wall0 { delta0: Scalar, q: Scalar },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Laguerre { .. } => Family::Laguerre,
            FamilyParams::Jacobi { .. } => Family::Jacobi,
            FamilyParams::Charlier { .. } => Family::Charlier,
            FamilyParams::Meixner { .. } => Family::Meixner,
            FamilyParams::Krawtchouk { .. } => Family::Krawtchouk,
            FamilyParams::Wall { .. } => Family::Wall,
            FamilyParams::QKrawtchouk { .. } => Family::QKrawtchouk,
            FamilyParams::Wall0 { .. } => Family::Wall0,
        }
    }
}

/// A fully specified transformation: pairs, shifts and intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformSpec {
    params: FamilyParams,
    #[serde(skip)]
    source: Interval,
    #[serde(skip)]
    target: Interval,
}

fn invalid(family: Family, reason: impl Into<String>) -> Error {
    Error::InvalidParams { family: family.name().into(), reason: reason.into() }
}

fn require(cond: bool, family: Family, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(family, reason))
    }
}

fn exact(family: Family, name: &str, v: &Scalar) -> Result<()> {
    require(v.is_exact(), family, &format!("{name} must be an exact rational"))
}

fn check_q(family: Family, q: &Scalar) -> Result<()> {
    exact(family, "q", q)?;
    require(q.is_positive() && *q < Scalar::one(), family, "q must lie in (0, 1)")
}

fn fin(s: Scalar) -> Bound {
    Bound::Finite(s)
}

impl TransformSpec {
    pub fn laguerre(alpha0: Scalar, beta0: Scalar) -> Result<Self> {
        let f = Family::Laguerre;
        exact(f, "alpha0", &alpha0)?;
        exact(f, "beta0", &beta0)?;
        require(beta0.is_positive(), f, "beta0 must be positive")?;
        require(!alpha0.is_negative(), f, "alpha0 must be nonnegative")?;
        Ok(TransformSpec {
            params: FamilyParams::Laguerre { alpha0, beta0 },
            source: Interval::positive_reals(),
            target: Interval::positive_reals(),
        })
    }

    pub fn jacobi(alpha0: Scalar, beta0: Scalar, gamma0: Scalar) -> Result<Self> {
        let f = Family::Jacobi;
        exact(f, "alpha0", &alpha0)?;
        exact(f, "beta0", &beta0)?;
        exact(f, "gamma0", &gamma0)?;
        require(beta0.is_positive(), f, "beta0 must be positive")?;
        require(!alpha0.is_negative(), f, "alpha0 must be nonnegative")?;
        require(&gamma0 * &beta0 > alpha0, f, "gamma0 must exceed alpha0 / beta0")?;
        let target = Interval::open(fin(Scalar::zero()), fin(beta0.clone()));
        Ok(TransformSpec {
            params: FamilyParams::Jacobi { alpha0, beta0, gamma0 },
            source: Interval::positive_reals(),
            target,
        })
    }

    pub fn charlier(alpha0: Scalar, sigma1: Scalar) -> Result<Self> {
        let f = Family::Charlier;
        exact(f, "alpha0", &alpha0)?;
        exact(f, "sigma1", &sigma1)?;
        require(alpha0.is_negative(), f, "alpha0 must be negative")?;
        let target = Interval::open(Bound::NegInf, fin(sigma1.clone()));
        Ok(TransformSpec {
            params: FamilyParams::Charlier { alpha0, sigma1 },
            source: Interval::positive_reals(),
            target,
        })
    }

    pub fn meixner(beta0: Scalar, gamma0: Scalar, schedule: Schedule) -> Result<Self> {
        let f = Family::Meixner;
        exact(f, "beta0", &beta0)?;
        exact(f, "gamma0", &gamma0)?;
        require(beta0.is_negative(), f, "beta0 must be negative")?;
        require(gamma0.is_negative(), f, "gamma0 must be negative")?;
        let source = Interval::open(fin(Scalar::zero()), fin(gamma0.abs()));
        Ok(TransformSpec {
            params: FamilyParams::Meixner { beta0, gamma0, schedule },
            source,
            target: Interval::positive_reals(),
        })
    }

    pub fn krawtchouk(n: usize, gamma0: Scalar, schedule: Schedule) -> Result<Self> {
        let f = Family::Krawtchouk;
        exact(f, "gamma0", &gamma0)?;
        require(n >= 1, f, "n must be a positive integer")?;
        require(gamma0.is_positive(), f, "gamma0 must be positive")?;
        let target = Interval::open(fin(Scalar::zero()), fin(Scalar::int(n as i64)));
        Ok(TransformSpec {
            params: FamilyParams::Krawtchouk { n, gamma0, schedule },
            source: Interval::positive_reals(),
            target,
        })
    }

    pub fn wall(beta0: Scalar, delta0: Scalar, q: Scalar) -> Result<Self> {
        let f = Family::Wall;
        exact(f, "beta0", &beta0)?;
        exact(f, "delta0", &delta0)?;
        check_q(f, &q)?;
        require(beta0.is_negative(), f, "beta0 must be negative")?;
        require(delta0 > beta0, f, "delta0 must exceed beta0")?;
        let source = Interval::open(fin(Scalar::zero()), fin(beta0.abs().recip()?));
        Ok(TransformSpec {
            params: FamilyParams::Wall { beta0, delta0, q },
            source,
            target: Interval::open(fin(Scalar::zero()), fin(Scalar::one())),
        })
    }

    pub fn q_krawtchouk(beta0: Scalar, n: usize, q: Scalar) -> Result<Self> {
        let f = Family::QKrawtchouk;
        exact(f, "beta0", &beta0)?;
        check_q(f, &q)?;
        require(n >= 1, f, "n must be a positive integer")?;
        require(beta0.is_positive(), f, "beta0 must be positive")?;
        let lo = q.powi(n as i64)?;
        Ok(TransformSpec {
            params: FamilyParams::QKrawtchouk { beta0, n, q },
            source: Interval::positive_reals(),
            target: Interval::open(fin(lo), fin(Scalar::one())),
        })
    }

    pub fn wall0(delta0: Scalar, q: Scalar) -> Result<Self> {
        let f = Family::Wall0;
        exact(f, "delta0", &delta0)?;
        check_q(f, &q)?;
        require(delta0.is_positive(), f, "delta0 must be positive")?;
        Ok(TransformSpec {
            params: FamilyParams::Wall0 { delta0, q },
            source: Interval::positive_reals().with_closed(true, false),
            // A source zero at 0 lands exactly on 1.
            target: Interval::open(fin(Scalar::zero()), fin(Scalar::one())).with_closed(false, true),
        })
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    /// Interval `(c, d)` for `mu`.
    pub fn source_interval(&self) -> &Interval {
        &self.source
    }

    /// Hull `(a, b)` of the measure support.
    pub fn target_interval(&self) -> &Interval {
        &self.target
    }

    /// Largest degree the transform accepts (`None` when unbounded). Past it
    /// some `g_k` vanishes identically.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.params {
            FamilyParams::Krawtchouk { n, .. } | FamilyParams::QKrawtchouk { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// `delta_0` of the q-families (`q^-N beta_0` for q-Krawtchouk).
    pub fn delta0(&self) -> Option<Scalar> {
        match &self.params {
            FamilyParams::Wall { delta0, .. } | FamilyParams::Wall0 { delta0, .. } => Some(delta0.clone()),
            FamilyParams::QKrawtchouk { beta0, n, q } => Some(beta0 * &q.powi(-(*n as i64)).ok()?),
            _ => None,
        }
    }

    /// The pair `(g_k, h_k)`.
    pub fn pair(&self, k: usize) -> AffinePair {
        let kk = Scalar::int(k as i64);
        match &self.params {
            FamilyParams::Laguerre { alpha0, beta0 } => {
                AffinePair::new(alpha0 + &(&kk * beta0), beta0.clone(), Scalar::one(), Scalar::zero())
            }
            FamilyParams::Jacobi { alpha0, beta0, gamma0 } => {
                AffinePair::new(alpha0 + &(&kk * beta0), beta0.clone(), gamma0 + &kk, Scalar::one())
            }
            FamilyParams::Charlier { alpha0, .. } => {
                AffinePair::new(alpha0.clone(), Scalar::zero(), Scalar::zero(), Scalar::one())
            }
            FamilyParams::Meixner { beta0, gamma0, schedule } => pairs_for_schedule(beta0, gamma0, schedule, k).0,
            FamilyParams::Krawtchouk { n, gamma0, schedule } => {
                pairs_for_schedule(&Scalar::int(*n as i64), gamma0, schedule, k).0
            }
            FamilyParams::Wall { beta0, q, .. } | FamilyParams::QKrawtchouk { beta0, q, .. } => {
                let qk = q.powi(k as i64).expect("q is nonzero");
                let delta0 = self.delta0().expect("q-family");
                AffinePair::new(Scalar::one(), &qk * beta0, Scalar::one(), &qk * &delta0)
            }
            FamilyParams::Wall0 { delta0, q } => {
                let qk = q.powi(k as i64).expect("q is nonzero");
                AffinePair::new(Scalar::one(), Scalar::zero(), Scalar::one(), &qk * delta0)
            }
        }
    }

    pub fn pairs(&self, m: usize) -> Vec<AffinePair> {
        (0..m).map(|k| self.pair(k)).collect()
    }

    /// `sigma_i`, 1-based.
    pub fn sigma(&self, i: usize) -> Scalar {
        assert!(i >= 1, "shifts are indexed from 1");
        match &self.params {
            FamilyParams::Charlier { sigma1, .. } => sigma1 - &Scalar::int(i as i64 - 1),
            FamilyParams::Meixner { beta0, gamma0, schedule } => pairs_for_schedule(beta0, gamma0, schedule, i - 1).1,
            FamilyParams::Krawtchouk { n, gamma0, schedule } => {
                pairs_for_schedule(&Scalar::int(*n as i64), gamma0, schedule, i - 1).1
            }
            _ => Scalar::zero(),
        }
    }

    pub fn newton_basis(&self) -> NewtonBasis {
        let spec = self.clone();
        NewtonBasis::from_fn(move |i| spec.sigma(i))
    }

    /// Errors unless `mu` lies in the source interval.
    pub fn check_mu(&self, mu: &Scalar) -> Result<()> {
        if self.source.contains(mu) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                op: "moment",
                reason: format!("mu = {mu} is outside {} for {}", self.source, self.family()),
            })
        }
    }
}

fn scalar_param(family: Family, params: &NamedParams, name: &str) -> Result<Scalar> {
    match params.get(name) {
        Some(ParamValue::Scalar(s)) => Ok(s.clone()),
        Some(ParamValue::Breakpoints(_)) => Err(invalid(family, format!("{name} must be a scalar"))),
        None => Err(Error::MissingParam { family: family.name().into(), name: name.into() }),
    }
}

fn optional_scalar(family: Family, params: &NamedParams, name: &str, default: Scalar) -> Result<Scalar> {
    if params.contains_key(name) {
        scalar_param(family, params, name)
    } else {
        Ok(default)
    }
}

fn count_param(family: Family, params: &NamedParams, name: &str) -> Result<usize> {
    let v = scalar_param(family, params, name)?;
    let r = v.rational("count parameter").map_err(|_| invalid(family, format!("{name} must be exact")))?;
    if r.denom() != &1 || r.numer().is_negative() {
        return Err(invalid(family, format!("{name} must be a nonnegative integer")));
    }
    r.numer()
        .to_usize()
        .ok_or_else(|| invalid(family, format!("{name} is too large")))
}

fn schedule_param(family: Family, params: &NamedParams) -> Result<Schedule> {
    match params.get("schedule") {
        None => Ok(Schedule::trivial()),
        Some(ParamValue::Breakpoints(b)) => Schedule::new(b.clone()),
        Some(ParamValue::Scalar(_)) => Err(invalid(family, "schedule must be a list of breakpoints")),
    }
}

fn reject_unknown(family: Family, params: &NamedParams, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(invalid(family, format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

/// Builds a transform from named parameters (`alpha0`, `beta0`, `gamma0`,
/// `delta0`, `q`, `n`, `sigma1`, `schedule`).
pub fn make_transform(family: Family, params: &NamedParams) -> Result<TransformSpec> {
    let f = family;
    match family {
        Family::Laguerre => {
            reject_unknown(f, params, &["alpha0", "beta0"])?;
            TransformSpec::laguerre(scalar_param(f, params, "alpha0")?, scalar_param(f, params, "beta0")?)
        }
        Family::Jacobi => {
            reject_unknown(f, params, &["alpha0", "beta0", "gamma0"])?;
            TransformSpec::jacobi(
                scalar_param(f, params, "alpha0")?,
                scalar_param(f, params, "beta0")?,
                scalar_param(f, params, "gamma0")?,
            )
        }
        Family::Charlier => {
            reject_unknown(f, params, &["alpha0", "sigma1"])?;
            TransformSpec::charlier(
                scalar_param(f, params, "alpha0")?,
                optional_scalar(f, params, "sigma1", Scalar::zero())?,
            )
        }
        Family::Meixner => {
            reject_unknown(f, params, &["beta0", "gamma0", "schedule"])?;
            TransformSpec::meixner(
                scalar_param(f, params, "beta0")?,
                scalar_param(f, params, "gamma0")?,
                schedule_param(f, params)?,
            )
        }
        Family::Krawtchouk => {
            reject_unknown(f, params, &["n", "gamma0", "schedule", "beta0"])?;
            let n = count_param(f, params, "n")?;
            if params.contains_key("beta0") && scalar_param(f, params, "beta0")? != Scalar::int(n as i64) {
                return Err(invalid(f, "beta0 must equal n"));
            }
            TransformSpec::krawtchouk(n, scalar_param(f, params, "gamma0")?, schedule_param(f, params)?)
        }
        Family::Wall => {
            reject_unknown(f, params, &["beta0", "delta0", "q"])?;
            TransformSpec::wall(
                scalar_param(f, params, "beta0")?,
                scalar_param(f, params, "delta0")?,
                scalar_param(f, params, "q")?,
            )
        }
        Family::QKrawtchouk => {
            reject_unknown(f, params, &["beta0", "n", "q"])?;
            TransformSpec::q_krawtchouk(
                scalar_param(f, params, "beta0")?,
                count_param(f, params, "n")?,
                scalar_param(f, params, "q")?,
            )
        }
        Family::Wall0 => {
            reject_unknown(f, params, &["delta0", "q"])?;
            TransformSpec::wall0(scalar_param(f, params, "delta0")?, scalar_param(f, params, "q")?)
        }
    }
}

/// Shifts of the reflected Charlier basis, `sigma_k = k - 1`.
///
/// Substituting `x -> -x + sigma_1` in the basis with shifts
/// `sigma_1 - k + 1` gives `(-1)^k` times this one.
pub fn charlier_dual_basis() -> NewtonBasis {
    NewtonBasis::from_fn(|k| Scalar::int(k as i64 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classical {
    /// `sum a_k x^k -> sum k a_k x^k`.
    DerivativeMultiplier,
    /// `sum a_k x^k -> sum a_k x^k / k!`.
    InverseFactorial,
    /// `sum a_k x^k -> sum a_k T_k(x)`.
    ChebyshevExpand,
}

/// A coefficientwise or basis-substitution transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalTransform {
    pub which: Classical,
}

pub fn make_classical(which: Classical) -> ClassicalTransform {
    ClassicalTransform { which }
}

/// `T_0, ..., T_n` by `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn chebyshev_polynomials(n: usize) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one()];
    if n >= 1 {
        out.push(Polynomial::from_ints(&[0, 1]));
    }
    let two_x = Polynomial::from_ints(&[0, 2]);
    for k in 2..=n {
        let next = two_x.mul(&out[k - 1]).sub(&out[k - 2]);
        out.push(next);
    }
    out
}

impl ClassicalTransform {
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        match self.which {
            Classical::DerivativeMultiplier => Polynomial::new(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a * &Scalar::int(k as i64))
                    .collect(),
            ),
            Classical::InverseFactorial => {
                let mut fact = Scalar::one();
                let mut out = Vec::with_capacity(p.coeffs().len());
                for (k, a) in p.coeffs().iter().enumerate() {
                    if k > 0 {
                        fact = &fact * &Scalar::int(k as i64);
                    }
                    out.push(a.checked_div(&fact).expect("factorials are nonzero"));
                }
                Polynomial::new(out)
            }
            Classical::ChebyshevExpand => {
                let n = p.degree().unwrap_or(0);
                let t = chebyshev_polynomials(n);
                p.coeffs()
                    .iter()
                    .zip(&t)
                    .fold(Polynomial::zero(), |acc, (a, tk)| acc.add(&tk.scale(a)))
            }
        }
    }
}
