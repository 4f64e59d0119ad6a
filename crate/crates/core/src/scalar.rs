//! Dual-mode scalars: exact rationals, or MPFR floats that carry their own
//! precision.
//!
//! Arithmetic between two exact values stays exact. Any operation with a float
//! operand produces a float at the larger precision of the float operands; an
//! exact operand never lowers precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Working precision used when nothing else is specified.
pub const DEFAULT_PRECISION: u32 = 256;
/// Floats below this precision are rejected.
pub const MIN_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float(u32),
}

#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(Rational),
    Float(Float),
}

fn check_prec(prec: u32) -> Result<u32> {
    if prec < MIN_PRECISION {
        Err(Error::PrecisionTooLow(prec))
    } else {
        Ok(prec)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::from(1))
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from(n))
    }

    /// `num / den` as an exact rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(Rational::from((num, den)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Exact(r)
    }

    pub fn from_integer(n: Integer) -> Self {
        Scalar::Exact(Rational::from(n))
    }

    /// A float scalar; the precision must be at least [`MIN_PRECISION`].
    pub fn float(value: f64, prec: u32) -> Result<Self> {
        check_prec(prec)?;
        if !value.is_finite() {
            return Err(Error::NonFinite("Scalar::float"));
        }
        Ok(Scalar::Float(Float::with_val(prec, value)))
    }

    pub fn from_float(f: Float) -> Result<Self> {
        check_prec(f.prec())?;
        Ok(Scalar::Float(f))
    }

    /// Exact rational value of a binary float (lossless).
    pub fn from_f64_exact(value: f64) -> Result<Self> {
        Rational::from_f64(value)
            .map(Scalar::Exact)
            .ok_or(Error::NonFinite("Scalar::from_f64_exact"))
    }

    /// Parses `"p/q"`, an integer, or a decimal literal. Decimal literals are
    /// read as binary doubles and then converted to their exact rational value.
    pub fn parse_literal(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        if t.contains('/') {
            let r: Rational = t.parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(Scalar::Exact(r));
        }
        if let Ok(n) = t.parse::<Integer>() {
            return Ok(Scalar::Exact(Rational::from(n)));
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse(s.to_string()))?;
        Scalar::from_f64_exact(v).map_err(|_| Error::Parse(s.to_string()))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(f) => Mode::Float(f.prec()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn rational(&self, op: &'static str) -> Result<&Rational> {
        self.as_rational().ok_or(Error::NotExact { op })
    }

    /// Precision of a float, `None` for exact values.
    pub fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(f) => Some(f.prec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r == 1,
            Scalar::Float(f) => *f == 1,
        }
    }

    /// -1, 0 or 1; `None` for NaN.
    pub fn signum(&self) -> Option<i32> {
        match self {
            Scalar::Exact(r) => Some(match r.cmp0() {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            }),
            Scalar::Float(f) => f.cmp0().map(|o| match o {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            }),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Some(1)
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Some(-1)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(f) => f.is_finite(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    /// Converts to a float of at least `prec` bits (exact values are rounded).
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Scalar::Exact(r) => Float::with_val(prec, r),
            Scalar::Float(f) => {
                let p = prec.max(f.prec());
                Float::with_val(p, f)
            }
        }
    }

    /// Float version of `self` at `prec` bits or more.
    pub fn promote(&self, prec: u32) -> Result<Scalar> {
        check_prec(prec)?;
        Ok(Scalar::Float(self.to_float(prec)))
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().abs()),
            Scalar::Float(f) => Scalar::Float(f.clone().abs()),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(Rational::from(a / b)),
            (Scalar::Float(a), Scalar::Exact(b)) => Scalar::Float(Float::with_val(a.prec(), a / b)),
            (Scalar::Exact(a), Scalar::Float(b)) => {
                let num = Float::with_val(b.prec(), a);
                Scalar::Float(Float::with_val(b.prec(), &num / b))
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                Scalar::Float(Float::with_val(a.prec().max(b.prec()), a / b))
            }
        })
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.recip()?.powi(-e);
        }
        let e = u32::try_from(e).map_err(|_| Error::OutsideDomain {
            op: "powi",
            reason: format!("exponent {e} too large"),
        })?;
        Ok(match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().pow(e)),
            Scalar::Float(f) => Scalar::Float(f.clone().pow(e)),
        })
    }

    fn float_op(&self, prec: u32, op: &'static str, f: impl FnOnce(Float) -> Float) -> Result<Scalar> {
        check_prec(prec)?;
        let x = self.to_float(prec);
        let y = f(x);
        if y.is_finite() {
            Ok(Scalar::Float(y))
        } else {
            Err(Error::NonFinite(op))
        }
    }

    /// Precision of `self` if it is a float, otherwise `fallback`.
    pub fn working_precision(&self, fallback: u32) -> u32 {
        self.precision().map_or(fallback, |p| p.max(fallback))
    }

    pub fn exp(&self, prec: u32) -> Result<Scalar> {
        self.float_op(self.working_precision(prec), "exp", Float::exp)
    }

    pub fn ln(&self, prec: u32) -> Result<Scalar> {
        if !self.is_positive() {
            return Err(Error::OutsideDomain {
                op: "ln",
                reason: format!("argument {self} is not positive"),
            });
        }
        self.float_op(self.working_precision(prec), "ln", Float::ln)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Scalar> {
        if self.is_negative() {
            return Err(Error::OutsideDomain {
                op: "sqrt",
                reason: format!("argument {self} is negative"),
            });
        }
        self.float_op(self.working_precision(prec), "sqrt", Float::sqrt)
    }

    pub fn gamma(&self, prec: u32) -> Result<Scalar> {
        self.float_op(self.working_precision(prec), "gamma", Float::gamma)
    }

    /// Real power `self^e`. Exact when the exponent is an integer and the
    /// base is exact; otherwise a float, which requires a positive base.
    pub fn pow(&self, e: &Scalar, prec: u32) -> Result<Scalar> {
        if let Scalar::Exact(r) = e {
            if r.denom() == &1 {
                if let Some(n) = r.numer().to_i64() {
                    return self.powi(n);
                }
            }
        }
        if self.is_zero() && e.is_positive() {
            return Ok(Scalar::zero());
        }
        let p = e.working_precision(self.working_precision(prec));
        let base = self.ln(p)?;
        (&base * e).exp(p)
    }

    pub fn max_ref<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min_ref<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => {
                // Decimal digits worth of the binary precision.
                let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).ceil() as usize;
                write!(f, "{}", x.to_string_radix(10, Some(digits)))
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => {
                        Scalar::Exact(Rational::from($trait::$method(a, b)))
                    }
                    (Scalar::Float(a), Scalar::Exact(b)) => {
                        Scalar::Float(Float::with_val(a.prec(), $trait::$method(a, b)))
                    }
                    (Scalar::Exact(a), Scalar::Float(b)) => {
                        let lhs = Float::with_val(b.prec(), a);
                        Scalar::Float(Float::with_val(b.prec(), $trait::$method(&lhs, b)))
                    }
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(Float::with_val(
                        a.prec().max(b.prec()),
                        $trait::$method(a, b),
                    )),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }

        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(Rational::from(-r)),
            Scalar::Float(f) => Scalar::Float(Float::with_val(f.prec(), -f)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Exact(b)) => a == b,
            (Scalar::Exact(a), Scalar::Float(b)) => b == a,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            (Scalar::Float(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Exact(a), Scalar::Float(b)) => b.partial_cmp(a).map(Ordering::reverse),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Rising factorial `(z)_k = z (z+1) ... (z+k-1)`, with `(z)_0 = 1`.
pub fn pochhammer(z: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut shift = z.clone();
    let one = Scalar::one();
    for _ in 0..k {
        acc = &acc * &shift;
        shift = &shift + &one;
    }
    acc
}

/// Length of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QLength {
    Finite(usize),
    Infinite,
}

/// Value of an infinite q-product together with its truncation data.
#[derive(Debug, Clone)]
pub struct QProductValue {
    pub value: Scalar,
    /// Number of factors actually multiplied.
    pub depth: usize,
    /// Bound on `|log prod_{l >= depth} (1 - q^l z)|`.
    pub log_tail_bound: Scalar,
}

/// Gauss–Heine symbol `(z; q)_k = prod_{l<k} (1 - q^l z)`.
///
/// Finite lengths are exact for exact inputs. The infinite product needs
/// `0 < q < 1` and a float operand; see [`q_pochhammer_infinite`].
pub fn q_pochhammer(z: &Scalar, q: &Scalar, k: QLength) -> Result<Scalar> {
    match k {
        QLength::Finite(n) => {
            let one = Scalar::one();
            let mut acc = Scalar::one();
            let mut t = z.clone();
            for _ in 0..n {
                acc = &acc * &(&one - &t);
                t = &t * q;
            }
            Ok(acc)
        }
        QLength::Infinite => q_pochhammer_infinite(z, q).map(|v| v.value),
    }
}

/// `(z; q)_∞` by truncation.
///
/// Factors are multiplied until `|q^L z| < 2^(-prec/2)` (and `<= 1/2`); the
/// remaining tail satisfies `|log prod_{l>=L}(1 - q^l z)| <= 2 |z| q^L / (1-q)`.
pub fn q_pochhammer_infinite(z: &Scalar, q: &Scalar) -> Result<QProductValue> {
    if !(q.is_positive() && *q < Scalar::one()) {
        return Err(Error::InfiniteProduct(format!("q = {q} is not in (0, 1)")));
    }
    let prec = match (z.precision(), q.precision()) {
        (None, None) => {
            return Err(Error::InfiniteProduct(
                "exact operands; an infinite product is evaluated in float mode only".into(),
            ))
        }
        (a, b) => a.unwrap_or(0).max(b.unwrap_or(0)),
    };
    check_prec(prec)?;
    let eps = Scalar::Float(Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32))));
    let half = Scalar::ratio(1, 2);
    let one = Scalar::one();
    let mut acc = Scalar::one().promote(prec)?;
    let mut term = z.promote(prec)?;
    let mut depth = 0usize;
    // q^l z decays geometrically; the cap only guards against q extremely close to 1.
    const MAX_FACTORS: usize = 10_000_000;
    loop {
        let mag = term.abs();
        if mag < eps && mag <= half {
            break;
        }
        if depth >= MAX_FACTORS {
            return Err(Error::InfiniteProduct(format!(
                "no convergence after {MAX_FACTORS} factors"
            )));
        }
        acc = &acc * &(&one - &term);
        term = &term * q;
        depth += 1;
    }
    let two = Scalar::int(2);
    let log_tail_bound = (&two * &term.abs()).checked_div(&(&one - q))?;
    Ok(QProductValue {
        value: acc,
        depth,
        log_tail_bound,
    })
}
