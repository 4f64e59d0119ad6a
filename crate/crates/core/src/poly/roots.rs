//! Sturm-sequence real-root isolation on exact polynomials.
//!
//! All routines here need rational coefficients. Sturm chains are built from
//! the square-free part, so counts are of distinct roots; multiplicities are
//! recovered by comparing degrees.

use std::cmp::Ordering;

use rug::Rational;
use serde::Serialize;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An interval endpoint.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    NegInf,
    PosInf,
    Finite(Scalar),
}

impl Bound {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Bound::Finite(s) => Some(s),
            _ => None,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "+inf"),
            Bound::Finite(s) => write!(f, "{s}"),
        }
    }
}

/// A real interval; infinite ends are always open.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn real_line() -> Self {
        Interval::open(Bound::NegInf, Bound::PosInf)
    }

    pub fn positive_reals() -> Self {
        Interval::open(Bound::Finite(Scalar::zero()), Bound::PosInf)
    }

    pub fn with_closed(mut self, lo_closed: bool, hi_closed: bool) -> Self {
        self.lo_closed = lo_closed && matches!(self.lo, Bound::Finite(_));
        self.hi_closed = hi_closed && matches!(self.hi, Bound::Finite(_));
        self
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let lo_ok = match &self.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Finite(a) => {
                if self.lo_closed {
                    x >= a
                } else {
                    x > a
                }
            }
        };
        let hi_ok = match &self.hi {
            Bound::PosInf => true,
            Bound::NegInf => false,
            Bound::Finite(b) => {
                if self.hi_closed {
                    x <= b
                } else {
                    x < b
                }
            }
        };
        lo_ok && hi_ok
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Isolating interval. Either `lo < hi` with the square-free part taking
/// opposite nonzero signs at the ends, or `lo == hi` sitting exactly on a root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootInterval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl RootInterval {
    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub intervals: Vec<RootInterval>,
    pub real_count: usize,
}

type RatPoly = Vec<Rational>;

fn trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
    p
}

fn to_rat(p: &Polynomial, op: &'static str) -> Result<RatPoly> {
    p.coeffs()
        .iter()
        .map(|c| c.rational(op).cloned())
        .collect()
}

fn from_rat(p: RatPoly) -> Polynomial {
    Polynomial::new(p.into_iter().map(Scalar::from_rational).collect())
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn derivative(p: &[Rational]) -> RatPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Rational::from(c * i as u64))
            .collect(),
    )
}

/// Quotient and remainder of `a / b`, `b` nonzero.
fn div_rem(a: &[Rational], b: &[Rational]) -> (RatPoly, RatPoly) {
    let mut r: RatPoly = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![Rational::new(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = Rational::from(&r[i + db] / lead);
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= Rational::from(&c * bj);
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn monic(p: RatPoly) -> RatPoly {
    match p.last().cloned() {
        None => p,
        Some(l) => p.into_iter().map(|c| c / &l).collect(),
    }
}

fn gcd(a: &[Rational], b: &[Rational]) -> RatPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

fn square_free_rat(p: &[Rational]) -> RatPoly {
    let d = derivative(p);
    if d.is_empty() {
        return monic(p.to_vec());
    }
    let g = gcd(p, &d);
    monic(div_rem(p, &g).0)
}

/// `p / gcd(p, p')`, normalized to be monic.
pub fn square_free_part(p: &Polynomial) -> Result<Polynomial> {
    let r = to_rat(p, "square_free_part")?;
    if r.is_empty() {
        return Err(Error::ZeroPolynomial { op: "square_free_part" });
    }
    Ok(from_rat(square_free_rat(&r)))
}

/// Sturm chain of a square-free polynomial.
struct Sturm {
    chain: Vec<RatPoly>,
}

fn sign(r: &Rational) -> i32 {
    match r.cmp0() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

impl Sturm {
    fn new(sqf: RatPoly) -> Self {
        let mut chain = vec![sqf.clone()];
        let d = derivative(&sqf);
        if !d.is_empty() {
            chain.push(d);
            loop {
                let n = chain.len();
                let (_, r) = div_rem(&chain[n - 2], &chain[n - 1]);
                if r.is_empty() {
                    break;
                }
                chain.push(r.into_iter().map(|c| -c).collect());
            }
        }
        Sturm { chain }
    }

    fn signs_at(&self, x: &Bound) -> Vec<i32> {
        self.chain
            .iter()
            .map(|p| {
                let lead = sign(p.last().unwrap());
                match x {
                    Bound::PosInf => lead,
                    Bound::NegInf => {
                        if (p.len() - 1) % 2 == 0 {
                            lead
                        } else {
                            -lead
                        }
                    }
                    Bound::Finite(s) => sign(&eval(p, s.as_rational().unwrap())),
                }
            })
            .collect()
    }

    /// Sign variations with zeros dropped.
    fn variations(&self, x: &Bound) -> usize {
        let signs: Vec<i32> = self.signs_at(x).into_iter().filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    fn count(&self, a: &Bound, b: &Bound) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn exact_bound(b: &Bound, op: &'static str) -> Result<()> {
    if let Bound::Finite(s) = b {
        s.rational(op)?;
    }
    Ok(())
}

/// Number of distinct real roots of `p` in `(a, b]` by Sturm's theorem.
pub fn sturm_count(p: &Polynomial, a: &Bound, b: &Bound) -> Result<usize> {
    let r = to_rat(p, "sturm_count")?;
    if r.is_empty() {
        return Err(Error::ZeroPolynomial { op: "sturm_count" });
    }
    exact_bound(a, "sturm_count")?;
    exact_bound(b, "sturm_count")?;
    Ok(Sturm::new(square_free_rat(&r)).count(a, b))
}

/// Strict upper bound on the absolute value of every root (Cauchy).
fn cauchy_bound(p: &[Rational]) -> Rational {
    let lead = p.last().unwrap();
    let mut m = Rational::new();
    for c in &p[..p.len() - 1] {
        let v = Rational::from(c / lead).abs();
        if v > m {
            m = v;
        }
    }
    m + 1
}

/// A point strictly inside `(lo, hi)` where `p` does not vanish.
fn split_point(p: &[Rational], lo: &Rational, hi: &Rational) -> Rational {
    let width = Rational::from(hi - lo);
    for den in 2u32.. {
        for num in 1..den {
            // Try 1/2 first, then 1/3, 2/3, 1/4, ...
            let t = Rational::from((num, den));
            let c = Rational::from(lo + Rational::from(&width * &t));
            if eval(p, &c) != 0 {
                return c;
            }
        }
    }
    unreachable!("a nonzero polynomial has finitely many roots")
}

/// Certified isolation of the distinct real roots of `p`.
pub fn isolate_real_roots(p: &Polynomial) -> Result<RootSet> {
    let r = to_rat(p, "isolate_real_roots")?;
    if r.is_empty() {
        return Err(Error::ZeroPolynomial { op: "isolate_real_roots" });
    }
    let sqf = square_free_rat(&r);
    let sturm = Sturm::new(sqf.clone());
    let total = sturm.count(&Bound::NegInf, &Bound::PosInf);
    if total == 0 {
        return Ok(RootSet { intervals: Vec::new(), real_count: 0 });
    }
    let b = cauchy_bound(&sqf);
    let fin = |x: &Rational| Bound::Finite(Scalar::from_rational(x.clone()));
    let mut out = Vec::with_capacity(total);
    // Depth-first, right half pushed first so intervals come out sorted.
    let mut stack = vec![(Rational::from(-&b), b, total)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(RootInterval {
                lo: Scalar::from_rational(lo),
                hi: Scalar::from_rational(hi),
            }),
            _ => {
                let c = split_point(&sqf, &lo, &hi);
                let left = sturm.count(&fin(&lo), &fin(&c));
                let right = n - left;
                stack.push((c.clone(), hi, right));
                stack.push((lo, c, left));
            }
        }
    }
    Ok(RootSet { real_count: out.len(), intervals: out })
}

/// Bisects an isolating interval until its width is at most `tol`.
pub fn refine_root(p: &Polynomial, interval: &RootInterval, tol: &Scalar) -> Result<RootInterval> {
    let r = to_rat(p, "refine_root")?;
    if r.is_empty() {
        return Err(Error::ZeroPolynomial { op: "refine_root" });
    }
    let tol = tol.rational("refine_root")?.clone();
    let mut lo = interval.lo.rational("refine_root")?.clone();
    let mut hi = interval.hi.rational("refine_root")?.clone();
    let sqf = square_free_rat(&r);
    let no_change = || Error::NoSignChange { lo: interval.lo.to_string(), hi: interval.hi.to_string() };
    if lo == hi {
        return if eval(&sqf, &lo) == 0 { Ok(interval.clone()) } else { Err(no_change()) };
    }
    let s_lo = sign(&eval(&sqf, &lo));
    let s_hi = sign(&eval(&sqf, &hi));
    if s_lo * s_hi >= 0 {
        return Err(no_change());
    }
    while Rational::from(&hi - &lo) > tol {
        let mid = Rational::from(&lo + &hi) / 2u32;
        match sign(&eval(&sqf, &mid)) {
            0 => {
                return Ok(RootInterval {
                    lo: Scalar::from_rational(mid.clone()),
                    hi: Scalar::from_rational(mid),
                })
            }
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(RootInterval { lo: Scalar::from_rational(lo), hi: Scalar::from_rational(hi) })
}

/// True iff every root of `p` (counted with multiplicity, complex roots
/// included) is real and lies in `interval`, endpoints included or excluded
/// per its flags.
pub fn all_roots_in(p: &Polynomial, interval: &Interval) -> Result<bool> {
    let r = to_rat(p, "all_roots_in")?;
    if r.is_empty() {
        return Err(Error::ZeroPolynomial { op: "all_roots_in" });
    }
    exact_bound(&interval.lo, "all_roots_in")?;
    exact_bound(&interval.hi, "all_roots_in")?;
    let sqf = square_free_rat(&r);
    let distinct = sqf.len() - 1;
    let sturm = Sturm::new(sqf.clone());
    let real = sturm.count(&Bound::NegInf, &Bound::PosInf);
    if real != distinct {
        return Ok(false);
    }
    let mut inside = sturm.count(&interval.lo, &interval.hi);
    if let Bound::Finite(b) = &interval.hi {
        if !interval.hi_closed && eval(&sqf, b.as_rational().unwrap()) == 0 {
            inside -= 1;
        }
    }
    if let Bound::Finite(a) = &interval.lo {
        if interval.lo_closed && eval(&sqf, a.as_rational().unwrap()) == 0 {
            inside += 1;
        }
    }
    Ok(inside == distinct)
}
