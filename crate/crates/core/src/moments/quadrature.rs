//! Double-exponential quadrature at MPFR precision.
//!
//! Finite intervals use the tanh-sinh map, the half line the exp-sinh map.
//! Both tolerate integrable algebraic endpoint singularities such as
//! `x^(-1/2)`. The step is halved until two successive sums agree.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct QuadValue {
    pub value: Float,
    /// Difference between the last two refinement levels.
    pub error: Float,
    pub levels: usize,
}

const MAX_LEVELS: usize = 12;
const T_MAX: f64 = 10.0;

fn tolerance(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)))
}

/// `h * sum_j w(t_j)` over `t_j = j h`, walking outwards from 0 until the
/// terms have decayed below `eps` relative to the running sum.
fn trapezoid(h: &Float, prec: u32, eps: &Float, term: &impl Fn(&Float) -> Float) -> Float {
    let mut sum = term(&Float::with_val(prec, 0));
    for dir in [1i32, -1] {
        let mut prev: Option<Float> = None;
        let mut j = 1u32;
        loop {
            let t = Float::with_val(prec, h * j) * dir;
            if t.to_f64().abs() > T_MAX {
                break;
            }
            let v = term(&t);
            let mag = if v.is_finite() { v.clone().abs() } else { Float::with_val(prec, 0) };
            if v.is_finite() {
                sum += &v;
            }
            let small = mag <= Float::with_val(prec, eps * sum.clone().abs());
            let decaying = prev.as_ref().is_none_or(|p| mag <= *p);
            if small && decaying {
                break;
            }
            prev = Some(mag);
            j += 1;
        }
    }
    sum * h
}

fn refine(prec: u32, term: impl Fn(&Float) -> Float) -> Result<QuadValue> {
    let eps = tolerance(prec);
    // The walk cutoff is relative to the unscaled sum, which grows like 1/h;
    // it has to sit well below eps or the dropped tail grows with each level.
    let walk_eps = Float::with_val(prec, Float::i_exp(1, 16 - prec as i32));
    let mut h = Float::with_val(prec, 0.5);
    let mut last = trapezoid(&h, prec, &walk_eps, &term);
    for level in 1..=MAX_LEVELS {
        h /= 2;
        let next = trapezoid(&h, prec, &walk_eps, &term);
        let diff = Float::with_val(prec, &next - &last).abs();
        let scale = Float::with_val(prec, next.clone().abs() * &eps);
        if diff <= scale || diff.is_zero() {
            return Ok(QuadValue { value: next, error: diff, levels: level });
        }
        last = next;
        if level == MAX_LEVELS {
            return Err(Error::QuadratureFailed {
                estimate: last.to_string_radix(10, Some(20)),
                error: diff.to_string_radix(10, Some(6)),
            });
        }
    }
    unreachable!()
}

/// `int_0^L f(x, L - x) dx`. The second argument is the distance to the
/// right endpoint, computed without cancellation.
pub fn integrate_interval(
    length: &Float,
    prec: u32,
    f: impl Fn(&Float, &Float) -> Float,
) -> Result<QuadValue> {
    let half_pi = Float::with_val(prec, Constant::Pi) / 2;
    let term = |t: &Float| {
        let sh = Float::with_val(prec, t.sinh_ref());
        let ch = Float::with_val(prec, t.cosh_ref());
        let u = Float::with_val(prec, &half_pi * &sh);
        let e_pos = Float::with_val(prec, (Float::with_val(prec, &u * 2)).exp_ref());
        let e_neg = Float::with_val(prec, (Float::with_val(prec, &u * -2)).exp_ref());
        // x = L / (1 + e^{-2u}), L - x = L / (1 + e^{2u})
        let x = Float::with_val(prec, length / Float::with_val(prec, &e_neg + 1));
        let xc = Float::with_val(prec, length / Float::with_val(prec, &e_pos + 1));
        // dx/dt = (L/2) (pi/2) cosh t / cosh^2 u
        let cu = Float::with_val(prec, u.cosh_ref());
        let w = Float::with_val(prec, length * &half_pi) * ch / Float::with_val(prec, cu.square_ref()) / 2;
        if x.is_zero() || xc.is_zero() {
            return Float::with_val(prec, 0);
        }
        f(&x, &xc) * w
    };
    refine(prec, term)
}

/// `int_0^inf f(x) dx`.
pub fn integrate_half_line(prec: u32, f: impl Fn(&Float) -> Float) -> Result<QuadValue> {
    let half_pi = Float::with_val(prec, Constant::Pi) / 2;
    let term = |t: &Float| {
        let sh = Float::with_val(prec, t.sinh_ref());
        let ch = Float::with_val(prec, t.cosh_ref());
        let x = Float::with_val(prec, Float::with_val(prec, &half_pi * &sh).exp_ref());
        if x.is_zero() || x.is_infinite() {
            return Float::with_val(prec, 0);
        }
        let w = Float::with_val(prec, &x * &half_pi) * ch;
        f(&x) * w
    };
    refine(prec, term)
}
