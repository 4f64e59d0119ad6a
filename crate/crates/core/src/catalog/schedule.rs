//! Block schedules for the Meixner and Krawtchouk families.
//!
//! Indices `k` are split into alternating blocks `[m_l, n_l)` and
//! `[n_l, m_{l+1})` with `m_0 = 0`. The first kind of block has a linear
//! numerator (`alpha_k = 0`), the second a constant one (`beta_k = 0`). The
//! last listed breakpoint opens a block that never ends.

use serde::Serialize;

use crate::basis::AffinePair;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// `g_k(mu) = (beta_0 - k) mu`.
    Linear,
    /// `g_k(mu) = (k - beta_0) gamma_0`.
    Constant,
}

/// Breakpoints `[n_0, m_1, n_1, m_2, ...]`; `m_0 = 0` is implied.
///
/// `[]` puts every index in a linear block, `[0]` every index in a constant
/// block, and `[1, 2]` gives linear, constant, then linear from 2 onwards.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Schedule {
    breakpoints: Vec<usize>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<usize>) -> Result<Self> {
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSchedule(format!(
                "breakpoints must increase strictly, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Schedule { breakpoints })
    }

    /// Every index in a linear block.
    pub fn trivial() -> Self {
        Schedule { breakpoints: Vec::new() }
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    /// Pattern and block number `l` of index `k`.
    pub fn block(&self, k: usize) -> (Pattern, usize) {
        let passed = self.breakpoints.iter().take_while(|&&b| b <= k).count();
        if passed % 2 == 0 {
            (Pattern::Linear, passed / 2)
        } else {
            (Pattern::Constant, passed / 2)
        }
    }

    /// `m_l`, or `None` past the end of the schedule.
    pub fn m(&self, l: usize) -> Option<usize> {
        if l == 0 {
            Some(0)
        } else {
            self.breakpoints.get(2 * l - 1).copied()
        }
    }

    /// `n_l`, or `None` past the end of the schedule.
    pub fn n(&self, l: usize) -> Option<usize> {
        self.breakpoints.get(2 * l).copied()
    }

    /// `M_l = m_0 + ... + m_l`.
    pub fn big_m(&self, l: usize) -> i64 {
        (0..=l).map(|j| self.m(j).expect("block start is finite") as i64).sum()
    }

    /// `N_l = n_0 + ... + n_l`, with `N_{-1} = 0` for `l = -1`.
    pub fn big_n(&self, l: i64) -> i64 {
        (0..=l).map(|j| self.n(j as usize).expect("block start is finite") as i64).sum()
    }

    /// Number of linear-block indices strictly below `k`.
    pub fn linear_count_below(&self, k: usize) -> usize {
        (0..k).filter(|&j| self.block(j).0 == Pattern::Linear).count()
    }
}

/// The pair `(g_k, h_k)` and the shift `sigma_{k+1}` for index `k`.
///
/// The denominator is `gamma_0 + mu` in both kinds of block.
pub fn pairs_for_schedule(
    beta0: &Scalar,
    gamma0: &Scalar,
    schedule: &Schedule,
    k: usize,
) -> (AffinePair, Scalar) {
    let kk = Scalar::int(k as i64);
    let (pattern, l) = schedule.block(k);
    match pattern {
        Pattern::Linear => {
            let pair = AffinePair::new(Scalar::zero(), beta0 - &kk, gamma0.clone(), Scalar::one());
            let shift = schedule.big_n(l as i64 - 1) - schedule.big_m(l) + k as i64;
            (pair, Scalar::int(shift))
        }
        Pattern::Constant => {
            let pair = AffinePair::new(&(&kk - beta0) * gamma0, Scalar::zero(), gamma0.clone(), Scalar::one());
            let shift = &(beta0 + &Scalar::int(schedule.big_n(l as i64) - schedule.big_m(l))) - &kk;
            (pair, shift)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_of_a_mixed_schedule() {
        let s = Schedule::new(vec![1, 2]).unwrap();
        assert_eq!(s.block(0), (Pattern::Linear, 0));
        assert_eq!(s.block(1), (Pattern::Constant, 0));
        assert_eq!(s.block(2), (Pattern::Linear, 1));
        assert_eq!(s.block(9), (Pattern::Linear, 1));
        assert_eq!((s.big_m(1), s.big_n(0), s.big_n(-1)), (2, 1, 0));
        assert_eq!(s.linear_count_below(4), 3);
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(matches!(Schedule::new(vec![2, 2]), Err(Error::MalformedSchedule(_))));
        assert!(matches!(Schedule::new(vec![3, 1]), Err(Error::MalformedSchedule(_))));
    }

    #[test]
    fn constant_block_pair() {
        let s = Schedule::new(vec![0]).unwrap();
        let (pair, _) = pairs_for_schedule(&Scalar::int(-1), &Scalar::int(-2), &s, 0);
        // (k - beta0) gamma0 = (0 + 1)(-2)
        assert_eq!(pair, AffinePair::new(Scalar::int(-2), Scalar::zero(), Scalar::int(-2), Scalar::one()));
    }

    #[test]
    fn linear_block_pair() {
        let (pair, sigma1) = pairs_for_schedule(&Scalar::int(-1), &Scalar::int(-2), &Schedule::trivial(), 0);
        assert_eq!(pair.alpha, Scalar::zero());
        assert_eq!(pair.beta, Scalar::int(-1));
        assert_eq!(pair.delta, Scalar::one());
        assert_eq!(sigma1, Scalar::zero());
    }

    #[test]
    fn first_shift_is_zero() {
        for bp in [vec![], vec![0], vec![1, 2], vec![2, 5, 7]] {
            let s = Schedule::new(bp).unwrap();
            let (_, sigma1) = pairs_for_schedule(&Scalar::ratio(-3, 2), &Scalar::int(-2), &s, 0);
            let expect = if s.block(0).0 == Pattern::Constant { Scalar::ratio(-3, 2) } else { Scalar::zero() };
            assert_eq!(sigma1, expect);
        }
    }
}
