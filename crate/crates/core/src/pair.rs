//! Pair correlations `η(m)` and the derived letter-pair frequencies.
//!
//! `η(2m) = η(m)` and `η(2m+1) = -(η(m) + η(m+1))/2`, anchored at `η(0)`.

use std::collections::HashMap;

use crate::correlator::Correlator;
use crate::error::{check_budget, Result};
use crate::lags::LagTuple;
use crate::rational::{from_scaled, int, ratio, Rational};

/// Largest table built by [`EtaTable::new`] unless a caller asks otherwise.
pub const DEFAULT_TABLE_CAP: usize = 1 << 28;

/// Which of `μ± = (1 ± η)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PmSign {
    Plus,
    Minus,
}

impl PmSign {
    pub fn flip(self) -> PmSign {
        match self {
            PmSign::Plus => PmSign::Minus,
            PmSign::Minus => PmSign::Plus,
        }
    }
}

/// Letters of the two-letter alphabet (`a = +1`, `b = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
}

/// Solves the closed `m = 0` subsystem `η(1) = -(η(0) + η(1))/2`.
pub fn pair_self_consistency(eta0: &Rational) -> Rational {
    // x = a + b x  =>  x = a / (1 - b), with a = -η(0)/2 and b = -1/2.
    let a = -eta0 / int(2);
    let b = ratio(-1, 2);
    a / (int(1) - b)
}

impl Correlator {
    /// Exact autocorrelation `η(m)`; negative `m` folds by symmetry.
    pub fn eta_pair(&self, m: i64) -> Rational {
        self.pair_value(m.unsigned_abs())
    }

    pub(crate) fn pair_value(&self, m: u64) -> Rational {
        if let Some(v) = self.pair_base(m) {
            return v;
        }
        let mut stack = vec![m];
        while let Some(&k) = stack.last() {
            if self.pair_known(k) {
                stack.pop();
                continue;
            }
            let half = k >> 1;
            if k & 1 == 0 {
                match self.pair_lookup(half) {
                    Some(v) => {
                        self.memo.insert(LagTuple::pair(k), v);
                        stack.pop();
                    }
                    None => stack.push(half),
                }
            } else {
                match (self.pair_lookup(half), self.pair_lookup(half + 1)) {
                    (Some(lo), Some(hi)) => {
                        self.memo.insert(LagTuple::pair(k), -(lo + hi) / int(2));
                        stack.pop();
                    }
                    (lo, hi) => {
                        if lo.is_none() {
                            stack.push(half);
                        }
                        if hi.is_none() {
                            stack.push(half + 1);
                        }
                    }
                }
            }
        }
        self.pair_lookup(m)
            .expect("worklist resolved the requested lag")
    }

    fn pair_base(&self, m: u64) -> Option<Rational> {
        match m {
            0 => Some(self.seed.clone()),
            1 => Some(pair_self_consistency(&self.seed)),
            _ => None,
        }
    }

    fn pair_known(&self, m: u64) -> bool {
        m <= 1 || self.memo.contains(&LagTuple::pair(m))
    }

    fn pair_lookup(&self, m: u64) -> Option<Rational> {
        self.pair_base(m)
            .or_else(|| self.memo.get(&LagTuple::pair(m)))
    }

    /// `μ±(m) = (1 ± η(m))/2`.
    pub fn mu_pm(&self, sign: PmSign, m: u64) -> Rational {
        let eta = self.pair_value(m);
        match sign {
            PmSign::Plus => (int(1) + eta) / int(2),
            PmSign::Minus => (int(1) - eta) / int(2),
        }
    }

    /// Relative frequency of a letter `alpha` followed at distance `n` by a
    /// letter `beta`.
    pub fn pair_frequency(&self, alpha: Letter, beta: Letter, n: i64) -> Rational {
        let sign = if alpha == beta {
            PmSign::Plus
        } else {
            PmSign::Minus
        };
        self.mu_pm(sign, n.unsigned_abs())
    }
}

/// `η(0..len)` as numerators over the common denominator `3 * 2^pow2`.
///
/// Every `η(m)` with `m <= 2^k` has a denominator dividing `3 * 2^k`, so
/// one fixed scale keeps the whole table in exact integers.
#[derive(Clone, Debug)]
pub struct EtaTable {
    pow2: u32,
    nums: Vec<i64>,
}

impl EtaTable {
    pub fn new(len: usize, cap: usize) -> Result<Self> {
        check_budget("pair table length", len as u128, cap as u128)?;
        let len = len.max(2);
        let pow2 = (usize::BITS - (len - 1).leading_zeros()).max(1);
        let denom = 3i64 << pow2;
        let mut nums = Vec::with_capacity(len);
        nums.push(denom);
        nums.push(-(denom / 3));
        for m in 2..len {
            let half = m >> 1;
            let v = if m & 1 == 0 {
                nums[half]
            } else {
                let s = nums[half] + nums[half + 1];
                debug_assert!(s % 2 == 0);
                -s / 2
            };
            nums.push(v);
        }
        Ok(EtaTable { pow2, nums })
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    /// Scale exponent `k` of the shared denominator `3 * 2^k`.
    pub fn pow2(&self) -> u32 {
        self.pow2
    }

    pub fn denominator(&self) -> i64 {
        3i64 << self.pow2
    }

    pub fn numerators(&self) -> &[i64] {
        &self.nums
    }

    pub fn get(&self, m: usize) -> Rational {
        from_scaled(self.nums[m], self.pow2)
    }

    /// Exact `Σ_{m<n} η(m)`.
    pub fn partial_sum(&self, n: usize) -> Rational {
        let s: i128 = self.nums[..n].iter().map(|&v| v as i128).sum();
        Rational::new(s.into(), (self.denominator() as i128).into())
    }
}

/// Exact `Σ_{m<n} η(m)` by direct summation.
pub fn eta_partial_sum(n: usize) -> Result<Rational> {
    Ok(EtaTable::new(n, DEFAULT_TABLE_CAP)?.partial_sum(n))
}

/// `μ±` through the coupled recursion
/// `μ±(2m) = μ±(m)`, `μ±(2m+1) = (μ∓(m) + μ∓(m+1))/2`,
/// which never touches `η`.
#[derive(Debug)]
pub struct CoupledMu {
    base: [[Rational; 2]; 2],
    memo: HashMap<(PmSign, u64), Rational>,
}

impl Default for CoupledMu {
    fn default() -> Self {
        Self::new()
    }
}

impl CoupledMu {
    pub fn new() -> Self {
        // μ+(0) = 1, μ-(0) = 0; the m = 0 equations for odd lag 1 close on
        // themselves: μ+(1) = (μ-(0) + μ-(1))/2 and μ-(1) = (μ+(0) + μ+(1))/2.
        let (p0, q0) = (int(1), int(0));
        let p1 = (int(2) * &q0 + &p0) / int(3);
        let q1 = (&p0 + &p1) / int(2);
        CoupledMu {
            base: [[p0, p1], [q0, q1]],
            memo: HashMap::new(),
        }
    }

    fn idx(sign: PmSign) -> usize {
        match sign {
            PmSign::Plus => 0,
            PmSign::Minus => 1,
        }
    }

    fn lookup(&self, sign: PmSign, m: u64) -> Option<Rational> {
        if m <= 1 {
            Some(self.base[Self::idx(sign)][m as usize].clone())
        } else {
            self.memo.get(&(sign, m)).cloned()
        }
    }

    pub fn value(&mut self, sign: PmSign, m: u64) -> Rational {
        let mut stack = vec![(sign, m)];
        while let Some(&(s, k)) = stack.last() {
            if self.lookup(s, k).is_some() {
                stack.pop();
                continue;
            }
            let half = k >> 1;
            if k & 1 == 0 {
                match self.lookup(s, half) {
                    Some(v) => {
                        self.memo.insert((s, k), v);
                        stack.pop();
                    }
                    None => stack.push((s, half)),
                }
            } else {
                let other = s.flip();
                match (self.lookup(other, half), self.lookup(other, half + 1)) {
                    (Some(a), Some(b)) => {
                        self.memo.insert((s, k), (a + b) / int(2));
                        stack.pop();
                    }
                    (a, b) => {
                        if a.is_none() {
                            stack.push((other, half));
                        }
                        if b.is_none() {
                            stack.push((other, half + 1));
                        }
                    }
                }
            }
        }
        self.lookup(sign, m)
            .expect("worklist resolved the requested lag")
    }
}

/// One-off evaluation of the coupled `μ±` recursion.
pub fn coupled_mu_step(sign: PmSign, m: u64) -> Rational {
    CoupledMu::new().value(sign, m)
}
