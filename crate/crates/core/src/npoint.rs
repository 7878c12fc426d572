//! Balanced n-point correlations.
//!
//! For lags `2m + r` with `r ∈ {0,1}^{n-1}` and `|r| = Σ r_i`,
//!
//! ```text
//! η(2m + r) = (-1)^|r| / 2 · ( η(m) + (-1)^n η(m + r) )
//! ```
//!
//! The largest lag roughly halves with each application, so every tuple
//! reduces to corners of the unit hypercube, whose values are fixed by the
//! single seed `η(0,…,0)`.

use crate::correlator::Correlator;
use crate::error::{Error, Result};
use crate::lags::{canonicalize, CornerTuple, LagTuple};
use crate::rational::{int, ratio, Rational};

/// Corner value from the ergodic averages: `0` for odd order, `1` for even
/// order with even weight, `-1/3` for even order with odd weight.
pub fn corner_value(corner: &CornerTuple) -> Rational {
    if corner.order() % 2 == 1 {
        int(0)
    } else if corner.weight().is_multiple_of(2) {
        int(1)
    } else {
        ratio(-1, 3)
    }
}

/// Corner value solved from the closed corner subsystem of the reduction,
/// `η(r) = (-1)^|r| / (2 + (-1)^{n+|r|-1}) · η(0,…,0)`.
pub fn corner_value_from_seed(corner: &CornerTuple, seed: &Rational) -> Rational {
    let n = corner.order();
    let r = corner.weight();
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    let den = if (n + r - 1).is_multiple_of(2) { 3 } else { 1 };
    seed * ratio(sign, den)
}

/// Which of the four stride-4 diagonal identities hold for a base tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadReport {
    /// `holds[c]` is the outcome for `η(4m + c, …, 4m + c)`.
    pub holds: [bool; 4],
}

impl QuadReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    /// Residues `c` whose identity failed.
    pub fn failed(&self) -> Vec<usize> {
        (0..4).filter(|&c| !self.holds[c]).collect()
    }
}

fn parity_sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Correlator {
    /// Exact `η` of a canonical lag tuple.
    pub fn eta_n(&self, lags: &LagTuple) -> Result<Rational> {
        let n = lags.order();
        if n > self.max_order {
            return Err(Error::BudgetExceeded {
                what: "correlation order",
                requested: n as u128,
                cap: self.max_order as u128,
            });
        }
        if n == 2 {
            return Ok(self.pair_value(lags.lags()[0]));
        }

        let mut stack = vec![lags.clone()];
        while let Some(key) = stack.last() {
            if self.lookup(key).is_some() {
                stack.pop();
                continue;
            }
            let (lower, upper, weight) = reduce(key);
            match (self.lookup(&lower), self.lookup(&upper)) {
                (Some(a), Some(b)) => {
                    let b = if n.is_multiple_of(2) { b } else { -b };
                    let mut value = (a + b) / int(2);
                    if weight % 2 == 1 {
                        value = -value;
                    }
                    let key = stack.pop().expect("non-empty");
                    self.memo.insert(key, value);
                }
                (a, b) => {
                    if a.is_none() {
                        stack.push(lower);
                    }
                    if b.is_none() {
                        stack.push(upper);
                    }
                }
            }
        }
        Ok(self
            .lookup(lags)
            .expect("worklist resolved the requested tuple"))
    }

    /// Canonicalizes `raw` and evaluates it.
    pub fn eta(&self, raw: &[i64]) -> Result<Rational> {
        self.eta_n(&canonicalize(raw)?)
    }

    fn lookup(&self, key: &LagTuple) -> Option<Rational> {
        if key.is_corner() {
            let bits = key.lags().iter().map(|&l| l as u8).collect();
            let corner = CornerTuple::new(bits).expect("lags are 0/1");
            Some(corner_value_from_seed(
                &corner,
                &self.seed_for_order(key.order()),
            ))
        } else {
            self.memo.get(key)
        }
    }

    /// Period-doubling autocorrelation `η_pd(m) = η(1, m, m+1)` for weights
    /// `a = -1`, `b = +1`.
    pub fn eta_pd(&self, m: i64) -> Result<Rational> {
        let next = m
            .checked_add(1)
            .ok_or_else(|| Error::InvalidArgument(format!("lag {m} out of range")))?;
        self.eta(&[1, m, next])
    }

    /// Checks the stride-4 identities along the diagonal shift family:
    ///
    /// ```text
    /// η(4m)   = η(m)
    /// η(4m+1) =  (η(m+1) - (-1)^n η(m)) / 4
    /// η(4m+2) = -(η(m+1) + (-1)^n η(m)) / 2
    /// η(4m+3) =  (η(m) - (-1)^n η(m+1)) / 4
    /// ```
    ///
    /// where `4m + c` and `m + 1` shift every lag of the base tuple.
    pub fn quad_relations_check(&self, base: &LagTuple) -> Result<QuadReport> {
        let n = base.order();
        let overflow = || Error::InvalidArgument(format!("lags of {base} too large"));
        if base
            .max_lag()
            .checked_mul(4)
            .and_then(|v| v.checked_add(3))
            .is_none()
        {
            return Err(overflow());
        }
        let scaled =
            |c: u64| LagTuple::from_sorted(base.lags().iter().map(|&l| 4 * l + c).collect());
        let at_m = self.eta_n(base)?;
        let at_m1 = self.eta_n(&base.offset(1))?;
        let sn = int(parity_sign(n));

        let expected = [
            at_m.clone(),
            (&at_m1 - &sn * &at_m) / int(4),
            -(&at_m1 + &sn * &at_m) / int(2),
            (&at_m - &sn * &at_m1) / int(4),
        ];
        let mut holds = [false; 4];
        for (c, want) in expected.iter().enumerate() {
            holds[c] = self.eta_n(&scaled(c as u64))? == *want;
        }
        Ok(QuadReport { holds })
    }
}

/// One reduction step: the two child tuples `m` and `m + r` and the weight
/// `|r|` of the residue vector.
pub(crate) fn reduce(key: &LagTuple) -> (LagTuple, LagTuple, usize) {
    let lags = key.lags();
    let lower: Vec<u64> = lags.iter().map(|&l| l >> 1).collect();
    let upper: Vec<u64> = lags.iter().map(|&l| (l >> 1) + (l & 1)).collect();
    let weight = lags.iter().filter(|&&l| l & 1 == 1).count();
    // Floor and ceiling halving both preserve ascending order.
    (
        LagTuple::from_sorted(lower),
        LagTuple::from_sorted(upper),
        weight,
    )
}
