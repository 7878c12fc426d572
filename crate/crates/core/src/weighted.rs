//! Correlations for arbitrary (rational) letter weights.
//!
//! With `f(±1) = E ± h`, expanding the product over the `n` sites and
//! dropping the vanishing odd-order parts gives
//!
//! ```text
//! η_f(m₁,…,m_{n-1}) = E^n + Σ_{r≥1} h^{2r} E^{n-2r} Σ_{|S| = 2r} η(S)
//! ```
//!
//! where `S` runs over the `2r`-subsets of the sites `{m₀ = 0, m₁, …}` and
//! `η(S)` is the balanced correlation of those sites.

use num_traits::{One, Zero};

use crate::correlator::Correlator;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Largest order accepted by [`eta_f_general`]; the expansion visits
/// `2^n` subsets.
pub const MAX_WEIGHTED_ORDER: usize = 20;

/// Letter weights `f(-1)` and `f(+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightPair {
    pub f_minus: Rational,
    pub f_plus: Rational,
}

impl WeightPair {
    pub fn new(f_minus: Rational, f_plus: Rational) -> Self {
        WeightPair { f_minus, f_plus }
    }

    /// `f(-1) = -1`, `f(+1) = 1`.
    pub fn balanced() -> Self {
        WeightPair::new(int(-1), int(1))
    }

    /// Weights from mean and half-difference.
    pub fn from_mean_and_half_difference(mean: Rational, half_diff: Rational) -> Self {
        WeightPair::new(&mean - &half_diff, mean + half_diff)
    }

    /// `E(f) = (f(1) + f(-1))/2`, the letter mean.
    pub fn mean(&self) -> Rational {
        (&self.f_plus + &self.f_minus) / int(2)
    }

    /// `h_f = (f(1) - f(-1))/2`.
    pub fn half_difference(&self) -> Rational {
        (&self.f_plus - &self.f_minus) / int(2)
    }

    /// Shifts both weights by `c`.
    pub fn shifted(&self, c: &Rational) -> Self {
        WeightPair::new(&self.f_minus + c, &self.f_plus + c)
    }

    pub fn weight(&self, plus: bool) -> &Rational {
        if plus {
            &self.f_plus
        } else {
            &self.f_minus
        }
    }
}

fn pow(base: &Rational, e: usize) -> Rational {
    num_traits::pow(base.clone(), e)
}

impl Correlator {
    /// `η_f(m) = h² η(m) + E²`.
    pub fn eta_f_pair(&self, f: &WeightPair, m: i64) -> Rational {
        let h = f.half_difference();
        let e = f.mean();
        &h * &h * self.eta_pair(m) + &e * &e
    }

    /// `η_f(m₁, m₂) = h² E (η(m₁) + η(m₂) + η(|m₁ - m₂|)) + E³`.
    pub fn eta_f_triple(&self, f: &WeightPair, m1: i64, m2: i64) -> Rational {
        let h = f.half_difference();
        let e = f.mean();
        let diff = (m1 as i128 - m2 as i128).unsigned_abs();
        let inner = self.eta_pair(m1) + self.eta_pair(m2) + self.pair_value(diff as u64);
        &h * &h * &e * inner + pow(&e, 3)
    }

    /// General `n`-point weighted correlation, `n = 1 + lags.len()`.
    /// With no lags this is the letter mean `E(f)`.
    pub fn eta_f_general(&self, f: &WeightPair, lags: &[i64]) -> Result<Rational> {
        self.weighted_expansion(f, lags, false)
    }

    /// The expansion with the odd-size subsets kept; they contribute
    /// nothing, so the result equals [`Correlator::eta_f_general`].
    pub fn eta_f_general_all_subsets(&self, f: &WeightPair, lags: &[i64]) -> Result<Rational> {
        self.weighted_expansion(f, lags, true)
    }

    fn weighted_expansion(
        &self,
        f: &WeightPair,
        lags: &[i64],
        include_odd: bool,
    ) -> Result<Rational> {
        let n = lags.len() + 1;
        if n > MAX_WEIGHTED_ORDER {
            return Err(Error::BudgetExceeded {
                what: "weighted correlation order",
                requested: n as u128,
                cap: MAX_WEIGHTED_ORDER as u128,
            });
        }
        let e = f.mean();
        let h = f.half_difference();
        let sites: Vec<i64> = std::iter::once(0).chain(lags.iter().copied()).collect();

        let mut by_size = vec![Rational::zero(); n + 1];
        by_size[0] = Rational::one();
        for mask in 1u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if size % 2 == 1 && !include_odd {
                continue;
            }
            if size == 1 {
                // A single site averages to the letter mean of ±1, which is 0.
                continue;
            }
            let chosen: Vec<i64> = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| sites[i])
                .collect();
            let anchor = chosen[0];
            let rel: Vec<i64> = chosen[1..].iter().map(|&m| m - anchor).collect();
            let value = self.eta(&rel)?;
            by_size[size] += value;
        }

        let mut total = Rational::zero();
        for (size, sum) in by_size.iter().enumerate() {
            if sum.is_zero() {
                continue;
            }
            total += pow(&h, size) * pow(&e, n - size) * sum;
        }
        Ok(total)
    }
}
