//! Brute-force Birkhoff averages over finite prefixes.
//!
//! These estimates never touch the recursions; they exist to check them.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_budget, Error, Result};
use crate::rational::{to_f64, Rational};
use crate::sequence::{pd_prefix, tm_signs};
use crate::weighted::WeightPair;

/// Most sites a single estimate may multiply (bit-sliced counter width).
pub const MAX_SITES: usize = 15;

/// Finite-`N` average of a product of weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    /// `exact` rendered as a float.
    pub value: f64,
    /// The finite average itself, as an exact fraction.
    pub exact: Rational,
    /// Number of product terms averaged.
    pub n: usize,
    pub max_lag: u64,
}

impl Estimate {
    fn new(exact: Rational, n: usize, max_lag: u64) -> Self {
        Estimate {
            value: to_f64(&exact),
            exact,
            n,
            max_lag,
        }
    }
}

/// A Thue–Morse prefix packed one bit per site (bit set where `t_k = -1`).
#[derive(Clone, Debug)]
pub struct Oracle {
    words: Vec<u64>,
    len: usize,
}

impl Oracle {
    pub fn new(len: usize, cap: usize) -> Result<Self> {
        let signs = tm_signs(len, cap)?;
        let mut words = vec![0u64; len / 64 + 2];
        for (k, s) in signs.iter().enumerate() {
            if !s.is_plus() {
                words[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(Oracle { words, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn word_at(&self, offset: usize) -> u64 {
        let (q, r) = (offset / 64, offset % 64);
        if r == 0 {
            self.words[q]
        } else {
            (self.words[q] >> r) | (self.words[q + 1] << (64 - r))
        }
    }

    /// `counts[j]` = number of `k < n` for which exactly `j` of the sites
    /// `k, k + lags[0], …` carry `-1`.
    pub fn minus_counts(&self, lags: &[u64], n: usize) -> Result<Vec<u64>> {
        let sites = lags.len() + 1;
        if sites > MAX_SITES {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_SITES} sites per estimate, got {sites}"
            )));
        }
        let max_lag = lags.iter().copied().max().unwrap_or(0);
        let needed = (n as u128) + max_lag as u128;
        check_budget("oracle prefix length", needed, self.len as u128)?;

        let offsets: Vec<usize> = std::iter::once(0)
            .chain(lags.iter().map(|&l| l as usize))
            .collect();
        let mut counts = vec![0u64; sites + 1];
        let mut start = 0usize;
        while start < n {
            let valid = if n - start >= 64 {
                u64::MAX
            } else {
                (1u64 << (n - start)) - 1
            };
            let mut planes = [0u64; 4];
            for &off in &offsets {
                let mut carry = self.word_at(start + off);
                for plane in planes.iter_mut() {
                    let next = *plane & carry;
                    *plane ^= carry;
                    carry = next;
                }
            }
            for (j, slot) in counts.iter_mut().enumerate() {
                let mut mask = valid;
                for (b, plane) in planes.iter().enumerate() {
                    mask &= if (j >> b) & 1 == 1 { *plane } else { !*plane };
                }
                *slot += mask.count_ones() as u64;
            }
            start += 64;
        }
        Ok(counts)
    }

    /// `(1/N) Σ_{k<N} f(t_k) Π_i f(t_{k+m_i})`.
    pub fn birkhoff_estimate(&self, f: &WeightPair, lags: &[u64], n: usize) -> Result<Estimate> {
        if n == 0 {
            return Err(Error::InvalidArgument("average over zero terms".into()));
        }
        let counts = self.minus_counts(lags, n)?;
        let exact = weighted_average(f, &counts, n);
        Ok(Estimate::new(
            exact,
            n,
            lags.iter().copied().max().unwrap_or(0),
        ))
    }
}

/// Turns sign counts from [`Oracle::minus_counts`] into the exact average
/// of the weighted product, so one count pass serves many weight pairs.
pub fn weighted_average(f: &WeightPair, counts: &[u64], n: usize) -> Rational {
    let sites = counts.len() - 1;
    let mut total = Rational::zero();
    for (j, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term =
            num_traits::pow(f.f_minus.clone(), j) * num_traits::pow(f.f_plus.clone(), sites - j);
        total += term * Rational::from_integer(BigInt::from(c));
    }
    total / Rational::from_integer(BigInt::from(n))
}

/// Period-doubling weights (`a = -1`, `b = +1`) held for repeated estimates.
#[derive(Clone, Debug)]
pub struct PdOracle {
    weights: Vec<i8>,
}

impl PdOracle {
    pub fn new(len: usize, cap: usize) -> Result<Self> {
        check_budget("period-doubling prefix length", len as u128, cap as u128)?;
        Ok(PdOracle {
            weights: pd_prefix(len).iter().map(|v| v.value()).collect(),
        })
    }

    /// `(1/N) Σ_{k<N} v_k v_{k+m}`.
    pub fn estimate(&self, m: u64, n: usize) -> Result<Estimate> {
        if n == 0 {
            return Err(Error::InvalidArgument("average over zero terms".into()));
        }
        let needed = n as u128 + m as u128;
        check_budget(
            "period-doubling prefix length",
            needed,
            self.weights.len() as u128,
        )?;
        let m = m as usize;
        let sum: i64 = self.weights[..n]
            .iter()
            .zip(&self.weights[m..m + n])
            .map(|(&a, &b)| (a * b) as i64)
            .sum();
        Ok(Estimate::new(
            Rational::new(BigInt::from(sum), BigInt::from(n)),
            n,
            m as u64,
        ))
    }
}

pub fn birkhoff_estimate(f: &WeightPair, lags: &[u64], n: usize, cap: usize) -> Result<Estimate> {
    let max_lag = lags.iter().copied().max().unwrap_or(0);
    let len = (n as u128 + max_lag as u128).min(usize::MAX as u128) as usize;
    check_budget(
        "oracle prefix length",
        n as u128 + max_lag as u128,
        cap as u128,
    )?;
    Oracle::new(len, cap)?.birkhoff_estimate(f, lags, n)
}

pub fn pd_autocorr_estimate(m: u64, n: usize, cap: usize) -> Result<Estimate> {
    let len = n as u128 + m as u128;
    check_budget("period-doubling prefix length", len, cap as u128)?;
    PdOracle::new(len as usize, cap)?.estimate(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::sequence::{t, DEFAULT_PREFIX_CAP};

    #[test]
    fn counts_match_naive_loop() {
        let oracle = Oracle::new(5000, DEFAULT_PREFIX_CAP).unwrap();
        for lags in [&[][..], &[1], &[3, 7], &[0, 5, 5], &[2, 9, 31, 64]] {
            for n in [1, 63, 64, 65, 1000, 4000] {
                let got = oracle.minus_counts(lags, n).unwrap();
                let mut want = vec![0u64; lags.len() + 2];
                for k in 0..n as u64 {
                    let j = std::iter::once(0)
                        .chain(lags.iter().copied())
                        .filter(|&l| !t(k + l).is_plus())
                        .count();
                    want[j] += 1;
                }
                assert_eq!(got, want, "lags {lags:?}, n {n}");
            }
        }
    }

    #[test]
    fn squared_weights_are_exact() {
        let oracle = Oracle::new(4096, DEFAULT_PREFIX_CAP).unwrap();
        let e = oracle
            .birkhoff_estimate(&WeightPair::balanced(), &[0], 4000)
            .unwrap();
        assert_eq!(e.exact, int(1));
        let pd = PdOracle::new(4096, DEFAULT_PREFIX_CAP).unwrap();
        assert_eq!(pd.estimate(0, 1234).unwrap().exact, int(1));
    }

    #[test]
    fn letter_frequency_on_power_of_two() {
        let oracle = Oracle::new(1 << 12, DEFAULT_PREFIX_CAP).unwrap();
        let e = oracle
            .birkhoff_estimate(&WeightPair::new(int(0), int(1)), &[], 1 << 12)
            .unwrap();
        assert_eq!(e.exact, ratio(1, 2));
    }

    #[test]
    fn prefix_cap_is_enforced() {
        assert!(birkhoff_estimate(&WeightPair::balanced(), &[10], 100, 105).is_err());
        assert!(pd_autocorr_estimate(10, 100, 105).is_err());
        let oracle = Oracle::new(100, DEFAULT_PREFIX_CAP).unwrap();
        assert!(oracle.minus_counts(&[1], 100).is_err());
    }
}
