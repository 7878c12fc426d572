//! Means of correlation coefficients over growing ranges, and the family of
//! exponent bounds for partial sums of `|η|`.
//!
//! Bulk sums run over dense tables of scaled integer numerators (see
//! [`EtaTable`] and [`CorrelationCube`]) rather than the memoized evaluator.

use std::collections::HashMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_budget, Error, Result};
use crate::hiprec::HiPrec;
use crate::lags::CornerTuple;
use crate::npoint::corner_value;
use crate::pair::{EtaTable, PmSign, DEFAULT_TABLE_CAP};
use crate::rational::{int, Rational};

/// Default cap on `N^{n-1}` for hypercube sums.
pub const DEFAULT_CUBE_BUDGET: u128 = 1 << 24;
/// Largest digit depth accepted by [`exponent_bound`].
pub const MAX_EXPONENT_DEPTH: u32 = 24;

fn count_values(nums: &[i64]) -> HashMap<i64, u64> {
    let mut counts = HashMap::new();
    for &v in nums {
        *counts.entry(v).or_insert(0u64) += 1;
    }
    counts
}

fn big_pow(v: i64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(v), k as usize)
}

fn mean_of_powers(counts: &HashMap<i64, u64>, k: u32, denom: i64, n: usize) -> Rational {
    let mut acc = BigInt::zero();
    for (&v, &c) in counts {
        acc += big_pow(v, k) * BigInt::from(c);
    }
    Rational::new(acc, big_pow(denom, k) * BigInt::from(n))
}

fn table(n: usize) -> Result<EtaTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("mean over zero terms".into()));
    }
    EtaTable::new(n, DEFAULT_TABLE_CAP)
}

/// Exact `(1/N) Σ_{m<N} η(m)^k`.
pub fn power_mean_eta(k: u32, n: usize) -> Result<Rational> {
    let t = table(n)?;
    Ok(mean_of_powers(
        &count_values(&t.numerators()[..n]),
        k,
        t.denominator(),
        n,
    ))
}

/// Exact `(1/N) Σ_{m<N} |η(m)|`.
pub fn abs_mean_eta(n: usize) -> Result<Rational> {
    let t = table(n)?;
    let s: i128 = t.numerators()[..n]
        .iter()
        .map(|&v| v.unsigned_abs() as i128)
        .sum();
    Ok(Rational::new(
        BigInt::from(s),
        BigInt::from(t.denominator()) * BigInt::from(n),
    ))
}

/// Exact `(1/N) Σ_{m<N} μ±(m)^k`.
pub fn power_mean_mu(sign: PmSign, k: u32, n: usize) -> Result<Rational> {
    let t = table(n)?;
    let d = t.denominator();
    let shifted: Vec<i64> = t.numerators()[..n]
        .iter()
        .map(|&v| match sign {
            PmSign::Plus => d + v,
            PmSign::Minus => d - v,
        })
        .collect();
    Ok(mean_of_powers(&count_values(&shifted), k, 2 * d, n))
}

/// Sum of `(|v| / denom)^β` over grouped numerators, at 128-bit precision.
fn abs_power_sum(
    hp: &mut HiPrec,
    counts: &HashMap<i64, u64>,
    denom: i64,
    beta: &Rational,
) -> BigFloat {
    let beta_f = hp.from_rational(beta);
    let mut keys: Vec<(u64, u64)> = counts
        .iter()
        .map(|(&v, &c)| (v.unsigned_abs(), c))
        .collect();
    keys.sort_unstable();
    let mut acc = hp.zero();
    let mut i = 0;
    while i < keys.len() {
        let (v, mut c) = keys[i];
        i += 1;
        while i < keys.len() && keys[i].0 == v {
            c += keys[i].1;
            i += 1;
        }
        if v == 0 {
            continue;
        }
        let x = hp.from_rational(&Rational::new(BigInt::from(v), BigInt::from(denom)));
        let term = hp.pow(&x, &beta_f);
        let weighted = hp.mul(&term, &hp.from_u64(c));
        acc = hp.add(&acc, &weighted);
    }
    acc
}

/// `N^{-α} Σ_{m<N} |η(m)|^β`.
pub fn abs_power_mean_eta(beta: &Rational, n: usize, alpha: &Rational) -> Result<f64> {
    if *beta <= Rational::zero() {
        return Err(Error::InvalidArgument(
            "exponent beta must be positive".into(),
        ));
    }
    let t = table(n)?;
    let mut hp = HiPrec::new();
    let sum = abs_power_sum(
        &mut hp,
        &count_values(&t.numerators()[..n]),
        t.denominator(),
        beta,
    );
    let scale = {
        let nf = hp.from_u64(n as u64);
        let a = hp.from_rational(alpha);
        hp.pow(&nf, &a)
    };
    let v = hp.div(&sum, &scale);
    Ok(hp.to_f64(&v))
}

/// Both sides of `(mean |η|^β)^{1+β} <= (mean |η|^{1+β})^β` over `m < N`,
/// compared at 128-bit precision.
#[derive(Clone, Copy, Debug)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn holder_check(beta: &Rational, n: usize) -> Result<HolderCheck> {
    if *beta <= Rational::zero() {
        return Err(Error::InvalidArgument(
            "exponent beta must be positive".into(),
        ));
    }
    let t = table(n)?;
    let counts = count_values(&t.numerators()[..n]);
    let mut hp = HiPrec::new();
    let nf = hp.from_u64(n as u64);
    let beta1 = beta + int(1);
    let m_beta = {
        let s = abs_power_sum(&mut hp, &counts, t.denominator(), beta);
        hp.div(&s, &nf)
    };
    let m_beta1 = {
        let s = abs_power_sum(&mut hp, &counts, t.denominator(), &beta1);
        hp.div(&s, &nf)
    };
    let lhs = {
        let e = hp.from_rational(&beta1);
        hp.pow(&m_beta, &e)
    };
    let rhs = {
        let e = hp.from_rational(beta);
        hp.pow(&m_beta1, &e)
    };
    let holds = lhs.cmp(&rhs).map(|c| c <= 0).unwrap_or(false);
    Ok(HolderCheck {
        lhs: hp.to_f64(&lhs),
        rhs: hp.to_f64(&rhs),
        holds,
    })
}

/// Depth-`j` exponent bound for partial sums of `|η|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentReport {
    pub j: u32,
    /// Coefficient mass `c_j`.
    pub c: Rational,
    /// `log₂(c_j) / j`.
    pub alpha: f64,
    /// Number of residues `2^j`.
    pub residue_count: u64,
}

/// Computes `c_j = Σ_{r<2^j} (|w_{r,0}| + |w_{r,1}|)`, where `(w_{r,0}, w_{r,1})`
/// is the first row of `M_{b₀} ⋯ M_{b_{j-1}}` for `r = Σ b_q 2^q`, so that
/// `|η(2^j m + r)| <= |w_{r,0}| |η(m)| + |w_{r,1}| |η(m+1)|`.
pub fn exponent_bound(j: u32) -> Result<ExponentReport> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "digit depth must be at least 1".into(),
        ));
    }
    check_budget(
        "exponent digit depth",
        j as u128,
        MAX_EXPONENT_DEPTH as u128,
    )?;
    // Rows are scaled by 2^depth, so 2·M₀ and 2·M₁ keep everything integral.
    fn descend(row: (i64, i64), left: u32) -> i64 {
        if left == 0 {
            return row.0.abs() + row.1.abs();
        }
        let (x, y) = row;
        // (x, y) · [[2, 0], [-1, -1]] and (x, y) · [[-1, -1], [0, 2]]
        descend((2 * x - y, -y), left - 1) + descend((-x, 2 * y - x), left - 1)
    }
    let total = descend((1, 0), j);
    let c = Rational::new(BigInt::from(total), BigInt::one() << j);
    let alpha = ((total as f64).log2() - j as f64) / j as f64;
    Ok(ExponentReport {
        j,
        c,
        alpha,
        residue_count: 1 << j,
    })
}

/// Dense table of `η(m₁,…,m_{d})` over the box `[0, N)^d`, `d = n - 1`,
/// as numerators over `3 * 2^levels`.
#[derive(Clone, Debug)]
pub struct CorrelationCube {
    order: usize,
    side: usize,
    pow2: u32,
    nums: Vec<i64>,
}

impl CorrelationCube {
    pub fn new(order: usize, side: usize, budget: u128) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!(
                "order must be at least 2, got {order}"
            )));
        }
        if side == 0 {
            return Err(Error::InvalidArgument("cube side must be positive".into()));
        }
        let dims = order - 1;
        let points = (side as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
        check_budget("hypercube points", points, budget)?;

        // Largest lag needed at each level, finest first.
        let mut ranges = vec![side - 1];
        while *ranges.last().unwrap() > 1 {
            let r = *ranges.last().unwrap();
            ranges.push(r.div_ceil(2));
        }
        ranges.reverse();
        let levels = (ranges.len() - 1) as u32;
        if levels > 60 {
            return Err(Error::InvalidArgument("cube side too large".into()));
        }

        // Level 0: corners, scaled by 3.
        let mut cur_side = ranges[0] + 1;
        let mut nums: Vec<i64> = (0..cur_side.pow(dims as u32))
            .map(|idx| {
                let bits = digits_of(idx, cur_side, dims)
                    .iter()
                    .map(|&b| b as u8)
                    .collect();
                let v = corner_value(&CornerTuple::new(bits).expect("0/1 digits")) * int(3);
                i64::try_from(v.to_integer()).expect("small corner value")
            })
            .collect();
        let sign_n: i64 = if order.is_multiple_of(2) { 1 } else { -1 };

        for &range in &ranges[1..] {
            let next_side = range + 1;
            let mut next = Vec::with_capacity(next_side.pow(dims as u32));
            let mut lags = vec![0usize; dims];
            for _ in 0..next_side.pow(dims as u32) {
                let mut lo = 0usize;
                let mut hi = 0usize;
                let mut odd = 0usize;
                for &l in lags.iter() {
                    lo = lo * cur_side + (l >> 1);
                    hi = hi * cur_side + (l >> 1) + (l & 1);
                    odd += l & 1;
                }
                // η = ±(a + (-1)^n b)/2 and the scale doubles, so the ½ cancels.
                let v = nums[lo] + sign_n * nums[hi];
                next.push(if odd.is_multiple_of(2) { v } else { -v });
                // Advance the odometer, last lag fastest.
                for slot in lags.iter_mut().rev() {
                    *slot += 1;
                    if *slot < next_side {
                        break;
                    }
                    *slot = 0;
                }
            }
            nums = next;
            cur_side = next_side;
        }
        debug_assert_eq!(cur_side, side);
        Ok(CorrelationCube {
            order,
            side,
            pow2: levels,
            nums,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn denominator(&self) -> i64 {
        3i64 << self.pow2
    }

    pub fn numerators(&self) -> &[i64] {
        &self.nums
    }

    /// Exact value at the given lags (each `< side`).
    pub fn get(&self, lags: &[usize]) -> Rational {
        let idx = lags.iter().fold(0usize, |acc, &l| acc * self.side + l);
        Rational::new(
            BigInt::from(self.nums[idx]),
            BigInt::from(self.denominator()),
        )
    }

    pub fn sum(&self) -> Rational {
        let s: i128 = self.nums.iter().map(|&v| v as i128).sum();
        Rational::new(BigInt::from(s), BigInt::from(self.denominator()))
    }
}

fn digits_of(mut idx: usize, side: usize, dims: usize) -> Vec<usize> {
    let mut out = vec![0; dims];
    for slot in out.iter_mut().rev() {
        *slot = idx % side;
        idx /= side;
    }
    out
}

/// Exact `𝔖(N) = N^{-(n-1)} Σ_{0 <= m_i < N} η(m₁,…,m_{n-1})`.
pub fn hypercube_mean(order: usize, n: usize, budget: u128) -> Result<Rational> {
    let cube = CorrelationCube::new(order, n, budget)?;
    let count = num_traits::pow(BigInt::from(n), order - 1);
    Ok(cube.sum() / Rational::from_integer(count))
}

/// Scaling used by [`abs_hypercube_mean`].
#[derive(Clone, Debug)]
pub enum AbsScaling {
    /// `N^{-α(n-1)} Σ |η|`.
    Alpha(Rational),
    /// `N^{-(n-1)} Σ |η|^β`.
    Beta(Rational),
}

pub fn abs_hypercube_mean(
    order: usize,
    n: usize,
    scaling: &AbsScaling,
    budget: u128,
) -> Result<f64> {
    let cube = CorrelationCube::new(order, n, budget)?;
    let dims = Rational::from_integer(BigInt::from(order - 1));
    let (beta, exponent) = match scaling {
        AbsScaling::Alpha(a) => (int(1), a * &dims),
        AbsScaling::Beta(b) => {
            if *b <= Rational::zero() {
                return Err(Error::InvalidArgument(
                    "exponent beta must be positive".into(),
                ));
            }
            (b.clone(), dims)
        }
    };
    let mut hp = HiPrec::new();
    let sum = abs_power_sum(
        &mut hp,
        &count_values(cube.numerators()),
        cube.denominator(),
        &beta,
    );
    let scale = {
        let nf = hp.from_u64(n as u64);
        let e = hp.from_rational(&exponent);
        hp.pow(&nf, &e)
    };
    let v = hp.div(&sum, &scale);
    Ok(hp.to_f64(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::Correlator;
    use crate::rational::ratio;
    use num_traits::Signed;

    #[test]
    fn zeroth_power_is_one() {
        for n in [1, 2, 7, 100] {
            assert_eq!(power_mean_eta(0, n).unwrap(), int(1));
            assert_eq!(power_mean_mu(PmSign::Plus, 0, n).unwrap(), int(1));
        }
    }

    #[test]
    fn first_power_closed_form() {
        let c = Correlator::new();
        for m in 1..=(1usize << 12) {
            let expect = (int(1) - c.eta_pair(m as i64)) / int(4 * m as i64);
            assert_eq!(power_mean_eta(1, 2 * m).unwrap(), expect, "N = {m}");
        }
    }

    #[test]
    fn exponent_small_depths() {
        let r2 = exponent_bound(2).unwrap();
        assert_eq!(r2.c, int(3));
        assert!((r2.alpha - 3f64.ln() / 4f64.ln()).abs() < 1e-12);
        let r3 = exponent_bound(3).unwrap();
        assert_eq!(r3.c, int(5));
        assert!((r3.alpha - 0.7739760313).abs() < 1e-9);
        assert_eq!(exponent_bound(1).unwrap().c, int(2));
        assert!(exponent_bound(0).is_err());
        assert!(matches!(
            exponent_bound(25),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn estimates_hold() {
        let t = EtaTable::new(4 * 4096 + 8, DEFAULT_TABLE_CAP).unwrap();
        let a = |m: usize| t.get(m).abs();
        let q = ratio(1, 4);
        let h = ratio(1, 2);
        for m in 0..=4096 {
            assert_eq!(a(4 * m), a(m));
            assert!(a(4 * m + 1) <= &q * a(m) + &q * a(m + 1));
            assert!(a(4 * m + 2) <= &h * a(m) + &h * a(m + 1));
            assert!(a(4 * m + 3) <= &q * a(m) + &q * a(m + 1));
        }
    }

    #[test]
    fn cube_matches_pointwise_evaluator() {
        let c = Correlator::new();
        let cube = CorrelationCube::new(4, 13, DEFAULT_CUBE_BUDGET).unwrap();
        for a in 0..13 {
            for b in 0..13 {
                for d in 0..13 {
                    assert_eq!(
                        cube.get(&[a, b, d]),
                        c.eta(&[a as i64, b as i64, d as i64]).unwrap()
                    );
                }
            }
        }
        let pair = CorrelationCube::new(2, 100, DEFAULT_CUBE_BUDGET).unwrap();
        for m in 0..100 {
            assert_eq!(pair.get(&[m]), c.eta_pair(m as i64));
        }
    }

    #[test]
    fn hypercube_means() {
        for n in 1..12 {
            assert_eq!(hypercube_mean(3, n, DEFAULT_CUBE_BUDGET).unwrap(), int(0));
            assert_eq!(
                hypercube_mean(2, n, DEFAULT_CUBE_BUDGET).unwrap(),
                power_mean_eta(1, n).unwrap()
            );
        }
        assert!(matches!(
            hypercube_mean(4, 300, DEFAULT_CUBE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn abs_cube_matches_pair_version() {
        let alpha = ratio(4, 5);
        for n in [16, 100, 1024] {
            let a =
                abs_hypercube_mean(2, n, &AbsScaling::Alpha(alpha.clone()), DEFAULT_CUBE_BUDGET)
                    .unwrap();
            let b = abs_power_mean_eta(&int(1), n, &alpha).unwrap();
            assert!((a - b).abs() < 1e-14 * b.abs().max(1.0));
        }
    }

    #[test]
    fn abs_mean_first_power_is_exact() {
        let n = 1000;
        let exact = abs_mean_eta(n).unwrap();
        let float = abs_power_mean_eta(&int(1), n, &int(1)).unwrap();
        assert!((crate::rational::to_f64(&exact) - float).abs() < 1e-15);
    }
}
