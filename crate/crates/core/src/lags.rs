//! Lag tuples: the arguments of n-point correlations.

use std::fmt;

use crate::error::{Error, Result};

/// Canonical argument of an `n`-point correlation.
///
/// The base site sits at lag 0 and is not stored; `lags` holds the other
/// `n - 1` sites, sorted ascending, repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LagTuple {
    lags: Vec<u64>,
}

impl LagTuple {
    /// Builds a tuple from non-negative lags measured from the base site.
    pub fn new(mut lags: Vec<u64>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidArgument(
                "a correlation needs at least one lag".into(),
            ));
        }
        lags.sort_unstable();
        Ok(LagTuple { lags })
    }

    pub(crate) fn from_sorted(lags: Vec<u64>) -> Self {
        debug_assert!(!lags.is_empty() && lags.windows(2).all(|w| w[0] <= w[1]));
        LagTuple { lags }
    }

    pub fn pair(m: u64) -> Self {
        LagTuple { lags: vec![m] }
    }

    /// Number of sites, base site included.
    pub fn order(&self) -> usize {
        self.lags.len() + 1
    }

    pub fn lags(&self) -> &[u64] {
        &self.lags
    }

    pub fn max_lag(&self) -> u64 {
        *self.lags.last().expect("non-empty")
    }

    /// True when every lag is 0 or 1.
    pub fn is_corner(&self) -> bool {
        self.max_lag() <= 1
    }

    /// Adds `c` to every lag (the base site stays at 0).
    pub fn offset(&self, c: u64) -> LagTuple {
        LagTuple {
            lags: self.lags.iter().map(|&l| l + c).collect(),
        }
    }
}

impl fmt::Display for LagTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lags.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Maps an arbitrary list of integer lags to its canonical [`LagTuple`].
///
/// The multiset `{0} ∪ raw` is translated so that its minimum is 0, one
/// copy of 0 is removed and the rest is sorted.
pub fn canonicalize(raw: &[i64]) -> Result<LagTuple> {
    if raw.is_empty() {
        return Err(Error::InvalidArgument(
            "a correlation needs at least one lag".into(),
        ));
    }
    let min = raw.iter().copied().min().unwrap().min(0) as i128;
    let mut sites: Vec<u64> = std::iter::once(0i64)
        .chain(raw.iter().copied())
        .map(|x| (x as i128 - min) as u64)
        .collect();
    sites.sort_unstable();
    sites.remove(0);
    Ok(LagTuple::from_sorted(sites))
}

/// A vertex of the unit hypercube `{0,1}^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CornerTuple {
    bits: Vec<u8>,
}

impl CornerTuple {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "corner bits must be a non-empty 0/1 list, got {bits:?}"
            )));
        }
        Ok(CornerTuple { bits })
    }

    /// Corner with `len` bits read from `mask`, the first bit most significant.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| ((mask >> (len - 1 - i)) & 1) as u8)
            .collect();
        CornerTuple { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn order(&self) -> usize {
        self.bits.len() + 1
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}
