//! The Thue–Morse sequence, its bi-infinite extension and the
//! period-doubling sequence.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigUint;

use crate::error::{check_budget, Result};

/// Default cap on the length of generated prefixes.
pub const DEFAULT_PREFIX_CAP: usize = 1 << 26;

/// A Thue–Morse letter weight, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct Sign(i8);

impl Sign {
    pub const PLUS: Sign = Sign(1);
    pub const MINUS: Sign = Sign(-1);

    /// `(-1)^k`.
    pub fn parity(k: u64) -> Sign {
        if k & 1 == 0 {
            Sign::PLUS
        } else {
            Sign::MINUS
        }
    }

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn is_plus(self) -> bool {
        self.0 > 0
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign(-self.0)
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign(self.0 * rhs.0)
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.0 as i64
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// A period-doubling letter weight: `a = -1`, `b = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct PdSign(i8);

impl PdSign {
    pub const A: PdSign = PdSign(-1);
    pub const B: PdSign = PdSign(1);

    pub fn value(self) -> i8 {
        self.0
    }
}

/// Binary digit sum of `n`.
pub fn s2(n: u64) -> u32 {
    n.count_ones()
}

/// Binary digit sum of an arbitrary-size integer, one machine word at a time.
pub fn s2_big(n: &BigUint) -> u64 {
    n.iter_u64_digits().map(|d| d.count_ones() as u64).sum()
}

/// `t(n) = (-1)^{s2(n)}`.
pub fn t(n: u64) -> Sign {
    Sign::parity(s2(n) as u64)
}

pub fn t_big(n: &BigUint) -> Sign {
    Sign::parity(s2_big(n))
}

/// The bi-infinite extension: `w(n) = t(n)` for `n >= 0`, `t(-n-1)` otherwise.
pub fn w(n: i64) -> Sign {
    if n >= 0 {
        t(n as u64)
    } else {
        // -n-1 == !n in two's complement, which also covers i64::MIN.
        t(!n as u64)
    }
}

/// The first `2^m` signs, built as the `m`-fold Kronecker power of `(1, -1)`.
pub fn tm_prefix(m: u32, cap: usize) -> Result<Vec<Sign>> {
    let len = 1u128.checked_shl(m).unwrap_or(u128::MAX);
    check_budget("Thue-Morse prefix length", len, cap as u128)?;
    let mut out = Vec::with_capacity(len as usize);
    out.push(Sign::PLUS);
    for _ in 0..m {
        let half = out.len();
        out.extend_from_within(..half);
        for s in &mut out[half..] {
            *s = -*s;
        }
    }
    Ok(out)
}

/// The first `len` signs, computed pointwise from the digit sum.
pub fn tm_signs(len: usize, cap: usize) -> Result<Vec<Sign>> {
    check_budget("Thue-Morse prefix length", len as u128, cap as u128)?;
    Ok((0..len as u64).map(t).collect())
}

/// The first `len` weights of the one-sided period-doubling fixed point
/// `a -> ab, b -> aa` grown from `a`.
pub fn pd_prefix(len: usize) -> Vec<PdSign> {
    let mut word = vec![PdSign::A];
    while word.len() < len {
        word = word
            .iter()
            .flat_map(|&letter| {
                if letter == PdSign::A {
                    [PdSign::A, PdSign::B]
                } else {
                    [PdSign::A, PdSign::A]
                }
            })
            .collect();
    }
    word.truncate(len);
    word
}
