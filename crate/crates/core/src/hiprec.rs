//! 128-bit-mantissa floating point on top of `astro-float`, for the
//! non-rational powers `|η|^β` and `N^{-α}`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::rational::Rational;

pub const PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

/// Arithmetic context holding the constant cache.
pub struct HiPrec {
    consts: Consts,
}

impl Default for HiPrec {
    fn default() -> Self {
        Self::new()
    }
}

impl HiPrec {
    pub fn new() -> Self {
        HiPrec {
            consts: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_u64(0, PRECISION)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, PRECISION)
    }

    pub fn from_rational(&mut self, r: &Rational) -> BigFloat {
        let num = BigFloat::parse(
            &r.numer().to_string(),
            Radix::Dec,
            PRECISION,
            RM,
            &mut self.consts,
        );
        let den = BigFloat::parse(
            &r.denom().to_string(),
            Radix::Dec,
            PRECISION,
            RM,
            &mut self.consts,
        );
        num.div(&den, PRECISION, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PRECISION, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PRECISION, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, PRECISION, RM)
    }

    /// `x^e` for `x >= 0`; `0^e = 0` for `e > 0`.
    pub fn pow(&mut self, x: &BigFloat, e: &BigFloat) -> BigFloat {
        if x.is_zero() {
            return self.zero();
        }
        x.pow(e, PRECISION, RM, &mut self.consts)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.consts)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(f64::NAN)
    }
}
