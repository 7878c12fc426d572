//! Exact rational values and their text forms.
//!
//! Every correlation coefficient is carried as a reduced [`Rational`].
//! Values of the balanced system live in the frequency module
//! `{ m / (3 * 2^r) }`, which [`in_frequency_module`] tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-k` as an exact rational.
pub fn inv_pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// True when the reduced denominator has the form `3^e * 2^r` with `e <= 1`.
pub fn in_frequency_module(value: &Rational) -> bool {
    let mut den = value.denom().clone();
    if den.is_zero() {
        return false;
    }
    let twos = den.trailing_zeros().unwrap_or(0);
    den >>= twos;
    den.is_one() || den == BigInt::from(3)
}

/// Renders `num/den`, keeping the `/1` for integers.
pub fn format_exact(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q`, plain integers included, or an exact decimal such as `2.5e-3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "zero denominator in {text:?}"
            )));
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let mut num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Plain notation is used for moderate exponents, scientific
/// notation otherwise.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10);

    // First guess of floor(log10 |value|) from digit counts, then correct.
    let mut exp10 = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while abs < pow10(exp10) {
        exp10 -= 1;
    }
    while abs >= pow10(exp10 + 1) {
        exp10 += 1;
    }

    let scaled = &abs * pow10(digits as i64 - 1 - exp10);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if r.clone() * 2 >= *scaled.denom() {
        q + 1
    } else {
        q
    };
    if mantissa == num_traits::pow(ten.clone(), digits) {
        mantissa /= &ten;
        exp10 += 1;
    }
    let body = mantissa.to_str_radix(10);
    debug_assert_eq!(body.len(), digits);

    let text = if exp10 >= 0 && (exp10 as usize) < digits {
        let split = exp10 as usize + 1;
        if split == digits {
            body
        } else {
            format!("{}.{}", &body[..split], &body[split..])
        }
    } else if (-6..0).contains(&exp10) {
        format!("0.{}{}", "0".repeat((-exp10 - 1) as usize), body)
    } else if digits == 1 {
        format!("{body}e{exp10}")
    } else {
        format!("{}.{}e{}", &body[..1], &body[1..], exp10)
    };
    if negative {
        format!("-{text}")
    } else {
        text
    }
}

/// Scaled-integer numerators over a shared denominator `3 * 2^k`,
/// converted back to a reduced rational.
pub fn from_scaled(numerator: i64, pow2: u32) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(3) << pow2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_module_membership() {
        assert!(in_frequency_module(&ratio(-1, 3)));
        assert!(in_frequency_module(&ratio(5, 96)));
        assert!(in_frequency_module(&int(0)));
        assert!(!in_frequency_module(&ratio(1, 9)));
        assert!(!in_frequency_module(&ratio(1, 5)));
    }

    #[test]
    fn exact_format_keeps_unit_denominator() {
        assert_eq!(format_exact(&int(0)), "0/1");
        assert_eq!(format_exact(&ratio(2, -6)), "-1/3");
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), ratio(1, 400));
        assert_eq!(parse_rational("3e2").unwrap(), int(300));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(-1, 3), 12), "-0.333333333333");
        assert_eq!(to_decimal(&ratio(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&int(1), 12), "1.00000000000");
        assert_eq!(to_decimal(&int(5), 1), "5");
        assert_eq!(to_decimal(&ratio(1, 1024), 3), "0.000977");
        assert_eq!(to_decimal(&ratio(1, 3 << 30), 4), "3.104e-10");
        assert_eq!(to_decimal(&ratio(999_999, 1), 3), "1.00e6");
        assert_eq!(to_decimal(&int(0), 12), "0");
    }

    #[test]
    fn scaled_roundtrip() {
        assert_eq!(from_scaled(-4, 2), ratio(-1, 3));
        assert_eq!(from_scaled(12, 2), int(1));
    }
}
