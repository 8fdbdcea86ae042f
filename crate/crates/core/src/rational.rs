//! Parsing and display helpers for exact rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Significant digits used by [`to_decimal`].
pub const DECIMAL_DIGITS: u32 = 12;

/// Correctly rounded decimal rendering with [`DECIMAL_DIGITS`] significant digits.
///
/// Rounding is half away from zero. Trailing zeros of the fraction are dropped, and an
/// exponent is used outside `[1e-5, 1e12)`.
pub fn to_decimal(q: &BigRational) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();

    // estimate the decimal exponent, then correct it exactly
    let approx = crate::exact_count::ln_biguint(&num) - crate::exact_count::ln_biguint(&den);
    let mut exp = (approx / std::f64::consts::LN_10).floor() as i64;
    let ten = BigUint::from(10u32);
    let pow10 = |e: i64| ten.pow(e.unsigned_abs() as u32);
    let below = |e: i64| -> bool {
        // 10^e ≤ num/den ?
        if e >= 0 {
            pow10(e) * &den <= num
        } else {
            den.clone() <= &num * pow10(e)
        }
    };
    while !below(exp) {
        exp -= 1;
    }
    while below(exp + 1) {
        exp += 1;
    }

    let shift = DECIMAL_DIGITS as i64 - 1 - exp;
    let (n, d) = if shift >= 0 { (num * pow10(shift), den) } else { (num, den * pow10(shift)) };
    let (quot, rem) = n.div_rem(&d);
    let mut digits = if rem * 2u32 >= d { quot + 1u32 } else { quot };
    if digits >= pow10(DECIMAL_DIGITS as i64) {
        digits /= 10u32;
        exp += 1;
    }
    let text = digits.to_string();
    let (lead, frac) = text.split_at(1);

    if (-5..12).contains(&exp) {
        let e = exp as usize;
        let body = if exp >= 0 {
            let (int_part, frac_part) = text.split_at(e + 1);
            trim_fraction(int_part, frac_part)
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            trim_fraction("0", &format!("{zeros}{text}"))
        };
        format!("{sign}{body}")
    } else {
        format!("{sign}{}e{exp}", trim_fraction(lead, frac))
    }
}

fn trim_fraction(int_part: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac}")
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` or `"1e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Precondition(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Precondition(format!("`{s}` has a zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow(scale.unsigned_abs()))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `p/q` rendering; integers are printed without a denominator.
pub fn to_fraction(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
