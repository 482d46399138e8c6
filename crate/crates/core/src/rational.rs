//! Helpers around `BigRational`: parsing, float conversion and small constructors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Nearest f64 to an exact rational. Falls back to a scaled division when the
/// numerator or denominator overflow the f64 range on their own.
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(v) = r.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Keep ~60 significant bits of each operand and restore the exponent.
    const KEEP: u64 = 60;
    let trim = |x: &BigInt| -> (f64, i64) {
        let bits = x.bits();
        if bits > KEEP {
            let cut = bits - KEEP;
            ((x >> cut as usize).to_f64().unwrap_or(0.0), cut as i64)
        } else {
            (x.to_f64().unwrap_or(0.0), 0)
        }
    };
    let (n, en) = trim(r.numer());
    let (d, ed) = trim(r.denom());
    let exp = en - ed;
    let mut q = n / d;
    // powi saturates; split the exponent into safe steps.
    let mut e = exp;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        q *= 2f64.powi(step as i32);
        e -= step;
    }
    q
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.3` or `1e-3` into an
/// exact rational. Decimals are read digit-by-digit so `0.3` becomes `3/10`.
pub fn parse(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse(text.to_string()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(text.to_string()))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(text.to_string()))?;
        if q.is_zero() {
            return Err(Error::Parse(text.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(text.to_string()))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(text.to_string()));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(text.to_string()));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().unwrap_or_default());
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        for _ in 0..scale {
            value *= &ten;
        }
    } else {
        for _ in 0..(-scale) {
            value /= &ten;
        }
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

pub fn is_probability(r: &BigRational) -> bool {
    !r.is_negative() && r <= &BigRational::one()
}
