//! Exact rational scalars and the literal parser used by the CLI.
//!
//! Geometry in λ-space is done entirely over `Rat` (128-bit rationals); the
//! involved denominators divide small products like lcm(2d, 4d, d+2), so
//! i128 leaves enormous headroom. The parser accepts the two forms a user
//! can type on the command line: a fraction "a/b" and a decimal "1.25"
//! (converted with exact denominator 10^k). No exponent notation.

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::ToPrimitive;

pub type Rat = Ratio<i128>;

/// Shorthand constructor. Panics on zero denominator, so only call with
/// literal nonzero denominators.
pub fn rat(numer: i128, denom: i128) -> Rat {
    Ratio::new(numer, denom)
}

pub fn rat_int(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// Lossy conversion for reporting. Exact comparisons must stay on `Rat`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Digit budget for parsed literals. Keeps every intermediate product well
/// inside i128 (10^30 < 2^127) regardless of input.
const MAX_DIGITS: usize = 30;

fn parse_digits(s: &str) -> Result<i128> {
    if s.is_empty() || s.len() > MAX_DIGITS || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::RationalParse(s.to_string()));
    }
    let mut v: i128 = 0;
    for b in s.bytes() {
        v = v * 10 + i128::from(b - b'0');
    }
    Ok(v)
}

fn split_sign(s: &str) -> (i128, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (-1, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (1, rest)
    } else {
        (1, s)
    }
}

/// Parse "a/b", "a", or a plain decimal such as "0.25" into an exact
/// rational. Whitespace is trimmed; embedded whitespace, exponents, and
/// literals longer than 30 digits per component are rejected.
pub fn parse_rational(input: &str) -> Result<Rat> {
    let s = input.trim();
    let err = || Error::RationalParse(input.to_string());

    if let Some((lhs, rhs)) = s.split_once('/') {
        let (sign, lhs) = split_sign(lhs);
        let numer = parse_digits(lhs)?;
        let denom = parse_digits(rhs)?;
        if denom == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(sign * numer, denom));
    }

    let (sign, body) = split_sign(s);
    if let Some((int_part, frac_part)) = body.split_once('.') {
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if int_part.len() + frac_part.len() > MAX_DIGITS {
            return Err(err());
        }
        let int_val = if int_part.is_empty() {
            0
        } else {
            parse_digits(int_part)?
        };
        let frac_val = if frac_part.is_empty() {
            0
        } else {
            parse_digits(frac_part)?
        };
        let mut denom: i128 = 1;
        for _ in 0..frac_part.len() {
            denom *= 10;
        }
        return Ok(Ratio::new(sign * (int_val * denom + frac_val), denom));
    }

    let v = parse_digits(body)?;
    Ok(Ratio::from_integer(sign * v))
}
