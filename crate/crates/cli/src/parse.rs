//! Literal parsing for command-line values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `a`, `a/b` or `a.d` with an optional sign.
pub fn rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let bad = || format!("invalid rational literal {s:?}");
    let digits = |d: &str| -> Result<BigInt, String> {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        d.parse::<BigInt>().map_err(|_| bad())
    };
    let q = if let Some((num, den)) = body.split_once('/') {
        let den = digits(den)?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        BigRational::new(digits(num)?, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        let whole = if whole.is_empty() { BigInt::zero() } else { digits(whole)? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        BigRational::new(whole * &scale + digits(frac)?, scale)
    } else {
        BigRational::from_integer(digits(body)?)
    };
    Ok(if neg { -q } else { q })
}

/// Twice a half-integer literal.
pub fn twice_half(s: &str) -> Result<i64, String> {
    let q = rational(s)?;
    let twice = q * BigRational::from_integer(BigInt::from(2));
    if !twice.is_integer() || twice.numer().abs() > BigInt::from(1_000_000) {
        return Err(format!("{s:?} is not a half-integer of moderate size"));
    }
    Ok(i64::try_from(twice.to_integer()).expect("bounded above"))
}

/// A `ν` target: a half-integer or `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuTarget {
    Finite(i64),
    Infinite,
}

/// Comma-separated `ν` targets; an empty string is an empty grid.
pub fn nu_grid(s: &str) -> Result<Vec<NuTarget>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "inf" | "+inf" => Ok(NuTarget::Infinite),
            _ => twice_half(t).map(NuTarget::Finite),
        })
        .collect()
}

/// Comma-separated rationals.
pub fn rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(rational)
        .collect()
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
