//! Exact rational scalars used for every weight, cost and coefficient.

use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::Ratio<i64>;

/// Shorthand for an integral rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Parses `3`, `-2.75`, `1e3` is not accepted; `5/4` is.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::with_capacity(whole.len() + frac.len());
    digits.push_str(whole);
    digits.push_str(frac);
    let mantissa: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let r = Rational::new(mantissa, scale);
    Some(if neg { -r } else { r })
}

/// Decimal rendering. Exact whenever the reduced denominator has only the
/// prime factors 2 and 5; otherwise rounded to 15 fractional digits.
pub fn format_decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let mut den = *a.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    let digits = if den == 1 { twos.max(fives) } else { 15 };
    let scale = 10i128.pow(digits);
    let numer = *a.numer() as i128 * scale;
    let d = *a.denom() as i128;
    let (mut q, rem) = numer.div_rem(&d);
    if den != 1 && rem * 2 >= d {
        q += 1;
    }
    let whole = q / scale;
    let mut frac = format!("{:0width$}", q % scale, width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    let mut out = String::new();
    if neg && !(whole == 0 && frac.is_empty()) {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if !frac.is_empty() {
        out.push('.');
        out.push_str(&frac);
    }
    out
}

/// True when `format_decimal` is lossless for `r`.
pub fn is_terminating(r: &Rational) -> bool {
    let mut den = *r.denom();
    for p in [2, 5] {
        while den % p == 0 {
            den /= p;
        }
    }
    den == 1
}

pub(crate) fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .filter(|r| !r.is_zero())
        .fold(1i64, |acc, r| acc.lcm(r.denom()))
}

/// Largest integer `<= r`.
pub(crate) fn floor(r: &Rational) -> i64 {
    r.floor().to_integer()
}

/// Smallest integer `>= r`.
pub(crate) fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer()
}
