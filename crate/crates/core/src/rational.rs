//! Exact rational helpers shared by every module.
//!
//! [`Rational`] is an arbitrary-precision reduced fraction with a positive
//! denominator. Parsing accepts integers, `p/q` literals and plain decimals
//! (`0.25` parses to exactly `1/4`).

use num::bigint::Sign as BigSign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: scale through the decimal form.
        decimal_string(r, 17).parse().unwrap_or(f64::NAN)
    })
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `7`, `-3/4`, `0.125` or `.5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(whole) || !digits_ok(frac) {
        return Err(err());
    }
    let mut numer = BigInt::zero();
    for c in whole.chars().chain(frac.chars()) {
        numer = numer * 10 + BigInt::from(c.to_digit(10).unwrap());
    }
    let denom = num::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Decimal rendering with `sig` significant digits, rounded half away from
/// zero. Computed from the exact fraction, so identical on every platform.
pub fn decimal_string(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let a = r.abs();
    // Find exponent e with 10^e <= a < 10^(e+1).
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < Rational::one() {
        scaled *= &ten;
        e -= 1;
    }
    // digits = round(a * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let factor = Rational::from_integer(num::pow(BigInt::from(10), shift.unsigned_abs() as usize));
    let x = if shift >= 0 {
        &a * &factor
    } else {
        &a / &factor
    };
    let (q, rem) = x.numer().div_rem(x.denom());
    let twice = rem * 2;
    let mut digits = if &twice >= x.denom() { q + 1 } else { q };
    let mut shift = shift;
    // Rounding may carry into a new digit (e.g. 9.999 -> 10.00).
    if digits.to_string().len() > sig {
        digits /= 10;
        shift -= 1;
    }
    let mut s = digits.to_string();
    let out = if shift <= 0 {
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            let pad = shift - s.len();
            format!("0.{}{}", "0".repeat(pad), s)
        } else {
            let point = s.len() - shift;
            format!("{}.{}", &s[..point], &s[point..])
        }
    };
    let out = if out.contains('.') {
        out.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        out
    };
    if negative {
        format!("-{out}")
    } else {
        out
    }
}

/// `p/q` (or the bare integer) as printed by the CLI and CSV reports.
pub fn fraction_string(r: &Rational) -> String {
    r.to_string()
}

pub fn sign_of(r: &Rational) -> crate::value::Sign {
    match r.numer().sign() {
        BigSign::Minus => crate::value::Sign::Negative,
        BigSign::NoSign => crate::value::Sign::Zero,
        BigSign::Plus => crate::value::Sign::Positive,
    }
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub fn pow(r: &Rational, k: u32) -> Rational {
    num::pow(r.clone(), k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(25, 12), 12), "2.08333333333");
        assert_eq!(decimal_string(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal_string(&rat(-7, 2), 12), "-3.5");
        assert_eq!(decimal_string(&int(1200), 3), "1200");
        assert_eq!(decimal_string(&rat(9999, 1000), 3), "10");
        assert_eq!(decimal_string(&rat(3, 16), 12), "0.1875");
        assert_eq!(decimal_string(&rat(1, 1000), 2), "0.001");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(7, 0), int(1));
        assert_eq!(binomial(3, 5), int(0));
    }
}
