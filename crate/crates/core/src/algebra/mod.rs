//! Exact polynomial and rational-function arithmetic over the rationals.
//!
//! Every structural identity in this crate is certified by building a
//! residual with these types and checking that it is *exactly* the zero
//! polynomial. Coefficients are arbitrary-precision rationals; there is no
//! floating point anywhere on the symbolic path.
//!
//! - [`Ring`]: an ordered list of variable names.
//! - [`MultiPoly`]: sparse polynomial over a ring, terms keyed by [`Monomial`]
//!   in graded-lexicographic order.
//! - [`RationalFn`]: a quotient of two polynomials on the same ring.

mod poly;
mod ratfn;
mod ring;

pub use poly::{Monomial, MultiPoly};
pub use ratfn::RationalFn;
pub use ring::Ring;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

/// Exact rational coefficient. Always stored in lowest terms with a
/// positive denominator; zero is `0/1`.
pub type Rational = num_rational::BigRational;

/// Binary arithmetic operations shared by [`MultiPoly::arith`] and
/// [`RationalFn::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Only meaningful for [`RationalFn`].
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: ({left}) vs ({right})")]
    RingMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}` in ring")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("a ring needs at least one variable")]
    EmptyRing,
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation {0:?} is not defined for polynomials")]
    UnsupportedOp(ArithOp),
    #[error("non-polynomial result (denominator is not constant)")]
    NonPolynomial,
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

/// Builds `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest binary64 to `q` (saturating to ±inf on overflow).
pub fn rational_to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(v) => v,
        None if q.is_negative() => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

/// Parses `"3"`, `"-3/4"`, and, when `allow_decimal` is set, decimal
/// literals such as `"0.25"` or `"-1.5e-3"`; decimals are converted exactly.
pub fn parse_rational(src: &str, allow_decimal: bool) -> Option<Rational> {
    let s = src.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_int(n)?;
        let d: BigInt = parse_int(d)?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some(n) = parse_int(s) {
        return Some(Rational::from_integer(n));
    }
    if allow_decimal {
        parse_decimal(s)
    } else {
        None
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().unwrap_or_default();
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(parse_rational("3/2", false), Some(rat(3, 2)));
        assert_eq!(parse_rational("-2", false), Some(rat_int(-2)));
        assert_eq!(parse_rational("0.25", false), None);
        assert_eq!(parse_rational("0.25", true), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5e-3", true), Some(rat(-3, 2000)));
        assert_eq!(parse_rational("1e3", true), Some(rat_int(1000)));
        assert_eq!(parse_rational("abc", true), None);
        assert_eq!(parse_rational("1/0", false), None);
        assert_eq!(parse_rational("", true), None);
    }

    #[test]
    fn zero_is_canonical() {
        let z = rat(0, -7);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }
}
