//! Exact rational numbers for rates, memory sizes and subfile sizes.
//!
//! Backed by `num_rational::Ratio<i128>`. Every arithmetic operator uses the
//! checked variant and panics with a descriptive message instead of wrapping.
//! The `checked_*` methods are available where overflow must be handled.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i128>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn from_int(v: i128) -> Self {
        Rational(Ratio::from_integer(v))
    }

    /// Converts an unsigned count (e.g. a binomial coefficient).
    pub fn from_u128(v: u128) -> Self {
        let v = i128::try_from(v).expect("integer does not fit an exact rational");
        Self::from_int(v)
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The integer value, if this is one.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then(|| self.numer())
    }

    /// The value as a non-negative `usize`, if it is one.
    pub fn to_usize(&self) -> Option<usize> {
        self.to_integer().and_then(|v| usize::try_from(v).ok())
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        self.0.checked_add(&rhs.0).map(Rational)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        self.0.checked_sub(&rhs.0).map(Rational)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        self.0.checked_mul(&rhs.0).map(Rational)
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        self.0.checked_div(&rhs.0).map(Rational)
    }

    /// Renders the value with at most 12 significant digits, trailing zeros trimmed.
    pub fn to_decimal_string(&self) -> String {
        format_significant(self.to_f64(), 12)
    }
}

/// Formats `v` with `digits` significant digits, `.` as the decimal separator.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `a`, `a/b` and finite decimals such as `1.25` or `-0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let invalid = || ParseRationalError::Invalid(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: Rational = n.parse().map_err(|_| invalid())?;
            let d: Rational = d.parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            return n.checked_div(&d).ok_or_else(invalid);
        }
        if s.contains(['e', 'E']) {
            return Err(invalid());
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(invalid());
        }
        let mantissa: i128 = format!("{int_part}{frac_part}")
            .trim_start_matches('0')
            .parse()
            .or_else(|e: std::num::ParseIntError| match e.kind() {
                std::num::IntErrorKind::Empty => Ok(0),
                _ => Err(invalid()),
            })?;
        let scale = 10i128
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(invalid)?;
        let value = Rational::new(mantissa, scale);
        Ok(if negative { -value } else { value })
    }
}

impl From<i128> for Rational {
    fn from(v: i128) -> Self {
        Rational::from_int(v)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v as i128)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from_int(v as i128)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational::from_int(v as i128)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} + {rhs}"))
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} - {rhs}"))
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} * {rhs}"))
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division of {self} by zero");
        self.checked_div(&rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} / {rhs}"))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + *x)
    }
}

/// Least common multiple of denominators, checked.
pub(crate) fn lcm_checked(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

impl PartialOrd<i128> for Rational {
    fn partial_cmp(&self, other: &i128) -> Option<Ordering> {
        Some(self.cmp(&Rational::from_int(*other)))
    }
}

impl PartialEq<i128> for Rational {
    fn eq(&self, other: &i128) -> bool {
        *self == Rational::from_int(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        let x = r(6, -4);
        assert_eq!(x.numer(), -3);
        assert_eq!(x.denom(), 2);
        assert_eq!(r(3, 4) + r(1, 3), r(13, 12));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("13/12".parse::<Rational>().unwrap(), r(13, 12));
        assert_eq!("1.25".parse::<Rational>().unwrap(), r(5, 4));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), r(-1, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), r(7, 1));
        assert_eq!(".5".parse::<Rational>().unwrap(), r(1, 2));
        assert_eq!("0".parse::<Rational>().unwrap(), Rational::ZERO);
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1e3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn display_and_decimal() {
        assert_eq!(r(13, 12).to_string(), "13/12");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!(r(13, 12).to_decimal_string(), "1.08333333333");
        assert_eq!(r(2, 5).to_decimal_string(), "0.4");
        assert_eq!(Rational::ZERO.to_decimal_string(), "0");
        assert_eq!(r(20, 1).to_decimal_string(), "20");
    }

    #[test]
    #[should_panic(expected = "rational overflow")]
    fn overflow_is_reported() {
        let big = Rational::from_int(i128::MAX);
        let _ = big + big;
    }

    fn big_sum(a: i64, b: i64, c: i64, d: i64) -> (BigInt, BigInt) {
        // a/b + c/d = (ad + cb) / bd, then reduce by the gcd
        use num_integer::Integer as _;
        let (a, b, c, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
        let mut num = &a * &d + &c * &b;
        let mut den = &b * &d;
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
        if den < BigInt::from(0) {
            num = -num;
            den = -den;
        }
        (num, den)
    }

    proptest! {
        #[test]
        fn addition_matches_bigint_oracle(
            a in -1_000_000_000i64..1_000_000_000,
            b in 1i64..1_000_000_000,
            c in -1_000_000_000i64..1_000_000_000,
            d in 1i64..1_000_000_000,
        ) {
            let sum = r(a as i128, b as i128) + r(c as i128, d as i128);
            let (num, den) = big_sum(a, b, c, d);
            prop_assert_eq!(BigInt::from(sum.numer()), num);
            prop_assert_eq!(BigInt::from(sum.denom()), den);
        }

        #[test]
        fn parse_display_round_trip(n in -10_000i128..10_000, d in 1i128..10_000) {
            let x = r(n, d);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
