//! Carrier types shared by several instances and literal parsing helpers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An integer extended with both infinities. Ordered `NegInf < Fin(_) < PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    /// Sum where `absorbing` wins over the opposite infinity.
    pub(crate) fn plus(self, other: ExtInt, absorbing: ExtInt) -> ExtInt {
        use ExtInt::*;
        if self == absorbing || other == absorbing {
            return absorbing;
        }
        match (self, other) {
            (Fin(a), Fin(b)) => match a.checked_add(b) {
                Some(s) => Fin(s),
                None if a > 0 => PosInf,
                None => NegInf,
            },
            (PosInf, _) | (_, PosInf) => PosInf,
            _ => NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "inf"),
        }
    }
}

/// A probability in `[0,1]` extended with a `-inf` bottom (probabilistic-union carrier).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProbUnionVal {
    NegInf,
    P(BigRational),
}

/// Non-negative rationals with an infinity on top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    Fin(BigRational),
    Inf,
}

/// Naturals with an infinity on top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(BigUint),
    Inf,
}

/// Security levels `0 < L < M < H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Zero,
    L,
    M,
    H,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Zero, Level::L, Level::M, Level::H];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Zero => "0",
            Level::L => "L",
            Level::M => "M",
            Level::H => "H",
        }
    }
}

pub(crate) fn is_pos_inf(s: &str) -> bool {
    matches!(s, "inf" | "+inf" | "∞" | "+∞" | "infinity")
}

pub(crate) fn is_neg_inf(s: &str) -> bool {
    matches!(s, "-inf" | "-∞" | "−∞" | "−inf" | "-infinity")
}

/// Parses `3`, `1/2`, `0.015`, `1.5%` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('%') {
        return parse_rational(body).map(|r| r / BigRational::from_integer(BigInt::from(100)));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut num: BigInt = if int_part.is_empty() { BigInt::zero() } else { int_part.parse().ok()? };
    let mut den = BigInt::one();
    for c in frac_part.chars() {
        num = num * 10 + BigInt::from(c.to_digit(10)?);
        den *= 10;
    }
    if neg {
        num = -num;
    }
    Some(BigRational::new(num, den))
}

pub(crate) fn parse_nat_i64(s: &str) -> Option<i64> {
    let s = s.trim();
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with a fixed number of fractional digits, for human output only.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * BigRational::from_integer(scale.clone())).round();
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let n = n.abs();
    let int = &n / &scale;
    let frac = &n % &scale;
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    s
}

pub(crate) fn rational_in_unit(r: &BigRational) -> bool {
    !r.is_negative() && *r <= BigRational::one()
}
