use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::numeric::*;
use super::{mismatch, Semiring, SemiringKind, SemiringValue};
use crate::error::AlgebraError;

fn bad(kind: SemiringKind, s: &str) -> AlgebraError {
    AlgebraError::BadLiteral { semiring: kind.name(), literal: s.trim().to_string() }
}

/// `({false,true}, ∨, ∧, false, true)`.
#[derive(Debug, Clone, Copy)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;
    const KIND: SemiringKind = SemiringKind::Boolean;

    fn zero() -> bool {
        false
    }
    fn one() -> bool {
        true
    }
    fn add(a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn mul(a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn star(_: &bool) -> bool {
        true
    }
    fn leq(a: &bool, b: &bool) -> bool {
        !*a || *b
    }
    fn parse(s: &str) -> Result<bool, AlgebraError> {
        match s.trim() {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            _ => Err(bad(Self::KIND, s)),
        }
    }
    fn format(a: &bool) -> String {
        a.to_string()
    }
    fn wrap(a: bool) -> SemiringValue {
        SemiringValue::Boolean(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<bool, AlgebraError> {
        match v {
            SemiringValue::Boolean(b) => Ok(*b),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

fn parse_ext_int(kind: SemiringKind, s: &str, allow_pos: bool, allow_neg: bool) -> Result<ExtInt, AlgebraError> {
    let t = s.trim();
    if is_pos_inf(t) && allow_pos {
        Ok(ExtInt::PosInf)
    } else if is_neg_inf(t) && allow_neg {
        Ok(ExtInt::NegInf)
    } else {
        parse_nat_i64(t).map(ExtInt::Fin).ok_or_else(|| bad(kind, s))
    }
}

/// `(ℕ ∪ {∞}, min, +, ∞, 0)`. Smaller numbers are heavier in the natural order.
#[derive(Debug, Clone, Copy)]
pub struct Tropical;

impl Semiring for Tropical {
    type Elem = ExtInt;
    const KIND: SemiringKind = SemiringKind::Tropical;

    fn zero() -> ExtInt {
        ExtInt::PosInf
    }
    fn one() -> ExtInt {
        ExtInt::Fin(0)
    }
    fn add(a: &ExtInt, b: &ExtInt) -> ExtInt {
        *a.min(b)
    }
    fn mul(a: &ExtInt, b: &ExtInt) -> ExtInt {
        a.plus(*b, ExtInt::PosInf)
    }
    fn star(_: &ExtInt) -> ExtInt {
        ExtInt::Fin(0)
    }
    fn leq(a: &ExtInt, b: &ExtInt) -> bool {
        a >= b
    }
    fn parse(s: &str) -> Result<ExtInt, AlgebraError> {
        parse_ext_int(Self::KIND, s, true, false)
    }
    fn format(a: &ExtInt) -> String {
        a.to_string()
    }
    fn wrap(a: ExtInt) -> SemiringValue {
        SemiringValue::Tropical(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ExtInt, AlgebraError> {
        match v {
            SemiringValue::Tropical(x) => Ok(*x),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `(ℕ ∪ {±∞}, max, +, -∞, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct Arctic;

impl Semiring for Arctic {
    type Elem = ExtInt;
    const KIND: SemiringKind = SemiringKind::Arctic;

    fn zero() -> ExtInt {
        ExtInt::NegInf
    }
    fn one() -> ExtInt {
        ExtInt::Fin(0)
    }
    fn add(a: &ExtInt, b: &ExtInt) -> ExtInt {
        *a.max(b)
    }
    fn mul(a: &ExtInt, b: &ExtInt) -> ExtInt {
        a.plus(*b, ExtInt::NegInf)
    }
    fn star(a: &ExtInt) -> ExtInt {
        match a {
            ExtInt::NegInf | ExtInt::Fin(0) => ExtInt::Fin(0),
            _ => ExtInt::PosInf,
        }
    }
    fn leq(a: &ExtInt, b: &ExtInt) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<ExtInt, AlgebraError> {
        parse_ext_int(Self::KIND, s, true, true)
    }
    fn format(a: &ExtInt) -> String {
        a.to_string()
    }
    fn wrap(a: ExtInt) -> SemiringValue {
        SemiringValue::Arctic(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ExtInt, AlgebraError> {
        match v {
            SemiringValue::Arctic(x) => Ok(*x),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

fn parse_unit(kind: SemiringKind, s: &str) -> Result<BigRational, AlgebraError> {
    parse_rational(s).filter(rational_in_unit).ok_or_else(|| bad(kind, s))
}

/// `([0,1], max, ·, 0, 1)` over exact rationals.
#[derive(Debug, Clone, Copy)]
pub struct Viterbi;

impl Semiring for Viterbi {
    type Elem = BigRational;
    const KIND: SemiringKind = SemiringKind::Viterbi;

    fn zero() -> BigRational {
        BigRational::zero()
    }
    fn one() -> BigRational {
        BigRational::one()
    }
    fn add(a: &BigRational, b: &BigRational) -> BigRational {
        a.max(b).clone()
    }
    fn mul(a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn star(_: &BigRational) -> BigRational {
        BigRational::one()
    }
    fn leq(a: &BigRational, b: &BigRational) -> bool {
        a <= b
    }
    fn is_zero(a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse(s: &str) -> Result<BigRational, AlgebraError> {
        parse_unit(Self::KIND, s)
    }
    fn format(a: &BigRational) -> String {
        format_rational(a)
    }
    fn display(a: &BigRational) -> String {
        rational_to_decimal(a, 6)
    }
    fn wrap(a: BigRational) -> SemiringValue {
        SemiringValue::Viterbi(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<BigRational, AlgebraError> {
        match v {
            SemiringValue::Viterbi(x) => Ok(x.clone()),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `({-∞} ∪ [0,1], max, a+b-ab, -∞, 0)`. Multiplication accumulates
/// independent failure probabilities.
#[derive(Debug, Clone, Copy)]
pub struct ProbUnion;

impl Semiring for ProbUnion {
    type Elem = ProbUnionVal;
    const KIND: SemiringKind = SemiringKind::ProbUnion;

    fn zero() -> ProbUnionVal {
        ProbUnionVal::NegInf
    }
    fn one() -> ProbUnionVal {
        ProbUnionVal::P(BigRational::zero())
    }
    fn add(a: &ProbUnionVal, b: &ProbUnionVal) -> ProbUnionVal {
        a.max(b).clone()
    }
    fn mul(a: &ProbUnionVal, b: &ProbUnionVal) -> ProbUnionVal {
        match (a, b) {
            (ProbUnionVal::P(x), ProbUnionVal::P(y)) => ProbUnionVal::P(x + y - x * y),
            _ => ProbUnionVal::NegInf,
        }
    }
    fn star(a: &ProbUnionVal) -> ProbUnionVal {
        match a {
            ProbUnionVal::P(x) if !x.is_zero() => ProbUnionVal::P(BigRational::one()),
            _ => ProbUnionVal::P(BigRational::zero()),
        }
    }
    fn leq(a: &ProbUnionVal, b: &ProbUnionVal) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<ProbUnionVal, AlgebraError> {
        if is_neg_inf(s.trim()) {
            Ok(ProbUnionVal::NegInf)
        } else {
            parse_unit(Self::KIND, s).map(ProbUnionVal::P)
        }
    }
    fn format(a: &ProbUnionVal) -> String {
        match a {
            ProbUnionVal::NegInf => "-inf".into(),
            ProbUnionVal::P(x) => format_rational(x),
        }
    }
    fn display(a: &ProbUnionVal) -> String {
        match a {
            ProbUnionVal::NegInf => "-inf".into(),
            ProbUnionVal::P(x) => rational_to_decimal(x, 6),
        }
    }
    fn wrap(a: ProbUnionVal) -> SemiringValue {
        SemiringValue::ProbUnion(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ProbUnionVal, AlgebraError> {
        match v {
            SemiringValue::ProbUnion(x) => Ok(x.clone()),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `(ℕ ∪ {±∞}, max, min, -∞, ∞)`.
#[derive(Debug, Clone, Copy)]
pub struct Bottleneck;

impl Semiring for Bottleneck {
    type Elem = ExtInt;
    const KIND: SemiringKind = SemiringKind::Bottleneck;

    fn zero() -> ExtInt {
        ExtInt::NegInf
    }
    fn one() -> ExtInt {
        ExtInt::PosInf
    }
    fn add(a: &ExtInt, b: &ExtInt) -> ExtInt {
        *a.max(b)
    }
    fn mul(a: &ExtInt, b: &ExtInt) -> ExtInt {
        *a.min(b)
    }
    fn star(_: &ExtInt) -> ExtInt {
        ExtInt::PosInf
    }
    fn leq(a: &ExtInt, b: &ExtInt) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<ExtInt, AlgebraError> {
        parse_ext_int(Self::KIND, s, true, true)
    }
    fn format(a: &ExtInt) -> String {
        a.to_string()
    }
    fn wrap(a: ExtInt) -> SemiringValue {
        SemiringValue::Bottleneck(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ExtInt, AlgebraError> {
        match v {
            SemiringValue::Bottleneck(x) => Ok(*x),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `({0 < L < M < H}, max, min, 0, H)`.
#[derive(Debug, Clone, Copy)]
pub struct Security;

impl Semiring for Security {
    type Elem = Level;
    const KIND: SemiringKind = SemiringKind::Security;

    fn zero() -> Level {
        Level::Zero
    }
    fn one() -> Level {
        Level::H
    }
    fn add(a: &Level, b: &Level) -> Level {
        *a.max(b)
    }
    fn mul(a: &Level, b: &Level) -> Level {
        *a.min(b)
    }
    fn star(_: &Level) -> Level {
        Level::H
    }
    fn leq(a: &Level, b: &Level) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<Level, AlgebraError> {
        match s.trim() {
            "0" => Ok(Level::Zero),
            "L" | "l" => Ok(Level::L),
            "M" | "m" => Ok(Level::M),
            "H" | "h" => Ok(Level::H),
            _ => Err(bad(Self::KIND, s)),
        }
    }
    fn format(a: &Level) -> String {
        a.as_str().to_string()
    }
    fn wrap(a: Level) -> SemiringValue {
        SemiringValue::Security(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<Level, AlgebraError> {
        match v {
            SemiringValue::Security(x) => Ok(*x),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `(ℕ ∪ {∞}, +, ·, 0, 1)` with `0·∞ = 0`. Counts paths.
#[derive(Debug, Clone, Copy)]
pub struct NatInf;

impl Semiring for NatInf {
    type Elem = ExtNat;
    const KIND: SemiringKind = SemiringKind::NatInf;

    fn zero() -> ExtNat {
        ExtNat::Fin(BigUint::zero())
    }
    fn one() -> ExtNat {
        ExtNat::Fin(BigUint::one())
    }
    fn add(a: &ExtNat, b: &ExtNat) -> ExtNat {
        match (a, b) {
            (ExtNat::Fin(x), ExtNat::Fin(y)) => ExtNat::Fin(x + y),
            _ => ExtNat::Inf,
        }
    }
    fn mul(a: &ExtNat, b: &ExtNat) -> ExtNat {
        match (a, b) {
            (ExtNat::Fin(x), ExtNat::Fin(y)) => ExtNat::Fin(x * y),
            (ExtNat::Fin(x), _) | (_, ExtNat::Fin(x)) if x.is_zero() => Self::zero(),
            _ => ExtNat::Inf,
        }
    }
    fn star(a: &ExtNat) -> ExtNat {
        match a {
            ExtNat::Fin(x) if x.is_zero() => Self::one(),
            _ => ExtNat::Inf,
        }
    }
    fn leq(a: &ExtNat, b: &ExtNat) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<ExtNat, AlgebraError> {
        let t = s.trim();
        if is_pos_inf(t) {
            return Ok(ExtNat::Inf);
        }
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad(Self::KIND, s));
        }
        t.parse().map(ExtNat::Fin).map_err(|_| bad(Self::KIND, s))
    }
    fn format(a: &ExtNat) -> String {
        match a {
            ExtNat::Fin(x) => x.to_string(),
            ExtNat::Inf => "inf".into(),
        }
    }
    fn wrap(a: ExtNat) -> SemiringValue {
        SemiringValue::NatInf(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ExtNat, AlgebraError> {
        match v {
            SemiringValue::NatInf(x) => Ok(x.clone()),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}

/// `(ℚ≥0 ∪ {∞}, +, ·, 0, 1)` with `0·∞ = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Real;

impl Semiring for Real {
    type Elem = ExtRat;
    const KIND: SemiringKind = SemiringKind::Real;

    fn zero() -> ExtRat {
        ExtRat::Fin(BigRational::zero())
    }
    fn one() -> ExtRat {
        ExtRat::Fin(BigRational::one())
    }
    fn add(a: &ExtRat, b: &ExtRat) -> ExtRat {
        match (a, b) {
            (ExtRat::Fin(x), ExtRat::Fin(y)) => ExtRat::Fin(x + y),
            _ => ExtRat::Inf,
        }
    }
    fn mul(a: &ExtRat, b: &ExtRat) -> ExtRat {
        match (a, b) {
            (ExtRat::Fin(x), ExtRat::Fin(y)) => ExtRat::Fin(x * y),
            (ExtRat::Fin(x), _) | (_, ExtRat::Fin(x)) if x.is_zero() => Self::zero(),
            _ => ExtRat::Inf,
        }
    }
    fn star(a: &ExtRat) -> ExtRat {
        match a {
            ExtRat::Fin(x) if *x < BigRational::one() => ExtRat::Fin((BigRational::one() - x).recip()),
            _ => ExtRat::Inf,
        }
    }
    fn leq(a: &ExtRat, b: &ExtRat) -> bool {
        a <= b
    }
    fn parse(s: &str) -> Result<ExtRat, AlgebraError> {
        let t = s.trim();
        if is_pos_inf(t) {
            return Ok(ExtRat::Inf);
        }
        match parse_rational(t) {
            Some(r) if r >= BigRational::zero() => Ok(ExtRat::Fin(r)),
            _ => Err(bad(Self::KIND, s)),
        }
    }
    fn format(a: &ExtRat) -> String {
        match a {
            ExtRat::Fin(x) => format_rational(x),
            ExtRat::Inf => "inf".into(),
        }
    }
    fn display(a: &ExtRat) -> String {
        match a {
            ExtRat::Fin(x) => rational_to_decimal(x, 6),
            ExtRat::Inf => "inf".into(),
        }
    }
    fn wrap(a: ExtRat) -> SemiringValue {
        SemiringValue::Real(a)
    }
    fn unwrap(v: &SemiringValue) -> Result<ExtRat, AlgebraError> {
        match v {
            SemiringValue::Real(x) => Ok(x.clone()),
            other => Err(mismatch(Self::KIND, other)),
        }
    }
}
