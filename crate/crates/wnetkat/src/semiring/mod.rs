//! ω-continuous semirings, the shipped instances and their capability flags.
//!
//! The verification engine is generic over [`Semiring`]. Policies and user
//! facing APIs carry [`SemiringValue`]s, a tagged scalar that records which
//! instance it belongs to, and [`SemiringHandle`] provides checked dynamic
//! arithmetic on them.

/// Runs `$body` with `$S` bound to the semiring type selected by `$kind`.
#[macro_export]
macro_rules! with_semiring {
    ($kind:expr, $S:ident => $body:expr) => {{
        use $crate::semiring::SemiringKind as __Kind;
        match $kind {
            __Kind::Boolean => {
                type $S = $crate::semiring::Boolean;
                $body
            }
            __Kind::Tropical => {
                type $S = $crate::semiring::Tropical;
                $body
            }
            __Kind::Arctic => {
                type $S = $crate::semiring::Arctic;
                $body
            }
            __Kind::Viterbi => {
                type $S = $crate::semiring::Viterbi;
                $body
            }
            __Kind::ProbUnion => {
                type $S = $crate::semiring::ProbUnion;
                $body
            }
            __Kind::Bottleneck => {
                type $S = $crate::semiring::Bottleneck;
                $body
            }
            __Kind::Security => {
                type $S = $crate::semiring::Security;
                $body
            }
            __Kind::NatInf => {
                type $S = $crate::semiring::NatInf;
                $body
            }
            __Kind::Real => {
                type $S = $crate::semiring::Real;
                $body
            }
        }
    }};
}

mod instances;
pub mod numeric;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use instances::{Arctic, Boolean, Bottleneck, NatInf, ProbUnion, Real, Security, Tropical, Viterbi};
pub use numeric::{ExtInt, ExtNat, ExtRat, Level, ProbUnionVal};

use crate::error::AlgebraError;
use num_rational::BigRational;

/// An ω-continuous semiring with a computable star and natural order.
pub trait Semiring: 'static + Send + Sync + Sized {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    const KIND: SemiringKind;

    fn zero() -> Self::Elem;
    fn one() -> Self::Elem;
    fn add(a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Closed form of the countable sum of all powers of `a`.
    fn star(a: &Self::Elem) -> Self::Elem;
    /// The natural order `a ⊑ b`.
    fn leq(a: &Self::Elem, b: &Self::Elem) -> bool;
    fn parse(s: &str) -> Result<Self::Elem, AlgebraError>;
    fn format(a: &Self::Elem) -> String;
    fn wrap(a: Self::Elem) -> SemiringValue;
    fn unwrap(v: &SemiringValue) -> Result<Self::Elem, AlgebraError>;

    fn is_zero(a: &Self::Elem) -> bool {
        *a == Self::zero()
    }

    fn add_assign(acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = Self::add(acc, b);
    }

    /// Short human rendering (decimals for rationals); defaults to [`Semiring::format`].
    fn display(a: &Self::Elem) -> String {
        Self::format(a)
    }
}

/// Capability flags gating the two decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    /// `a ⊕ b ⊑ c` iff `a ⊑ c` and `b ⊑ c`.
    pub safety_capable: bool,
    /// `c ⊑ a ⊕ b` iff `c ⊑ a` or `c ⊑ b`, and `a ⊗ b ⊑ a`.
    pub reach_capable: bool,
    pub total_order: bool,
}

/// The shipped instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemiringKind {
    Boolean,
    Tropical,
    Arctic,
    Viterbi,
    ProbUnion,
    Bottleneck,
    Security,
    NatInf,
    Real,
}

impl SemiringKind {
    pub const ALL: [SemiringKind; 9] = [
        SemiringKind::Boolean,
        SemiringKind::Tropical,
        SemiringKind::Arctic,
        SemiringKind::Viterbi,
        SemiringKind::ProbUnion,
        SemiringKind::Bottleneck,
        SemiringKind::Security,
        SemiringKind::NatInf,
        SemiringKind::Real,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiringKind::Boolean => "boolean",
            SemiringKind::Tropical => "tropical",
            SemiringKind::Arctic => "arctic",
            SemiringKind::Viterbi => "viterbi",
            SemiringKind::ProbUnion => "prob-union",
            SemiringKind::Bottleneck => "bottleneck",
            SemiringKind::Security => "security",
            SemiringKind::NatInf => "nat-inf",
            SemiringKind::Real => "real",
        }
    }

    pub fn from_name(s: &str) -> Result<SemiringKind, AlgebraError> {
        SemiringKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AlgebraError::UnknownSemiring(s.to_string()))
    }

    pub fn capabilities(self) -> Capabilities {
        use SemiringKind::*;
        Capabilities {
            safety_capable: matches!(self, Arctic | ProbUnion | Boolean),
            reach_capable: matches!(self, Tropical | Viterbi | Bottleneck | Security | Boolean),
            total_order: true,
        }
    }

    /// True when `⊕` is idempotent.
    pub fn idempotent(self) -> bool {
        !matches!(self, SemiringKind::NatInf | SemiringKind::Real)
    }
}

impl fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scalar tagged with the instance whose carrier it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiringValue {
    Boolean(bool),
    Tropical(ExtInt),
    Arctic(ExtInt),
    Viterbi(BigRational),
    ProbUnion(ProbUnionVal),
    Bottleneck(ExtInt),
    Security(Level),
    NatInf(ExtNat),
    Real(ExtRat),
}

impl SemiringValue {
    pub fn kind(&self) -> SemiringKind {
        match self {
            SemiringValue::Boolean(_) => SemiringKind::Boolean,
            SemiringValue::Tropical(_) => SemiringKind::Tropical,
            SemiringValue::Arctic(_) => SemiringKind::Arctic,
            SemiringValue::Viterbi(_) => SemiringKind::Viterbi,
            SemiringValue::ProbUnion(_) => SemiringKind::ProbUnion,
            SemiringValue::Bottleneck(_) => SemiringKind::Bottleneck,
            SemiringValue::Security(_) => SemiringKind::Security,
            SemiringValue::NatInf(_) => SemiringKind::NatInf,
            SemiringValue::Real(_) => SemiringKind::Real,
        }
    }

    /// Human-oriented rendering (decimals for rational carriers). Not re-parseable in general.
    pub fn display(&self) -> String {
        with_semiring!(self.kind(), S => S::display(&S::unwrap(self).expect("tag matches kind")))
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = with_semiring!(self.kind(), S => S::format(&S::unwrap(self).expect("tag matches kind")));
        f.write_str(&s)
    }
}

/// A named instance with checked arithmetic over [`SemiringValue`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemiringHandle {
    kind: SemiringKind,
}

impl SemiringHandle {
    pub fn new(kind: SemiringKind) -> Self {
        SemiringHandle { kind }
    }

    pub fn from_name(name: &str) -> Result<Self, AlgebraError> {
        SemiringKind::from_name(name).map(Self::new)
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn zero(&self) -> SemiringValue {
        with_semiring!(self.kind, S => S::wrap(S::zero()))
    }

    pub fn one(&self) -> SemiringValue {
        with_semiring!(self.kind, S => S::wrap(S::one()))
    }

    pub fn parse(&self, literal: &str) -> Result<SemiringValue, AlgebraError> {
        with_semiring!(self.kind, S => S::parse(literal).map(S::wrap))
    }

    pub fn add(&self, a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
        with_semiring!(self.kind, S => Ok(S::wrap(S::add(&S::unwrap(a)?, &S::unwrap(b)?))))
    }

    pub fn mul(&self, a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
        with_semiring!(self.kind, S => Ok(S::wrap(S::mul(&S::unwrap(a)?, &S::unwrap(b)?))))
    }

    pub fn star(&self, a: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
        with_semiring!(self.kind, S => Ok(S::wrap(S::star(&S::unwrap(a)?))))
    }

    pub fn leq(&self, a: &SemiringValue, b: &SemiringValue) -> Result<bool, AlgebraError> {
        with_semiring!(self.kind, S => Ok(S::leq(&S::unwrap(a)?, &S::unwrap(b)?)))
    }

    pub fn capabilities(&self) -> Capabilities {
        self.kind.capabilities()
    }
}

pub fn sr_add(h: &SemiringHandle, a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
    h.add(a, b)
}

pub fn sr_mul(h: &SemiringHandle, a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
    h.mul(a, b)
}

pub fn sr_star(h: &SemiringHandle, a: &SemiringValue) -> Result<SemiringValue, AlgebraError> {
    h.star(a)
}

pub fn sr_leq(h: &SemiringHandle, a: &SemiringValue, b: &SemiringValue) -> Result<bool, AlgebraError> {
    h.leq(a, b)
}

pub fn sr_capabilities(h: &SemiringHandle) -> Capabilities {
    h.capabilities()
}

pub(crate) fn mismatch(expected: SemiringKind, found: &SemiringValue) -> AlgebraError {
    AlgebraError::CarrierMismatch { expected: expected.name(), found: found.kind().name() }
}
