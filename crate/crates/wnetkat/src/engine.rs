//! Semiring-erased front door: compile once, query with [`SemiringValue`]s.

use serde_json::Value;

use crate::error::Result;
use crate::guarded::GuardedString;
use crate::netcore::{FieldSchema, History, PacketId, Policy};
use crate::semiring::{
    Arctic, Boolean, Bottleneck, NatInf, ProbUnion, Real, Security, Semiring, SemiringKind, SemiringValue, Tropical,
    Viterbi,
};
use crate::verify::{self, Verdict, VerifyOptions};
use crate::wnka::{dump_json, thompson, CompileOptions, Wnka};

macro_rules! dyn_wnka {
    ($($v:ident),*) => {
        /// An automaton over whichever semiring was selected at run time.
        #[derive(Clone)]
        pub enum DynWnka {
            $($v(Wnka<$v>),)*
        }

        macro_rules! dispatch {
            ($self:expr, $a:ident, $S:ident => $body:expr) => {
                match $self {
                    $(DynWnka::$v($a) => {
                        #[allow(dead_code)]
                        type $S = $v;
                        $body
                    })*
                }
            };
        }

        impl DynWnka {
            pub fn compile(p: &Policy, schema: &FieldSchema, kind: SemiringKind, opts: CompileOptions) -> Result<Self> {
                Ok(match kind {
                    $(SemiringKind::$v => DynWnka::$v(thompson::<$v>(p, schema, opts)?),)*
                })
            }
        }
    };
}

dyn_wnka!(Boolean, Tropical, Arctic, Viterbi, ProbUnion, Bottleneck, Security, NatInf, Real);

impl DynWnka {
    pub fn kind(&self) -> SemiringKind {
        dispatch!(self, _a, S => S::KIND)
    }

    pub fn state_count(&self) -> usize {
        dispatch!(self, a, S => a.state_count())
    }

    pub fn packet_count(&self) -> usize {
        dispatch!(self, a, S => a.packet_count())
    }

    pub fn accept_weight(&self, x: &GuardedString) -> SemiringValue {
        dispatch!(self, a, S => S::wrap(a.accept_weight(x)))
    }

    pub fn eval_weight(&self, pi: PacketId, h: &History) -> SemiringValue {
        dispatch!(self, a, S => S::wrap(verify::eval_weight(a, pi, h)))
    }

    pub fn total_weight(&self, opts: &VerifyOptions) -> Result<SemiringValue> {
        dispatch!(self, a, S => Ok(S::wrap(verify::total_weight(a, opts)?)))
    }

    pub fn check_safety(&self, r: &SemiringValue, opts: &VerifyOptions) -> Result<Verdict> {
        dispatch!(self, a, S => verify::check_safety(a, &S::unwrap(r)?, opts))
    }

    pub fn check_reachability(&self, r: &SemiringValue, opts: &VerifyOptions) -> Result<Verdict> {
        dispatch!(self, a, S => verify::check_reachability(a, &S::unwrap(r)?, opts))
    }

    pub fn dump_json(&self, schema: &FieldSchema) -> Result<Value> {
        dispatch!(self, a, S => dump_json(a, schema))
    }
}
