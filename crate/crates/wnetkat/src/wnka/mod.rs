//! Weighted NetKAT automata `(Q, ι, Δ, Λ)` with packet-pair indexed
//! transition and output weights.

mod dump;
mod matrix;
mod rel;
mod thompson;
mod unfold;

use std::fmt;

pub use dump::{dump_json, DUMP_PAIR_LIMIT};
pub(crate) use matrix::solve_star_vector;
pub use matrix::{mat_mul, mat_star, Matrix};
pub use rel::PkRel;
pub use thompson::{thompson, thompson_reduced, CompileOptions};
pub use unfold::{unfold, PacketConfigAutomaton};

use crate::guarded::GuardedString;
use crate::semiring::Semiring;

/// Which construction case introduced a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    Filter,
    Assign,
    CompleteTest,
    CompleteAssign,
    /// Entry state of `dup` (♥).
    DupEntry,
    /// Exit state of `dup` (♣).
    DupExit,
    /// Fresh state added by iteration (♥).
    StarEntry,
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateLabel::Filter => "filter",
            StateLabel::Assign => "assign",
            StateLabel::CompleteTest => "complete-test",
            StateLabel::CompleteAssign => "complete-assign",
            StateLabel::DupEntry => "dup♥",
            StateLabel::DupExit => "dup♣",
            StateLabel::StarEntry => "star♥",
        })
    }
}

/// A weighted NetKAT automaton over `packets` packets.
///
/// `delta[q]` lists the non-zero transition relations `Δ(q, q')` sorted by
/// target; `out[q]` is the output relation `Λ(q)`.
pub struct Wnka<S: Semiring> {
    pub(crate) packets: usize,
    pub(crate) labels: Vec<StateLabel>,
    pub(crate) init: Vec<S::Elem>,
    pub(crate) delta: Vec<Vec<(usize, PkRel<S>)>>,
    pub(crate) out: Vec<PkRel<S>>,
    pub(crate) options: CompileOptions,
}

impl<S: Semiring> Clone for Wnka<S> {
    fn clone(&self) -> Self {
        Wnka {
            packets: self.packets,
            labels: self.labels.clone(),
            init: self.init.clone(),
            delta: self.delta.clone(),
            out: self.out.clone(),
            options: self.options,
        }
    }
}

impl<S: Semiring> Wnka<S> {
    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn packet_count(&self) -> usize {
        self.packets
    }

    pub fn label(&self, q: usize) -> StateLabel {
        self.labels[q]
    }

    pub fn init(&self, q: usize) -> &S::Elem {
        &self.init[q]
    }

    /// Non-zero `Δ(q, ·)` relations, sorted by target state.
    pub fn transitions(&self, q: usize) -> &[(usize, PkRel<S>)] {
        &self.delta[q]
    }

    pub fn delta(&self, q: usize, q2: usize) -> Option<&PkRel<S>> {
        self.delta[q].binary_search_by_key(&q2, |(t, _)| *t).ok().map(|i| &self.delta[q][i].1)
    }

    /// `Δ_{αβ}(q, q')`
    pub fn delta_at(&self, q: usize, q2: usize, a: u32, b: u32) -> S::Elem {
        self.delta(q, q2).map_or_else(S::zero, |r| r.get(a, b))
    }

    pub fn output(&self, q: usize) -> &PkRel<S> {
        &self.out[q]
    }

    pub fn options(&self) -> CompileOptions {
        self.options
    }

    /// `ι × Δ_{π₀π₁} × … × Λ_{πₙ₋₁πₙ}`
    pub fn accept_weight(&self, x: &GuardedString) -> S::Elem {
        let c = x.packets();
        let mut v: Vec<S::Elem> = self.init.clone();
        for i in 0..c.len() - 2 {
            let mut next = vec![S::zero(); v.len()];
            for (q, w) in v.iter().enumerate() {
                if S::is_zero(w) {
                    continue;
                }
                for (t, rel) in &self.delta[q] {
                    let d = rel.get(c[i], c[i + 1]);
                    if !S::is_zero(&d) {
                        S::add_assign(&mut next[*t], &S::mul(w, &d));
                    }
                }
            }
            v = next;
        }
        let (a, b) = (c[c.len() - 2], c[c.len() - 1]);
        let mut total = S::zero();
        for (q, w) in v.iter().enumerate() {
            if !S::is_zero(w) {
                S::add_assign(&mut total, &S::mul(w, &self.out[q].get(a, b)));
            }
        }
        total
    }
}

pub fn accept_weight<S: Semiring>(a: &Wnka<S>, x: &GuardedString) -> S::Elem {
    a.accept_weight(x)
}
