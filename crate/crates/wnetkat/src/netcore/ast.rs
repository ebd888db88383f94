use crate::semiring::SemiringValue;

use super::PacketId;

/// Boolean packet predicates over field and value codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    False,
    True,
    Test(usize, u32),
    Or(Box<Pred>, Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
}

impl Pred {
    pub fn or(a: Pred, b: Pred) -> Pred {
        Pred::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Pred, b: Pred) -> Pred {
        Pred::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Pred) -> Pred {
        Pred::Not(Box::new(a))
    }
}

/// Weighted NetKAT policies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    Filter(Pred),
    Assign(usize, u32),
    Dup,
    Seq(Box<Policy>, Box<Policy>),
    Weigh(SemiringValue, Box<Policy>),
    Choice(Box<Policy>, Box<Policy>),
    Star(Box<Policy>),
}

impl Policy {
    pub fn skip() -> Policy {
        Policy::Filter(Pred::True)
    }

    pub fn drop() -> Policy {
        Policy::Filter(Pred::False)
    }

    pub fn seq(a: Policy, b: Policy) -> Policy {
        Policy::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Policy, b: Policy) -> Policy {
        Policy::Choice(Box::new(a), Box::new(b))
    }

    pub fn weigh(r: SemiringValue, p: Policy) -> Policy {
        Policy::Weigh(r, Box::new(p))
    }

    pub fn star(p: Policy) -> Policy {
        Policy::Star(Box::new(p))
    }

    /// `t;p ⊕ ¬t;q`
    pub fn if_then_else(t: Pred, p: Policy, q: Policy) -> Policy {
        Policy::choice(Policy::seq(Policy::Filter(t.clone()), p), Policy::seq(Policy::Filter(Pred::not(t)), q))
    }

    /// `(t;p)*;¬t`
    pub fn while_do(t: Pred, p: Policy) -> Policy {
        Policy::seq(Policy::star(Policy::seq(Policy::Filter(t.clone()), p)), Policy::Filter(Pred::not(t)))
    }

    /// Left-nested sum of `ps`, or `drop` when empty.
    pub fn sum(ps: impl IntoIterator<Item = Policy>) -> Policy {
        ps.into_iter().reduce(Policy::choice).unwrap_or_else(Policy::drop)
    }

    /// Left-nested sequence of `ps`, or `skip` when empty.
    pub fn seq_all(ps: impl IntoIterator<Item = Policy>) -> Policy {
        ps.into_iter().reduce(Policy::seq).unwrap_or_else(Policy::skip)
    }

    /// Recognizes the `while` encoding `(t;p)*;¬t`.
    pub fn as_while(&self) -> Option<(&Pred, &Policy)> {
        if let Policy::Seq(l, r) = self {
            if let (Policy::Star(body), Policy::Filter(Pred::Not(neg))) = (l.as_ref(), r.as_ref()) {
                if let Policy::Seq(g, p) = body.as_ref() {
                    if let Policy::Filter(t) = g.as_ref() {
                        if t == neg.as_ref() {
                            return Some((t, p));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_star_free(&self) -> bool {
        match self {
            Policy::Filter(_) | Policy::Assign(..) | Policy::Dup => true,
            Policy::Seq(a, b) | Policy::Choice(a, b) => a.is_star_free() && b.is_star_free(),
            Policy::Weigh(_, a) => a.is_star_free(),
            Policy::Star(_) => false,
        }
    }

    /// Maximum nesting depth of `Star` nodes.
    pub fn star_depth(&self) -> usize {
        match self {
            Policy::Filter(_) | Policy::Assign(..) | Policy::Dup => 0,
            Policy::Seq(a, b) | Policy::Choice(a, b) => a.star_depth().max(b.star_depth()),
            Policy::Weigh(_, a) => a.star_depth(),
            Policy::Star(a) => 1 + a.star_depth(),
        }
    }

    /// Number of filter and assignment leaves, counting `dup` as well.
    pub fn primitive_count(&self) -> usize {
        self.fold_counts().0
    }

    pub fn dup_count(&self) -> usize {
        self.fold_counts().1
    }

    pub fn star_count(&self) -> usize {
        self.fold_counts().2
    }

    fn fold_counts(&self) -> (usize, usize, usize) {
        match self {
            Policy::Filter(_) | Policy::Assign(..) => (1, 0, 0),
            Policy::Dup => (1, 1, 0),
            Policy::Seq(a, b) | Policy::Choice(a, b) => {
                let (x, y) = (a.fold_counts(), b.fold_counts());
                (x.0 + y.0, x.1 + y.1, x.2 + y.2)
            }
            Policy::Weigh(_, a) => a.fold_counts(),
            Policy::Star(a) => {
                let x = a.fold_counts();
                (x.0, x.1, x.2 + 1)
            }
        }
    }

    /// Calls `f` on every weight literal in the tree.
    pub fn for_each_weight(&self, f: &mut impl FnMut(&SemiringValue)) {
        match self {
            Policy::Filter(_) | Policy::Assign(..) | Policy::Dup => {}
            Policy::Seq(a, b) | Policy::Choice(a, b) => {
                a.for_each_weight(f);
                b.for_each_weight(f);
            }
            Policy::Weigh(r, a) => {
                f(r);
                a.for_each_weight(f);
            }
            Policy::Star(a) => a.for_each_weight(f),
        }
    }
}

/// Policies over complete tests `α?` and complete assignments `π!` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedPolicy {
    CompleteTest(PacketId),
    CompleteAssign(PacketId),
    Dup,
    Seq(Box<ReducedPolicy>, Box<ReducedPolicy>),
    Weigh(SemiringValue, Box<ReducedPolicy>),
    Choice(Box<ReducedPolicy>, Box<ReducedPolicy>),
    Star(Box<ReducedPolicy>),
}

impl ReducedPolicy {
    pub fn seq(a: ReducedPolicy, b: ReducedPolicy) -> ReducedPolicy {
        ReducedPolicy::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: ReducedPolicy, b: ReducedPolicy) -> ReducedPolicy {
        ReducedPolicy::Choice(Box::new(a), Box::new(b))
    }
}
