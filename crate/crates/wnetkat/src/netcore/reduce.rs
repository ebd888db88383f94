use crate::error::Result;
use crate::semiring::SemiringHandle;

use super::ast::{Policy, Pred, ReducedPolicy};
use super::{eval_pred_id, FieldSchema, PacketId};

fn sum(ps: Vec<ReducedPolicy>, semiring: SemiringHandle) -> ReducedPolicy {
    ps.into_iter()
        .reduce(ReducedPolicy::choice)
        .unwrap_or_else(|| ReducedPolicy::Weigh(semiring.zero(), Box::new(ReducedPolicy::CompleteTest(0))))
}

/// Rewrites predicates into sums of complete tests and assignments into sums
/// of complete test / complete assignment pairs. Everything else is mapped
/// homomorphically. An empty sum becomes `0̄ ⊙ π₀?`.
pub fn reduce(p: &Policy, schema: &FieldSchema, semiring: SemiringHandle) -> Result<ReducedPolicy> {
    Ok(match p {
        Policy::Filter(t) => sum(
            schema.packets().filter(|&pi| eval_pred_id(schema, t, pi)).map(ReducedPolicy::CompleteTest).collect(),
            semiring,
        ),
        Policy::Assign(f, v) => sum(
            schema
                .packets()
                .map(|pi| {
                    ReducedPolicy::seq(
                        ReducedPolicy::CompleteTest(pi),
                        ReducedPolicy::CompleteAssign(schema.set(pi, *f, *v)),
                    )
                })
                .collect(),
            semiring,
        ),
        Policy::Dup => ReducedPolicy::Dup,
        Policy::Seq(a, b) => ReducedPolicy::seq(reduce(a, schema, semiring)?, reduce(b, schema, semiring)?),
        Policy::Choice(a, b) => ReducedPolicy::choice(reduce(a, schema, semiring)?, reduce(b, schema, semiring)?),
        Policy::Weigh(r, a) => ReducedPolicy::Weigh(r.clone(), Box::new(reduce(a, schema, semiring)?)),
        Policy::Star(a) => ReducedPolicy::Star(Box::new(reduce(a, schema, semiring)?)),
    })
}

fn complete_test(pid: PacketId, schema: &FieldSchema) -> Pred {
    (0..schema.field_count()).map(|f| Pred::Test(f, schema.get(pid, f))).reduce(Pred::and).unwrap_or(Pred::True)
}

impl ReducedPolicy {
    /// Expands complete tests into conjunctions and complete assignments into
    /// assignment sequences.
    pub fn to_policy(&self, schema: &FieldSchema) -> Policy {
        match self {
            ReducedPolicy::CompleteTest(pi) => Policy::Filter(complete_test(*pi, schema)),
            ReducedPolicy::CompleteAssign(pi) => {
                Policy::seq_all((0..schema.field_count()).map(|f| Policy::Assign(f, schema.get(*pi, f))))
            }
            ReducedPolicy::Dup => Policy::Dup,
            ReducedPolicy::Seq(a, b) => Policy::seq(a.to_policy(schema), b.to_policy(schema)),
            ReducedPolicy::Choice(a, b) => Policy::choice(a.to_policy(schema), b.to_policy(schema)),
            ReducedPolicy::Weigh(r, a) => Policy::weigh(r.clone(), a.to_policy(schema)),
            ReducedPolicy::Star(a) => Policy::star(a.to_policy(schema)),
        }
    }
}
