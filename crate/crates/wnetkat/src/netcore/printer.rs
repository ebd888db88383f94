use super::ast::{Policy, Pred, ReducedPolicy};
use super::FieldSchema;

const CHOICE: u8 = 0;
const WEIGH: u8 = 1;
const SEQ: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const STAR: u8 = 6;
const ATOM: u8 = 7;

fn wrap(s: String, own: u8, min: u8) -> String {
    if own < min {
        format!("({s})")
    } else {
        s
    }
}

fn pred_level(t: &Pred) -> u8 {
    match t {
        Pred::Or(..) => OR,
        Pred::And(..) => AND,
        Pred::Not(inner) if !matches!(inner.as_ref(), Pred::Test(..)) => NOT,
        _ => ATOM,
    }
}

fn pred(t: &Pred, s: &FieldSchema, min: u8) -> String {
    let body = match t {
        Pred::False => "false".to_string(),
        Pred::True => "true".to_string(),
        Pred::Test(f, v) => format!("{}={}", s.field_name(*f), s.value_name(*f, *v)),
        Pred::Not(inner) => match inner.as_ref() {
            Pred::Test(f, v) => format!("{}!={}", s.field_name(*f), s.value_name(*f, *v)),
            other => format!("!{}", pred(other, s, NOT)),
        },
        Pred::Or(a, b) => format!("{} | {}", pred(a, s, OR), pred(b, s, AND)),
        Pred::And(a, b) => format!("{} & {}", pred(a, s, AND), pred(b, s, NOT)),
    };
    wrap(body, pred_level(t), min)
}

fn level(p: &Policy) -> u8 {
    match p {
        Policy::Choice(..) => CHOICE,
        Policy::Weigh(..) => WEIGH,
        Policy::Seq(..) => SEQ,
        Policy::Star(..) => STAR,
        Policy::Filter(Pred::True | Pred::False) => ATOM,
        Policy::Filter(t) => pred_level(t),
        Policy::Assign(..) | Policy::Dup => ATOM,
    }
}

fn policy(p: &Policy, s: &FieldSchema, min: u8) -> String {
    let body = match p {
        Policy::Filter(Pred::True) => "skip".to_string(),
        Policy::Filter(Pred::False) => "drop".to_string(),
        Policy::Filter(t) => pred(t, s, 0),
        Policy::Assign(f, v) => format!("{}:={}", s.field_name(*f), s.value_name(*f, *v)),
        Policy::Dup => "dup".to_string(),
        Policy::Seq(a, b) => {
            let left_min = if matches!(a.as_ref(), Policy::Weigh(..)) { ATOM } else { SEQ };
            format!("{} ; {}", policy(a, s, left_min), policy(b, s, OR))
        }
        Policy::Weigh(r, a) => format!("weight({r}) @ {}", policy(a, s, WEIGH)),
        Policy::Choice(a, b) => format!("{} + {}", policy(a, s, CHOICE), policy(b, s, WEIGH)),
        Policy::Star(a) => {
            let inner_min = if matches!(a.as_ref(), Policy::Weigh(..)) { ATOM } else { STAR };
            format!("{}*", policy(a, s, inner_min))
        }
    };
    wrap(body, level(p), min)
}

/// Renders `p` in the concrete syntax accepted by the parser.
pub fn print_policy(p: &Policy, schema: &FieldSchema) -> String {
    policy(p, schema, 0)
}

pub fn print_pred(t: &Pred, schema: &FieldSchema) -> String {
    pred(t, schema, 0)
}

/// Renders a reduced policy via its expansion into ordinary tests and assignments.
pub fn print_reduced(p: &ReducedPolicy, schema: &FieldSchema) -> String {
    print_policy(&p.to_policy(schema), schema)
}
