//! JSON rendering of small automata.

use serde_json::{json, Value};

use crate::error::{Result, WnkError};
use crate::netcore::FieldSchema;
use crate::semiring::Semiring;

use super::Wnka;

/// Largest `|Pk|²` that [`dump_json`] will render.
pub const DUMP_PAIR_LIMIT: usize = 4096;

pub fn dump_json<S: Semiring>(a: &Wnka<S>, schema: &FieldSchema) -> Result<Value> {
    let n = a.packet_count();
    if n.saturating_mul(n) > DUMP_PAIR_LIMIT {
        return Err(WnkError::Resource(format!(
            "{n} packets give {} packet pairs, above the dump limit of {DUMP_PAIR_LIMIT}",
            n.saturating_mul(n)
        )));
    }
    let pk = |p| schema.format_packet(p);
    let states: Vec<Value> = (0..a.state_count())
        .map(|q| json!({ "id": q, "label": a.label(q).to_string(), "initial": S::format(a.init(q)) }))
        .collect();
    let mut transitions = Vec::new();
    let mut outputs = Vec::new();
    for q in 0..a.state_count() {
        for (t, rel) in a.transitions(q) {
            for (x, y, w) in rel.entries() {
                transitions
                    .push(json!({ "from": q, "to": t, "alpha": pk(*x), "beta": pk(*y), "weight": S::format(w) }));
            }
        }
        for (x, y, w) in a.output(q).entries() {
            outputs.push(json!({ "state": q, "alpha": pk(*x), "beta": pk(*y), "weight": S::format(w) }));
        }
    }
    Ok(json!({
        "semiring": S::KIND.name(),
        "packets": n,
        "states": states,
        "transitions": transitions,
        "outputs": outputs,
    }))
}
