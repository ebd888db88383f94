//! Packets, histories, the policy AST, its concrete syntax, and the reduction
//! to complete tests and assignments.

mod ast;
mod parser;
mod printer;
mod reduce;

use std::collections::HashMap;
use std::fmt;

pub use ast::{Policy, Pred, ReducedPolicy};
pub use parser::{parse_document, parse_policy, parse_predicate, parse_schema};
pub use printer::{print_policy, print_pred, print_reduced};
pub use reduce::reduce;

use crate::error::{Result, WnkError};

/// Dense packet code: the mixed-radix encoding of a packet under its schema.
pub type PacketId = u32;

pub const DEFAULT_PACKET_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct FieldDef {
    name: String,
    values: Vec<String>,
}

/// The ordered header fields and their finite value sets.
///
/// Packets are numbered in mixed radix with the first field most
/// significant, so packet codes sort lexicographically by value codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSchema {
    fields: Vec<FieldDef>,
    strides: Vec<u32>,
    count: usize,
    index: HashMap<String, usize>,
}

impl FieldSchema {
    pub fn new(fields: Vec<(String, Vec<String>)>) -> Result<Self> {
        Self::with_cap(fields, DEFAULT_PACKET_CAP)
    }

    pub fn with_cap(fields: Vec<(String, Vec<String>)>, cap: usize) -> Result<Self> {
        if fields.is_empty() {
            return Err(WnkError::Schema("schema declares no fields".into()));
        }
        let mut index = HashMap::new();
        let mut defs = Vec::with_capacity(fields.len());
        for (i, (name, values)) in fields.into_iter().enumerate() {
            if !is_ident(&name) || parser::is_keyword(&name) {
                return Err(WnkError::Schema(format!("`{name}` is not a valid field name")));
            }
            if let Some(v) = values.iter().find(|v| !is_ident(v) && !is_number(v)) {
                return Err(WnkError::Schema(format!("field `{name}` has invalid value name `{v}`")));
            }
            if values.is_empty() {
                return Err(WnkError::Schema(format!("field `{name}` has no values")));
            }
            let mut seen = std::collections::HashSet::new();
            for v in &values {
                if !seen.insert(v.as_str()) {
                    return Err(WnkError::Schema(format!("field `{name}` repeats value `{v}`")));
                }
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(WnkError::Schema(format!("field `{name}` declared twice")));
            }
            defs.push(FieldDef { name, values });
        }
        let mut count: usize = 1;
        for d in &defs {
            count = count
                .checked_mul(d.values.len())
                .filter(|&c| c <= cap)
                .ok_or_else(|| WnkError::Resource(format!("packet space exceeds the cap of {cap} packets")))?;
        }
        let mut strides = vec![1u32; defs.len()];
        for i in (0..defs.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * defs[i + 1].values.len() as u32;
        }
        Ok(FieldSchema { fields: defs, strides, count, index })
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn packet_count(&self) -> usize {
        self.count
    }

    pub fn field_name(&self, f: usize) -> &str {
        &self.fields[f].name
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn values(&self, f: usize) -> &[String] {
        &self.fields[f].values
    }

    pub fn value_name(&self, f: usize, v: u32) -> &str {
        &self.fields[f].values[v as usize]
    }

    pub fn value_index(&self, f: usize, name: &str) -> Option<u32> {
        self.fields[f].values.iter().position(|v| v == name).map(|i| i as u32)
    }

    /// Value code of field `f` in packet `pid`.
    #[inline]
    pub fn get(&self, pid: PacketId, f: usize) -> u32 {
        (pid / self.strides[f]) % self.fields[f].values.len() as u32
    }

    /// The packet `pid[f := v]`.
    #[inline]
    pub fn set(&self, pid: PacketId, f: usize, v: u32) -> PacketId {
        pid - self.get(pid, f) * self.strides[f] + v * self.strides[f]
    }

    pub fn encode(&self, p: &Packet) -> PacketId {
        p.values.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn decode(&self, pid: PacketId) -> Packet {
        Packet { values: (0..self.fields.len()).map(|f| self.get(pid, f)).collect() }
    }

    pub fn packets(&self) -> impl Iterator<Item = PacketId> {
        0..self.count as PacketId
    }

    /// Renders `{f=v,g=w}`.
    pub fn format_packet(&self, pid: PacketId) -> String {
        let parts: Vec<String> = (0..self.fields.len())
            .map(|f| format!("{}={}", self.field_name(f), self.value_name(f, self.get(pid, f))))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Parses `f=v,g=w` (optionally braced). Every field must be assigned exactly once.
    pub fn parse_packet(&self, text: &str) -> Result<PacketId> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut vals: Vec<Option<u32>> = vec![None; self.fields.len()];
        for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) =
                part.split_once('=').ok_or_else(|| WnkError::Invalid(format!("expected field=value, got `{part}`")))?;
            let f =
                self.field_index(k.trim()).ok_or_else(|| WnkError::Invalid(format!("unknown field `{}`", k.trim())))?;
            let code = self
                .value_index(f, v.trim())
                .ok_or_else(|| WnkError::Invalid(format!("unknown value `{}` for field `{}`", v.trim(), k.trim())))?;
            if vals[f].replace(code).is_some() {
                return Err(WnkError::Invalid(format!("field `{}` assigned twice", k.trim())));
            }
        }
        let values = vals
            .into_iter()
            .enumerate()
            .map(|(f, v)| {
                v.ok_or_else(|| WnkError::Invalid(format!("packet leaves field `{}` unassigned", self.field_name(f))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&Packet { values }))
    }

    /// Parses a history `π₁ :: π₂ :: …`, head first.
    pub fn parse_history(&self, text: &str) -> Result<History> {
        let packets = text.split("::").map(|p| self.parse_packet(p)).collect::<Result<Vec<_>>>()?;
        History::new(packets)
    }

    pub fn format_history(&self, h: &History) -> String {
        h.packets().iter().map(|&p| self.format_packet(p)).collect::<Vec<_>>().join(" :: ")
    }
}

impl fmt::Display for FieldSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fields {{")?;
        for d in &self.fields {
            writeln!(f, "  {}: [{}];", d.name, d.values.join(", "))?;
        }
        write!(f, "}}")
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn is_number(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

/// One value code per field, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Packet {
    pub values: Vec<u32>,
}

impl Packet {
    pub fn get(&self, f: usize) -> u32 {
        self.values[f]
    }
}

/// A non-empty packet trace, head (most recent) first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct History(Vec<PacketId>);

impl History {
    pub fn new(packets: Vec<PacketId>) -> Result<Self> {
        if packets.is_empty() {
            return Err(WnkError::Invalid("a history needs at least one packet".into()));
        }
        Ok(History(packets))
    }

    pub fn single(pid: PacketId) -> Self {
        History(vec![pid])
    }

    pub fn head(&self) -> PacketId {
        self.0[0]
    }

    pub fn packets(&self) -> &[PacketId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Replaces the head packet.
    pub fn with_head(&self, pid: PacketId) -> Self {
        let mut v = self.0.clone();
        v[0] = pid;
        History(v)
    }

    /// `π::π::h̄` for head `π`.
    pub fn dup(&self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(self.0[0]);
        v.extend_from_slice(&self.0);
        History(v)
    }
}

/// Truth value of a predicate on a decoded packet.
pub fn eval_predicate(t: &Pred, pk: &Packet) -> bool {
    match t {
        Pred::False => false,
        Pred::True => true,
        Pred::Test(f, v) => pk.values[*f] == *v,
        Pred::Or(a, b) => eval_predicate(a, pk) || eval_predicate(b, pk),
        Pred::And(a, b) => eval_predicate(a, pk) && eval_predicate(b, pk),
        Pred::Not(a) => !eval_predicate(a, pk),
    }
}

/// Truth value of a predicate on a packet code.
pub fn eval_pred_id(schema: &FieldSchema, t: &Pred, pid: PacketId) -> bool {
    match t {
        Pred::False => false,
        Pred::True => true,
        Pred::Test(f, v) => schema.get(pid, *f) == *v,
        Pred::Or(a, b) => eval_pred_id(schema, a, pid) || eval_pred_id(schema, b, pid),
        Pred::And(a, b) => eval_pred_id(schema, a, pid) && eval_pred_id(schema, b, pid),
        Pred::Not(a) => !eval_pred_id(schema, a, pid),
    }
}
