//! Guarded strings `π₀ π₁ dup π₂ … dup πₙ`, stored as packet vectors with
//! implicit `dup` markers between every pair after the first.

use std::collections::HashMap;

use crate::denotational::check_weights;
use crate::error::{Result, WnkError};
use crate::netcore::{eval_pred_id, FieldSchema, History, PacketId, Policy};
use crate::semiring::Semiring;
use crate::weighting::Weighting;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GuardedString(Vec<PacketId>);

impl GuardedString {
    pub fn new(packets: Vec<PacketId>) -> Result<Self> {
        if packets.len() < 2 {
            return Err(WnkError::Invalid("a guarded string has at least two packets".into()));
        }
        Ok(GuardedString(packets))
    }

    pub fn packets(&self) -> &[PacketId] {
        &self.0
    }

    pub fn first(&self) -> PacketId {
        self.0[0]
    }

    pub fn last(&self) -> PacketId {
        *self.0.last().expect("non-empty")
    }

    pub fn dup_count(&self) -> usize {
        self.0.len() - 2
    }

    /// Renders `{..} | {..} dup {..}`.
    pub fn render(&self, schema: &FieldSchema) -> String {
        let mut s = schema.format_packet(self.0[0]);
        for (i, &p) in self.0[1..].iter().enumerate() {
            s.push_str(if i == 0 { " | " } else { " dup " });
            s.push_str(&schema.format_packet(p));
        }
        s
    }

    /// Parses the rendering produced by [`GuardedString::render`].
    pub fn parse(text: &str, schema: &FieldSchema) -> Result<Self> {
        let (first, rest) = text
            .split_once('|')
            .ok_or_else(|| WnkError::Invalid("guarded string needs `|` after the input packet".into()))?;
        let mut packets = vec![schema.parse_packet(first)?];
        for part in rest.split("dup") {
            packets.push(schema.parse_packet(part)?);
        }
        Self::new(packets)
    }
}

/// `x ⋄ y`, defined when the last packet of `x` equals the first of `y`.
pub fn gs_concat(x: &GuardedString, y: &GuardedString) -> Option<GuardedString> {
    if x.last() != y.first() {
        return None;
    }
    let mut v = x.0[..x.0.len() - 1].to_vec();
    v.extend_from_slice(&y.0[1..]);
    Some(GuardedString(v))
}

/// `(m₁ ⋄ m₂)(x) = Σ_{x = x₁⋄x₂} m₁(x₁) ⊗ m₂(x₂)`.
pub fn lifted_concat<S: Semiring>(
    m1: &Weighting<S, GuardedString>,
    m2: &Weighting<S, GuardedString>,
) -> Weighting<S, GuardedString> {
    let mut out = Weighting::empty();
    for (x, a) in m1.iter() {
        for (y, b) in m2.iter() {
            if let Some(z) = gs_concat(x, y) {
                out.insert(z, S::mul(a, b));
            }
        }
    }
    out
}

/// The input packet followed by the history read from oldest to newest.
pub fn history_to_gs(pi: PacketId, h: &History) -> GuardedString {
    let mut v = Vec::with_capacity(h.len() + 1);
    v.push(pi);
    v.extend(h.packets().iter().rev());
    GuardedString(v)
}

pub fn gs_to_io(x: &GuardedString) -> (PacketId, History) {
    let h: Vec<PacketId> = x.0[1..].iter().rev().copied().collect();
    (x.0[0], History::new(h).expect("guarded strings have at least two packets"))
}

struct Oracle<'a, S: Semiring> {
    schema: &'a FieldSchema,
    depth: usize,
    memo: HashMap<(usize, usize, Vec<PacketId>), S::Elem>,
}

impl<S: Semiring> Oracle<'_, S> {
    fn g(&mut self, p: &Policy, x: &[PacketId]) -> S::Elem {
        let key = (p as *const Policy as usize, usize::MAX, x.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.compute(p, x);
        self.memo.insert(key, v.clone());
        v
    }

    fn indicator(b: bool) -> S::Elem {
        if b {
            S::one()
        } else {
            S::zero()
        }
    }

    fn compute(&mut self, p: &Policy, x: &[PacketId]) -> S::Elem {
        let s = self.schema;
        match p {
            Policy::Filter(t) => Self::indicator(x.len() == 2 && x[0] == x[1] && eval_pred_id(s, t, x[0])),
            Policy::Assign(f, v) => Self::indicator(x.len() == 2 && x[1] == s.set(x[0], *f, *v)),
            Policy::Dup => Self::indicator(x.len() == 3 && x[0] == x[1] && x[1] == x[2]),
            Policy::Weigh(r, a) => S::mul(&S::unwrap(r).expect("weights checked"), &self.g(a, x)),
            Policy::Choice(a, b) => S::add(&self.g(a, x), &self.g(b, x)),
            Policy::Seq(a, b) => self.split(x, |o, y| o.g(a, y), |o, z| o.g(b, z)),
            Policy::Star(a) => {
                let mut total = S::zero();
                for n in 0..=self.depth {
                    total = S::add(&total, &self.power(a, n, x));
                }
                total
            }
        }
    }

    /// `G(pⁿ)(x)` with `p⁰ = skip` and `pⁿ⁺¹ = p;pⁿ`.
    fn power(&mut self, p: &Policy, n: usize, x: &[PacketId]) -> S::Elem {
        if n == 0 {
            return Self::indicator(x.len() == 2 && x[0] == x[1]);
        }
        let key = (p as *const Policy as usize, n, x.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.split(x, |o, y| o.g(p, y), |o, z| o.power(p, n - 1, z));
        self.memo.insert(key, v.clone());
        v
    }

    /// `Σ_{x = y⋄z} left(y) ⊗ right(z)`.
    fn split(
        &mut self,
        x: &[PacketId],
        mut left: impl FnMut(&mut Self, &[PacketId]) -> S::Elem,
        mut right: impl FnMut(&mut Self, &[PacketId]) -> S::Elem,
    ) -> S::Elem {
        let m = x.len() - 1;
        let mut total = S::zero();
        let mut y = Vec::with_capacity(x.len() + 1);
        let mut z = Vec::with_capacity(x.len() + 1);
        for i in 1..=m {
            for beta in self.schema.packets() {
                y.clear();
                y.extend_from_slice(&x[..i]);
                y.push(beta);
                let l = left(self, &y);
                if S::is_zero(&l) {
                    continue;
                }
                z.clear();
                z.push(beta);
                z.extend_from_slice(&x[i..]);
                let r = right(self, &z);
                total = S::add(&total, &S::mul(&l, &r));
            }
        }
        total
    }
}

/// The language weight `G(p)(x)` with each iteration cut off after `depth`
/// unrollings. Exact for star-free `p`.
pub fn language_weight_oracle<S: Semiring>(
    p: &Policy,
    x: &GuardedString,
    depth: usize,
    schema: &FieldSchema,
) -> Result<S::Elem> {
    check_weights::<S>(p)?;
    let mut o = Oracle::<S> { schema, depth, memo: HashMap::new() };
    Ok(o.g(p, x.packets()))
}
