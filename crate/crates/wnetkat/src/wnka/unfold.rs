//! Unfolding into an ordinary weighted automaton whose letters are packets.
//!
//! States are `qι`, `qλ` and one configuration `(q, α)` per automaton state
//! and packet. Reading `β` moves `qι → (q, β)` with `ι(q)`, `(q, α) → (q', β)`
//! with `Δ_{αβ}(q, q')` and `(q, α) → qλ` with `Λ_{αβ}(q)`.

use crate::error::{Result, WnkError};
use crate::guarded::GuardedString;
use crate::netcore::PacketId;
use crate::semiring::Semiring;

use super::{Matrix, Wnka};

pub struct PacketConfigAutomaton<S: Semiring> {
    states: usize,
    packets: usize,
    /// `(from, to, letter, weight)`
    edges: Vec<(usize, usize, PacketId, S::Elem)>,
}

impl<S: Semiring> PacketConfigAutomaton<S> {
    pub const INITIAL: usize = 0;
    pub const FINAL: usize = 1;

    /// Index of configuration `(q, α)`.
    pub fn config(&self, q: usize, a: PacketId) -> usize {
        2 + q * self.packets + a as usize
    }

    pub fn size(&self) -> usize {
        2 + self.states * self.packets
    }

    pub fn edges(&self) -> &[(usize, usize, PacketId, S::Elem)] {
        &self.edges
    }

    /// Weight of the packet word `c₀ c₁ … cₘ`.
    pub fn accept(&self, x: &GuardedString) -> S::Elem {
        let mut v = vec![S::zero(); self.size()];
        v[Self::INITIAL] = S::one();
        for &c in x.packets() {
            let mut next = vec![S::zero(); self.size()];
            for (from, to, l, w) in &self.edges {
                if *l == c && !S::is_zero(&v[*from]) {
                    S::add_assign(&mut next[*to], &S::mul(&v[*from], w));
                }
            }
            v = next;
        }
        v.swap_remove(Self::FINAL)
    }

    /// `Σ_β Δ'(β)` as a dense matrix.
    pub fn step_matrix(&self) -> Matrix<S> {
        let mut m = Matrix::zeros(self.size(), self.size());
        for (from, to, _, w) in &self.edges {
            let v = S::add(m.get(*from, *to), w);
            m.set(*from, *to, v);
        }
        m
    }

    /// `(Σ_β Δ'(β))*` read off between `qι` and `qλ`.
    pub fn total_weight(&self) -> Result<S::Elem> {
        Ok(self.step_matrix().star()?.get(Self::INITIAL, Self::FINAL).clone())
    }
}

/// Materializes the packet-configuration automaton of `a`, failing when it
/// would need more than `max_edges` edges.
pub fn unfold<S: Semiring>(a: &Wnka<S>, max_edges: usize) -> Result<PacketConfigAutomaton<S>> {
    let n = a.packet_count();
    let mut pca = PacketConfigAutomaton { states: a.state_count(), packets: n, edges: Vec::new() };
    let push = |e: (usize, usize, PacketId, S::Elem), edges: &mut Vec<_>| {
        if edges.len() >= max_edges {
            return Err(WnkError::Resource(format!("unfolding exceeds the cap of {max_edges} edges")));
        }
        edges.push(e);
        Ok(())
    };
    let mut edges = Vec::new();
    for q in 0..a.state_count() {
        let w = a.init(q);
        if S::is_zero(w) {
            continue;
        }
        for b in 0..n as PacketId {
            push((0, pca.config(q, b), b, w.clone()), &mut edges)?;
        }
    }
    for q in 0..a.state_count() {
        for (t, rel) in a.transitions(q) {
            for (x, y, w) in rel.entries() {
                push((pca.config(q, *x), pca.config(*t, *y), *y, w.clone()), &mut edges)?;
            }
        }
        for (x, y, w) in a.output(q).entries() {
            push((pca.config(q, *x), 1, *y, w.clone()), &mut edges)?;
        }
    }
    pca.edges = edges;
    Ok(pca)
}
