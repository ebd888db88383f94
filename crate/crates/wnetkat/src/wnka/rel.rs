//! Sparse weighted relations on packets, i.e. `Pk × Pk → S` matrices.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::netcore::PacketId;
use crate::semiring::Semiring;

use super::matrix::sparse_star;

/// Sorted `(α, β, w)` triples without `0̄` entries.
pub struct PkRel<S: Semiring> {
    entries: Vec<(PacketId, PacketId, S::Elem)>,
}

impl<S: Semiring> Clone for PkRel<S> {
    fn clone(&self) -> Self {
        PkRel { entries: self.entries.clone() }
    }
}

impl<S: Semiring> PartialEq for PkRel<S> {
    fn eq(&self, o: &Self) -> bool {
        self.entries == o.entries
    }
}

impl<S: Semiring> std::fmt::Debug for PkRel<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.entries.iter().map(|(a, b, w)| (a, b, S::format(w)))).finish()
    }
}

impl<S: Semiring> Default for PkRel<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Semiring> PkRel<S> {
    pub fn zero() -> Self {
        PkRel { entries: Vec::new() }
    }

    /// `[α = β]` over the first `n` packets.
    pub fn identity(n: usize) -> Self {
        PkRel { entries: (0..n as PacketId).map(|a| (a, a, S::one())).collect() }
    }

    /// `[α = β ∧ keep(α)]`.
    pub fn diag(n: usize, keep: impl Fn(PacketId) -> bool) -> Self {
        PkRel { entries: (0..n as PacketId).filter(|&a| keep(a)).map(|a| (a, a, S::one())).collect() }
    }

    /// `[β = f(α)]`.
    pub fn function(n: usize, f: impl Fn(PacketId) -> PacketId) -> Self {
        PkRel { entries: (0..n as PacketId).map(|a| (a, f(a), S::one())).collect() }
    }

    /// Builds a relation from arbitrary triples, summing duplicates.
    pub fn from_entries(it: impl IntoIterator<Item = (PacketId, PacketId, S::Elem)>) -> Self {
        let mut m: BTreeMap<(PacketId, PacketId), S::Elem> = BTreeMap::new();
        for (a, b, w) in it {
            if S::is_zero(&w) {
                continue;
            }
            match m.get_mut(&(a, b)) {
                Some(cur) => *cur = S::add(cur, &w),
                None => {
                    m.insert((a, b), w);
                }
            }
        }
        PkRel { entries: m.into_iter().filter(|(_, w)| !S::is_zero(w)).map(|((a, b), w)| (a, b, w)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(PacketId, PacketId, S::Elem)] {
        &self.entries
    }

    /// Entries with source `α`, sorted by target.
    pub fn row(&self, a: PacketId) -> &[(PacketId, PacketId, S::Elem)] {
        let lo = self.entries.partition_point(|e| e.0 < a);
        let hi = self.entries.partition_point(|e| e.0 <= a);
        &self.entries[lo..hi]
    }

    pub fn get(&self, a: PacketId, b: PacketId) -> S::Elem {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(a, b))) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + o.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < o.entries.len() {
            let (x, y) = (&self.entries[i], &o.entries[j]);
            match (x.0, x.1).cmp(&(y.0, y.1)) {
                std::cmp::Ordering::Less => {
                    out.push(x.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(y.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = S::add(&x.2, &y.2);
                    if !S::is_zero(&s) {
                        out.push((x.0, x.1, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        out.extend_from_slice(&o.entries[j..]);
        PkRel { entries: out }
    }

    pub fn add_assign(&mut self, o: &Self) {
        if !o.is_zero() {
            *self = self.add(o);
        }
    }

    /// `λαβ. Σ_γ self(α,γ) ⊗ o(γ,β)`
    pub fn compose(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let a = self.entries[i].0;
            let mut acc: BTreeMap<PacketId, S::Elem> = BTreeMap::new();
            while i < self.entries.len() && self.entries[i].0 == a {
                let (_, g, w) = &self.entries[i];
                for (_, b, v) in o.row(*g) {
                    let p = S::mul(w, v);
                    match acc.get_mut(b) {
                        Some(cur) => *cur = S::add(cur, &p),
                        None => {
                            acc.insert(*b, p);
                        }
                    }
                }
                i += 1;
            }
            out.extend(acc.into_iter().filter(|(_, w)| !S::is_zero(w)).map(|(b, w)| (a, b, w)));
        }
        PkRel { entries: out }
    }

    /// `λαβ. r ⊗ self(α,β)`
    pub fn scale_left(&self, r: &S::Elem) -> Self {
        if S::is_zero(r) {
            return Self::zero();
        }
        if *r == S::one() {
            return self.clone();
        }
        PkRel {
            entries: self
                .entries
                .iter()
                .filter_map(|(a, b, w)| {
                    let v = S::mul(r, w);
                    (!S::is_zero(&v)).then_some((*a, *b, v))
                })
                .collect(),
        }
    }

    /// The packet-indexed matrix star over the first `n` packets.
    pub fn star(&self, n: usize, max_scc: usize) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, S::Elem)>> = vec![Vec::new(); n];
        for (a, b, w) in &self.entries {
            rows[*a as usize].push((*b as usize, w.clone()));
        }
        let star = sparse_star::<S>(n, &rows, max_scc)?;
        Ok(PkRel {
            entries: star
                .into_iter()
                .enumerate()
                .flat_map(|(a, r)| r.into_iter().map(move |(b, w)| (a as PacketId, b as PacketId, w)))
                .collect(),
        })
    }
}
