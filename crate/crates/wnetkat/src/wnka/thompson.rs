//! Compositional compilation of policies into automata.

use std::collections::BTreeMap;

use crate::denotational::check_weights;
use crate::error::Result;
use crate::netcore::{eval_pred_id, FieldSchema, Policy, ReducedPolicy};
use crate::semiring::Semiring;

use super::{PkRel, StateLabel, Wnka};

/// Limits applied while compiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Largest strongly connected component handed to the dense star.
    pub max_scc: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { max_scc: 2048 }
    }
}

struct Frag<S: Semiring> {
    labels: Vec<StateLabel>,
    init: Vec<S::Elem>,
    delta: Vec<BTreeMap<usize, PkRel<S>>>,
    out: Vec<PkRel<S>>,
}

impl<S: Semiring> Frag<S> {
    fn single(label: StateLabel, out: PkRel<S>) -> Self {
        Frag { labels: vec![label], init: vec![S::one()], delta: vec![BTreeMap::new()], out: vec![out] }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn shifted(delta: BTreeMap<usize, PkRel<S>>, by: usize) -> BTreeMap<usize, PkRel<S>> {
        delta.into_iter().map(|(t, r)| (t + by, r)).collect()
    }

    /// `Σ_q ι(q) ⊗ Λ(q)`
    fn initial_output(&self) -> PkRel<S> {
        let mut acc = PkRel::zero();
        for (q, w) in self.init.iter().enumerate() {
            if !S::is_zero(w) {
                acc.add_assign(&self.out[q].scale_left(w));
            }
        }
        acc
    }

    /// `q' ↦ Σ_q ι(q) ⊗ Δ(q, q')`
    fn initial_steps(&self) -> BTreeMap<usize, PkRel<S>> {
        let mut acc: BTreeMap<usize, PkRel<S>> = BTreeMap::new();
        for (q, w) in self.init.iter().enumerate() {
            if S::is_zero(w) {
                continue;
            }
            for (t, r) in &self.delta[q] {
                acc.entry(*t).or_default().add_assign(&r.scale_left(w));
            }
        }
        acc.retain(|_, r| !r.is_zero());
        acc
    }

    fn weigh(mut self, r: &S::Elem) -> Self {
        for w in &mut self.init {
            *w = S::mul(r, w);
        }
        self
    }

    fn choice(mut self, other: Self) -> Self {
        let off = self.len();
        self.labels.extend(other.labels);
        self.init.extend(other.init);
        self.delta.extend(other.delta.into_iter().map(|d| Self::shifted(d, off)));
        self.out.extend(other.out);
        self
    }

    fn seq(self, other: Self) -> Self {
        let off = self.len();
        let steps2 = other.initial_steps();
        let out2 = other.initial_output();
        let mut delta = Vec::with_capacity(off + other.len());
        let mut out = Vec::with_capacity(off + other.len());
        for (mut d, lam) in self.delta.into_iter().zip(self.out) {
            if !lam.is_zero() {
                for (t, r) in &steps2 {
                    let bridge = lam.compose(r);
                    if !bridge.is_zero() {
                        d.entry(t + off).or_default().add_assign(&bridge);
                    }
                }
            }
            out.push(lam.compose(&out2));
            delta.push(d);
        }
        delta.extend(other.delta.into_iter().map(|d| Self::shifted(d, off)));
        out.extend(other.out);
        let mut init = self.init;
        init.extend(std::iter::repeat_with(S::zero).take(other.labels.len()));
        let mut labels = self.labels;
        labels.extend(other.labels);
        Frag { labels, init, delta, out }
    }

    fn star(self, packets: usize, opts: CompileOptions) -> Result<Self> {
        let loop_rel = self.initial_output().star(packets, opts.max_scc)?;
        let entry: BTreeMap<usize, PkRel<S>> = self
            .initial_steps()
            .into_iter()
            .map(|(t, r)| (t, loop_rel.compose(&r)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        let mut labels = vec![StateLabel::StarEntry];
        let mut init = vec![S::one()];
        let mut delta = vec![Self::shifted(entry.clone(), 1)];
        let mut out = vec![loop_rel.clone()];
        for ((d, lam), label) in self.delta.into_iter().zip(self.out).zip(self.labels) {
            let mut d = Self::shifted(d, 1);
            if !lam.is_zero() {
                let lam_loop = lam.compose(&loop_rel);
                for (t, r) in &entry {
                    let back = lam_loop.compose(r);
                    if !back.is_zero() {
                        d.entry(t + 1).or_default().add_assign(&back);
                    }
                }
                out.push(lam_loop);
            } else {
                out.push(lam);
            }
            labels.push(label);
            init.push(S::zero());
            delta.push(d);
        }
        Ok(Frag { labels, init, delta, out })
    }

    fn dup(packets: usize) -> Self {
        let mut d = BTreeMap::new();
        d.insert(1, PkRel::identity(packets));
        Frag {
            labels: vec![StateLabel::DupEntry, StateLabel::DupExit],
            init: vec![S::one(), S::zero()],
            delta: vec![d, BTreeMap::new()],
            out: vec![PkRel::zero(), PkRel::identity(packets)],
        }
    }

    fn finish(self, packets: usize, options: CompileOptions) -> Wnka<S> {
        Wnka {
            packets,
            labels: self.labels,
            init: self.init,
            delta: self.delta.into_iter().map(|d| d.into_iter().filter(|(_, r)| !r.is_zero()).collect()).collect(),
            out: self.out,
            options,
        }
    }
}

fn build<S: Semiring>(p: &Policy, schema: &FieldSchema, opts: CompileOptions) -> Result<Frag<S>> {
    let n = schema.packet_count();
    Ok(match p {
        Policy::Filter(t) => Frag::single(StateLabel::Filter, PkRel::diag(n, |a| eval_pred_id(schema, t, a))),
        Policy::Assign(f, v) => Frag::single(StateLabel::Assign, PkRel::function(n, |a| schema.set(a, *f, *v))),
        Policy::Dup => Frag::dup(n),
        Policy::Seq(a, b) => build::<S>(a, schema, opts)?.seq(build::<S>(b, schema, opts)?),
        Policy::Choice(a, b) => build::<S>(a, schema, opts)?.choice(build::<S>(b, schema, opts)?),
        Policy::Weigh(r, a) => build::<S>(a, schema, opts)?.weigh(&S::unwrap(r)?),
        Policy::Star(a) => build::<S>(a, schema, opts)?.star(n, opts)?,
    })
}

fn build_reduced<S: Semiring>(p: &ReducedPolicy, packets: usize, opts: CompileOptions) -> Result<Frag<S>> {
    Ok(match p {
        ReducedPolicy::CompleteTest(a) => {
            Frag::single(StateLabel::CompleteTest, PkRel::from_entries([(*a, *a, S::one())]))
        }
        ReducedPolicy::CompleteAssign(b) => Frag::single(StateLabel::CompleteAssign, PkRel::function(packets, |_| *b)),
        ReducedPolicy::Dup => Frag::dup(packets),
        ReducedPolicy::Seq(a, b) => build_reduced::<S>(a, packets, opts)?.seq(build_reduced::<S>(b, packets, opts)?),
        ReducedPolicy::Choice(a, b) => {
            build_reduced::<S>(a, packets, opts)?.choice(build_reduced::<S>(b, packets, opts)?)
        }
        ReducedPolicy::Weigh(r, a) => build_reduced::<S>(a, packets, opts)?.weigh(&S::unwrap(r)?),
        ReducedPolicy::Star(a) => build_reduced::<S>(a, packets, opts)?.star(packets, opts)?,
    })
}

/// Compiles `p` case by case: one state per filter or assignment, two per
/// `dup`, and one fresh state per iteration.
pub fn thompson<S: Semiring>(p: &Policy, schema: &FieldSchema, opts: CompileOptions) -> Result<Wnka<S>> {
    check_weights::<S>(p)?;
    Ok(build::<S>(p, schema, opts)?.finish(schema.packet_count(), opts))
}

/// Compiles a reduced policy using complete tests and assignments as the base cases.
pub fn thompson_reduced<S: Semiring>(p: &ReducedPolicy, schema: &FieldSchema, opts: CompileOptions) -> Result<Wnka<S>> {
    Ok(build_reduced::<S>(p, schema.packet_count(), opts)?.finish(schema.packet_count(), opts))
}
