//! Deciding `r`-safety and `r`-reachability, with witnesses, and computing the
//! weight of individual traces.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Result, WnkError};
use crate::guarded::{gs_to_io, history_to_gs, GuardedString};
use crate::netcore::{History, PacketId};
use crate::semiring::{Semiring, SemiringValue};
use crate::wnka::{solve_star_vector, Wnka};

/// Search limits. Exceeding any of them is reported as a resource error,
/// never as a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Longest guarded string (in `dup`s) the safety search will look at.
    pub max_dups: usize,
    /// Largest frontier of pending prefixes in the safety search.
    pub max_frontier: usize,
    /// Maximum number of run extensions explored by the reachability search.
    pub max_runs: usize,
    /// Largest configuration graph built for `total_weight`.
    pub max_configs: usize,
    pub max_scc: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_dups: 64,
            max_frontier: 200_000,
            max_runs: 5_000_000,
            max_configs: 2_000_000,
            max_scc: 2048,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Safe,
    Unsafe,
    Reachable,
    Unreachable,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Safe => "safe",
            VerdictKind::Unsafe => "unsafe",
            VerdictKind::Reachable => "reachable",
            VerdictKind::Unreachable => "unreachable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub input_packet: PacketId,
    pub history: History,
    pub guarded_string: GuardedString,
    pub weight: SemiringValue,
}

impl Witness {
    fn new(x: GuardedString, weight: SemiringValue) -> Self {
        let (input_packet, history) = gs_to_io(&x);
        Witness { input_packet, history, guarded_string: x, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub bound: SemiringValue,
    pub witness: Option<Witness>,
    pub total_weight: Option<SemiringValue>,
}

impl Verdict {
    /// Whether the queried property holds.
    pub fn holds(&self) -> bool {
        matches!(self.kind, VerdictKind::Safe | VerdictKind::Reachable)
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds() {
            0
        } else {
            1
        }
    }
}

/// A path `q₀ →(c₀,c₁) q₁ → … → qₖ` followed by the output pair `(cₖ, cₖ₊₁)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub states: Vec<usize>,
    pub packets: Vec<PacketId>,
}

impl Run {
    pub fn len(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.states.len() == 1
    }

    pub fn guarded_string(&self) -> GuardedString {
        GuardedString::new(self.packets.clone()).expect("runs read at least two packets")
    }

    fn check(&self, a_states: usize) -> Result<()> {
        if self.states.is_empty() || self.packets.len() != self.states.len() + 1 {
            return Err(WnkError::Invalid(format!(
                "a run over {} states must read {} packets, not {}",
                self.states.len(),
                self.states.len() + 1,
                self.packets.len()
            )));
        }
        if let Some(q) = self.states.iter().find(|&&q| q >= a_states) {
            return Err(WnkError::Invalid(format!("state {q} is out of range")));
        }
        Ok(())
    }
}

fn require(ok: bool, what: &str, kind: crate::semiring::SemiringKind) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(WnkError::Capability(format!("the {kind} semiring does not support {what}")))
    }
}

/// `Σ_x ⟦A⟧(x)`, the weight of the whole language.
///
/// Solved on the configuration graph `(q, α)`: `X = b ⊕ M·X` with
/// `b(q, α) = Σ_β Λ_{αβ}(q)`, restricted to configurations reachable from an
/// initial one.
pub fn total_weight<S: Semiring>(a: &Wnka<S>, opts: &VerifyOptions) -> Result<S::Elem> {
    let n = a.packet_count() as PacketId;
    let starts: Vec<usize> = (0..a.state_count()).filter(|&q| !S::is_zero(a.init(q))).collect();
    let roots: Vec<(usize, PacketId)> = starts.iter().flat_map(|&q| (0..n).map(move |c| (q, c))).collect();
    let succ = |&(q, c): &(usize, PacketId)| -> Vec<((usize, PacketId), S::Elem)> {
        a.transitions(q)
            .iter()
            .flat_map(|(t, rel)| rel.row(c).iter().map(move |(_, b, w)| ((*t, *b), w.clone())))
            .collect()
    };
    let b = |&(q, c): &(usize, PacketId)| -> S::Elem {
        a.output(q).row(c).iter().fold(S::zero(), |acc, (_, _, w)| S::add(&acc, w))
    };
    let x = solve_star_vector::<S, _>(roots, &succ, &b, opts.max_configs, opts.max_scc)?;
    let mut total = S::zero();
    for q in starts {
        let mut inner = S::zero();
        for c in 0..n {
            if let Some(v) = x.get(&(q, c)) {
                S::add_assign(&mut inner, v);
            }
        }
        S::add_assign(&mut total, &S::mul(a.init(q), &inner));
    }
    Ok(total)
}

/// `⟦A⟧(π h)`: the weight the automaton gives to producing history `h` from
/// input packet `π`.
pub fn eval_weight<S: Semiring>(a: &Wnka<S>, pi: PacketId, h: &History) -> S::Elem {
    a.accept_weight(&history_to_gs(pi, h))
}

type SparseVec<S> = Vec<(usize, <S as Semiring>::Elem)>;

/// Decides whether every guarded string weighs at most `r`.
///
/// When the bound fails, guarded strings are enumerated by number of `dup`s
/// and then lexicographically, and the first one above the bound is returned.
/// Prefixes that end in the same packet with the same state vector have the
/// same continuations, so only the earliest one is kept.
pub fn check_safety<S: Semiring>(a: &Wnka<S>, r: &S::Elem, opts: &VerifyOptions) -> Result<Verdict> {
    let caps = S::KIND.capabilities();
    require(caps.safety_capable, "safety checking", S::KIND)?;
    let total = total_weight(a, opts)?;
    let mut verdict = Verdict {
        kind: VerdictKind::Safe,
        bound: S::wrap(r.clone()),
        witness: None,
        total_weight: Some(S::wrap(total.clone())),
    };
    if S::leq(&total, r) {
        return Ok(verdict);
    }
    require(caps.total_order, "witness extraction", S::KIND)?;
    let x = safety_witness(a, r, opts)?;
    let w = a.accept_weight(&x);
    if S::leq(&w, r) {
        return Err(WnkError::Invalid("safety witness failed re-verification".into()));
    }
    verdict.kind = VerdictKind::Unsafe;
    verdict.witness = Some(Witness::new(x, S::wrap(w)));
    Ok(verdict)
}

fn safety_witness<S: Semiring>(a: &Wnka<S>, r: &S::Elem, opts: &VerifyOptions) -> Result<GuardedString> {
    let init: SparseVec<S> =
        (0..a.state_count()).filter(|&q| !S::is_zero(a.init(q))).map(|q| (q, a.init(q).clone())).collect();
    let mut seen: HashSet<(PacketId, Vec<(usize, String)>)> = HashSet::new();
    let mut frontier: Vec<(Vec<PacketId>, SparseVec<S>)> = Vec::new();
    for c in 0..a.packet_count() as PacketId {
        if seen.insert(fingerprint::<S>(c, &init)) {
            frontier.push((vec![c], init.clone()));
        }
    }
    for _dups in 0..=opts.max_dups {
        for (prefix, v) in &frontier {
            let c = *prefix.last().expect("non-empty prefix");
            let mut completions: BTreeMap<PacketId, S::Elem> = BTreeMap::new();
            for (q, w) in v {
                for (_, b, o) in a.output(*q).row(c) {
                    let e = completions.entry(*b).or_insert_with(S::zero);
                    *e = S::add(e, &S::mul(w, o));
                }
            }
            if let Some((b, _)) = completions.into_iter().find(|(_, w)| !S::leq(w, r)) {
                let mut x = prefix.clone();
                x.push(b);
                return GuardedString::new(x);
            }
        }
        let mut next = Vec::new();
        for (prefix, v) in &frontier {
            let c = *prefix.last().expect("non-empty prefix");
            let mut step: BTreeMap<PacketId, BTreeMap<usize, S::Elem>> = BTreeMap::new();
            for (q, w) in v {
                for (t, rel) in a.transitions(*q) {
                    for (_, b, d) in rel.row(c) {
                        let e = step.entry(*b).or_default().entry(*t).or_insert_with(S::zero);
                        *e = S::add(e, &S::mul(w, d));
                    }
                }
            }
            for (b, vec) in step {
                let vec: SparseVec<S> = vec.into_iter().filter(|(_, w)| !S::is_zero(w)).collect();
                if vec.is_empty() || !seen.insert(fingerprint::<S>(b, &vec)) {
                    continue;
                }
                if next.len() >= opts.max_frontier {
                    return Err(WnkError::Resource(format!(
                        "safety witness search frontier exceeds {} prefixes",
                        opts.max_frontier
                    )));
                }
                let mut p = prefix.clone();
                p.push(b);
                next.push((p, vec));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(WnkError::Resource(format!("no safety witness within {} dups", opts.max_dups)))
}

fn fingerprint<S: Semiring>(c: PacketId, v: &SparseVec<S>) -> (PacketId, Vec<(usize, String)>) {
    (c, v.iter().map(|(q, w)| (*q, S::format(w))).collect())
}

/// Decides whether some guarded string weighs at least `r`.
///
/// Only cycle-free runs are searched: in the supported semirings `⊗` never
/// increases a weight, so a loop cannot help. Among the qualifying runs the
/// heaviest is reported, ties going to the first found.
pub fn check_reachability<S: Semiring>(a: &Wnka<S>, r: &S::Elem, opts: &VerifyOptions) -> Result<Verdict> {
    require(S::KIND.capabilities().reach_capable, "reachability checking", S::KIND)?;
    let mut search = ReachSearch { a, r, best: None, best_at: BTreeMap::new(), budget: opts.max_runs, opts };
    let mut on_path = HashSet::new();
    'outer: for q in 0..a.state_count() {
        if S::is_zero(a.init(q)) {
            continue;
        }
        for c in 0..a.packet_count() as PacketId {
            let mut path = vec![(q, c)];
            search.dfs(&mut path, &mut on_path, a.init(q).clone())?;
            if search.saturated() {
                break 'outer;
            }
        }
    }
    let mut verdict =
        Verdict { kind: VerdictKind::Unreachable, bound: S::wrap(r.clone()), witness: None, total_weight: None };
    if let Some((_, x)) = search.best {
        let w = a.accept_weight(&x);
        if !S::leq(r, &w) {
            return Err(WnkError::Invalid("reachability witness failed re-verification".into()));
        }
        verdict.kind = VerdictKind::Reachable;
        verdict.witness = Some(Witness::new(x, S::wrap(w)));
    }
    Ok(verdict)
}

struct ReachSearch<'a, S: Semiring> {
    a: &'a Wnka<S>,
    r: &'a S::Elem,
    best: Option<(S::Elem, GuardedString)>,
    /// Heaviest prefix weight seen per configuration.
    best_at: BTreeMap<(usize, PacketId), S::Elem>,
    budget: usize,
    opts: &'a VerifyOptions,
}

impl<S: Semiring> ReachSearch<'_, S> {
    fn saturated(&self) -> bool {
        self.best.as_ref().is_some_and(|(w, _)| *w == S::one())
    }

    fn improves(&self, w: &S::Elem) -> bool {
        S::leq(self.r, w) && self.best.as_ref().is_none_or(|(b, _)| !S::leq(w, b))
    }

    fn dfs(
        &mut self,
        path: &mut Vec<(usize, PacketId)>,
        on_path: &mut HashSet<(usize, PacketId)>,
        w: S::Elem,
    ) -> Result<()> {
        if self.budget == 0 {
            return Err(WnkError::Resource(format!(
                "reachability search exceeds {} run extensions",
                self.opts.max_runs
            )));
        }
        self.budget -= 1;
        let (q, c) = *path.last().expect("non-empty path");
        for (_, b, o) in self.a.output(q).row(c) {
            let total = S::mul(&w, o);
            if self.improves(&total) {
                let mut x: Vec<PacketId> = path.iter().map(|(_, c)| *c).collect();
                x.push(*b);
                self.best = Some((total, GuardedString::new(x)?));
            }
        }
        if self.saturated() {
            return Ok(());
        }
        for (t, rel) in self.a.transitions(q) {
            for (_, b, d) in rel.row(c) {
                let cfg = (*t, *b);
                if on_path.contains(&cfg) {
                    continue;
                }
                let nw = S::mul(&w, d);
                if !self.improves(&nw) {
                    continue;
                }
                if let Some(prev) = self.best_at.get(&cfg) {
                    if S::leq(&nw, prev) {
                        continue;
                    }
                }
                self.best_at.insert(cfg, nw.clone());
                on_path.insert(cfg);
                path.push(cfg);
                let res = self.dfs(path, on_path, nw);
                path.pop();
                on_path.remove(&cfg);
                res?;
                if self.saturated() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// All runs that end in a non-zero output and never revisit a configuration
/// `(qᵢ, cᵢ)` for `i ≥ 1`. Fails once more than `max_runs` runs are found.
pub fn enumerate_cycle_free_runs<S: Semiring>(a: &Wnka<S>, max_runs: usize) -> Result<Vec<Run>> {
    fn go<S: Semiring>(
        a: &Wnka<S>,
        states: &mut Vec<usize>,
        packets: &mut Vec<PacketId>,
        on_path: &mut HashSet<(usize, PacketId)>,
        out: &mut Vec<Run>,
        max_runs: usize,
    ) -> Result<()> {
        let (q, c) = (*states.last().expect("non-empty"), *packets.last().expect("non-empty"));
        for (_, b, _) in a.output(q).row(c) {
            if out.len() >= max_runs {
                return Err(WnkError::Resource(format!("more than {max_runs} cycle-free runs")));
            }
            let mut p = packets.clone();
            p.push(*b);
            out.push(Run { states: states.clone(), packets: p });
        }
        for (t, rel) in a.transitions(q) {
            for (_, b, _) in rel.row(c) {
                if !on_path.insert((*t, *b)) {
                    continue;
                }
                states.push(*t);
                packets.push(*b);
                let res = go(a, states, packets, on_path, out, max_runs);
                states.pop();
                packets.pop();
                on_path.remove(&(*t, *b));
                res?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    for q in 0..a.state_count() {
        if S::is_zero(a.init(q)) {
            continue;
        }
        for c in 0..a.packet_count() as PacketId {
            go(a, &mut vec![q], &mut vec![c], &mut HashSet::new(), &mut out, max_runs)?;
        }
    }
    Ok(out)
}

/// `⊗`-product of the transition weights along `run`, `1̄` for a run without steps.
pub fn run_weight<S: Semiring>(a: &Wnka<S>, run: &Run) -> Result<S::Elem> {
    run.check(a.state_count())?;
    let mut w = S::one();
    for i in 0..run.len() {
        let d = a.delta_at(run.states[i], run.states[i + 1], run.packets[i], run.packets[i + 1]);
        w = S::mul(&w, &d);
    }
    Ok(w)
}

/// `ι(q₀) ⊗ weight(ρ) ⊗ Λ_{cₖcₖ₊₁}(qₖ)`
pub fn run_total<S: Semiring>(a: &Wnka<S>, run: &Run) -> Result<S::Elem> {
    let w = run_weight(a, run)?;
    let k = run.len();
    let o = a.output(run.states[k]).get(run.packets[k], run.packets[k + 1]);
    Ok(S::mul(&S::mul(a.init(run.states[0]), &w), &o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{parse_policy, FieldSchema};
    use crate::semiring::{Arctic, Boolean, ExtInt, NatInf, SemiringHandle, Viterbi};
    use crate::wnka::{thompson, CompileOptions};

    fn schema(n: usize) -> FieldSchema {
        FieldSchema::new(vec![("f".into(), (0..n).map(|i| i.to_string()).collect())]).unwrap()
    }

    fn compile<S: Semiring>(src: &str, s: &FieldSchema) -> Wnka<S> {
        let p = parse_policy(src, s, SemiringHandle::new(S::KIND)).unwrap();
        thompson::<S>(&p, s, CompileOptions::default()).unwrap()
    }

    #[test]
    fn totals() {
        let s = schema(1);
        let o = VerifyOptions::default();
        assert!(!total_weight(&compile::<Boolean>("drop", &s), &o).unwrap());
        assert!(total_weight(&compile::<Boolean>("skip;dup;skip", &s), &o).unwrap());
        assert_eq!(total_weight(&compile::<Arctic>("(⟨0⟩⊙dup)*", &s), &o).unwrap(), ExtInt::Fin(0));
        assert_eq!(total_weight(&compile::<Arctic>("(⟨3⟩⊙dup)*", &s), &o).unwrap(), ExtInt::PosInf);
    }

    #[test]
    fn safety_witness_is_shortest() {
        let s = schema(2);
        let a = compile::<Arctic>("(⟨3⟩⊙dup)*", &s);
        let v = check_safety(&a, &ExtInt::Fin(5), &VerifyOptions::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Unsafe);
        let w = v.witness.unwrap();
        assert_eq!(w.guarded_string.packets(), &[0, 0, 0, 0]);
        assert_eq!(w.weight, Arctic::wrap(ExtInt::Fin(6)));
    }

    #[test]
    fn capabilities_are_enforced() {
        let s = schema(1);
        let a = compile::<NatInf>("skip", &s);
        let o = VerifyOptions::default();
        assert!(matches!(check_safety(&a, &NatInf::one(), &o), Err(WnkError::Capability(_))));
        assert!(matches!(check_reachability(&a, &NatInf::one(), &o), Err(WnkError::Capability(_))));
    }

    #[test]
    fn reachability_picks_heaviest() {
        let s = schema(3);
        let a = compile::<Viterbi>("f=0 ; (⟨1/2⟩⊙ f:=1 + ⟨3/4⟩⊙ f:=2) ; dup", &s);
        let v = check_reachability(&a, &Viterbi::parse("1/2").unwrap(), &VerifyOptions::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Reachable);
        assert_eq!(v.witness.unwrap().guarded_string.packets(), &[0, 2, 2]);
        let u = check_reachability(&a, &Viterbi::parse("4/5").unwrap(), &VerifyOptions::default()).unwrap();
        assert_eq!(u.kind, VerdictKind::Unreachable);
        let d = compile::<Viterbi>("drop", &s);
        assert!(!check_reachability(&d, &Viterbi::parse("1/10").unwrap(), &VerifyOptions::default()).unwrap().holds());
    }

    #[test]
    fn runs_of_a_self_loop() {
        let s = schema(1);
        let a = compile::<NatInf>("(⟨3⟩⊙dup)*", &s);
        let runs = enumerate_cycle_free_runs(&a, 100).unwrap();
        // the loop state is revisited after one step
        assert_eq!(runs.iter().map(Run::len).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(run_weight(&a, &runs[0]).unwrap(), NatInf::one());
        assert_eq!(run_weight(&a, &runs[1]).unwrap(), NatInf::parse("3").unwrap());
        assert_eq!(eval_weight(&a, 0, &History::new(vec![0; 5]).unwrap()), NatInf::parse("81").unwrap());
    }
}
