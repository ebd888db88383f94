//! Generators and reusable checks shared by the integration suites and the
//! acceptance harness. Everything is driven by seeded RNGs so failures
//! reproduce.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wnetkat::denotational::eval_approx;
use wnetkat::guarded::{gs_concat, gs_to_io, GuardedString};
use wnetkat::netcore::{reduce, FieldSchema, History, PacketId, Policy, Pred};
use wnetkat::semiring::{Semiring, SemiringHandle, SemiringKind};
use wnetkat::weighting::Weighting;
use wnetkat::wnka::{mat_mul, mat_star, thompson, thompson_reduced, CompileOptions, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_fraction(r: &mut impl Rng) -> String {
    let d = r.gen_range(1..=8u32);
    format!("{}/{}", r.gen_range(0..=d), d)
}

/// A random carrier literal for `kind`, biased towards the special values.
pub fn literal(kind: SemiringKind, r: &mut impl Rng) -> String {
    use SemiringKind::*;
    let roll = r.gen_range(0..16);
    match kind {
        Boolean => ["true", "false"][r.gen_range(0..2)].into(),
        Tropical => {
            if roll == 0 {
                "inf".into()
            } else {
                r.gen_range(0..20).to_string()
            }
        }
        Arctic | Bottleneck => match roll {
            0 => "-inf".into(),
            1 => "inf".into(),
            _ => r.gen_range(0..20).to_string(),
        },
        Viterbi => unit_fraction(r),
        ProbUnion => {
            if roll == 0 {
                "-inf".into()
            } else {
                unit_fraction(r)
            }
        }
        Security => ["0", "L", "M", "H"][r.gen_range(0..4)].into(),
        NatInf => {
            if roll == 0 {
                "inf".into()
            } else {
                r.gen_range(0..6).to_string()
            }
        }
        Real => {
            if roll == 0 {
                "inf".into()
            } else {
                let d = r.gen_range(1..=6u32);
                format!("{}/{}", r.gen_range(0..=2 * d), d)
            }
        }
    }
}

pub fn elem<S: Semiring>(r: &mut impl Rng) -> S::Elem {
    S::parse(&literal(S::KIND, r)).expect("generated literals parse")
}

/// `fields` with `values` values each, named `f0, f1, …` and `0, 1, …`.
pub fn schema(fields: usize, values: usize) -> FieldSchema {
    FieldSchema::new((0..fields).map(|f| (format!("f{f}"), (0..values).map(|v| v.to_string()).collect())).collect())
        .unwrap()
}

pub fn random_pred(s: &FieldSchema, r: &mut impl Rng, depth: usize) -> Pred {
    let test = |r: &mut dyn rand::RngCore| {
        let f = r.gen_range(0..s.field_count());
        Pred::Test(f, r.gen_range(0..s.values(f).len() as u32))
    };
    if depth == 0 {
        return test(r);
    }
    match r.gen_range(0..8) {
        0 => Pred::True,
        1 => Pred::False,
        2 => Pred::not(random_pred(s, r, depth - 1)),
        3 => Pred::and(random_pred(s, r, depth - 1), random_pred(s, r, depth - 1)),
        4 => Pred::or(random_pred(s, r, depth - 1), random_pred(s, r, depth - 1)),
        _ => test(r),
    }
}

/// A random policy with roughly `size` constructors. `star` allows one
/// level of iteration.
pub fn random_policy(s: &FieldSchema, kind: SemiringKind, r: &mut impl Rng, size: usize, star: bool) -> Policy {
    let h = SemiringHandle::new(kind);
    if size <= 1 {
        return match r.gen_range(0..3) {
            0 => Policy::Filter(random_pred(s, r, 1)),
            1 => {
                let f = r.gen_range(0..s.field_count());
                Policy::Assign(f, r.gen_range(0..s.values(f).len() as u32))
            }
            _ => Policy::Dup,
        };
    }
    match r.gen_range(0..10) {
        0..=2 => {
            let k = r.gen_range(1..size);
            Policy::seq(random_policy(s, kind, r, k, star), random_policy(s, kind, r, size - k, star))
        }
        3..=4 => {
            let k = r.gen_range(1..size);
            Policy::choice(random_policy(s, kind, r, k, star), random_policy(s, kind, r, size - k, star))
        }
        5..=6 => Policy::weigh(h.parse(&literal(kind, r)).unwrap(), random_policy(s, kind, r, size - 1, star)),
        7..=8 if star => Policy::star(random_policy(s, kind, r, size - 1, false)),
        _ => random_policy(s, kind, r, 1, star),
    }
}

/// Every guarded string over `packets` packets with at most `max_dups` dups.
pub fn guarded_strings(packets: usize, max_dups: usize) -> Vec<GuardedString> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<PacketId>> = vec![vec![]];
    for len in 1..=max_dups + 2 {
        layer =
            layer.iter().flat_map(|p| (0..packets as PacketId).map(move |c| [p.as_slice(), &[c]].concat())).collect();
        if len >= 2 {
            out.extend(layer.iter().map(|p| GuardedString::new(p.clone()).unwrap()));
        }
    }
    out
}

/// `⟦p↓n⟧(π::⟨⟩)` per input packet, for lookups by guarded string.
fn approx_table<S: Semiring>(p: &Policy, n: usize, s: &FieldSchema) -> Vec<Weighting<S, History>> {
    s.packets().map(|pi| eval_approx::<S>(p, n, s, &History::single(pi)).unwrap()).collect()
}

fn lookup<S: Semiring>(t: &[Weighting<S, History>], x: &GuardedString) -> S::Elem {
    let (pi, h) = gs_to_io(x);
    t[pi as usize].at(&h)
}

#[derive(Debug, Default, Clone, Copy)]
pub struct OracleStats {
    pub policies: usize,
    pub strings: usize,
    pub exact: usize,
    /// Comparisons where the approximant had not converged and only `⊑` was checked.
    pub bounded: usize,
    /// Comparisons with a non-zero expected weight.
    pub nonzero: usize,
}

/// Compares the automaton against the denotation for random policies over
/// two binary fields with iteration depth at most one, on every guarded
/// string with at most two dups.
///
/// Idempotent semirings whose loops can never improve a weight (Boolean,
/// tropical, Viterbi, bottleneck, security) must agree exactly with the
/// depth-6 approximant. Elsewhere the approximant must lie below the
/// automaton and agree with it once unrolling further changes nothing.
pub fn oracle_check<S: Semiring>(policies: usize, seed: u64) -> Result<OracleStats, String> {
    use SemiringKind::*;
    let s = schema(2, 2);
    let xs = guarded_strings(s.packet_count(), 2);
    let mut r = rng(seed);
    let mut st = OracleStats::default();
    let always_exact = matches!(S::KIND, Boolean | Tropical | Viterbi | Bottleneck | Security);
    for _ in 0..policies {
        let size = r.gen_range(1..=8);
        let p = random_policy(&s, S::KIND, &mut r, size, true);
        let a = thompson::<S>(&p, &s, CompileOptions::default()).map_err(|e| e.to_string())?;
        let d6 = approx_table::<S>(&p, 6, &s);
        let d16 = if always_exact { None } else { Some(approx_table::<S>(&p, 16, &s)) };
        st.policies += 1;
        for x in &xs {
            st.strings += 1;
            let got = a.accept_weight(x);
            let want = lookup(&d6, x);
            st.nonzero += usize::from(!S::is_zero(&want));
            let settled = d16.as_ref().is_none_or(|t| lookup(t, x) == want);
            let fail = |what: &str| {
                format!(
                    "{} {what}: policy {:?}, string {:?}: automaton {}, approximant {}",
                    S::KIND,
                    p,
                    x.packets(),
                    S::format(&got),
                    S::format(&want)
                )
            };
            if always_exact || settled {
                if got != want {
                    return Err(fail("mismatch"));
                }
                st.exact += 1;
            } else {
                if !S::leq(&want, &got) {
                    return Err(fail("approximant above automaton"));
                }
                st.bounded += 1;
            }
        }
    }
    Ok(st)
}

/// `thompson(p)` and `thompson(reduce(p))` agree on every guarded string
/// with at most two dups, over a four-packet schema.
pub fn reduction_check<S: Semiring>(policies: usize, seed: u64) -> Result<usize, String> {
    let s = schema(2, 2);
    let xs = guarded_strings(s.packet_count(), 2);
    let mut r = rng(seed);
    let mut compared = 0;
    for _ in 0..policies {
        let size = r.gen_range(1..=8);
        let p = random_policy(&s, S::KIND, &mut r, size, true);
        let h = SemiringHandle::new(S::KIND);
        let a = thompson::<S>(&p, &s, CompileOptions::default()).map_err(|e| e.to_string())?;
        let red = reduce(&p, &s, h).map_err(|e| e.to_string())?;
        let b = thompson_reduced::<S>(&red, &s, CompileOptions::default()).map_err(|e| e.to_string())?;
        for x in &xs {
            let (u, v) = (a.accept_weight(x), b.accept_weight(x));
            if u != v {
                return Err(format!(
                    "{}: policy {p:?} string {:?}: {} vs reduced {}",
                    S::KIND,
                    x.packets(),
                    S::format(&u),
                    S::format(&v)
                ));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// Semiring axioms and the star fixed point on `triples` random triples.
pub fn axiom_check<S: Semiring>(triples: usize, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (z, o) = (S::zero(), S::one());
    for _ in 0..triples {
        let (a, b, c) = (elem::<S>(&mut r), elem::<S>(&mut r), elem::<S>(&mut r));
        let show = || format!("{} a={} b={} c={}", S::KIND, S::format(&a), S::format(&b), S::format(&c));
        let laws = [
            ("⊕ associative", S::add(&S::add(&a, &b), &c) == S::add(&a, &S::add(&b, &c))),
            ("⊕ commutative", S::add(&a, &b) == S::add(&b, &a)),
            ("⊕ unit", S::add(&a, &z) == a),
            ("⊗ associative", S::mul(&S::mul(&a, &b), &c) == S::mul(&a, &S::mul(&b, &c))),
            ("⊗ unit", S::mul(&a, &o) == a && S::mul(&o, &a) == a),
            ("left distributive", S::mul(&a, &S::add(&b, &c)) == S::add(&S::mul(&a, &b), &S::mul(&a, &c))),
            ("right distributive", S::mul(&S::add(&a, &b), &c) == S::add(&S::mul(&a, &c), &S::mul(&b, &c))),
            ("annihilation", S::is_zero(&S::mul(&a, &z)) && S::is_zero(&S::mul(&z, &a))),
            ("star fixed point", S::star(&a) == S::add(&o, &S::mul(&a, &S::star(&a)))),
            ("order is reflexive", S::leq(&a, &a)),
            ("⊕ is monotone", S::leq(&a, &S::add(&a, &b))),
        ];
        if let Some((law, _)) = laws.iter().find(|(_, ok)| !ok) {
            return Err(format!("{law} fails for {}", show()));
        }
        let caps = S::KIND.capabilities();
        if caps.safety_capable && S::leq(&S::add(&a, &b), &c) != (S::leq(&a, &c) && S::leq(&b, &c)) {
            return Err(format!("⊕ is not a join below c for {}", show()));
        }
        if caps.reach_capable {
            if S::leq(&c, &S::add(&a, &b)) != (S::leq(&c, &a) || S::leq(&c, &b)) {
                return Err(format!("c ⊑ a⊕b does not split for {}", show()));
            }
            if !S::leq(&S::mul(&a, &b), &a) {
                return Err(format!("a⊗b ⊑ a fails for {}", show()));
            }
        }
    }
    Ok(())
}

pub fn random_weighting<S: Semiring>(r: &mut impl Rng, support: u32) -> Weighting<S, u32> {
    let mut w = Weighting::empty();
    for x in 0..support {
        if r.gen_bool(0.6) {
            w.insert(x, elem::<S>(r));
        }
    }
    w
}

/// Unit, associativity and distributivity laws of the weighting monad over
/// `X = {0,…,3}`, with kernels drawn per sample.
pub fn monad_check<S: Semiring>(samples: usize, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let m = random_weighting::<S>(&mut r, 4);
        let m2 = random_weighting::<S>(&mut r, 4);
        let ft: Vec<Weighting<S, u32>> = (0..4).map(|_| random_weighting::<S>(&mut r, 4)).collect();
        let gt: Vec<Weighting<S, u32>> = (0..4).map(|_| random_weighting::<S>(&mut r, 4)).collect();
        let f = |x: &u32| ft[*x as usize].clone();
        let g = |x: &u32| gt[*x as usize].clone();
        let x0 = r.gen_range(0..4u32);
        let checks = [
            ("left unit", Weighting::<S, u32>::unit(x0).bind(f) == f(&x0)),
            ("right unit", m.bind(|x| Weighting::unit(*x)) == m),
            ("associativity", m.bind(f).bind(g) == m.bind(|x| f(x).bind(g))),
            ("bind distributes over the first argument", m.add(&m2).bind(f) == m.bind(f).add(&m2.bind(f))),
            ("bind distributes over the kernel", m.bind(|x| f(x).add(&g(x))) == m.bind(f).add(&m.bind(g))),
            ("empty weighting annihilates", Weighting::<S, u32>::empty().bind(f).is_empty()),
            ("zero kernel annihilates", m.bind(|_| Weighting::<S, u32>::empty()).is_empty()),
            ("scaling by zero annihilates", m.scale_left(&S::zero()).bind(f).is_empty()),
        ];
        if let Some((law, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("{} monad law `{law}` fails on {m:?}", S::KIND));
        }
    }
    Ok(())
}

/// `M* = I ⊕ M·M* = I ⊕ M*·M` on random square matrices up to 6×6.
pub fn mat_star_check<S: Semiring>(samples: usize, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let n = r.gen_range(1..=6);
        let density = r.gen_range(0.2..0.9);
        let mut m = Matrix::<S>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if r.gen_bool(density) {
                    m.set(i, j, elem::<S>(&mut r));
                }
            }
        }
        let st = mat_star(&m).map_err(|e| e.to_string())?;
        let id = Matrix::<S>::identity(n);
        let left = id.add(&mat_mul(&m, &st).unwrap());
        let right = id.add(&mat_mul(&st, &m).unwrap());
        if left != st || right != st {
            return Err(format!("{} star fixed point fails on {m:?}", S::KIND));
        }
    }
    Ok(())
}

/// `(x⋄y)⋄z = x⋄(y⋄z)` over all strings with at most one dup on `packets` packets.
pub fn gs_assoc_check(packets: usize) -> Result<usize, String> {
    let xs = guarded_strings(packets, 1);
    let mut defined = 0;
    for x in &xs {
        for y in &xs {
            let xy = gs_concat(x, y);
            for z in &xs {
                let yz = gs_concat(y, z);
                let l = xy.as_ref().and_then(|xy| gs_concat(xy, z));
                let r = yz.as_ref().and_then(|yz| gs_concat(x, yz));
                if l != r {
                    return Err(format!("⋄ is not associative on {x:?} {y:?} {z:?}"));
                }
                defined += usize::from(l.is_some());
            }
        }
    }
    Ok(defined)
}

/// Weight of every key in a map, for comparing weightings across carriers.
pub fn render<S: Semiring, X: Ord + std::fmt::Debug>(w: &Weighting<S, X>) -> BTreeMap<String, String> {
    w.iter().map(|(x, r)| (format!("{x:?}"), S::format(r))).collect()
}
