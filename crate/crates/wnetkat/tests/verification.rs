mod common;

use rand::seq::SliceRandom;
use rand::Rng;
use wnetkat::guarded::gs_to_io;
use wnetkat::semiring::{Semiring, SemiringKind};
use wnetkat::verify::{
    check_reachability, check_safety, enumerate_cycle_free_runs, eval_weight, run_total, total_weight, Run,
    VerdictKind, VerifyOptions,
};
use wnetkat::with_semiring;
use wnetkat::wnka::{thompson, CompileOptions, Wnka};
use wnetkat::WnkError;

const SAFETY: [SemiringKind; 3] = [SemiringKind::Boolean, SemiringKind::Arctic, SemiringKind::ProbUnion];
const REACH: [SemiringKind; 5] = [
    SemiringKind::Boolean,
    SemiringKind::Tropical,
    SemiringKind::Viterbi,
    SemiringKind::Bottleneck,
    SemiringKind::Security,
];

fn policies<S: Semiring>(count: usize, seed: u64) -> Vec<Wnka<S>> {
    let s = common::schema(1, 2);
    let mut r = common::rng(seed);
    (0..count)
        .map(|_| {
            let size = r.gen_range(2..=9);
            let p = common::random_policy(&s, S::KIND, &mut r, size, true);
            thompson::<S>(&p, &s, CompileOptions::default()).unwrap()
        })
        .collect()
}

fn safety_props<S: Semiring>(seed: u64) {
    let xs = common::guarded_strings(2, 6);
    let opts = VerifyOptions::default();
    let mut r = common::rng(seed ^ 0xabc);
    for a in policies::<S>(80, seed) {
        let bound = common::elem::<S>(&mut r);
        let total = total_weight(&a, &opts).unwrap();
        let v = check_safety(&a, &bound, &opts).unwrap();
        assert_eq!(v.kind == VerdictKind::Safe, S::leq(&total, &bound));
        match &v.witness {
            None => {
                for x in &xs {
                    assert!(S::leq(&a.accept_weight(x), &bound));
                }
            }
            Some(w) => {
                let got = a.accept_weight(&w.guarded_string);
                assert!(!S::leq(&got, &bound));
                assert_eq!(S::wrap(got), w.weight);
                let (pi, h) = gs_to_io(&w.guarded_string);
                assert_eq!(S::wrap(eval_weight(&a, pi, &h)), w.weight);
            }
        }
    }
}

fn reach_props<S: Semiring>(seed: u64) {
    let xs = common::guarded_strings(2, 6);
    let opts = VerifyOptions::default();
    let mut r = common::rng(seed ^ 0xdef);
    for a in policies::<S>(80, seed) {
        let bound = common::elem::<S>(&mut r);
        let v = check_reachability(&a, &bound, &opts).unwrap();
        // Only strings carried by some run count, so 0̄ is not met by silence.
        let any = xs.iter().any(|x| {
            let w = a.accept_weight(x);
            !S::is_zero(&w) && S::leq(&bound, &w)
        });
        match &v.witness {
            None => {
                assert_eq!(v.kind, VerdictKind::Unreachable);
                assert!(!any, "{:?}: bound {} reached but none reported", S::KIND, S::display(&bound));
            }
            Some(w) => {
                assert_eq!(v.kind, VerdictKind::Reachable);
                let (pi, h) = gs_to_io(&w.guarded_string);
                let got = eval_weight(&a, pi, &h);
                assert!(S::leq(&bound, &got));
                assert_eq!(S::wrap(got), w.weight);
            }
        }
    }
}

#[test]
fn safety_verdicts_and_witnesses() {
    for k in SAFETY {
        with_semiring!(k, S => safety_props::<S>(31));
    }
}

#[test]
fn reachability_verdicts_and_witnesses() {
    for k in REACH {
        with_semiring!(k, S => reach_props::<S>(32));
    }
}

/// Removing a loop from a run never makes it lighter.
fn cycle_removal<S: Semiring>(seed: u64) {
    let mut r = common::rng(seed);
    let mut checked = 0;
    for a in policies::<S>(150, seed) {
        let starts: Vec<usize> = (0..a.state_count()).filter(|&q| !S::is_zero(a.init(q))).collect();
        for _ in 0..10 {
            let Some(&q0) = starts.choose(&mut r) else { break };
            let mut run = Run { states: vec![q0], packets: vec![r.gen_range(0..2)] };
            for _ in 0..8 {
                let (q, c) = (*run.states.last().unwrap(), *run.packets.last().unwrap());
                let steps: Vec<(usize, u32)> = a
                    .transitions(q)
                    .iter()
                    .flat_map(|(t, rel)| rel.row(c).iter().map(move |(_, b, _)| (*t, *b)))
                    .collect();
                let Some(&(t, b)) = steps.choose(&mut r) else { break };
                run.states.push(t);
                run.packets.push(b);
            }
            let k = run.states.len() - 1;
            let outs = a.output(run.states[k]).row(run.packets[k]).to_vec();
            let Some(&(_, last, _)) = outs.choose(&mut r) else { continue };
            run.packets.push(last);
            let full = run_total(&a, &run).unwrap();
            for i in 0..=k {
                for j in i + 1..=k {
                    if (run.states[i], run.packets[i]) != (run.states[j], run.packets[j]) {
                        continue;
                    }
                    let cut = Run {
                        states: [&run.states[..i], &run.states[j..]].concat(),
                        packets: [&run.packets[..i], &run.packets[j..]].concat(),
                    };
                    assert!(S::leq(&full, &run_total(&a, &cut).unwrap()));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn loops_never_help_reachability() {
    for k in REACH {
        with_semiring!(k, S => cycle_removal::<S>(33));
    }
}

#[test]
fn cycle_free_runs_account_for_reach_weight() {
    let opts = VerifyOptions::default();
    for a in policies::<wnetkat::semiring::Tropical>(60, 34) {
        let runs = enumerate_cycle_free_runs(&a, 100_000).unwrap();
        for run in &runs {
            let w = run_total(&a, run).unwrap();
            if wnetkat::semiring::Tropical::is_zero(&w) {
                continue;
            }
            let v = check_reachability(&a, &w, &opts).unwrap();
            assert_eq!(v.kind, VerdictKind::Reachable);
        }
    }
}

#[test]
fn capabilities_gate_the_procedures() {
    let opts = VerifyOptions::default();
    for k in SemiringKind::ALL {
        let caps = k.capabilities();
        with_semiring!(k, S => {
            let a = &policies::<S>(1, 35)[0];
            let safe = check_safety(a, &S::one(), &opts);
            let reach = check_reachability(a, &S::one(), &opts);
            assert_eq!(safe.is_ok(), caps.safety_capable, "{k}");
            assert_eq!(reach.is_ok(), caps.reach_capable, "{k}");
            if let Err(e) = safe {
                assert!(matches!(e, WnkError::Capability(_)));
            }
        });
    }
}

#[test]
fn search_limits_are_resource_errors() {
    let s = common::schema(1, 2);
    let h = wnetkat::SemiringHandle::new(SemiringKind::Arctic);
    let p = wnetkat::netcore::parse_policy("(f0:=0 + f0:=1 ; dup)* ; ⟨1⟩⊙ dup", &s, h).unwrap();
    let a = thompson::<wnetkat::semiring::Arctic>(&p, &s, CompileOptions::default()).unwrap();
    let tight = VerifyOptions { max_dups: 0, ..VerifyOptions::default() };
    let bound = wnetkat::semiring::Arctic::parse("0").unwrap();
    match check_safety(&a, &bound, &tight) {
        Err(e) => assert_eq!(e.exit_code(), 3, "{e}"),
        Ok(v) => assert!(v.witness.is_some()),
    }
}
