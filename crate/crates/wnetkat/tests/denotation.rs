mod common;

use proptest::prelude::*;
use wnetkat::denotational::{approximant, eval_approx, eval_star_free};
use wnetkat::netcore::{reduce, History, Policy};
use wnetkat::semiring::{Arctic, NatInf, Semiring, SemiringHandle, SemiringKind, Tropical};
use wnetkat::with_semiring;

fn inputs(packets: u32) -> Vec<History> {
    let mut out: Vec<History> = (0..packets).map(History::single).collect();
    for a in 0..packets {
        for b in 0..packets {
            out.push(History::new(vec![a, b]).unwrap());
        }
    }
    out
}

fn power_sum(p: &Policy, count: usize) -> Policy {
    let mut terms = vec![Policy::skip()];
    let mut pow = Policy::skip();
    for _ in 1..count {
        pow = Policy::seq(p.clone(), pow);
        terms.push(pow.clone());
    }
    Policy::sum(terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn approximants_increase(seed in any::<u64>(), k in 0..SemiringKind::ALL.len()) {
        let kind = SemiringKind::ALL[k];
        let s = common::schema(2, 2);
        let p = common::random_policy(&s, kind, &mut common::rng(seed), 7, true);
        with_semiring!(kind, S => {
            for h in inputs(4) {
                for n in 0..4 {
                    let lo = eval_approx::<S>(&p, n, &s, &h).unwrap();
                    let hi = eval_approx::<S>(&p, n + 1, &s, &h).unwrap();
                    for (x, w) in lo.iter() {
                        prop_assert!(S::leq(w, &hi.at(x)), "{:?} at depth {}", p, n);
                    }
                }
            }
        });
    }

    #[test]
    fn evaluation_is_head_local(seed in any::<u64>()) {
        let s = common::schema(2, 2);
        let p = common::random_policy(&s, SemiringKind::NatInf, &mut common::rng(seed), 7, true);
        for pi in 0..4 {
            let short = eval_approx::<NatInf>(&p, 3, &s, &History::single(pi)).unwrap();
            for tail in 0..4 {
                let long = eval_approx::<NatInf>(&p, 3, &s, &History::new(vec![pi, tail]).unwrap()).unwrap();
                let moved: Vec<_> = short
                    .iter()
                    .map(|(h, w)| (History::new([h.packets(), &[tail]].concat()).unwrap(), w.clone()))
                    .collect();
                prop_assert_eq!(long.len(), moved.len());
                for (h, w) in moved {
                    prop_assert_eq!(long.at(&h), w);
                }
            }
        }
    }

    #[test]
    fn finite_unfolding(seed in any::<u64>(), n in 0usize..4) {
        let s = common::schema(2, 2);
        let p = common::random_policy(&s, SemiringKind::NatInf, &mut common::rng(seed), 5, false);
        let pn = approximant(&p, n);
        let unfolded = Policy::choice(Policy::skip(), Policy::seq(pn.clone(), power_sum(&pn, n + 1)));
        let direct = power_sum(&pn, n + 2);
        for h in inputs(4) {
            prop_assert_eq!(
                eval_star_free::<NatInf>(&unfolded, &s, &h).unwrap(),
                eval_star_free::<NatInf>(&direct, &s, &h).unwrap()
            );
        }
    }

    #[test]
    fn reduction_is_sound(seed in any::<u64>(), k in 0..SemiringKind::ALL.len()) {
        let kind = SemiringKind::ALL[k];
        let s = common::schema(1, 3);
        let p = common::random_policy(&s, kind, &mut common::rng(seed), 7, true);
        let q = reduce(&p, &s, SemiringHandle::new(kind)).unwrap().to_policy(&s);
        with_semiring!(kind, S => {
            for h in inputs(3) {
                for n in 0..=3 {
                    prop_assert_eq!(
                        eval_approx::<S>(&p, n, &s, &h).unwrap(),
                        eval_approx::<S>(&q, n, &s, &h).unwrap()
                    );
                }
            }
        });
    }
}

#[test]
fn guarded_loops_unroll_exactly() {
    let s = common::schema(1, 4);
    let h = SemiringHandle::new(SemiringKind::Arctic);
    let p = wnetkat::netcore::parse_policy(
        "while f0!=3 do (if f0=0 then f0:=1 else if f0=1 then f0:=2 else f0:=3) ; ⟨2⟩⊙ dup",
        &s,
        h,
    )
    .unwrap();
    let w = eval_approx::<Arctic>(&p, 3, &s, &History::single(0)).unwrap();
    assert_eq!(w.len(), 1);
    let (out, weight) = w.iter().next().unwrap();
    assert_eq!(out.packets(), &[3, 3, 2, 1]);
    assert_eq!(*weight, Arctic::parse("6").unwrap());
    assert!(eval_approx::<Arctic>(&p, 2, &s, &History::single(0)).unwrap().is_empty());
}

#[test]
fn star_free_rejects_iteration() {
    let s = common::schema(1, 2);
    let p = Policy::star(Policy::Dup);
    assert!(eval_star_free::<Tropical>(&p, &s, &History::single(0)).is_err());
}
