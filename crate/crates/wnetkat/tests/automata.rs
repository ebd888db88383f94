mod common;

use rand::Rng;
use wnetkat::guarded::GuardedString;
use wnetkat::netcore::{parse_policy, History};
use wnetkat::semiring::{ExtInt, ExtNat, NatInf, Semiring, SemiringHandle, SemiringKind, Tropical};
use wnetkat::verify::eval_weight;
use wnetkat::with_semiring;
use wnetkat::wnka::{thompson, unfold, CompileOptions};

#[test]
fn automaton_matches_denotation() {
    for k in SemiringKind::ALL {
        let st = with_semiring!(k, S => common::oracle_check::<S>(120, 21)).unwrap();
        assert_eq!(st.strings, st.exact + st.bounded);
    }
}

#[test]
fn reduction_preserves_weights() {
    for k in SemiringKind::ALL {
        with_semiring!(k, S => common::reduction_check::<S>(40, 22)).unwrap();
    }
}

#[test]
fn state_count_is_linear() {
    let s = common::schema(2, 2);
    let mut r = common::rng(23);
    for _ in 0..300 {
        let size = r.gen_range(1..=12);
        let p = common::random_policy(&s, SemiringKind::Tropical, &mut r, size, true);
        let a = thompson::<Tropical>(&p, &s, CompileOptions::default()).unwrap();
        assert_eq!(a.state_count(), p.primitive_count() + p.dup_count() + p.star_count(), "{p:?}");
    }
}

#[test]
fn weighted_dup_loop_counts_powers() {
    let s = common::schema(1, 1);
    let p = parse_policy("(⟨3⟩⊙ dup)*", &s, SemiringHandle::new(SemiringKind::NatInf)).unwrap();
    let a = thompson::<NatInf>(&p, &s, CompileOptions::default()).unwrap();
    for n in 0..=6u32 {
        let h = History::new(vec![0; n as usize + 1]).unwrap();
        assert_eq!(eval_weight(&a, 0, &h), ExtNat::Fin(3u32.pow(n).into()));
    }
}

#[test]
fn unfolding_agrees_with_the_automaton() {
    let s = common::schema(1, 3);
    let mut r = common::rng(24);
    let xs = common::guarded_strings(3, 2);
    for _ in 0..60 {
        let p = common::random_policy(&s, SemiringKind::Tropical, &mut r, 6, true);
        let a = thompson::<Tropical>(&p, &s, CompileOptions::default()).unwrap();
        let u = unfold(&a, 1 << 20).unwrap();
        for x in &xs {
            assert_eq!(u.accept(x), a.accept_weight(x), "{p:?} on {:?}", x.packets());
        }
    }
}

#[test]
fn nested_weights_multiply_along_runs() {
    let s = common::schema(1, 2);
    let h = SemiringHandle::new(SemiringKind::Tropical);
    let p = parse_policy("⟨2⟩⊙ f0:=1 ; dup ; ⟨5⟩⊙ (f0=1 ; dup)", &s, h).unwrap();
    let a = thompson::<Tropical>(&p, &s, CompileOptions::default()).unwrap();
    let x = GuardedString::new(vec![0, 1, 1, 1]).unwrap();
    assert_eq!(a.accept_weight(&x), ExtInt::Fin(7));
    let y = GuardedString::new(vec![0, 1, 0, 0]).unwrap();
    assert_eq!(a.accept_weight(&y), Tropical::zero());
}
