//! Reference semantics: exact for star-free policies, approximant-based otherwise.

use crate::error::{Result, WnkError};
use crate::netcore::{eval_pred_id, FieldSchema, History, Policy, Pred};
use crate::semiring::Semiring;
use crate::weighting::Weighting;

/// `skip ⊕ p ⊕ p;p ⊕ …` with `count` summands, `p⁰ = skip`, `pⁱ⁺¹ = p;pⁱ`.
fn power_sum(p: &Policy, count: usize) -> Policy {
    let mut terms = Vec::with_capacity(count);
    let mut pow = Policy::skip();
    for i in 0..count {
        if i > 0 {
            pow = if i == 1 { p.clone() } else { Policy::seq(p.clone(), pow) };
        }
        terms.push(pow.clone());
    }
    Policy::sum(terms)
}

/// `NFOLD[0,t] = ¬t`, `NFOLD[n+1,t] = if t then p;NFOLD[n,t] else skip`.
fn nfold_guarded(t: &Pred, p: &Policy, n: usize) -> Policy {
    let mut acc = Policy::Filter(Pred::not(t.clone()));
    for _ in 0..n {
        acc = Policy::if_then_else(t.clone(), Policy::seq(p.clone(), acc), Policy::skip());
    }
    acc
}

/// The `n`-th approximant: every iteration `p*` becomes `Σ_{i=0}^{n} (p↓n)ⁱ`.
/// Loops of the shape `(t;p)*;¬t` use the guarded unrolling instead, which
/// denotes the same weighting.
pub fn approximant(p: &Policy, n: usize) -> Policy {
    if let Some((t, body)) = p.as_while() {
        return nfold_guarded(t, &approximant(body, n), n);
    }
    match p {
        Policy::Filter(_) | Policy::Assign(..) | Policy::Dup => p.clone(),
        Policy::Seq(a, b) => Policy::seq(approximant(a, n), approximant(b, n)),
        Policy::Choice(a, b) => Policy::choice(approximant(a, n), approximant(b, n)),
        Policy::Weigh(r, a) => Policy::weigh(r.clone(), approximant(a, n)),
        Policy::Star(a) => power_sum(&approximant(a, n), n + 1),
    }
}

pub(crate) fn check_weights<S: Semiring>(p: &Policy) -> Result<()> {
    let mut bad = None;
    p.for_each_weight(&mut |r| {
        if bad.is_none() {
            bad = S::unwrap(r).err();
        }
    });
    bad.map_or(Ok(()), |e| Err(WnkError::Algebra(e)))
}

fn eval<S: Semiring>(p: &Policy, depth: usize, schema: &FieldSchema, h: &History) -> Weighting<S, History> {
    match p {
        Policy::Filter(t) => {
            if eval_pred_id(schema, t, h.head()) {
                Weighting::unit(h.clone())
            } else {
                Weighting::empty()
            }
        }
        Policy::Assign(f, v) => Weighting::unit(h.with_head(schema.set(h.head(), *f, *v))),
        Policy::Dup => Weighting::unit(h.dup()),
        Policy::Seq(a, b) => eval::<S>(a, depth, schema, h).bind(|h2| eval::<S>(b, depth, schema, h2)),
        Policy::Weigh(r, a) => eval::<S>(a, depth, schema, h).scale_left(&S::unwrap(r).expect("weights checked")),
        Policy::Choice(a, b) => eval::<S>(a, depth, schema, h).add(&eval::<S>(b, depth, schema, h)),
        Policy::Star(a) => {
            let mut layer = Weighting::unit(h.clone());
            let mut total = layer.clone();
            for _ in 0..depth {
                layer = layer.bind(|h2| eval::<S>(a, depth, schema, h2));
                if layer.is_empty() {
                    break;
                }
                total = total.add(&layer);
            }
            total
        }
    }
}

/// `⟦p⟧(h)` for a policy without iteration.
pub fn eval_star_free<S: Semiring>(p: &Policy, schema: &FieldSchema, h: &History) -> Result<Weighting<S, History>> {
    if !p.is_star_free() {
        return Err(WnkError::Invalid("eval_star_free needs a policy without `*`".into()));
    }
    check_weights::<S>(p)?;
    Ok(eval::<S>(p, 0, schema, h))
}

/// `⟦p↓n⟧(h)`.
pub fn eval_approx<S: Semiring>(
    p: &Policy,
    n: usize,
    schema: &FieldSchema,
    h: &History,
) -> Result<Weighting<S, History>> {
    check_weights::<S>(p)?;
    Ok(eval::<S>(p, n, schema, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::parse_policy;
    use crate::semiring::{Arctic, ExtInt, ExtNat, NatInf, SemiringHandle, SemiringKind};

    fn schema() -> FieldSchema {
        FieldSchema::new(vec![("f".into(), vec!["0".into(), "1".into(), "2".into()])]).unwrap()
    }

    #[test]
    fn arctic_choice_resolves_by_max() {
        let s = schema();
        let h = SemiringHandle::new(SemiringKind::Arctic);
        let p = parse_policy("⟨3⟩⊙ f:=1 + ⟨5⟩⊙ f:=2", &s, h).unwrap();
        let w = eval_star_free::<Arctic>(&p, &s, &History::single(0)).unwrap();
        assert_eq!(w.at(&History::single(1)), ExtInt::Fin(3));
        assert_eq!(w.at(&History::single(2)), ExtInt::Fin(5));
        let q = parse_policy("⟨3⟩⊙ f:=1 + ⟨5⟩⊙ f:=1", &s, h).unwrap();
        let w = eval_star_free::<Arctic>(&q, &s, &History::single(0)).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.at(&History::single(1)), ExtInt::Fin(5));
    }

    #[test]
    fn star_of_weighted_dup() {
        let s = schema();
        let p = parse_policy("(⟨3⟩⊙ dup)*", &s, SemiringHandle::new(SemiringKind::NatInf)).unwrap();
        let w = eval_approx::<NatInf>(&p, 2, &s, &History::single(0)).unwrap();
        assert_eq!(w.at(&History::new(vec![0, 0, 0]).unwrap()), ExtNat::Fin(9u32.into()));
        let w0 = eval_approx::<NatInf>(&p, 0, &s, &History::single(0)).unwrap();
        assert_eq!(w0, Weighting::unit(History::single(0)));
    }

    #[test]
    fn syntactic_approximant_agrees() {
        let s = schema();
        let h = SemiringHandle::new(SemiringKind::NatInf);
        for src in
            ["(⟨2⟩⊙ f:=1 + f:=2 ; dup)*", "while f!=2 do (f=0 ; f:=1 + f=1 ; ⟨3⟩⊙ f:=2 ; dup)", "((dup)* ; f:=0)*"]
        {
            let p = parse_policy(src, &s, h).unwrap();
            for n in 0..4 {
                let a = approximant(&p, n);
                assert!(a.is_star_free());
                for pk in s.packets() {
                    let hist = History::single(pk);
                    assert_eq!(
                        eval_star_free::<NatInf>(&a, &s, &hist).unwrap(),
                        eval_approx::<NatInf>(&p, n, &s, &hist).unwrap(),
                        "{src} at depth {n}"
                    );
                }
            }
        }
    }
}
