//! Finitely supported weightings `X → S` and their monad structure.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use crate::semiring::Semiring;

/// A map from outcomes to semiring weights that never stores `0̄`.
pub struct Weighting<S: Semiring, X: Ord> {
    map: BTreeMap<X, S::Elem>,
    _s: PhantomData<S>,
}

impl<S: Semiring, X: Ord + Clone> Clone for Weighting<S, X> {
    fn clone(&self) -> Self {
        Weighting { map: self.map.clone(), _s: PhantomData }
    }
}

impl<S: Semiring, X: Ord> PartialEq for Weighting<S, X> {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl<S: Semiring, X: Ord> Eq for Weighting<S, X> {}

impl<S: Semiring, X: Ord + fmt::Debug> fmt::Debug for Weighting<S, X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter().map(|(k, v)| (k, S::format(v)))).finish()
    }
}

impl<S: Semiring, X: Ord> Default for Weighting<S, X> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<S: Semiring, X: Ord> Weighting<S, X> {
    /// The weighting with empty support (`λx.0̄`).
    pub fn empty() -> Self {
        Weighting { map: BTreeMap::new(), _s: PhantomData }
    }

    /// `η(x)`
    pub fn unit(x: X) -> Self {
        let mut w = Self::empty();
        w.map.insert(x, S::one());
        w
    }

    /// Adds `r` to the weight of `x`.
    pub fn insert(&mut self, x: X, r: S::Elem) {
        if S::is_zero(&r) {
            return;
        }
        match self.map.get_mut(&x) {
            Some(cur) => {
                let s = S::add(cur, &r);
                if S::is_zero(&s) {
                    self.map.remove(&x);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.map.insert(x, r);
            }
        }
    }

    pub fn at(&self, x: &X) -> S::Elem {
        self.map.get(x).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &X> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&X, &S::Elem)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `|m| = Σ_x m(x)`
    pub fn mass(&self) -> S::Elem {
        self.map.values().fold(S::zero(), |acc, v| S::add(&acc, v))
    }

    /// `m >>= f`
    pub fn bind<Y: Ord>(&self, mut f: impl FnMut(&X) -> Weighting<S, Y>) -> Weighting<S, Y> {
        let mut out = Weighting::empty();
        for (x, r) in &self.map {
            for (y, s) in f(x).map {
                out.insert(y, S::mul(r, &s));
            }
        }
        out
    }

    /// Pointwise `⊕`.
    pub fn add(&self, other: &Self) -> Self
    where
        X: Clone,
    {
        let mut out = self.clone();
        for (x, r) in &other.map {
            out.insert(x.clone(), r.clone());
        }
        out
    }

    /// `λx. r ⊗ m(x)`
    pub fn scale_left(&self, r: &S::Elem) -> Self
    where
        X: Clone,
    {
        self.map_weights(|v| S::mul(r, v))
    }

    /// `λx. m(x) ⊗ r`
    pub fn scale_right(&self, r: &S::Elem) -> Self
    where
        X: Clone,
    {
        self.map_weights(|v| S::mul(v, r))
    }

    fn map_weights(&self, f: impl Fn(&S::Elem) -> S::Elem) -> Self
    where
        X: Clone,
    {
        let mut out = Self::empty();
        for (x, v) in &self.map {
            out.insert(x.clone(), f(v));
        }
        out
    }

    /// Sorted `outcome ↦ weight` lines.
    pub fn render(&self, show: impl Fn(&X) -> String) -> String {
        self.map.iter().map(|(x, v)| format!("{} ↦ {}\n", show(x), S::format(v))).collect()
    }
}

impl<S: Semiring, X: Ord> FromIterator<(X, S::Elem)> for Weighting<S, X> {
    fn from_iter<I: IntoIterator<Item = (X, S::Elem)>>(iter: I) -> Self {
        let mut w = Self::empty();
        for (x, r) in iter {
            w.insert(x, r);
        }
        w
    }
}

pub fn unit<S: Semiring, X: Ord>(x: X) -> Weighting<S, X> {
    Weighting::unit(x)
}

pub fn bind<S: Semiring, X: Ord, Y: Ord>(m: &Weighting<S, X>, f: impl FnMut(&X) -> Weighting<S, Y>) -> Weighting<S, Y> {
    m.bind(f)
}

pub fn w_add<S: Semiring, X: Ord + Clone>(a: &Weighting<S, X>, b: &Weighting<S, X>) -> Weighting<S, X> {
    a.add(b)
}

pub fn w_scale_left<S: Semiring, X: Ord + Clone>(r: &S::Elem, m: &Weighting<S, X>) -> Weighting<S, X> {
    m.scale_left(r)
}

pub fn w_scale_right<S: Semiring, X: Ord + Clone>(m: &Weighting<S, X>, r: &S::Elem) -> Weighting<S, X> {
    m.scale_right(r)
}

pub fn mass<S: Semiring, X: Ord>(m: &Weighting<S, X>) -> S::Elem {
    m.mass()
}
