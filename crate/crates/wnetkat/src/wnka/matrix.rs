//! Dense weighting matrices and sparse closure by strongly connected components.

use std::collections::BTreeMap;

use crate::error::{Result, WnkError};
use crate::semiring::Semiring;

/// A dense `rows × cols` matrix over `S`.
pub struct Matrix<S: Semiring> {
    rows: usize,
    cols: usize,
    data: Vec<S::Elem>,
}

impl<S: Semiring> Clone for Matrix<S> {
    fn clone(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.clone() }
    }
}

impl<S: Semiring> PartialEq for Matrix<S> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

impl<S: Semiring> std::fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| S::format(self.get(i, j))).collect()).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<S: Semiring> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| S::add(a, b)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(WnkError::Invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if S::is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if S::is_zero(b) {
                        continue;
                    }
                    let cur = &mut out.data[i * o.cols + j];
                    *cur = S::add(cur, &S::mul(a, b));
                }
            }
        }
        Ok(out)
    }

    fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    fn paste(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// `M* = Σₙ Mⁿ` by recursive 2×2 block decomposition.
    pub fn star(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(WnkError::Invalid("star of a non-square matrix".into()));
        }
        Ok(self.star_square())
    }

    fn star_square(&self) -> Self {
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        if n == 1 {
            return Matrix { rows: 1, cols: 1, data: vec![S::star(&self.data[0])] };
        }
        let k = n / 2;
        let a = self.block(0, k, 0, k);
        let b = self.block(0, k, k, n);
        let c = self.block(k, n, 0, k);
        let d = self.block(k, n, k, n);
        let ds = d.star_square();
        let bds = b.mul(&ds).expect("square blocks");
        let f = a.add(&bds.mul(&c).expect("square blocks"));
        let fs = f.star_square();
        let dscfs = ds.mul(&c).expect("square blocks").mul(&fs).expect("square blocks");
        let top_right = fs.mul(&bds).expect("square blocks");
        let bottom_right = ds.add(&dscfs.mul(&bds).expect("square blocks"));
        let mut out = Self::zeros(n, n);
        out.paste(0, 0, &fs);
        out.paste(0, k, &top_right);
        out.paste(k, 0, &dscfs);
        out.paste(k, k, &bottom_right);
        out
    }
}

pub fn mat_mul<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.mul(b)
}

pub fn mat_star<S: Semiring>(m: &Matrix<S>) -> Result<Matrix<S>> {
    m.star()
}

/// Strongly connected components of `0..n` in reverse topological order
/// (every component precedes the components that reach it).
pub(crate) fn tarjan(n: usize, succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, succs, i)) = call.last_mut() {
            let v = *v;
            if *i < succs.len() {
                let w = succs[*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let s = succ(w);
                    call.push((w, s, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((u, _, _)) = call.last() {
                    low[*u] = low[*u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Star of the sub-matrix of `rows` restricted to `comp`.
fn component_star<S: Semiring>(
    comp: &[usize],
    pos: &dyn Fn(usize) -> Option<usize>,
    rows: &dyn Fn(usize) -> Vec<(usize, S::Elem)>,
    max_scc: usize,
) -> Result<Matrix<S>> {
    if comp.len() > max_scc {
        return Err(WnkError::Resource(format!(
            "strongly connected component of {} nodes exceeds the cap of {max_scc}",
            comp.len()
        )));
    }
    let mut m = Matrix::<S>::zeros(comp.len(), comp.len());
    for (i, &u) in comp.iter().enumerate() {
        for (w, e) in rows(u) {
            if let Some(j) = pos(w) {
                let cur = m.get(i, j).clone();
                m.set(i, j, S::add(&cur, &e));
            }
        }
    }
    m.star()
}

/// Rows of `M*` for a sparse square matrix on `0..n`.
pub(crate) fn sparse_star<S: Semiring>(
    n: usize,
    rows: &[Vec<(usize, S::Elem)>],
    max_scc: usize,
) -> Result<Vec<Vec<(usize, S::Elem)>>> {
    let comps = tarjan(n, &|u| rows[u].iter().map(|(w, _)| *w).collect());
    let mut comp_of = vec![0usize; n];
    let mut pos_in = vec![0usize; n];
    for (ci, c) in comps.iter().enumerate() {
        for (i, &u) in c.iter().enumerate() {
            comp_of[u] = ci;
            pos_in[u] = i;
        }
    }
    let mut star: Vec<Vec<(usize, S::Elem)>> = vec![Vec::new(); n];
    for (ci, comp) in comps.iter().enumerate() {
        let cs = component_star::<S>(comp, &|w| (comp_of[w] == ci).then(|| pos_in[w]), &|u| rows[u].clone(), max_scc)?;
        // exits[v] = e_v ⊕ Σ_{w ∉ C} N[v][w] M*[w]
        let exits: Vec<BTreeMap<usize, S::Elem>> = comp
            .iter()
            .map(|&v| {
                let mut acc = BTreeMap::new();
                acc.insert(v, S::one());
                for (w, e) in &rows[v] {
                    if comp_of[*w] == ci {
                        continue;
                    }
                    for (x, s) in &star[*w] {
                        add_into::<S>(&mut acc, *x, S::mul(e, s));
                    }
                }
                acc
            })
            .collect();
        for (i, &u) in comp.iter().enumerate() {
            let mut acc = BTreeMap::new();
            for (j, exit) in exits.iter().enumerate() {
                let c = cs.get(i, j);
                if S::is_zero(c) {
                    continue;
                }
                for (x, s) in exit {
                    add_into::<S>(&mut acc, *x, S::mul(c, s));
                }
            }
            star[u] = acc.into_iter().filter(|(_, v)| !S::is_zero(v)).collect();
        }
    }
    Ok(star)
}

/// The least solution of `X = b ⊕ M·X`, i.e. `M*·b`, on the nodes reachable
/// from `roots`. Nodes are discovered through `succ`.
pub(crate) fn solve_star_vector<S: Semiring, K: Ord + Clone>(
    roots: Vec<K>,
    succ: &dyn Fn(&K) -> Vec<(K, S::Elem)>,
    b: &dyn Fn(&K) -> S::Elem,
    max_nodes: usize,
    max_scc: usize,
) -> Result<BTreeMap<K, S::Elem>> {
    let mut ids: BTreeMap<K, usize> = BTreeMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut edges: Vec<Vec<(usize, S::Elem)>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for r in roots {
        if !ids.contains_key(&r) {
            ids.insert(r.clone(), keys.len());
            keys.push(r.clone());
            edges.push(Vec::new());
            queue.push_back(r);
        }
    }
    while let Some(k) = queue.pop_front() {
        let id = ids[&k];
        let mut out = Vec::new();
        for (w, e) in succ(&k) {
            if S::is_zero(&e) {
                continue;
            }
            let wid = match ids.get(&w) {
                Some(&x) => x,
                None => {
                    if keys.len() >= max_nodes {
                        return Err(WnkError::Resource(format!(
                            "configuration graph exceeds the cap of {max_nodes} nodes"
                        )));
                    }
                    let x = keys.len();
                    ids.insert(w.clone(), x);
                    keys.push(w.clone());
                    edges.push(Vec::new());
                    queue.push_back(w);
                    x
                }
            };
            out.push((wid, e));
        }
        edges[id] = out;
    }
    let n = keys.len();
    let comps = tarjan(n, &|u| edges[u].iter().map(|(w, _)| *w).collect());
    let mut comp_of = vec![0usize; n];
    let mut pos_in = vec![0usize; n];
    for (ci, c) in comps.iter().enumerate() {
        for (i, &u) in c.iter().enumerate() {
            comp_of[u] = ci;
            pos_in[u] = i;
        }
    }
    let mut x: Vec<S::Elem> = vec![S::zero(); n];
    for (ci, comp) in comps.iter().enumerate() {
        let rhs: Vec<S::Elem> = comp
            .iter()
            .map(|&v| {
                let mut acc = b(&keys[v]);
                for (w, e) in &edges[v] {
                    if comp_of[*w] != ci {
                        acc = S::add(&acc, &S::mul(e, &x[*w]));
                    }
                }
                acc
            })
            .collect();
        let internal = comp.len() > 1 || edges[comp[0]].iter().any(|(w, _)| *w == comp[0]);
        if !internal {
            x[comp[0]] = rhs.into_iter().next().expect("singleton");
            continue;
        }
        let cs = component_star::<S>(comp, &|w| (comp_of[w] == ci).then(|| pos_in[w]), &|u| edges[u].clone(), max_scc)?;
        for (i, &u) in comp.iter().enumerate() {
            let mut acc = S::zero();
            for (j, r) in rhs.iter().enumerate() {
                acc = S::add(&acc, &S::mul(cs.get(i, j), r));
            }
            x[u] = acc;
        }
    }
    Ok(keys.into_iter().zip(x).collect())
}

fn add_into<S: Semiring>(acc: &mut BTreeMap<usize, S::Elem>, k: usize, v: S::Elem) {
    if S::is_zero(&v) {
        return;
    }
    match acc.get_mut(&k) {
        Some(cur) => *cur = S::add(cur, &v),
        None => {
            acc.insert(k, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Boolean, ExtInt, Tropical};

    #[test]
    fn zero_matrix_star_is_identity() {
        let z = Matrix::<Tropical>::zeros(3, 3);
        assert_eq!(z.star().unwrap(), Matrix::identity(3));
    }

    #[test]
    fn boolean_closure() {
        let m = Matrix::<Boolean>::from_rows(vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![false, false, false],
        ]);
        let s = m.star().unwrap();
        assert!(*s.get(0, 2) && *s.get(0, 0) && !*s.get(2, 0));
    }

    #[test]
    fn tropical_shortest_paths() {
        let f = ExtInt::Fin;
        let inf = ExtInt::PosInf;
        let m = Matrix::<Tropical>::from_rows(vec![vec![inf, f(4), f(1)], vec![inf, inf, inf], vec![inf, f(2), inf]]);
        let s = m.star().unwrap();
        assert_eq!(*s.get(0, 1), f(3));
        assert_eq!(*s.get(0, 0), f(0));
    }

    #[test]
    fn sparse_star_matches_dense() {
        let f = ExtInt::Fin;
        let rows = vec![vec![(1, f(2))], vec![(2, f(1)), (0, f(5))], vec![], vec![(3, f(1)), (0, f(1))]];
        let sparse = sparse_star::<Tropical>(4, &rows, 64).unwrap();
        let mut dense = Matrix::<Tropical>::zeros(4, 4);
        for (u, r) in rows.iter().enumerate() {
            for (w, e) in r {
                dense.set(u, *w, *e);
            }
        }
        let ds = dense.star().unwrap();
        for (u, row) in sparse.iter().enumerate() {
            for w in 0..4 {
                let sv = row.iter().find(|(x, _)| *x == w).map(|(_, e)| *e).unwrap_or(ExtInt::PosInf);
                assert_eq!(sv, *ds.get(u, w), "entry {u},{w}");
            }
        }
    }
}
