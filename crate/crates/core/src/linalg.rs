//! Sparse exact linear algebra over `Q`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::frobenius::Q;

/// Echelon basis of a set of sparse vectors, keyed by leading index.
#[derive(Default, Debug, Clone)]
pub struct Echelon {
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut from = 0usize;
        loop {
            let next = v.range(from..).find(|(k, _)| self.pivots.contains_key(k)).map(|(&k, &c)| (k, c));
            let Some((lead, c)) = next else { return v };
            let p = &self.pivots[&lead];
            for (&j, &a) in p {
                let e = v.entry(j).or_insert_with(Q::zero);
                *e -= c * a;
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            from = lead + 1;
        }
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: BTreeMap<usize, Q>) -> bool {
        let r = self.reduce(v);
        let Some((&lead, &c)) = r.iter().next() else { return false };
        let inv = Q::one() / c;
        let r: BTreeMap<usize, Q> = r.into_iter().map(|(k, a)| (k, a * inv)).collect();
        self.pivots.insert(lead, r);
        true
    }
}

fn to_map(v: &[(usize, Q)]) -> BTreeMap<usize, Q> {
    let mut m = BTreeMap::new();
    for &(i, c) in v {
        let e = m.entry(i).or_insert_with(Q::zero);
        *e += c;
    }
    m.retain(|_, c: &mut Q| !c.is_zero());
    m
}

pub fn sparse_rank(rows: Vec<Vec<(usize, Q)>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(to_map(&r));
    }
    e.rank()
}

/// Whether `rhs` lies in the span of `cols`.
pub fn in_span(cols: &[Vec<(usize, Q)>], rhs: &[(usize, Q)]) -> bool {
    let mut e = Echelon::new();
    for c in cols {
        e.insert(to_map(c));
    }
    e.reduce(to_map(rhs)).is_empty()
}

/// Solves `sum_i x_i cols[i] = rhs`, returning one solution if any.
pub fn solve(cols: &[Vec<(usize, Q)>], rhs: &[(usize, Q)]) -> Option<Vec<Q>> {
    // augment each column with a unit tag far beyond the row indices
    let tag0 = cols.iter().flatten().chain(rhs.iter()).map(|e| e.0 + 1).max().unwrap_or(0);
    let mut e = Echelon::new();
    for (i, c) in cols.iter().enumerate() {
        let mut m = to_map(c);
        m.insert(tag0 + i, Q::one());
        e.insert(m);
    }
    let r = e.reduce(to_map(rhs));
    if r.keys().any(|&k| k < tag0) {
        return None;
    }
    // rhs - sum(tags) combination: remainder holds -x on the tags
    Some((0..cols.len()).map(|i| -r.get(&(tag0 + i)).copied().unwrap_or_else(Q::zero)).collect())
}
