//! Gaussian elimination of invertible entries in a closed complex.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::complex::GradedComplex;
use crate::frobenius::{Mono, Q};

/// A reduced complex with the images of some tracked chains. Tracked chains
/// are specialized to `t = 1`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub complex: GradedComplex,
    pub chains: Vec<BTreeMap<usize, Q>>,
}

struct Work {
    out: Vec<BTreeMap<usize, Mono>>,
    inn: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    chains: Vec<BTreeMap<usize, Q>>,
}

impl Work {
    fn eliminate(&mut self, b1: usize, b2: usize) {
        let piv = self.out[b1][&b2];
        debug_assert_eq!(piv.k, 0);
        let inv = Q::one() / piv.coef;
        let sources: Vec<usize> = self.inn[b2].iter().copied().filter(|&x| x != b1).collect();
        let targets: Vec<(usize, Mono)> =
            self.out[b1].iter().filter(|(&y, _)| y != b2).map(|(&y, &m)| (y, m)).collect();
        for &x in &sources {
            let a = self.out[x][&b2];
            for &(y, bb) in &targets {
                let delta = Mono::new(-(a.coef * bb.coef * inv), a.k + bb.k);
                add_entry(&mut self.out, &mut self.inn, x, y, delta);
            }
        }
        for ch in self.chains.iter_mut() {
            if let Some(&v) = ch.get(&b2) {
                for &(y, bb) in &targets {
                    let e = ch.entry(y).or_insert_with(Q::zero);
                    *e -= v * bb.coef * inv;
                    if e.is_zero() {
                        ch.remove(&y);
                    }
                }
            }
            ch.remove(&b1);
            ch.remove(&b2);
        }
        for b in [b1, b2] {
            let outs: Vec<usize> = self.out[b].keys().copied().collect();
            for y in outs {
                self.inn[y].remove(&b);
            }
            self.out[b].clear();
            let ins: Vec<usize> = self.inn[b].iter().copied().collect();
            for x in ins {
                self.out[x].remove(&b);
            }
            self.inn[b].clear();
            self.alive[b] = false;
        }
    }
}

fn add_entry(out: &mut [BTreeMap<usize, Mono>], inn: &mut [BTreeSet<usize>], x: usize, y: usize, m: Mono) {
    if m.coef.is_zero() {
        return;
    }
    match out[x].get_mut(&y) {
        Some(e) => {
            assert_eq!(e.k, m.k, "inhomogeneous update {x}->{y}");
            e.coef += m.coef;
            if e.coef.is_zero() {
                out[x].remove(&y);
                inn[y].remove(&x);
            }
        }
        None => {
            out[x].insert(y, m);
            inn[y].insert(x);
        }
    }
}

/// Cancels every entry `c t^0` until none is left. The tracked chains
/// (given at `t = 1`) are carried along the homotopy equivalence.
pub fn scan_reduce(c: &GradedComplex, chains: &[BTreeMap<usize, Q>]) -> Reduced {
    let n = c.len();
    let mut w = Work {
        out: vec![BTreeMap::new(); n],
        inn: vec![BTreeSet::new(); n],
        alive: vec![true; n],
        chains: chains.to_vec(),
    };
    for (s, row) in c.diff.iter().enumerate() {
        for &(t, m) in row {
            add_entry(&mut w.out, &mut w.inn, s, t, m);
        }
    }
    loop {
        let mut any = false;
        for b1 in 0..n {
            while w.alive[b1] {
                let best = w.out[b1]
                    .iter()
                    .filter(|(_, m)| m.k == 0)
                    .min_by_key(|(&y, m)| (!(m.coef.abs() == Q::one()), w.inn[y].len(), y))
                    .map(|(&y, _)| y);
                match best {
                    Some(b2) => {
                        w.eliminate(b1, b2);
                        any = true;
                    }
                    None => break,
                }
            }
        }
        if !any {
            break;
        }
    }
    let mut newid = vec![usize::MAX; n];
    let mut out = GradedComplex::new();
    for i in 0..n {
        if w.alive[i] {
            let g = &c.gens[i];
            newid[i] = out.add_gen(g.h, g.q, g.id.clone());
        }
    }
    for i in 0..n {
        if w.alive[i] {
            out.diff[newid[i]] = w.out[i].iter().map(|(&t, &m)| (newid[t], m)).collect();
        }
    }
    let chains = w
        .chains
        .iter()
        .map(|ch| ch.iter().map(|(&g, &v)| (newid[g], v)).collect())
        .collect();
    Reduced { complex: out, chains }
}
