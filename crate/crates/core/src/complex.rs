//! Finite chain complexes of free graded `Q[t]`-modules.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::frobenius::{Mono, Q};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gen {
    pub h: i32,
    pub q: i32,
    pub id: String,
}

/// Differential stored by source: `diff[s]` lists `(target, c t^k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedComplex {
    pub gens: Vec<Gen>,
    pub diff: Vec<Vec<(usize, Mono)>>,
}

/// A complex over `Q` whose generators keep their q-degree as a filtration.
#[derive(Clone, Debug, Default)]
pub struct FilteredComplex {
    pub gens: Vec<Gen>,
    pub diff: Vec<Vec<(usize, Q)>>,
}

impl GradedComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn add_gen(&mut self, h: i32, q: i32, id: impl Into<String>) -> usize {
        self.gens.push(Gen { h, q, id: id.into() });
        self.diff.push(vec![]);
        self.gens.len() - 1
    }

    pub fn h_range(&self) -> Option<(i32, i32)> {
        let lo = self.gens.iter().map(|g| g.h).min()?;
        let hi = self.gens.iter().map(|g| g.h).max()?;
        Some((lo, hi))
    }

    /// Checks h and q bookkeeping of every entry.
    pub fn check_homogeneous(&self) -> Result<(), String> {
        for (s, row) in self.diff.iter().enumerate() {
            for &(t, m) in row {
                let (gs, gt) = (&self.gens[s], &self.gens[t]);
                if gt.h != gs.h + 1 {
                    return Err(format!("entry {s}->{t} changes h by {}", gt.h - gs.h));
                }
                if gt.q != gs.q + 4 * m.k as i32 {
                    return Err(format!(
                        "entry {s}->{t} = {} t^{} is not homogeneous (q {} -> {})",
                        m.coef, m.k, gs.q, gt.q
                    ));
                }
                if m.coef.is_zero() {
                    return Err(format!("stored zero entry {s}->{t}"));
                }
            }
        }
        Ok(())
    }

    /// Verifies `d∘d = 0` exactly over `Q[t]`.
    pub fn check_d_squared(&self) -> Result<(), String> {
        for (s, row) in self.diff.iter().enumerate() {
            let mut acc: BTreeMap<usize, BTreeMap<u32, Q>> = BTreeMap::new();
            for &(m, a) in row {
                for &(t, b) in &self.diff[m] {
                    *acc.entry(t).or_default().entry(a.k + b.k).or_insert_with(Q::zero) += a.coef * b.coef;
                }
            }
            for (t, polys) in acc {
                if let Some((k, c)) = polys.iter().find(|(_, c)| !c.is_zero()) {
                    return Err(format!("d^2 nonzero from {s} to {t}: {c} t^{k}"));
                }
            }
        }
        Ok(())
    }

    pub fn n_entries(&self) -> usize {
        self.diff.iter().map(|r| r.len()).sum()
    }

    /// Line-based text export: `GEN h q id` and `DIF h src dst coeff t^k`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for g in &self.gens {
            let _ = writeln!(out, "GEN {} {} {}", g.h, g.q, g.id);
        }
        for (s, row) in self.diff.iter().enumerate() {
            let mut row = row.clone();
            row.sort_by_key(|e| e.0);
            for (t, m) in row {
                let _ = writeln!(
                    out,
                    "DIF {} {} {} {} t^{}",
                    self.gens[s].h, self.gens[s].id, self.gens[t].id, m.coef, m.k
                );
            }
        }
        out
    }

    /// Substitutes `t := value`.
    pub fn specialize_t(&self, value: Q) -> FilteredComplex {
        let diff = self
            .diff
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|&(t, m)| {
                        let v = m.eval(value);
                        (!v.is_zero()).then_some((t, v))
                    })
                    .collect()
            })
            .collect();
        FilteredComplex { gens: self.gens.clone(), diff }
    }

    /// Rank of the chain group in each (h, q).
    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut m = BTreeMap::new();
        for g in &self.gens {
            *m.entry((g.h, g.q)).or_insert(0) += 1;
        }
        m
    }
}

impl FilteredComplex {
    /// Homology dimension per homological degree, by exact rank computation.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut by_h: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            by_h.entry(g.h).or_default().push(i);
        }
        let mut rank_out: BTreeMap<i32, usize> = BTreeMap::new();
        for (&h, srcs) in &by_h {
            let rows: Vec<Vec<(usize, Q)>> = srcs.iter().map(|&s| self.diff[s].clone()).collect();
            rank_out.insert(h, linalg::sparse_rank(rows));
        }
        by_h.iter()
            .map(|(&h, srcs)| {
                let r_out = rank_out[&h];
                let r_in = rank_out.get(&(h - 1)).copied().unwrap_or(0);
                (h, srcs.len() - r_out - r_in)
            })
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Homology dimension per (h, q) when the differential preserves q
    /// (the `t = 0` specialization).
    pub fn bigraded_homology_dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut by_hq: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            by_hq.entry((g.h, g.q)).or_default().push(i);
        }
        let mut rank_out = BTreeMap::new();
        for (&hq, srcs) in &by_hq {
            let rows: Vec<Vec<(usize, Q)>> = srcs.iter().map(|&s| self.diff[s].clone()).collect();
            for row in &rows {
                for &(t, _) in row {
                    assert_eq!(self.gens[t].q, hq.1, "differential does not preserve q");
                }
            }
            rank_out.insert(hq, linalg::sparse_rank(rows));
        }
        by_hq
            .iter()
            .map(|(&(h, q), srcs)| {
                let r_in = rank_out.get(&(h - 1, q)).copied().unwrap_or(0);
                ((h, q), srcs.len() - rank_out[&(h, q)] - r_in)
            })
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Applies the differential to a chain given as `(gen, coef)` pairs.
    pub fn apply(&self, z: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (&s, &c) in z {
            for &(t, v) in &self.diff[s] {
                *out.entry(t).or_insert_with(Q::zero) += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn is_cycle(&self, z: &BTreeMap<usize, Q>) -> bool {
        self.apply(z).is_empty()
    }

    /// Largest `j` such that `z` is homologous to a chain supported on
    /// generators with `q >= j`. Returns `None` when `z` is a boundary.
    pub fn filtration_level(&self, z: &BTreeMap<usize, Q>) -> Option<i32> {
        let (&first, _) = z.iter().next()?;
        let h = self.gens[first].h;
        let prev: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gens[i].h == h - 1).collect();
        let here: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gens[i].h == h).collect();
        let mut levels: Vec<i32> = here.iter().map(|&i| self.gens[i].q).collect();
        levels.sort_unstable();
        levels.dedup();
        // columns: boundaries of the h-1 generators, projected below level j
        let bnd: Vec<Vec<(usize, Q)>> = prev.iter().map(|&p| self.diff[p].clone()).collect();
        let all: Vec<(usize, Q)> = z.iter().map(|(&g, &c)| (g, c)).collect();
        if linalg::in_span(&bnd, &all) {
            return None;
        }
        for &j in levels.iter().rev() {
            let below = |g: usize| self.gens[g].q < j;
            let cols: Vec<Vec<(usize, Q)>> =
                bnd.iter().map(|c| c.iter().filter(|e| below(e.0)).cloned().collect()).collect();
            let rhs: Vec<(usize, Q)> = all.iter().filter(|e| below(e.0)).cloned().collect();
            if linalg::in_span(&cols, &rhs) {
                return Some(j);
            }
        }
        unreachable!("the lowest level always succeeds")
    }
}

pub fn unit_chain(g: usize) -> BTreeMap<usize, Q> {
    BTreeMap::from([(g, Q::one())])
}
