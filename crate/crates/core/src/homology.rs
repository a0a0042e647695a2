//! Homology as a graded `Q[t]`-module, via Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::complex::GradedComplex;
use crate::error::{Error, Result};
use crate::frobenius::{Mono, Q};

/// Free summands at `(h, q)` and torsion summands `Q[t]/(t^k)` generated
/// at `(h, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub free: Vec<(i32, i32)>,
    pub torsion: Vec<(i32, i32, u32)>,
}

impl HomologySummary {
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    /// Dimensions of the `t = 0` specialization, per (h, q).
    pub fn dims_t0(&self) -> BTreeMap<(i32, i32), usize> {
        let mut m = BTreeMap::new();
        for &hq in &self.free {
            *m.entry(hq).or_insert(0) += 1;
        }
        for &(h, q, k) in &self.torsion {
            *m.entry((h, q)).or_insert(0) += 1;
            // the cokernel's partner sits one step down, 4k lower in q
            *m.entry((h - 1, q - 4 * k as i32)).or_insert(0) += 1;
        }
        m
    }

    /// Dimensions of the `t = 1` specialization, per h.
    pub fn dims_t1(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &(h, _) in &self.free {
            *m.entry(h).or_insert(0) += 1;
        }
        m
    }

    pub fn total_t0(&self) -> usize {
        self.free.len() + 2 * self.torsion.len()
    }

    fn sort(&mut self) {
        self.free.sort();
        self.torsion.sort();
    }
}

/// Sparse matrix of one differential `d^h`, columns = sources at `h`.
struct Mat {
    cols: BTreeMap<usize, BTreeMap<usize, Mono>>,
    rows: BTreeMap<usize, BTreeSet<usize>>,
}

impl Mat {
    fn new() -> Self {
        Mat { cols: BTreeMap::new(), rows: BTreeMap::new() }
    }

    fn add(&mut self, c: usize, r: usize, m: Mono) {
        if m.coef.is_zero() {
            return;
        }
        let col = self.cols.entry(c).or_default();
        match col.get_mut(&r) {
            Some(e) => {
                assert_eq!(e.k, m.k, "inhomogeneous entry");
                e.coef += m.coef;
                if e.coef.is_zero() {
                    col.remove(&r);
                    self.rows.get_mut(&r).unwrap().remove(&c);
                }
            }
            None => {
                col.insert(r, m);
                self.rows.entry(r).or_default().insert(c);
            }
        }
    }

    fn col(&self, c: usize) -> Vec<(usize, Mono)> {
        self.cols.get(&c).map(|m| m.iter().map(|(&r, &v)| (r, v)).collect()).unwrap_or_default()
    }

    fn row(&self, r: usize) -> Vec<usize> {
        self.rows.get(&r).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    fn remove_col(&mut self, c: usize) {
        if let Some(col) = self.cols.remove(&c) {
            for r in col.keys() {
                self.rows.get_mut(r).unwrap().remove(&c);
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        if let Some(row) = self.rows.remove(&r) {
            for c in row {
                self.cols.get_mut(&c).unwrap().remove(&r);
            }
        }
    }

    /// col[dst] += lambda * t^dk * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, lambda: Q, dk: u32) {
        for (r, m) in self.col(src) {
            self.add(dst, r, Mono::new(lambda * m.coef, m.k + dk));
        }
    }

    /// row[dst] += lambda * t^dk * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, lambda: Q, dk: u32) {
        for c in self.row(src) {
            let m = self.cols[&c][&src];
            self.add(c, dst, Mono::new(lambda * m.coef, m.k + dk));
        }
    }
}

/// Graded Smith normal form, degree by degree.
pub fn homology_qt(c: &GradedComplex) -> Result<HomologySummary> {
    c.check_homogeneous().map_err(Error::InconsistentModule)?;
    let Some((lo, hi)) = c.h_range() else { return Ok(HomologySummary::default()) };
    let mut mats: BTreeMap<i32, Mat> = (lo..=hi).map(|h| (h, Mat::new())).collect();
    for (s, row) in c.diff.iter().enumerate() {
        let h = c.gens[s].h;
        for &(t, m) in row {
            mats.get_mut(&h).unwrap().add(s, t, m);
        }
    }
    let mut paired: BTreeSet<usize> = BTreeSet::new();
    let mut torsion = vec![];
    for h in lo..=hi {
        let mut m = mats.remove(&h).unwrap();
        loop {
            // pivot: smallest power of t, then smallest (col, row)
            let piv = m
                .cols
                .iter()
                .flat_map(|(&cc, col)| col.iter().map(move |(&r, &v)| (v.k, cc, r, v)))
                .min_by_key(|&(k, cc, r, _)| (k, cc, r));
            let Some((k, pc, pr, pv)) = piv else { break };
            // clear the pivot column with row operations
            for (r, v) in m.col(pc) {
                if r == pr {
                    continue;
                }
                let lambda = -(v.coef / pv.coef);
                let dk = v.k - k;
                m.row_axpy(r, pr, lambda, dk);
                // mirror on d^{h+1}: column pr += -lambda t^dk column r
                if let Some(next) = mats.get_mut(&(h + 1)) {
                    next.col_axpy(pr, r, -lambda, dk);
                }
            }
            // clear the pivot row with column operations
            for cc in m.row(pr) {
                if cc == pc {
                    continue;
                }
                let v = m.cols[&cc][&pr];
                let lambda = -(v.coef / pv.coef);
                m.col_axpy(cc, pc, lambda, v.k - k);
            }
            m.remove_col(pc);
            m.remove_row(pr);
            paired.insert(pc);
            paired.insert(pr);
            // the pivot row's generator no longer maps anywhere
            if let Some(next) = mats.get_mut(&(h + 1)) {
                if next.cols.get(&pr).is_some_and(|c| !c.is_empty()) {
                    return Err(Error::InconsistentModule(format!(
                        "image generator {pr} has nonzero differential"
                    )));
                }
            }
            if k > 0 {
                let g = &c.gens[pr];
                torsion.push((g.h, g.q, k));
            }
        }
    }
    let free = (0..c.len()).filter(|i| !paired.contains(i)).map(|i| (c.gens[i].h, c.gens[i].q)).collect();
    let mut hs = HomologySummary { free, torsion };
    hs.sort();
    Ok(hs)
}
