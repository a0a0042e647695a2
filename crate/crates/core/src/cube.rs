//! The full cube of resolutions over `Q[t]`.

use std::collections::BTreeMap;

use crate::complex::GradedComplex;
use crate::error::{Error, Result};
use crate::frobenius::{comult, mult, qdeg, Mono, Q};
use crate::linkdiag::OrientedDiagram;

pub const DEFAULT_LIMIT: u128 = 1 << 22;

/// Cube complex together with the index of every (choice, labels) pair.
#[derive(Clone, Debug)]
pub struct Cube {
    pub complex: GradedComplex,
    /// first generator of each resolution; labels are added as an offset
    pub offset: Vec<usize>,
    pub n_circles: Vec<usize>,
    /// per resolution: circle of every edge
    pub edge_circle: Vec<Vec<usize>>,
}

impl Cube {
    pub fn index(&self, choice: u64, labels: u64) -> usize {
        self.offset[choice as usize] + labels as usize
    }
}

fn choice_vec(r: u64, n: usize) -> Vec<u8> {
    (0..n).map(|c| ((r >> c) & 1) as u8).collect()
}

pub fn build_cube(d: &OrientedDiagram, limit: u128) -> Result<Cube> {
    let n = d.n_crossings();
    if n >= 40 {
        return Err(Error::ResourceLimit { needed: 1u128 << n.min(127), limit });
    }
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let mut offset = vec![];
    let mut n_circles = vec![];
    let mut edge_circle = vec![];
    let mut total: u128 = 0;
    for r in 0..(1u64 << n) {
        let (ec, nc) = d.circle_partition(&choice_vec(r, n));
        offset.push(total as usize);
        total += 1u128 << nc;
        if total > limit {
            return Err(Error::ResourceLimit { needed: total.max(limit + 1), limit });
        }
        n_circles.push(nc);
        edge_circle.push(ec);
    }
    let mut cx = GradedComplex::new();
    for r in 0..(1u64 << n) {
        let nc = n_circles[r as usize];
        let w = r.count_ones() as i32;
        let bits: String = (0..n).map(|c| if (r >> c) & 1 == 1 { '1' } else { '0' }).collect();
        for lab in 0..(1u64 << nc) {
            let qsum: i32 = (0..nc).map(|i| qdeg(((lab >> i) & 1) as u8)).sum();
            let labs: String = (0..nc).map(|i| if (lab >> i) & 1 == 1 { 'x' } else { '1' }).collect();
            cx.add_gen(w - nm, qsum + w + np - 2 * nm, format!("{bits}:{labs}"));
        }
    }
    for r in 0..(1u64 << n) {
        for c in 0..n {
            if (r >> c) & 1 == 1 {
                continue;
            }
            let r2 = r | (1 << c);
            let sign = if (r & ((1 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            edge_map(d, &edge_circle, &n_circles, &offset, r, r2, c, sign, &mut cx);
        }
    }
    Ok(Cube { complex: cx, offset, n_circles, edge_circle })
}

#[allow(clippy::too_many_arguments)]
fn edge_map(
    d: &OrientedDiagram,
    edge_circle: &[Vec<usize>],
    n_circles: &[usize],
    offset: &[usize],
    r: u64,
    r2: u64,
    c: usize,
    sign: i64,
    cx: &mut GradedComplex,
) {
    let x = &d.crossings[c];
    let (e1, e2) = (edge_circle[r as usize].as_slice(), edge_circle[r2 as usize].as_slice());
    let (n1, n2) = (n_circles[r as usize], n_circles[r2 as usize]);
    let nstrand1 = n1 - d.loops.len();
    let nstrand2 = n2 - d.loops.len();
    // circle correspondence away from the crossing
    let mut map = vec![usize::MAX; n1];
    for e in 0..d.n_edges {
        map[e1[e]] = e2[e];
    }
    for l in 0..d.loops.len() {
        map[nstrand1 + l] = nstrand2 + l;
    }
    let u = x.under_in as usize;
    let slot_e = |k: usize| x.slots[(u + k) % 4];
    // in the 0-smoothing slots u,u+1 share an arc, as do u+2,u+3
    let a = e1[slot_e(0)];
    let b = e1[slot_e(2)];
    let coef = Q::from_integer(sign as i128);
    for lab in 0..(1u64 << n1) {
        let src = offset[r as usize] + lab as usize;
        let mut rest = 0u64;
        for i in 0..n1 {
            if i != a && i != b && (lab >> i) & 1 == 1 {
                rest |= 1 << map[i];
            }
        }
        if a != b {
            let m = map[a];
            let (l, k) = mult(((lab >> a) & 1) as u8, ((lab >> b) & 1) as u8);
            let tgt = offset[r2 as usize] + (rest | ((l as u64) << m)) as usize;
            cx.diff[src].push((tgt, Mono::new(coef, k)));
        } else {
            let (c1, c2) = (e2[slot_e(0)], e2[slot_e(1)]);
            debug_assert_ne!(c1, c2);
            for &((l1, l2), k) in comult(((lab >> a) & 1) as u8) {
                let tgt = offset[r2 as usize] + (rest | ((l1 as u64) << c1) | ((l2 as u64) << c2)) as usize;
                cx.diff[src].push((tgt, Mono::new(coef, k)));
            }
        }
    }
}

/// The generator labels of a cube index, for reporting.
pub fn describe(cube: &Cube, g: usize) -> (u64, u64) {
    let r = match cube.offset.binary_search(&g) {
        Ok(i) => {
            // several resolutions never share an offset: each has >= 1 generator
            i
        }
        Err(i) => i - 1,
    };
    (r as u64, (g - cube.offset[r]) as u64)
}

/// Group cube generators by resolution for inspection.
pub fn by_resolution(cube: &Cube) -> BTreeMap<u64, std::ops::Range<usize>> {
    let n = cube.offset.len();
    (0..n)
        .map(|r| {
            let end = if r + 1 < n { cube.offset[r + 1] } else { cube.complex.len() };
            (r as u64, cube.offset[r]..end)
        })
        .collect()
}
