//! The rank-two Frobenius algebra `A = Q[t][x]/(x^2 - t)`.
//!
//! Basis labels are bits: `0` is `1` (q = +1), `1` is `x` (q = -1).
//! An element of `A^{⊗n}` is a sparse map from (label mask, power of t)
//! to a rational coefficient.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

pub type Q = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// A monomial `coef * t^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mono {
    #[serde(serialize_with = "ser_q")]
    pub coef: Q,
    pub k: u32,
}

pub fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Mono {
    pub fn new(coef: Q, k: u32) -> Self {
        Mono { coef, k }
    }

    /// Value at `t = v`.
    pub fn eval(&self, v: Q) -> Q {
        let mut r = self.coef;
        for _ in 0..self.k {
            r *= v;
        }
        r
    }
}

/// Element of `A^{⊗n}` over `Q[t]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    pub n: usize,
    pub terms: BTreeMap<(u64, u32), Q>,
}

impl Tensor {
    pub fn zero(n: usize) -> Self {
        Tensor { n, terms: BTreeMap::new() }
    }

    pub fn basis(n: usize, mask: u64) -> Self {
        let mut t = Self::zero(n);
        t.add(mask, 0, Q::one());
        t
    }

    pub fn add(&mut self, mask: u64, k: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((mask, k)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(mask, k));
        }
    }

    pub fn scale(&self, c: Q) -> Self {
        let mut r = Self::zero(self.n);
        for (&(m, k), &v) in &self.terms {
            r.add(m, k, v * c);
        }
        r
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&(m, k), &v) in &other.terms {
            r.add(m, k, v);
        }
        r
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.n + other.n);
        for (&(m1, k1), &v1) in &self.terms {
            for (&(m2, k2), &v2) in &other.terms {
                r.add(m1 | (m2 << self.n), k1 + k2, v1 * v2);
            }
        }
        r
    }

    /// Applies a map `A^{⊗a} -> A^{⊗b}` to the `a` factors starting at
    /// `pos`, leaving the others alone.
    pub fn apply_at(&self, pos: usize, a: usize, b: usize, f: impl Fn(u64) -> Tensor) -> Tensor {
        let mut r = Self::zero(self.n - a + b);
        let low = (1u64 << pos) - 1;
        for (&(m, k), &v) in &self.terms {
            let head = m & low;
            let mid = (m >> pos) & ((1u64 << a) - 1);
            let tail = m >> (pos + a);
            for (&(m2, k2), &v2) in &f(mid).terms {
                r.add(head | (m2 << pos) | (tail << (pos + b)), k + k2, v * v2);
            }
        }
        r
    }
}

/// Product of two basis labels: `(label, power of t)`.
pub fn mult(a: u8, b: u8) -> (u8, u32) {
    match (a, b) {
        (0, 0) => (0, 0),
        (0, 1) | (1, 0) => (1, 0),
        _ => (0, 1),
    }
}

/// Coproduct of a basis label as a list of `((l1, l2), power of t)`.
pub fn comult(a: u8) -> &'static [((u8, u8), u32)] {
    if a == 0 {
        &[((0, 1), 0), ((1, 0), 0)]
    } else {
        &[((1, 1), 0), ((0, 0), 1)]
    }
}

/// Counit on a basis label.
pub fn counit(a: u8) -> Q {
    if a == 1 {
        Q::one()
    } else {
        Q::zero()
    }
}

/// q-degree of a basis label.
pub fn qdeg(a: u8) -> i32 {
    if a == 0 {
        1
    } else {
        -1
    }
}

pub fn m_map(mask: u64) -> Tensor {
    let (l, k) = mult((mask & 1) as u8, ((mask >> 1) & 1) as u8);
    let mut t = Tensor::zero(1);
    t.add(l as u64, k, Q::one());
    t
}

pub fn delta_map(mask: u64) -> Tensor {
    let mut t = Tensor::zero(2);
    for &((l1, l2), k) in comult(mask as u8) {
        t.add(l1 as u64 | ((l2 as u64) << 1), k, Q::one());
    }
    t
}

pub fn eps_map(mask: u64) -> Tensor {
    let mut t = Tensor::zero(0);
    t.add(0, 0, counit(mask as u8));
    t
}

pub fn id_map(mask: u64) -> Tensor {
    Tensor::basis(1, mask)
}

/// Iterated coproduct of `x^n` into `k` factors, as `(label mask, power of
/// t)` pairs; `k = 0` gives the counit.
pub fn iterated_coproduct(n: u32, k: u32) -> Vec<(u64, u32)> {
    let total = n as i64 + k as i64 - 1;
    if total < 0 {
        return vec![];
    }
    let mut out = vec![];
    for l in 0..(1u64 << k) {
        let w = l.count_ones() as i64;
        if w <= total && (total - w) % 2 == 0 {
            out.push((l, ((total - w) / 2) as u32));
        }
    }
    out
}

/// Symbolic check of the Frobenius algebra axioms on all basis elements.
pub fn check_axioms() -> std::result::Result<(), String> {
    for a in 0..8u64 {
        let x = Tensor::basis(3, a);
        // associativity
        let l = x.apply_at(0, 2, 1, m_map).apply_at(0, 2, 1, m_map);
        let r = x.apply_at(1, 2, 1, m_map).apply_at(0, 2, 1, m_map);
        if l != r {
            return Err(format!("m not associative on {a:03b}"));
        }
    }
    for a in 0..2u64 {
        let x = Tensor::basis(1, a);
        let l = x.apply_at(0, 1, 2, delta_map).apply_at(0, 1, 2, delta_map);
        let r = x.apply_at(0, 1, 2, delta_map).apply_at(1, 1, 2, delta_map);
        if l != r {
            return Err(format!("Δ not coassociative on {a}"));
        }
        // counit
        let c = x.apply_at(0, 1, 2, delta_map).apply_at(0, 1, 0, eps_map);
        if c != x {
            return Err(format!("counit fails on {a}"));
        }
    }
    for a in 0..4u64 {
        let x = Tensor::basis(2, a);
        let dm = x.apply_at(0, 2, 1, m_map).apply_at(0, 1, 2, delta_map);
        let l = x.apply_at(1, 1, 2, delta_map).apply_at(0, 2, 1, m_map);
        let r = x.apply_at(0, 1, 2, delta_map).apply_at(1, 2, 1, m_map);
        if dm != l || dm != r {
            return Err(format!("Frobenius identity fails on {a:02b}"));
        }
        // nondegenerate pairing ε∘m with dual basis {x, 1}
        let pair = x.apply_at(0, 2, 1, m_map).apply_at(0, 1, 0, eps_map);
        let want = if a == 1 || a == 2 { Q::one() } else { Q::zero() };
        let got: Q = pair.terms.iter().filter(|(&(_, k), _)| k == 0).map(|(_, &v)| v).sum();
        if got != want {
            return Err(format!("pairing wrong on {a:02b}"));
        }
    }
    // handle operator m∘Δ is multiplication by 2x
    for a in 0..2u64 {
        let x = Tensor::basis(1, a);
        let h = x.apply_at(0, 1, 2, delta_map).apply_at(0, 2, 1, m_map);
        let mut want = Tensor::zero(1);
        let (l, k) = mult(a as u8, 1);
        want.add(l as u64, k, q(2));
        if h != want {
            return Err(format!("handle is not 2x on {a}"));
        }
    }
    // iterated coproduct formula agrees with repeated Δ
    for n in 0..4u32 {
        let mut xn = Tensor::zero(1);
        let (l, k) = (n % 2, n / 2);
        xn.add(l as u64, k, Q::one());
        let mut cur = xn;
        for k in 1..5u32 {
            let want: BTreeMap<(u64, u32), Q> =
                iterated_coproduct(n, k).into_iter().map(|(m, e)| ((m, e), Q::one())).collect();
            if cur.terms != want {
                return Err(format!("iterated coproduct mismatch n={n} k={k}"));
            }
            cur = cur.apply_at(0, 1, 2, delta_map);
        }
    }
    Ok(())
}
