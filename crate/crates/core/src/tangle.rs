//! Scanning engine: builds the complex one crossing at a time as a complex
//! of crossingless tangles, delooping closed circles and cancelling every
//! invertible entry as soon as it appears.
//!
//! A morphism between two crossingless matchings `a` and `b` of the same
//! boundary points is a `Q[t]`-combination of dotted surfaces whose
//! components are discs, one per loop of `a ∪ b̄`. A term therefore is a
//! mask (dot on loop `i` iff bit `i`), a power of `t`, and a coefficient.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::complex::GradedComplex;
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::frobenius::{iterated_coproduct, Mono, Q};
use crate::linkdiag::OrientedDiagram;
use crate::reduce::Reduced;

pub type Match = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub mask: u64,
    pub texp: u32,
    pub coef: Q,
}

pub type Morph = Vec<Term>;

fn morph_add(m: &mut Morph, t: Term) {
    if t.coef.is_zero() {
        return;
    }
    match m.binary_search_by_key(&(t.mask, t.texp), |x| (x.mask, x.texp)) {
        Ok(i) => {
            m[i].coef += t.coef;
            if m[i].coef.is_zero() {
                m.remove(i);
            }
        }
        Err(i) => m.insert(i, t),
    }
}

fn at_t1(m: &Morph) -> Morph {
    let mut r = vec![];
    for t in m {
        morph_add(&mut r, Term { mask: t.mask, texp: 0, coef: t.coef });
    }
    r
}

/// Loop index of every point of `a ∪ b̄`, loops numbered by smallest point.
pub fn loops_of(a: &[u8], b: &[u8]) -> (Vec<u8>, usize) {
    let n = a.len();
    let mut lp = vec![u8::MAX; n];
    let mut k = 0u8;
    for p in 0..n {
        if lp[p] != u8::MAX {
            continue;
        }
        let mut cur = p;
        loop {
            lp[cur] = k;
            let x = a[cur] as usize;
            lp[x] = k;
            let y = b[x] as usize;
            if y == p {
                break;
            }
            cur = y;
        }
        k += 1;
    }
    (lp, k as usize)
}

#[derive(Clone, Debug)]
struct Comp {
    m1: u64,
    m2: u64,
    genus: u32,
    outs: Vec<u8>,
}

/// How two layers of discs glue into a surface, and which output loops
/// each component bounds.
#[derive(Clone, Debug)]
struct Glue {
    comps: Vec<Comp>,
}

impl Glue {
    /// `discs` = n1 + n2 discs, `joins` = pairs of glued discs (one per
    /// glued interval), `out_disc[i]` = a disc touching output loop `i`.
    fn new(n1: usize, n2: usize, joins: &[(usize, usize)], out_disc: &[usize]) -> Self {
        let mut dsu = Dsu::new(n1 + n2);
        for &(x, y) in joins {
            dsu.union(x, y);
        }
        let mut idx: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comps: Vec<Comp> = vec![];
        let mut chi: Vec<i64> = vec![];
        let mut comp_of = |d: usize, dsu: &mut Dsu, comps: &mut Vec<Comp>, chi: &mut Vec<i64>| -> usize {
            let r = dsu.find(d);
            let next = comps.len();
            *idx.entry(r).or_insert_with(|| {
                comps.push(Comp { m1: 0, m2: 0, genus: 0, outs: vec![] });
                chi.push(0);
                next
            })
        };
        for d in 0..n1 + n2 {
            let c = comp_of(d, &mut dsu, &mut comps, &mut chi);
            if d < n1 {
                comps[c].m1 |= 1 << d;
            } else {
                comps[c].m2 |= 1 << (d - n1);
            }
            chi[c] += 1;
        }
        for &(x, _) in joins {
            let c = comp_of(x, &mut dsu, &mut comps, &mut chi);
            chi[c] -= 1;
        }
        for (i, &d) in out_disc.iter().enumerate() {
            let c = comp_of(d, &mut dsu, &mut comps, &mut chi);
            comps[c].outs.push(i as u8);
        }
        for (c, comp) in comps.iter_mut().enumerate() {
            let g2 = 2 - chi[c] - comp.outs.len() as i64;
            assert!(g2 >= 0 && g2 % 2 == 0, "bad surface: chi {} with {} boundary loops", chi[c], comp.outs.len());
            comp.genus = (g2 / 2) as u32;
        }
        Glue { comps }
    }

    /// Composite of a term on the first layer with a term on the second,
    /// as `(output mask, t power, coefficient)`.
    fn apply(&self, f: &Term, g: &Term, out: &mut Vec<(u64, u32, Q)>) {
        let mut acc: Vec<(u64, u32, Q)> = vec![(0, f.texp + g.texp, f.coef * g.coef)];
        for c in &self.comps {
            let n = (f.mask & c.m1).count_ones() + (g.mask & c.m2).count_ones() + c.genus;
            let k = c.outs.len() as u32;
            let ex = iterated_coproduct(n, k);
            if ex.is_empty() {
                return;
            }
            let scale = Q::from_integer(1i128 << c.genus);
            let mut next = Vec::with_capacity(acc.len() * ex.len());
            for &(m, e, v) in &acc {
                for &(l, te) in &ex {
                    let mut mm = m;
                    for (j, &o) in c.outs.iter().enumerate() {
                        if (l >> j) & 1 == 1 {
                            mm |= 1 << o;
                        }
                    }
                    next.push((mm, e + te, v * scale));
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
}

#[derive(Default)]
struct Interner {
    list: Vec<Match>,
    map: HashMap<Match, u32>,
}

impl Interner {
    fn get(&mut self, m: Match) -> u32 {
        if let Some(&i) = self.map.get(&m) {
            return i;
        }
        let i = self.list.len() as u32;
        self.list.push(m.clone());
        self.map.insert(m, i);
        i
    }
}

#[derive(Clone, Copy, Debug)]
struct Obj {
    m: u32,
    h: i32,
    q: i32,
}

#[derive(Clone, Debug)]
struct Psi {
    src: u32,
    entries: BTreeMap<usize, Morph>,
}

/// Result of gluing `(a, s)` for a new crossing.
#[derive(Clone, Debug)]
struct ObjGlue {
    m: Match,
    /// a point of each closed loop (node numbering of the planar gluing)
    closed: Vec<usize>,
}

struct PlanarGlue {
    glue: Glue,
    n_open: usize,
    n_src: usize,
}

struct Stage {
    npts: usize,
    matchings: Interner,
    objs: Vec<Obj>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, Morph>>,
    inn: Vec<BTreeSet<usize>>,
    psi: Vec<Psi>,
    vcache: HashMap<(u32, u32, u32), Glue>,
}

impl Stage {
    fn add_obj(&mut self, o: Obj) -> usize {
        self.objs.push(o);
        self.alive.push(true);
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeSet::new());
        self.objs.len() - 1
    }

    fn add_entry(&mut self, x: usize, y: usize, t: Term) {
        if t.coef.is_zero() {
            return;
        }
        let e = self.out[x].entry(y).or_default();
        morph_add(e, t);
        if e.is_empty() {
            self.out[x].remove(&y);
            self.inn[y].remove(&x);
        } else {
            self.inn[y].insert(x);
        }
    }

    fn vglue(&mut self, a: u32, b: u32, c: u32) -> &Glue {
        let ms = &self.matchings.list;
        self.vcache.entry((a, b, c)).or_insert_with(|| {
            let (ma, mb, mc) = (&ms[a as usize], &ms[b as usize], &ms[c as usize]);
            let (l1, n1) = loops_of(ma, mb);
            let (l2, n2) = loops_of(mb, mc);
            let (l3, n3) = loops_of(ma, mc);
            let mut joins = vec![];
            for p in 0..mb.len() {
                if (mb[p] as usize) > p {
                    joins.push((l1[p] as usize, n1 + l2[p] as usize));
                }
            }
            let mut out_disc = vec![usize::MAX; n3];
            for p in 0..ma.len() {
                let o = l3[p] as usize;
                if out_disc[o] == usize::MAX {
                    out_disc[o] = l1[p] as usize;
                }
            }
            Glue::new(n1, n2, &joins, &out_disc)
        })
    }

    /// Vertical composite `g ∘ f` for `f: a -> b`, `g: b -> c`.
    fn compose(&mut self, a: u32, b: u32, c: u32, f: &Morph, g: &Morph) -> Morph {
        let glue = self.vglue(a, b, c).clone();
        let mut raw = vec![];
        for tf in f {
            for tg in g {
                glue.apply(tf, tg, &mut raw);
            }
        }
        let mut m = vec![];
        for (mask, e, v) in raw {
            morph_add(&mut m, Term { mask, texp: e, coef: v });
        }
        m
    }

    fn unit_of(&self, x: usize, y: usize) -> Option<Q> {
        if self.objs[x].m != self.objs[y].m {
            return None;
        }
        let e = self.out[x].get(&y)?;
        if e.len() == 1 && e[0].mask == 0 && e[0].texp == 0 {
            Some(e[0].coef)
        } else {
            None
        }
    }

    fn eliminate(&mut self, b1: usize, b2: usize, c: Q) {
        let inv = Q::one() / c;
        let mb = self.objs[b1].m;
        let sources: Vec<usize> = self.inn[b2].iter().copied().filter(|&x| x != b1).collect();
        let targets: Vec<(usize, Morph)> =
            self.out[b1].iter().filter(|(&y, _)| y != b2).map(|(&y, m)| (y, m.clone())).collect();
        for &x in &sources {
            let a = self.out[x][&b2].clone();
            let mx = self.objs[x].m;
            for (y, bb) in &targets {
                let my = self.objs[*y].m;
                let comp = self.compose(mx, mb, my, &a, bb);
                for t in comp {
                    self.add_entry(x, *y, Term { coef: -(t.coef * inv), ..t });
                }
            }
        }
        for pi in 0..self.psi.len() {
            if let Some(a) = self.psi[pi].entries.get(&b2).cloned() {
                let ms = self.psi[pi].src;
                for (y, bb) in &targets {
                    let my = self.objs[*y].m;
                    let comp = at_t1(&self.compose(ms, mb, my, &a, bb));
                    let e = self.psi[pi].entries.entry(*y).or_default();
                    for t in comp {
                        morph_add(e, Term { coef: -(t.coef * inv), ..t });
                    }
                    if e.is_empty() {
                        self.psi[pi].entries.remove(y);
                    }
                }
            }
            self.psi[pi].entries.remove(&b1);
            self.psi[pi].entries.remove(&b2);
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

    fn reduce(&mut self) {
        loop {
            let mut any = false;
            for b1 in 0..self.objs.len() {
                while self.alive[b1] {
                    let best = self.out[b1]
                        .keys()
                        .filter_map(|&y| self.unit_of(b1, y).map(|c| (y, c)))
                        .min_by_key(|&(y, c)| (c.abs() != Q::one(), self.inn[y].len(), y));
                    match best {
                        Some((b2, c)) => {
                            self.eliminate(b1, b2, c);
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
    }

    fn n_alive(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }
}

/// Smoothings of a crossing as matchings of its four slots.
fn smoothing(under_in: u8, one: bool) -> Match {
    let mut m = vec![0u8; 4];
    for s in 0..4u8 {
        let rel = (s + 4 - under_in) % 4;
        let p = if one { 3 - rel } else { rel ^ 1 };
        m[s as usize] = (p + under_in) % 4;
    }
    m
}

struct CrossingStep<'a> {
    npts: usize,
    /// wire partner of every node: P nodes 0..npts, slot nodes npts..npts+4
    wire: Vec<Option<usize>>,
    /// new boundary: node of each new point
    new_pts: Vec<usize>,
    node_pos: Vec<Option<usize>>,
    old: &'a Stage,
}

impl<'a> CrossingStep<'a> {
    fn node_partner(&self, a: &[u8], s: &[u8], v: usize) -> usize {
        if v < self.npts {
            a[v] as usize
        } else {
            self.npts + s[v - self.npts] as usize
        }
    }

    fn glue_obj(&self, a: &[u8], s: &[u8]) -> ObjGlue {
        let nn = self.npts + 4;
        let mut seen = vec![false; nn];
        let mut m = vec![0u8; self.new_pts.len()];
        for (i, &v0) in self.new_pts.iter().enumerate() {
            if seen[v0] {
                continue;
            }
            let mut v = v0;
            loop {
                seen[v] = true;
                let w = self.node_partner(a, s, v);
                seen[w] = true;
                match self.wire[w] {
                    Some(x) => v = x,
                    None => {
                        let j = self.node_pos[w].unwrap();
                        m[i] = j as u8;
                        m[j] = i as u8;
                        break;
                    }
                }
            }
        }
        let mut closed = vec![];
        for v0 in 0..nn {
            if seen[v0] {
                continue;
            }
            closed.push(v0);
            let mut v = v0;
            loop {
                seen[v] = true;
                let w = self.node_partner(a, s, v);
                seen[w] = true;
                v = self.wire[w].expect("closed loop passes through wires only");
                if v == v0 {
                    break;
                }
            }
        }
        ObjGlue { m, closed }
    }
}

/// Scanning computation of the reduced complex of `d`. When `colors` is
/// given (checkerboard parity of every edge and free loop), also returns the
/// images of the two Lee cycles built from `1 ± x` on every arc.
pub fn scan_complex(
    d: &OrientedDiagram,
    colors: Option<(&[u8], &[u8])>,
    limit: u128,
) -> Result<Reduced> {
    let mut st = Stage {
        npts: 0,
        matchings: Interner::default(),
        objs: vec![],
        alive: vec![],
        out: vec![],
        inn: vec![],
        psi: vec![],
        vcache: HashMap::new(),
    };
    let empty = st.matchings.get(vec![]);
    st.add_obj(Obj { m: empty, h: 0, q: 0 });
    if colors.is_some() {
        for _ in 0..2 {
            st.psi.push(Psi {
                src: empty,
                entries: BTreeMap::from([(0, vec![Term { mask: 0, texp: 0, coef: Q::one() }])]),
            });
        }
    }
    let mut points: Vec<usize> = vec![];
    let mut n_minus_done = 0i32;
    for x in &d.crossings {
        let np = points.len();
        let mut wire: Vec<Option<usize>> = vec![None; np + 4];
        for (i, &e) in points.iter().enumerate() {
            if let Some(k) = x.slots.iter().position(|&f| f == e) {
                wire[i] = Some(np + k);
                wire[np + k] = Some(i);
            }
        }
        for k1 in 0..4 {
            for k2 in k1 + 1..4 {
                if x.slots[k1] == x.slots[k2] {
                    wire[np + k1] = Some(np + k2);
                    wire[np + k2] = Some(np + k1);
                }
            }
        }
        let mut new_pts = vec![];
        let mut new_points = vec![];
        for (i, &e) in points.iter().enumerate() {
            if wire[i].is_none() {
                new_pts.push(i);
                new_points.push(e);
            }
        }
        for k in 0..4 {
            if wire[np + k].is_none() {
                new_pts.push(np + k);
                new_points.push(x.slots[k]);
            }
        }
        if new_points.len() > 120 {
            return Err(Error::ResourceLimit { needed: new_points.len() as u128, limit: 120 });
        }
        let mut node_pos = vec![None; np + 4];
        for (i, &v) in new_pts.iter().enumerate() {
            node_pos[v] = Some(i);
        }
        let step = CrossingStep { npts: np, wire: wire.clone(), new_pts, node_pos, old: &st };
        let sm = [smoothing(x.under_in, false), smoothing(x.under_in, true)];
        let (hs, qs) = if x.sign > 0 { ([0, 1], [1, 2]) } else { ([-1, 0], [-2, -1]) };
        let mut next = Stage {
            npts: new_points.len(),
            matchings: Interner::default(),
            objs: vec![],
            alive: vec![],
            out: vec![],
            inn: vec![],
            psi: vec![],
            vcache: HashMap::new(),
        };
        // objects
        let mut base: Vec<[usize; 2]> = vec![[usize::MAX; 2]; st.objs.len()];
        let mut oglue: HashMap<(u32, usize), ObjGlue> = HashMap::new();
        for i in 0..st.objs.len() {
            if !st.alive[i] {
                continue;
            }
            let o = st.objs[i];
            for s in 0..2 {
                let g = oglue
                    .entry((o.m, s))
                    .or_insert_with(|| step.glue_obj(&st.matchings.list[o.m as usize], &sm[s]))
                    .clone();
                let mid = next.matchings.get(g.m.clone());
                let nc = g.closed.len();
                base[i][s] = next.objs.len();
                for bits in 0..(1u32 << nc) {
                    let dq: i32 = (0..nc).map(|j| if (bits >> j) & 1 == 1 { -1 } else { 1 }).sum();
                    next.add_obj(Obj { m: mid, h: o.h + hs[s], q: o.q + qs[s] + dq });
                }
            }
        }
        if next.objs.len() as u128 > limit {
            return Err(Error::ResourceLimit { needed: next.objs.len() as u128, limit });
        }
        let mut pcache: HashMap<(u32, u32, usize, usize), PlanarGlue> = HashMap::new();
        let id_term = Term { mask: 0, texp: 0, coef: Q::one() };
        let emit = |                        pcache: &mut HashMap<(u32, u32, usize, usize), PlanarGlue>,
                        ma: u32,
                        mb: u32,
                        s: usize,
                        s2: usize,
                        f: &Morph,
                        g: &Morph|
         -> (Vec<(u64, u32, Q)>, usize, usize) {
            let pg = pcache.entry((ma, mb, s, s2)).or_insert_with(|| {
                planar_glue(&step, &st.matchings.list[ma as usize], &st.matchings.list[mb as usize], &sm[s], &sm[s2])
            });
            let mut raw = vec![];
            for tf in f {
                for tg in g {
                    pg.glue.apply(tf, tg, &mut raw);
                }
            }
            (raw, pg.n_open, pg.n_src)
        };
        // d_T ⊗ id
        for i in 0..st.objs.len() {
            if !st.alive[i] {
                continue;
            }
            for (&j, f) in &st.out[i] {
                for s in 0..2 {
                    let (raw, n_open, n_src) = emit(&mut pcache, st.objs[i].m, st.objs[j].m, s, s, f, &vec![id_term]);
                    for (mask, e, v) in raw {
                        let open = mask & ((1u64 << n_open) - 1);
                        let lsrc = (mask >> n_open) & ((1u64 << n_src) - 1);
                        let tgt = mask >> (n_open + n_src);
                        let src_bits = lsrc ^ ((1u64 << n_src) - 1);
                        next.add_entry(
                            base[i][s] + src_bits as usize,
                            base[j][s] + tgt as usize,
                            Term { mask: open, texp: e, coef: v },
                        );
                    }
                }
            }
        }
        // id ⊗ saddle
        for i in 0..st.objs.len() {
            if !st.alive[i] {
                continue;
            }
            let o = st.objs[i];
            let sign = if (o.h + n_minus_done).rem_euclid(2) == 0 { 1 } else { -1 };
            let saddle = vec![Term { mask: 0, texp: 0, coef: Q::from_integer(sign as i128) }];
            let (raw, n_open, n_src) = emit(&mut pcache, o.m, o.m, 0, 1, &vec![id_term], &saddle);
            for (mask, e, v) in raw {
                let open = mask & ((1u64 << n_open) - 1);
                let lsrc = (mask >> n_open) & ((1u64 << n_src) - 1);
                let tgt = mask >> (n_open + n_src);
                let src_bits = lsrc ^ ((1u64 << n_src) - 1);
                next.add_entry(base[i][0] + src_bits as usize, base[i][1] + tgt as usize, Term { mask: open, texp: e, coef: v });
            }
        }
        // Lee cycles: decorated oriented smoothing on the new crossing
        if let Some((ecol, _)) = colors {
            let so = if x.sign > 0 { 0 } else { 1 };
            let (lp, nl) = loops_of(&sm[so], &sm[so]);
            debug_assert_eq!(nl, 2);
            let mut loop_col = [0u8; 2];
            for k in 0..4 {
                loop_col[lp[k] as usize] = ecol[x.slots[k]];
            }
            for k in 0..4 {
                let p = sm[so][k] as usize;
                assert_eq!(ecol[x.slots[k]], ecol[x.slots[p]], "edges joined by the oriented smoothing differ in colour");
            }
            for (pi, psi) in st.psi.iter().enumerate() {
                // ψ_o uses the colours, ψ_ō the opposite colours
                let flip = pi as u8;
                let mut deco: Morph = vec![];
                for mask in 0..4u64 {
                    let mut c = Q::one();
                    for l in 0..2 {
                        if (mask >> l) & 1 == 1 && (loop_col[l] ^ flip) == 1 {
                            c = -c;
                        }
                    }
                    morph_add(&mut deco, Term { mask, texp: 0, coef: c });
                }
                let sg = oglue
                    .entry((psi.src, usize::MAX - so))
                    .or_insert_with(|| step.glue_obj(&st.matchings.list[psi.src as usize], &sm[so]))
                    .clone();
                let new_src = next.matchings.get(sg.m.clone());
                let mut entries: BTreeMap<usize, Morph> = BTreeMap::new();
                for (&i, f) in &psi.entries {
                    let (raw, n_open, n_src) = emit(&mut pcache, psi.src, st.objs[i].m, so, so, f, &deco);
                    for (mask, _e, v) in raw {
                        let open = mask & ((1u64 << n_open) - 1);
                        let lsrc = (mask >> n_open) & ((1u64 << n_src) - 1);
                        let tgt = mask >> (n_open + n_src);
                        // closed source circles are capped by plain cups
                        if lsrc != (1u64 << n_src) - 1 {
                            continue;
                        }
                        let e = entries.entry(base[i][so] + tgt as usize).or_default();
                        morph_add(e, Term { mask: open, texp: 0, coef: v });
                    }
                }
                entries.retain(|_, m| !m.is_empty());
                next.psi.push(Psi { src: new_src, entries });
            }
        }
        if x.sign < 0 {
            n_minus_done += 1;
        }
        let _ = step.old;
        st = next;
        points = new_points;
        st.reduce();
        normalize_psi(&mut st.psi);
        log::debug!("crossing {}: {} objects alive, {} boundary points", x.id, st.n_alive(), st.npts);
    }
    assert!(points.is_empty(), "boundary left after all crossings");
    // closed level
    let mut cx = GradedComplex::new();
    let mut newid = vec![usize::MAX; st.objs.len()];
    for i in 0..st.objs.len() {
        if st.alive[i] {
            newid[i] = cx.add_gen(st.objs[i].h, st.objs[i].q, format!("g{}", cx.len()));
        }
    }
    let scalar = |m: &Morph| -> Mono {
        assert!(m.len() == 1 && m[0].mask == 0, "closed morphism is not a monomial");
        Mono::new(m[0].coef, m[0].texp)
    };
    for i in 0..st.objs.len() {
        if st.alive[i] {
            cx.diff[newid[i]] = st.out[i].iter().map(|(&j, m)| (newid[j], scalar(m))).collect();
        }
    }
    let mut chains: Vec<BTreeMap<usize, Q>> = st
        .psi
        .iter()
        .map(|p| {
            p.entries
                .iter()
                .map(|(&i, m)| {
                    let v: Q = m.iter().map(|t| t.coef).sum();
                    (newid[i], v)
                })
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    // crossingless circles are tensored on at the end
    for (l, _) in d.loops.iter().enumerate() {
        let col = colors.map(|c| c.1[l]);
        let (c2, ch2) = tensor_circle(&cx, &chains, col);
        cx = c2;
        chains = ch2;
    }
    Ok(Reduced { complex: cx, chains })
}

/// Rescales all tracked cycles by one common positive scalar so that their
/// coefficients stay small.
fn normalize_psi(psi: &mut [Psi]) {
    use num_integer::Integer;
    let mut g = 0i128;
    let mut l = 1i128;
    for p in psi.iter() {
        for m in p.entries.values() {
            for t in m {
                g = g.gcd(t.coef.numer());
                l = l.lcm(t.coef.denom());
            }
        }
    }
    if g == 0 || (g == 1 && l == 1) {
        return;
    }
    let f = Q::new(l, g);
    for p in psi.iter_mut() {
        for m in p.entries.values_mut() {
            for t in m.iter_mut() {
                t.coef *= f;
            }
        }
    }
}

/// `C ⊗ A` for one extra circle. Chains are multiplied by `1 ± x`.
fn tensor_circle(c: &GradedComplex, chains: &[BTreeMap<usize, Q>], col: Option<u8>) -> (GradedComplex, Vec<BTreeMap<usize, Q>>) {
    let mut out = GradedComplex::new();
    for g in &c.gens {
        out.add_gen(g.h, g.q + 1, format!("{}+", g.id));
        out.add_gen(g.h, g.q - 1, format!("{}-", g.id));
    }
    for (s, row) in c.diff.iter().enumerate() {
        for b in 0..2 {
            out.diff[2 * s + b] = row.iter().map(|&(t, m)| (2 * t + b, m)).collect();
        }
    }
    let chains = chains
        .iter()
        .enumerate()
        .map(|(pi, ch)| {
            let colour = col.unwrap_or(0) ^ pi as u8;
            let xs = if colour == 1 { -Q::one() } else { Q::one() };
            let mut m = BTreeMap::new();
            for (&g, &v) in ch {
                m.insert(2 * g, v);
                m.insert(2 * g + 1, v * xs);
            }
            m
        })
        .collect();
    (out, chains)
}

fn planar_glue(step: &CrossingStep, a: &[u8], b: &[u8], s: &[u8], s2: &[u8]) -> PlanarGlue {
    let np = step.npts;
    let (l1, n1) = loops_of(a, b);
    let (l2, n2) = loops_of(s, s2);
    let disc = |v: usize| if v < np { l1[v] as usize } else { n1 + l2[v - np] as usize };
    let mut joins = vec![];
    for v in 0..np + 4 {
        if let Some(w) = step.wire[v] {
            if w > v {
                joins.push((disc(v), disc(w)));
            }
        }
    }
    let src = step.glue_obj(a, s);
    let tgt = step.glue_obj(b, s2);
    let (l3, n3) = loops_of(&src.m, &tgt.m);
    let mut out_disc = vec![usize::MAX; n3];
    for (i, &v) in step.new_pts.iter().enumerate() {
        let o = l3[i] as usize;
        if out_disc[o] == usize::MAX {
            out_disc[o] = disc(v);
        }
    }
    for &v in &src.closed {
        out_disc.push(disc(v));
    }
    for &v in &tgt.closed {
        out_disc.push(disc(v));
    }
    assert!(out_disc.len() <= 64, "too many loops for a 64-bit mask");
    PlanarGlue {
        glue: Glue::new(n1, n2, &joins, &out_disc),
        n_open: n3,
        n_src: src.closed.len(),
    }
}
