//! Oriented planar link diagrams.
//!
//! A diagram is stored as a rotation system: every crossing lists its four
//! incident edges in counterclockwise order, and that geometric order never
//! changes. Mirroring and reversing only move the markers saying which slot
//! carries the incoming under- and over-strand. Disconnected pieces (and
//! crossingless loops) are positioned relative to each other by
//! [`Placement`]s, which is all the planar information nesting depths need.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::dsu::Dsu;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub id: usize,
    /// +1 for a positive (right-handed) crossing.
    pub sign: i8,
    /// Incident edges in counterclockwise order.
    pub slots: [usize; 4],
    /// Slot of the incoming under-strand.
    pub under_in: u8,
    /// Slot of the incoming over-strand, always `under_in ± 1`.
    pub over_in: u8,
}

fn sign_of(under_in: u8, over_in: u8) -> i8 {
    if over_in == (under_in + 3) % 4 {
        1
    } else {
        -1
    }
}

impl Crossing {
    /// PD entry: incoming under-strand first, then counterclockwise.
    pub fn pd(&self) -> [usize; 4] {
        let u = self.under_in as usize;
        [0, 1, 2, 3].map(|k| self.slots[(u + k) % 4])
    }

    pub fn is_incoming(&self, slot: u8) -> bool {
        slot == self.under_in || slot == self.over_in
    }

    /// The slot joined to `slot` by the 0-smoothing (`one == false`) or the
    /// 1-smoothing. With PD entry `(a,b,c,d)` the 0-smoothing joins a-b and
    /// c-d, the 1-smoothing joins a-d and b-c.
    pub fn smoothing_partner(&self, slot: u8, one: bool) -> u8 {
        let rel = (slot + 4 - self.under_in) % 4;
        let p = if one { 3 - rel } else { rel ^ 1 };
        (p + self.under_in) % 4
    }

    /// Corner `k` is the region between slot `k` and slot `k+1`. Returns the
    /// pair of opposite corners merged by the given smoothing.
    pub fn merged_corners(&self, one: bool) -> (u8, u8) {
        let u = self.under_in;
        if one {
            (u, (u + 2) % 4)
        } else {
            ((u + 1) % 4, (u + 3) % 4)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreeLoop {
    pub component: usize,
    pub ccw: bool,
}

/// A face of one piece of the diagram. `Dart(c, s)` is the face on the left
/// of the edge leaving crossing `c` through slot `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FaceRef {
    Dart(usize, u8),
    LoopInside(usize),
    LoopOutside(usize),
}

/// Where a connected piece sits: `outer` is its unbounded face, `parent` the
/// face of another piece containing it (`None` for the outermost level).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub outer: FaceRef,
    pub parent: Option<FaceRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientedDiagram {
    pub crossings: Vec<Crossing>,
    pub n_edges: usize,
    pub edge_comp: Vec<usize>,
    /// (crossing, slot) the edge leaves from
    pub edge_tail: Vec<(usize, u8)>,
    /// (crossing, slot) the edge enters
    pub edge_head: Vec<(usize, u8)>,
    pub loops: Vec<FreeLoop>,
    pub n_components: usize,
    pub placements: Vec<Placement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
    /// per-strand orientation of the closure, true = up
    pub up: Vec<bool>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Self {
        BraidWord { strands, letters, up: vec![true; strands] }
    }

    pub fn with_orientation(strands: usize, letters: Vec<i32>, up: Vec<bool>) -> Self {
        BraidWord { strands, letters, up }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strands == 0 && !self.letters.is_empty() {
            return Err(Error::Invalid("a braid on no strands has no letters".into()));
        }
        if self.up.len() != self.strands {
            return Err(Error::Invalid(format!(
                "orientation pattern has {} entries for {} strands",
                self.up.len(),
                self.strands
            )));
        }
        for &l in &self.letters {
            if l == 0 || l.unsigned_abs() as usize >= self.strands {
                return Err(Error::Invalid(format!("letter {l} out of range for {} strands", self.strands)));
            }
        }
        Ok(())
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// Parses `braid <n> [uudd]: w1 w2 ...`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let rest = text
            .strip_prefix("braid")
            .ok_or_else(|| Error::Parse("braid input must start with 'braid'".into()))?;
        let (head, word) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' in braid input".into()))?;
        let mut head = head.split_whitespace();
        let n: usize = head
            .next()
            .ok_or_else(|| Error::Parse("missing strand count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad strand count: {e}")))?;
        let up = match head.next() {
            None => vec![true; n],
            Some(p) => p
                .chars()
                .map(|c| match c {
                    'u' | 'U' => Ok(true),
                    'd' | 'D' => Ok(false),
                    _ => Err(Error::Parse(format!("bad orientation character '{c}'"))),
                })
                .collect::<Result<Vec<_>>>()?,
        };
        if let Some(extra) = head.next() {
            return Err(Error::Parse(format!("unexpected token '{extra}'")));
        }
        let letters = word
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i32>().map_err(|e| Error::Parse(format!("bad letter '{s}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let b = BraidWord { strands: n, letters, up };
        b.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circle {
    /// edges on this circle, ascending
    pub arcs: Vec<usize>,
    pub free_loop: Option<usize>,
    /// number of other circles strictly containing this one
    pub depth: usize,
    /// set only on the oriented resolution
    pub ccw: Option<bool>,
}

impl Circle {
    /// Enclosure count plus one for counterclockwise circles.
    pub fn z(&self) -> Option<usize> {
        self.ccw.map(|c| self.depth + c as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub choice: Vec<u8>,
    pub circles: Vec<Circle>,
    /// circle index of every edge
    #[serde(skip)]
    pub edge_circle: Vec<usize>,
}

/// Face structure derived from the rotation system.
#[derive(Clone, Debug)]
pub struct Faces {
    pub dart_face: Vec<[usize; 4]>,
    pub n_dart_faces: usize,
    pub n_loops: usize,
}

impl Faces {
    pub fn index(&self, f: FaceRef) -> usize {
        match f {
            FaceRef::Dart(c, s) => self.dart_face[c][s as usize],
            FaceRef::LoopInside(l) => self.n_dart_faces + 2 * l,
            FaceRef::LoopOutside(l) => self.n_dart_faces + 2 * l + 1,
        }
    }

    pub fn total(&self) -> usize {
        self.n_dart_faces + 2 * self.n_loops
    }
}

struct RawCrossing {
    slots: [usize; 4],
    under_in: u8,
    over_in: u8,
}

impl OrientedDiagram {
    pub fn empty() -> Self {
        OrientedDiagram {
            crossings: vec![],
            n_edges: 0,
            edge_comp: vec![],
            edge_tail: vec![],
            edge_head: vec![],
            loops: vec![],
            n_components: 0,
            placements: vec![],
        }
    }

    /// A single crossingless circle.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `n` crossingless circles side by side.
    pub fn unlink(n: usize) -> Self {
        let mut d = Self::empty();
        for l in 0..n {
            d.loops.push(FreeLoop { component: l, ccw: true });
            d.placements.push(Placement { outer: FaceRef::LoopOutside(l), parent: None });
        }
        d.n_components = n;
        d
    }

    fn assemble(
        raw: Vec<RawCrossing>,
        n_edges: usize,
        loop_ccw: Vec<bool>,
        placements: Vec<Placement>,
    ) -> Result<Self> {
        let mut ends: Vec<Vec<(usize, u8)>> = vec![vec![]; n_edges];
        for (c, x) in raw.iter().enumerate() {
            if x.over_in != (x.under_in + 1) % 4 && x.over_in != (x.under_in + 3) % 4 {
                return Err(Error::Invalid(format!("crossing {c}: over-strand slot not adjacent to under-strand slot")));
            }
            for (s, &e) in x.slots.iter().enumerate() {
                if e >= n_edges {
                    return Err(Error::Invalid(format!("crossing {c}: edge {e} out of range")));
                }
                ends[e].push((c, s as u8));
            }
        }
        let crossings: Vec<Crossing> = raw
            .iter()
            .enumerate()
            .map(|(id, x)| Crossing {
                id,
                sign: sign_of(x.under_in, x.over_in),
                slots: x.slots,
                under_in: x.under_in,
                over_in: x.over_in,
            })
            .collect();
        let mut edge_tail = vec![(0, 0); n_edges];
        let mut edge_head = vec![(0, 0); n_edges];
        for (e, en) in ends.iter().enumerate() {
            if en.len() != 2 {
                return Err(Error::Invalid(format!("edge {e} has {} endpoints, expected 2", en.len())));
            }
            let inc: Vec<bool> = en.iter().map(|&(c, s)| crossings[c].is_incoming(s)).collect();
            match (inc[0], inc[1]) {
                (true, false) => {
                    edge_head[e] = en[0];
                    edge_tail[e] = en[1];
                }
                (false, true) => {
                    edge_head[e] = en[1];
                    edge_tail[e] = en[0];
                }
                _ => {
                    return Err(Error::OrientationConflict(format!(
                        "edge {e} is {} at both ends",
                        if inc[0] { "incoming" } else { "outgoing" }
                    )))
                }
            }
        }
        // components: follow strands straight through crossings
        let mut dsu = Dsu::new(n_edges);
        for x in &crossings {
            dsu.union(x.slots[0], x.slots[2]);
            dsu.union(x.slots[1], x.slots[3]);
        }
        let mut comp_of_root = BTreeMap::new();
        let mut edge_comp = vec![0; n_edges];
        for e in 0..n_edges {
            let r = dsu.find(e);
            let next = comp_of_root.len();
            edge_comp[e] = *comp_of_root.entry(r).or_insert(next);
        }
        let n_strand_comps = comp_of_root.len();
        let loops: Vec<FreeLoop> = loop_ccw
            .iter()
            .enumerate()
            .map(|(i, &ccw)| FreeLoop { component: n_strand_comps + i, ccw })
            .collect();
        let d = OrientedDiagram {
            crossings,
            n_edges,
            edge_comp,
            edge_tail,
            edge_head,
            n_components: n_strand_comps + loops.len(),
            loops,
            placements,
        };
        d.check_planar()?;
        d.check_placements()?;
        Ok(d)
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|x| x.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|x| x.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    pub fn is_empty(&self) -> bool {
        self.n_components == 0
    }

    /// The other end of the edge at `(c, s)`.
    pub fn opposite_end(&self, c: usize, s: u8) -> (usize, u8) {
        let e = self.crossings[c].slots[s as usize];
        if self.edge_tail[e] == (c, s) {
            self.edge_head[e]
        } else {
            self.edge_tail[e]
        }
    }

    pub fn faces(&self) -> Faces {
        let n = self.crossings.len();
        let mut dart_face = vec![[usize::MAX; 4]; n];
        let mut nf = 0;
        for c in 0..n {
            for s in 0..4u8 {
                if dart_face[c][s as usize] != usize::MAX {
                    continue;
                }
                let (mut cc, mut ss) = (c, s);
                while dart_face[cc][ss as usize] == usize::MAX {
                    dart_face[cc][ss as usize] = nf;
                    let (c2, s2) = self.opposite_end(cc, ss);
                    cc = c2;
                    ss = (s2 + 3) % 4;
                }
                nf += 1;
            }
        }
        Faces { dart_face, n_dart_faces: nf, n_loops: self.loops.len() }
    }

    /// Connected pieces: crossing pieces first (by smallest crossing), then
    /// one piece per free loop. Returns the piece of every crossing.
    pub fn crossing_pieces(&self) -> (Vec<usize>, usize) {
        let n = self.crossings.len();
        let mut dsu = Dsu::new(n);
        for e in 0..self.n_edges {
            dsu.union(self.edge_tail[e].0, self.edge_head[e].0);
        }
        let mut ids = BTreeMap::new();
        let mut piece = vec![0; n];
        for (c, p) in piece.iter_mut().enumerate() {
            let r = dsu.find(c);
            let next = ids.len();
            *p = *ids.entry(r).or_insert(next);
        }
        (piece, ids.len())
    }

    fn face_piece(&self, f: FaceRef, cpiece: &[usize], ncp: usize) -> usize {
        match f {
            FaceRef::Dart(c, _) => cpiece[c],
            FaceRef::LoopInside(l) | FaceRef::LoopOutside(l) => ncp + l,
        }
    }

    fn check_planar(&self) -> Result<()> {
        let faces = self.faces();
        let (cpiece, ncp) = self.crossing_pieces();
        let mut v = vec![0i64; ncp];
        let mut f = vec![std::collections::BTreeSet::new(); ncp];
        for (c, x) in self.crossings.iter().enumerate() {
            v[cpiece[c]] += 1;
            for s in 0..4 {
                f[cpiece[c]].insert(faces.dart_face[c][s]);
            }
            let _ = x;
        }
        for p in 0..ncp {
            // 4-valent: E = 2V, so V - E + F = 2 means F = V + 2
            let chi = v[p] - 2 * v[p] + f[p].len() as i64;
            if chi != 2 {
                return Err(Error::NonPlanar(format!("piece {p}: V-E+F = {chi}")));
            }
        }
        Ok(())
    }

    fn check_placements(&self) -> Result<()> {
        let (cpiece, ncp) = self.crossing_pieces();
        let npieces = ncp + self.loops.len();
        if self.placements.len() != npieces {
            return Err(Error::Invalid(format!(
                "{} placements for {} pieces",
                self.placements.len(),
                npieces
            )));
        }
        let mut seen = vec![false; npieces];
        for p in &self.placements {
            if let FaceRef::LoopInside(_) = p.outer {
                return Err(Error::Invalid("a loop's outer face must be its outside".into()));
            }
            let i = self.face_piece(p.outer, &cpiece, ncp);
            if seen[i] {
                return Err(Error::Invalid(format!("piece {i} placed twice")));
            }
            seen[i] = true;
        }
        // parents must form a forest
        let parent_of: Vec<Option<usize>> = {
            let mut v = vec![None; npieces];
            for p in &self.placements {
                let i = self.face_piece(p.outer, &cpiece, ncp);
                v[i] = p.parent.map(|f| self.face_piece(f, &cpiece, ncp));
            }
            v
        };
        for start in 0..npieces {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parent_of[cur] {
                cur = p;
                steps += 1;
                if steps > npieces {
                    return Err(Error::Invalid("placement cycle".into()));
                }
            }
        }
        Ok(())
    }

    /// Choice vector with 0 at positive and 1 at negative crossings.
    pub fn oriented_choice(&self) -> Vec<u8> {
        self.crossings.iter().map(|x| (x.sign < 0) as u8).collect()
    }

    /// Circle index of every edge under `choice` (circles numbered by their
    /// smallest edge) followed by one circle per free loop.
    pub fn circle_partition(&self, choice: &[u8]) -> (Vec<usize>, usize) {
        let mut dsu = Dsu::new(self.n_edges);
        for (c, x) in self.crossings.iter().enumerate() {
            let one = choice[c] != 0;
            for s in 0..4u8 {
                let p = x.smoothing_partner(s, one);
                dsu.union(x.slots[s as usize], x.slots[p as usize]);
            }
        }
        let mut ids = vec![usize::MAX; self.n_edges];
        let mut circ = vec![0; self.n_edges];
        let mut n = 0;
        for e in 0..self.n_edges {
            let r = dsu.find(e);
            if ids[r] == usize::MAX {
                ids[r] = n;
                n += 1;
            }
            circ[e] = ids[r];
        }
        (circ, n + self.loops.len())
    }

    /// Smooths every crossing and computes circles with nesting depths.
    pub fn resolve(&self, choice: &[u8]) -> Resolution {
        assert_eq!(choice.len(), self.crossings.len(), "choice length");
        let oriented = choice == self.oriented_choice().as_slice();
        let (edge_circle, ncirc) = self.circle_partition(choice);
        let n_strand_circles = ncirc - self.loops.len();
        let faces = self.faces();
        let root = faces.total();
        let mut reg = Dsu::new(root + 1);
        for (c, x) in self.crossings.iter().enumerate() {
            let (k1, k2) = x.merged_corners(choice[c] != 0);
            reg.union(faces.dart_face[c][k1 as usize], faces.dart_face[c][k2 as usize]);
        }
        for p in &self.placements {
            let o = faces.index(p.outer);
            match p.parent {
                Some(f) => reg.union(o, faces.index(f)),
                None => reg.union(o, root),
            };
        }
        // walk every strand circle once, starting at its smallest edge
        let mut sides = vec![(0usize, 0usize); ncirc];
        let mut arcs = vec![vec![]; ncirc];
        for e in 0..self.n_edges {
            arcs[edge_circle[e]].push(e);
        }
        for (ci, a) in arcs.iter().enumerate().take(n_strand_circles) {
            let e = a[0];
            let (c0, s0) = self.edge_tail[e];
            let left = faces.dart_face[c0][s0 as usize];
            let (c1, s1) = self.opposite_end(c0, s0);
            let right = faces.dart_face[c1][s1 as usize];
            sides[ci] = (reg.find(left), reg.find(right));
            debug_assert!({
                // every dart of the circle sees the same left region
                let mut ok = true;
                let (mut c, mut s) = (c0, s0);
                loop {
                    if reg.find(faces.dart_face[c][s as usize]) != sides[ci].0 {
                        ok = false;
                    }
                    let (c2, s2) = self.opposite_end(c, s);
                    let p = self.crossings[c2].smoothing_partner(s2, choice[c2] != 0);
                    c = c2;
                    s = p;
                    if (c, s) == (c0, s0) {
                        break;
                    }
                }
                ok
            });
        }
        for (l, lp) in self.loops.iter().enumerate() {
            let inside = reg.find(faces.index(FaceRef::LoopInside(l)));
            let outside = reg.find(faces.index(FaceRef::LoopOutside(l)));
            sides[n_strand_circles + l] = if lp.ccw { (inside, outside) } else { (outside, inside) };
        }
        // regions form a tree whose edges are circles; depth from the root
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (ci, &(a, b)) in sides.iter().enumerate() {
            adj.entry(a).or_default().push(ci);
            adj.entry(b).or_default().push(ci);
        }
        let root_r = reg.find(root);
        let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
        depth.insert(root_r, 0);
        let mut queue = VecDeque::from([root_r]);
        while let Some(r) = queue.pop_front() {
            let d = depth[&r];
            for &ci in adj.get(&r).map(|v| v.as_slice()).unwrap_or(&[]) {
                let (a, b) = sides[ci];
                let other = if a == r { b } else { a };
                if let std::collections::btree_map::Entry::Vacant(v) = depth.entry(other) {
                    v.insert(d + 1);
                    queue.push_back(other);
                }
            }
        }
        let circles = (0..ncirc)
            .map(|ci| {
                let (l, r) = sides[ci];
                let (dl, dr) = (depth[&l], depth[&r]);
                assert!(dl.abs_diff(dr) == 1, "region structure is not a tree");
                Circle {
                    arcs: arcs[ci].clone(),
                    free_loop: if ci >= n_strand_circles { Some(ci - n_strand_circles) } else { None },
                    depth: dl.min(dr),
                    ccw: if oriented { Some(dl > dr) } else { None },
                }
            })
            .collect();
        Resolution { choice: choice.to_vec(), circles, edge_circle }
    }

    pub fn seifert_count(&self) -> usize {
        self.circle_partition(&self.oriented_choice()).1
    }

    /// Parity of z for the Seifert circle through each edge and through
    /// each free loop. This is the checkerboard colour of the region on the
    /// left of the edge.
    pub fn seifert_colors(&self) -> (Vec<u8>, Vec<u8>) {
        let res = self.resolve(&self.oriented_choice());
        let n_strand = res.circles.len() - self.loops.len();
        let edges = (0..self.n_edges)
            .map(|e| (res.circles[res.edge_circle[e]].z().unwrap() % 2) as u8)
            .collect();
        let loops = (0..self.loops.len())
            .map(|l| (res.circles[n_strand + l].z().unwrap() % 2) as u8)
            .collect();
        (edges, loops)
    }

    /// lk off the diagonal, writhe of the component on it.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.n_components;
        let mut m = vec![vec![0i64; l]; l];
        for x in &self.crossings {
            let a = self.edge_comp[x.slots[0]];
            let b = self.edge_comp[x.slots[1]];
            m[a][b] += x.sign as i64;
            if a != b {
                m[b][a] += x.sign as i64;
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if i != j {
                    *v /= 2;
                }
            }
        }
        m
    }

    fn with_markers(&self, f: impl Fn(&Crossing) -> (u8, u8), flip_loops: &[bool]) -> Self {
        let raw = self
            .crossings
            .iter()
            .map(|x| {
                let (u, o) = f(x);
                RawCrossing { slots: x.slots, under_in: u, over_in: o }
            })
            .collect();
        let ccw = self.loops.iter().zip(flip_loops).map(|(l, &fl)| l.ccw ^ fl).collect();
        let mut d = Self::assemble(raw, self.n_edges, ccw, self.placements.clone())
            .expect("marker change keeps a valid diagram");
        // keep the component numbering of the original
        d.edge_comp = self.edge_comp.clone();
        for (l, lp) in d.loops.iter_mut().enumerate() {
            lp.component = self.loops[l].component;
        }
        d
    }

    pub fn mirror(&self) -> Self {
        self.with_markers(|x| (x.over_in, x.under_in), &vec![false; self.loops.len()])
    }

    pub fn reverse(&self) -> Self {
        self.with_markers(|x| ((x.under_in + 2) % 4, (x.over_in + 2) % 4), &vec![true; self.loops.len()])
    }

    /// Reverses the components flagged in `flip`.
    pub fn reorient(&self, flip: &[bool]) -> Result<Self> {
        if flip.len() != self.n_components {
            return Err(Error::Invalid(format!(
                "orientation vector has {} entries for {} components",
                flip.len(),
                self.n_components
            )));
        }
        let comp = &self.edge_comp;
        let flip_loops: Vec<bool> = self.loops.iter().map(|l| flip[l.component]).collect();
        Ok(self.with_markers(
            |x| {
                let uc = comp[x.slots[x.under_in as usize]];
                let oc = comp[x.slots[x.over_in as usize]];
                let u = if flip[uc] { (x.under_in + 2) % 4 } else { x.under_in };
                let o = if flip[oc] { (x.over_in + 2) % 4 } else { x.over_in };
                (u, o)
            },
            &flip_loops,
        ))
    }

    /// Switches over- and under-strand at one crossing.
    pub fn crossing_change(&self, c: usize) -> Self {
        self.with_markers(
            |x| if x.id == c { (x.over_in, x.under_in) } else { (x.under_in, x.over_in) },
            &vec![false; self.loops.len()],
        )
    }

    fn shifted_face(f: FaceRef, dc: usize, dl: usize) -> FaceRef {
        match f {
            FaceRef::Dart(c, s) => FaceRef::Dart(c + dc, s),
            FaceRef::LoopInside(l) => FaceRef::LoopInside(l + dl),
            FaceRef::LoopOutside(l) => FaceRef::LoopOutside(l + dl),
        }
    }

    fn raw(&self) -> Vec<RawCrossing> {
        self.crossings
            .iter()
            .map(|x| RawCrossing { slots: x.slots, under_in: x.under_in, over_in: x.over_in })
            .collect()
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let (dc, de, dl) = (self.crossings.len(), self.n_edges, self.loops.len());
        let mut raw = self.raw();
        raw.extend(other.crossings.iter().map(|x| RawCrossing {
            slots: x.slots.map(|e| e + de),
            under_in: x.under_in,
            over_in: x.over_in,
        }));
        let ccw: Vec<bool> = self.loops.iter().chain(other.loops.iter()).map(|l| l.ccw).collect();
        let mut placements = self.placements.clone();
        placements.extend(other.placements.iter().map(|p| Placement {
            outer: Self::shifted_face(p.outer, dc, dl),
            parent: p.parent.map(|f| Self::shifted_face(f, dc, dl)),
        }));
        let mut d = Self::assemble(raw, de + other.n_edges, ccw, placements).expect("union of valid diagrams");
        // components: all of self first, then other, each in its own order
        let lc = self.n_components;
        d.edge_comp = self.edge_comp.iter().copied().chain(other.edge_comp.iter().map(|&c| c + lc)).collect();
        for (i, lp) in d.loops.iter_mut().enumerate() {
            lp.component = if i < dl { self.loops[i].component } else { other.loops[i - dl].component + lc };
        }
        d
    }

    fn remove_loop(&self, l: usize) -> Self {
        let parent_of_loop = self.placements.iter().find(|p| p.outer == FaceRef::LoopOutside(l)).unwrap().parent;
        let fix = |f: FaceRef| -> Option<FaceRef> {
            match f {
                FaceRef::LoopInside(k) | FaceRef::LoopOutside(k) if k == l => None,
                FaceRef::LoopInside(k) if k > l => Some(FaceRef::LoopInside(k - 1)),
                FaceRef::LoopOutside(k) if k > l => Some(FaceRef::LoopOutside(k - 1)),
                other => Some(other),
            }
        };
        let placements = self
            .placements
            .iter()
            .filter(|p| p.outer != FaceRef::LoopOutside(l))
            .map(|p| Placement {
                outer: fix(p.outer).unwrap(),
                parent: match p.parent {
                    Some(FaceRef::LoopInside(k)) if k == l => parent_of_loop.and_then(fix),
                    Some(f) => fix(f),
                    None => None,
                },
            })
            .collect();
        let ccw = self.loops.iter().enumerate().filter(|(i, _)| *i != l).map(|(_, x)| x.ccw).collect();
        let gone = self.loops[l].component;
        let mut d = Self::assemble(self.raw(), self.n_edges, ccw, placements).expect("loop removal keeps validity");
        let renum = |c: usize| if c > gone { c - 1 } else { c };
        d.edge_comp = self.edge_comp.iter().map(|&c| renum(c)).collect();
        let kept: Vec<usize> = self.loops.iter().filter(|x| x.component != gone).map(|x| renum(x.component)).collect();
        for (lp, c) in d.loops.iter_mut().zip(kept) {
            lp.component = c;
        }
        d
    }

    /// Band sum of component `c1` of `self` with component `c2` of `other`,
    /// respecting orientations.
    pub fn connect_sum(&self, c1: usize, other: &Self, c2: usize) -> Result<Self> {
        if c1 >= self.n_components {
            return Err(Error::BadComponent { index: c1, count: self.n_components });
        }
        if c2 >= other.n_components {
            return Err(Error::BadComponent { index: c2, count: other.n_components });
        }
        // a crossingless circle is a unit for the sum
        if let Some(l2) = other.loops.iter().position(|l| l.component == c2) {
            return Ok(self.disjoint_union(&other.remove_loop(l2)));
        }
        if let Some(l1) = self.loops.iter().position(|l| l.component == c1) {
            let rest = self.remove_loop(l1);
            let mut d = rest.disjoint_union(other);
            // put the surviving component where the loop was in the numbering
            let perm: Vec<usize> = {
                let lc = rest.n_components;
                let mut order: Vec<usize> = (0..d.n_components).collect();
                let moved = lc + c2;
                order.retain(|&c| c != moved);
                order.insert(c1, moved);
                let mut inv = vec![0; d.n_components];
                for (newc, &oldc) in order.iter().enumerate() {
                    inv[oldc] = newc;
                }
                inv
            };
            d.edge_comp = d.edge_comp.iter().map(|&c| perm[c]).collect();
            for lp in d.loops.iter_mut() {
                lp.component = perm[lp.component];
            }
            return Ok(d);
        }
        let u = self.disjoint_union(other);
        let (dc, de) = (self.crossings.len(), self.n_edges);
        let e1 = (0..self.n_edges).find(|&e| self.edge_comp[e] == c1).unwrap();
        let e2 = (0..other.n_edges).find(|&e| other.edge_comp[e] == c2).unwrap() + de;
        let (cpiece, _) = u.crossing_pieces();
        let p2 = cpiece[u.edge_tail[e2].0];
        let t1 = u.edge_tail[e1];
        let t2 = u.edge_tail[e2];
        let (h1, h2) = (u.edge_head[e1], u.edge_head[e2]);
        let mut placements = vec![];
        for p in &u.placements {
            let piece = match p.outer {
                FaceRef::Dart(c, _) => Some(cpiece[c]),
                _ => None,
            };
            if piece == Some(p2) {
                continue;
            }
            placements.push(*p);
        }
        let _ = dc;
        let mut raw = u.raw();
        raw[h2.0].slots[h2.1 as usize] = e1;
        raw[h1.0].slots[h1.1 as usize] = e2;
        let _ = (t1, t2);
        let ccw = u.loops.iter().map(|l| l.ccw).collect();
        let mut d = Self::assemble(raw, u.n_edges, ccw, placements)?;
        // numbering: components of self, then those of other except c2
        let lc = self.n_components;
        let renum = |c: usize| -> usize {
            if c < lc {
                c
            } else {
                let k = c - lc;
                if k == c2 {
                    c1
                } else if k > c2 {
                    c - 1
                } else {
                    c
                }
            }
        };
        d.edge_comp = (0..d.n_edges).map(|e| renum(u.edge_comp[e])).collect();
        for (i, lp) in d.loops.iter_mut().enumerate() {
            lp.component = renum(u.loops[i].component);
        }
        Ok(d)
    }

    /// Closure of a braid: strands vertical, closure arcs nested on the right.
    pub fn from_braid(b: &BraidWord) -> Result<Self> {
        b.validate()?;
        if b.strands == 0 {
            return Ok(Self::empty());
        }
        build_vertical(b.strands, &b.letters, &b.up, false)
    }

    /// Plat closure: neighbouring strands (1,2), (3,4), ... capped at the top
    /// and cupped at the bottom.
    pub fn from_plat(b: &BraidWord) -> Result<Self> {
        b.validate()?;
        if b.strands % 2 != 0 {
            return Err(Error::Invalid("plat closure needs an even number of strands".into()));
        }
        if b.strands == 0 {
            return Ok(Self::empty());
        }
        build_vertical(b.strands, &b.letters, &b.up, true)
    }

    pub fn to_pd_string(&self) -> String {
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|x| {
                let p = x.pd();
                format!("X({},{},{},{})", p[0] + 1, p[1] + 1, p[2] + 1, p[3] + 1)
            })
            .collect();
        format!("PD[{}]", xs.join(", "))
    }

    /// Parses `PD[X(a,b,c,d), ...]` with an optional `; orient: 1=+,2=-`.
    pub fn parse_pd(text: &str) -> Result<Self> {
        let text = text.trim();
        let (body, orient) = match text.split_once(';') {
            Some((b, o)) => (b.trim(), Some(o.trim())),
            None => (text, None),
        };
        let inner = body
            .strip_prefix("PD")
            .map(str::trim)
            .and_then(|s| s.strip_prefix('['))
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("expected PD[...]".into()))?;
        let mut quads: Vec<[i64; 4]> = vec![];
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let r = rest
                .strip_prefix('X')
                .ok_or_else(|| Error::Parse(format!("expected X(...) at '{}'", head(rest))))?
                .trim_start();
            let (open, close) = match r.chars().next() {
                Some('(') => ('(', ')'),
                Some('[') => ('[', ']'),
                _ => return Err(Error::Parse(format!("expected '(' at '{}'", head(r)))),
            };
            let end = r.find(close).ok_or_else(|| Error::Parse(format!("unclosed '{open}'")))?;
            let nums: Vec<i64> = r[1..end]
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad label '{}': {e}", s.trim()))))
                .collect::<Result<_>>()?;
            if nums.len() != 4 {
                return Err(Error::Parse(format!("crossing with {} labels", nums.len())));
            }
            quads.push([nums[0], nums[1], nums[2], nums[3]]);
            rest = r[end + 1..].trim_start();
            if let Some(r2) = rest.strip_prefix(',') {
                rest = r2.trim_start();
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' at '{}'", head(rest))));
            }
        }
        let mut d = pd_from_quads(&quads)?;
        if let Some(o) = orient {
            let spec = o
                .strip_prefix("orient")
                .map(str::trim_start)
                .and_then(|s| s.strip_prefix(':'))
                .ok_or_else(|| Error::Parse("expected 'orient:' after ';'".into()))?;
            let mut flip = vec![false; d.n_components];
            for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, sgn) =
                    item.split_once('=').ok_or_else(|| Error::Parse(format!("bad orientation item '{item}'")))?;
                let name = name.trim();
                let idx: usize = name
                    .strip_prefix("comp")
                    .unwrap_or(name)
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad component name '{name}'")))?;
                if idx == 0 || idx > d.n_components {
                    return Err(Error::BadComponent { index: idx, count: d.n_components });
                }
                flip[idx - 1] = match sgn.trim() {
                    "+" => false,
                    "-" => true,
                    s => return Err(Error::Parse(format!("bad orientation sign '{s}'"))),
                };
            }
            d = d.reorient(&flip)?;
        }
        Ok(d)
    }
}

fn head(s: &str) -> String {
    s.chars().take(12).collect()
}

fn pd_from_quads(quads: &[[i64; 4]]) -> Result<OrientedDiagram> {
    if quads.is_empty() {
        return Ok(OrientedDiagram::empty());
    }
    // relabel edges 0.. in order of first appearance
    let mut label: BTreeMap<i64, usize> = BTreeMap::new();
    let mut order = vec![];
    for q in quads {
        for &a in q {
            if let std::collections::btree_map::Entry::Vacant(v) = label.entry(a) {
                v.insert(order.len());
                order.push(a);
            }
        }
    }
    let n_edges = order.len();
    let slots: Vec<[usize; 4]> = quads.iter().map(|q| q.map(|a| label[&a])).collect();
    let mut ends: Vec<Vec<(usize, u8)>> = vec![vec![]; n_edges];
    for (c, s) in slots.iter().enumerate() {
        for k in 0..4 {
            ends[s[k]].push((c, k as u8));
        }
    }
    for (e, en) in ends.iter().enumerate() {
        if en.len() != 2 {
            return Err(Error::Parse(format!("edge label {} appears {} times", order[e], en.len())));
        }
    }
    // orientation of every (crossing, slot): Some(true) if incoming
    let n = quads.len();
    let mut inc: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let other_end = |c: usize, k: u8| -> (usize, u8) {
        let e = slots[c][k as usize];
        if ends[e][0] == (c, k) {
            ends[e][1]
        } else {
            ends[e][0]
        }
    };
    // propagate from (c, k) being incoming along the strand
    let propagate = |inc: &mut Vec<[Option<bool>; 4]>, c0: usize, k0: u8| -> Result<()> {
        let (mut c, mut k) = (c0, k0);
        loop {
            match inc[c][k as usize] {
                Some(true) => return Ok(()),
                Some(false) => {
                    return Err(Error::OrientationConflict(format!(
                        "strand through crossing {} disagrees with its under-crossing data",
                        c + 1
                    )))
                }
                None => {}
            }
            inc[c][k as usize] = Some(true);
            let out = (k + 2) % 4;
            if inc[c][out as usize] == Some(true) {
                return Err(Error::OrientationConflict(format!("crossing {} has both ends of a strand incoming", c + 1)));
            }
            inc[c][out as usize] = Some(false);
            let (c2, k2) = other_end(c, out);
            c = c2;
            k = k2;
        }
    };
    for c in 0..n {
        propagate(&mut inc, c, 0)?;
    }
    // strands that are never under: increasing labels along the over-strand
    for c in 0..n {
        for k in [1u8, 3] {
            if inc[c][k as usize].is_none() {
                let e_here = quads[c][k as usize];
                let e_there = quads[c][((k + 2) % 4) as usize];
                let incoming = e_here < e_there;
                let start = if incoming { k } else { (k + 2) % 4 };
                propagate(&mut inc, c, start)?;
            }
        }
    }
    let raw: Vec<RawCrossing> = (0..n)
        .map(|c| {
            let over_in = if inc[c][1] == Some(true) { 1 } else { 3 };
            RawCrossing { slots: slots[c], under_in: 0, over_in }
        })
        .collect();
    // placements: each piece at top level, outer face = largest face
    let tmp = OrientedDiagram {
        crossings: raw
            .iter()
            .enumerate()
            .map(|(id, r)| Crossing { id, sign: sign_of(r.under_in, r.over_in), slots: r.slots, under_in: 0, over_in: r.over_in })
            .collect(),
        n_edges,
        edge_comp: vec![0; n_edges],
        edge_tail: (0..n_edges).map(|e| if inc[ends[e][0].0][ends[e][0].1 as usize] == Some(true) { ends[e][1] } else { ends[e][0] }).collect(),
        edge_head: (0..n_edges).map(|e| if inc[ends[e][0].0][ends[e][0].1 as usize] == Some(true) { ends[e][0] } else { ends[e][1] }).collect(),
        loops: vec![],
        n_components: 0,
        placements: vec![],
    };
    let faces = tmp.faces();
    let (cpiece, ncp) = tmp.crossing_pieces();
    let mut size = vec![0usize; faces.n_dart_faces];
    let mut rep = vec![None; faces.n_dart_faces];
    for c in 0..n {
        for s in 0..4u8 {
            let f = faces.dart_face[c][s as usize];
            size[f] += 1;
            if rep[f].is_none() {
                rep[f] = Some((c, s));
            }
        }
    }
    let mut best: Vec<Option<usize>> = vec![None; ncp];
    for f in 0..faces.n_dart_faces {
        let (c, _) = rep[f].unwrap();
        let p = cpiece[c];
        match best[p] {
            Some(b) if size[b] >= size[f] => {}
            _ => best[p] = Some(f),
        }
    }
    let placements = best
        .iter()
        .map(|f| {
            let (c, s) = rep[f.unwrap()].unwrap();
            Placement { outer: FaceRef::Dart(c, s), parent: None }
        })
        .collect();
    OrientedDiagram::assemble(raw, n_edges, vec![], placements)
}

#[derive(Clone, Copy)]
enum SegEnd {
    Slot(usize, u8),
    Bottom(usize),
    Top(usize),
}

/// Shared builder for braid and plat closures. Letters are read bottom to
/// top; position `p` sits at x = p.
fn build_vertical(n: usize, letters: &[i32], up: &[bool], plat: bool) -> Result<OrientedDiagram> {
    // segments per position, bottom to top
    let mut seg_lo: Vec<Vec<SegEnd>> = (0..n).map(|p| vec![SegEnd::Bottom(p)]).collect();
    let mut seg_hi: Vec<Vec<SegEnd>> = vec![vec![]; n];
    let mut seg_up: Vec<Vec<bool>> = (0..n).map(|p| vec![up[p]]).collect();
    let mut dir = up.to_vec();
    // per crossing: segment (position, index) at slots SW, SE, NE, NW
    let mut xsegs: Vec<[(usize, usize); 4]> = vec![];
    for (k, &l) in letters.iter().enumerate() {
        let a = l.unsigned_abs() as usize - 1;
        let b = a + 1;
        let (ia, ib) = (seg_lo[a].len() - 1, seg_lo[b].len() - 1);
        seg_hi[a].push(SegEnd::Slot(k, 0));
        seg_hi[b].push(SegEnd::Slot(k, 1));
        dir.swap(a, b);
        seg_lo[a].push(SegEnd::Slot(k, 3));
        seg_lo[b].push(SegEnd::Slot(k, 2));
        seg_up[a].push(dir[a]);
        seg_up[b].push(dir[b]);
        xsegs.push([(a, ia), (b, ib), (b, ib + 1), (a, ia + 1)]);
    }
    for p in 0..n {
        seg_hi[p].push(SegEnd::Top(p));
    }
    if plat {
        for j in 0..n / 2 {
            if up[2 * j] == up[2 * j + 1] || dir[2 * j] == dir[2 * j + 1] {
                return Err(Error::OrientationConflict(format!(
                    "capped strands {} and {} must run in opposite directions",
                    2 * j + 1,
                    2 * j + 2
                )));
            }
        }
    } else if dir != up {
        return Err(Error::OrientationConflict(
            "orientation pattern is not preserved by the braid permutation".into(),
        ));
    }
    let partner = |e: SegEnd| -> SegEnd {
        match e {
            SegEnd::Top(p) => {
                if plat {
                    SegEnd::Top(p ^ 1)
                } else {
                    SegEnd::Bottom(p)
                }
            }
            SegEnd::Bottom(p) => {
                if plat {
                    SegEnd::Bottom(p ^ 1)
                } else {
                    SegEnd::Top(p)
                }
            }
            s => s,
        }
    };
    // segment whose lower (or upper) end is a closure point
    let seg_at = |e: SegEnd| -> (usize, usize, bool) {
        match e {
            SegEnd::Bottom(p) => (p, 0, true),
            SegEnd::Top(p) => (p, seg_hi[p].len() - 1, false),
            SegEnd::Slot(k, s) => {
                let (p, i) = xsegs[k][s as usize];
                // slots 0,1 are upper ends of their segment, 2,3 lower ends
                (p, i, s >= 2)
            }
        }
    };
    let nx = letters.len();
    let mut slot_edge = vec![[usize::MAX; 4]; nx];
    let mut seg_edge: Vec<Vec<(usize, bool)>> = (0..n).map(|p| vec![(usize::MAX, false); seg_lo[p].len()]).collect();
    // edge chains: start end (crossing, slot) and final end
    let mut chain_ends: Vec<((usize, u8), (usize, u8))> = vec![];
    for k in 0..nx {
        for s in 0..4u8 {
            if slot_edge[k][s as usize] != usize::MAX {
                continue;
            }
            let e = chain_ends.len();
            let mut at = SegEnd::Slot(k, s);
            let end = loop {
                let (p, i, from_lower) = seg_at(at);
                seg_edge[p][i] = (e, from_lower);
                let far = if from_lower { seg_hi[p][i] } else { seg_lo[p][i] };
                match far {
                    SegEnd::Slot(k2, s2) => break (k2, s2),
                    closure => at = partner(closure),
                }
            };
            slot_edge[k][s as usize] = e;
            slot_edge[end.0][end.1 as usize] = e;
            chain_ends.push(((k, s), end));
        }
    }
    let n_edges = chain_ends.len();
    // free loops: unvisited segments
    let mut loop_ccw = vec![];
    let mut loop_of_pos = vec![usize::MAX; n];
    for p in 0..n {
        if seg_edge[p][0].0 != usize::MAX || loop_of_pos[p] != usize::MAX {
            continue;
        }
        let l = loop_ccw.len();
        loop_of_pos[p] = l;
        if plat {
            loop_of_pos[p ^ 1] = l;
            let left = p & !1;
            // up on the left, across the cap, down on the right: clockwise
            loop_ccw.push(!up[left]);
        } else {
            loop_ccw.push(!up[p]);
        }
    }
    let raw: Vec<RawCrossing> = letters
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let incoming = |s: usize| {
                let (p, i) = xsegs[k][s];
                let u = seg_up[p][i];
                if s < 2 {
                    u
                } else {
                    !u
                }
            };
            let (under, over) = if l > 0 { ([1usize, 3], [0usize, 2]) } else { ([0, 2], [1, 3]) };
            let under_in = if incoming(under[0]) { under[0] } else { under[1] } as u8;
            let over_in = if incoming(over[0]) { over[0] } else { over[1] } as u8;
            RawCrossing { slots: slot_edge[k], under_in, over_in }
        })
        .collect();
    // pieces are intervals of positions
    let mut dsu = Dsu::new(n);
    for &l in letters {
        let a = l.unsigned_abs() as usize - 1;
        dsu.union(a, a + 1);
    }
    if plat {
        for j in 0..n / 2 {
            dsu.union(2 * j, 2 * j + 1);
        }
    }
    let mut intervals: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for p in 0..n {
        let r = dsu.find(p);
        let iv = intervals.entry(r).or_insert((p, p));
        iv.0 = iv.0.min(p);
        iv.1 = iv.1.max(p);
    }
    let mut ivs: Vec<(usize, usize)> = intervals.values().copied().collect();
    ivs.sort();
    // faces of the crossing part, needed to name outer and axis faces
    let upward_left = |p: usize| -> FaceRef {
        let (e, from_lower) = seg_edge[p][0];
        let (a, b) = chain_ends[e];
        // walking from chain start, the bottom segment is climbed iff entered from below
        if from_lower {
            FaceRef::Dart(a.0, a.1)
        } else {
            FaceRef::Dart(b.0, b.1)
        }
    };
    let upward_right = |p: usize| -> FaceRef {
        let (e, from_lower) = seg_edge[p][0];
        let (a, b) = chain_ends[e];
        if from_lower {
            FaceRef::Dart(b.0, b.1)
        } else {
            FaceRef::Dart(a.0, a.1)
        }
    };
    let mut placements = vec![];
    let mut prev_axis: Option<FaceRef> = None;
    for &(lo, hi) in &ivs {
        let (outer, axis) = if loop_of_pos[lo] != usize::MAX {
            let l = loop_of_pos[lo];
            (FaceRef::LoopOutside(l), FaceRef::LoopInside(l))
        } else {
            (upward_left(lo), upward_right(hi))
        };
        placements.push(Placement { outer, parent: if plat { None } else { prev_axis } });
        prev_axis = Some(axis);
    }
    OrientedDiagram::assemble(raw, n_edges, loop_ccw, placements)
}

/// Twice the signed area of a closed polyline.
pub fn poly_area2(p: &[(i64, i64)]) -> i64 {
    let n = p.len();
    (0..n).map(|i| p[i].0 * p[(i + 1) % n].1 - p[(i + 1) % n].0 * p[i].1).sum()
}
