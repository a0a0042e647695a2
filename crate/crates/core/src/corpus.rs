//! Named diagrams, the test corpus and seeded random braids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linkdiag::{BraidWord, OrientedDiagram};
use crate::ssr::{Handle, SsrDiagram};

/// A built-in input: either a diagram in the three-sphere or one with
/// handles.
#[derive(Clone, Debug)]
pub enum Builtin {
    S3(OrientedDiagram),
    Ssr(SsrDiagram),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub diagram: OrientedDiagram,
    /// the braid this was closed from, if any
    pub braid: Option<BraidWord>,
}

impl Entry {
    fn new(name: impl Into<String>, diagram: OrientedDiagram) -> Self {
        Entry { name: name.into(), diagram, braid: None }
    }

    fn from_braid(name: impl Into<String>, b: BraidWord) -> Self {
        let diagram = OrientedDiagram::from_braid(&b).expect("corpus braid");
        Entry { name: name.into(), diagram, braid: Some(b) }
    }
}

/// `(σ_1 ... σ_{p-1})^q` on `p` upward strands; negative `q` is the mirror.
pub fn torus_braid(p: usize, q: i64) -> BraidWord {
    let one: Vec<i32> = (1..p as i32).map(|l| if q < 0 { -l } else { l }).collect();
    BraidWord::new(p.max(1), one.repeat(q.unsigned_abs() as usize))
}

pub fn torus(p: usize, q: i64) -> OrientedDiagram {
    OrientedDiagram::from_braid(&torus_braid(p, q)).expect("torus braid")
}

pub fn trefoil() -> OrientedDiagram {
    torus(2, 3)
}

pub fn figure_eight() -> OrientedDiagram {
    OrientedDiagram::from_braid(&BraidWord::new(3, vec![1, -2, 1, -2])).expect("figure eight")
}

pub fn hopf() -> OrientedDiagram {
    torus(2, 2)
}

/// `p` upward and `q` downward parallel strands through one handle.
pub fn f_pq(p: usize, q: usize) -> SsrDiagram {
    let n = p + q;
    let up: Vec<bool> = (0..n).map(|i| i < p).collect();
    SsrDiagram::new(BraidWord::with_orientation(n, vec![], up), vec![Handle { a: 1, b: n, at: 0 }], false)
        .expect("F_pq")
}

/// The `(p, q)` cable pattern: `p` parallel strands wrapping `q` times.
pub fn cable(p: usize, q: usize) -> SsrDiagram {
    let b = torus_braid(p, q as i64);
    SsrDiagram::new(b, vec![Handle { a: 1, b: p, at: 0 }], false).expect("cable")
}

/// The positive Whitehead knot: a two-crossing clasp whose two middle
/// strands pass through the handle.
pub fn whitehead_plus() -> SsrDiagram {
    let up = vec![true, false, true, false];
    SsrDiagram::new(BraidWord::with_orientation(4, vec![-1, 2], up), vec![Handle { a: 2, b: 3, at: 0 }], true)
        .expect("Wh+")
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let n = name.trim();
    let lower = n.to_ascii_lowercase();
    let d = match lower.as_str() {
        "unknot" | "u" | "u1" => Some(OrientedDiagram::unknot()),
        "empty" => Some(OrientedDiagram::empty()),
        "trefoil" | "trefoil+" => Some(trefoil()),
        "trefoil-" => Some(trefoil().mirror()),
        "figure8" | "figure-eight" | "4_1" => Some(figure_eight()),
        "hopf" | "hopf+" => Some(hopf()),
        "hopf-" => Some(hopf().mirror()),
        _ => None,
    };
    if let Some(d) = d {
        return Ok(Builtin::S3(d));
    }
    match lower.as_str() {
        "wh+" => return Ok(Builtin::Ssr(whitehead_plus())),
        "wh-" => return Ok(Builtin::Ssr(whitehead_plus().mirror())),
        "dt(wh+)" => return Ok(Builtin::Ssr(whitehead_plus().dehn_twist())),
        _ => {}
    }
    let bad = || Error::Parse(format!("unknown builtin '{n}'"));
    let args = |s: &str| -> Result<Vec<i64>> {
        let s = s.trim_start_matches('_');
        let s = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .or_else(|| s.strip_prefix('{').and_then(|s| s.strip_suffix('}')))
            .unwrap_or(s);
        s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
    };
    let nonneg = |v: i64| -> Result<usize> { usize::try_from(v).map_err(|_| bad()) };
    if let Some(r) = lower.strip_prefix('u') {
        if let [l] = args(r)?[..] {
            return Ok(Builtin::S3(OrientedDiagram::unlink(nonneg(l)?)));
        }
    }
    if let Some(r) = lower.strip_prefix('t') {
        if let [p, q] = args(r)?[..] {
            if p < 1 {
                return Err(bad());
            }
            return Ok(Builtin::S3(torus(p as usize, q)));
        }
    }
    if let Some(r) = lower.strip_prefix('f') {
        return match args(r)?[..] {
            [p] => Ok(Builtin::Ssr(f_pq(nonneg(p)?, nonneg(p)?))),
            [p, q] => Ok(Builtin::Ssr(f_pq(nonneg(p)?, nonneg(q)?))),
            _ => Err(bad()),
        };
    }
    if let Some(r) = lower.strip_prefix('c') {
        if let [p, q] = args(r)?[..] {
            if p < 1 {
                return Err(bad());
            }
            return Ok(Builtin::Ssr(cable(p as usize, nonneg(q)?)));
        }
    }
    Err(bad())
}

pub const BUILTIN_NAMES: &[&str] = &[
    "unknot", "trefoil+", "trefoil-", "figure8", "hopf+", "hopf-", "U2", "T(3,4)", "F1", "F(2,1)", "C(2,1)", "Wh+",
    "Wh-", "DT(Wh+)",
];

const PD_CODES: &[(&str, &str)] = &[
    ("pd 3_1", "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]"),
    ("pd 4_1", "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]"),
    ("pd 5_1", "PD[X(1,6,2,7), X(3,8,4,9), X(5,10,6,1), X(7,2,8,3), X(9,4,10,5)]"),
    ("pd 5_2", "PD[X(1,4,2,5), X(3,8,4,9), X(5,10,6,1), X(9,6,10,7), X(7,2,8,3)]"),
    ("pd 6_1", "PD[X(1,4,2,5), X(7,10,8,11), X(3,9,4,8), X(9,3,10,2), X(5,12,6,1), X(11,6,12,7)]"),
    ("pd hopf", "PD[X(4,1,3,2), X(2,3,1,4)]"),
    ("pd hopf reversed", "PD[X(4,1,3,2), X(2,3,1,4)]; orient: 2=-"),
];

const BRAIDS: &[(usize, &[i32])] = &[
    (3, &[1, -2, 1, -2]),
    (3, &[1, 1, 1, 2, -1, 2]),
    (4, &[1, 1, 2, -1, -3, 2, -3]),
    (3, &[1, 1, 1, -2, 1, -2]),
    (3, &[1, 1, -2, 1, -2, -2]),
    (3, &[1, 1, 1, 1, 1, 2, -1, 2]),
    (4, &[1, 1, 2, -1, 2, 3, -2, 3]),
    (4, &[1, -2, 1, -2, 3, -2, 3]),
    (3, &[1, 1, 1, -2, -1, -1, -1, -2]),
    (3, &[1, 2, 1, 2]),
    (3, &[1, 2, 2, 1, 2, 2]),
    (4, &[1, 2, 3]),
    (4, &[1, 2, 3, 1, 2, 3]),
    (4, &[1, -2, 3, 1, -2, 3]),
    (2, &[1, -1, 1]),
    (3, &[1, -2]),
    (3, &[1, 1, -2, -2]),
];

/// Fixed diagrams with at most ten crossings.
pub fn small_corpus() -> Vec<Entry> {
    let mut v = vec![
        Entry::new("unknot", OrientedDiagram::unknot()),
        Entry::new("U2", OrientedDiagram::unlink(2)),
        Entry::new("U3", OrientedDiagram::unlink(3)),
        Entry::from_braid("figure8", BraidWord::new(3, vec![1, -2, 1, -2])),
    ];
    for q in 1..=7 {
        v.push(Entry::from_braid(format!("T(2,{q})"), torus_braid(2, q)));
        v.push(Entry::from_braid(format!("T(2,{})", -q), torus_braid(2, -q)));
    }
    for q in 2..=5 {
        v.push(Entry::from_braid(format!("T(3,{q})"), torus_braid(3, q)));
        v.push(Entry::from_braid(format!("T(3,{})", -q), torus_braid(3, -q)));
    }
    for &(n, w) in BRAIDS {
        let b = BraidWord::new(n, w.to_vec());
        let perm_ok = OrientedDiagram::from_braid(&b).is_ok();
        if perm_ok {
            v.push(Entry::from_braid(format!("braid {n}: {w:?}"), b.clone()));
            let m = BraidWord::new(n, w.iter().map(|l| -l).collect());
            v.push(Entry::from_braid(format!("braid {n}: {:?}", m.letters), m));
        }
    }
    for (name, pd) in PD_CODES {
        v.push(Entry::new(*name, OrientedDiagram::parse_pd(pd).expect("corpus PD code")));
    }
    // mixed orientations
    let anti = |n: usize, w: Vec<i32>, up: Vec<bool>| BraidWord::with_orientation(n, w, up);
    v.push(Entry::from_braid("T(2,2) antiparallel", anti(2, vec![1, 1], vec![true, false])));
    v.push(Entry::from_braid("T(2,4) antiparallel", anti(2, vec![1, 1, 1, 1], vec![true, false])));
    v.push(Entry::from_braid("T(2,6) antiparallel", anti(2, vec![1; 6], vec![true, false])));
    v.push(Entry::from_braid("T(3,3) udu", anti(3, vec![1, 2, 1, 2, 1, 2], vec![true, false, true])));
    v.push(Entry::from_braid("T(3,3) uud", anti(3, vec![1, 2, 1, 2, 1, 2], vec![true, true, false])));
    // sums and unions
    let t = trefoil();
    let f8 = figure_eight();
    v.push(Entry::new("trefoil # trefoil", t.connect_sum(0, &t, 0).unwrap()));
    v.push(Entry::new("trefoil # mirror", t.connect_sum(0, &t.mirror(), 0).unwrap()));
    v.push(Entry::new("trefoil # figure8", t.connect_sum(0, &f8, 0).unwrap()));
    v.push(Entry::new("hopf # hopf", hopf().connect_sum(1, &hopf(), 0).unwrap()));
    v.push(Entry::new("trefoil + unknot", t.disjoint_union(&OrientedDiagram::unknot())));
    v.push(Entry::new("hopf + trefoil-", hopf().disjoint_union(&t.mirror())));
    v.push(Entry::new("figure8 + U2", f8.disjoint_union(&OrientedDiagram::unlink(2))));
    let wh = whitehead_plus();
    for k in -2..=2 {
        v.push(Entry::new(format!("Wh+ D({k})"), wh.uniform(k).unwrap()));
    }
    v.retain(|e| e.diagram.n_crossings() <= 10);
    v
}

/// Braid with `strands` strands and the given letters, oriented
/// coherently on each cycle of its permutation (random per cycle).
pub fn random_braid(rng: &mut ChaCha8Rng, max_strands: usize, max_letters: usize) -> BraidWord {
    let n = rng.gen_range(2..=max_strands.max(2));
    let len = rng.gen_range(1..=max_letters.max(1));
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    // position p at the bottom reaches perm[p] at the top
    let mut at: Vec<usize> = (0..n).collect();
    for &l in &letters {
        let a = l.unsigned_abs() as usize - 1;
        at.swap(a, a + 1);
    }
    let mut perm = vec![0; n];
    for (top, &bottom) in at.iter().enumerate() {
        perm[bottom] = top;
    }
    let mut up = vec![None; n];
    for s in 0..n {
        if up[s].is_none() {
            let dir = rng.gen_bool(0.5);
            let mut p = s;
            while up[p].is_none() {
                up[p] = Some(dir);
                p = perm[p];
            }
        }
    }
    BraidWord::with_orientation(n, letters, up.into_iter().map(Option::unwrap).collect())
}

pub fn random_braids(seed: u64, count: usize, max_strands: usize, max_letters: usize) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let b = random_braid(&mut rng, max_strands, max_letters);
            let orient: String = b.up.iter().map(|&u| if u { 'u' } else { 'd' }).collect();
            let name = format!("random {i}: braid {} {orient}: {:?}", b.strands, b.letters);
            Entry::from_braid(name, b)
        })
        .collect()
}

pub const RANDOM_SEED: u64 = 0x5eed_2024;

/// The full property corpus: fixed diagrams plus 100 random braids.
pub fn property_corpus() -> Vec<Entry> {
    let mut v = small_corpus();
    v.extend(random_braids(RANDOM_SEED, 100, 4, 8));
    v
}

/// Pairs `(L, L')` where `L'` has one extra positive full twist on `2m`
/// neighbouring strands, `m` running each way, spliced into a random
/// braid.
pub fn generalized_crossing_pairs(seed: u64, count: usize) -> Vec<(Entry, Entry)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    while out.len() < count {
        let b = random_braid(&mut rng, 4, 6);
        let mut cands = vec![];
        let mut dir = b.up.clone();
        for pos in 0..=b.letters.len() {
            for a in 0..b.strands {
                for m in 1..=b.strands / 2 {
                    if a + 2 * m <= b.strands && dir[a..a + 2 * m].iter().filter(|&&u| u).count() == m {
                        cands.push((pos, a, m));
                    }
                }
            }
            if pos < b.letters.len() {
                let x = b.letters[pos].unsigned_abs() as usize - 1;
                dir.swap(x, x + 1);
            }
        }
        if cands.is_empty() {
            continue;
        }
        let (pos, a, m) = cands[rng.gen_range(0..cands.len())];
        let ft = crate::ssr::full_twist(2 * m, 1);
        let mut letters = b.letters.clone();
        letters.splice(pos..pos, ft.letters.iter().map(|&l| l + a as i32));
        let tw = BraidWord::with_orientation(b.strands, letters, b.up.clone());
        let i = out.len();
        let name = |x: &BraidWord| {
            let o: String = x.up.iter().map(|&u| if u { 'u' } else { 'd' }).collect();
            format!("twist pair {i}: braid {} {o}: {:?}", x.strands, x.letters)
        };
        out.push((Entry::from_braid(name(&b), b.clone()), Entry::from_braid(name(&tw), tw)));
    }
    out
}
