//! Lee generators, their filtration levels, and the s-invariant.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{FilteredComplex, GradedComplex};
use crate::cube::{build_cube, Cube};
use crate::error::{Error, Result};
use crate::frobenius::{qdeg, Q};
use crate::homology::{homology_qt, HomologySummary};
use crate::linkdiag::OrientedDiagram;
use crate::reduce::{scan_reduce, Reduced};
use crate::tangle::scan_complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    #[default]
    Scan,
    Both,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Engine::Brute),
            "scan" => Ok(Engine::Scan),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Parse(format!("unknown engine '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub engine: Engine,
    pub limit: u128,
}

impl Default for Options {
    fn default() -> Self {
        Options { engine: Engine::Scan, limit: crate::cube::DEFAULT_LIMIT }
    }
}

/// A rational combination of labelled resolutions at `t = 1`. Keys are
/// (choice bits, label bits) with bit `c` of the choice for crossing `c`
/// and bit `i` of the labels set when circle `i` carries `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeeChain {
    pub terms: BTreeMap<(u64, u64), Q>,
    /// q-degree of every term's generator
    qdeg: BTreeMap<(u64, u64), i32>,
}

impl LeeChain {
    /// Smallest q-degree among nonzero terms.
    pub fn q_level(&self) -> Option<i32> {
        self.terms.iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| self.qdeg[k]).min()
    }

    pub fn homological_degree(&self, d: &OrientedDiagram) -> i32 {
        let r = self.terms.keys().next().map(|k| k.0).unwrap_or(0);
        r.count_ones() as i32 - d.n_minus() as i32
    }

    /// Coordinates in a cube's generator numbering.
    pub fn in_cube(&self, cube: &Cube) -> BTreeMap<usize, Q> {
        self.terms.iter().map(|(&(r, l), &v)| (cube.index(r, l), v)).collect()
    }

    pub fn scale(&self, c: Q) -> Self {
        LeeChain { terms: self.terms.iter().map(|(&k, &v)| (k, v * c)).collect(), qdeg: self.qdeg.clone() }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        let mut qd = self.qdeg.clone();
        for (&k, &v) in &o.terms {
            *terms.entry(k).or_insert_with(Q::zero) += v;
            qd.insert(k, o.qdeg[&k]);
        }
        terms.retain(|_, v| !v.is_zero());
        LeeChain { terms, qdeg: qd }
    }
}

/// The Lee generator of `d` with its stored orientation: on the oriented
/// resolution, circle `C` carries `(-1)^z(C) 1 + x`. With `reversed` the
/// orientation of every component is reversed (ccw flags flip); with
/// `negate` every sign `(-1)^z` is replaced by its negative.
pub fn lee_generator_with(d: &OrientedDiagram, reversed: bool, negate: bool) -> Result<LeeChain> {
    if d.is_empty() {
        return Err(Error::Invalid("the empty diagram has no Lee generator".into()));
    }
    let choice = d.oriented_choice();
    let res = d.resolve(&choice);
    let r: u64 = choice.iter().enumerate().map(|(c, &b)| (b as u64) << c).sum();
    let nc = res.circles.len();
    if nc > 40 {
        return Err(Error::ResourceLimit { needed: 1u128 << nc, limit: 1u128 << 40 });
    }
    let signs: Vec<bool> = res
        .circles
        .iter()
        .map(|c| {
            let ccw = c.ccw.unwrap() ^ reversed;
            let z = c.depth + ccw as usize;
            (z % 2 == 1) ^ negate
        })
        .collect();
    let w = r.count_ones() as i32;
    let shift = w + d.n_plus() as i32 - 2 * d.n_minus() as i32;
    let mut terms = BTreeMap::new();
    let mut qd = BTreeMap::new();
    for lab in 0..(1u64 << nc) {
        let mut c = Q::one();
        let mut qq = shift;
        for (i, &neg) in signs.iter().enumerate() {
            let bit = ((lab >> i) & 1) as u8;
            qq += qdeg(bit);
            if bit == 0 && neg {
                c = -c;
            }
        }
        terms.insert((r, lab), c);
        qd.insert((r, lab), qq);
    }
    Ok(LeeChain { terms, qdeg: qd })
}

pub fn lee_generator(d: &OrientedDiagram) -> Result<LeeChain> {
    lee_generator_with(d, false, false)
}

/// Checks that a chain is a cycle of the cube at `t = 1`.
pub fn check_cycle(cube_t1: &FilteredComplex, z: &BTreeMap<usize, Q>) -> Result<()> {
    let dz = cube_t1.apply(z);
    if dz.is_empty() {
        Ok(())
    } else {
        Err(Error::NotACycle(format!("{} nonzero boundary coefficients", dz.len())))
    }
}

/// Filtration level of the class of `z` in a complex at `t = 1`.
pub fn filtration_level(c: &FilteredComplex, z: &BTreeMap<usize, Q>) -> Result<i32> {
    if !c.is_cycle(z) {
        return Err(Error::NotACycle("chain has nonzero boundary".into()));
    }
    c.filtration_level(z).ok_or_else(|| Error::NotACycle("class is zero".into()))
}

/// Everything one engine produces for one oriented diagram.
#[derive(Clone, Debug)]
pub struct LeeData {
    pub reduced: GradedComplex,
    pub homology: HomologySummary,
    /// levels of `[s_o + s_ō]` and `[s_o - s_ō]`
    pub levels: [i32; 2],
}

fn levels_from(red: &Reduced, combos: [BTreeMap<usize, Q>; 2]) -> Result<(FilteredComplex, [i32; 2])> {
    let c1 = red.complex.specialize_t(Q::one());
    let l0 = filtration_level(&c1, &combos[0])?;
    let l1 = filtration_level(&c1, &combos[1])?;
    let (lo, hi) = (l0.min(l1), l0.max(l1));
    if hi != lo + 2 {
        return Err(Error::InconsistentModule(format!("Lee classes at levels {l0} and {l1}, expected a gap of 2")));
    }
    Ok((c1, [l0, l1]))
}

fn combine(a: &BTreeMap<usize, Q>, b: &BTreeMap<usize, Q>, sign: Q) -> BTreeMap<usize, Q> {
    let mut m = a.clone();
    for (&k, &v) in b {
        *m.entry(k).or_insert_with(Q::zero) += sign * v;
    }
    m.retain(|_, v| !v.is_zero());
    m
}

pub fn lee_data_brute(d: &OrientedDiagram, limit: u128, negate: bool) -> Result<LeeData> {
    let cube = build_cube(d, limit)?;
    let so = lee_generator_with(d, false, negate)?;
    let sr = lee_generator_with(d, true, negate)?;
    let c1 = cube.complex.specialize_t(Q::one());
    let (zo, zr) = (so.in_cube(&cube), sr.in_cube(&cube));
    check_cycle(&c1, &zo)?;
    check_cycle(&c1, &zr)?;
    let red = scan_reduce(&cube.complex, &[zo, zr]);
    let combos = [combine(&red.chains[0], &red.chains[1], Q::one()), combine(&red.chains[0], &red.chains[1], -Q::one())];
    let (_, levels) = levels_from(&red, combos)?;
    let homology = homology_qt(&red.complex)?;
    Ok(LeeData { reduced: red.complex, homology, levels })
}

pub fn lee_data_scan(d: &OrientedDiagram, limit: u128, negate: bool) -> Result<LeeData> {
    let (mut ec, mut lc) = d.seifert_colors();
    if negate {
        ec.iter_mut().chain(lc.iter_mut()).for_each(|c| *c ^= 1);
    }
    let red = scan_complex(d, Some((&ec, &lc)), limit)?;
    // s_o ± s_ō is proportional to Ψ_o ± (-1)^N Ψ_ō
    let n = d.seifert_count();
    let eps = if n % 2 == 0 { Q::one() } else { -Q::one() };
    let combos = [combine(&red.chains[0], &red.chains[1], eps), combine(&red.chains[0], &red.chains[1], -eps)];
    let (_, levels) = levels_from(&red, combos)?;
    let homology = homology_qt(&red.complex)?;
    Ok(LeeData { reduced: red.complex, homology, levels })
}

pub fn lee_data(d: &OrientedDiagram, opts: &Options) -> Result<LeeData> {
    match opts.engine {
        Engine::Brute => lee_data_brute(d, opts.limit, false),
        Engine::Scan => lee_data_scan(d, opts.limit, false),
        Engine::Both => {
            let a = lee_data_brute(d, opts.limit, false)?;
            let b = lee_data_scan(d, opts.limit, false)?;
            if a.homology != b.homology {
                return Err(Error::InconsistentModule(format!(
                    "engines disagree on homology: brute {:?} scan {:?}",
                    a.homology, b.homology
                )));
            }
            let (mut la, mut lb) = (a.levels, b.levels);
            la.sort_unstable();
            lb.sort_unstable();
            if la != lb {
                return Err(Error::InconsistentModule(format!("engines disagree on Lee levels: {la:?} vs {lb:?}")));
            }
            Ok(b)
        }
    }
}

/// The s-invariant of a diagram with its stored orientation.
pub fn s_of(d: &OrientedDiagram, opts: &Options) -> Result<i64> {
    if d.is_empty() {
        return Ok(1);
    }
    let ld = lee_data(d, opts)?;
    Ok((ld.levels[0] as i64 + ld.levels[1] as i64) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SReport {
    /// true where a component keeps its stored orientation
    pub orientation: Vec<bool>,
    pub s: i64,
    pub s_min: i64,
    pub s_max: i64,
    pub s_minus: i64,
    pub s_plus: i64,
    pub free_gen_q_degrees: Vec<i32>,
}

/// Full report for `d` reoriented by `flip` (true = reverse that component).
pub fn s_invariant(d: &OrientedDiagram, flip: Option<&[bool]>, opts: &Options) -> Result<SReport> {
    let d = match flip {
        Some(f) => d.reorient(f)?,
        None => d.clone(),
    };
    let orientation = match flip {
        Some(f) => f.iter().map(|&x| !x).collect(),
        None => vec![true; d.n_components],
    };
    if d.is_empty() {
        return Ok(SReport {
            orientation,
            s: 1,
            s_min: 0,
            s_max: 2,
            s_minus: 1,
            s_plus: 1,
            free_gen_q_degrees: vec![],
        });
    }
    let ld = lee_data(&d, opts)?;
    let s_min = ld.levels[0].min(ld.levels[1]) as i64;
    let s = s_min + 1;
    let s_plus = -s_of(&d.mirror(), opts)?;
    let mut free_gen_q_degrees: Vec<i32> = ld.homology.free.iter().map(|&(_, q)| q).collect();
    free_gen_q_degrees.sort_unstable();
    Ok(SReport { orientation, s, s_min, s_max: s_min + 2, s_minus: s, s_plus, free_gen_q_degrees })
}

/// One report per orientation class `{o, ō}`; the first component keeps
/// its stored orientation.
pub fn s_all_orientations(d: &OrientedDiagram, opts: &Options) -> Result<Vec<SReport>> {
    let l = d.n_components;
    if l == 0 {
        return Ok(vec![s_invariant(d, None, opts)?]);
    }
    if l > 12 {
        return Err(Error::ResourceLimit { needed: 1u128 << (l - 1), limit: 1 << 11 });
    }
    (0..(1u64 << (l - 1)))
        .map(|m| {
            let flip: Vec<bool> = (0..l).map(|i| i > 0 && (m >> (i - 1)) & 1 == 1).collect();
            s_invariant(d, Some(&flip), opts)
        })
        .collect()
}

/// For knots the two free generators sit at `q = s ± 1`.
pub fn s_from_module(hs: &HomologySummary, components: usize) -> Result<Option<i64>> {
    if components != 1 {
        return Ok(None);
    }
    if hs.free.len() != 2 {
        return Err(Error::InconsistentModule(format!("free rank {} for a knot", hs.free.len())));
    }
    Ok(Some((hs.free[0].1 as i64 + hs.free[1].1 as i64) / 2))
}
