//! Links in `#^r(S^1 x S^2)` drawn as a braid-like tangle with handle
//! regions, and their s-invariants via full-twist approximation.
//!
//! A handle is a contiguous interval of strand positions `[a, b]`
//! (1-based) at a position `at` of the word; the diagram `D(k)` has
//! `k` full twists spliced in there. An interval with `b = a - 1` is
//! empty: the handle is present but no strand passes through it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leegen::{s_of, Options};
use crate::linkdiag::{BraidWord, OrientedDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Handle {
    pub a: usize,
    pub b: usize,
    /// number of base letters below the twist region
    pub at: usize,
}

impl Handle {
    pub fn width(&self) -> usize {
        (self.b + 1).saturating_sub(self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SsrDiagram {
    pub base: BraidWord,
    pub handles: Vec<Handle>,
    /// plat closure instead of the standard braid closure
    pub plat: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SsrJson {
    strands: usize,
    #[serde(default)]
    orient: Option<String>,
    #[serde(default)]
    braid: Vec<i32>,
    #[serde(default)]
    handles: Vec<Vec<usize>>,
    #[serde(default)]
    closure: Option<String>,
}

/// Full twist on `n` strands, `k` times; negative `k` gives the inverse.
pub fn full_twist(n: usize, k: i64) -> BraidWord {
    let one: Vec<i32> = (1..n as i32).collect::<Vec<_>>().repeat(n);
    let letters = if k >= 0 {
        one.repeat(k as usize)
    } else {
        let inv: Vec<i32> = one.iter().rev().map(|&l| -l).collect();
        inv.repeat(k.unsigned_abs() as usize)
    };
    BraidWord::new(n, letters)
}

/// Orientation of the strand at every position after the first `at` letters.
fn orient_at(b: &BraidWord, at: usize) -> Vec<bool> {
    let mut dir = b.up.clone();
    for &l in &b.letters[..at] {
        let a = l.unsigned_abs() as usize - 1;
        dir.swap(a, a + 1);
    }
    dir
}

impl SsrDiagram {
    pub fn new(base: BraidWord, handles: Vec<Handle>, plat: bool) -> Result<Self> {
        let s = SsrDiagram { base, handles, plat };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let n = self.base.strands;
        for h in &self.handles {
            if h.a == 0 || h.b > n || h.b + 1 < h.a {
                return Err(Error::Invalid(format!("handle [{}, {}] outside strands 1..={n}", h.a, h.b)));
            }
            if h.at > self.base.letters.len() {
                return Err(Error::Invalid(format!("handle position {} past the end of the word", h.at)));
            }
        }
        for (i, h) in self.handles.iter().enumerate() {
            for g in &self.handles[i + 1..] {
                if h.width() > 0 && g.width() > 0 && h.a <= g.b && g.a <= h.b {
                    return Err(Error::Invalid(format!(
                        "handles [{}, {}] and [{}, {}] overlap",
                        h.a, h.b, g.a, g.b
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses the JSON form
    /// `{"strands": N, "orient": "ud..", "braid": [..], "handles": [[a,b], [a,b,at]], "closure": "plat"}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let j: SsrJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let up = match &j.orient {
            None => vec![true; j.strands],
            Some(p) => p
                .chars()
                .map(|c| match c {
                    'u' | 'U' => Ok(true),
                    'd' | 'D' => Ok(false),
                    _ => Err(Error::Parse(format!("bad orientation character '{c}'"))),
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let plat = match j.closure.as_deref() {
            None | Some("braid") => false,
            Some("plat") => true,
            Some(o) => return Err(Error::Parse(format!("unknown closure '{o}'"))),
        };
        let handles = j
            .handles
            .iter()
            .map(|h| match h.as_slice() {
                [a, b] => Ok(Handle { a: *a, b: *b, at: 0 }),
                [a, b, at] => Ok(Handle { a: *a, b: *b, at: *at }),
                _ => Err(Error::Parse(format!("handle {h:?} must be [a, b] or [a, b, at]"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(BraidWord::with_orientation(j.strands, j.braid, up), handles, plat)
            .map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let orient: String = self.base.up.iter().map(|&u| if u { 'u' } else { 'd' }).collect();
        let mut v = serde_json::json!({
            "strands": self.base.strands,
            "orient": orient,
            "braid": self.base.letters,
            "handles": self.handles.iter().map(|h| vec![h.a, h.b, h.at]).collect::<Vec<_>>(),
        });
        if self.plat {
            v["closure"] = "plat".into();
        }
        v.to_string()
    }

    pub fn r(&self) -> usize {
        self.handles.len()
    }

    /// Algebraic intersection with each surgery sphere.
    pub fn eta(&self) -> Vec<i64> {
        self.handles
            .iter()
            .map(|h| {
                let dir = orient_at(&self.base, h.at);
                (h.a..=h.b).map(|p| if dir[p - 1] { 1 } else { -1 }).sum()
            })
            .collect()
    }

    pub fn is_null_homologous(&self) -> bool {
        self.eta().iter().all(|&e| e == 0)
    }

    pub fn is_two_divisible(&self) -> bool {
        self.eta().iter().all(|&e| e % 2 == 0)
    }

    /// Mirror image: every crossing of the base changes.
    pub fn mirror(&self) -> Self {
        let mut m = self.clone();
        m.base.letters.iter_mut().for_each(|l| *l = -*l);
        m
    }

    /// Reverses every component.
    pub fn reverse(&self) -> Self {
        let mut m = self.clone();
        m.base.up.iter_mut().for_each(|u| *u = !*u);
        m
    }

    /// Side-by-side union; the handles of `other` come after ours.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.plat != other.plat {
            return Err(Error::Invalid("cannot place a plat closure next to a braid closure".into()));
        }
        let n1 = self.base.strands;
        let len1 = self.base.letters.len();
        let mut letters = self.base.letters.clone();
        letters.extend(other.base.letters.iter().map(|&l| l.signum() * (l.abs() + n1 as i32)));
        let mut up = self.base.up.clone();
        up.extend(&other.base.up);
        let mut handles = self.handles.clone();
        handles.extend(other.handles.iter().map(|h| Handle { a: h.a + n1, b: h.b + n1, at: h.at + len1 }));
        Self::new(BraidWord::with_orientation(n1 + other.base.strands, letters, up), handles, self.plat)
    }

    /// The same link after one Dehn twist along every handle sphere.
    pub fn dehn_twist(&self) -> Self {
        let mut s = self.clone();
        s.base = self.twisted_word(&vec![1; self.r()]);
        // twists on disjoint intervals commute, so a handle may sit at the
        // start of the block spliced at its own position
        for (i, h) in s.handles.iter_mut().enumerate() {
            let at = self.handles[i].at;
            h.at += self
                .handles
                .iter()
                .filter(|g| g.at < at)
                .map(|g| g.width() * g.width().saturating_sub(1))
                .sum::<usize>();
        }
        s
    }

    fn twisted_word(&self, k: &[i64]) -> BraidWord {
        let mut letters = self.base.letters.clone();
        let mut order: Vec<usize> = (0..self.r()).collect();
        // splice from the top down so positions stay valid
        order.sort_by_key(|&i| std::cmp::Reverse(self.handles[i].at));
        for i in order {
            let h = self.handles[i];
            let ft = full_twist(h.width(), k[i]);
            let shift = h.a as i32 - 1;
            let piece: Vec<i32> = ft.letters.iter().map(|&l| l.signum() * (l.abs() + shift)).collect();
            letters.splice(h.at..h.at, piece);
        }
        BraidWord::with_orientation(self.base.strands, letters, self.base.up.clone())
    }

    /// The diagram `D(k)` in the three-sphere.
    pub fn insert_twists(&self, k: &[i64]) -> Result<OrientedDiagram> {
        if k.len() != self.r() {
            return Err(Error::Invalid(format!("{} twist counts for {} handles", k.len(), self.r())));
        }
        let w = self.twisted_word(k);
        if self.plat {
            OrientedDiagram::from_plat(&w)
        } else {
            OrientedDiagram::from_braid(&w)
        }
    }

    pub fn uniform(&self, k: i64) -> Result<OrientedDiagram> {
        self.insert_twists(&vec![k; self.r()])
    }

    pub fn base_diagram(&self) -> Result<OrientedDiagram> {
        self.uniform(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

/// Number of twists after which `s(D(k))` is known to be stable.
pub fn approx_threshold(s: &SsrDiagram, side: Side) -> Result<i64> {
    let d = s.base_diagram()?;
    let n = match side {
        Side::Minus => d.n_plus(),
        Side::Plus => d.n_minus(),
    };
    Ok((n as i64 + 2 + 1) / 2)
}

fn genus_lower(s: i64, l: usize) -> i64 {
    let v = s - l as i64 + 1;
    // ceil(v / 2), never negative
    (v.div_euclid(2) + v.rem_euclid(2)).max(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SsrReport {
    pub s_minus: i64,
    pub s_plus: i64,
    pub k_used_minus: i64,
    pub k_used_plus: i64,
    pub eta: Vec<i64>,
    #[serde(rename = "gDS_lower")]
    pub g_ds_lower: i64,
    #[serde(rename = "gSD_lower")]
    pub g_sd_lower: i64,
    /// `s(D(k))` already agrees with `s(D(k + 1))` on the minus side
    pub stabilized: bool,
}

/// `s_-` and `s_+` of a null-homologous link.
pub fn s_ssr(s: &SsrDiagram, opts: &Options) -> Result<SsrReport> {
    let eta = s.eta();
    if eta.iter().any(|&e| e != 0) {
        return Err(Error::NotNullHomologous(eta));
    }
    let km = approx_threshold(s, Side::Minus)?;
    let kp = approx_threshold(s, Side::Plus)?;
    let s_minus = s_of(&s.uniform(km)?, opts)?;
    let s_plus = -s_of(&s.uniform(-kp)?.mirror(), opts)?;
    let next = s_of(&s.uniform(km + 1)?, opts)?;
    let l = s.base_diagram()?.n_components;
    Ok(SsrReport {
        s_minus,
        s_plus,
        k_used_minus: km,
        k_used_plus: kp,
        eta,
        g_ds_lower: genus_lower(s_minus, l),
        g_sd_lower: genus_lower(s_plus, l),
        stabilized: next == s_minus,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabRow {
    pub k: i64,
    pub s: i64,
    /// `s - k * sum |eta|(|eta| - 1)`; equal to `s` when null-homologous
    pub shifted: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabTable {
    pub threshold: i64,
    pub eta: Vec<i64>,
    pub rows: Vec<StabRow>,
    pub stabilized: bool,
}

/// `s(D(k))` for `k` from `k_min` (default: the threshold) to `k_max`.
/// Works for any homology class; only the shifted column is meaningful
/// then.
pub fn stabilization_sweep(s: &SsrDiagram, k_min: Option<i64>, k_max: i64, opts: &Options) -> Result<StabTable> {
    let threshold = approx_threshold(s, Side::Minus)?;
    let eta = s.eta();
    let shift: i64 = eta.iter().map(|e| e.abs() * (e.abs() - 1)).sum();
    let rows = (k_min.unwrap_or(threshold)..=k_max)
        .map(|k| {
            let v = s_of(&s.uniform(k)?, opts)?;
            Ok(StabRow { k, s: v, shifted: v - k * shift })
        })
        .collect::<Result<Vec<_>>>()?;
    let stabilized = rows.iter().filter(|r| r.k >= threshold).all(|r| r.shifted == rows.last().unwrap().shifted);
    Ok(StabTable { threshold, eta, rows, stabilized })
}

/// Stabilization table from the threshold on, for null-homologous links.
pub fn stabilization_check(s: &SsrDiagram, k_max: i64, opts: &Options) -> Result<StabTable> {
    if !s.is_null_homologous() {
        return Err(Error::NotNullHomologous(s.eta()));
    }
    stabilization_sweep(s, None, k_max, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BennequinReport {
    pub sl: i64,
    pub s_plus: i64,
    pub s_plus_bound_ok: bool,
}

/// Self-linking of a braid closure against a known `s_+`.
pub fn bennequin_report(b: &BraidWord, s_plus: i64) -> BennequinReport {
    let sl = b.writhe() - b.strands as i64;
    BennequinReport { sl, s_plus, s_plus_bound_ok: sl + 1 <= s_plus }
}

/// The same for a closed braid in the three-sphere, computing `s_+`.
pub fn bennequin_s3(b: &BraidWord, opts: &Options) -> Result<BennequinReport> {
    let d = OrientedDiagram::from_braid(b)?;
    let s_plus = -s_of(&d.mirror(), opts)?;
    Ok(bennequin_report(b, s_plus))
}

/// `n^+ - Seif + 1` of the base diagram, which must be positive.
pub fn positivity_formula(s: &SsrDiagram) -> Result<i64> {
    positivity_of(&s.base_diagram()?)
}

pub fn positivity_of(d: &OrientedDiagram) -> Result<i64> {
    if d.n_minus() > 0 {
        return Err(Error::NotPositive(d.n_minus()));
    }
    Ok(d.n_plus() as i64 - d.seifert_count() as i64 + 1)
}
