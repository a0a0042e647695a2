//! Command line front end. `run` returns the exit code and the text to
//! print so it can be driven from tests.

use std::io::Read;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::corpus::{self, Builtin};
use crate::cube::{build_cube, DEFAULT_LIMIT};
use crate::error::{Error, Result};
use crate::frobenius::Q;
use crate::leegen::{self, lee_data, s_all_orientations, s_invariant, Engine, Options};
use crate::linkdiag::{BraidWord, OrientedDiagram};
use crate::ssr::{self, SsrDiagram};
use crate::tangle::scan_complex;
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "khlee", version, about = "Khovanov-Lee homology and s-invariants of links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// built-in diagram, e.g. trefoil+, T(3,4), U3, F2, F(2,1), C(2,1), Wh+
    #[arg(long, global = true, value_name = "NAME")]
    pub builtin: Option<String>,
    /// PD code: a file, '-' for stdin, or the code itself
    #[arg(long, global = true, value_name = "FILE")]
    pub pd: Option<String>,
    /// braid word `braid <n> [ud..]: w1 w2 ...`: a file, '-' or inline
    #[arg(long, global = true, value_name = "FILE")]
    pub braid: Option<String>,
    /// JSON diagram with handles: a file, '-' or inline
    #[arg(long, global = true, value_name = "FILE")]
    pub ssr: Option<String>,
    #[arg(long, global = true, default_value = "scan", value_parser = parse_engine)]
    pub engine: Engine,
    /// largest number of twists for `stab`, or largest p for `bench`
    #[arg(long, global = true)]
    pub kmax: Option<i64>,
    /// most generators any single complex may have
    #[arg(long, global = true, env = "KHLEE_LIMIT")]
    pub limit: Option<u128>,
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    #[arg(long, global = true)]
    pub table: bool,
    /// leave out the version and timestamp block
    #[arg(long, global = true)]
    pub no_meta: bool,
}

fn parse_engine(s: &str) -> std::result::Result<Engine, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// s-invariant report
    S {
        /// one report per orientation class
        #[arg(long)]
        all: bool,
    },
    /// homology over Q[t] and its t = 0 dimensions
    Kh,
    /// Lee homology and the levels of the two Lee classes
    Lee,
    /// s_- and s_+ of a link with handles
    SsrS,
    /// s(D(k)) from the approximation threshold up to --kmax
    Stab {
        /// allow links that are not null-homologous
        #[arg(long)]
        raw: bool,
    },
    /// run a property suite over the bundled corpus
    Verify {
        /// suite name; all suites when omitted
        #[arg(long)]
        suite: Option<String>,
    },
    /// time the engines on T(p,p)
    Bench,
}

enum Input {
    S3(OrientedDiagram),
    Ssr(SsrDiagram),
}

fn read_source(v: &str) -> Result<String> {
    if v == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    if Path::new(v).is_file() {
        return std::fs::read_to_string(v).map_err(|e| Error::Invalid(format!("{v}: {e}")));
    }
    Ok(v.to_string())
}

impl Cli {
    fn options(&self) -> Options {
        Options { engine: self.engine, limit: self.limit.unwrap_or(DEFAULT_LIMIT) }
    }

    fn input(&self) -> Result<Input> {
        let given = [&self.builtin, &self.pd, &self.braid, &self.ssr].iter().filter(|x| x.is_some()).count();
        if given != 1 {
            return Err(Error::Invalid("give exactly one of --builtin, --pd, --braid, --ssr".into()));
        }
        if let Some(n) = &self.builtin {
            return Ok(match corpus::builtin(n)? {
                Builtin::S3(d) => Input::S3(d),
                Builtin::Ssr(s) => Input::Ssr(s),
            });
        }
        if let Some(p) = &self.pd {
            return Ok(Input::S3(OrientedDiagram::parse_pd(&read_source(p)?)?));
        }
        if let Some(b) = &self.braid {
            return Ok(Input::S3(OrientedDiagram::from_braid(&BraidWord::parse(&read_source(b)?)?)?));
        }
        let s = self.ssr.as_ref().unwrap();
        Ok(Input::Ssr(SsrDiagram::parse_json(&read_source(s)?)?))
    }

    fn diagram(&self) -> Result<OrientedDiagram> {
        match self.input()? {
            Input::S3(d) => Ok(d),
            Input::Ssr(_) => Err(Error::Invalid("this input has handles; use ssr-s or stab".into())),
        }
    }

    fn ssr_input(&self) -> Result<SsrDiagram> {
        match self.input()? {
            Input::Ssr(s) => Ok(s),
            Input::S3(_) => Err(Error::Invalid("this command needs a diagram with handles (--ssr)".into())),
        }
    }
}

/// Parses `args` and runs the command.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            (code, e.to_string())
        }
    }
}

pub fn run(cli: &Cli) -> (i32, String) {
    log::debug!("running {:?}", cli.command);
    let (code, value, text) = match execute(cli) {
        Ok(v) => v,
        Err(e) => {
            let v = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            return (2, format!("{}\n", serde_json::to_string(&v).unwrap()));
        }
    };
    if cli.table {
        return (code, text);
    }
    let mut value = value;
    if !cli.no_meta {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        value["meta"] = json!({"version": env!("CARGO_PKG_VERSION"), "timestamp": secs});
    }
    (code, format!("{}\n", serde_json::to_string(&value).unwrap()))
}

/// Exit code, JSON value and table text.
fn execute(cli: &Cli) -> Result<(i32, Value, String)> {
    let opts = cli.options();
    match &cli.command {
        Command::S { all } => {
            let d = cli.diagram()?;
            if *all {
                let reports = s_all_orientations(&d, &opts)?;
                let text = reports.iter().map(report_line).collect::<String>();
                Ok((0, json!({ "reports": reports }), text))
            } else {
                let r = s_invariant(&d, None, &opts)?;
                Ok((0, serde_json::to_value(&r).unwrap(), report_line(&r)))
            }
        }
        Command::Kh => {
            let d = cli.diagram()?;
            let hs = if d.is_empty() { Default::default() } else { lee_data(&d, &opts)?.homology };
            let dims: Vec<Value> =
                hs.dims_t0().iter().map(|(&(h, q), &n)| json!({"h": h, "q": q, "dim": n})).collect();
            let mut text = format!("free over Q[t]: {:?}\ntorsion (h, q, k): {:?}\nt = 0:\n", hs.free, hs.torsion);
            for ((h, q), n) in hs.dims_t0() {
                text += &format!("  h = {h:>3}  q = {q:>3}  dim {n}\n");
            }
            let v = json!({
                "free": hs.free,
                "torsion": hs.torsion,
                "t0_dims": dims,
                "t0_total": hs.total_t0(),
            });
            Ok((0, v, text))
        }
        Command::Lee => {
            let d = cli.diagram()?;
            if d.is_empty() {
                return Ok((0, json!({"t1_dims": {}, "levels": [], "s": 1}), "empty link, s = 1\n".into()));
            }
            let ld = lee_data(&d, &opts)?;
            let c1 = ld.reduced.specialize_t(Q::from_integer(1));
            let dims = c1.homology_dims();
            let total: usize = dims.values().sum();
            let (lo, hi) = (ld.levels[0].min(ld.levels[1]), ld.levels[0].max(ld.levels[1]));
            let text = format!(
                "t = 1 dimensions by h: {dims:?} (total {total})\nq[s_o + s_obar] = {}, q[s_o - s_obar] = {}\n",
                ld.levels[0], ld.levels[1]
            );
            let v = json!({
                "t1_dims": dims.iter().map(|(h, n)| (h.to_string(), json!(n))).collect::<serde_json::Map<String, Value>>(),
                "t1_total": total,
                "levels": ld.levels,
                "s_min": lo,
                "s_max": hi,
            });
            Ok((0, v, text))
        }
        Command::SsrS => {
            let s = cli.ssr_input()?;
            let r = ssr::s_ssr(&s, &opts)?;
            let text = format!(
                "s_- = {} (k = {}), s_+ = {} (k = {}), eta = {:?}, genus bounds {} / {}\n",
                r.s_minus, r.k_used_minus, r.s_plus, r.k_used_plus, r.eta, r.g_ds_lower, r.g_sd_lower
            );
            Ok((0, serde_json::to_value(&r).unwrap(), text))
        }
        Command::Stab { raw } => {
            let s = cli.ssr_input()?;
            let threshold = ssr::approx_threshold(&s, ssr::Side::Minus)?;
            let kmax = cli.kmax.unwrap_or(threshold + 2);
            let t = if *raw {
                ssr::stabilization_sweep(&s, None, kmax, &opts)?
            } else {
                ssr::stabilization_check(&s, kmax, &opts)?
            };
            let mut text = format!("threshold {}, eta {:?}\n", t.threshold, t.eta);
            for r in &t.rows {
                text += &format!("  k = {:>2}  s = {:>4}  shifted = {:>4}\n", r.k, r.s, r.shifted);
            }
            text += &format!("stabilized: {}\n", t.stabilized);
            Ok((0, serde_json::to_value(&t).unwrap(), text))
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = match suite {
                Some(s) => vec![s.as_str()],
                None => verify::SUITES.to_vec(),
            };
            let reports = names.iter().map(|n| verify::run_suite(n, &opts)).collect::<Result<Vec<_>>>()?;
            let ok = reports.iter().all(|r| r.ok());
            let text = reports.iter().map(|r| r.table()).collect::<String>();
            Ok((if ok { 0 } else { 1 }, json!({"ok": ok, "suites": reports}), text))
        }
        Command::Bench => {
            let pmax = cli.kmax.unwrap_or(4).max(2) as usize;
            let mut rows = vec![];
            let mut text = String::new();
            for p in 2..=pmax {
                let d = corpus::torus(p, p as i64);
                let t = Instant::now();
                let brute = build_cube(&d, opts.limit).map(|c| c.complex.len());
                let t_brute = t.elapsed().as_secs_f64();
                let t = Instant::now();
                let red = scan_complex(&d, None, opts.limit).map(|r| r.complex.len());
                let t_scan = t.elapsed().as_secs_f64();
                let s = leegen::s_of(&d, &Options { engine: Engine::Scan, ..opts })?;
                text += &format!(
                    "T({p},{p}): {} crossings, cube {} gens in {t_brute:.3}s, scan {} gens in {t_scan:.3}s, s = {s}\n",
                    d.n_crossings(),
                    brute.as_ref().map(|n| n.to_string()).unwrap_or_else(|e| e.kind().into()),
                    red.as_ref().map(|n| n.to_string()).unwrap_or_else(|e| e.kind().into()),
                );
                rows.push(json!({
                    "p": p,
                    "crossings": d.n_crossings(),
                    "cube_generators": brute.ok(),
                    "cube_seconds": t_brute,
                    "scan_generators": red.ok(),
                    "scan_seconds": t_scan,
                    "s": s,
                }));
            }
            Ok((0, json!({ "bench": rows }), text))
        }
    }
}

fn report_line(r: &leegen::SReport) -> String {
    format!(
        "orientation {:?}: s = {}, s_min = {}, s_max = {}, s_- = {}, s_+ = {}\n",
        r.orientation, r.s, r.s_min, r.s_max, r.s_minus, r.s_plus
    )
}
