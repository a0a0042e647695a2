//! s_- and s_+ of the Whitehead knot and of F_p in a connected sum of
//! S1 x S2, through finite full-twist approximations.

use khlee::corpus::{f_pq, whitehead_plus};
use khlee::leegen::Options;
use khlee::ssr::{bennequin_report, s_ssr, SsrDiagram};
use khlee::linkdiag::BraidWord;

fn main() -> khlee::Result<()> {
    let opts = Options::default();
    let wh = whitehead_plus();
    println!("Wh+ as JSON: {}", wh.to_json());
    let r = s_ssr(&wh, &opts)?;
    println!("Wh+: s_- = {}, s_+ = {} (twists used {} and {})", r.s_minus, r.s_plus, r.k_used_minus, r.k_used_plus);
    println!("     genus bounds {} and {}", r.g_ds_lower, r.g_sd_lower);

    let dt = s_ssr(&wh.dehn_twist(), &opts)?;
    let beta = bennequin_report(&BraidWord::new(2, vec![1, 1, 1]), dt.s_plus);
    println!("after a Dehn twist: s_+ = {}, sl = {}, bound holds: {}", dt.s_plus, beta.sl, beta.s_plus_bound_ok);

    for p in 1..=2 {
        let r = s_ssr(&f_pq(p, p), &opts)?;
        println!("F{p}: s_- = {}, s_+ = {}", r.s_minus, r.s_plus);
    }

    let json = r#"{"strands": 4, "orient": "udud", "braid": [1, 1], "handles": [[3, 4]]}"#;
    let r = s_ssr(&SsrDiagram::parse_json(json)?, &opts)?;
    println!("Hopf link next to F1: s_- = {}, s_+ = {}", r.s_minus, r.s_plus);
    Ok(())
}
