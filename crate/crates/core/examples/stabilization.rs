//! s(D(k)) as the number of inserted full twists grows.

use khlee::corpus::{cable, whitehead_plus};
use khlee::leegen::Options;
use khlee::ssr::{stabilization_check, stabilization_sweep};

fn main() -> khlee::Result<()> {
    let opts = Options::default();
    let t = stabilization_check(&whitehead_plus(), 5, &opts)?;
    println!("Wh+: threshold {}, constant: {}", t.threshold, t.stabilized);
    for r in &t.rows {
        println!("  k = {}  s = {}", r.k, r.s);
    }

    // a cable is not null-homologous; s grows with k but the shift is fixed
    let t = stabilization_sweep(&cable(3, 2), Some(0), 3, &opts)?;
    println!("C(3,2), eta = {:?}:", t.eta);
    for r in &t.rows {
        println!("  k = {}  s = {:>3}  s - k p(p-1) = {}", r.k, r.s, r.shifted);
    }
    Ok(())
}
