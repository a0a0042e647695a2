//! Runs the property suite for links with handles and prints its table.

use khlee::leegen::Options;
use khlee::verify::run_suite;

fn main() -> khlee::Result<()> {
    let rep = run_suite("ssr-properties", &Options::default())?;
    print!("{}", rep.table());
    println!("{}", if rep.ok() { "all gating checks passed" } else { "FAILED" });
    Ok(())
}
