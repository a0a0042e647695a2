//! Homology over Q[t] of a PD code, computed both ways.

use khlee::cube::{build_cube, DEFAULT_LIMIT};
use khlee::homology::homology_qt;
use khlee::linkdiag::OrientedDiagram;
use khlee::tangle::scan_complex;

fn main() -> khlee::Result<()> {
    // 5_2
    let d = OrientedDiagram::parse_pd("PD[X(1,4,2,5), X(3,8,4,9), X(5,10,6,1), X(9,6,10,7), X(7,2,8,3)]")?;
    let cube = build_cube(&d, DEFAULT_LIMIT)?;
    let red = scan_complex(&d, None, DEFAULT_LIMIT)?;
    println!("cube: {} generators, scanned: {}", cube.complex.len(), red.complex.len());

    let hs = homology_qt(&red.complex)?;
    assert_eq!(hs, homology_qt(&cube.complex)?);
    println!("free summands (h, q): {:?}", hs.free);
    println!("torsion Q[t]/(t^k) at (h, q, k): {:?}", hs.torsion);
    println!("Khovanov homology at t = 0:");
    for ((h, q), n) in hs.dims_t0() {
        println!("  h = {h:>2}  q = {q:>3}  dim {n}");
    }
    print!("\nreduced complex:\n{}", red.complex.export());
    Ok(())
}
