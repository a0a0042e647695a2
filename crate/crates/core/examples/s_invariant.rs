//! s-invariants of a few knots and links, with every orientation of a link.

use khlee::corpus::{self, torus};
use khlee::leegen::{s_all_orientations, s_of, Options};
use khlee::linkdiag::{BraidWord, OrientedDiagram};

fn main() -> khlee::Result<()> {
    let opts = Options::default();
    for (name, d) in [
        ("unknot", OrientedDiagram::unknot()),
        ("trefoil", corpus::trefoil()),
        ("figure-eight", corpus::figure_eight()),
        ("T(3,4)", torus(3, 4)),
        ("T(4,4)", torus(4, 4)),
    ] {
        println!("{name:>12}: s = {}", s_of(&d, &opts)?);
    }

    let b = BraidWord::parse("braid 3: 1 1 2 2 1 1")?;
    let d = OrientedDiagram::from_braid(&b)?;
    println!("\n{} components, {} crossings", d.n_components, d.n_crossings());
    for r in s_all_orientations(&d, &opts)? {
        println!("  orientation {:?}: s = {}, s_+ = {}", r.orientation, r.s, r.s_plus);
    }
    Ok(())
}
