//! Building diagrams: PD codes, braid and plat closures, sums and unions.

use khlee::linkdiag::{BraidWord, OrientedDiagram};

fn show(name: &str, d: &OrientedDiagram) {
    println!(
        "{name:>16}: {} crossings (+{} -{}), {} components, {} Seifert circles",
        d.n_crossings(),
        d.n_plus(),
        d.n_minus(),
        d.n_components,
        d.seifert_count()
    );
}

fn main() -> khlee::Result<()> {
    let trefoil = OrientedDiagram::from_braid(&BraidWord::new(2, vec![1, 1, 1]))?;
    show("trefoil", &trefoil);
    println!("{:>16}  {}", "", trefoil.to_pd_string());

    let fig8 = OrientedDiagram::parse_pd("PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]")?;
    show("figure-eight", &fig8);

    let granny = trefoil.connect_sum(0, &trefoil, 0)?;
    show("granny", &granny);
    show("square", &trefoil.connect_sum(0, &trefoil.mirror(), 0)?);
    show("trefoil + unknot", &trefoil.disjoint_union(&OrientedDiagram::unknot()));

    // plat closure caps strands in pairs at both ends
    let plat = OrientedDiagram::from_plat(&BraidWord::with_orientation(4, vec![2, 2, 2], vec![true, false, false, true]))?;
    show("plat of s2^3", &plat);

    let hopf = OrientedDiagram::from_braid(&BraidWord::new(2, vec![1, 1]))?;
    println!("linking matrix of the Hopf link: {:?}", hopf.linking_matrix());
    Ok(())
}
