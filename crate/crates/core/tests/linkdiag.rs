use khlee::linkdiag::{BraidWord, OrientedDiagram};

const TREFOIL_L: &str = "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]";
const FIG8: &str = "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]";

fn braid(n: usize, w: &[i32]) -> OrientedDiagram {
    OrientedDiagram::from_braid(&BraidWord::new(n, w.to_vec())).unwrap()
}

#[test]
fn empty_pd() {
    let d = OrientedDiagram::parse_pd("PD[]").unwrap();
    assert_eq!(d.n_components, 0);
    assert!(d.is_empty());
}

#[test]
fn trefoil_signs() {
    let d = OrientedDiagram::parse_pd(TREFOIL_L).unwrap();
    assert_eq!((d.n_plus(), d.n_minus(), d.n_components), (0, 3, 1));
    let m = d.mirror();
    assert_eq!((m.n_plus(), m.n_minus()), (3, 0));
    assert_eq!(m.mirror(), d);
    assert_eq!(d.seifert_count(), 2);
}

#[test]
fn figure_eight() {
    let d = OrientedDiagram::parse_pd(FIG8).unwrap();
    assert_eq!((d.n_plus(), d.n_minus(), d.writhe()), (2, 2, 0));
    assert_eq!(d.seifert_count(), 3);
    let b = braid(3, &[1, -2, 1, -2]);
    assert_eq!((b.n_plus(), b.n_minus(), b.n_components), (2, 2, 1));
    assert_eq!(b.seifert_count(), 3);
}

#[test]
fn braid_basics() {
    let u = braid(2, &[]);
    assert_eq!((u.n_components, u.n_crossings()), (2, 0));
    let t = braid(2, &[1, 1, 1]);
    assert_eq!((t.n_plus(), t.n_components, t.seifert_count()), (3, 1, 2));
    let f = OrientedDiagram::from_braid(&BraidWord::with_orientation(
        4,
        [1, 2, 3].repeat(4),
        vec![true, true, false, false],
    ));
    // mixed orientation needs a pure braid permutation compatible with the pattern
    let f = f.unwrap();
    assert_eq!(f.n_components, 4);
    assert_eq!(f.n_crossings(), 12);
}

#[test]
fn hopf_linking() {
    let h = braid(2, &[1, 1]);
    assert_eq!(h.linking_matrix(), vec![vec![0, 1], vec![1, 0]]);
    let r = h.reorient(&[false, true]).unwrap();
    assert_eq!(r.linking_matrix(), vec![vec![0, -1], vec![-1, 0]]);
    assert_eq!(h.reverse().linking_matrix(), h.linking_matrix());
}

#[test]
fn hopf_resolutions() {
    let h = braid(2, &[1, 1]);
    let depths = |c: [u8; 2]| {
        let mut v: Vec<usize> = h.resolve(&c).circles.iter().map(|c| c.depth).collect();
        v.sort();
        v
    };
    assert_eq!(depths([0, 0]), vec![0, 1]);
    assert_eq!(depths([1, 1]), vec![0, 0]);
    let o = h.resolve(&h.oriented_choice());
    for c in &o.circles {
        assert_eq!(c.ccw, Some(false));
    }
}

#[test]
fn sums() {
    let t = braid(2, &[1, 1, 1]);
    let g = t.connect_sum(0, &t, 0).unwrap();
    assert_eq!((g.n_plus(), g.n_components), (6, 1));
    let h = braid(2, &[1, 1]);
    let hh = h.connect_sum(1, &h, 0).unwrap();
    assert_eq!(hh.n_components, 3);
    let u = OrientedDiagram::unknot();
    assert_eq!(u.disjoint_union(&u).n_components, 2);
    assert_eq!(u.connect_sum(0, &t, 0).unwrap().n_components, 1);
}

#[test]
fn braid_parse() {
    let b = BraidWord::parse("braid 3 uud: 1 -2 1").unwrap();
    assert_eq!(b.letters, vec![1, -2, 1]);
    assert_eq!(b.up, vec![true, true, false]);
    assert!(BraidWord::parse("braid 2: 2").is_err());
}
