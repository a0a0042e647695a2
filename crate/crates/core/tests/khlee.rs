use std::collections::BTreeMap;

use khlee::complex::GradedComplex;
use khlee::corpus::{self, torus};
use khlee::cube::{build_cube, DEFAULT_LIMIT};
use khlee::dsu::Dsu;
use khlee::frobenius::{self, Mono, Q};
use khlee::homology::homology_qt;
use khlee::linkdiag::{BraidWord, OrientedDiagram};
use khlee::reduce::scan_reduce;
use khlee::tangle::scan_complex;
use num_traits::One;
use proptest::prelude::*;

type Laurent = BTreeMap<i32, i64>;

fn braid(n: usize, w: &[i32]) -> OrientedDiagram {
    OrientedDiagram::from_braid(&BraidWord::new(n, w.to_vec())).unwrap()
}

fn add(p: &mut Laurent, e: i32, c: i64) {
    let v = p.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut r = Laurent::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            add(&mut r, i + j, x * y);
        }
    }
    r
}

/// Unnormalized Jones polynomial by a state sum read straight off the PD
/// quadruples, independent of the cube code.
fn jones_oracle(d: &OrientedDiagram) -> Laurent {
    let n = d.n_crossings();
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let mut total = Laurent::new();
    let loop_factor: Laurent = [(-1, 1), (1, 1)].into_iter().collect();
    for r in 0..(1u64 << n) {
        let mut dsu = Dsu::new(d.n_edges);
        for (c, x) in d.crossings.iter().enumerate() {
            let [a, b, cc, dd] = x.pd();
            if (r >> c) & 1 == 0 {
                dsu.union(a, b);
                dsu.union(cc, dd);
            } else {
                dsu.union(a, dd);
                dsu.union(b, cc);
            }
        }
        let mut roots: Vec<usize> = (0..d.n_edges).map(|e| dsu.find(e)).collect();
        roots.sort_unstable();
        roots.dedup();
        let circles = roots.len() + d.loops.len();
        let w = r.count_ones() as i32;
        let mut term: Laurent = [(w, if w % 2 == 0 { 1 } else { -1 })].into_iter().collect();
        for _ in 0..circles {
            term = mul(&term, &loop_factor);
        }
        for (e, c) in term {
            add(&mut total, e, c);
        }
    }
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    total.into_iter().map(|(e, c)| (e + np - 2 * nm, sign * c)).collect()
}

fn euler(dims: &BTreeMap<(i32, i32), usize>) -> Laurent {
    let mut p = Laurent::new();
    for (&(h, q), &n) in dims {
        add(&mut p, q, if h % 2 == 0 { n as i64 } else { -(n as i64) });
    }
    p
}

fn brute_t0(d: &OrientedDiagram) -> BTreeMap<(i32, i32), usize> {
    let cube = build_cube(d, DEFAULT_LIMIT).unwrap();
    cube.complex.specialize_t(Q::from_integer(0)).bigraded_homology_dims()
}

#[test]
fn frobenius_axioms() {
    frobenius::check_axioms().unwrap();
    assert_eq!(frobenius::mult(1, 1), (0, 1));
    assert_eq!(frobenius::mult(0, 1), (1, 0));
    assert_eq!(frobenius::qdeg(0), 1);
    assert_eq!(frobenius::qdeg(1), -1);
    assert_eq!(frobenius::counit(1), Q::one());
    assert_eq!(frobenius::q(2), Q::from_integer(2));
}

#[test]
fn unknot_cube() {
    let cube = build_cube(&OrientedDiagram::unknot(), DEFAULT_LIMIT).unwrap();
    assert_eq!(cube.complex.len(), 2);
    let hs = homology_qt(&cube.complex).unwrap();
    assert_eq!(hs.free, vec![(0, -1), (0, 1)]);
    assert!(hs.torsion.is_empty());
}

#[test]
fn unlink_homology() {
    let cube = build_cube(&OrientedDiagram::unlink(2), DEFAULT_LIMIT).unwrap();
    let hs = homology_qt(&cube.complex).unwrap();
    assert_eq!(hs.free, vec![(0, -2), (0, 0), (0, 0), (0, 2)]);
}

#[test]
fn one_crossing_unknot() {
    let d = braid(2, &[1]);
    let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
    assert_eq!(cube.complex.len(), 6);
    cube.complex.check_d_squared().unwrap();
    cube.complex.check_homogeneous().unwrap();
    let hs = homology_qt(&cube.complex).unwrap();
    assert_eq!(hs.free, vec![(0, -1), (0, 1)]);
}

#[test]
fn hopf_cube_range() {
    let d = corpus::hopf();
    let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
    assert_eq!(cube.complex.h_range(), Some((0, 2)));
    let hs = homology_qt(&cube.complex).unwrap();
    assert_eq!(hs.free_rank(), 4);
    assert_eq!(brute_t0(&d).values().sum::<usize>(), 4);
}

// frozen from the brute-force t = 0 rank computation
#[test]
fn trefoil_khovanov() {
    let d = corpus::trefoil();
    let dims = brute_t0(&d);
    let want: BTreeMap<(i32, i32), usize> = [((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)].into_iter().collect();
    assert_eq!(dims, want);
    let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
    let hs = homology_qt(&cube.complex).unwrap();
    assert_eq!(hs.free, vec![(0, 1), (0, 3)]);
    assert_eq!(hs.torsion, vec![(3, 9, 1)]);
    assert_eq!(hs.dims_t0(), want);
    assert_eq!(hs.total_t0(), 4);
}

#[test]
fn figure_eight_khovanov() {
    let dims = brute_t0(&corpus::figure_eight());
    let want: BTreeMap<(i32, i32), usize> =
        [((-2, -5), 1), ((-1, -1), 1), ((0, -1), 1), ((0, 1), 1), ((1, 1), 1), ((2, 5), 1)].into_iter().collect();
    assert_eq!(dims, want);
}

#[test]
fn jones_matches_euler_characteristic() {
    for e in corpus::small_corpus().iter().filter(|e| e.diagram.n_crossings() <= 8) {
        let hs = homology_qt(&build_cube(&e.diagram, DEFAULT_LIMIT).unwrap().complex).unwrap();
        assert_eq!(euler(&hs.dims_t0()), jones_oracle(&e.diagram), "{}", e.name);
    }
}

#[test]
fn scan_agrees_with_cube_on_corpus() {
    for e in corpus::small_corpus().iter().filter(|e| e.diagram.n_crossings() <= 7) {
        let cube = build_cube(&e.diagram, DEFAULT_LIMIT).unwrap();
        let a = homology_qt(&cube.complex).unwrap();
        let b = homology_qt(&scan_complex(&e.diagram, None, DEFAULT_LIMIT).unwrap().complex).unwrap();
        assert_eq!(a, b, "{}", e.name);
    }
}

#[test]
fn reduction_keeps_homology() {
    let d = torus(3, 2);
    let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
    let red = scan_reduce(&cube.complex, &[]);
    assert!(red.complex.len() < cube.complex.len());
    red.complex.check_d_squared().unwrap();
    assert_eq!(homology_qt(&red.complex).unwrap(), homology_qt(&cube.complex).unwrap());

    let mut z = GradedComplex::new();
    z.add_gen(0, 1, "a");
    z.add_gen(0, -1, "b");
    assert_eq!(scan_reduce(&z, &[]).complex, z);
}

#[test]
fn torsion_order() {
    // d = t^2 from (0, 0) to (1, 8)
    let mut c = GradedComplex::new();
    let a = c.add_gen(0, 0, "a");
    let b = c.add_gen(1, 8, "b");
    c.diff[a].push((b, Mono::new(Q::one(), 2)));
    let hs = homology_qt(&c).unwrap();
    assert!(hs.free.is_empty());
    assert_eq!(hs.torsion, vec![(1, 8, 2)]);
    let dims: Vec<_> = hs.dims_t0().into_iter().collect();
    assert_eq!(dims, vec![((0, 0), 1), ((1, 8), 1)]);
}

#[test]
fn export_format() {
    let cube = build_cube(&braid(2, &[1]), DEFAULT_LIMIT).unwrap();
    let text = cube.complex.export();
    assert_eq!(text.lines().filter(|l| l.starts_with("GEN ")).count(), 6);
    let difs: Vec<&str> = text.lines().filter(|l| l.starts_with("DIF ")).collect();
    assert!(!difs.is_empty());
    for l in difs {
        let parts: Vec<&str> = l.split_whitespace().collect();
        assert_eq!(parts.len(), 6, "{l}");
        assert!(parts[5].starts_with("t^"));
    }
}

#[test]
fn specialize_lee_rank() {
    for (d, l) in [(corpus::hopf(), 2), (corpus::trefoil(), 1), (OrientedDiagram::unlink(3), 3)] {
        let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
        let dims = cube.complex.specialize_t(Q::one()).homology_dims();
        assert_eq!(dims.values().sum::<usize>(), 1 << l);
    }
}

#[test]
fn resource_limit() {
    let err = build_cube(&torus(2, 9), 100).unwrap_err();
    assert_eq!(err.kind(), "ResourceLimit");
    assert_eq!(scan_complex(&torus(4, 4), None, 10).unwrap_err().kind(), "ResourceLimit");
}

fn small_braid() -> impl Strategy<Value = BraidWord> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let letter = (1..n.max(2) as i32, any::<bool>()).prop_map(|(a, s)| if s { a } else { -a });
            (Just(n), prop::collection::vec(letter, 0..7))
        })
        .prop_map(|(n, w)| BraidWord::new(n, if n == 1 { vec![] } else { w }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brute_and_scan_agree(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
        cube.complex.check_d_squared().unwrap();
        let a = homology_qt(&cube.complex).unwrap();
        let s = homology_qt(&scan_complex(&d, None, DEFAULT_LIMIT).unwrap().complex).unwrap();
        prop_assert_eq!(a, s);
    }

    #[test]
    fn euler_is_jones(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let hs = homology_qt(&scan_complex(&d, None, DEFAULT_LIMIT).unwrap().complex).unwrap();
        prop_assert_eq!(euler(&hs.dims_t0()), jones_oracle(&d));
    }

    #[test]
    fn lee_rank_is_two_to_components(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let hs = homology_qt(&scan_complex(&d, None, DEFAULT_LIMIT).unwrap().complex).unwrap();
        prop_assert_eq!(hs.free_rank(), 1 << d.n_components);
    }
}
