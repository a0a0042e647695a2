use khlee::corpus::{self, torus};
use khlee::cube::{build_cube, DEFAULT_LIMIT};
use khlee::frobenius::Q;
use khlee::leegen::{
    check_cycle, filtration_level, lee_data_brute, lee_data_scan, lee_generator, lee_generator_with, s_all_orientations,
    s_from_module, s_invariant, s_of, Engine, Options,
};
use khlee::linkdiag::{BraidWord, OrientedDiagram};
use num_traits::One;
use proptest::prelude::*;

fn opts() -> Options {
    Options::default()
}

fn s(d: &OrientedDiagram) -> i64 {
    s_of(d, &opts()).unwrap()
}

#[test]
fn unit_values() {
    assert_eq!(s(&OrientedDiagram::unknot()), 0);
    assert_eq!(s(&OrientedDiagram::unlink(2)), -1);
    assert_eq!(s(&OrientedDiagram::unlink(3)), -2);
    assert_eq!(s(&corpus::hopf()), 1);
    assert_eq!(s(&corpus::trefoil()), 2);
    assert_eq!(s(&corpus::trefoil().mirror()), -2);
    assert_eq!(s(&corpus::figure_eight()), 0);
    assert_eq!(s(&OrientedDiagram::empty()), 1);
}

#[test]
fn torus_links() {
    assert_eq!(s(&torus(2, 5)), 4);
    assert_eq!(s(&torus(3, 4)), 6);
    assert_eq!(s(&torus(3, 3)), 4);
    let r = s_invariant(&torus(2, 4), None, &opts()).unwrap();
    assert_eq!((r.s_minus, r.s_plus), (3, 3));
    assert_eq!(s(&torus(2, -4)), -r.s_plus);
}

#[test]
fn unknot_generator() {
    let d = OrientedDiagram::unknot();
    let g = lee_generator(&d).unwrap();
    assert_eq!(g.terms.len(), 2);
    assert_eq!(g.q_level(), Some(-1));
    assert_eq!(g.homological_degree(&d), 0);
}

#[test]
fn unlink_generator() {
    let g = lee_generator(&OrientedDiagram::unlink(2)).unwrap();
    assert_eq!(g.terms.len(), 4);
    assert_eq!(g.q_level(), Some(-2));
}

#[test]
fn generators_are_cycles() {
    for e in corpus::small_corpus().iter().filter(|e| e.diagram.n_crossings() <= 8 && !e.diagram.is_empty()) {
        let cube = build_cube(&e.diagram, DEFAULT_LIMIT).unwrap();
        let c1 = cube.complex.specialize_t(Q::one());
        for (rev, neg) in [(false, false), (true, false), (false, true), (true, true)] {
            let z = lee_generator_with(&e.diagram, rev, neg).unwrap().in_cube(&cube);
            check_cycle(&c1, &z).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }
}

#[test]
fn trefoil_levels() {
    let d = corpus::trefoil();
    let cube = build_cube(&d, DEFAULT_LIMIT).unwrap();
    let c1 = cube.complex.specialize_t(Q::one());
    let so = lee_generator(&d).unwrap();
    let z = so.in_cube(&cube);
    assert_eq!(filtration_level(&c1, &z).unwrap(), 1);
    let data = lee_data_brute(&d, DEFAULT_LIMIT, false).unwrap();
    let mut lv = data.levels;
    lv.sort_unstable();
    assert_eq!(lv, [1, 3]);
    assert_eq!(s_from_module(&data.homology, 1).unwrap(), Some(2));
}

#[test]
fn hopf_levels() {
    let mut lv = lee_data_scan(&corpus::hopf(), DEFAULT_LIMIT, false).unwrap().levels;
    lv.sort_unstable();
    assert_eq!(lv, [0, 2]);
}

#[test]
fn report_fields() {
    let r = s_invariant(&corpus::trefoil(), None, &opts()).unwrap();
    assert_eq!((r.s, r.s_min, r.s_max, r.s_minus, r.s_plus), (2, 1, 3, 2, 2));
    assert_eq!(r.free_gen_q_degrees, vec![1, 3]);
    assert_eq!(r.orientation, vec![true]);

    let u = s_invariant(&OrientedDiagram::unlink(2), None, &opts()).unwrap();
    assert_eq!((u.s_minus, u.s_plus), (-1, 1));
}

#[test]
fn hopf_orientations() {
    let reps = s_all_orientations(&corpus::hopf(), &opts()).unwrap();
    let got: Vec<(Vec<bool>, i64)> = reps.iter().map(|r| (r.orientation.clone(), r.s)).collect();
    assert_eq!(got, vec![(vec![true, true], 1), (vec![true, false], -1)]);
    // this code is the negatively linked Hopf link
    let neg = OrientedDiagram::parse_pd("PD[X(4,1,3,2), X(2,3,1,4)]").unwrap();
    assert_eq!((neg.n_minus(), s(&neg)), (2, -1));
    let rev = OrientedDiagram::parse_pd("PD[X(4,1,3,2), X(2,3,1,4)]; orient: 2=-").unwrap();
    assert_eq!((rev.n_plus(), s(&rev)), (2, 1));
}

#[test]
fn module_requires_knot() {
    let hs = lee_data_scan(&corpus::hopf(), DEFAULT_LIMIT, false).unwrap().homology;
    assert_eq!(s_from_module(&hs, 2).unwrap(), None);
}

#[test]
fn engines_agree_on_corpus() {
    let both = Options { engine: Engine::Both, ..opts() };
    for e in corpus::small_corpus().iter().filter(|e| e.diagram.n_crossings() <= 8) {
        s_of(&e.diagram, &both).unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn limit_is_reported() {
    let tight = Options { engine: Engine::Brute, limit: 64 };
    assert_eq!(s_of(&torus(2, 7), &tight).unwrap_err().kind(), "ResourceLimit");
}

fn small_braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let letter = (1..n as i32, any::<bool>()).prop_map(|(a, s)| if s { a } else { -a });
            (Just(n), prop::collection::vec(letter, 0..7))
        })
        .prop_map(|(n, w)| BraidWord::new(n, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn parity(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let l = d.n_components as i64;
        prop_assert_eq!((s(&d) - (l - 1)).rem_euclid(2), 0);
    }

    #[test]
    fn sandwich_and_mirror(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let r = s_invariant(&d, None, &opts()).unwrap();
        let l = d.n_components as i64;
        prop_assert_eq!(r.s_plus, -s(&d.mirror()));
        prop_assert!(r.s_minus <= r.s_plus);
        prop_assert!(r.s_plus - 2 * l + 2 <= r.s_minus);
        if l == 1 {
            prop_assert_eq!(r.s_minus, r.s_plus);
        }
    }

    #[test]
    fn reverse_and_sign(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let a = lee_data_scan(&d, DEFAULT_LIMIT, false).unwrap();
        let n = lee_data_scan(&d, DEFAULT_LIMIT, true).unwrap();
        let (mut la, mut ln) = (a.levels, n.levels);
        la.sort_unstable();
        ln.sort_unstable();
        prop_assert_eq!(la, ln);
        prop_assert_eq!(s(&d.reverse()), s(&d));
    }

    #[test]
    fn brute_and_scan_levels(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let both = Options { engine: Engine::Both, ..opts() };
        prop_assert!(s_of(&d, &both).is_ok());
    }

    #[test]
    fn crossing_change(b in small_braid(), pick in any::<prop::sample::Index>()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let pos: Vec<usize> = (0..d.n_crossings()).filter(|&c| d.crossings[c].sign > 0).collect();
        prop_assume!(!pos.is_empty());
        let c = pos[pick.index(pos.len())];
        let lo = d.crossing_change(c);
        let (sp, sm) = (s(&d), s(&lo));
        prop_assert!(sm <= sp && sp <= sm + 2, "s+ {} s- {}", sp, sm);
    }

    #[test]
    fn bennequin(b in small_braid()) {
        let d = OrientedDiagram::from_braid(&b).unwrap();
        let sl = b.writhe() - b.strands as i64;
        let sv = s(&d);
        prop_assert!(sl + 1 <= sv);
        if b.letters.iter().all(|&x| x > 0) {
            prop_assert_eq!(sl + 1, sv);
        }
    }
}
