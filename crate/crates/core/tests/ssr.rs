use khlee::corpus::{self, cable, f_pq, whitehead_plus};
use khlee::homology::homology_qt;
use khlee::leegen::{s_of, Options};
use khlee::linkdiag::BraidWord;
use khlee::ssr::{
    approx_threshold, bennequin_report, bennequin_s3, full_twist, positivity_formula, s_ssr, stabilization_check,
    stabilization_sweep, Handle, Side, SsrDiagram,
};
use khlee::tangle::scan_complex;
use khlee::verify::ssr_corpus;
use proptest::prelude::*;

fn opts() -> Options {
    Options::default()
}

#[test]
fn whitehead_values() {
    let wh = whitehead_plus();
    assert!(wh.is_null_homologous());
    let r = s_ssr(&wh, &opts()).unwrap();
    assert_eq!((r.s_minus, r.s_plus), (0, 2));
    assert_eq!((r.g_ds_lower, r.g_sd_lower), (0, 1));
    assert_eq!(r.eta, vec![0]);
    assert!(r.stabilized);
    assert_eq!(positivity_formula(&wh).unwrap(), 0);

    let m = s_ssr(&wh.mirror(), &opts()).unwrap();
    assert_eq!((m.s_minus, m.s_plus), (-2, 0));
}

#[test]
fn whitehead_approximations() {
    let wh = whitehead_plus();
    let d0 = wh.uniform(0).unwrap();
    assert_eq!((d0.n_plus(), d0.n_minus(), d0.seifert_count()), (2, 0, 3));
    // D(-1) is the right-handed trefoil
    let dm = wh.uniform(-1).unwrap();
    assert_eq!(dm.n_components, 1);
    let a = homology_qt(&scan_complex(&dm, None, 1 << 20).unwrap().complex).unwrap();
    let b = homology_qt(&scan_complex(&corpus::trefoil(), None, 1 << 20).unwrap().complex).unwrap();
    assert_eq!(a, b);
    assert_eq!(s_of(&dm, &opts()).unwrap(), 2);
    // D(1) is the figure-eight
    let d1 = wh.uniform(1).unwrap();
    let f = homology_qt(&scan_complex(&corpus::figure_eight(), None, 1 << 20).unwrap().complex).unwrap();
    assert_eq!(homology_qt(&scan_complex(&d1, None, 1 << 20).unwrap().complex).unwrap(), f);
}

#[test]
fn f_p_values() {
    for p in 1..=2usize {
        let f = f_pq(p, p);
        let r = s_ssr(&f, &opts()).unwrap();
        let v = 2 * p as i64 - 1;
        assert_eq!((r.s_minus, r.s_plus), (-v, v));
        assert_eq!(positivity_formula(&f).unwrap(), 1 - 2 * p as i64);
    }
}

#[test]
fn f_p_one_twist() {
    assert_eq!(s_of(&f_pq(1, 1).uniform(1).unwrap(), &opts()).unwrap(), -1);
}

#[test]
fn f_pq_shift() {
    for (p, q) in [(1, 0), (2, 0), (2, 1), (3, 0)] {
        let t = stabilization_sweep(&f_pq(p, q), Some(1), 2, &opts()).unwrap();
        for row in &t.rows {
            assert_eq!(row.shifted, 1 - p as i64 - q as i64, "F({p},{q}) k={}", row.k);
        }
    }
}

#[test]
fn cable_shift() {
    for q in 1..=2usize {
        let c = cable(2, q);
        assert!(!c.is_null_homologous());
        assert_eq!(stabilization_check(&c, 2, &opts()).unwrap_err().kind(), "NotNullHomologous");
        let t = stabilization_sweep(&c, Some(1), 2, &opts()).unwrap();
        for row in &t.rows {
            assert_eq!(row.shifted, q as i64 - 1);
        }
    }
}

#[test]
fn stabilization_table() {
    let wh = whitehead_plus();
    let th = approx_threshold(&wh, Side::Minus).unwrap();
    assert_eq!(th, 2);
    assert_eq!(approx_threshold(&wh, Side::Plus).unwrap(), 1);
    let t = stabilization_check(&wh, th + 2, &opts()).unwrap();
    assert!(t.stabilized);
    let ks: Vec<(i64, i64)> = t.rows.iter().map(|r| (r.k, r.s)).collect();
    assert_eq!(ks, vec![(2, 0), (3, 0), (4, 0)]);
}

#[test]
fn local_links() {
    let local = |w: Vec<i32>, n: usize| {
        SsrDiagram::new(BraidWord::new(n, w), vec![Handle { a: 1, b: 0, at: 0 }], false).unwrap()
    };
    let r = s_ssr(&local(vec![1, 1, 1], 2), &opts()).unwrap();
    assert_eq!((r.s_minus, r.s_plus), (2, 2));
    let r = s_ssr(&local(vec![1, -2, 1, -2], 3), &opts()).unwrap();
    assert_eq!((r.s_minus, r.s_plus), (0, 0));
}

#[test]
fn dehn_twist_and_bennequin() {
    let dt = whitehead_plus().dehn_twist();
    let r = s_ssr(&dt, &opts()).unwrap();
    assert_eq!((r.s_minus, r.s_plus), (0, 2));
    let beta = bennequin_report(&BraidWord::new(2, vec![1, 1, 1]), r.s_plus);
    assert_eq!(beta.sl, 1);
    assert!(beta.s_plus_bound_ok);

    let t = bennequin_s3(&BraidWord::new(2, vec![1, 1, 1]), &opts()).unwrap();
    assert_eq!((t.sl, t.s_plus), (1, 2));
    let id = bennequin_s3(&BraidWord::new(2, vec![]), &opts()).unwrap();
    assert_eq!((id.sl, id.s_plus, id.s_plus_bound_ok), (-2, 1, true));
}

#[test]
fn corpus_invariants() {
    for (name, d) in ssr_corpus() {
        let r = s_ssr(&d, &opts()).unwrap();
        let l = d.base_diagram().unwrap().n_components as i64;
        // the lower bound s_+ - 2l + 2 <= s_- from the three-sphere fails here (Wh+)
        assert!(r.s_minus <= r.s_plus, "{name}");
        assert_eq!((r.s_minus - l + 1).rem_euclid(2), 0, "{name}");
        let m = s_ssr(&d.mirror(), &opts()).unwrap();
        assert_eq!((m.s_minus, m.s_plus), (-r.s_plus, -r.s_minus), "{name}");
        let v = s_ssr(&d.reverse(), &opts()).unwrap();
        assert_eq!((v.s_minus, v.s_plus), (r.s_minus, r.s_plus), "{name}");
    }
}

#[test]
fn disjoint_union() {
    let a = f_pq(1, 1);
    let u = a.disjoint_union(&whitehead_plus()).unwrap_err();
    assert_eq!(u.kind(), "Invalid");
    let u = a.disjoint_union(&a).unwrap();
    assert_eq!(u.eta(), vec![0, 0]);
    let r = s_ssr(&u, &opts()).unwrap();
    // F1 has s_- = -1, s_+ = 1
    assert_eq!((r.s_minus, r.s_plus), (-3, 3));
}

#[test]
fn json_input() {
    let wh = SsrDiagram::parse_json(
        r#"{"strands":4,"orient":"udud","braid":[-1,2],"handles":[[2,3]],"closure":"plat"}"#,
    )
    .unwrap();
    assert_eq!(wh, whitehead_plus());
    assert_eq!(SsrDiagram::parse_json(&wh.to_json()).unwrap(), wh);
    for bad in [
        r#"{"strands":2,"braid":[1],"handles":[[1,2]],"extra":1}"#,
        r#"{"strands":4,"braid":[],"handles":[[1,3],[2,4]]}"#,
        r#"{"strands":2,"braid":[],"handles":[[1,3]]}"#,
        r#"{"strands":2,"orient":"ux","braid":[],"handles":[]}"#,
    ] {
        assert_eq!(SsrDiagram::parse_json(bad).unwrap_err().kind(), "ParseError", "{bad}");
    }
}

#[test]
fn not_null_homologous() {
    let err = s_ssr(&f_pq(2, 1), &opts()).unwrap_err();
    assert_eq!(err.kind(), "NotNullHomologous");
    assert_eq!(f_pq(2, 1).eta(), vec![1]);
    assert!(!f_pq(2, 1).is_two_divisible());
    assert!(f_pq(3, 1).is_two_divisible());
}

fn handle_set() -> impl Strategy<Value = (usize, Vec<Handle>)> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n).prop_map(move |cuts| {
            // split 1..=n into runs, every other run becomes a handle
            let mut hs = vec![];
            let mut start = 1;
            for (i, &c) in cuts.iter().enumerate() {
                if c || i + 1 == n {
                    if hs.len() % 2 == 0 {
                        hs.push(Handle { a: start, b: i + 1, at: 0 });
                    } else {
                        hs.push(Handle { a: 0, b: 0, at: 0 });
                    }
                    start = i + 2;
                }
            }
            (n, hs.into_iter().filter(|h| h.a > 0).collect())
        })
    })
}

proptest! {
    #[test]
    fn twist_is_inverse(n in 1usize..6, k in -3i64..4) {
        let mut w = full_twist(n, k).letters;
        w.extend(full_twist(n, -k).letters);
        prop_assert_eq!(w.len() as i64, 2 * k.abs() * (n as i64) * (n as i64 - 1));
        prop_assert_eq!(BraidWord::new(n, w).writhe(), 0);
    }

    #[test]
    fn json_round_trip((n, hs) in handle_set(), up in prop::collection::vec(any::<bool>(), 6)) {
        let b = BraidWord::with_orientation(n, vec![], up[..n].to_vec());
        let d = SsrDiagram::new(b, hs, false).unwrap();
        prop_assert_eq!(SsrDiagram::parse_json(&d.to_json()).unwrap(), d.clone());
        prop_assert_eq!(d.mirror().mirror(), d.clone());
        prop_assert_eq!(d.reverse().reverse(), d.clone());
        let eta: Vec<i64> = d.reverse().eta().iter().map(|e| -e).collect();
        prop_assert_eq!(eta, d.eta());
    }
}
