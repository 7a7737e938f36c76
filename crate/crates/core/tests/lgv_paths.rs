use halfspace_core::combinat::binomial;
use halfspace_core::hankel::{build, HankelKind};
use halfspace_core::lgv::{
    catalan_minor_graph, enumerate_detailed, enumerate_nonintersecting, grid_binomial, grid_catalan, lgv_check,
    list_systems, street_grid, two_taxis, Edge, GraphJson, WeightedDag, DEFAULT_PATH_BOUND,
};
use halfspace_core::rational::{big, int};
use halfspace_core::Error;
use proptest::prelude::*;

fn random_dag() -> impl Strategy<Value = WeightedDag> {
    (3usize..=8)
        .prop_flat_map(|v| {
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
            let np = pairs.len();
            (
                prop::collection::vec(0u32..=3, np),
                prop::collection::vec(1u32..=2, np),
                1usize..=3,
                Just(pairs),
                Just(v),
                prop::sample::subsequence((0..v).collect::<Vec<_>>(), 3),
                prop::sample::subsequence((0..v).collect::<Vec<_>>(), 3),
            )
        })
        .prop_map(|(w, mult, n, pairs, v, o, d)| {
            let edges = pairs
                .iter()
                .zip(w.iter().zip(&mult))
                .filter(|(_, (&w, _))| w > 0)
                .map(|(&(s, t), (&w, &m))| Edge { source: s, target: t, weight: int(w as i64), multiplicity: m })
                .collect();
            let n = n.min(o.len()).min(d.len());
            WeightedDag::new(v, edges, o[..n].to_vec(), d[..n].to_vec()).unwrap()
        })
}

proptest! {
    #[test]
    fn lgv_on_random_dags(g in random_dag()) {
        let (det, count) = lgv_check(&g).unwrap();
        prop_assert_eq!(det, count);
    }

    #[test]
    fn grid_path_counts(i in 0usize..=6, j in 0usize..=6) {
        let g = street_grid(6, 6, &[(0, 0)], &[(i, j)]).unwrap();
        prop_assert_eq!(g.path_matrix()[(0, 0)].clone(), big(binomial((i + j) as i64, i as i64)));
    }
}

#[test]
fn one_taxi() {
    let g = street_grid(4, 3, &[(0, 0)], &[(3, 2)]).unwrap();
    assert_eq!(g.path_matrix()[(0, 0)], int(10));
    let g = street_grid(4, 3, &[(2, 2)], &[(2, 2)]).unwrap();
    assert_eq!(g.path_matrix()[(0, 0)], int(1));
    let g = street_grid(4, 3, &[(3, 2)], &[(0, 0)]).unwrap();
    assert_eq!(g.path_matrix()[(0, 0)], int(0));
}

#[test]
fn two_taxis_figure() {
    let g = two_taxis();
    let a = g.path_matrix();
    assert_eq!(a[(0, 0)], big(binomial(5, 3)));
    assert_eq!(a[(0, 1)], big(binomial(4, 2)));
    assert_eq!(a[(1, 0)], int(4));
    assert_eq!(a[(1, 1)], int(3));
    let e = enumerate_detailed(&g, DEFAULT_PATH_BOUND).unwrap();
    assert!(e.non_permutable());
    assert_eq!(e.signed_total, int(6));
    assert_eq!(list_systems(&g, 100).unwrap().len(), 6);
}

#[test]
fn grids_reproduce_hankel_matrices() {
    for n in 1..=5 {
        assert_eq!(grid_binomial(n, false).unwrap().path_matrix(), build(HankelKind::B, n).unwrap());
        assert_eq!(grid_binomial(n, true).unwrap().path_matrix(), build(HankelKind::BShift, n).unwrap());
        assert_eq!(grid_catalan(n, false).unwrap().path_matrix(), build(HankelKind::C, n).unwrap());
        assert_eq!(grid_catalan(n, true).unwrap().path_matrix(), build(HankelKind::CShift, n).unwrap());
    }
    assert!(grid_catalan(0, false).is_err());
}

#[test]
fn lgv_on_grids() {
    for n in 1..=4 {
        for g in [
            grid_binomial(n, false).unwrap(),
            grid_binomial(n, true).unwrap(),
            grid_catalan(n, false).unwrap(),
            grid_catalan(n, true).unwrap(),
        ] {
            let e = enumerate_detailed(&g, DEFAULT_PATH_BOUND).unwrap();
            assert!(e.non_permutable(), "n={n}");
            assert_eq!(e.signed_total, g.path_matrix().det().unwrap(), "n={n}");
        }
    }
}

#[test]
fn displayed_counts() {
    for n in 2..=3 {
        let e = enumerate_detailed(&grid_binomial(n, false).unwrap(), DEFAULT_PATH_BOUND).unwrap();
        // Parallel edges count as distinct paths, so the weighted total is the count.
        assert_eq!(e.signed_total, int(1 << (n - 1)));
        for shifted in [false, true] {
            let e = enumerate_detailed(&grid_catalan(n, shifted).unwrap(), DEFAULT_PATH_BOUND).unwrap();
            assert_eq!(e.systems, 1);
        }
    }
    assert_eq!(enumerate_nonintersecting(&grid_binomial(3, false).unwrap()).unwrap(), int(4));
    let s = list_systems(&grid_catalan(2, false).unwrap(), 100).unwrap();
    assert_eq!(s.len(), 1);
    // o_0 = d_0 is the shared diagonal point: one path of length zero.
    assert_eq!(s[0].paths[0].len(), 1);
}

#[test]
fn catalan_minor_183() {
    let g = catalan_minor_graph(5, 1, 2).unwrap();
    let (det, count) = lgv_check(&g).unwrap();
    assert_eq!(det, int(183));
    assert_eq!(count, int(183));
}

#[test]
fn single_pair_and_bounds() {
    let g = street_grid(3, 3, &[(0, 0)], &[(3, 3)]).unwrap();
    let (d, c) = lgv_check(&g).unwrap();
    assert_eq!(d, int(20));
    assert_eq!(c, int(20));
    assert!(matches!(enumerate_detailed(&g, 5), Err(Error::Resource(_))));
}

#[test]
fn graph_json() {
    let text = r#"{"vertices":3,"edges":[[0,1,"1/2",1],[1,2,"3",2],[0,2,"1",1]],"origins":[0],"destinations":[2]}"#;
    let g: GraphJson = serde_json::from_str(text).unwrap();
    let dag = WeightedDag::from_json(&g).unwrap();
    assert_eq!(dag.path_matrix()[(0, 0)], int(4));
    let back = serde_json::to_string(&dag.to_json()).unwrap();
    let again = WeightedDag::from_json(&serde_json::from_str(&back).unwrap()).unwrap();
    assert_eq!(again.path_matrix()[(0, 0)], int(4));
    let neg = r#"{"vertices":2,"edges":[[0,1,"-1",1]],"origins":[0],"destinations":[1]}"#;
    assert!(WeightedDag::from_json(&serde_json::from_str(neg).unwrap()).is_err());
}
