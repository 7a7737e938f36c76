use halfspace_core::hankel::{build, HankelKind};
use halfspace_core::network::{network_topology, planar_network_weights, EdgeRole};
use halfspace_core::positivity::{total_positivity, PositivityMode};
use halfspace_core::rational::{int, int_matrix, rat};
use halfspace_core::symbol::{alt_bc_scale, alt_bc_symbol, build_m};
use halfspace_core::{Error, ExactMatrix};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

#[test]
fn catalan_is_totally_positive() {
    let c4 = build(HankelKind::C, 4).unwrap();
    for mode in [PositivityMode::AllMinors, PositivityMode::PinkusHankel] {
        assert!(total_positivity(&c4, mode).unwrap().totally_positive);
    }
}

#[test]
fn modes_agree_on_families() {
    for kind in HankelKind::ALL {
        for n in 1..=5 {
            let h = build(kind, n).unwrap();
            let a = total_positivity(&h, PositivityMode::AllMinors).unwrap();
            let p = total_positivity(&h, PositivityMode::PinkusHankel).unwrap();
            assert!(a.totally_positive && p.totally_positive, "{kind} n={n}");
        }
        for n in 6..=8 {
            assert!(total_positivity(&build(kind, n).unwrap(), PositivityMode::PinkusHankel).unwrap().totally_positive);
        }
    }
}

#[test]
fn tilde_m_is_nonnegative_only() {
    let t = build_m(4).unwrap().tilde;
    let v = total_positivity(&t, PositivityMode::AllMinors).unwrap();
    assert!(!v.totally_positive);
    assert_eq!(v.totally_nonnegative, Some(true));
    assert!(v.witness.unwrap().value.is_zero());
}

#[test]
fn negative_minor_detected() {
    let v = total_positivity(&int_matrix(&[&[1, 2], &[3, 1]]), PositivityMode::AllMinors).unwrap();
    assert!(!v.totally_positive);
    assert!(v.witness.unwrap().value.is_negative());
    assert!(matches!(
        total_positivity(&int_matrix(&[&[1, 2], &[3, 1]]), PositivityMode::PinkusHankel),
        Err(Error::Structure(_))
    ));
}

#[test]
fn pinkus_rejects_non_tp_hankel() {
    let h = int_matrix(&[&[2, 1], &[1, 2]]);
    let a = total_positivity(&h, PositivityMode::AllMinors).unwrap();
    let p = total_positivity(&h, PositivityMode::PinkusHankel).unwrap();
    assert_eq!(a.totally_positive, p.totally_positive);
    let h = int_matrix(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, 3]]);
    let a = total_positivity(&h, PositivityMode::AllMinors).unwrap();
    let p = total_positivity(&h, PositivityMode::PinkusHankel).unwrap();
    assert!(!a.totally_positive && !p.totally_positive);
}

#[test]
fn alt_bc_blocks_totally_positive() {
    for m in 1..=8 {
        let (h1, h2) = alt_bc_symbol(m).unwrap();
        for h in [h1, h2] {
            if h.rows() == 0 {
                continue;
            }
            let p = total_positivity(&h, PositivityMode::PinkusHankel).unwrap();
            assert!(p.totally_positive, "m={m}");
            if h.rows() <= 4 {
                assert!(total_positivity(&h, PositivityMode::AllMinors).unwrap().totally_positive);
            }
        }
    }
}

#[test]
fn network_for_scaled_h1() {
    let (h1, _) = alt_bc_symbol(5).unwrap();
    let a = h1.scale(&alt_bc_scale(5));
    assert_eq!(a, int_matrix(&[&[70, 10, 6], &[10, 6, 10], &[6, 10, 70]]));
    let net = planar_network_weights(&a).unwrap();
    assert_eq!(net.central(), vec![int(70), rat(32, 7), rat(256, 5)]);
    let w = |r| net.weight(r).unwrap().clone();
    assert_eq!(w(EdgeRole::Left { chain: 0, level: 0 }), rat(1, 7));
    assert_eq!(w(EdgeRole::Right { chain: 0, level: 0 }), rat(1, 7));
    assert_eq!(w(EdgeRole::Left { chain: 0, level: 1 }), rat(3, 5));
    assert_eq!(w(EdgeRole::Right { chain: 0, level: 1 }), rat(3, 5));
    assert_eq!(w(EdgeRole::Left { chain: 1, level: 1 }), rat(7, 5));
    assert_eq!(w(EdgeRole::Right { chain: 1, level: 1 }), rat(7, 5));
    assert_eq!(net.dag.path_matrix(), a);
}

#[test]
fn network_trivial_cases() {
    let net = planar_network_weights(&int_matrix(&[&[3]])).unwrap();
    assert_eq!(net.central(), vec![int(3)]);
    let id = ExactMatrix::identity(3);
    assert_eq!(planar_network_weights(&id).unwrap().dag.path_matrix(), id);
    assert!(matches!(planar_network_weights(&int_matrix(&[&[1, 2], &[3, 1]])), Err(Error::Domain(_))));
}

proptest! {
    // Positive weights give a totally positive path matrix; extraction
    // must recover exactly those weights.
    #[test]
    fn network_round_trip(n in 1usize..=4, seed in prop::collection::vec((1i64..=9, 1i64..=4), 16)) {
        let topo = network_topology(n).unwrap();
        let mut it = seed.into_iter().cycle();
        let weights: Vec<_> = topo
            .roles
            .iter()
            .map(|r| if *r == EdgeRole::Unit { int(1) } else { let (a, b) = it.next().unwrap(); rat(a, b) })
            .collect();
        let dag = topo.dag.with_weights(&weights).unwrap();
        let a = dag.path_matrix();
        prop_assert!(total_positivity(&a, PositivityMode::AllMinors).unwrap().totally_positive);
        let net = planar_network_weights(&a).unwrap();
        prop_assert_eq!(net.dag.path_matrix(), a);
        for (e, w) in net.dag.edges().iter().zip(&weights) {
            prop_assert!(!e.weight.is_negative());
            prop_assert_eq!(&e.weight, w);
        }
    }
}
