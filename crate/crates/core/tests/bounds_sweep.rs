mod common;

use penergy::bounds::{abiad_bound_square, sweep_edge_bounds, BoundKind, Verdict};
use penergy::numeric::abs_pow;
use penergy::{edge_bound_p, edge_bound_square, enumerate_connected, Graph, Side};
use proptest::prelude::*;

const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];

fn small_graphs(max_n: usize) -> Vec<Graph> {
    (2..=max_n).flat_map(|n| enumerate_connected(n).unwrap()).collect()
}

#[test]
fn general_bound_holds_on_small_graphs() {
    let rows = sweep_edge_bounds(&small_graphs(6), &EXPONENTS).unwrap();
    assert!(rows.iter().all(|r| r.kind == BoundKind::Theorem));
    let failures: Vec<_> = rows.iter().filter(|r| r.verdict() == Verdict::Fail).collect();
    assert!(failures.is_empty(), "{:?}", failures.first());
    assert!(rows.iter().any(|r| r.verdict() == Verdict::Pass));
    assert!(rows.iter().any(|r| r.verdict() == Verdict::NotApplicable));
    for r in &rows {
        assert_eq!(r.bound.is_some(), r.preconditions_met);
        assert_eq!(r.preconditions_met, r.h_positive >= 2 && r.h_negative >= 2);
    }
}

#[test]
fn piecewise_square_form_equals_general_form() {
    for g in small_graphs(6) {
        for e in g.edges() {
            for side in [Side::Plus, Side::Minus] {
                let general = edge_bound_p(&g, e, 2.0, side).unwrap();
                let square = edge_bound_square(&g, e, side).unwrap();
                match (general.bound, square.bound) {
                    (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-10, "{a} vs {b}"),
                    (None, None) => {}
                    other => panic!("applicability differs: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn square_form_improves_second_order_bound() {
    for g in small_graphs(6) {
        for e in g.edges() {
            for side in [Side::Plus, Side::Minus] {
                let square = edge_bound_square(&g, e, side).unwrap();
                let abiad = abiad_bound_square(&g, e, side).unwrap();
                let (Some(a), Some(b)) = (square.bound, abiad.bound) else {
                    continue;
                };
                let outside = match side {
                    Side::Plus => square.theta - 1.0,
                    Side::Minus => -square.theta - 1.0,
                };
                let gain = abs_pow(outside.max(0.0), 2.0);
                assert!((a - b - gain).abs() <= 1e-10);
                assert!(abiad.verdict() != Verdict::Fail);
            }
        }
    }
}

#[test]
fn sweep_is_deterministic_across_pools() {
    let graphs = small_graphs(5);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| sweep_edge_bounds(&graphs, &EXPONENTS).unwrap());
    let b = four.install(|| sweep_edge_bounds(&graphs, &EXPONENTS).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn general_bound_holds_on_random_graphs(
        (g, e) in common::graph_and_edge(4, 14),
        p in 1.0f64..5.0,
    ) {
        for side in [Side::Plus, Side::Minus] {
            let r = edge_bound_p(&g, e, p, side).unwrap();
            prop_assert_ne!(r.verdict(), Verdict::Fail, "{:?}", r);
        }
    }
}
