use std::collections::BTreeSet;

use digispace::canon::is_isomorphic;
use digispace::graph::join;
use digispace::{DigitalSpace, PointId};
use proptest::prelude::*;

fn random_graph(max_n: usize) -> impl Strategy<Value = DigitalSpace> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let points: Vec<PointId> = (1..=n as PointId).collect();
            let mut edges = Vec::new();
            let mut b = bits.iter();
            for u in 1..=n as PointId {
                for v in u + 1..=n as PointId {
                    if *b.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            DigitalSpace::new(None, &points, edges).unwrap()
        })
    })
}

fn set(v: Vec<PointId>) -> BTreeSet<PointId> {
    v.into_iter().collect()
}

fn degree_multiset(g: &DigitalSpace) -> Vec<usize> {
    let mut d = g.degrees();
    d.sort_unstable();
    d
}

proptest! {
    #[test]
    fn ball_is_point_plus_rim(g in random_graph(9)) {
        for &v in g.points() {
            let rim = g.rim(v).unwrap();
            let ball = g.ball(v).unwrap();
            let mut expected = set(rim.points());
            expected.insert(v);
            prop_assert_eq!(set(ball.points()), expected);
            // ball = join({v}, rim) restricted to existing edges
            let ball_space = ball.to_space();
            let rim_space = rim.to_space();
            prop_assert_eq!(ball_space.edge_count(), rim_space.edge_count() + rim_space.len());
            prop_assert!(!rim.contains(v));
        }
    }

    #[test]
    fn edge_rim_is_rim_intersection(g in random_graph(9)) {
        for (u, v) in g.edges().collect::<Vec<_>>() {
            let er = set(g.edge_rim(u, v).unwrap().points());
            let ru = set(g.rim(u).unwrap().points());
            let rv = set(g.rim(v).unwrap().points());
            prop_assert_eq!(er, ru.intersection(&rv).copied().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn join_counts(a in random_graph(5), b in random_graph(5), c in random_graph(5)) {
        let ab = join(&a, &b);
        prop_assert_eq!(ab.len(), a.len() + b.len());
        prop_assert_eq!(ab.edge_count(), a.edge_count() + b.edge_count() + a.len() * b.len());
        let left = join(&ab, &c);
        let right = join(&a, &join(&b, &c));
        prop_assert_eq!(left.len(), right.len());
        prop_assert_eq!(left.edge_count(), right.edge_count());
        prop_assert_eq!(degree_multiset(&left), degree_multiset(&right));
        prop_assert!(is_isomorphic(&left, &right));
    }

    #[test]
    fn delete_then_readd_round_trips(g in random_graph(9), pick in any::<prop::sample::Index>()) {
        let v = g.points()[pick.index(g.len())];
        let nbrs = g.neighbors(v).unwrap();
        let h = g.delete_point(v).unwrap();
        prop_assert!(!h.contains(v));
        let back = h.add_point(v, &nbrs).unwrap();
        prop_assert_eq!(back.points(), g.points());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        let fresh = h.add_point(1000, &nbrs).unwrap();
        prop_assert!(is_isomorphic(&fresh, &g));
    }

    #[test]
    fn relabelling_preserves_isomorphism_type(g in random_graph(8), offset in 1u32..50) {
        let h = g.relabel_offset(offset);
        prop_assert!(is_isomorphic(&g, &h));
        let seq = h.relabel_sequential();
        prop_assert_eq!(seq.points(), g.points());
    }

    #[test]
    fn json_round_trip(g in random_graph(8)) {
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = DigitalSpace::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn components_partition_the_points() {
    let g = DigitalSpace::new(None, &[1, 2, 3, 4, 5], [(1, 2), (4, 5)]).unwrap();
    assert_eq!(g.components(), vec![vec![1, 2], vec![3], vec![4, 5]]);
    assert!(!g.is_connected());
}

#[test]
fn malformed_graphs_are_rejected() {
    assert!(DigitalSpace::new(None, &[1, 1], []).is_err());
    assert!(DigitalSpace::new(None, &[1, 2], [(1, 1)]).is_err());
    assert!(DigitalSpace::new(None, &[1, 2], [(1, 3)]).is_err());
    assert!(DigitalSpace::new(None, &[1, 2], [(1, 2), (2, 1)]).is_err());
}
