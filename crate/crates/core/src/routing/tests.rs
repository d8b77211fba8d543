use super::*;
use crate::cutcheck::is_eulerian;
use crate::fixtures::{self, SPINDLE_U, SPINDLE_V};
use crate::{q, qf, Pair};

fn routed(outcome: RoutingOutcome) -> IntegralRouting {
    match outcome {
        RoutingOutcome::Routed(r) => r,
        RoutingOutcome::Refused(r) => panic!("refused: {r:?}"),
    }
}

fn path(vertices: &[usize], edges: &[usize]) -> Path {
    Path { vertices: vertices.to_vec(), edges: edges.to_vec() }
}

#[test]
fn path_graph_routes_trivially() {
    let inst = fixtures::path_instance(&[2, 4, 2], &[2, 2, 2]);
    let r = routed(solve_integral(&inst).unwrap());
    verify_routing(&inst, &r.solution, &q(1)).unwrap();
    assert_eq!(r.solution.flows[1], vec![(path(&[1, 2], &[1]), q(2))]);
}

#[test]
fn push_moves_one_unit_to_the_middle() {
    let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let h = Graph::new(3, vec![(0, 2)]).unwrap();
    let inst = Instance::new(g, h, vec![q(2), q(2)], vec![q(2)]).unwrap();
    let flow = vec![(path(&[0, 1, 2], &[0, 1]), q(2))];
    let (out, [a, b]) = push_unit(&inst, 0, 1, &flow).unwrap();
    assert_eq!(out.demand.edges(), &[(0, 2), (0, 1), (1, 2)]);
    assert_eq!(out.demands, vec![q(1), q(1), q(1)]);
    assert_eq!((a, b), (1, 2));
}

#[test]
fn push_requires_every_path_through_the_vertex() {
    let inst = fixtures::even_spindle_instance(2);
    let flow = vec![
        (path(&[0, 2, 1], &[0, 1]), q(1)),
        (path(&[0, 3, 1], &[2, 3]), q(1)),
    ];
    assert!(matches!(push_unit(&inst, 4, 2, &flow), Err(Error::Precondition(_))));
}

#[test]
fn push_lowers_separating_cuts_by_two() {
    let inst = fixtures::even_spindle_instance(2);
    let w = fixtures::spindle_rim(0);
    let flow = vec![(path(&[0, w, 1], &[0, 1]), q(2))];
    let (out, _) = push_unit(&inst, 4, w, &flow).unwrap();
    assert!(check_cut_condition(&out).unwrap().satisfied);
    assert!(is_eulerian(&out));
    for mask in 1u64..(1 << 6) - 1 {
        let s = VertexSet(mask);
        let before = inst.surplus(s).unwrap();
        let after = out.surplus(s).unwrap();
        let separates = s.contains(SPINDLE_U) == s.contains(SPINDLE_V) && s.contains(w) != s.contains(SPINDLE_U);
        let drop = if separates { q(2) } else { q(0) };
        assert_eq!(before - after, drop, "side {s}");
    }
}

#[test]
fn routing_the_only_units_empties_a_path() {
    let inst = fixtures::path_instance(&[1, 1], &[1, 1]);
    let ledger = PushLedger { demand: 0, chain: vec![0], vertices: vec![0, 1] };
    let (out, ks, kd) = route_unit(&inst, &path(&[0, 1], &[0]), &ledger).unwrap();
    assert_eq!((ks, kd), (vec![1], vec![1]));
    let ledger = PushLedger { demand: 0, chain: vec![0], vertices: vec![1, 2] };
    let (out, _, _) = route_unit(&out, &path(&[1, 2], &[0]), &ledger).unwrap();
    assert_eq!((out.supply.edge_count(), out.demand.edge_count()), (0, 0));
}

#[test]
fn route_unit_rejects_capacity_underflow() {
    let inst = fixtures::path_instance(&[1, 0], &[1, 1]);
    let ledger = PushLedger { demand: 1, chain: vec![1], vertices: vec![1, 2] };
    assert!(matches!(
        route_unit(&inst, &path(&[1, 2], &[1]), &ledger),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn routing_a_hub_unit_on_the_even_spindle_keeps_the_cut_condition() {
    let inst = fixtures::even_spindle_instance(2);
    let ledger = PushLedger { demand: 4, chain: vec![4], vertices: vec![0, 1] };
    let w = fixtures::spindle_rim(0);
    let (out, _, _) = route_unit(&inst, &path(&[0, w, 1], &[0, 1]), &ledger).unwrap();
    assert!(check_cut_condition(&out).unwrap().satisfied);
    assert!(is_eulerian(&out));
}

#[test]
fn k23_decomposes_into_three_noncrossing_paths() {
    let g = fixtures::k2m(3);
    let flow: Vec<(Path, Rational)> = (0..3)
        .map(|i| (path(&[0, 2 + i, 1], &[2 * i, 2 * i + 1]), qf(1, 3)))
        .collect();
    let ps = noncrossing_decomposition(&g, 0, 1, &flow).unwrap();
    assert_eq!(ps.len(), 3);
    for (a, _) in &ps {
        for (b, _) in &ps {
            assert!(!paths_cross(&g, a, b).unwrap());
        }
    }
    let chain = CycleChain::from_paths(ps).unwrap();
    assert_eq!(chain.junctions, vec![0, 1]);
    assert_eq!(chain.cycles().count(), 1);
}

#[test]
fn shared_middle_vertex_is_on_every_path() {
    // a diamond and a triangle in series through vertex 3
    let g = Graph::new(6, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
    let flow = vec![
        (path(&[0, 1, 3, 4, 5], &[0, 2, 4, 5]), qf(1, 2)),
        (path(&[0, 2, 3, 5], &[1, 3, 6]), qf(1, 2)),
    ];
    let ps = noncrossing_decomposition(&g, 0, 5, &flow).unwrap();
    assert!(ps.iter().all(|(p, _)| p.vertices.contains(&3)));
    let chain = CycleChain::from_paths(ps).unwrap();
    assert_eq!(chain.junctions, vec![0, 3, 5]);
    assert_eq!(chain.cycles().count(), 2);
}

#[test]
fn zero_flow_is_rejected() {
    let g = fixtures::k2m(2);
    assert!(matches!(noncrossing_decomposition(&g, 0, 1, &[]), Err(Error::Precondition(_))));
}

#[test]
fn side_without_a_linked_vertex_is_chosen() {
    // cycle 0-2-1 / 0-3-1 with u = 0 and a chord from 3 past the cycle to v = 5
    let g = Graph::new(6, vec![(0, 2), (2, 1), (0, 3), (3, 1), (3, 4), (4, 5), (1, 5)]).unwrap();
    let first = path(&[0, 3, 1], &[2, 3]);
    let last = path(&[0, 2, 1], &[0, 1]);
    let chain = CycleChain {
        paths: vec![],
        junctions: vec![0, 1, 5],
        segments: vec![
            ChainSegment::Cycle { a: 0, b: 1, first, last: last.clone() },
            ChainSegment::Connector { a: 1, b: 5, edge: 6 },
        ],
    };
    assert!(linked_to(&g, VertexSet::from_iter([0, 1, 2, 3]), 3, 5));
    let p = choose_sides(&g, &chain, 5).unwrap();
    assert_eq!(p.vertices, vec![0, 2, 1, 5]);
}

#[test]
fn even_spindle_routes_integrally() {
    let inst = fixtures::even_spindle_instance(2);
    let r = routed(solve_integral(&inst).unwrap());
    verify_routing(&inst, &r.solution, &q(1)).unwrap();
    assert!(r.solution.flows.iter().flatten().all(|(_, x)| x.is_integer()));
}

#[test]
fn unit_k23_spindle_is_refused_with_a_witness() {
    let inst = fixtures::spindle(3).unit_instance();
    match solve_integral(&inst).unwrap() {
        RoutingOutcome::Refused(Refusal::NotCutSufficient { witness, .. }) => {
            assert_eq!(witness.p, 3);
            assert!(witness.verify(&inst.pair()).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn odd_and_fractional_inputs_are_refused() {
    let odd = fixtures::even_spindle_instance(1);
    assert!(matches!(solve_integral(&odd).unwrap(), RoutingOutcome::Refused(Refusal::OddVertex(_))));
    let mut frac = fixtures::path_instance(&[1], &[1]);
    frac.demands[0] = qf(1, 2);
    assert_eq!(solve_integral(&frac).unwrap(), RoutingOutcome::Refused(Refusal::NonIntegral));
    let over = fixtures::path_instance(&[1], &[2]);
    assert!(matches!(solve_integral(&over).unwrap(), RoutingOutcome::Refused(Refusal::ViolatedCut(_))));
}

#[test]
fn k4_supply_is_refused() {
    let g = fixtures::k4();
    let inst = Pair::new(g.clone(), g).unwrap().unit_instance();
    let inst = inst.scaled(&q(2));
    match solve_integral(&inst).unwrap() {
        RoutingOutcome::Refused(Refusal::NotSeriesParallel(Some(w))) => assert!(w.verify(&inst.supply)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn half_integral_single_edge() {
    let inst = fixtures::path_instance(&[1], &[1]);
    let r = routed(solve_half_integral(&inst).unwrap());
    assert_eq!(r.solution.flows[0], vec![(path(&[0, 1], &[0]), q(1))]);
}

#[test]
fn half_integral_on_odd_even_spindle() {
    let inst = fixtures::even_spindle_instance(1);
    let r = routed(solve_half_integral(&inst).unwrap());
    verify_routing(&inst, &r.solution, &qf(1, 2)).unwrap();
}

#[test]
fn verifier_catches_overload() {
    let inst = fixtures::path_instance(&[1], &[1]);
    let sol = MultiflowSolution {
        congestion: q(2),
        flows: vec![vec![(path(&[0, 1], &[0]), q(1)), (path(&[0, 1], &[0]), q(1))]],
        loads: vec![q(2)],
        residual: vec![q(0)],
    };
    assert!(matches!(verify_routing(&inst, &sol, &q(1)), Err(RoutingDefect::Delivery { .. })));
}
