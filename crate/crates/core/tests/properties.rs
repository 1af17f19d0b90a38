mod common;

use common::*;
use frontier_sssp::apsp::run_apsp;
use frontier_sssp::cost::{Cost, INF};
use frontier_sssp::engine::{init_sssp, kernel1_pass, kernel1_pass_with, relax_vertex, run_sssp, Engine, Schedule};
use frontier_sssp::graph::{CsrGraph, VertexId};
use frontier_sssp::oracle::{dijkstra_reference, exhaustive_shortest_paths};
use frontier_sssp::path::{build_reverse_index, path_cost, recover_path};
use proptest::prelude::*;

/// (vertex_count, edges) with weights drawn from a mix of small and near-INF
/// values.
fn edge_list(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId, Cost)>)> {
    (1..=max_vertices).prop_flat_map(move |n| {
        let weight = prop_oneof![4 => 0u64..=100, 1 => (INF - 10)..=(INF - 1)];
        (Just(n), prop::collection::vec((0..n as VertexId, 0..n as VertexId, weight), 0..=max_edges))
    })
}

fn build((n, edges): &(usize, Vec<(VertexId, VertexId, Cost)>)) -> CsrGraph {
    CsrGraph::from_edges(*n, edges).unwrap()
}

/// Fewest hops over all shortest paths, by layered relaxation on the oracle's
/// costs: the first layer in which each vertex's final cost is attained.
fn min_hops_to_final(g: &CsrGraph, source: VertexId, final_cost: &[Cost]) -> usize {
    let n = g.vertex_count();
    let mut best = vec![INF; n];
    best[source as usize] = 0;
    let mut hops = 0;
    for layer in 1..n {
        if best == final_cost {
            break;
        }
        let prev = best.clone();
        for u in 0..n as VertexId {
            for (d, w) in g.out_edges(u) {
                let c = prev[u as usize].saturating_add(w);
                if c < best[d as usize] {
                    best[d as usize] = c;
                }
            }
        }
        hops = layer;
    }
    hops
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engine_matches_dijkstra(graph in edge_list(40, 120), pick: prop::sample::Index) {
        let g = build(&graph);
        let source = pick.index(g.vertex_count()) as VertexId;
        prop_assert_eq!(run_sssp(&g, source).unwrap(), dijkstra_reference(&g, source).unwrap());
    }

    #[test]
    fn dijkstra_matches_exhaustive(graph in edge_list(8, 30), pick: prop::sample::Index) {
        let g = build(&graph);
        let source = pick.index(g.vertex_count()) as VertexId;
        prop_assert_eq!(dijkstra_reference(&g, source).unwrap(), exhaustive_shortest_paths(&g, source).unwrap());
    }

    #[test]
    fn monotone_and_bounded_iterations(graph in edge_list(30, 90), pick: prop::sample::Index) {
        let g = build(&graph);
        let source = pick.index(g.vertex_count()) as VertexId;
        let engine = Engine::sequential();
        let (cost, trace) = traced_run(&engine, &g, source);
        check_monotone(&g, source, &trace).map_err(TestCaseError::fail)?;
        let iterations = trace.len() - 1;
        prop_assert!(iterations <= 1 + min_hops_to_final(&g, source, &cost));
        prop_assert!(iterations <= g.vertex_count());
        prop_assert_eq!(cost[source as usize], 0);
    }

    #[test]
    fn schedules_are_bit_identical(graph in edge_list(60, 200), pick: prop::sample::Index, seed: u64, chunk in 1usize..9, shards in 1usize..9) {
        let g = build(&graph);
        let source = pick.index(g.vertex_count()) as VertexId;
        // advance a canonical run one iteration at a time
        let mut state = init_sssp(&g, source).unwrap();
        for _ in 0..g.vertex_count() {
            let mut canonical = state.clone();
            kernel1_pass(&g, &mut canonical).unwrap();
            for schedule in [
                Schedule::Descending,
                Schedule::Shuffled { seed },
                Schedule::Concurrent { chunk_size: chunk },
                Schedule::Sharded { shards },
            ] {
                let mut s = state.clone();
                kernel1_pass_with(&g, &mut s, &schedule).unwrap();
                prop_assert_eq!(&s, &canonical, "{:?}", schedule);
            }
            // the relaxation pass never writes committed costs
            prop_assert_eq!(&canonical.cost, &state.cost);
            state = canonical;
            if !frontier_sssp::engine::kernel2_pass(&mut state) {
                break;
            }
        }
    }

    #[test]
    fn candidates_never_undercut_their_source(graph in edge_list(20, 60), pick: prop::sample::Index, base in prop_oneof![0u64..100, (INF - 100)..=INF]) {
        let g = build(&graph);
        let v = pick.index(g.vertex_count()) as VertexId;
        let mut s = init_sssp(&g, v).unwrap();
        s.cost[v as usize] = base;
        let before = s.updating_cost.clone();
        relax_vertex(&g, &mut s, v).unwrap();
        for (d, (&now, &was)) in s.updating_cost.iter().zip(&before).enumerate() {
            if now != was {
                prop_assert!(now >= base, "updating_cost[{}] = {} < {}", d, now, base);
            }
        }
    }

    #[test]
    fn recovered_paths_are_shortest(graph in edge_list(40, 120), pick: prop::sample::Index) {
        let g = build(&graph);
        let source = pick.index(g.vertex_count()) as VertexId;
        let cost = run_sssp(&g, source).unwrap();
        for dest in 0..g.vertex_count() as VertexId {
            match recover_path(&g, &cost, source, dest) {
                Ok(p) => {
                    prop_assert_eq!(p.vertices[0], source);
                    prop_assert_eq!(*p.vertices.last().unwrap(), dest);
                    prop_assert!(p.vertices.len() <= g.vertex_count());
                    prop_assert_eq!(path_cost(&g, &p).unwrap(), cost[dest as usize]);
                }
                Err(_) => prop_assert_eq!(cost[dest as usize], INF),
            }
        }
    }

    #[test]
    fn reverse_index_transposes(graph in edge_list(30, 100)) {
        let g = build(&graph);
        let r = build_reverse_index(&g);
        prop_assert_eq!(r.pair_count(), g.edge_count());
        let mut forward: Vec<(VertexId, VertexId, Cost)> = (0..g.vertex_count() as VertexId)
            .flat_map(|u| g.out_edges(u).map(move |(d, w)| (u, d, w)))
            .collect();
        let mut backward: Vec<(VertexId, VertexId, Cost)> = (0..g.vertex_count() as VertexId)
            .flat_map(|d| r.predecessors(d).iter().map(move |&(u, w)| (u, d, w)))
            .collect();
        forward.sort_unstable();
        backward.sort_unstable();
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn apsp_rows_are_independent_runs(graph in edge_list(25, 80), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let g = build(&graph);
        let sources: Vec<VertexId> = picks.iter().map(|p| p.index(g.vertex_count()) as VertexId).collect();
        let result = run_apsp(&g, &sources).unwrap();
        for (i, &s) in sources.iter().enumerate() {
            let alone = run_sssp(&g, s).unwrap();
            prop_assert_eq!(result.row(i), alone.as_slice());
            prop_assert_eq!(result.row(i)[s as usize], 0);
        }
    }
}

#[test]
fn indexing_bug_shadow_fails_on_fixture() {
    let g = indexing_bug_fixture();
    let oracle = dijkstra_reference(&g, 0).unwrap();
    assert_eq!(oracle, vec![0, 1, 2, 3]);
    assert_eq!(run_sssp(&g, 0).unwrap(), oracle);
    assert_ne!(shadow_sssp(&g, 0, candidate_indexing_bug, 4).0, oracle);
}

#[test]
fn wrapping_shadow_breaks_monotonicity() {
    let g = overflow_fixture();
    let oracle = dijkstra_reference(&g, 0).unwrap();
    assert_eq!(oracle, vec![0, INF - 10, INF - 7, INF]);
    let (cost, trace) = traced_run(&Engine::sequential(), &g, 0);
    assert_eq!(cost, oracle);
    assert!(check_monotone(&g, 0, &trace).is_ok());
    let (wrapped, trace) = shadow_sssp(&g, 0, candidate_wrapping, 4);
    assert_ne!(wrapped, oracle);
    assert!(check_monotone(&g, 0, &trace).is_err());
}
