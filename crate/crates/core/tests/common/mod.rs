#![allow(dead_code)]

use frontier_sssp::cost::{saturating_add, Cost, INF};
use frontier_sssp::engine::{Engine, SsspState};
use frontier_sssp::graph::{CsrGraph, VertexId};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    /// 0..=100, zero included.
    Small,
    /// INF-10..=INF-1.
    NearInf,
    /// Either of the above per edge.
    Mixed,
}

/// Random multigraph with per-vertex out-degree uniform in `0..=max_degree`.
pub fn random_graph(rng: &mut SplitMix64, vertices: usize, max_degree: usize, weights: Weights) -> CsrGraph {
    let mut edges = Vec::new();
    for u in 0..vertices {
        let degree = rng.random_range(0..=max_degree);
        for _ in 0..degree {
            let v = rng.random_range(0..vertices) as VertexId;
            let w = match weights {
                Weights::Small => rng.random_range(0..=100),
                Weights::NearInf => rng.random_range(INF - 10..=INF - 1),
                Weights::Mixed => {
                    if rng.random_bool(0.5) {
                        rng.random_range(0..=100)
                    } else {
                        rng.random_range(INF - 10..=INF - 1)
                    }
                }
            };
            edges.push((u as VertexId, v, w));
        }
    }
    CsrGraph::from_edges(vertices, &edges).unwrap()
}

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Mask and committed cost after one commit pass (index 0 is the initial
/// state).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub mask: Vec<u8>,
    pub cost: Vec<Cost>,
}

impl Snapshot {
    pub fn of(s: &SsspState) -> Self {
        Snapshot { mask: s.mask.clone(), cost: s.cost.clone() }
    }
}

/// Runs the real engine, recording every snapshot and checking the commit
/// fixed point (`updating_cost == cost`) after each commit pass.
pub fn traced_run(engine: &Engine, g: &CsrGraph, source: VertexId) -> (Vec<Cost>, Vec<Snapshot>) {
    let mut trace = Vec::new();
    let run = engine
        .run_sssp_observed(g, source, |_, s| {
            assert_eq!(s.updating_cost, s.cost, "commit pass left updating_cost != cost");
            trace.push(Snapshot::of(s));
        })
        .unwrap();
    (run.cost, trace)
}

/// Checks cost monotonicity over a run:
///
/// * no committed cost ever increases from one snapshot to the next, and the
///   source stays at 0;
/// * a cost lowered in iteration k equals `cost[u] + w` (saturating) for some
///   vertex `u` of that iteration's frontier with an edge `u -> v` of weight
///   `w`, so it never drops below the cost of the vertex that produced it.
pub fn check_monotone(g: &CsrGraph, source: VertexId, trace: &[Snapshot]) -> Result<(), String> {
    for (k, pair) in trace.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.cost[source as usize] != 0 {
            return Err(format!("iteration {}: source cost became {}", k + 1, next.cost[source as usize]));
        }
        for v in 0..g.vertex_count() {
            if next.cost[v] > prev.cost[v] {
                return Err(format!(
                    "iteration {}: cost[{v}] increased {} -> {}",
                    k + 1,
                    prev.cost[v],
                    next.cost[v]
                ));
            }
        }
        for v in 0..g.vertex_count() {
            if next.cost[v] == prev.cost[v] {
                continue;
            }
            let produced = (0..g.vertex_count() as VertexId).any(|u| {
                prev.mask[u as usize] == 1
                    && g.out_edges(u).any(|(d, w)| {
                        d as usize == v && saturating_add(prev.cost[u as usize], w) == next.cost[v]
                    })
            });
            if !produced {
                return Err(format!(
                    "iteration {}: cost[{v}] = {} is not cost + weight of any frontier predecessor",
                    k + 1,
                    next.cost[v]
                ));
            }
        }
    }
    Ok(())
}

/// How a shadow engine computes a relaxation candidate for edge `i` leaving a
/// vertex with committed cost `base`.
pub type Candidate = fn(&CsrGraph, usize, Cost) -> Cost;

/// Correct candidate.
pub fn candidate_correct(g: &CsrGraph, i: usize, base: Cost) -> Cost {
    saturating_add(base, g.weight_array()[i])
}

/// Weight looked up by the destination vertex instead of the edge index.
pub fn candidate_indexing_bug(g: &CsrGraph, i: usize, base: Cost) -> Cost {
    saturating_add(base, g.weight_array()[g.edge_array()[i] as usize])
}

/// Plain wrapping addition, no saturation guard.
pub fn candidate_wrapping(g: &CsrGraph, i: usize, base: Cost) -> Cost {
    base.wrapping_add(g.weight_array()[i])
}

/// Minimal stand-alone two-pass frontier search with a pluggable candidate
/// rule. Stops after `max_iterations` even if the frontier is not empty.
pub fn shadow_sssp(
    g: &CsrGraph,
    source: VertexId,
    candidate: Candidate,
    max_iterations: usize,
) -> (Vec<Cost>, Vec<Snapshot>) {
    let n = g.vertex_count();
    let mut mask = vec![0u8; n];
    let mut cost = vec![INF; n];
    mask[source as usize] = 1;
    cost[source as usize] = 0;
    let mut updating = cost.clone();
    let mut trace = vec![Snapshot { mask: mask.clone(), cost: cost.clone() }];
    for _ in 0..max_iterations {
        if !mask.contains(&1) {
            break;
        }
        for v in 0..n {
            if mask[v] == 1 {
                for i in g.out_edge_range(v as VertexId).unwrap() {
                    let d = g.edge_array()[i] as usize;
                    updating[d] = updating[d].min(candidate(g, i, cost[v]));
                }
                mask[v] = 0;
            }
        }
        for v in 0..n {
            if updating[v] < cost[v] {
                cost[v] = updating[v];
                mask[v] = 1;
            } else {
                updating[v] = cost[v];
            }
        }
        trace.push(Snapshot { mask: mask.clone(), cost: cost.clone() });
    }
    (cost, trace)
}

/// Edge count > vertex count, and the weight stored at the destination's
/// index differs from the edge's own weight on the shortest routes:
///
/// ```text
/// 0 -> 1 (w 1)   0 -> 2 (w 10)   1 -> 2 (w 1)
/// 2 -> 3 (w 1)   1 -> 3 (w 50)   3 -> 0 (w 7)
/// ```
///
/// True costs from 0 are `[0, 1, 2, 3]`.
pub fn indexing_bug_fixture() -> CsrGraph {
    CsrGraph::from_edges(
        4,
        &[(0, 1, 1), (0, 2, 10), (1, 2, 1), (1, 3, 50), (2, 3, 1), (3, 0, 7)],
    )
    .unwrap()
}

/// Near-INF weights: one-hop costs stay finite, anything longer saturates.
pub fn overflow_fixture() -> CsrGraph {
    // chain 0 -> 1 -> 2 -> 3 with near-INF weights plus a shortcut 0 -> 3
    CsrGraph::from_edges(
        4,
        &[(0, 1, INF - 10), (1, 2, INF - 3), (2, 3, INF - 1), (0, 2, INF - 7), (1, 3, INF - 2)],
    )
    .unwrap()
}
