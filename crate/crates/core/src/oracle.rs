//! Independent reference implementations used to check the engine.
//!
//! None of these share code with the engine's relaxation loop. Arithmetic is
//! done in `u128`, where sums of `u64` weights along simple paths cannot
//! overflow, and only clamped to [`INF`] at the end.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::cost::{Cost, INF};
use crate::graph::{CsrGraph, GraphError, VertexId};

/// Largest graph accepted by [`exhaustive_shortest_paths`].
pub const EXHAUSTIVE_MAX_VERTICES: usize = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("exhaustive enumeration supports at most {max} vertices, graph has {vertex_count}")]
    TooLarge { vertex_count: usize, max: usize },
}

fn clamp(wide: u128) -> Cost {
    if wide >= INF as u128 {
        INF
    } else {
        wide as Cost
    }
}

/// Textbook Dijkstra with a binary min-heap and a settled set.
pub fn dijkstra_reference(g: &CsrGraph, source: VertexId) -> Result<Vec<Cost>, OracleError> {
    let source = g.check_vertex(source as u64)?;
    let n = g.vertex_count();
    let mut dist: Vec<Option<u128>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = Some(0);
    heap.push(Reverse((0u128, source)));

    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u as usize] {
            continue;
        }
        settled[u as usize] = true;
        let range = g.out_edge_range(u)?;
        for i in range {
            let v = g.edge_array()[i];
            let candidate = d.checked_add(g.weight_array()[i] as u128);
            let candidate = candidate.expect("u128 path cost overflow");
            if settled[v as usize] {
                continue;
            }
            if dist[v as usize].is_none_or(|old| candidate < old) {
                dist[v as usize] = Some(candidate);
                heap.push(Reverse((candidate, v)));
            }
        }
    }

    Ok(dist.into_iter().map(|d| d.map_or(INF, clamp)).collect())
}

/// Minimum over every simple path from `source`, by depth-first enumeration.
/// Ground truth for [`dijkstra_reference`] on tiny graphs.
pub fn exhaustive_shortest_paths(g: &CsrGraph, source: VertexId) -> Result<Vec<Cost>, OracleError> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_MAX_VERTICES {
        return Err(OracleError::TooLarge { vertex_count: n, max: EXHAUSTIVE_MAX_VERTICES });
    }
    let source = g.check_vertex(source as u64)?;

    // dense matrix of the lightest edge per ordered pair; parallel edges can
    // not change a minimum and would multiply the path count
    let mut lightest: Vec<Vec<Option<u128>>> = vec![vec![None; n]; n];
    for (u, row) in lightest.iter_mut().enumerate() {
        for (v, w) in g.out_edges(u as VertexId) {
            let cell = &mut row[v as usize];
            *cell = Some(cell.map_or(w as u128, |old| old.min(w as u128)));
        }
    }
    let adjacency: Vec<Vec<(usize, u128)>> = lightest
        .iter()
        .map(|row| row.iter().enumerate().filter_map(|(v, w)| w.map(|w| (v, w))).collect())
        .collect();

    fn walk(
        u: usize,
        so_far: u128,
        adjacency: &[Vec<(usize, u128)>],
        on_path: &mut [bool],
        best: &mut [Option<u128>],
    ) {
        if best[u].is_none_or(|b| so_far < b) {
            best[u] = Some(so_far);
        }
        on_path[u] = true;
        for &(v, w) in &adjacency[u] {
            if !on_path[v] {
                walk(v, so_far + w, adjacency, on_path, best);
            }
        }
        on_path[u] = false;
    }

    let mut best = vec![None; n];
    let mut on_path = vec![false; n];
    walk(source as usize, 0, &adjacency, &mut on_path, &mut best);
    Ok(best.into_iter().map(|d| d.map_or(INF, clamp)).collect())
}

/// Structurally recursive fold of the min-update over a list of
/// `(destination, weight)` pairs: the empty list leaves `updating` as it is,
/// otherwise the head is applied and the fold recurses on the tail.
///
/// Must agree with the engine's index-marching edge loop on the same slice.
pub fn fold_relax_oracle(pairs: &[(VertexId, Cost)], base_cost: Cost, updating: Vec<Cost>) -> Vec<Cost> {
    match pairs {
        [] => updating,
        [(dest, weight), rest @ ..] => {
            let mut updating = updating;
            let candidate = clamp(base_cost as u128 + *weight as u128);
            let slot = &mut updating[*dest as usize];
            *slot = (*slot).min(candidate);
            fold_relax_oracle(rest, base_cost, updating)
        }
    }
}
