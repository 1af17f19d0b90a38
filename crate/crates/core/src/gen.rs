//! Reproducible uniform random graphs.
//!
//! Each vertex draws its out-edges from its own SplitMix64 stream, seeded
//! with `seed + (v + 1) * 0x9E3779B97F4A7C15` (wrapping). Destinations are
//! uniform over `0..vertex_count` and weights uniform over `1..=max_weight`,
//! destination first then weight for each edge. Streams are independent, so
//! vertices are generated in parallel without changing the output.

use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use thiserror::Error;

use crate::cost::{Cost, INF};
use crate::graph::{CsrGraph, GraphParts, VertexId, MAX_VERTEX_COUNT};

pub const DEFAULT_MAX_WEIGHT: Cost = 100;

const STREAM_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("vertex_count must be between 1 and {MAX_VERTEX_COUNT}, got {0}")]
    VertexCount(usize),
    #[error("max_weight must be between 1 and INF - 1, got {0}")]
    MaxWeight(Cost),
    #[error("{vertex_count} vertices x {edges_per_vertex} edges overflows the edge count")]
    EdgeCount { vertex_count: usize, edges_per_vertex: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub vertex_count: usize,
    pub edges_per_vertex: usize,
    pub max_weight: Cost,
    pub seed: u64,
}

impl GenParams {
    pub fn new(vertex_count: usize, edges_per_vertex: usize, seed: u64) -> Self {
        GenParams { vertex_count, edges_per_vertex, max_weight: DEFAULT_MAX_WEIGHT, seed }
    }
}

fn vertex_stream(seed: u64, v: usize) -> SplitMix64 {
    let s = seed.wrapping_add((v as u64).wrapping_add(1).wrapping_mul(STREAM_STRIDE));
    SplitMix64::from_seed(s.to_le_bytes())
}

/// Generates a graph where every vertex has exactly `edges_per_vertex`
/// out-edges. Self-loops and parallel edges are kept.
pub fn generate_graph(params: &GenParams) -> Result<CsrGraph, GenError> {
    let GenParams { vertex_count, edges_per_vertex, max_weight, seed } = *params;
    if vertex_count == 0 || vertex_count > MAX_VERTEX_COUNT {
        return Err(GenError::VertexCount(vertex_count));
    }
    if max_weight == 0 || max_weight == INF {
        return Err(GenError::MaxWeight(max_weight));
    }
    let edge_count = vertex_count
        .checked_mul(edges_per_vertex)
        .ok_or(GenError::EdgeCount { vertex_count, edges_per_vertex })?;

    let vertex_array: Vec<usize> = (0..vertex_count).map(|v| v * edges_per_vertex).collect();
    let mut edge_array: Vec<VertexId> = vec![0; edge_count];
    let mut weight_array: Vec<Cost> = vec![0; edge_count];
    if edges_per_vertex > 0 {
        edge_array
            .par_chunks_mut(edges_per_vertex)
            .zip(weight_array.par_chunks_mut(edges_per_vertex))
            .enumerate()
            .for_each(|(v, (dests, weights))| {
                let mut rng = vertex_stream(seed, v);
                for (d, w) in dests.iter_mut().zip(weights.iter_mut()) {
                    *d = rng.random_range(0..vertex_count as u64) as VertexId;
                    *w = rng.random_range(1..=max_weight);
                }
            });
    }

    let graph = CsrGraph::from_parts(GraphParts::from_arrays(vertex_array, edge_array, weight_array))
        .expect("generated graph satisfies every validity rule");
    Ok(graph)
}
