//! The two-pass frontier relaxation engine.
//!
//! One iteration is a relaxation pass (`kernel1`) followed by a commit pass
//! (`kernel2`). The relaxation pass only ever lowers entries of the updating
//! cost array through `min`, so any order or partition of the vertices gives
//! the same result as the ascending sequential order. Concurrent schedules
//! rely on that and are required to be bit-identical to it.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use thiserror::Error;

use crate::cost::{saturating_add, Cost, INF};
use crate::graph::{CsrGraph, GraphError, VertexId};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("state sized for {state} vertices used with a graph of {graph} vertices")]
    StateSize { state: usize, graph: usize },
    #[error(
        "frontier still nonempty after {iterations} iterations on {vertex_count} vertices; \
         cost invariants are broken"
    )]
    IterationCapExceeded { iterations: usize, vertex_count: usize },
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

/// Mutable per-run arrays: frontier mask, committed costs and tentative costs.
///
/// The mask holds 0/1 bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspState {
    pub mask: Vec<u8>,
    pub cost: Vec<Cost>,
    pub updating_cost: Vec<Cost>,
}

impl SsspState {
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    fn check_size(&self, g: &CsrGraph) -> Result<(), EngineError> {
        let n = g.vertex_count();
        if self.mask.len() != n || self.cost.len() != n || self.updating_cost.len() != n {
            return Err(EngineError::StateSize { state: self.mask.len(), graph: n });
        }
        Ok(())
    }
}

/// Fresh state for a run from `source`: only the source is masked and reached.
pub fn init_sssp(g: &CsrGraph, source: VertexId) -> Result<SsspState, EngineError> {
    let source = g.check_vertex(source as u64)? as usize;
    let n = g.vertex_count();
    let mut mask = vec![0u8; n];
    let mut cost = vec![INF; n];
    mask[source] = 1;
    cost[source] = 0;
    Ok(SsspState { mask, updating_cost: cost.clone(), cost })
}

/// The index-marching edge loop of one vertex: offers `base + weight[i]` to
/// `updating[edge[i]]` for every edge `i` leaving `v`. Returns the number of
/// edges visited.
#[inline]
pub fn relax_edge_loop(g: &CsrGraph, v: VertexId, base: Cost, updating: &mut [Cost]) -> usize {
    let range = g.edge_range(v as usize);
    let edges = &g.edge_array()[range.clone()];
    let weights = &g.weight_array()[range];
    for (&dest, &w) in edges.iter().zip(weights) {
        let candidate = saturating_add(base, w);
        let slot = &mut updating[dest as usize];
        if candidate < *slot {
            *slot = candidate;
        }
    }
    edges.len()
}

/// Relaxes the out-edges of `v` if it is masked, then clears its mask bit.
/// Never writes the committed cost array. Returns the number of edges relaxed.
pub fn relax_vertex(g: &CsrGraph, s: &mut SsspState, v: VertexId) -> Result<usize, EngineError> {
    s.check_size(g)?;
    let v = g.check_vertex(v as u64)?;
    Ok(relax_masked(g, s, v as usize))
}

#[inline]
fn relax_masked(g: &CsrGraph, s: &mut SsspState, v: usize) -> usize {
    if s.mask[v] == 0 {
        return 0;
    }
    let n = relax_edge_loop(g, v as VertexId, s.cost[v], &mut s.updating_cost);
    s.mask[v] = 0;
    n
}

/// Order in which the relaxation pass visits vertices.
///
/// The concurrent variants run on the current rayon pool: the engine's own
/// pool under [`Engine::kernel1_with`], the global pool otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Canonical order `0..V`.
    Ascending,
    Descending,
    /// Pseudo-random permutation drawn from the seed.
    Shuffled { seed: u64 },
    /// Parallel tasks of `chunk_size` vertices, merged through atomic
    /// fetch-min on the updating cost array.
    Concurrent { chunk_size: usize },
    /// `shards` contiguous vertex blocks, each relaxing into a private
    /// shadow array; the shadows are merged by elementwise min.
    Sharded { shards: usize },
}

/// Relaxation pass in the canonical ascending order. Returns the number of
/// edges relaxed.
pub fn kernel1_pass(g: &CsrGraph, s: &mut SsspState) -> Result<usize, EngineError> {
    s.check_size(g)?;
    Ok(kernel1_sequential(g, s))
}

/// Relaxation pass under an explicit schedule.
pub fn kernel1_pass_with(
    g: &CsrGraph,
    s: &mut SsspState,
    schedule: &Schedule,
) -> Result<usize, EngineError> {
    s.check_size(g)?;
    let n = g.vertex_count();
    let relaxed = match *schedule {
        Schedule::Ascending => kernel1_sequential(g, s),
        Schedule::Descending => (0..n).rev().map(|v| relax_masked(g, s, v)).sum(),
        Schedule::Shuffled { seed } => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut SplitMix64::seed_from_u64(seed));
            order.into_iter().map(|v| relax_masked(g, s, v)).sum()
        }
        Schedule::Concurrent { chunk_size } => kernel1_concurrent(g, s, chunk_size.max(1)),
        Schedule::Sharded { shards } => kernel1_sharded(g, s, shards.max(1)),
    };
    Ok(relaxed)
}

fn kernel1_sequential(g: &CsrGraph, s: &mut SsspState) -> usize {
    let SsspState { mask, cost, updating_cost } = s;
    let mut relaxed = 0;
    for (v, m) in mask.iter_mut().enumerate() {
        if *m != 0 {
            relaxed += relax_edge_loop(g, v as VertexId, cost[v], updating_cost);
            *m = 0;
        }
    }
    relaxed
}

fn as_atomic(slice: &mut [Cost]) -> &[AtomicU64] {
    const _: () = assert!(
        std::mem::size_of::<AtomicU64>() == std::mem::size_of::<Cost>()
            && std::mem::align_of::<AtomicU64>() == std::mem::align_of::<Cost>()
    );
    // SAFETY: AtomicU64 has the same size and alignment as u64 (checked
    // above), and the exclusive borrow rules out non-atomic aliases for the
    // lifetime of the returned slice.
    unsafe { &*(slice as *mut [Cost] as *const [AtomicU64]) }
}

fn kernel1_concurrent(g: &CsrGraph, s: &mut SsspState, chunk_size: usize) -> usize {
    let SsspState { mask, cost, updating_cost } = s;
    let cost: &[Cost] = cost;
    let updating = as_atomic(updating_cost);
    let edges = g.edge_array();
    let weights = g.weight_array();
    mask.par_chunks_mut(chunk_size)
        .enumerate()
        .map(|(chunk, bits)| {
            let first = chunk * chunk_size;
            let mut relaxed = 0;
            for (offset, m) in bits.iter_mut().enumerate() {
                if *m == 0 {
                    continue;
                }
                let v = first + offset;
                let base = cost[v];
                let range = g.edge_range(v);
                relaxed += range.len();
                for (&dest, &w) in edges[range.clone()].iter().zip(&weights[range]) {
                    let candidate = saturating_add(base, w);
                    let slot = &updating[dest as usize];
                    if candidate < slot.load(Ordering::Relaxed) {
                        slot.fetch_min(candidate, Ordering::Relaxed);
                    }
                }
                *m = 0;
            }
            relaxed
        })
        .sum()
}

fn kernel1_sharded(g: &CsrGraph, s: &mut SsspState, workers: usize) -> usize {
    let n = g.vertex_count();
    let block = n.div_ceil(workers).max(1);
    let SsspState { mask, cost, updating_cost } = s;
    let cost: &[Cost] = cost;
    let shards: Vec<(Vec<Cost>, usize)> = mask
        .par_chunks_mut(block)
        .enumerate()
        .map(|(b, bits)| {
            let mut shadow = vec![INF; n];
            let mut relaxed = 0;
            for (offset, m) in bits.iter_mut().enumerate() {
                if *m != 0 {
                    let v = b * block + offset;
                    relaxed += relax_edge_loop(g, v as VertexId, cost[v], &mut shadow);
                    *m = 0;
                }
            }
            (shadow, relaxed)
        })
        .collect();
    updating_cost.par_iter_mut().enumerate().for_each(|(d, slot)| {
        for (shadow, _) in &shards {
            *slot = (*slot).min(shadow[d]);
        }
    });
    shards.iter().map(|(_, r)| r).sum()
}

/// Commit pass. Improved vertices take their tentative cost and are masked;
/// all others have their tentative cost reset to the committed one. Returns
/// whether any vertex was masked.
pub fn kernel2_pass(s: &mut SsspState) -> bool {
    commit_slices(&mut s.mask, &mut s.cost, &mut s.updating_cost)
}

#[inline]
fn commit_slices(mask: &mut [u8], cost: &mut [Cost], updating: &mut [Cost]) -> bool {
    let mut changed = false;
    for ((m, c), u) in mask.iter_mut().zip(cost.iter_mut()).zip(updating.iter_mut()) {
        if *u < *c {
            *c = *u;
            *m = 1;
            changed = true;
        } else {
            *u = *c;
        }
    }
    changed
}

fn kernel2_concurrent(s: &mut SsspState, chunk_size: usize) -> bool {
    let SsspState { mask, cost, updating_cost } = s;
    mask.par_chunks_mut(chunk_size)
        .zip(cost.par_chunks_mut(chunk_size))
        .zip(updating_cost.par_chunks_mut(chunk_size))
        .map(|((m, c), u)| commit_slices(m, c, u))
        .reduce(|| false, |a, b| a | b)
}

pub fn mask_nonempty(s: &SsspState) -> bool {
    s.mask.iter().any(|&m| m != 0)
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool, EngineError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))
}

/// Worker count and chunking for the engine's passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub workers: usize,
    /// Vertices per parallel task; `None` means `V / (4 * workers)`.
    pub chunk_size: Option<usize>,
}

impl EngineConfig {
    pub fn sequential() -> Self {
        EngineConfig { workers: 1, chunk_size: None }
    }

    pub fn with_workers(workers: usize) -> Self {
        EngineConfig { workers: workers.max(1), chunk_size: None }
    }

    pub fn chunk_for(&self, vertex_count: usize) -> usize {
        self.chunk_size
            .unwrap_or_else(|| vertex_count / (4 * self.workers.max(1)))
            .max(1)
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        EngineConfig { workers, chunk_size: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Relaxation/commit rounds until the frontier emptied.
    pub iterations: usize,
    /// Edges visited by the relaxation passes.
    pub relaxations: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspRun {
    pub cost: Vec<Cost>,
    pub stats: RunStats,
}

/// Runs single-source searches with a fixed worker configuration.
///
/// With one worker every pass runs inline on the calling thread; otherwise a
/// private thread pool is kept for the engine's lifetime.
pub struct Engine {
    config: EngineConfig,
    pool: Option<rayon::ThreadPool>,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, EngineError> {
        let pool = if config.workers > 1 { Some(build_pool(config.workers)?) } else { None };
        Ok(Engine { config, pool })
    }

    pub fn sequential() -> Self {
        Engine { config: EngineConfig::sequential(), pool: None }
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn kernel1(&self, g: &CsrGraph, s: &mut SsspState) -> Result<usize, EngineError> {
        s.check_size(g)?;
        Ok(match &self.pool {
            None => kernel1_sequential(g, s),
            Some(pool) => {
                let chunk = self.config.chunk_for(g.vertex_count());
                pool.install(|| kernel1_concurrent(g, s, chunk))
            }
        })
    }

    /// Relaxation pass under an explicit schedule, inside this engine's pool.
    pub fn kernel1_with(
        &self,
        g: &CsrGraph,
        s: &mut SsspState,
        schedule: &Schedule,
    ) -> Result<usize, EngineError> {
        match &self.pool {
            None => kernel1_pass_with(g, s, schedule),
            Some(pool) => pool.install(|| kernel1_pass_with(g, s, schedule)),
        }
    }

    pub fn kernel2(&self, s: &mut SsspState) -> bool {
        match &self.pool {
            None => kernel2_pass(s),
            Some(pool) => {
                let chunk = self.config.chunk_for(s.len());
                pool.install(|| kernel2_concurrent(s, chunk))
            }
        }
    }

    pub fn run_sssp(&self, g: &CsrGraph, source: VertexId) -> Result<SsspRun, EngineError> {
        self.run_sssp_observed(g, source, |_, _| {})
    }

    /// Like [`run_sssp`](Self::run_sssp), calling `observer` with the
    /// initial state (iteration 0) and again after every commit pass.
    pub fn run_sssp_observed<F>(
        &self,
        g: &CsrGraph,
        source: VertexId,
        mut observer: F,
    ) -> Result<SsspRun, EngineError>
    where
        F: FnMut(usize, &SsspState),
    {
        let start = Instant::now();
        let mut state = init_sssp(g, source)?;
        let vertex_count = g.vertex_count();
        let mut stats = RunStats::default();
        observer(0, &state);
        loop {
            if stats.iterations == vertex_count {
                return Err(EngineError::IterationCapExceeded {
                    iterations: stats.iterations + 1,
                    vertex_count,
                });
            }
            stats.iterations += 1;
            stats.relaxations += self.kernel1(g, &mut state)? as u64;
            let changed = self.kernel2(&mut state);
            debug_assert_eq!(changed, mask_nonempty(&state));
            debug_assert!(state.updating_cost == state.cost);
            observer(stats.iterations, &state);
            if !changed {
                break;
            }
        }
        stats.wall_time = start.elapsed();
        Ok(SsspRun { cost: state.cost, stats })
    }
}

/// Costs from `source` to every vertex, [`INF`] where unreachable, using the
/// sequential engine.
pub fn run_sssp(g: &CsrGraph, source: VertexId) -> Result<Vec<Cost>, EngineError> {
    Ok(Engine::sequential().run_sssp(g, source)?.cost)
}
