//! Multi-source driver: one frontier search per source, one result row each.

use rayon::prelude::*;
use thiserror::Error;

use crate::cost::Cost;
use crate::engine::{Engine, EngineConfig, EngineError, RunStats};
use crate::graph::{CsrGraph, GraphError, VertexId};

/// Default ceiling for the result matrix: 2 GiB.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

#[derive(Debug, Error)]
pub enum ApspError {
    #[error("no source vertices given")]
    NoSources,
    #[error("source index {index}: {source}")]
    Source { index: usize, source: GraphError },
    #[error(
        "result matrix for {sources} sources x {vertices} vertices needs {bytes} bytes, \
         over the {budget}-byte budget; run the sources in batches of at most {batch}"
    )]
    OverBudget { sources: usize, vertices: usize, bytes: usize, budget: usize, batch: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApspConfig {
    pub engine: EngineConfig,
    /// Maximum size in bytes of the cost matrix.
    pub memory_budget: usize,
}

impl Default for ApspConfig {
    fn default() -> Self {
        ApspConfig { engine: EngineConfig::default(), memory_budget: DEFAULT_MEMORY_BUDGET }
    }
}

/// Costs from each requested source, row-major: row `i` belongs to
/// `sources[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApspResult {
    pub sources: Vec<VertexId>,
    pub vertex_count: usize,
    pub costs: Vec<Cost>,
    /// Per-row run statistics, in source order.
    pub stats: Vec<RunStats>,
}

impl ApspResult {
    pub fn row(&self, i: usize) -> &[Cost] {
        &self.costs[i * self.vertex_count..(i + 1) * self.vertex_count]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cost]> {
        // chunks_exact panics on zero; an empty graph has no columns anyway
        self.costs.chunks_exact(self.vertex_count.max(1)).take(self.sources.len())
    }

    pub fn to_rows(&self) -> Vec<Vec<Cost>> {
        self.rows().map(<[Cost]>::to_vec).collect()
    }
}

/// Runs a search from every source with the default configuration.
pub fn run_apsp(g: &CsrGraph, sources: &[VertexId]) -> Result<ApspResult, ApspError> {
    run_apsp_with(g, sources, &ApspConfig::default())
}

/// Runs a search from every source.
///
/// All sources are checked before any work starts. When there are at least as
/// many sources as workers, rows are spread across workers and each row runs
/// sequentially; otherwise rows run one after another and each search uses
/// the whole pool.
pub fn run_apsp_with(
    g: &CsrGraph,
    sources: &[VertexId],
    config: &ApspConfig,
) -> Result<ApspResult, ApspError> {
    if sources.is_empty() {
        return Err(ApspError::NoSources);
    }
    for (index, &s) in sources.iter().enumerate() {
        g.check_vertex(s as u64).map_err(|source| ApspError::Source { index, source })?;
    }
    let n = g.vertex_count();
    let row_bytes = n * std::mem::size_of::<Cost>();
    let bytes = row_bytes.saturating_mul(sources.len());
    if bytes > config.memory_budget {
        return Err(ApspError::OverBudget {
            sources: sources.len(),
            vertices: n,
            bytes,
            budget: config.memory_budget,
            batch: (config.memory_budget / row_bytes.max(1)).max(1),
        });
    }

    let mut costs = vec![0; n * sources.len()];
    let mut stats = vec![RunStats::default(); sources.len()];
    let workers = config.engine.workers.max(1);

    if workers > 1 && sources.len() >= workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| EngineError::Pool(e.to_string()))?;
        let inner = Engine::sequential();
        pool.install(|| {
            costs
                .par_chunks_mut(n.max(1))
                .zip(stats.par_iter_mut())
                .zip(sources.par_iter())
                .try_for_each(|((row, stat), &s)| {
                    let run = inner.run_sssp(g, s)?;
                    row.copy_from_slice(&run.cost);
                    *stat = run.stats;
                    Ok::<_, EngineError>(())
                })
        })?;
    } else {
        let engine = Engine::new(config.engine)?;
        for (i, &s) in sources.iter().enumerate() {
            let run = engine.run_sssp(g, s)?;
            costs[i * n..(i + 1) * n].copy_from_slice(&run.cost);
            stats[i] = run.stats;
        }
    }

    Ok(ApspResult { sources: sources.to_vec(), vertex_count: n, costs, stats })
}
