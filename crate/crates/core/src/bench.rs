//! Timing harness: multi-source runs over growing source counts.

use std::hash::Hasher;
use std::io::{self, Write};
use std::time::Instant;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::apsp::{run_apsp_with, ApspConfig, ApspError};
use crate::cost::Cost;
use crate::graph::{CsrGraph, VertexId};

/// One timed multi-source run. Serialized as one JSON object per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub command: String,
    pub vertices: usize,
    pub edges: usize,
    pub sources: usize,
    pub workers: usize,
    pub repetition: usize,
    /// Iterations summed over all sources.
    pub iterations: u64,
    pub relaxations: u64,
    pub wall_ms: f64,
    /// FNV-1a over the little-endian cost matrix, as 16 hex digits.
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    /// Each entry `k` runs sources `0..k`.
    pub source_counts: Vec<usize>,
    pub repetitions: usize,
    pub apsp: ApspConfig,
}

/// FNV-1a 64 of the costs in little-endian byte order.
pub fn checksum(costs: &[Cost]) -> u64 {
    let mut h = FnvHasher::default();
    for c in costs {
        h.write(&c.to_le_bytes());
    }
    h.finish()
}

/// Runs every source count `repetitions` times, one configuration after
/// another, and returns one record per run.
pub fn bench(g: &CsrGraph, config: &BenchConfig) -> Result<Vec<BenchRecord>, ApspError> {
    let mut records = Vec::new();
    for &count in &config.source_counts {
        let sources: Vec<VertexId> = (0..count.min(g.vertex_count()) as VertexId).collect();
        for repetition in 0..config.repetitions {
            let start = Instant::now();
            let result = run_apsp_with(g, &sources, &config.apsp)?;
            let wall = start.elapsed();
            records.push(BenchRecord {
                command: "apsp".into(),
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                sources: sources.len(),
                workers: config.apsp.engine.workers,
                repetition,
                iterations: result.stats.iter().map(|s| s.iterations as u64).sum(),
                relaxations: result.stats.iter().map(|s| s.relaxations).sum(),
                wall_ms: wall.as_secs_f64() * 1e3,
                checksum: format!("{:016x}", checksum(&result.costs)),
            });
        }
    }
    Ok(records)
}

pub fn write_report<W: Write>(records: &[BenchRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Ordinary least squares over `(x, y)` points. Needs at least two distinct
/// `x` values.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept, r_squared })
}

/// Median wall time per source count.
pub fn median_times(records: &[BenchRecord]) -> Vec<(usize, f64)> {
    let mut counts: Vec<usize> = records.iter().map(|r| r.sources).collect();
    counts.dedup();
    counts
        .into_iter()
        .map(|k| {
            let mut times: Vec<f64> =
                records.iter().filter(|r| r.sources == k).map(|r| r.wall_ms).collect();
            times.sort_by(f64::total_cmp);
            (k, times[times.len() / 2])
        })
        .collect()
}
