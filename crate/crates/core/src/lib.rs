//! Frontier-relaxation shortest paths over compressed sparse row graphs.
//!
//! The engine follows the two-pass GPU formulation: a relaxation pass
//! proposes tentative costs for the out-neighbours of every masked vertex,
//! and a commit pass folds improvements into the cost array and re-masks the
//! vertices that improved. The loop stops when the mask is empty.
//!
//! Every result can be checked against the classical heap Dijkstra in
//! [`oracle`], and explicit paths can be recovered from a finished cost array
//! with [`path`].

pub mod apsp;
pub mod bench;
pub mod cost;
pub mod engine;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod path;

pub use apsp::{run_apsp, ApspConfig, ApspError, ApspResult};
pub use cost::{saturating_add, Cost, INF};
pub use engine::{
    init_sssp, kernel1_pass, kernel2_pass, mask_nonempty, relax_vertex, run_sssp, Engine,
    EngineConfig, EngineError, RunStats, Schedule, SsspRun, SsspState,
};
pub use gen::{generate_graph, GenError, GenParams};
pub use graph::{CsrGraph, GraphError, GraphParts, ValidationReport, Violation, VertexId};
pub use path::{path_cost, recover_path, Path, PathError, ReverseIndex, StackError, VertexStack};

/// Vertex capacity of the reference benchmark configuration.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Out-degree of the reference benchmark configuration.
pub const DEFAULT_MAX_EDGES_PER_VERTEX: usize = 10;
