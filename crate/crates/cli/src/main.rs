use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frontier_sssp::apsp::{run_apsp_with, ApspConfig, ApspError};
use frontier_sssp::bench::{bench, linear_fit, median_times, write_report, BenchConfig};
use frontier_sssp::cost::{Cost, INF};
use frontier_sssp::engine::{Engine, EngineConfig, EngineError};
use frontier_sssp::gen::{generate_graph, GenParams, DEFAULT_MAX_WEIGHT};
use frontier_sssp::graph::{CsrGraph, VertexId};
use frontier_sssp::io::{read_graph, write_costs, write_graph, FormatError, GraphFormat};
use frontier_sssp::oracle::{dijkstra_reference, exhaustive_shortest_paths, EXHAUSTIVE_MAX_VERTICES};
use frontier_sssp::path::{recover_path, PathError};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    NoPath(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::NoPath(_) => 5,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Graph(g) => CliError::Usage(g.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ApspError> for CliError {
    fn from(e: ApspError) -> Self {
        match e {
            ApspError::Engine(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "frontier-sssp", version, about = "Frontier-relaxation shortest paths on CSR graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph
    Gen {
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutArgs,
    },
    /// Costs from one source
    Sssp {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        source: u64,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        output: OutArgs,
    },
    /// Cost matrix, one row per source
    Apsp {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Refuse result matrices larger than this
        #[arg(long, default_value_t = 2048)]
        memory_budget_mb: usize,
        #[command(flatten)]
        output: OutArgs,
    },
    /// One shortest path between two vertices
    Path {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        source: u64,
        #[arg(long)]
        dest: u64,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        output: OutArgs,
    },
    /// Compare the engine against the Dijkstra oracle
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Time multi-source runs over a list of source counts
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 5, 10, 20])]
        source_counts: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        output: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Bin,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 5)]
    degree: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT)]
    max_weight: Cost,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file (text or binary, detected); otherwise a random graph is generated
    #[arg(long, conflicts_with = "vertices")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    random: RandomArgs,
}

#[derive(Args)]
struct SourceArgs {
    /// Explicit source list
    #[arg(long, value_delimiter = ',', conflicts_with = "source_count")]
    sources: Option<Vec<u64>>,
    /// Use sources 0..N
    #[arg(long, default_value_t = 1)]
    source_count: usize,
}

#[derive(Args)]
struct EngineArgs {
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RandomArgs {
    fn generate(&self) -> Result<CsrGraph, CliError> {
        let vertex_count = self
            .vertices
            .ok_or_else(|| CliError::Usage("either --graph or --vertices is required".into()))?;
        let params = GenParams {
            vertex_count,
            edges_per_vertex: self.degree,
            max_weight: self.max_weight,
            seed: self.seed,
        };
        generate_graph(&params).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl GraphArgs {
    fn load(&self) -> Result<CsrGraph, CliError> {
        match &self.graph {
            Some(path) => {
                let file = File::open(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                read_graph(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            }
            None => self.random.generate(),
        }
    }
}

impl SourceArgs {
    fn resolve(&self, g: &CsrGraph) -> Result<Vec<VertexId>, CliError> {
        let raw: Vec<u64> = match &self.sources {
            Some(list) => list.clone(),
            None => (0..self.source_count as u64).collect(),
        };
        if raw.is_empty() {
            return Err(CliError::Usage("no source vertices given".into()));
        }
        raw.into_iter()
            .map(|s| g.check_vertex(s).map_err(|e| CliError::Usage(e.to_string())))
            .collect()
    }
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        match self.workers {
            Some(w) => EngineConfig::with_workers(w),
            None => EngineConfig::default(),
        }
    }
}

impl OutArgs {
    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => Box::new(
                File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
            ),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { random, format, output } => {
            let g = random.generate()?;
            let format = match format {
                Format::Text => GraphFormat::Text,
                Format::Bin => GraphFormat::Binary,
            };
            write_graph(&g, format, output.open()?)?;
        }
        Command::Sssp { graph, source, engine, output } => {
            let g = graph.load()?;
            let source = g.check_vertex(source).map_err(|e| CliError::Usage(e.to_string()))?;
            let run = Engine::new(engine.config())?.run_sssp(&g, source)?;
            write_costs([run.cost.as_slice()], output.open()?)?;
            eprintln!(
                "iterations {} relaxations {} wall_ms {:.3}",
                run.stats.iterations,
                run.stats.relaxations,
                run.stats.wall_time.as_secs_f64() * 1e3
            );
        }
        Command::Apsp { graph, sources, engine, memory_budget_mb, output } => {
            let g = graph.load()?;
            let sources = sources.resolve(&g)?;
            let config = ApspConfig {
                engine: engine.config(),
                memory_budget: memory_budget_mb.saturating_mul(1 << 20),
            };
            let result = run_apsp_with(&g, &sources, &config)?;
            write_costs(result.rows(), output.open()?)?;
        }
        Command::Path { graph, source, dest, engine, output } => {
            let g = graph.load()?;
            let source = g.check_vertex(source).map_err(|e| CliError::Usage(e.to_string()))?;
            let dest = g.check_vertex(dest).map_err(|e| CliError::Usage(e.to_string()))?;
            let cost = Engine::new(engine.config())?.run_sssp(&g, source)?.cost;
            let path = recover_path(&g, &cost, source, dest).map_err(|e| match e {
                PathError::Unreachable { .. } => CliError::NoPath(e.to_string()),
                other => CliError::Internal(other.to_string()),
            })?;
            let mut out = output.open()?;
            let vertices: Vec<String> = path.vertices.iter().map(u32::to_string).collect();
            writeln!(out, "{}", vertices.join(" "))?;
            writeln!(out, "cost {}", cost[dest as usize])?;
        }
        Command::Verify { graph, sources, engine } => {
            let g = graph.load()?;
            let sources = sources.resolve(&g)?;
            let engine = Engine::new(engine.config())?;
            let mut mismatches = Vec::new();
            for &s in &sources {
                let cost = engine.run_sssp(&g, s)?.cost;
                let oracle = dijkstra_reference(&g, s).map_err(|e| CliError::Internal(e.to_string()))?;
                if let Some(v) = (0..cost.len()).find(|&v| cost[v] != oracle[v]) {
                    mismatches.push(format!(
                        "source {s}: vertex {v}: engine {} oracle {}",
                        show(cost[v]),
                        show(oracle[v])
                    ));
                }
                if g.vertex_count() <= EXHAUSTIVE_MAX_VERTICES {
                    let truth =
                        exhaustive_shortest_paths(&g, s).map_err(|e| CliError::Internal(e.to_string()))?;
                    if truth != oracle {
                        mismatches.push(format!("source {s}: oracle disagrees with exhaustive search"));
                    }
                }
            }
            if !mismatches.is_empty() {
                return Err(CliError::Mismatch(mismatches.join("\n")));
            }
            println!(
                "ok: {} sources, {} vertices, {} edges, engine matches oracle",
                sources.len(),
                g.vertex_count(),
                g.edge_count()
            );
        }
        Command::Bench { graph, source_counts, repetitions, engine, output } => {
            let g = graph.load()?;
            if source_counts.is_empty() || source_counts.contains(&0) || repetitions == 0 {
                return Err(CliError::Usage("source counts and repetitions must be positive".into()));
            }
            let config = BenchConfig {
                source_counts,
                repetitions,
                apsp: ApspConfig { engine: engine.config(), ..Default::default() },
            };
            let records = bench(&g, &config)?;
            write_report(&records, output.open()?)?;
            let points: Vec<(f64, f64)> =
                median_times(&records).into_iter().map(|(k, ms)| (k as f64, ms)).collect();
            if let Some(fit) = linear_fit(&points) {
                eprintln!(
                    "slope {:.3} ms/source, intercept {:.3} ms, r^2 {:.4}",
                    fit.slope, fit.intercept, fit.r_squared
                );
            }
        }
    }
    Ok(())
}

fn show(c: Cost) -> String {
    if c == INF {
        "inf".into()
    } else {
        c.to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
