//! Forward-star (CSR) graph storage and its validity rules.

use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use thiserror::Error;

use crate::cost::{Cost, INF};
use crate::path::ReverseIndex;

/// Vertex index. 32 bits, so a graph holds at most `u32::MAX + 1` vertices.
pub type VertexId = u32;

/// Index into the edge and weight arrays.
pub type EdgeIndex = usize;

/// Largest vertex count addressable by [`VertexId`].
pub const MAX_VERTEX_COUNT: usize = VertexId::MAX as usize + 1;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: u64, vertex_count: usize },
}

/// One broken validity condition, with the offending index and value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexArrayLength { declared: usize, actual: usize },
    EdgeArrayLength { declared: usize, actual: usize },
    WeightArrayLength { declared: usize, actual: usize },
    TooManyVertices { vertex_count: usize },
    FirstEdgeNotZero { value: EdgeIndex },
    NotNondecreasing { index: usize, value: EdgeIndex, next: EdgeIndex },
    EdgeIndexOutOfRange { index: usize, value: EdgeIndex, edge_count: usize },
    DestinationOutOfRange { index: usize, value: VertexId, vertex_count: usize },
    WeightAboveLimit { index: usize, value: Cost, limit: Cost },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::VertexArrayLength { declared, actual } => write!(
                f,
                "vertex_array has length {actual}, expected vertex_count {declared}"
            ),
            Violation::EdgeArrayLength { declared, actual } => write!(
                f,
                "edge_array has length {actual}, expected edge_count {declared}"
            ),
            Violation::WeightArrayLength { declared, actual } => write!(
                f,
                "weight_array has length {actual}, expected edge_count {declared}"
            ),
            Violation::TooManyVertices { vertex_count } => write!(
                f,
                "vertex_count {vertex_count} exceeds the addressable maximum {MAX_VERTEX_COUNT}"
            ),
            Violation::FirstEdgeNotZero { value } => {
                write!(f, "vertex_array must start at edge 0, found {value} at index 0")
            }
            Violation::NotNondecreasing { index, value, next } => write!(
                f,
                "vertex_array not nondecreasing at index {index} ({value} > {next})"
            ),
            Violation::EdgeIndexOutOfRange { index, value, edge_count } => write!(
                f,
                "vertex_array entry out of range at index {index}: {value} > edge_count {edge_count}"
            ),
            Violation::DestinationOutOfRange { index, value, vertex_count } => write!(
                f,
                "edge destination out of range at index {index}: {value} >= vertex_count {vertex_count}"
            ),
            Violation::WeightAboveLimit { index, value, limit } => write!(
                f,
                "weight out of range at index {index}: {value} > limit {limit}"
            ),
        }
    }
}

/// Outcome of [`validate_graph`]: empty means the candidate is a valid graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Bounds applied on top of the structural rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationLimits {
    /// Largest accepted edge weight. Never above `INF - 1`.
    pub max_weight: Cost,
}

impl Default for ValidationLimits {
    fn default() -> Self {
        ValidationLimits { max_weight: INF - 1 }
    }
}

/// Unchecked candidate arrays, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub vertex_array: Vec<EdgeIndex>,
    pub edge_array: Vec<VertexId>,
    pub weight_array: Vec<Cost>,
}

impl GraphParts {
    /// Parts whose declared counts are taken from the array lengths.
    pub fn from_arrays(
        vertex_array: Vec<EdgeIndex>,
        edge_array: Vec<VertexId>,
        weight_array: Vec<Cost>,
    ) -> Self {
        GraphParts {
            vertex_count: vertex_array.len(),
            edge_count: edge_array.len(),
            vertex_array,
            edge_array,
            weight_array,
        }
    }
}

/// Checks every validity rule with the default limits.
pub fn validate_graph(parts: &GraphParts) -> ValidationReport {
    validate_with_limits(parts, ValidationLimits::default())
}

/// Checks every validity rule and lists all violations found.
pub fn validate_with_limits(parts: &GraphParts, limits: ValidationLimits) -> ValidationReport {
    let mut violations = Vec::new();
    let vertex_count = parts.vertex_count;
    let edge_count = parts.edge_count;

    if parts.vertex_array.len() != vertex_count {
        violations.push(Violation::VertexArrayLength {
            declared: vertex_count,
            actual: parts.vertex_array.len(),
        });
    }
    if parts.edge_array.len() != edge_count {
        violations.push(Violation::EdgeArrayLength {
            declared: edge_count,
            actual: parts.edge_array.len(),
        });
    }
    if parts.weight_array.len() != edge_count {
        violations.push(Violation::WeightArrayLength {
            declared: edge_count,
            actual: parts.weight_array.len(),
        });
    }
    if vertex_count > MAX_VERTEX_COUNT {
        violations.push(Violation::TooManyVertices { vertex_count });
    }

    if let Some(&first) = parts.vertex_array.first() {
        if first != 0 {
            violations.push(Violation::FirstEdgeNotZero { value: first });
        }
    }
    for (index, pair) in parts.vertex_array.windows(2).enumerate() {
        if pair[0] > pair[1] {
            violations.push(Violation::NotNondecreasing {
                index,
                value: pair[0],
                next: pair[1],
            });
        }
    }
    for (index, &value) in parts.vertex_array.iter().enumerate() {
        if value > edge_count {
            violations.push(Violation::EdgeIndexOutOfRange { index, value, edge_count });
        }
    }
    for (index, &value) in parts.edge_array.iter().enumerate() {
        if value as usize >= vertex_count {
            violations.push(Violation::DestinationOutOfRange { index, value, vertex_count });
        }
    }
    let limit = limits.max_weight.min(INF - 1);
    for (index, &value) in parts.weight_array.iter().enumerate() {
        if value > limit {
            violations.push(Violation::WeightAboveLimit { index, value, limit });
        }
    }

    ValidationReport { violations }
}

/// Immutable forward-star graph.
///
/// Vertex `v` owns the edges `vertex_array[v]..vertex_array[v + 1]` (the last
/// vertex runs to `edge_count`). Edge `i` leads to `edge_array[i]` with weight
/// `weight_array[i]`. Parallel edges and self-loops are allowed.
pub struct CsrGraph {
    vertex_array: Vec<EdgeIndex>,
    edge_array: Vec<VertexId>,
    weight_array: Vec<Cost>,
    reverse: OnceLock<ReverseIndex>,
}

impl CsrGraph {
    pub fn new(
        vertex_array: Vec<EdgeIndex>,
        edge_array: Vec<VertexId>,
        weight_array: Vec<Cost>,
    ) -> Result<Self, GraphError> {
        Self::from_parts(GraphParts::from_arrays(vertex_array, edge_array, weight_array))
    }

    pub fn from_parts(parts: GraphParts) -> Result<Self, GraphError> {
        Self::from_parts_with_limits(parts, ValidationLimits::default())
    }

    pub fn from_parts_with_limits(
        parts: GraphParts,
        limits: ValidationLimits,
    ) -> Result<Self, GraphError> {
        let report = validate_with_limits(&parts, limits);
        if !report.is_ok() {
            return Err(GraphError::Invalid(report));
        }
        Ok(CsrGraph {
            vertex_array: parts.vertex_array,
            edge_array: parts.edge_array,
            weight_array: parts.weight_array,
            reverse: OnceLock::new(),
        })
    }

    /// Builds a graph from an edge list `(from, to, weight)`. Edges keep their
    /// relative order within each source vertex.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(VertexId, VertexId, Cost)],
    ) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; vertex_count];
        for &(from, _, _) in edges {
            match degree.get_mut(from as usize) {
                Some(d) => *d += 1,
                None => {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: from as u64,
                        vertex_count,
                    })
                }
            }
        }
        let mut vertex_array = Vec::with_capacity(vertex_count);
        let mut next = 0;
        for d in &degree {
            vertex_array.push(next);
            next += d;
        }
        let mut cursor = vertex_array.clone();
        let mut edge_array = vec![0; edges.len()];
        let mut weight_array = vec![0; edges.len()];
        for &(from, to, w) in edges {
            let slot = &mut cursor[from as usize];
            edge_array[*slot] = to;
            weight_array[*slot] = w;
            *slot += 1;
        }
        Self::new(vertex_array, edge_array, weight_array)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_array.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_array.len()
    }

    pub fn vertex_array(&self) -> &[EdgeIndex] {
        &self.vertex_array
    }

    pub fn edge_array(&self) -> &[VertexId] {
        &self.edge_array
    }

    pub fn weight_array(&self) -> &[Cost] {
        &self.weight_array
    }

    pub fn check_vertex(&self, v: u64) -> Result<VertexId, GraphError> {
        if v < self.vertex_count() as u64 {
            Ok(v as VertexId)
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count() })
        }
    }

    /// Half-open range of edge indices leaving `v`.
    pub fn out_edge_range(&self, v: VertexId) -> Result<Range<EdgeIndex>, GraphError> {
        self.check_vertex(v as u64)?;
        Ok(self.edge_range(v as usize))
    }

    /// Unchecked variant of [`out_edge_range`](Self::out_edge_range); panics
    /// on an out-of-range vertex.
    #[inline]
    pub(crate) fn edge_range(&self, v: usize) -> Range<EdgeIndex> {
        let begin = self.vertex_array[v];
        let end = match self.vertex_array.get(v + 1) {
            Some(&next) => next,
            None => self.edge_array.len(),
        };
        begin..end
    }

    /// `(destination, weight)` pairs leaving `v`.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Cost)> + '_ {
        let range = self.edge_range(v as usize);
        self.edge_array[range.clone()]
            .iter()
            .copied()
            .zip(self.weight_array[range].iter().copied())
    }

    /// Predecessor index, built on first use and kept for the graph's lifetime.
    pub fn reverse_index(&self) -> &ReverseIndex {
        self.reverse.get_or_init(|| ReverseIndex::build(self))
    }

    pub fn to_parts(&self) -> GraphParts {
        GraphParts::from_arrays(
            self.vertex_array.clone(),
            self.edge_array.clone(),
            self.weight_array.clone(),
        )
    }

    pub fn into_parts(self) -> GraphParts {
        GraphParts::from_arrays(self.vertex_array, self.edge_array, self.weight_array)
    }
}

impl Clone for CsrGraph {
    fn clone(&self) -> Self {
        CsrGraph {
            vertex_array: self.vertex_array.clone(),
            edge_array: self.edge_array.clone(),
            weight_array: self.weight_array.clone(),
            reverse: OnceLock::new(),
        }
    }
}

impl PartialEq for CsrGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_array == other.vertex_array
            && self.edge_array == other.edge_array
            && self.weight_array == other.weight_array
    }
}

impl Eq for CsrGraph {}

impl fmt::Debug for CsrGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CsrGraph")
            .field("vertex_array", &self.vertex_array)
            .field("edge_array", &self.edge_array)
            .field("weight_array", &self.weight_array)
            .finish()
    }
}
