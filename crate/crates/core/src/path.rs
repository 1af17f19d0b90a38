//! Shortest-path recovery from a finished cost array.
//!
//! The engine keeps costs only. A path is rebuilt afterwards by walking
//! backwards from the destination over "tight" edges, those where
//! `cost[u] + w == cost[v]`, with the visited vertices held on a LIFO stack.

use thiserror::Error;

use crate::cost::{saturating_add, Cost, INF};
use crate::graph::{CsrGraph, GraphError, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StackError {
    #[error("stack overflow: capacity {capacity} reached")]
    Overflow { capacity: usize },
    #[error("stack underflow: pop from an empty stack")]
    Underflow,
}

/// Bounded LIFO stack of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStack {
    items: Vec<VertexId>,
    capacity: usize,
}

impl VertexStack {
    pub fn with_capacity(capacity: usize) -> Self {
        VertexStack { items: Vec::with_capacity(capacity), capacity }
    }

    pub fn push(&mut self, v: VertexId) -> Result<(), StackError> {
        if self.items.len() == self.capacity {
            return Err(StackError::Overflow { capacity: self.capacity });
        }
        self.items.push(v);
        Ok(())
    }

    pub fn pop(&mut self) -> Result<VertexId, StackError> {
        self.items.pop().ok_or(StackError::Underflow)
    }

    pub fn top(&self) -> Option<VertexId> {
        self.items.last().copied()
    }

    pub fn depth(&self) -> usize {
        self.items.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.items.len() == self.capacity
    }
}

/// Incoming edges of every vertex as `(predecessor, weight)` pairs, ordered
/// by forward edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseIndex {
    offsets: Vec<usize>,
    entries: Vec<(VertexId, Cost)>,
}

impl ReverseIndex {
    pub fn build(g: &CsrGraph) -> Self {
        let n = g.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &d in g.edge_array() {
            offsets[d as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut entries = vec![(0, 0); g.edge_count()];
        for u in 0..n as VertexId {
            for (d, w) in g.out_edges(u) {
                let slot = &mut cursor[d as usize];
                entries[*slot] = (u, w);
                *slot += 1;
            }
        }
        ReverseIndex { offsets, entries }
    }

    pub fn predecessors(&self, v: VertexId) -> &[(VertexId, Cost)] {
        let v = v as usize;
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn pair_count(&self) -> usize {
        self.entries.len()
    }
}

/// Builds the predecessor lists of `g` (uncached; see
/// [`CsrGraph::reverse_index`] for the cached copy).
pub fn build_reverse_index(g: &CsrGraph) -> ReverseIndex {
    ReverseIndex::build(g)
}

/// Vertex sequence from source to destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Error)]
pub enum PathError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cost array has length {actual}, graph has {expected} vertices")]
    CostLength { expected: usize, actual: usize },
    #[error("vertex {dest} is unreachable from {origin}")]
    Unreachable { origin: VertexId, dest: VertexId },
    #[error("cost array is inconsistent with the graph at vertex {vertex}")]
    InconsistentCost { vertex: VertexId },
    #[error("no edge from {from} to {to}")]
    BrokenPath { from: VertexId, to: VertexId },
    #[error("empty path")]
    EmptyPath,
    #[error(transparent)]
    Stack(#[from] StackError),
}

/// Recovers one shortest path `source -> dest` from `cost`, which must be the
/// result of a search from `source` on `g`.
///
/// At each vertex the walk prefers predecessors of strictly smaller cost,
/// then the smallest vertex id. Vertices are never revisited, so zero-weight
/// cycles can not trap the walk; a dead end backtracks by popping the stack.
pub fn recover_path(
    g: &CsrGraph,
    cost: &[Cost],
    source: VertexId,
    dest: VertexId,
) -> Result<Path, PathError> {
    let n = g.vertex_count();
    g.check_vertex(source as u64)?;
    g.check_vertex(dest as u64)?;
    if cost.len() != n {
        return Err(PathError::CostLength { expected: n, actual: cost.len() });
    }
    if cost[dest as usize] == INF {
        return Err(PathError::Unreachable { origin: source, dest });
    }
    if cost[source as usize] != 0 {
        return Err(PathError::InconsistentCost { vertex: source });
    }

    let reverse = g.reverse_index();
    let mut visited = vec![false; n];
    let mut stack = VertexStack::with_capacity(n);
    let mut first_dead_end = None;
    stack.push(dest)?;
    visited[dest as usize] = true;

    while let Some(top) = stack.top() {
        if top == source {
            break;
        }
        let target = cost[top as usize];
        let next = reverse
            .predecessors(top)
            .iter()
            .filter(|&&(u, w)| {
                !visited[u as usize] && cost[u as usize] != INF && saturating_add(cost[u as usize], w) == target
            })
            .map(|&(u, _)| (cost[u as usize] == target, u))
            .min();
        match next {
            Some((_, u)) => {
                visited[u as usize] = true;
                stack.push(u)?;
            }
            None => {
                first_dead_end.get_or_insert(top);
                stack.pop()?;
            }
        }
    }
    if stack.is_empty() {
        return Err(PathError::InconsistentCost { vertex: first_dead_end.unwrap_or(dest) });
    }

    let mut vertices = Vec::with_capacity(stack.depth());
    while let Ok(v) = stack.pop() {
        vertices.push(v);
    }
    Ok(Path { vertices })
}

/// Saturating sum of edge weights along `p`, taking the lightest of any
/// parallel edges.
pub fn path_cost(g: &CsrGraph, p: &Path) -> Result<Cost, PathError> {
    let (&first, _) = p.vertices.split_first().ok_or(PathError::EmptyPath)?;
    g.check_vertex(first as u64)?;
    let mut total = 0;
    for pair in p.vertices.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        g.check_vertex(to as u64)?;
        let w = g
            .out_edges(from)
            .filter(|&(d, _)| d == to)
            .map(|(_, w)| w)
            .min()
            .ok_or(PathError::BrokenPath { from, to })?;
        total = saturating_add(total, w);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_sssp;

    fn triangle() -> CsrGraph {
        CsrGraph::from_edges(3, &[(0, 1, 1), (0, 2, 4), (1, 2, 2)]).unwrap()
    }

    #[test]
    fn stack_examples() {
        let mut s = VertexStack::with_capacity(2);
        s.push(3).unwrap();
        assert_eq!((s.depth(), s.top()), (1, Some(3)));
        assert_eq!(s.pop(), Ok(3));
        assert!(s.is_empty());
        assert_eq!(s.pop(), Err(StackError::Underflow));

        s.push(1).unwrap();
        s.push(2).unwrap();
        assert_eq!((s.depth(), s.top()), (2, Some(2)));
        assert_eq!(s.push(9), Err(StackError::Overflow { capacity: 2 }));
        assert_eq!(s.pop(), Ok(2));
        assert_eq!(s.top(), Some(1));
    }

    #[test]
    fn stack_laws_exhaustive() {
        // Every push/pop word of length <= 8 over values {0,1,2}, capacity 4,
        // against a Vec model.
        const CAP: usize = 4;
        for len in 0..=8u32 {
            for word in 0..4u32.pow(len) {
                let mut s = VertexStack::with_capacity(CAP);
                let mut model: Vec<VertexId> = Vec::new();
                let mut w = word;
                for _ in 0..len {
                    let op = w % 4;
                    w /= 4;
                    if op == 3 {
                        let before = s.clone();
                        match s.pop() {
                            Ok(v) => {
                                assert_eq!(Some(v), model.pop());
                                let mut restored = s.clone();
                                restored.push(v).unwrap();
                                assert_eq!(restored, before);
                            }
                            Err(e) => {
                                assert_eq!(e, StackError::Underflow);
                                assert!(model.is_empty());
                                assert_eq!(s, before);
                            }
                        }
                    } else {
                        let before = s.clone();
                        match s.push(op) {
                            Ok(()) => {
                                model.push(op);
                                assert_eq!(s.depth(), before.depth() + 1);
                                assert_eq!(s.top(), Some(op));
                                let mut undo = s.clone();
                                assert_eq!(undo.pop(), Ok(op));
                                assert_eq!(undo, before);
                            }
                            Err(e) => {
                                assert_eq!(e, StackError::Overflow { capacity: CAP });
                                assert_eq!(model.len(), CAP);
                                assert_eq!(s, before);
                            }
                        }
                    }
                    assert!(s.depth() <= s.capacity());
                    assert_eq!(s.depth(), model.len());
                    assert_eq!(s.top(), model.last().copied());
                }
            }
        }
    }

    #[test]
    fn reverse_index_examples() {
        let g = CsrGraph::from_edges(2, &[(0, 1, 5)]).unwrap();
        let r = build_reverse_index(&g);
        assert_eq!(r.predecessors(1), &[(0, 5)]);
        assert!(r.predecessors(0).is_empty());

        let r = build_reverse_index(&triangle());
        assert_eq!(r.predecessors(2), &[(0, 4), (1, 2)]);
        assert_eq!(r.pair_count(), 3);

        let g = CsrGraph::from_edges(4, &[]).unwrap();
        let r = build_reverse_index(&g);
        assert!((0..4).all(|v| r.predecessors(v).is_empty()));
    }

    #[test]
    fn recover_examples() {
        let g = triangle();
        let cost = run_sssp(&g, 0).unwrap();
        assert_eq!(cost, vec![0, 1, 3]);
        assert_eq!(recover_path(&g, &cost, 0, 2).unwrap().vertices, vec![0, 1, 2]);
        assert_eq!(recover_path(&g, &cost, 0, 0).unwrap().vertices, vec![0]);

        let apart = CsrGraph::from_edges(2, &[]).unwrap();
        let cost = run_sssp(&apart, 0).unwrap();
        assert!(matches!(
            recover_path(&apart, &cost, 0, 1),
            Err(PathError::Unreachable { origin: 0, dest: 1 })
        ));
    }

    #[test]
    fn tie_break_prefers_smallest_id() {
        // 0->1->3 and 0->2->3 both cost 2
        let g = CsrGraph::from_edges(4, &[(0, 2, 1), (0, 1, 1), (2, 3, 1), (1, 3, 1)]).unwrap();
        let cost = run_sssp(&g, 0).unwrap();
        assert_eq!(recover_path(&g, &cost, 0, 3).unwrap().vertices, vec![0, 1, 3]);
    }

    #[test]
    fn zero_weight_cycle_backtracks() {
        // 1 and 2 form a zero-weight cycle; 1 is reached from 0 only through 2.
        // From 3 the walk first tries 1 (smaller id, equal cost), whose only
        // unvisited tight predecessor is 2, which leads to 0.
        let g = CsrGraph::from_edges(
            4,
            &[(0, 2, 5), (2, 1, 0), (1, 2, 0), (1, 3, 0), (2, 3, 0)],
        )
        .unwrap();
        let cost = run_sssp(&g, 0).unwrap();
        assert_eq!(cost, vec![0, 5, 5, 5]);
        let p = recover_path(&g, &cost, 0, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 2, 1, 3]);
        assert_eq!(path_cost(&g, &p).unwrap(), 5);

        // Dead end: 3's tight predecessors are 1 and 2; 1 only comes from 3,
        // so the walk pops 1 and continues through 2.
        let g = CsrGraph::from_edges(4, &[(0, 2, 5), (2, 3, 0), (3, 1, 0), (1, 3, 0)]).unwrap();
        let cost = run_sssp(&g, 0).unwrap();
        assert_eq!(cost, vec![0, 5, 5, 5]);
        assert_eq!(recover_path(&g, &cost, 0, 3).unwrap().vertices, vec![0, 2, 3]);
    }

    #[test]
    fn inconsistent_cost_array() {
        let g = triangle();
        assert!(matches!(
            recover_path(&g, &[0, 1, 2], 0, 2),
            Err(PathError::InconsistentCost { vertex: 2 })
        ));
        assert!(matches!(
            recover_path(&g, &[5, 1, 3], 0, 2),
            Err(PathError::InconsistentCost { vertex: 0 })
        ));
        assert!(matches!(
            recover_path(&g, &[0, 1], 0, 1),
            Err(PathError::CostLength { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn path_cost_examples() {
        let g = triangle();
        assert_eq!(path_cost(&g, &Path { vertices: vec![0, 1, 2] }).unwrap(), 3);
        assert_eq!(path_cost(&g, &Path { vertices: vec![1] }).unwrap(), 0);
        let no_direct = CsrGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
        assert!(matches!(
            path_cost(&no_direct, &Path { vertices: vec![0, 2] }),
            Err(PathError::BrokenPath { from: 0, to: 2 })
        ));
        assert!(matches!(path_cost(&g, &Path { vertices: vec![] }), Err(PathError::EmptyPath)));
        let parallel = CsrGraph::from_edges(2, &[(0, 1, 9), (0, 1, 4)]).unwrap();
        assert_eq!(path_cost(&parallel, &Path { vertices: vec![0, 1] }).unwrap(), 4);
    }
}
