//! Graph and cost-matrix file formats.
//!
//! Text graph format (version 1):
//!
//! ```text
//! csr 1
//! <vertex_count> <edge_count>
//! <vertex_array, space separated>
//! <destination> <weight>        (edge_count lines)
//! ```
//!
//! Binary graph format, all little-endian: magic `CSRB`, `u32` version (1),
//! `u64` vertex count, `u64` edge count, the vertex array as `u64`s, the edge
//! array as `u32`s, the weight array as `u64`s.
//!
//! Cost matrices are text, one row per source, space separated, with
//! unreachable entries written as `inf`.

use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};

use thiserror::Error;

use crate::cost::{Cost, INF};
use crate::graph::{validate_graph, CsrGraph, GraphParts, Violation};

pub const TEXT_VERSION: u32 = 1;
pub const BINARY_MAGIC: [u8; 4] = *b"CSRB";
pub const BINARY_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: unsupported format version {found:?}")]
    UnsupportedVersion { line: usize, found: String },
    #[error("binary graph: {0}")]
    Binary(String),
}

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse { line, reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Binary,
}

impl GraphFormat {
    /// Guesses the format from the first bytes of a file.
    pub fn detect(prefix: &[u8]) -> GraphFormat {
        if prefix.starts_with(&BINARY_MAGIC) {
            GraphFormat::Binary
        } else {
            GraphFormat::Text
        }
    }
}

pub fn write_graph<W: Write>(g: &CsrGraph, format: GraphFormat, out: W) -> io::Result<()> {
    match format {
        GraphFormat::Text => write_graph_text(g, out),
        GraphFormat::Binary => write_graph_binary(g, out),
    }
}

/// Reads a graph, detecting the format from its first bytes.
pub fn read_graph<R: Read>(input: R) -> Result<CsrGraph, FormatError> {
    let mut input = BufReader::new(input);
    let format = GraphFormat::detect(input.fill_buf()?);
    match format {
        GraphFormat::Text => read_graph_text(input),
        GraphFormat::Binary => read_graph_binary(input),
    }
}

pub fn write_graph_text<W: Write>(g: &CsrGraph, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "csr {TEXT_VERSION}")?;
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    write_joined(&mut out, g.vertex_array().iter())?;
    for (d, w) in g.edge_array().iter().zip(g.weight_array()) {
        writeln!(out, "{d} {w}")?;
    }
    out.flush()
}

fn write_joined<W: Write, T: std::fmt::Display>(
    out: &mut W,
    items: impl Iterator<Item = T>,
) -> io::Result<()> {
    for (i, item) in items.enumerate() {
        if i > 0 {
            out.write_all(b" ")?;
        }
        write!(out, "{item}")?;
    }
    out.write_all(b"\n")
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, FormatError> {
    token.parse().map_err(|_| parse_err(line, format!("invalid {what} {token:?}")))
}

/// Line of the text file that holds the data a violation points at.
fn violation_line(v: &Violation) -> usize {
    match *v {
        Violation::VertexArrayLength { .. }
        | Violation::TooManyVertices { .. }
        | Violation::FirstEdgeNotZero { .. }
        | Violation::NotNondecreasing { .. }
        | Violation::EdgeIndexOutOfRange { .. } => 3,
        Violation::EdgeArrayLength { .. } | Violation::WeightArrayLength { .. } => 2,
        Violation::DestinationOutOfRange { index, .. } | Violation::WeightAboveLimit { index, .. } => {
            4 + index
        }
    }
}

pub fn read_graph_text<R: BufRead>(input: R) -> Result<CsrGraph, FormatError> {
    let mut lines = input.lines();
    let mut line_no = 0;
    let mut next_line = |what: &str| -> Result<(usize, String), FormatError> {
        line_no += 1;
        match lines.next() {
            Some(line) => Ok((line_no, line?)),
            None => Err(parse_err(line_no, format!("unexpected end of file, expected {what}"))),
        }
    };

    let (n, header) = next_line("header")?;
    match header.split_ascii_whitespace().collect::<Vec<_>>().as_slice() {
        ["csr", version] if *version == TEXT_VERSION.to_string() => {}
        ["csr", version] => {
            return Err(FormatError::UnsupportedVersion { line: n, found: version.to_string() })
        }
        _ => return Err(parse_err(n, format!("malformed header {header:?}, expected \"csr {TEXT_VERSION}\""))),
    }

    let (n, counts) = next_line("vertex and edge counts")?;
    let (vertex_count, edge_count) = match counts.split_ascii_whitespace().collect::<Vec<_>>().as_slice() {
        [v, e] => (parse_num::<usize>(v, n, "vertex count")?, parse_num::<usize>(e, n, "edge count")?),
        _ => return Err(parse_err(n, "expected \"<vertex_count> <edge_count>\"")),
    };

    let (n, vertex_line) = next_line("vertex array")?;
    let vertex_array = vertex_line
        .split_ascii_whitespace()
        .map(|t| parse_num::<usize>(t, n, "edge index"))
        .collect::<Result<Vec<_>, _>>()?;
    if vertex_array.len() != vertex_count {
        return Err(parse_err(
            n,
            format!("vertex array has {} entries, header declares {vertex_count}", vertex_array.len()),
        ));
    }

    // cap the preallocation; the count is untrusted
    let mut edge_array = Vec::with_capacity(edge_count.min(1 << 24));
    let mut weight_array = Vec::with_capacity(edge_count.min(1 << 24));
    for _ in 0..edge_count {
        let (n, edge) = next_line("edge line")?;
        match edge.split_ascii_whitespace().collect::<Vec<_>>().as_slice() {
            [d, w] => {
                edge_array.push(parse_num(d, n, "destination")?);
                weight_array.push(parse_num(w, n, "weight")?);
            }
            _ => return Err(parse_err(n, "expected \"<destination> <weight>\"")),
        }
    }
    loop {
        match lines.next() {
            None => break,
            Some(line) => {
                line_no += 1;
                if !line?.trim().is_empty() {
                    return Err(parse_err(
                        line_no,
                        format!("more edge lines than the declared {edge_count}"),
                    ));
                }
            }
        }
    }

    let parts = GraphParts { vertex_count, edge_count, vertex_array, edge_array, weight_array };
    let report = validate_graph(&parts);
    if let Some(first) = report.violations.first() {
        return Err(parse_err(violation_line(first), report.to_string()));
    }
    Ok(CsrGraph::from_parts(parts).expect("validated above"))
}

pub fn write_graph_binary<W: Write>(g: &CsrGraph, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(&BINARY_MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&(g.vertex_count() as u64).to_le_bytes())?;
    out.write_all(&(g.edge_count() as u64).to_le_bytes())?;
    for &v in g.vertex_array() {
        out.write_all(&(v as u64).to_le_bytes())?;
    }
    for &d in g.edge_array() {
        out.write_all(&d.to_le_bytes())?;
    }
    for &w in g.weight_array() {
        out.write_all(&w.to_le_bytes())?;
    }
    out.flush()
}

fn read_block<R: Read>(input: &mut R, count: usize, width: usize, what: &str) -> Result<Vec<u8>, FormatError> {
    let len = count
        .checked_mul(width)
        .ok_or_else(|| FormatError::Binary(format!("{what} length overflows")))?;
    let mut buf = Vec::new();
    input.take(len as u64).read_to_end(&mut buf)?;
    if buf.len() != len {
        return Err(FormatError::Binary(format!(
            "truncated {what}: expected {len} bytes, found {}",
            buf.len()
        )));
    }
    Ok(buf)
}

fn u64_at(bytes: &[u8]) -> u64 {
    u64::from_le_bytes(bytes.try_into().expect("8-byte chunk"))
}

pub fn read_graph_binary<R: Read>(mut input: R) -> Result<CsrGraph, FormatError> {
    let header = read_block(&mut input, 1, 24, "header")?;
    if header[..4] != BINARY_MAGIC {
        return Err(FormatError::Binary("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    if version != BINARY_VERSION {
        return Err(FormatError::Binary(format!("unsupported version {version}")));
    }
    let to_usize = |v: u64, what: &str| {
        usize::try_from(v).map_err(|_| FormatError::Binary(format!("{what} {v} too large")))
    };
    let vertex_count = to_usize(u64_at(&header[8..16]), "vertex count")?;
    let edge_count = to_usize(u64_at(&header[16..24]), "edge count")?;

    let vertex_array = read_block(&mut input, vertex_count, 8, "vertex array")?
        .chunks_exact(8)
        .map(|c| to_usize(u64_at(c), "edge index"))
        .collect::<Result<Vec<_>, _>>()?;
    let edge_array = read_block(&mut input, edge_count, 4, "edge array")?
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    let weight_array = read_block(&mut input, edge_count, 8, "weight array")?
        .chunks_exact(8)
        .map(u64_at)
        .collect();
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(FormatError::Binary("trailing bytes after weight array".into()));
    }

    let parts = GraphParts { vertex_count, edge_count, vertex_array, edge_array, weight_array };
    CsrGraph::from_parts(parts).map_err(|e| FormatError::Binary(e.to_string()))
}

/// Writes cost rows, one per line, `inf` for unreachable.
pub fn write_costs<'a, W, I>(rows: I, out: W) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a [Cost]>,
{
    let mut out = BufWriter::new(out);
    for row in rows {
        write_joined(&mut out, row.iter().map(|&c| CostText(c)))?;
    }
    out.flush()
}

struct CostText(Cost);

impl std::fmt::Display for CostText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == INF {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Reads cost rows. All rows must have the same width, and `width` when
/// given.
pub fn read_costs<R: BufRead>(input: R, width: Option<usize>) -> Result<Vec<Vec<Cost>>, FormatError> {
    let mut rows: Vec<Vec<Cost>> = Vec::new();
    let mut expected = width;
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let row = line?
            .split_ascii_whitespace()
            .map(|t| match t {
                "inf" => Ok(INF),
                _ => match parse_num::<Cost>(t, line_no, "cost")? {
                    INF => Err(parse_err(line_no, "the maximum cost must be written as \"inf\"")),
                    c => Ok(c),
                },
            })
            .collect::<Result<Vec<_>, _>>()?;
        match expected {
            Some(w) if w != row.len() => {
                return Err(parse_err(line_no, format!("row has {} entries, expected {w}", row.len())))
            }
            None => expected = Some(row.len()),
            _ => {}
        }
        rows.push(row);
    }
    Ok(rows)
}
