//! Persistence and export: JSON-lines catalogs, matrix files and DOT.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::canonical::canonical_form;
use crate::complex::{is_orientable, BoundaryMatrix};
use crate::enumerate::{Cell, CellBasis, TailOrder};
use crate::graph::{GraphJson, RibbonGraph, ValidationError};
use crate::signature::Signature;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogHeader {
    pub signature: [u32; 4],
    pub version: String,
    pub tail_order: TailOrder,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub code: Vec<u32>,
    pub graph: GraphJson,
    pub dim: u32,
    pub aut: u64,
    pub orientable: bool,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("catalog is empty or lacks a header line")]
    MissingHeader,
    #[error("line {line}: invalid graph: {source}")]
    Graph { line: usize, source: ValidationError },
    #[error("line {line}: {what} does not match the stored record")]
    Mismatch { line: usize, what: &'static str },
    #[error("header announces {expected} classes, found {found}")]
    Count { expected: usize, found: usize },
}

impl CatalogRecord {
    pub fn from_cell(cell: &Cell) -> Self {
        CatalogRecord {
            code: cell.code.code.clone(),
            graph: cell.graph.to_json(),
            dim: cell.dim,
            aut: cell.aut_order(),
            orientable: cell.orientable,
        }
    }
}

/// Writes the header line and one record per class, in basis order.
pub fn write_catalog<W: Write>(basis: &CellBasis, mut out: W) -> io::Result<()> {
    let header = CatalogHeader {
        signature: basis.signature().as_array(),
        version: VERSION.to_string(),
        tail_order: basis.tail_order(),
        classes: basis.len(),
    };
    writeln!(out, "{}", serde_json::to_string(&header)?)?;
    for cell in basis.iter() {
        writeln!(out, "{}", serde_json::to_string(&CatalogRecord::from_cell(cell))?)?;
    }
    out.flush()
}

pub fn catalog_string(basis: &CellBasis) -> String {
    let mut buf = Vec::new();
    write_catalog(basis, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Reads a catalog, re-validating and re-canonicalizing every graph.
pub fn read_catalog<R: BufRead>(input: R) -> Result<CellBasis, CatalogError> {
    let mut lines = input.lines().enumerate();
    let header: CatalogHeader = loop {
        match lines.next() {
            None => return Err(CatalogError::MissingHeader),
            Some((_, line)) if line.as_ref().is_ok_and(|l| l.trim().is_empty()) => continue,
            Some((i, line)) => break serde_json::from_str(&line?).map_err(|source| CatalogError::Json { line: i + 1, source })?,
        }
    };
    let [g, h, r, s] = header.signature;
    let signature = Signature::new_unchecked(g, h, r, s);
    let mut cells = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let rec: CatalogRecord = serde_json::from_str(&line).map_err(|source| CatalogError::Json { line: n, source })?;
        let raw = RibbonGraph::from_json(&rec.graph).map_err(|source| CatalogError::Graph { line: n, source })?;
        let form = canonical_form(&raw);
        let graph = raw.relabel(&form.relabel);
        if form.code.code != rec.code {
            return Err(CatalogError::Mismatch { line: n, what: "canonical code" });
        }
        if graph.signature() != signature {
            return Err(CatalogError::Mismatch { line: n, what: "signature" });
        }
        if graph.cell_dimension() != rec.dim {
            return Err(CatalogError::Mismatch { line: n, what: "dimension" });
        }
        if form.code.aut_order != rec.aut {
            return Err(CatalogError::Mismatch { line: n, what: "automorphism order" });
        }
        let orientable = is_orientable(&graph);
        if orientable != rec.orientable {
            return Err(CatalogError::Mismatch { line: n, what: "orientability" });
        }
        cells.push(Cell { code: form.code, graph, dim: rec.dim, orientable });
    }
    if cells.len() != header.classes {
        return Err(CatalogError::Count { expected: header.classes, found: cells.len() });
    }
    Ok(CellBasis::from_cells(signature, header.tail_order, cells))
}

/// JSON wrapper for `∂_d` naming the basis codes of rows and columns.
pub fn matrix_json(basis: &CellBasis, m: &BoundaryMatrix) -> Value {
    let codes = |d: u32| -> Vec<&Vec<u32>> {
        let cells = basis.cells(d);
        basis.generators(d).into_iter().map(|i| &cells[i].code.code).collect()
    };
    let rows = if m.dim == 0 { Vec::new() } else { codes(m.dim - 1) };
    json!({
        "dim": m.dim,
        "rows": m.rows,
        "cols": m.cols,
        "row_codes": rows,
        "col_codes": codes(m.dim),
        "entries": m.entries.iter().map(|&(r, c, v)| [r as i64, c as i64, v]).collect::<Vec<_>>(),
    })
}

/// Graphviz rendering: unmarked vertices white, marked vertices grey and
/// labeled by their mark, tails as arrowed stubs labeled by tail number.
pub fn to_dot(g: &RibbonGraph) -> String {
    let mut s = String::from("graph ribbon {\n  node [shape=circle, style=filled, fontsize=10];\n");
    for v in 0..g.vertex_count() as u32 {
        match g.mark_at(v) {
            Some(m) => writeln!(s, "  v{v} [label=\"{}\", fillcolor=\"grey70\"];", m + 1),
            None => writeln!(s, "  v{v} [label=\"\", fillcolor=\"white\", width=0.2];"),
        }
        .expect("writing to a string");
    }
    for x in 0..g.half_edges() {
        let v = g.vertex_of(x);
        if g.is_tail(x) {
            let t = g.tail_label(x);
            writeln!(s, "  t{t} [shape=none, style=\"\", label=\"{t}\"];").expect("writing to a string");
            writeln!(s, "  v{v} -- t{t} [dir=forward, arrowhead=normal];").expect("writing to a string");
        } else if x < g.pair(x) {
            let w = g.vertex_of(g.pair(x));
            writeln!(s, "  v{v} -- v{w} [taillabel=\"{x}\", headlabel=\"{}\", fontsize=8];", g.pair(x))
                .expect("writing to a string");
        }
    }
    s.push_str("}\n");
    s
}
