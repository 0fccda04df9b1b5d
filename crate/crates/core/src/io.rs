//! Interchange formats: matrices as JSON or whitespace text, move sets as
//! JSON or CSV, fibers as JSON or CSV, graphs as DOT or CSV edge lists,
//! and level decompositions as CSV. All emitters are deterministic.

use crate::akfamily::LevelGraphs;
use crate::error::Error;
use crate::fibergraph::FiberGraph;
use crate::graph::Graph;
use crate::lattice::{Fiber, IntMatrix, IntVec};
use crate::moves::MoveSet;
use serde::Deserialize;
use serde_json::json;

// ==== matrices ========================================================

#[derive(Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

/// `{"rows": d, "cols": n, "entries": [row-major]}`.
pub fn matrix_to_json(m: &IntMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn matrix_from_json(s: &str) -> Result<IntMatrix, Error> {
    let raw: MatrixJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix json: {e}")))?;
    Ok(IntMatrix::new(raw.rows, raw.cols, raw.entries)?)
}

/// Whitespace-separated text: one row per line; blank lines and `#`
/// comments are ignored.
pub fn matrix_from_text(s: &str) -> Result<IntMatrix, Error> {
    let mut rows: Vec<IntVec> = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<IntVec, _> = line.split_whitespace().map(str::parse::<i64>).collect();
        rows.push(row.map_err(|e| Error::Parse(format!("matrix line {}: {e}", lineno + 1)))?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix text contains no rows".into()));
    }
    Ok(IntMatrix::from_rows(&rows)?)
}

/// Accepts either the JSON or the text form, deciding by the first
/// non-whitespace byte.
pub fn parse_matrix(s: &str) -> Result<IntMatrix, Error> {
    if s.trim_start().starts_with('{') {
        matrix_from_json(s)
    } else {
        matrix_from_text(s)
    }
}

/// A comma- or whitespace-separated integer vector, e.g. `0,0,1` or `0 0 1`.
pub fn parse_int_vec(s: &str) -> Result<IntVec, Error> {
    let v: Result<IntVec, _> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse::<i64>)
        .collect();
    let v = v.map_err(|e| Error::Parse(format!("integer vector {s:?}: {e}")))?;
    if v.is_empty() {
        return Err(Error::Parse("empty integer vector".into()));
    }
    Ok(v)
}

// ==== move sets =======================================================

/// `{"kind": tag, "moves": [[...], ...]}`.
pub fn moves_to_json(set: &MoveSet) -> String {
    let vectors: Vec<&[i64]> = set.vectors().collect();
    json!({ "kind": set.kind().to_string(), "moves": vectors }).to_string()
}

/// One move per row, comma-separated; blank lines and `#` comments are
/// ignored.
pub fn moves_to_csv(set: &MoveSet) -> String {
    let mut out = String::new();
    for v in set.vectors() {
        out.push_str(&join_ints(v));
        out.push('\n');
    }
    out
}

/// Parses raw move vectors from CSV (comma or whitespace separated).
pub fn moves_from_csv(s: &str) -> Result<Vec<IntVec>, Error> {
    let mut out = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            parse_int_vec(line)
                .map_err(|e| Error::Parse(format!("moves line {}: {e}", lineno + 1)))?,
        );
    }
    Ok(out)
}

// ==== fibers ==========================================================

/// One point per row, comma-separated.
pub fn fiber_to_csv(f: &Fiber) -> String {
    let mut out = String::new();
    for p in f.points() {
        out.push_str(&join_ints(p));
        out.push('\n');
    }
    out
}

/// `{"rhs": b, "count": n, "points": [[...], ...]}`.
pub fn fiber_to_json(f: &Fiber) -> String {
    json!({ "rhs": f.rhs(), "count": f.len(), "points": f.points() }).to_string()
}

// ==== graphs ==========================================================

/// DOT graph with fiber points as vertex labels and move indices as edge
/// labels.
pub fn fiber_graph_to_dot(fg: &FiberGraph) -> String {
    let mut out = String::from("graph fiber {\n");
    for (i, p) in fg.fiber().points().iter().enumerate() {
        out.push_str(&format!("  v{i} [label=\"({})\"];\n", join_ints(p)));
    }
    for (u, v) in fg.graph().edges() {
        let (index, _) = fg.label(u, v).expect("every edge is labeled");
        out.push_str(&format!("  v{u} -- v{v} [label=\"{index}\"];\n"));
    }
    out.push_str("}\n");
    out
}

/// Sorted `u,v` edge rows.
pub fn graph_to_edge_csv(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        out.push_str(&format!("{u},{v}\n"));
    }
    out
}

// ==== level decompositions ============================================

/// One row per fiber point: the level `s` followed by the full point.
pub fn levels_to_csv(lg: &LevelGraphs) -> String {
    let mut out = String::from("s,point...\n");
    for (p, s) in lg.points.iter().zip(&lg.level_of) {
        out.push_str(&format!("{s},{}\n", join_ints(p)));
    }
    out
}

fn join_ints(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
