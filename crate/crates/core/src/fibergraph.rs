//! Fiber graphs: vertices are the lattice points of a fiber, edges join
//! points whose difference is a move (either sign). Also the box-graph and
//! lifting constructions that transport connectivity between presentations.

use crate::error::Error;
use crate::graph::Graph;
use crate::lattice::{enumerate_fiber, Fiber, IntMatrix, IntVec, LatticeError};
use crate::moves::MoveSet;
use std::collections::HashMap;

/// A fiber together with its move-induced graph. Edge labels record, for
/// the edge `{u, v}` with `u < v` as vertex ids, a move index `j` and sign
/// `σ` such that `point(v) = point(u) + σ·move_j`. With sign-normalized
/// move storage and lexicographically sorted points, `σ` is always `+1`;
/// it is recorded anyway so labels are self-contained. A side table counts
/// how many stored moves generate the same edge.
#[derive(Debug, Clone)]
pub struct FiberGraph {
    fiber: Fiber,
    moves: MoveSet,
    graph: Graph,
    labels: HashMap<(u32, u32), (u32, i8)>,
    multiplicity: HashMap<(u32, u32), u32>,
}

impl FiberGraph {
    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    pub fn moves(&self) -> &MoveSet {
        &self.moves
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// The `(move index, sign)` label of an edge, if the edge exists.
    pub fn label(&self, u: usize, v: usize) -> Option<(usize, i8)> {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.labels.get(&key).map(|&(j, s)| (j as usize, s))
    }

    /// How many stored moves generate this edge (0 if absent).
    pub fn edge_multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.multiplicity.get(&key).copied().unwrap_or(0) as usize
    }
}

/// Builds the fiber graph: for every point and every signed move, the
/// target is looked up in the fiber index. Edges are deduplicated; the
/// first generating move (in move order, `+` before `-`) labels the edge.
pub fn build_graph(fiber: &Fiber, moves: &MoveSet) -> Result<FiberGraph, Error> {
    // Moves may have been built against a different matrix object; what
    // matters is that they are kernel vectors of this fiber's matrix.
    for (index, m) in moves.moves().iter().enumerate() {
        if m.vec.len() != fiber.matrix().cols()
            || fiber.matrix().mul_vec(&m.vec)?.iter().any(|&x| x != 0)
        {
            return Err(Error::MoveNotInKernel { index });
        }
    }
    let n = fiber.len();
    let mut graph = Graph::new(n);
    let mut labels: HashMap<(u32, u32), (u32, i8)> = HashMap::new();
    let mut multiplicity: HashMap<(u32, u32), u32> = HashMap::new();
    for i in 0..n {
        let p = fiber.point(i);
        for (j, m) in moves.moves().iter().enumerate() {
            for sign in [1i8, -1] {
                let q: Option<IntVec> = p
                    .iter()
                    .zip(&m.vec)
                    .map(|(&a, &d)| {
                        let y = if sign > 0 { a + d } else { a - d };
                        (y >= 0).then_some(y)
                    })
                    .collect();
                let Some(q) = q else { continue };
                let Some(t) = fiber.index_of(&q) else { continue };
                if t <= i {
                    continue; // the smaller endpoint owns the edge
                }
                let key = (i as u32, t as u32);
                graph.add_edge(i, t);
                labels.entry(key).or_insert((j as u32, sign));
                *multiplicity.entry(key).or_insert(0) += 1;
            }
        }
    }
    Ok(FiberGraph {
        fiber: fiber.clone(),
        moves: moves.clone(),
        graph,
        labels,
        multiplicity,
    })
}

/// Convenience: enumerate the fiber of `(a, b)` and build its graph.
pub fn build_fiber_graph(a: &IntMatrix, b: &[i64], moves: &MoveSet) -> Result<FiberGraph, Error> {
    let fiber = enumerate_fiber(a, b)?;
    build_graph(&fiber, moves)
}

// ==== box graphs ======================================================

/// A coordinate box with the nearest-neighbor graph on its lattice points.
#[derive(Debug, Clone)]
pub struct BoxGraph {
    pub points: Vec<IntVec>,
    pub graph: Graph,
}

/// The graph on `box(w) = [w_1] × … × [w_k]` under unit steps, where
/// `[w_i]` is the integer interval from 0 to `w_i` (toward `w_i` when
/// negative). Points are sorted lexicographically.
pub fn box_graph(w: &[i64]) -> Result<BoxGraph, Error> {
    if w.is_empty() {
        return Err(LatticeError::BadShape("box needs at least one coordinate".into()).into());
    }
    let lo: Vec<i64> = w.iter().map(|&x| x.min(0)).collect();
    let hi: Vec<i64> = w.iter().map(|&x| x.max(0)).collect();
    let mut size: i128 = 1;
    for (l, h) in lo.iter().zip(&hi) {
        size *= (h - l + 1) as i128;
        if size > 1_000_000 {
            return Err(LatticeError::BudgetExceeded { budget: 1_000_000 }.into());
        }
    }
    let mut points = Vec::with_capacity(size as usize);
    let mut cur = lo.clone();
    loop {
        points.push(cur.clone());
        // Mixed-radix increment, last coordinate fastest.
        let mut d = w.len();
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            if cur[d] < hi[d] {
                cur[d] += 1;
                break;
            }
            cur[d] = lo[d];
            if d == 0 {
                d = usize::MAX;
                break;
            }
        }
        if d == usize::MAX {
            break;
        }
    }
    points.sort();
    let index: HashMap<&IntVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for d in 0..w.len() {
            let mut q = p.clone();
            q[d] += 1;
            if q[d] <= hi[d] {
                if let Some(&j) = index.get(&q) {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = Graph::from_edges(points.len(), edges);
    Ok(BoxGraph { points, graph })
}

// ==== slack lifting ===================================================

/// A point set lifted by slack coordinates, with the bijection verified to
/// preserve edges in both directions.
#[derive(Debug, Clone)]
pub struct SlackLift {
    /// Graph on the original points under the given moves.
    pub base_graph: Graph,
    /// `(x, b - x)` for each original point, same order.
    pub lifted_points: Vec<IntVec>,
    /// Graph on the lifted points under the slacked moves `(m, -m)`.
    pub lifted_graph: Graph,
    /// True iff `x ↦ (x, b-x)` maps edges onto edges exactly.
    pub edge_preserving: bool,
}

/// Slacks a point set `F ⊆ box(b)` to `{(x, b-x)}` and verifies that the
/// bijection is a graph isomorphism between the move graph on `F` and the
/// slacked-move graph on the image.
pub fn slack_lift(points: &[IntVec], b: &[i64], moves: &[IntVec]) -> Result<SlackLift, Error> {
    if b.iter().any(|&x| x < 0) {
        return Err(LatticeError::BadShape("slack bound must be nonnegative".into()).into());
    }
    for p in points {
        if p.len() != b.len() {
            return Err(LatticeError::DimensionMismatch { expected: b.len(), got: p.len() }.into());
        }
        if p.iter().zip(b).any(|(&x, &bound)| x < 0 || x > bound) {
            return Err(LatticeError::BadShape(format!("point {p:?} outside the box of {b:?}")).into());
        }
    }
    for m in moves {
        if m.len() != b.len() {
            return Err(LatticeError::DimensionMismatch { expected: b.len(), got: m.len() }.into());
        }
    }
    let base_graph = difference_graph(points, moves);
    let lifted_points: Vec<IntVec> = points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.extend(p.iter().zip(b).map(|(&x, &bound)| bound - x));
            q
        })
        .collect();
    let slacked: Vec<IntVec> = moves
        .iter()
        .map(|m| {
            let mut s = m.clone();
            s.extend(m.iter().map(|&x| -x));
            s
        })
        .collect();
    let lifted_graph = difference_graph(&lifted_points, &slacked);
    // The bijection is the identity on indices, so isomorphism is exact
    // equality of edge sets.
    let edge_preserving = base_graph == lifted_graph;
    Ok(SlackLift { base_graph, lifted_points, lifted_graph, edge_preserving })
}

/// Graph on arbitrary points where `u ~ v` iff `u - v = ±m` for some move.
/// Points outside any fiber discipline are allowed; only membership in the
/// given set matters.
fn difference_graph(points: &[IntVec], moves: &[IntVec]) -> Graph {
    let index: HashMap<&IntVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for m in moves {
            for sign in [1i64, -1] {
                let q: IntVec = p.iter().zip(m).map(|(&a, &d)| a + sign * d).collect();
                if let Some(&j) = index.get(&q) {
                    if i != j {
                        edges.push((i.min(j), i.max(j)));
                    }
                }
            }
        }
    }
    Graph::from_edges(points.len(), edges)
}

// ==== universality lifting ============================================

/// A fiber graph re-presented over a lifted matrix with slack rows, with
/// the vertex bijection verified to be a graph isomorphism.
#[derive(Debug, Clone)]
pub struct UniversalityLift {
    pub base: FiberGraph,
    pub lifted: FiberGraph,
    /// The lifted matrix `[[A, I], [0, I]]`.
    pub matrix: IntMatrix,
    /// The lifted right-hand side `(b + ñ·1, ñ·1)`; every entry ≥ the
    /// requested floor.
    pub rhs: IntVec,
    pub n_tilde: i64,
    /// Base vertex id → lifted vertex id under `v ↦ (v, ñ·1)`.
    pub bijection: Vec<usize>,
    pub is_isomorphism: bool,
}

/// Lifts `(A, b, M)` so that every right-hand side entry is at least `n`
/// while the fiber graph stays isomorphic: `A' = [[A, I_d], [0, I_d]]`,
/// `ñ = max{n, n - b_i}`, `b' = (b + ñ·1, ñ·1)`, `M' = {(v, 0)}`. The
/// bijection `v ↦ (v, ñ·1)` is returned and checked edge-by-edge.
pub fn universality_lift(
    a: &IntMatrix,
    moves: &MoveSet,
    b: &[i64],
    n: i64,
) -> Result<UniversalityLift, Error> {
    let fiber = enumerate_fiber(a, b)?;
    if fiber.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let base = build_graph(&fiber, moves)?;
    let d = a.rows();
    let cols = a.cols();
    let n_tilde = b
        .iter()
        .map(|&bi| n.checked_sub(bi).ok_or(LatticeError::Overflow))
        .collect::<Result<Vec<i64>, _>>()?
        .into_iter()
        .chain([n])
        .max()
        .expect("nonempty");

    // A' = [[A, I_d], [0, I_d]] over n + d columns.
    let mut rows: Vec<IntVec> = Vec::with_capacity(2 * d);
    for r in 0..d {
        let mut row = a.row(r).to_vec();
        row.extend((0..d).map(|j| i64::from(j == r)));
        rows.push(row);
    }
    for r in 0..d {
        let mut row = vec![0i64; cols];
        row.extend((0..d).map(|j| i64::from(j == r)));
        rows.push(row);
    }
    let matrix = IntMatrix::from_rows(&rows)?;

    let mut rhs: IntVec = b
        .iter()
        .map(|&bi| bi.checked_add(n_tilde).ok_or(LatticeError::Overflow))
        .collect::<Result<_, _>>()?;
    rhs.extend(std::iter::repeat(n_tilde).take(d));
    debug_assert!(rhs.iter().all(|&x| x >= n), "lifted rhs must clear the floor");

    let lifted_vectors: Vec<IntVec> = moves
        .vectors()
        .map(|v| {
            let mut w = v.to_vec();
            w.extend(std::iter::repeat(0).take(d));
            w
        })
        .collect();
    let lifted_moves = MoveSet::new(matrix.clone(), moves.kind(), lifted_vectors)?;
    // The slack rows pin the last d coordinates to exactly ñ·1, and the
    // top rows then reduce to A·u = b, so the lifted fiber is precisely
    // the image of v ↦ (v, ñ·1); building it from the image avoids an
    // enumeration whose interval bounds scale with ñ. Each image point is
    // still checked against the lifted system.
    let lifted_points: Vec<IntVec> = fiber
        .points()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.extend(std::iter::repeat(n_tilde).take(d));
            q
        })
        .collect();
    for q in &lifted_points {
        if !matrix.solves(q, &rhs)? {
            return Err(LatticeError::BadShape("lifted point fails the lifted system".into()).into());
        }
    }
    let lifted_fiber = Fiber::from_points(matrix.clone(), rhs.clone(), lifted_points);
    let lifted = build_graph(&lifted_fiber, &lifted_moves)?;

    // v ↦ (v, ñ·1) must hit every lifted point exactly once.
    let mut bijection = Vec::with_capacity(fiber.len());
    let mut surjective = lifted_fiber.len() == fiber.len();
    for p in fiber.points() {
        let mut q = p.clone();
        q.extend(std::iter::repeat(n_tilde).take(d));
        match lifted_fiber.index_of(&q) {
            Some(t) => bijection.push(t),
            None => {
                surjective = false;
                bijection.push(usize::MAX);
            }
        }
    }
    let is_isomorphism = surjective
        && base.graph().edges().iter().all(|&(u, v)| {
            lifted.graph().has_edge(bijection[u], bijection[v])
        })
        && base.edge_count() == lifted.edge_count();

    Ok(UniversalityLift {
        base,
        lifted,
        matrix,
        rhs,
        n_tilde,
        bijection,
        is_isomorphism,
    })
}
