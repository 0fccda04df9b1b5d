//! A structured family of matrices whose fibers decompose into levels of
//! coordinate boxes, with closed forms for sizes and minimum degrees, a
//! seeded right-hand-side sampler, and the two verification reports the
//! test suites are built around.

use crate::connectivity::ConnectivityReport;
use crate::error::Error;
use crate::fibergraph::{build_graph, FiberGraph};
use crate::graph::Graph;
use crate::lattice::{enumerate_fiber, IntMatrix, IntVec, LatticeError};
use crate::moves::{graver_ak, groebner_lex_ak};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One member of the family: a `(2k+1) × (4k+2)` matrix over coordinates
/// `(x¹, x², y¹, y², s, t)` with rows `x¹_i + x²_i = s`, `y¹_i + y²_i = t`,
/// and `s + t = c`.
#[derive(Debug, Clone, Serialize)]
pub struct AkInstance {
    k: usize,
    matrix: IntMatrix,
}

impl AkInstance {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

/// Builds the family member for a given `k ≥ 1`.
pub fn build_ak(k: usize) -> AkInstance {
    assert!(k >= 1, "the family starts at k = 1");
    let n = 4 * k + 2;
    let mut rows: Vec<IntVec> = Vec::with_capacity(2 * k + 1);
    for i in 0..k {
        let mut row = vec![0i64; n];
        row[i] = 1;
        row[k + i] = 1;
        row[4 * k] = -1;
        rows.push(row);
    }
    for i in 0..k {
        let mut row = vec![0i64; n];
        row[2 * k + i] = 1;
        row[3 * k + i] = 1;
        row[4 * k + 1] = -1;
        rows.push(row);
    }
    let mut last = vec![0i64; n];
    last[4 * k] = 1;
    last[4 * k + 1] = 1;
    rows.push(last);
    AkInstance {
        k,
        matrix: IntMatrix::from_rows(&rows).expect("family rows are rectangular"),
    }
}

/// The doubled presentation `[[A_{k+1}, I], [0, I]]` used to re-express the
/// `k+1` member over a matrix with slack rows: `(4k+6) × (6k+9)`.
pub fn build_bk(k: usize) -> IntMatrix {
    let inner = build_ak(k + 1);
    let d = 2 * (k + 1) + 1; // rows of the inner matrix
    let cols = inner.matrix.cols();
    let mut rows: Vec<IntVec> = Vec::with_capacity(2 * d);
    for r in 0..d {
        let mut row = inner.matrix.row(r).to_vec();
        row.extend((0..d).map(|j| i64::from(j == r)));
        rows.push(row);
    }
    for r in 0..d {
        let mut row = vec![0i64; cols];
        row.extend((0..d).map(|j| i64::from(j == r)));
        rows.push(row);
    }
    IntMatrix::from_rows(&rows).expect("block rows are rectangular")
}

// ==== right-hand-side decomposition ===================================

/// A right-hand side `b = (w¹, w², c)` split into its blocks, with the
/// level range `[lower, upper]` of the fiber: level `s` is feasible iff
/// `lower ≤ s ≤ upper`, where `lower = max_i (w¹_i)⁻` and
/// `upper = c - max_i (w²_i)⁻`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhsDecomp {
    pub k: usize,
    pub w1: IntVec,
    pub w2: IntVec,
    pub c: i64,
    pub lower: i64,
    pub upper: i64,
}

impl RhsDecomp {
    /// The fiber is empty exactly when no level is feasible.
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn rhs(&self) -> IntVec {
        let mut b = self.w1.clone();
        b.extend_from_slice(&self.w2);
        b.push(self.c);
        b
    }
}

fn neg_part_max(w: &[i64]) -> i64 {
    w.iter().map(|&x| (-x).max(0)).max().expect("k >= 1")
}

/// Splits a right-hand side of odd length `2k + 1` into `(w¹, w², c)` and
/// computes the feasible level range.
pub fn decompose_rhs(b: &[i64]) -> Result<RhsDecomp, Error> {
    if b.len() < 3 || b.len() % 2 == 0 {
        return Err(LatticeError::BadShape(format!(
            "right-hand side length must be odd and at least 3, got {}",
            b.len()
        ))
        .into());
    }
    let k = (b.len() - 1) / 2;
    let w1 = b[..k].to_vec();
    let w2 = b[k..2 * k].to_vec();
    let c = b[2 * k];
    let lower = neg_part_max(&w1);
    let upper = c.checked_sub(neg_part_max(&w2)).ok_or(LatticeError::Overflow)?;
    Ok(RhsDecomp { k, w1, w2, c, lower, upper })
}

// ==== box coordinates =================================================

/// Compressed coordinates for a fiber point: the level `s` and the free
/// halves `x = x¹`, `y = y¹`; the dependent halves are
/// `x² = w¹ + s·1 - x` and `y² = w² + (c-s)·1 - y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCoords {
    pub x: IntVec,
    pub y: IntVec,
    pub s: i64,
}

impl BoxCoords {
    pub fn new(x: IntVec, y: IntVec, s: i64) -> Self {
        BoxCoords { x, y, s }
    }
}

fn check_in_box(bc: &BoxCoords, d: &RhsDecomp) -> Result<(), Error> {
    if bc.x.len() != d.k || bc.y.len() != d.k {
        return Err(LatticeError::DimensionMismatch { expected: d.k, got: bc.x.len().max(bc.y.len()) }.into());
    }
    if bc.s < d.lower || bc.s > d.upper {
        return Err(LatticeError::BadShape(format!(
            "level {} outside feasible range [{}, {}]",
            bc.s, d.lower, d.upper
        ))
        .into());
    }
    for i in 0..d.k {
        if bc.x[i] < 0 || bc.x[i] > d.w1[i] + bc.s {
            return Err(LatticeError::BadShape(format!(
                "x[{i}] = {} outside [0, {}]",
                bc.x[i],
                d.w1[i] + bc.s
            ))
            .into());
        }
        if bc.y[i] < 0 || bc.y[i] > d.w2[i] + (d.c - bc.s) {
            return Err(LatticeError::BadShape(format!(
                "y[{i}] = {} outside [0, {}]",
                bc.y[i],
                d.w2[i] + (d.c - bc.s)
            ))
            .into());
        }
    }
    Ok(())
}

/// Expands box coordinates to the full fiber point
/// `(x, w¹ + s·1 - x, y, w² + (c-s)·1 - y, s, c - s)`.
pub fn fiber_vert(bc: &BoxCoords, d: &RhsDecomp) -> Result<IntVec, Error> {
    check_in_box(bc, d)?;
    let k = d.k;
    let mut v = Vec::with_capacity(4 * k + 2);
    v.extend_from_slice(&bc.x);
    v.extend((0..k).map(|i| d.w1[i] + bc.s - bc.x[i]));
    v.extend_from_slice(&bc.y);
    v.extend((0..k).map(|i| d.w2[i] + (d.c - bc.s) - bc.y[i]));
    v.push(bc.s);
    v.push(d.c - bc.s);
    debug_assert!(v.iter().all(|&x| x >= 0));
    debug_assert!(build_ak(k).matrix().solves(&v, &d.rhs()).unwrap_or(false));
    Ok(v)
}

/// Number of fiber points at one level: `Π (w¹_i + s + 1) · Π (w²_i + c - s + 1)`.
pub fn level_size(s: i64, d: &RhsDecomp) -> Result<i128, Error> {
    if s < d.lower || s > d.upper {
        return Ok(0);
    }
    let mut size: i128 = 1;
    for i in 0..d.k {
        size = size
            .checked_mul((d.w1[i] + s + 1) as i128)
            .and_then(|v| v.checked_mul((d.w2[i] + (d.c - s) + 1) as i128))
            .ok_or(LatticeError::Overflow)?;
    }
    Ok(size)
}

/// Total fiber size: the sum of all level sizes.
pub fn total_size(d: &RhsDecomp) -> Result<i128, Error> {
    let mut total: i128 = 0;
    let mut s = d.lower;
    while s <= d.upper {
        total = total.checked_add(level_size(s, d)?).ok_or(LatticeError::Overflow)?;
        s += 1;
    }
    Ok(total)
}

/// All fiber points at one level, as full vectors, sorted by `(x, y)`
/// lexicographically.
pub fn box_vertices(s: i64, d: &RhsDecomp) -> Result<Vec<IntVec>, Error> {
    if s < d.lower || s > d.upper {
        return Err(LatticeError::BadShape(format!(
            "level {} outside feasible range [{}, {}]",
            s, d.lower, d.upper
        ))
        .into());
    }
    let size = level_size(s, d)?;
    if size > 4_000_000 {
        return Err(LatticeError::BudgetExceeded { budget: 4_000_000 }.into());
    }
    let k = d.k;
    let x_hi: IntVec = (0..k).map(|i| d.w1[i] + s).collect();
    let y_hi: IntVec = (0..k).map(|i| d.w2[i] + (d.c - s)).collect();
    let mut out = Vec::with_capacity(size as usize);
    let mut x = vec![0i64; k];
    loop {
        let mut y = vec![0i64; k];
        loop {
            out.push(
                fiber_vert(&BoxCoords::new(x.clone(), y.clone(), s), d)
                    .expect("generated coordinates are in the box"),
            );
            if !increment(&mut y, &y_hi) {
                break;
            }
        }
        if !increment(&mut x, &x_hi) {
            break;
        }
    }
    Ok(out)
}

/// Mixed-radix increment with the last coordinate fastest; false on wrap.
fn increment(v: &mut [i64], hi: &[i64]) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < hi[i] {
            v[i] += 1;
            return true;
        }
        v[i] = 0;
    }
    false
}

// ==== the cross-level moves ===========================================

/// The level-lowering move indexed by `v¹, v² ∈ {0,1}^k`:
/// `g(v¹, v²) = (-v¹, -1 + v¹, v², 1 - v², -1, 1)`.
pub fn graver_move(v1: &[i64], v2: &[i64]) -> Result<IntVec, Error> {
    if v1.len() != v2.len() || v1.is_empty() {
        return Err(LatticeError::DimensionMismatch { expected: v1.len().max(1), got: v2.len() }.into());
    }
    for &b in v1.iter().chain(v2) {
        if b != 0 && b != 1 {
            return Err(LatticeError::BadShape("selector entries must be 0 or 1".into()).into());
        }
    }
    let k = v1.len();
    let mut g = Vec::with_capacity(4 * k + 2);
    g.extend(v1.iter().map(|&b| -b));
    g.extend(v1.iter().map(|&b| b - 1));
    g.extend_from_slice(v2);
    g.extend(v2.iter().map(|&b| 1 - b));
    g.push(-1);
    g.push(1);
    Ok(g)
}

/// Direction of a cross-level step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Apply `+g(v¹, v²)`: level decreases by one.
    Down,
    /// Apply `-g(v¹, v²)`: level increases by one.
    Up,
}

/// Whether the cross-level move indexed by `(v¹, v²)` applies at a point in
/// the given direction. Down requires `supp(v¹) ⊆ supp(x)`, one unit of
/// room in `x² = w¹ + s·1 - x` off the support, and `s > lower`; up is the
/// mirror image on the `y` side with `s < upper`. When true, the stepped
/// point is again a fiber point (checked in debug builds).
pub fn is_applicable(
    bc: &BoxCoords,
    v1: &[i64],
    v2: &[i64],
    direction: Direction,
    d: &RhsDecomp,
) -> Result<bool, Error> {
    check_in_box(bc, d)?;
    let g = graver_move(v1, v2)?;
    if v1.len() != d.k {
        return Err(LatticeError::DimensionMismatch { expected: d.k, got: v1.len() }.into());
    }
    let ok = match direction {
        Direction::Down => {
            bc.s > d.lower
                && (0..d.k).all(|i| {
                    if v1[i] == 1 {
                        bc.x[i] >= 1
                    } else {
                        d.w1[i] + bc.s - bc.x[i] >= 1
                    }
                })
        }
        Direction::Up => {
            bc.s < d.upper
                && (0..d.k).all(|i| {
                    if v2[i] == 1 {
                        bc.y[i] >= 1
                    } else {
                        d.w2[i] + (d.c - bc.s) - bc.y[i] >= 1
                    }
                })
        }
    };
    if ok {
        let point = fiber_vert(bc, d)?;
        let sign = if direction == Direction::Down { 1 } else { -1 };
        let stepped: IntVec = point.iter().zip(&g).map(|(&a, &m)| a + sign * m).collect();
        debug_assert!(
            stepped.iter().all(|&x| x >= 0)
                && build_ak(d.k).matrix().solves(&stepped, &d.rhs()).unwrap_or(false),
            "an applicable step must stay in the fiber"
        );
    }
    Ok(ok)
}

// ==== closed-form minimum degree ======================================

fn support_size(w: &[i64], shift: i64) -> usize {
    w.iter().filter(|&&x| x + shift != 0).count()
}

/// Closed form for the minimum degree of the full move graph on a
/// nonempty fiber. Single-level fibers use the within-level formula; all
/// others add the `k + 2^k` cross-level neighbors of the extremal corner.
pub fn min_degree_formula(d: &RhsDecomp) -> Result<usize, Error> {
    if d.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let s1 = support_size(&d.w1, neg_part_max(&d.w1));
    let s2 = support_size(&d.w2, neg_part_max(&d.w2));
    if d.lower == d.upper {
        Ok(s1 + s2)
    } else {
        Ok(s1.min(s2) + d.k + (1usize << d.k))
    }
}

// ==== seeded right-hand-side sampler ==================================

/// Draws `count` right-hand sides with nonempty fibers, deterministically
/// from a seed: entries of `w¹, w²` uniform in `{-1, 0, 1, 2}`, `c`
/// uniform in `{0, …, 4}`.
pub fn sample_rhs(k: usize, seed: u64, count: usize) -> Vec<IntVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w1: IntVec = (0..k).map(|_| rng.gen_range(-1..=2)).collect();
        let w2: IntVec = (0..k).map(|_| rng.gen_range(-1..=2)).collect();
        let c = rng.gen_range(0..=4);
        let mut b = w1;
        b.extend(w2);
        b.push(c);
        if !decompose_rhs(&b).expect("sampled length is odd").is_empty() {
            out.push(b);
        }
    }
    out
}

// ==== level-partitioned graph construction ============================

/// A fiber built level by level, with both move graphs, constructed
/// directly from the box geometry without materializing the exponential
/// move set. Points are sorted by `(s, x, y)`.
#[derive(Debug, Clone)]
pub struct LevelGraphs {
    pub decomp: RhsDecomp,
    pub points: Vec<IntVec>,
    /// Level of each point (the `s` coordinate, duplicated for convenience).
    pub level_of: Vec<i64>,
    /// Graph under the full cross-level move family plus unit steps.
    pub full: Graph,
    /// Graph under the single straight cross-level move plus unit steps.
    pub lex: Graph,
}

/// Builds both graphs on the fiber of a nonempty decomposed right-hand
/// side. `max_points` caps the fiber size.
pub fn level_graphs(d: &RhsDecomp, max_points: usize) -> Result<LevelGraphs, Error> {
    if d.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let size = total_size(d)?;
    if size > max_points as i128 {
        return Err(LatticeError::BudgetExceeded { budget: max_points }.into());
    }
    let k = d.k;
    let mut points: Vec<IntVec> = Vec::with_capacity(size as usize);
    let mut level_of: Vec<i64> = Vec::with_capacity(size as usize);
    // Per-level offset into `points`, for index arithmetic.
    let mut level_offset: Vec<usize> = Vec::new();
    let mut s = d.lower;
    while s <= d.upper {
        level_offset.push(points.len());
        let verts = box_vertices(s, d)?;
        level_of.extend(std::iter::repeat(s).take(verts.len()));
        points.extend(verts);
        s += 1;
    }

    // Index of a point inside its level: mixed-radix over (x, y) with the
    // y block fastest, matching the order box_vertices generates.
    let x_hi = |s: i64, i: usize| d.w1[i] + s;
    let y_hi = |s: i64, i: usize| d.w2[i] + (d.c - s);
    let index_in_level = |x: &[i64], y: &[i64], s: i64| -> usize {
        let mut idx: usize = 0;
        for i in 0..k {
            idx = idx * (x_hi(s, i) + 1) as usize + x[i] as usize;
        }
        for i in 0..k {
            idx = idx * (y_hi(s, i) + 1) as usize + y[i] as usize;
        }
        idx
    };
    let global = |x: &[i64], y: &[i64], s: i64| -> usize {
        level_offset[(s - d.lower) as usize] + index_in_level(x, y, s)
    };

    let mut unit_edges: Vec<(usize, usize)> = Vec::new();
    let mut full_cross: Vec<(usize, usize)> = Vec::new();
    let mut lex_cross: Vec<(usize, usize)> = Vec::new();

    for (p, point) in points.iter().enumerate() {
        let s = level_of[p];
        let x = &point[..k];
        let y = &point[2 * k..3 * k];
        // Unit steps inside the level: raise one coordinate of x or y.
        for i in 0..k {
            if x[i] + 1 <= x_hi(s, i) {
                let mut nx = x.to_vec();
                nx[i] += 1;
                unit_edges.push((p, global(&nx, y, s)));
            }
            if y[i] + 1 <= y_hi(s, i) {
                let mut ny = y.to_vec();
                ny[i] += 1;
                unit_edges.push((p, global(x, &ny, s)));
            }
        }
        if s == d.lower {
            continue;
        }
        // Cross edges down to level s-1. Per coordinate, v¹_i = 1 needs
        // x_i ≥ 1 and v¹_i = 0 needs x_i to fit the shrunken box; v² is
        // free because the target y box grows.
        let mut v1_opts: Vec<Vec<i64>> = Vec::with_capacity(k);
        for i in 0..k {
            let mut opts = Vec::with_capacity(2);
            if x[i] >= 1 {
                opts.push(1);
            }
            if x[i] <= d.w1[i] + s - 1 {
                opts.push(0);
            }
            debug_assert!(!opts.is_empty(), "a feasible lower level admits some selector");
            v1_opts.push(opts);
        }
        let mut v1_choice = vec![0usize; k];
        loop {
            let nx: IntVec = (0..k).map(|i| x[i] - v1_opts[i][v1_choice[i]]).collect();
            // All 2^k selections of v² lead to distinct valid targets.
            let mut v2 = vec![0i64; k];
            loop {
                let ny: IntVec = (0..k).map(|i| y[i] + v2[i]).collect();
                full_cross.push((p, global(&nx, &ny, s - 1)));
                if !increment(&mut v2, &vec![1; k]) {
                    break;
                }
            }
            // Advance the v¹ selection.
            let mut done = true;
            for i in (0..k).rev() {
                if v1_choice[i] + 1 < v1_opts[i].len() {
                    v1_choice[i] += 1;
                    done = false;
                    break;
                }
                v1_choice[i] = 0;
            }
            if done {
                break;
            }
        }
        // The single straight cross move keeps (x, y) fixed; going down it
        // needs x to fit the shrunken box.
        if (0..k).all(|i| x[i] <= d.w1[i] + s - 1) {
            lex_cross.push((p, global(x, y, s - 1)));
        }
    }

    let n = points.len();
    let mut full_edges = unit_edges.clone();
    full_edges.extend_from_slice(&full_cross);
    let full = Graph::from_edges(n, full_edges);
    let mut lex_edges = unit_edges;
    lex_edges.extend_from_slice(&lex_cross);
    let lex = Graph::from_edges(n, lex_edges);
    Ok(LevelGraphs { decomp: d.clone(), points, level_of, full, lex })
}

// ==== verification reports ============================================

/// Measured connectivity of the lex-move graph at the unit right-hand side
/// `e_{2k+1}`, against the expectations that make it a gap witness: the
/// minimum degree is `k` while a single bridge holds the two levels
/// together, so edge connectivity stays at 1.
#[derive(Debug, Clone, Serialize)]
pub struct GapWitnessReport {
    pub k: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    pub edge_connectivity: usize,
    pub vertex_connectivity: usize,
    pub cross_edge_count: usize,
    /// The two endpoints of the unique cross-level edge.
    pub bridge: (IntVec, IntVec),
    /// True when the measurements match the expected pattern.
    pub passed: bool,
    /// True when the witness actually separates degree from edge
    /// connectivity, i.e. `min_degree > edge_connectivity` (needs `k ≥ 2`).
    pub is_gap_witness: bool,
}

/// Builds the lex-move graph on the fiber of `e_{2k+1}` and measures it.
pub fn verify_gap_witness(k: usize) -> Result<GapWitnessReport, Error> {
    let inst = build_ak(k);
    let mut b = vec![0i64; 2 * k + 1];
    b[2 * k] = 1;
    let fiber = enumerate_fiber(inst.matrix(), &b)?;
    let moves = groebner_lex_ak(k)?;
    let fg = build_graph(&fiber, &moves)?;
    let report = ConnectivityReport::compute(fg.graph())?;

    let level_coord = 4 * k; // the s coordinate
    let cross: Vec<(usize, usize)> = fg
        .graph()
        .edges()
        .into_iter()
        .filter(|&(u, v)| fiber.point(u)[level_coord] != fiber.point(v)[level_coord])
        .collect();
    let bridge = match cross.first() {
        Some(&(u, v)) => (fiber.point(u).to_vec(), fiber.point(v).to_vec()),
        None => (Vec::new(), Vec::new()),
    };

    let mut expected_low = vec![0i64; 4 * k + 2];
    for i in 0..k {
        expected_low[3 * k + i] = 1; // y² = 1
    }
    expected_low[4 * k + 1] = 1; // t = 1
    let mut expected_high = vec![0i64; 4 * k + 2];
    for i in 0..k {
        expected_high[k + i] = 1; // x² = 1
    }
    expected_high[4 * k] = 1; // s = 1
    let endpoints_match = cross.len() == 1
        && ((bridge.0 == expected_low && bridge.1 == expected_high)
            || (bridge.0 == expected_high && bridge.1 == expected_low));

    let passed = report.min_degree == k
        && report.edge_connectivity == 1
        && report.vertex_connectivity == 1
        && report.is_connected
        && endpoints_match;
    Ok(GapWitnessReport {
        k,
        vertex_count: report.vertex_count,
        edge_count: report.edge_count,
        min_degree: report.min_degree,
        edge_connectivity: report.edge_connectivity,
        vertex_connectivity: report.vertex_connectivity,
        cross_edge_count: cross.len(),
        bridge,
        passed,
        is_gap_witness: passed && k >= 2,
    })
}

/// Measured structure of the full-move graph on one fiber of the family:
/// edge connectivity equals minimum degree, the minimum degree matches the
/// closed form, every point sees at least `2^k` neighbors in each adjacent
/// level, and within-level edges agree between the two move sets. Vertex
/// connectivity is recorded but not constrained.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeMatchReport {
    pub k: usize,
    pub rhs: IntVec,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    pub edge_connectivity: usize,
    pub vertex_connectivity: usize,
    pub formula_value: usize,
    pub lambda_equals_delta: bool,
    pub formula_matches: bool,
    /// Minimum, over points and adjacent levels, of the number of
    /// neighbors in that level; absent for single-level fibers.
    pub cross_neighbor_floor: Option<usize>,
    pub cross_neighbors_ok: bool,
    /// Within-level induced edges identical under both move sets.
    pub levels_edge_identical: bool,
    pub passed: bool,
}

/// Builds the full-move graph on the fiber of `b` and checks that edge
/// connectivity equals the minimum degree and matches the closed form.
pub fn verify_degree_match(k: usize, b: &[i64]) -> Result<DegreeMatchReport, Error> {
    let d = decompose_rhs(b)?;
    if d.k != k {
        return Err(LatticeError::DimensionMismatch { expected: 2 * k + 1, got: b.len() }.into());
    }
    if d.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let inst = build_ak(k);
    let fiber = enumerate_fiber(inst.matrix(), b)?;
    let full = build_graph(&fiber, &graver_ak(k)?)?;
    let lex = build_graph(&fiber, &groebner_lex_ak(k)?)?;
    let report = ConnectivityReport::compute(full.graph())?;
    let formula_value = min_degree_formula(&d)?;

    let level_coord = 4 * k;
    let level = |v: usize| fiber.point(v)[level_coord];

    // Floor over (point, adjacent level) of cross-level neighbor counts.
    let mut cross_neighbor_floor: Option<usize> = None;
    for v in 0..fiber.len() {
        let s = level(v);
        for target in [s - 1, s + 1] {
            if target < d.lower || target > d.upper {
                continue;
            }
            let count = full.graph().neighbors(v).iter().filter(|&&u| level(u as usize) == target).count();
            cross_neighbor_floor = Some(cross_neighbor_floor.map_or(count, |f| f.min(count)));
        }
    }
    let cross_neighbors_ok = cross_neighbor_floor.map_or(true, |f| f >= (1usize << k));

    let within = |g: &FiberGraph| -> Vec<(usize, usize)> {
        g.graph()
            .edges()
            .into_iter()
            .filter(|&(u, v)| level(u) == level(v))
            .collect()
    };
    let levels_edge_identical = within(&full) == within(&lex);

    let lambda_equals_delta = report.edge_connectivity == report.min_degree;
    let formula_matches = formula_value == report.min_degree;
    let passed = lambda_equals_delta && formula_matches && cross_neighbors_ok && levels_edge_identical;
    Ok(DegreeMatchReport {
        k,
        rhs: b.to_vec(),
        vertex_count: report.vertex_count,
        edge_count: report.edge_count,
        min_degree: report.min_degree,
        edge_connectivity: report.edge_connectivity,
        vertex_connectivity: report.vertex_connectivity,
        formula_value,
        lambda_equals_delta,
        formula_matches,
        cross_neighbor_floor,
        cross_neighbors_ok,
        levels_edge_identical,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_fiber_with_budget;
    use crate::moves::{conformal_leq, normalize_sign};
    use std::collections::BTreeSet;

    #[test]
    fn family_matrix_shape_and_rows() {
        let a1 = build_ak(1);
        assert_eq!((a1.matrix().rows(), a1.matrix().cols()), (3, 6));
        assert_eq!(a1.matrix().row(0), &[1, 1, 0, 0, -1, 0]);
        assert_eq!(a1.matrix().row(1), &[0, 0, 1, 1, 0, -1]);
        assert_eq!(a1.matrix().row(2), &[0, 0, 0, 0, 1, 1]);
        let a3 = build_ak(3);
        assert_eq!((a3.matrix().rows(), a3.matrix().cols()), (7, 14));
        // Every column of the selector blocks hits exactly one block row.
        assert_eq!(a3.matrix().row(2), &[0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0]);
    }

    #[test]
    fn doubled_presentation_shape() {
        let b1 = build_bk(1);
        assert_eq!((b1.rows(), b1.cols()), (10, 15));
        // Top-left block is the k+1 member, top-right the identity.
        let inner = build_ak(2);
        for r in 0..5 {
            assert_eq!(&b1.row(r)[..10], inner.matrix().row(r));
            for j in 0..5 {
                assert_eq!(b1.row(r)[10 + j], i64::from(j == r));
            }
        }
        for r in 0..5 {
            assert!(b1.row(5 + r)[..10].iter().all(|&x| x == 0));
            assert_eq!(b1.row(5 + r)[10 + r], 1);
        }
    }

    #[test]
    fn rhs_decomposition_and_emptiness() {
        let d = decompose_rhs(&[1, 0, 0, 1, 2]).unwrap();
        assert_eq!((d.k, d.c), (2, 2));
        assert_eq!(d.w1, vec![1, 0]);
        assert_eq!(d.w2, vec![0, 1]);
        assert_eq!((d.lower, d.upper), (0, 2));
        assert!(!d.is_empty());
        assert_eq!(d.rhs(), vec![1, 0, 0, 1, 2]);

        // Negative entries push the level range together.
        let d = decompose_rhs(&[-2, 1, -1, -1, 3]).unwrap();
        assert_eq!((d.lower, d.upper), (2, 2));
        assert!(!d.is_empty());

        let d = decompose_rhs(&[-2, 0, 0, 0, 1]).unwrap();
        assert!(d.is_empty());

        // Emptiness matches brute-force enumeration on a sweep of inputs.
        let a1 = build_ak(1);
        for w1 in -2..=2 {
            for w2 in -2..=2 {
                for c in -1..=4 {
                    let b = [w1, w2, c];
                    let d = decompose_rhs(&b).unwrap();
                    let fiber = enumerate_fiber(a1.matrix(), &b).unwrap();
                    assert_eq!(d.is_empty(), fiber.is_empty(), "b = {b:?}");
                    if !d.is_empty() {
                        assert_eq!(total_size(&d).unwrap(), fiber.len() as i128, "b = {b:?}");
                    }
                }
            }
        }
        assert!(decompose_rhs(&[1, 2]).is_err());
        assert!(decompose_rhs(&[1]).is_err());
    }

    #[test]
    fn fiber_vert_expands_and_validates() {
        let d = decompose_rhs(&[1, 0, 0, 1, 2]).unwrap();
        let v = fiber_vert(&BoxCoords::new(vec![1, 0], vec![0, 1], 1), &d).unwrap();
        assert_eq!(v, vec![1, 0, 1, 1, 0, 1, 1, 1, 1, 1]);
        // x[0] beyond w1[0] + s is rejected.
        assert!(fiber_vert(&BoxCoords::new(vec![3, 0], vec![0, 0], 1), &d).is_err());
        // Level outside the feasible range is rejected.
        assert!(fiber_vert(&BoxCoords::new(vec![0, 0], vec![0, 0], 3), &d).is_err());
    }

    #[test]
    fn box_vertices_partition_the_fiber() {
        let b = [1, 0, 0, 1, 2];
        let d = decompose_rhs(&b).unwrap();
        let a2 = build_ak(2);
        let fiber = enumerate_fiber(a2.matrix(), &b).unwrap();
        let mut collected: Vec<IntVec> = Vec::new();
        for s in d.lower..=d.upper {
            let level = box_vertices(s, &d).unwrap();
            assert_eq!(level.len() as i128, level_size(s, &d).unwrap());
            collected.extend(level);
        }
        collected.sort();
        let mut expected: Vec<IntVec> = fiber.points().to_vec();
        expected.sort();
        assert_eq!(collected, expected);
    }

    #[test]
    fn level_sizes_multiply_interval_lengths() {
        let d = decompose_rhs(&[0, 0, 1]).unwrap();
        assert_eq!(level_size(0, &d).unwrap(), 2); // x ∈ {0}, y ∈ {0,1}
        assert_eq!(level_size(1, &d).unwrap(), 2);
        assert_eq!(total_size(&d).unwrap(), 4);
    }

    #[test]
    fn cross_move_form_and_applicability() {
        let g = graver_move(&[0], &[0]).unwrap();
        assert_eq!(g, vec![0, -1, 0, 1, -1, 1]);
        let g = graver_move(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(g, vec![-1, 0, 0, -1, 0, 1, 1, 0, -1, 1]);
        assert!(graver_move(&[2], &[0]).is_err());
        assert!(graver_move(&[], &[]).is_err());

        let d = decompose_rhs(&[0, 0, 2]).unwrap(); // k = 1, levels 0..2
        let mid = BoxCoords::new(vec![1], vec![1], 1);
        // Down with v¹ = 1 consumes x; fine since x = 1.
        assert!(is_applicable(&mid, &[1], &[0], Direction::Down, &d).unwrap());
        // Down with v¹ = 0 needs room in x² = s - x = 0: not applicable.
        assert!(!is_applicable(&mid, &[0], &[0], Direction::Down, &d).unwrap());
        // Up with v² = 1 consumes y = 1: fine.
        assert!(is_applicable(&mid, &[0], &[1], Direction::Up, &d).unwrap());
        // At the bottom level nothing goes down.
        let bottom = BoxCoords::new(vec![0], vec![2], 0);
        assert!(!is_applicable(&bottom, &[0], &[0], Direction::Down, &d).unwrap());
        // At the top level nothing goes up.
        let top = BoxCoords::new(vec![2], vec![0], 2);
        assert!(!is_applicable(&top, &[0], &[0], Direction::Up, &d).unwrap());
    }

    #[test]
    fn applicability_matches_graph_adjacency() {
        // Exhaustive cross-check on k = 1: the graph built from the full
        // move set has a cross edge exactly where is_applicable says so.
        let b = [1, -1, 3];
        let d = decompose_rhs(&b).unwrap();
        let a1 = build_ak(1);
        let fiber = enumerate_fiber(a1.matrix(), &b).unwrap();
        let fg = build_graph(&fiber, &graver_ak(1).unwrap()).unwrap();
        for u in 0..fiber.len() {
            let p = fiber.point(u);
            let bc = BoxCoords::new(vec![p[0]], vec![p[2]], p[4]);
            for v1 in 0..=1i64 {
                for v2 in 0..=1i64 {
                    for dir in [Direction::Down, Direction::Up] {
                        let ok = is_applicable(&bc, &[v1], &[v2], dir, &d).unwrap();
                        if ok {
                            let g = graver_move(&[v1], &[v2]).unwrap();
                            let sign = if dir == Direction::Down { 1 } else { -1 };
                            let q: IntVec =
                                p.iter().zip(&g).map(|(&a, &m)| a + sign * m).collect();
                            let t = fiber.index_of(&q).expect("target in fiber");
                            assert!(fg.graph().has_edge(u, t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cross_moves_are_kernel_vectors_and_conformally_minimal_shape() {
        // g(v¹, v²) lies in the kernel for every selector, and distinct
        // selectors give conformally incomparable vectors.
        let a2 = build_ak(2);
        let mut all: Vec<IntVec> = Vec::new();
        for bits in 0..16u32 {
            let v1 = vec![i64::from(bits & 1 != 0), i64::from(bits & 2 != 0)];
            let v2 = vec![i64::from(bits & 4 != 0), i64::from(bits & 8 != 0)];
            let g = graver_move(&v1, &v2).unwrap();
            assert!(a2.matrix().mul_vec(&g).unwrap().iter().all(|&x| x == 0));
            all.push(g);
        }
        for i in 0..all.len() {
            for j in 0..all.len() {
                if i != j {
                    assert!(!conformal_leq(&all[i], &all[j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn level_graphs_match_generic_construction() {
        // The geometric edge generation agrees with the generic build on
        // materialized move sets, for several decomposable right-hand sides.
        for b in [vec![0i64, 0, 1], vec![1, -1, 3], vec![0, 0, 0, 0, 2], vec![1, 0, -1, 1, 3]] {
            let d = decompose_rhs(&b).unwrap();
            let k = d.k;
            let inst = build_ak(k);
            let fiber = enumerate_fiber_with_budget(inst.matrix(), &b, 5000).unwrap();
            let lg = level_graphs(&d, 5000).unwrap();
            assert_eq!(lg.points.len(), fiber.len());

            // Map geometric points onto fiber indices and compare edges.
            let to_fiber: Vec<usize> = lg
                .points
                .iter()
                .map(|p| fiber.index_of(p).expect("same point set"))
                .collect();
            let remap = |g: &Graph| -> BTreeSet<(usize, usize)> {
                g.edges()
                    .into_iter()
                    .map(|(u, v)| {
                        let (a, b) = (to_fiber[u], to_fiber[v]);
                        (a.min(b), a.max(b))
                    })
                    .collect()
            };
            let full_ref = build_graph(&fiber, &graver_ak(k).unwrap()).unwrap();
            let lex_ref = build_graph(&fiber, &groebner_lex_ak(k).unwrap()).unwrap();
            let as_set = |g: &Graph| g.edges().into_iter().collect::<BTreeSet<_>>();
            assert_eq!(remap(&lg.full), as_set(full_ref.graph()), "full, b = {b:?}");
            assert_eq!(remap(&lg.lex), as_set(lex_ref.graph()), "lex, b = {b:?}");
        }
    }

    #[test]
    fn level_graphs_budget_is_enforced() {
        let d = decompose_rhs(&[2, 2, 2, 2, 4]).unwrap();
        assert!(level_graphs(&d, 10).is_err());
    }

    #[test]
    fn gap_witness_reports() {
        let r1 = verify_gap_witness(1).unwrap();
        assert!(r1.passed);
        assert!(!r1.is_gap_witness); // k = 1: min degree equals 1, no gap
        assert_eq!(r1.vertex_count, 4);
        assert_eq!(r1.min_degree, 1);

        let r2 = verify_gap_witness(2).unwrap();
        assert!(r2.passed && r2.is_gap_witness);
        assert_eq!(r2.vertex_count, 8);
        assert_eq!(r2.min_degree, 2);
        assert_eq!(r2.edge_connectivity, 1);
        assert_eq!(r2.vertex_connectivity, 1);
        assert_eq!(r2.cross_edge_count, 1);
        assert_eq!(r2.bridge.0, vec![0, 0, 0, 0, 0, 0, 1, 1, 0, 1]);
        assert_eq!(r2.bridge.1, vec![0, 0, 1, 1, 0, 0, 0, 0, 1, 0]);

        let r3 = verify_gap_witness(3).unwrap();
        assert!(r3.passed && r3.is_gap_witness);
        assert_eq!(r3.vertex_count, 16);
        assert_eq!(r3.min_degree, 3);
    }

    #[test]
    fn degree_match_at_unit_rhs() {
        // b = e_{2k+1}: closed form gives k + 2^k.
        let mut b = vec![0i64; 5];
        b[4] = 1;
        let r = verify_degree_match(2, &b).unwrap();
        assert!(r.passed);
        assert_eq!(r.min_degree, 2 + 4);
        assert_eq!(r.edge_connectivity, 6);
        assert_eq!(r.formula_value, 6);
        assert_eq!(r.cross_neighbor_floor, Some(4));
        assert!(r.vertex_connectivity <= r.edge_connectivity);
    }

    #[test]
    fn degree_match_multi_level() {
        let r = verify_degree_match(2, &[1, 0, 0, 1, 2]).unwrap();
        assert!(r.passed, "report: {r:?}");
        assert_eq!(r.min_degree, r.edge_connectivity);
        assert_eq!(r.formula_value, r.min_degree);
    }

    #[test]
    fn degree_match_single_level() {
        // l = u: within-level formula, no cross-neighbor constraint.
        let b = [-2, 1, -1, -1, 3];
        let d = decompose_rhs(&b).unwrap();
        assert_eq!(d.lower, d.upper);
        let r = verify_degree_match(2, &b).unwrap();
        assert!(r.passed, "report: {r:?}");
        assert_eq!(r.cross_neighbor_floor, None);
        // supp(w¹ + 2·1) = |{0+2≠0? 0, 1+2, ...}|: w¹ = (-2,1) + 2 = (0,3) → 1;
        // supp(w² + 1·1): w² = (-1,-1) + 1 = (0,0) → 0.
        assert_eq!(r.formula_value, 1);
    }

    #[test]
    fn degree_match_on_sampled_rhs() {
        for b in sample_rhs(2, 17, 4) {
            let r = verify_degree_match(2, &b).unwrap();
            assert!(r.passed, "b = {b:?}, report: {r:?}");
        }
    }

    #[test]
    fn sampler_is_deterministic_and_nonempty() {
        let a = sample_rhs(3, 42, 5);
        let b = sample_rhs(3, 42, 5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        for rhs in &a {
            assert_eq!(rhs.len(), 7);
            let d = decompose_rhs(rhs).unwrap();
            assert!(!d.is_empty());
            assert!(rhs[..6].iter().all(|&x| (-1..=2).contains(&x)));
            assert!((0..=4).contains(&rhs[6]));
        }
        assert_ne!(sample_rhs(3, 43, 5), a);
    }

    #[test]
    fn min_degree_formula_rejects_empty() {
        let d = decompose_rhs(&[-2, 0, 0, 0, 1]).unwrap();
        assert!(matches!(min_degree_formula(&d), Err(Error::EmptyFiber)));
    }

    #[test]
    fn normalized_cross_moves_match_move_set() {
        // The move-set family stores ± classes; every g(v¹,v²) must appear
        // there after sign normalization.
        let set = graver_ak(2).unwrap();
        for bits in 0..16u32 {
            let v1 = vec![i64::from(bits & 1 != 0), i64::from(bits & 2 != 0)];
            let v2 = vec![i64::from(bits & 4 != 0), i64::from(bits & 8 != 0)];
            let g = graver_move(&v1, &v2).unwrap();
            let norm = normalize_sign(g);
            assert!(set.moves().iter().any(|m| m.vec == norm));
        }
    }
}
