//! Exact integer linear algebra and fiber enumeration.
//!
//! The fiber of a matrix `A` at a right-hand side `b` is the set of
//! nonnegative integer solutions of `A u = b`. When `A` is pointed, meaning
//! its kernel meets the nonnegative orthant only in the origin, every fiber
//! is finite. This module provides the matrix/vector types, an exact integer
//! kernel basis, a pointedness decision procedure, and finite-fiber
//! enumeration. All arithmetic is 64-bit with overflow checking; overflow is
//! reported as an error, never wrapped.

use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Exact integer vector. Length is context dependent: `n` for fiber points
/// and moves, `d` for right-hand sides.
pub type IntVec = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("cannot certify a finite search bound for coordinate {coordinate}")]
    UnboundedSearch { coordinate: usize },
    #[error("matrix is not pointed: its kernel meets the nonnegative orthant")]
    PointednessViolated,
    #[error("fiber enumeration exceeded the budget of {budget} points")]
    BudgetExceeded { budget: usize },
    #[error("invalid shape: {0}")]
    BadShape(String),
}

/// Default cap on enumerated fiber points. Callers that knowingly work with
/// larger fibers use [`enumerate_fiber_with_budget`].
pub const DEFAULT_POINT_BUDGET: usize = 5000;

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, LatticeError> {
        if rows == 0 || cols == 0 {
            return Err(LatticeError::BadShape(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(LatticeError::BadShape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        if rows.is_empty() {
            return Err(LatticeError::BadShape("no rows given".into()));
        }
        let cols = rows[0].len();
        for r in rows {
            if r.len() != cols {
                return Err(LatticeError::BadShape("ragged rows".into()));
            }
        }
        IntMatrix::new(rows.len(), cols, rows.concat())
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        assert!(r < self.rows, "row index out of range");
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Checked matrix-vector product.
    pub fn mul_vec(&self, x: &[i64]) -> Result<IntVec, LatticeError> {
        if x.len() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        (0..self.rows).map(|r| checked_dot(self.row(r), x)).collect()
    }

    /// True iff `x >= 0` and `A x = b`.
    pub fn solves(&self, x: &[i64], b: &[i64]) -> Result<bool, LatticeError> {
        if b.len() != self.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        if x.iter().any(|&v| v < 0) {
            return Ok(false);
        }
        Ok(self.mul_vec(x)? == b)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Checked dot product of two equally long slices.
pub fn checked_dot(a: &[i64], b: &[i64]) -> Result<i64, LatticeError> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc: i64 = 0;
    for (&x, &y) in a.iter().zip(b) {
        let p = x.checked_mul(y).ok_or(LatticeError::Overflow)?;
        acc = acc.checked_add(p).ok_or(LatticeError::Overflow)?;
    }
    Ok(acc)
}

/// Checked componentwise sum.
pub fn checked_add(a: &[i64], b: &[i64]) -> Result<IntVec, LatticeError> {
    if a.len() != b.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).ok_or(LatticeError::Overflow))
        .collect()
}

/// Checked componentwise difference.
pub fn checked_sub(a: &[i64], b: &[i64]) -> Result<IntVec, LatticeError> {
    if a.len() != b.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_sub(y).ok_or(LatticeError::Overflow))
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ==== kernel basis ====================================================

/// Lattice basis of `ker(A) ∩ Z^n`, computed by exact integer elimination
/// on `[A^T | I]` followed by a Hermite-style row reduction. The returned
/// vectors are in row echelon form with positive pivots, so every integer
/// kernel point is an integer combination of them. Empty when the kernel is
/// trivial.
pub fn kernel_basis(a: &IntMatrix) -> Result<Vec<IntVec>, LatticeError> {
    let n = a.cols();
    let d = a.rows();
    // Working rows [A^T | I], one per variable.
    let mut work: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut row = Vec::with_capacity(d + n);
            for i in 0..d {
                row.push(a.get(i, j) as i128);
            }
            for jj in 0..n {
                row.push(if jj == j { 1 } else { 0 });
            }
            row
        })
        .collect();

    let mut pivot_rows = 0;
    for col in 0..d {
        loop {
            // Smallest nonzero entry in this column among unfixed rows.
            let mut best: Option<usize> = None;
            for r in pivot_rows..n {
                if work[r][col] != 0
                    && best.is_none_or(|b| work[r][col].abs() < work[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(p) = best else { break };
            work.swap(pivot_rows, p);
            let mut done = true;
            for r in pivot_rows + 1..n {
                if work[r][col] != 0 {
                    let q = work[r][col] / work[pivot_rows][col];
                    if q != 0 {
                        for c in 0..d + n {
                            let sub = work[pivot_rows][c]
                                .checked_mul(q)
                                .ok_or(LatticeError::Overflow)?;
                            work[r][c] =
                                work[r][c].checked_sub(sub).ok_or(LatticeError::Overflow)?;
                        }
                    }
                    if work[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                pivot_rows += 1;
                break;
            }
        }
    }

    // Rows whose transformed A^T part vanished carry kernel vectors.
    let mut kernel: Vec<Vec<i128>> = work
        .into_iter()
        .filter(|row| row[..d].iter().all(|&v| v == 0))
        .map(|row| row[d..].to_vec())
        .collect();
    hermite_reduce(&mut kernel)?;

    let mut out = Vec::with_capacity(kernel.len());
    for row in kernel {
        let v: Result<IntVec, _> = row
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| LatticeError::Overflow))
            .collect();
        out.push(v?);
    }
    debug_assert!(out
        .iter()
        .all(|v| a.mul_vec(v).map(|w| w.iter().all(|&x| x == 0)).unwrap_or(false)));
    Ok(out)
}

/// In-place Hermite-style reduction: row echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Canonical for a fixed row span.
fn hermite_reduce(rows: &mut Vec<Vec<i128>>) -> Result<(), LatticeError> {
    if rows.is_empty() {
        return Ok(());
    }
    let n = rows[0].len();
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in rank..rows.len() {
                if rows[r][col] != 0
                    && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(p) = best else { break };
            rows.swap(rank, p);
            let mut done = true;
            for r in rank + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = rows[r][col] / rows[rank][col];
                    for c in 0..n {
                        let sub = rows[rank][c].checked_mul(q).ok_or(LatticeError::Overflow)?;
                        rows[r][c] = rows[r][c].checked_sub(sub).ok_or(LatticeError::Overflow)?;
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if rows[rank][col] < 0 {
                    for c in 0..n {
                        rows[rank][c] = -rows[rank][c];
                    }
                }
                // Reduce entries above the pivot.
                for r in 0..rank {
                    let q = div_floor_i128(rows[r][col], rows[rank][col]);
                    if q != 0 {
                        for c in 0..n {
                            let sub =
                                rows[rank][c].checked_mul(q).ok_or(LatticeError::Overflow)?;
                            rows[r][c] =
                                rows[r][c].checked_sub(sub).ok_or(LatticeError::Overflow)?;
                        }
                    }
                }
                rank += 1;
                break;
            }
        }
    }
    rows.truncate(rank);
    Ok(())
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

// ==== pointedness =====================================================

/// Decides pointedness exactly: true iff `{x >= 0, A x = 0, sum(x) = 1}` has
/// no rational solution, by integer Fourier-Motzkin elimination. Inequality
/// rows are kept gcd-normalized and deduplicated to contain the blowup.
pub fn is_pointed(a: &IntMatrix) -> Result<bool, LatticeError> {
    let n = a.cols();
    // Rows (c, r) encode c . x >= r.
    let mut rows: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    let insert = |set: &mut BTreeSet<(Vec<i128>, i128)>, c: Vec<i128>, r: i128| {
        set.insert(normalize_ineq(c, r));
    };
    for j in 0..n {
        let mut e = vec![0i128; n];
        e[j] = 1;
        insert(&mut rows, e, 0);
    }
    for i in 0..a.rows() {
        let pos: Vec<i128> = a.row(i).iter().map(|&v| v as i128).collect();
        let neg: Vec<i128> = pos.iter().map(|&v| -v).collect();
        insert(&mut rows, pos, 0);
        insert(&mut rows, neg, 0);
    }
    insert(&mut rows, vec![1; n], 1);
    insert(&mut rows, vec![-1; n], -1);

    let mut alive: Vec<usize> = (0..n).collect();
    while let Some(&probe) = alive.first() {
        // Greedy choice: eliminate the variable with the fewest combinations.
        let mut choice = (i64::MAX, probe);
        for &j in &alive {
            let p = rows.iter().filter(|(c, _)| c[j] > 0).count() as i64;
            let q = rows.iter().filter(|(c, _)| c[j] < 0).count() as i64;
            let cost = p * q - (p + q);
            if cost < choice.0 {
                choice = (cost, j);
            }
        }
        let j = choice.1;
        let pos: Vec<(Vec<i128>, i128)> = rows.iter().filter(|(c, _)| c[j] > 0).cloned().collect();
        let neg: Vec<(Vec<i128>, i128)> = rows.iter().filter(|(c, _)| c[j] < 0).cloned().collect();
        rows.retain(|(c, _)| c[j] == 0);
        for (cp, rp) in &pos {
            for (cn, rn) in &neg {
                let s = cp[j];
                let t = -cn[j];
                let mut c = Vec::with_capacity(n);
                for i in 0..n {
                    let lhs = t.checked_mul(cp[i]).ok_or(LatticeError::Overflow)?;
                    let rhs = s.checked_mul(cn[i]).ok_or(LatticeError::Overflow)?;
                    c.push(lhs.checked_add(rhs).ok_or(LatticeError::Overflow)?);
                }
                let r = t
                    .checked_mul(*rp)
                    .ok_or(LatticeError::Overflow)?
                    .checked_add(s.checked_mul(*rn).ok_or(LatticeError::Overflow)?)
                    .ok_or(LatticeError::Overflow)?;
                if c.iter().all(|&v| v == 0) {
                    if r > 0 {
                        // Derived 0 >= r > 0: system infeasible, A is pointed.
                        return Ok(true);
                    }
                    continue;
                }
                rows.insert(normalize_ineq(c, r));
            }
        }
        alive.retain(|&v| v != j);
    }
    // All variables eliminated without contradiction: feasible, not pointed.
    Ok(false)
}

fn normalize_ineq(mut c: Vec<i128>, mut r: i128) -> (Vec<i128>, i128) {
    let mut g = r;
    for &v in &c {
        g = gcd(g, v);
    }
    if g > 1 {
        for v in &mut c {
            *v /= g;
        }
        r /= g;
    }
    (c, r)
}

// ==== fiber enumeration ===============================================

/// A finite fiber: all nonnegative integer points `u` with `A u = b`,
/// sorted lexicographically ascending with a point-to-ordinal index.
#[derive(Debug, Clone)]
pub struct Fiber {
    matrix: IntMatrix,
    rhs: IntVec,
    points: Vec<IntVec>,
    index: HashMap<IntVec, usize>,
}

impl Fiber {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    /// Ordinal of a point in the canonical order, if it lies in the fiber.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.index.contains_key(p)
    }

    /// Builds a fiber from pre-enumerated points (sorted and validated).
    pub(crate) fn from_points(
        matrix: IntMatrix,
        rhs: IntVec,
        points: Vec<IntVec>,
    ) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Fiber { matrix, rhs, points, index }
    }
}

/// Certified per-coordinate upper bounds for the nonnegative solutions of
/// `A x = b`, by fixpoint interval propagation over the rows. A coordinate
/// whose bound cannot be certified is reported as `UnboundedSearch`; a
/// negative bound means the fiber is empty.
pub fn coordinate_bounds(a: &IntMatrix, b: &[i64]) -> Result<Vec<i64>, LatticeError> {
    if b.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let n = a.cols();
    let d = a.rows();
    let mut upper: Vec<Option<i64>> = vec![None; n];
    for _pass in 0..64 {
        let mut changed = false;
        for l in 0..d {
            let row = a.row(l);
            for j in 0..n {
                let coef = row[j];
                if coef == 0 {
                    continue;
                }
                // coef * x_j = b_l - T where T sums the other terms.
                // For coef > 0 we need an upper bound on the right side,
                // hence lower bounds on positively signed partners (zero)
                // and upper bounds on negatively signed ones. For coef < 0
                // the roles flip.
                let mut extreme: i128 = b[l] as i128;
                let mut ok = true;
                for jj in 0..n {
                    if jj == j || row[jj] == 0 {
                        continue;
                    }
                    let want_upper = (row[jj] < 0) == (coef > 0);
                    if want_upper {
                        match upper[jj] {
                            Some(u) => extreme -= row[jj] as i128 * u as i128,
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    // Partners at their lower bound 0 contribute nothing.
                }
                if !ok {
                    continue;
                }
                let bound128 = div_floor_i128(extreme, coef as i128);
                let bound = i64::try_from(bound128.clamp(-1, i64::MAX as i128))
                    .map_err(|_| LatticeError::Overflow)?;
                if upper[j].is_none_or(|u| bound < u) {
                    upper[j] = Some(bound);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    upper
        .into_iter()
        .enumerate()
        .map(|(j, u)| u.ok_or(LatticeError::UnboundedSearch { coordinate: j }))
        .collect()
}

/// Enumerates the fiber of `(A, b)` with the default point budget.
pub fn enumerate_fiber(a: &IntMatrix, b: &[i64]) -> Result<Fiber, LatticeError> {
    enumerate_fiber_with_budget(a, b, DEFAULT_POINT_BUDGET)
}

/// Enumerates the fiber of `(A, b)` by depth-first search over coordinates
/// with interval constraint propagation on the remaining equations. Exact:
/// returns precisely `{u >= 0 : A u = b}`, sorted lexicographically. The
/// pointedness precondition is checked whenever propagation fails to certify
/// finite bounds, distinguishing a non-pointed matrix from a propagation gap.
pub fn enumerate_fiber_with_budget(
    a: &IntMatrix,
    b: &[i64],
    budget: usize,
) -> Result<Fiber, LatticeError> {
    let upper = match coordinate_bounds(a, b) {
        Ok(u) => u,
        Err(LatticeError::UnboundedSearch { coordinate }) => {
            if !is_pointed(a)? {
                return Err(LatticeError::PointednessViolated);
            }
            return Err(LatticeError::UnboundedSearch { coordinate });
        }
        Err(e) => return Err(e),
    };
    let n = a.cols();
    let d = a.rows();

    // Suffix interval of sum_{j>i} A[l][j] x_j given 0 <= x_j <= upper[j].
    let mut suffix_lo = vec![vec![0i128; n + 1]; d];
    let mut suffix_hi = vec![vec![0i128; n + 1]; d];
    for l in 0..d {
        for i in (0..n).rev() {
            let coef = a.get(l, i) as i128;
            let u = upper[i].max(0) as i128;
            suffix_lo[l][i] = suffix_lo[l][i + 1] + if coef < 0 { coef * u } else { 0 };
            suffix_hi[l][i] = suffix_hi[l][i + 1] + if coef > 0 { coef * u } else { 0 };
        }
    }

    let mut points: Vec<IntVec> = Vec::new();
    let mut current = vec![0i64; n];
    let mut residual: Vec<i64> = b.to_vec();
    dfs_enumerate(
        a,
        &upper,
        &suffix_lo,
        &suffix_hi,
        budget,
        0,
        &mut current,
        &mut residual,
        &mut points,
    )?;
    debug_assert!(points
        .iter()
        .all(|p| a.solves(p, b).unwrap_or(false)));
    Ok(Fiber::from_points(a.clone(), b.to_vec(), points))
}

#[allow(clippy::too_many_arguments)]
fn dfs_enumerate(
    a: &IntMatrix,
    upper: &[i64],
    suffix_lo: &[Vec<i128>],
    suffix_hi: &[Vec<i128>],
    budget: usize,
    depth: usize,
    current: &mut Vec<i64>,
    residual: &mut Vec<i64>,
    points: &mut Vec<IntVec>,
) -> Result<(), LatticeError> {
    let n = a.cols();
    let d = a.rows();
    if depth == n {
        if residual.iter().all(|&r| r == 0) {
            if points.len() == budget {
                return Err(LatticeError::BudgetExceeded { budget });
            }
            points.push(current.clone());
        }
        return Ok(());
    }
    // Intersect the interval for x_depth over all rows.
    let mut lo: i64 = 0;
    let mut hi: i64 = upper[depth];
    for l in 0..d {
        let coef = a.get(l, depth);
        let rest_lo = suffix_lo[l][depth + 1];
        let rest_hi = suffix_hi[l][depth + 1];
        let r = residual[l] as i128;
        if coef == 0 {
            // Row must stay satisfiable by the remaining coordinates.
            if r < rest_lo || r > rest_hi {
                return Ok(());
            }
            continue;
        }
        // coef * x in [r - rest_hi, r - rest_lo]
        let (a128, b128) = (r - rest_hi, r - rest_lo);
        let (row_lo, row_hi) = if coef > 0 {
            (
                div_ceil_i128(a128, coef as i128),
                div_floor_i128(b128, coef as i128),
            )
        } else {
            (
                div_ceil_i128(b128, coef as i128),
                div_floor_i128(a128, coef as i128),
            )
        };
        lo = lo.max(row_lo.clamp(i64::MIN as i128, i64::MAX as i128) as i64);
        hi = hi.min(row_hi.clamp(i64::MIN as i128, i64::MAX as i128) as i64);
        if lo > hi {
            return Ok(());
        }
    }
    for v in lo..=hi {
        current[depth] = v;
        for l in 0..d {
            let delta = (a.get(l, depth) as i128) * (v as i128);
            let next = residual[l] as i128 - delta;
            residual[l] = i64::try_from(next).map_err(|_| LatticeError::Overflow)?;
        }
        dfs_enumerate(
            a, upper, suffix_lo, suffix_hi, budget, depth + 1, current, residual, points,
        )?;
        for l in 0..d {
            let delta = (a.get(l, depth) as i128) * (v as i128);
            let next = residual[l] as i128 + delta;
            residual[l] = i64::try_from(next).map_err(|_| LatticeError::Overflow)?;
        }
    }
    current[depth] = 0;
    Ok(())
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}
