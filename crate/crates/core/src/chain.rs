//! Metropolis random walks on graphs: symmetric transition matrices, the
//! second-largest eigenvalue modulus, relaxation and asymptotic mixing
//! scales, exact total-variation mixing by iterated multiplication, and
//! the two experiment sweeps over the structured matrix family.

use crate::akfamily::{decompose_rhs, level_graphs};
use crate::error::Error;
use crate::graph::Graph;
use crate::lattice::LatticeError;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Chains up to this size use the dense symmetric eigensolver; larger ones
/// fall back to deflated power iteration.
pub const DENSE_EIGEN_CUTOFF: usize = 3000;
/// Relative Rayleigh-quotient tolerance for the power iteration.
pub const POWER_TOL: f64 = 1e-9;
const MAX_POWER_ITERS: usize = 500_000;
const MAX_TV_STEPS: usize = 100_000;
/// Default cap on fiber sizes in the sweep experiments.
pub const DEFAULT_SWEEP_POINT_CAP: usize = 200_000;

/// Tag recording which analytic mixing-scale definition the asymptotic
/// `time` columns use: `-1 / ln μ`.
pub const MIXING_DEFINITION: &str = "neg_inverse_log";

/// A symmetric stochastic matrix stored as sorted off-diagonal rows plus a
/// diagonal. Rows sum to 1 within 1e-12, off-diagonal entries are nonzero
/// exactly where the generating graph has edges.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(u32, f64)>>,
    diag: Vec<f64>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        match self.rows[i].binary_search_by_key(&(j as u32), |&(c, _)| c) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => 0.0,
        }
    }

    /// Number of nonzero off-diagonal entries (twice the edge count).
    pub fn off_diagonal_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            m[(i, i)] = self.diag[i];
            for &(c, p) in row {
                m[(i, c as usize)] = p;
            }
        }
        m
    }

    /// Validates and converts a dense matrix: square by construction, and
    /// it must be entrywise nonnegative, symmetric, and row-stochastic
    /// within 1e-12.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self, Error> {
        let (nr, nc) = m.shape();
        if nr != nc {
            return Err(Error::BadTransitionMatrix(format!("shape {nr}x{nc} is not square")));
        }
        let n = nr;
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        let mut diag = vec![0.0; n];
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                let p = m[(i, j)];
                if p < 0.0 {
                    return Err(Error::BadTransitionMatrix(format!(
                        "negative entry {p} at ({i}, {j})"
                    )));
                }
                if (p - m[(j, i)]).abs() > 1e-12 {
                    return Err(Error::BadTransitionMatrix(format!(
                        "asymmetric at ({i}, {j}): {p} vs {}",
                        m[(j, i)]
                    )));
                }
                sum += p;
                if i == j {
                    diag[i] = p;
                } else if p != 0.0 {
                    rows[i].push((j as u32, p));
                }
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::BadTransitionMatrix(format!("row {i} sums to {sum}")));
            }
        }
        Ok(TransitionMatrix { rows, diag })
    }

    /// out = P·v (equals vᵀP by symmetry).
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = self.diag[i] * v[i];
            for &(c, p) in row {
                acc += p * v[c as usize];
            }
            out[i] = acc;
        }
    }
}

/// The Metropolis chain targeting the uniform distribution on a graph:
/// `p_uv = min(1/deg(u), 1/deg(v))` on edges, remainder on the diagonal.
pub fn metropolis_matrix(g: &Graph) -> Result<TransitionMatrix, Error> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n == 1 {
        return Ok(TransitionMatrix { rows: vec![Vec::new()], diag: vec![1.0] });
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex { vertex: v });
    }
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for u in 0..n {
        let du = g.degree(u) as f64;
        let row: Vec<(u32, f64)> = g
            .neighbors(u)
            .iter()
            .map(|&v| (v, (1.0 / du).min(1.0 / g.degree(v as usize) as f64)))
            .collect();
        let off: f64 = row.iter().map(|&(_, p)| p).sum();
        debug_assert!(off <= 1.0 + 1e-12, "off-diagonal mass exceeds 1");
        rows.push(row);
        diag.push((1.0 - off).max(0.0));
    }
    Ok(TransitionMatrix { rows, diag })
}

// ==== second-largest eigenvalue modulus ===============================

/// The second-largest eigenvalue modulus μ of a symmetric stochastic
/// matrix: dense eigensolve up to the cutoff, deflated power iteration
/// above it.
pub fn slem(p: &TransitionMatrix) -> Result<f64, Error> {
    let n = p.size();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n == 1 {
        return Ok(0.0);
    }
    if n <= DENSE_EIGEN_CUTOFF {
        slem_dense(p)
    } else {
        slem_power(p, 0x5eed)
    }
}

fn slem_dense(p: &TransitionMatrix) -> Result<f64, Error> {
    let mut evs: Vec<f64> = p.to_dense().symmetric_eigenvalues().iter().copied().collect();
    evs.sort_by(|a, b| b.partial_cmp(a).expect("real spectrum"));
    // evs[0] is the Perron eigenvalue ≈ 1; μ is the largest remaining modulus.
    let n = evs.len();
    Ok(evs[1].abs().max(evs[n - 1].abs()).min(1.0))
}

/// Power iteration on B² where B = P - J/n is the uniform-deflated
/// operator; squaring avoids oscillation between ±μ. The start vector is
/// seeded, so results are deterministic.
pub(crate) fn slem_power(p: &TransitionMatrix, seed: u64) -> Result<f64, Error> {
    let n = p.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    center(&mut v);
    if !normalize(&mut v) {
        return Ok(0.0);
    }
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut prev = f64::INFINITY;
    for it in 0..MAX_POWER_ITERS {
        p.apply(&v, &mut w);
        center(&mut w);
        p.apply(&w, &mut z);
        center(&mut z);
        // v is unit, so the Rayleigh quotient of B² is v·z.
        let rho: f64 = v.iter().zip(&z).map(|(a, b)| a * b).sum();
        std::mem::swap(&mut v, &mut z);
        if !normalize(&mut v) {
            return Ok(0.0);
        }
        if (rho - prev).abs() <= POWER_TOL * rho.abs().max(1e-30) {
            return Ok(rho.max(0.0).sqrt().min(1.0));
        }
        prev = rho;
        let _ = it;
    }
    Err(Error::NoConvergence { iterations: MAX_POWER_ITERS })
}

/// Projects out the known top eigenvector (the constant vector).
fn center(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

/// Scales to unit norm; false if the vector is numerically zero.
fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}

// ==== mixing summaries ================================================

/// Spectral and total-variation mixing summary of one chain.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub size: usize,
    /// Second-largest eigenvalue modulus μ.
    pub slem: f64,
    /// 1 / (1 - μ).
    pub relaxation_time: f64,
    /// -1 / ln μ: the asymptotic decay scale of μᵗ, and the definition the
    /// `time` columns of the sweeps use.
    pub alt_time: f64,
    /// ε → min{t : max_i ‖P^t(i,·) - uniform‖_TV ≤ ε}, exact.
    pub tv_mixing: BTreeMap<String, usize>,
    pub definition_used: &'static str,
}

/// The asymptotic mixing scale `-1 / ln μ` (0 when μ = 0, infinite when
/// μ ≥ 1).
pub fn mixing_scale(mu: f64) -> f64 {
    if mu <= 0.0 {
        0.0
    } else if mu >= 1.0 {
        f64::INFINITY
    } else {
        -1.0 / mu.ln()
    }
}

/// Computes the spectral summary and, for each requested ε, the exact
/// total-variation mixing step count by iterated multiplication. TV is
/// only attempted on chains up to the dense cutoff; pass no epsilons to
/// skip it.
pub fn mixing_times(p: &TransitionMatrix, epsilons: &[f64]) -> Result<SpectralReport, Error> {
    let n = p.size();
    let mu = slem(p)?;
    let relaxation_time = if mu >= 1.0 { f64::INFINITY } else { 1.0 / (1.0 - mu) };
    let alt_time = mixing_scale(mu);
    let mut tv_mixing = BTreeMap::new();
    if !epsilons.is_empty() {
        if n > DENSE_EIGEN_CUTOFF {
            return Err(LatticeError::BudgetExceeded { budget: DENSE_EIGEN_CUTOFF }.into());
        }
        let mut pending: Vec<f64> = epsilons.to_vec();
        pending.sort_by(|a, b| b.partial_cmp(a).expect("finite epsilons"));
        pending.dedup();
        // M = P^t as dense rows, advanced by sparse right-multiplication.
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        let mut next: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
        let uniform = 1.0 / n as f64;
        let mut prev_dist = f64::INFINITY;
        let mut t = 0usize;
        let mut queue = pending.into_iter().peekable();
        loop {
            let dist = m
                .iter()
                .map(|row| row.iter().map(|&x| (x - uniform).abs()).sum::<f64>() * 0.5)
                .fold(0.0f64, f64::max);
            debug_assert!(
                dist <= prev_dist + 1e-12,
                "TV distance must be nonincreasing: {dist} after {prev_dist}"
            );
            prev_dist = dist;
            while queue.peek().is_some_and(|&eps| dist <= eps) {
                let eps = queue.next().expect("peeked");
                tv_mixing.insert(format!("{eps}"), t);
            }
            if queue.peek().is_none() {
                break;
            }
            if t >= MAX_TV_STEPS {
                return Err(Error::NoConvergence { iterations: MAX_TV_STEPS });
            }
            for (mrow, nrow) in m.iter().zip(next.iter_mut()) {
                nrow.iter_mut().for_each(|x| *x = 0.0);
                for (j, &mass) in mrow.iter().enumerate() {
                    if mass == 0.0 {
                        continue;
                    }
                    nrow[j] += mass * p.diag[j];
                    for &(c, q) in &p.rows[j] {
                        nrow[c as usize] += mass * q;
                    }
                }
            }
            std::mem::swap(&mut m, &mut next);
            t += 1;
        }
    }
    Ok(SpectralReport {
        size: n,
        slem: mu,
        relaxation_time,
        alt_time,
        tv_mixing,
        definition_used: MIXING_DEFINITION,
    })
}

// ==== experiment sweeps ===============================================

/// One sweep row: the instance index (k or λ) and the SLEM / asymptotic
/// time of the walks under the full and the lex move family.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: i64,
    pub slem_graver: f64,
    pub slem_groebner: f64,
    pub time_graver: f64,
    pub time_groebner: f64,
}

/// A sweep result; `index_label` names the first CSV column.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub index_label: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Five-column CSV with 6-significant-digit numeric formatting.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "{},slem_graver,slem_groebner,time_graver,time_groebner\n",
            self.index_label
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.index,
                sig6(r.slem_graver),
                sig6(r.slem_groebner),
                sig6(r.time_graver),
                sig6(r.time_groebner)
            ));
        }
        out
    }
}

/// Formats with 6 significant digits (fixed-point, no exponents).
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn unit_rhs(k: usize, scale: i64) -> Vec<i64> {
    let mut b = vec![0i64; 2 * k + 1];
    b[2 * k] = scale;
    b
}

fn sweep_row(index: i64, b: &[i64], max_points: usize) -> Result<SweepRow, Error> {
    let d = decompose_rhs(b)?;
    let lg = level_graphs(&d, max_points)?;
    let mu_full = slem(&metropolis_matrix(&lg.full)?)?;
    let mu_lex = slem(&metropolis_matrix(&lg.lex)?)?;
    Ok(SweepRow {
        index,
        slem_graver: mu_full,
        slem_groebner: mu_lex,
        time_graver: mixing_scale(mu_full),
        time_groebner: mixing_scale(mu_lex),
    })
}

/// SLEM and asymptotic time of both walks on the fiber at the unit
/// right-hand side, for k = 1..k_max.
pub fn sweep_by_k(k_max: usize, max_points: usize) -> Result<SweepTable, Error> {
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        rows.push(sweep_row(k as i64, &unit_rhs(k, 1), max_points)?);
    }
    Ok(SweepTable { index_label: "k".to_string(), rows })
}

/// SLEM and asymptotic time of both walks on the k = 3 member's fiber at
/// scaled right-hand sides λ·e₇, for λ = 1..lambda_max.
pub fn sweep_by_scale(lambda_max: i64, max_points: usize) -> Result<SweepTable, Error> {
    let mut rows = Vec::with_capacity(lambda_max.max(0) as usize);
    for lambda in 1..=lambda_max {
        rows.push(sweep_row(lambda, &unit_rhs(3, lambda), max_points)?);
    }
    Ok(SweepTable { index_label: "lambda".to_string(), rows })
}
