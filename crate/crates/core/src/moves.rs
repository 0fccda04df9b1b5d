//! Move sets: finite collections of nonzero integer kernel vectors that
//! generate walks on fibers.
//!
//! A move set stores one representative per `{v, -v}` pair — the
//! lexicographically larger vector — and graph construction applies both
//! signs. Two families for the block matrices of [`crate::akfamily`] are
//! materialized in closed form; an exhaustive bounded-box oracle recovers
//! the conformally minimal kernel vectors of any small matrix, together with
//! a certificate that the search radius lost nothing in the tested range.

use crate::akfamily::build_ak;
use crate::error::Error;
use crate::lattice::{enumerate_fiber, kernel_basis, IntMatrix, IntVec, LatticeError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Default cap on the number of signed vectors a constructed move set may
/// hold (the closed-form family doubles exponentially in `k`).
pub const DEFAULT_MOVE_SET_CAP: usize = 1 << 18;

/// Default cap on search nodes visited by the bounded-box kernel oracle.
pub const DEFAULT_ORACLE_BUDGET: usize = 10_000_000;

/// Provenance of a move set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    Graver,
    GroebnerLex,
    Oracle,
    Custom,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MoveKind::Graver => "graver",
            MoveKind::GroebnerLex => "groebner-lex",
            MoveKind::Oracle => "oracle",
            MoveKind::Custom => "custom",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "graver" => Ok(MoveKind::Graver),
            "groebner-lex" => Ok(MoveKind::GroebnerLex),
            "oracle" => Ok(MoveKind::Oracle),
            "custom" => Ok(MoveKind::Custom),
            other => Err(Error::Parse(format!("unknown move-set kind: {other}"))),
        }
    }
}

/// A single walk direction: a nonzero kernel vector of the matrix it is
/// registered against, tagged with the provenance of its set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Move {
    pub vec: IntVec,
    pub provenance: MoveKind,
}

/// An ordered set of moves for one matrix. Vectors are stored
/// sign-normalized (lexicographically larger representative of each `±`
/// pair), sorted, and deduplicated; every vector lies in the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveSet {
    matrix: IntMatrix,
    kind: MoveKind,
    moves: Vec<Move>,
}

/// The lexicographically larger of `v` and `-v`: first nonzero entry
/// positive.
pub fn normalize_sign(mut v: IntVec) -> IntVec {
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            for x in &mut v {
                *x = -*x;
            }
        }
    }
    v
}

impl MoveSet {
    /// Validates, sign-normalizes, sorts, and deduplicates the given
    /// vectors. Error indices refer to the input order.
    pub fn new(matrix: IntMatrix, kind: MoveKind, vectors: Vec<IntVec>) -> Result<Self, Error> {
        let mut normalized = Vec::with_capacity(vectors.len());
        for (index, v) in vectors.into_iter().enumerate() {
            if v.len() != matrix.cols() {
                return Err(LatticeError::DimensionMismatch {
                    expected: matrix.cols(),
                    got: v.len(),
                }
                .into());
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::ZeroMove { index });
            }
            if matrix.mul_vec(&v)?.iter().any(|&x| x != 0) {
                return Err(Error::MoveNotInKernel { index });
            }
            normalized.push(normalize_sign(v));
        }
        normalized.sort();
        normalized.dedup();
        let moves = normalized
            .into_iter()
            .map(|vec| Move { vec, provenance: kind })
            .collect();
        Ok(MoveSet { matrix, kind, moves })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> MoveKind {
        self.kind
    }

    /// Number of stored representatives (one per `±` pair).
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Number of vectors counting both signs.
    pub fn signed_count(&self) -> usize {
        2 * self.moves.len()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[i64]> {
        self.moves.iter().map(|m| m.vec.as_slice())
    }

    /// All vectors with both signs, as a set.
    pub fn signed_set(&self) -> BTreeSet<IntVec> {
        let mut out = BTreeSet::new();
        for m in &self.moves {
            out.insert(m.vec.clone());
            out.insert(m.vec.iter().map(|&x| -x).collect());
        }
        out
    }

    /// Membership up to sign.
    pub fn contains_signed(&self, v: &[i64]) -> bool {
        let rep = normalize_sign(v.to_vec());
        self.moves.binary_search_by(|m| m.vec.as_slice().cmp(rep.as_slice())).is_ok()
    }
}

// ==== conformal order =================================================

/// The conformal partial order: `u ⊑ v` iff no entry of `u` opposes the
/// sign of `v`'s entry and every entry is dominated in absolute value.
pub fn conformal_leq(u: &[i64], v: &[i64]) -> Result<bool, Error> {
    if u.len() != v.len() {
        return Err(LatticeError::DimensionMismatch { expected: v.len(), got: u.len() }.into());
    }
    Ok(u.iter().zip(v).all(|(&a, &b)| a == 0 || ((a > 0) == (b > 0) && a.abs() <= b.abs())))
}

/// Support indicator of a nonnegative vector: 1 where the entry is nonzero.
pub fn chi(v: &[i64]) -> Result<IntVec, Error> {
    if let Some(coordinate) = v.iter().position(|&x| x < 0) {
        return Err(Error::NegativeInput { coordinate });
    }
    Ok(v.iter().map(|&x| (x != 0) as i64).collect())
}

// ==== bounded-box oracle ==============================================

/// Result of the bounded-box oracle: the conformally minimal kernel vectors
/// found within the search radius, and a completeness certificate.
/// `complete` is true when every nonzero kernel point within twice the
/// radius is conformally dominated by a returned vector — a proof that no
/// minimal element was cut off at the radius for the tested range.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub set: MoveSet,
    pub complete: bool,
}

/// Conformally minimal nonzero kernel vectors of `a` with sup-norm at most
/// `radius`, by exhaustive enumeration, with the default node budget.
pub fn graver_oracle(a: &IntMatrix, radius: i64) -> Result<OracleReport, Error> {
    graver_oracle_with_budget(a, radius, DEFAULT_ORACLE_BUDGET)
}

/// See [`graver_oracle`]; `budget` caps the number of enumeration nodes
/// across both the radius and double-radius passes.
pub fn graver_oracle_with_budget(
    a: &IntMatrix,
    radius: i64,
    budget: usize,
) -> Result<OracleReport, Error> {
    if radius < 1 {
        return Err(LatticeError::BadShape("oracle radius must be at least 1".into()).into());
    }
    let basis = kernel_basis(a)?;
    if basis.is_empty() {
        let set = MoveSet::new(a.clone(), MoveKind::Oracle, Vec::new())?;
        return Ok(OracleReport { set, complete: true });
    }
    let mut nodes = 0usize;
    let points = kernel_points_in_box(&basis, radius, budget, &mut nodes)?;
    let minimal = minimal_filter(points);

    // Certificate pass: every kernel point within twice the radius must be
    // dominated by some minimal vector (a minimal element in that ring
    // would itself be undominated, so none was missed).
    let ring = kernel_points_in_box(&basis, 2 * radius, budget, &mut nodes)?;
    let complete = ring.iter().all(|q| {
        minimal
            .iter()
            .any(|m| conformal_leq(m, q).expect("equal lengths"))
    });

    let set = MoveSet::new(a.clone(), MoveKind::Oracle, minimal)?;
    Ok(OracleReport { set, complete })
}

/// Keeps exactly the conformally minimal vectors of a set of nonzero
/// points. Sorting by 1-norm first makes a single forward scan sufficient:
/// any dominator of `v` is strictly smaller in 1-norm, and if a dominator
/// exists then a minimal one does.
fn minimal_filter(mut points: Vec<IntVec>) -> Vec<IntVec> {
    points.sort_by_key(|v| (v.iter().map(|&x| x.abs()).sum::<i64>(), v.clone()));
    points.dedup();
    let mut minimal: Vec<IntVec> = Vec::new();
    for v in points {
        let dominated = minimal
            .iter()
            .any(|u| conformal_leq(u, &v).expect("equal lengths"));
        if !dominated {
            minimal.push(v);
        }
    }
    minimal.sort();
    minimal
}

/// All nonzero integer kernel points with sup-norm at most `radius`, by
/// depth-first search over coefficients of the echelon kernel basis: the
/// pivot structure pins each coefficient to a bounded interval, and
/// coordinates become final as soon as no later basis row can touch them.
fn kernel_points_in_box(
    basis: &[IntVec],
    radius: i64,
    budget: usize,
    nodes: &mut usize,
) -> Result<Vec<IntVec>, Error> {
    let n = basis[0].len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|v| v.iter().position(|&x| x != 0).expect("nonzero basis row"))
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0i128; n];
    search(
        basis, &pivots, radius as i128, budget, 0, &mut current, &mut out, nodes,
    )?;
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    basis: &[IntVec],
    pivots: &[usize],
    radius: i128,
    budget: usize,
    depth: usize,
    current: &mut Vec<i128>,
    out: &mut Vec<IntVec>,
    nodes: &mut usize,
) -> Result<(), Error> {
    let n = current.len();
    let r = basis.len();
    if depth == r {
        if current.iter().any(|&x| x != 0) {
            debug_assert!(current.iter().all(|&x| x.abs() <= radius));
            out.push(current.iter().map(|&x| x as i64).collect());
        }
        return Ok(());
    }
    let p = pivots[depth];
    let piv = basis[depth][p] as i128;
    debug_assert!(piv > 0, "echelon pivots are positive");
    // t must keep coordinate p inside the box; later rows cannot change it.
    let lo = div_ceil_i128(-radius - current[p], piv);
    let hi = div_floor_i128(radius - current[p], piv);
    // Coordinates final after this level: everything before the next pivot.
    let final_until = if depth + 1 < r { pivots[depth + 1] } else { n };
    for t in lo..=hi {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BoxTooLarge { budget });
        }
        for c in p..n {
            current[c] += t * basis[depth][c] as i128;
        }
        if current[p..final_until].iter().all(|&x| x.abs() <= radius) {
            search(basis, pivots, radius, budget, depth + 1, current, out, nodes)?;
        }
        for c in p..n {
            current[c] -= t * basis[depth][c] as i128;
        }
    }
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

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

// ==== closed-form families ============================================

/// The full conformally minimal move family of the block matrix of
/// [`build_ak`], in closed form: the `2^{2k}` cross-level moves
/// `(v1, 1-v1, -v2, v2-1, 1, -1)` over all 0/1 choices of `v1, v2`, plus
/// the `2k` slacked standard moves inside each block. Signed cardinality is
/// `2^{2k+1} + 4k`.
pub fn graver_ak(k: usize) -> Result<MoveSet, Error> {
    graver_ak_with_cap(k, DEFAULT_MOVE_SET_CAP)
}

/// See [`graver_ak`]; `cap` bounds the signed vector count.
pub fn graver_ak_with_cap(k: usize, cap: usize) -> Result<MoveSet, Error> {
    assert!(k >= 1, "k must be at least 1");
    assert!(k < 30, "family size overflows usize");
    let signed = (1usize << (2 * k + 1)) + 4 * k;
    if signed > cap {
        return Err(Error::SizeBudgetExceeded { size: signed, cap });
    }
    let n = 4 * k + 2;
    let mut vecs = Vec::with_capacity((1 << (2 * k)) + 2 * k);
    for m1 in 0..1u64 << k {
        for m2 in 0..1u64 << k {
            let mut v = vec![0i64; n];
            for i in 0..k {
                let b1 = ((m1 >> i) & 1) as i64;
                let b2 = ((m2 >> i) & 1) as i64;
                v[i] = b1;
                v[k + i] = 1 - b1;
                v[2 * k + i] = -b2;
                v[3 * k + i] = b2 - 1;
            }
            v[4 * k] = 1;
            v[4 * k + 1] = -1;
            vecs.push(v);
        }
    }
    vecs.extend(standard_block_moves(k));
    MoveSet::new(build_ak(k).matrix().clone(), MoveKind::Graver, vecs)
}

/// The lexicographic reduced basis for the same matrix: the single
/// cross-level move `(0, 1_k, 0, -1_k, 1, -1)` plus the `2k` slacked
/// standard moves; `2k + 1` vectors in total.
pub fn groebner_lex_ak(k: usize) -> Result<MoveSet, Error> {
    assert!(k >= 1, "k must be at least 1");
    let n = 4 * k + 2;
    let mut cross = vec![0i64; n];
    for i in 0..k {
        cross[k + i] = 1;
        cross[3 * k + i] = -1;
    }
    cross[4 * k] = 1;
    cross[4 * k + 1] = -1;
    let mut vecs = vec![cross];
    vecs.extend(standard_block_moves(k));
    MoveSet::new(build_ak(k).matrix().clone(), MoveKind::GroebnerLex, vecs)
}

/// The two slacked standard-basis families: `e_i - e_{k+i}` in the first
/// block pair and `e_i - e_{k+i}` in the second, zero elsewhere.
fn standard_block_moves(k: usize) -> Vec<IntVec> {
    let n = 4 * k + 2;
    let mut vecs = Vec::with_capacity(2 * k);
    for block in 0..2 {
        for i in 0..k {
            let mut v = vec![0i64; n];
            v[2 * k * block + i] = 1;
            v[2 * k * block + k + i] = -1;
            vecs.push(v);
        }
    }
    vecs
}

// ==== Markov-basis sampling ===========================================

/// Necessary-condition sampler: true iff the fiber graph of every sampled
/// right-hand side with a nonempty fiber is connected under `m`. A `true`
/// is evidence, not a proof; a `false` is a disproof.
pub fn is_markov_basis(
    a: &IntMatrix,
    m: &MoveSet,
    rhs_samples: &[IntVec],
) -> Result<bool, Error> {
    let signed: Vec<IntVec> = m.signed_set().into_iter().collect();
    for b in rhs_samples {
        let fiber = enumerate_fiber(a, b)?;
        if fiber.is_empty() {
            continue;
        }
        // BFS over move adjacency from the first point.
        let mut seen = vec![false; fiber.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for mv in &signed {
                let mut q = Vec::with_capacity(mv.len());
                let mut ok = true;
                for (x, d) in fiber.point(i).iter().zip(mv) {
                    let y = x + d;
                    if y < 0 {
                        ok = false;
                        break;
                    }
                    q.push(y);
                }
                if !ok {
                    continue;
                }
                if let Some(j) = fiber.index_of(&q) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
        }
        if count < fiber.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m112() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 1, 2]]).unwrap()
    }

    #[test]
    fn conformal_order_examples() {
        assert!(conformal_leq(&[1, -1, 0], &[2, -1, 0]).unwrap());
        assert!(!conformal_leq(&[1, 0], &[-1, 0]).unwrap());
        assert!(conformal_leq(&[3, -2, 5], &[3, -2, 5]).unwrap());
        assert!(matches!(
            conformal_leq(&[1], &[1, 2]),
            Err(Error::Lattice(LatticeError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn support_indicator() {
        assert_eq!(chi(&[0, 3, 1]).unwrap(), vec![0, 1, 1]);
        assert_eq!(chi(&[0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(chi(&[1, 1, 1]).unwrap(), vec![1, 1, 1]);
        assert!(matches!(
            chi(&[1, -2]),
            Err(Error::NegativeInput { coordinate: 1 })
        ));
    }

    #[test]
    fn sign_normalization_picks_lex_larger() {
        assert_eq!(normalize_sign(vec![0, -2, 1]), vec![0, 2, -1]);
        assert_eq!(normalize_sign(vec![1, -1]), vec![1, -1]);
        assert_eq!(normalize_sign(vec![0, 0]), vec![0, 0]);
    }

    #[test]
    fn move_set_validates_and_dedups() {
        let a = m112();
        let set = MoveSet::new(
            a.clone(),
            MoveKind::Custom,
            vec![vec![1, -1, 0], vec![-1, 1, 0], vec![0, 2, -1]],
        )
        .unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.signed_count(), 4);
        assert!(set.contains_signed(&[-1, 1, 0]));
        assert!(!set.contains_signed(&[2, 0, -1]));

        assert!(matches!(
            MoveSet::new(a.clone(), MoveKind::Custom, vec![vec![1, 0, 0]]),
            Err(Error::MoveNotInKernel { index: 0 })
        ));
        assert!(matches!(
            MoveSet::new(a, MoveKind::Custom, vec![vec![1, -1, 0], vec![0, 0, 0]]),
            Err(Error::ZeroMove { index: 1 })
        ));
    }

    #[test]
    fn oracle_on_wide_row() {
        let report = graver_oracle(&m112(), 3).unwrap();
        let reps: Vec<IntVec> = report.set.vectors().map(|v| v.to_vec()).collect();
        assert_eq!(
            reps,
            vec![
                vec![0, 2, -1],
                vec![1, -1, 0],
                vec![1, 1, -1],
                vec![2, 0, -1],
            ]
        );
        assert_eq!(report.set.signed_count(), 8);
        assert!(report.complete);
    }

    #[test]
    fn oracle_on_trivial_kernel() {
        let report = graver_oracle(&IntMatrix::identity(2), 5).unwrap();
        assert!(report.set.is_empty());
        assert!(report.complete);
    }

    #[test]
    fn oracle_budget_is_enforced() {
        assert!(matches!(
            graver_oracle_with_budget(&m112(), 3, 10),
            Err(Error::BoxTooLarge { budget: 10 })
        ));
    }

    #[test]
    fn closed_form_family_counts() {
        assert_eq!(graver_ak(1).unwrap().signed_count(), 12);
        assert_eq!(graver_ak(2).unwrap().signed_count(), 40);
        assert_eq!(groebner_lex_ak(1).unwrap().len(), 3);
        assert_eq!(groebner_lex_ak(2).unwrap().len(), 5);
    }

    #[test]
    fn closed_form_matches_oracle_for_small_k() {
        for k in 1..=2usize {
            let family = graver_ak(k).unwrap();
            let report = graver_oracle(family.matrix(), 2).unwrap();
            assert!(report.complete, "completeness certificate failed at k={k}");
            assert_eq!(
                family.signed_set(),
                report.set.signed_set(),
                "family/oracle mismatch at k={k}"
            );
        }
    }

    #[test]
    fn lex_basis_is_subset_of_family() {
        for k in 1..=3usize {
            let family = graver_ak(k).unwrap().signed_set();
            let lex = groebner_lex_ak(k).unwrap();
            assert!(lex.signed_set().is_subset(&family), "not a subset at k={k}");
        }
    }

    #[test]
    fn lex_basis_elements_are_minimal() {
        for k in 1..=2usize {
            let oracle = graver_oracle(groebner_lex_ak(k).unwrap().matrix(), 2)
                .unwrap()
                .set
                .signed_set();
            for v in groebner_lex_ak(k).unwrap().signed_set() {
                assert!(oracle.contains(&v), "non-minimal element at k={k}: {v:?}");
            }
        }
    }

    #[test]
    fn family_has_no_internal_domination() {
        for k in 1..=4usize {
            let signed: Vec<IntVec> = graver_ak(k).unwrap().signed_set().into_iter().collect();
            for (i, u) in signed.iter().enumerate() {
                for (j, v) in signed.iter().enumerate() {
                    if i != j {
                        assert!(
                            !conformal_leq(u, v).unwrap(),
                            "domination inside family at k={k}: {u:?} ⊑ {v:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn family_size_cap() {
        assert!(matches!(
            graver_ak_with_cap(5, 100),
            Err(Error::SizeBudgetExceeded { size: 2068, cap: 100 })
        ));
    }

    #[test]
    fn markov_basis_sampling() {
        let a = m112();
        let single = MoveSet::new(a.clone(), MoveKind::Custom, vec![vec![1, -1, 0]]).unwrap();
        assert!(!is_markov_basis(&a, &single, &[vec![3]]).unwrap());

        let oracle = graver_oracle(&a, 3).unwrap().set;
        let samples: Vec<IntVec> = (1..=4).map(|c| vec![c]).collect();
        assert!(is_markov_basis(&a, &oracle, &samples).unwrap());

        assert!(is_markov_basis(&a, &single, &[]).unwrap());
    }

    proptest! {
        #[test]
        fn conformal_is_reflexive(v in proptest::collection::vec(-5i64..=5, 1..8)) {
            prop_assert!(conformal_leq(&v, &v).unwrap());
        }

        #[test]
        fn conformal_is_antisymmetric(
            u in proptest::collection::vec(-5i64..=5, 4),
            v in proptest::collection::vec(-5i64..=5, 4),
        ) {
            if conformal_leq(&u, &v).unwrap() && conformal_leq(&v, &u).unwrap() {
                prop_assert_eq!(u, v);
            }
        }

        #[test]
        fn conformal_is_transitive(
            u in proptest::collection::vec(-3i64..=3, 4),
            v in proptest::collection::vec(-3i64..=3, 4),
            w in proptest::collection::vec(-3i64..=3, 4),
        ) {
            if conformal_leq(&u, &v).unwrap() && conformal_leq(&v, &w).unwrap() {
                prop_assert!(conformal_leq(&u, &w).unwrap());
            }
        }

        #[test]
        fn normalization_is_idempotent_and_sign_fixing(
            v in proptest::collection::vec(-9i64..=9, 1..6),
        ) {
            let n1 = normalize_sign(v.clone());
            let n2 = normalize_sign(n1.clone());
            prop_assert_eq!(&n1, &n2);
            let neg: Vec<i64> = v.iter().map(|&x| -x).collect();
            prop_assert_eq!(n1, normalize_sign(neg));
        }
    }
}
