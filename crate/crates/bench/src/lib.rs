//! Shared instance builders for the benchmark suite.

use fiberwalk::{build_ak, build_fiber_graph, graver_ak, groebner_lex_ak, FiberGraph, IntVec};

/// Right-hand side (0, ..., 0, c) for the family member A_k.
pub fn scaled_unit_rhs(k: usize, c: i64) -> IntVec {
    let mut b = vec![0; 2 * k + 1];
    b[2 * k] = c;
    b
}

/// Fiber graph of A_k at (0, ..., 0, c) under the full move family.
pub fn graver_graph(k: usize, c: i64) -> FiberGraph {
    let inst = build_ak(k);
    let moves = graver_ak(k).expect("family moves");
    build_fiber_graph(inst.matrix(), &scaled_unit_rhs(k, c), &moves).expect("fiber graph")
}

/// Fiber graph of A_k at (0, ..., 0, c) under the lex move set.
pub fn lex_graph(k: usize, c: i64) -> FiberGraph {
    let inst = build_ak(k);
    let moves = groebner_lex_ak(k).expect("lex moves");
    build_fiber_graph(inst.matrix(), &scaled_unit_rhs(k, c), &moves).expect("fiber graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_produce_the_known_small_instances() {
        let g = graver_graph(2, 1);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 24);
        let l = lex_graph(2, 1);
        assert_eq!(l.vertex_count(), 8);
        assert_eq!(l.edge_count(), 9);
    }
}
