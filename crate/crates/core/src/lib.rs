//! Fiber graphs of integer matrices: lattice point enumeration, kernel move
//! sets, exact connectivity analysis, and Metropolis random walks.

pub mod akfamily;
pub mod chain;
pub mod connectivity;
pub mod error;
pub mod fibergraph;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod moves;

pub use akfamily::{
    box_vertices, build_ak, build_bk, decompose_rhs, fiber_vert, graver_move, is_applicable,
    level_graphs, level_size, min_degree_formula, sample_rhs, total_size, verify_degree_match,
    verify_gap_witness, AkInstance, BoxCoords, DegreeMatchReport, Direction, GapWitnessReport,
    LevelGraphs, RhsDecomp,
};
pub use chain::{
    metropolis_matrix, mixing_scale, mixing_times, sig6, slem, sweep_by_k, sweep_by_scale,
    SpectralReport, SweepRow, SweepTable, TransitionMatrix, DEFAULT_SWEEP_POINT_CAP,
    DENSE_EIGEN_CUTOFF, MIXING_DEFINITION, POWER_TOL,
};
pub use connectivity::{
    check_edge_criterion, check_liu_pairs, edge_connectivity, edge_disjoint_paths,
    internally_disjoint_paths, vertex_connectivity, ConnectivityReport,
};
pub use error::Error;
pub use fibergraph::{
    box_graph, build_fiber_graph, build_graph, slack_lift, universality_lift, BoxGraph,
    FiberGraph, SlackLift, UniversalityLift,
};
pub use graph::Graph;
pub use io::{
    fiber_graph_to_dot, fiber_to_csv, fiber_to_json, graph_to_edge_csv, levels_to_csv,
    matrix_from_json, matrix_from_text, matrix_to_json, moves_from_csv, moves_to_csv,
    moves_to_json, parse_int_vec, parse_matrix,
};
pub use lattice::{
    coordinate_bounds, enumerate_fiber, enumerate_fiber_with_budget, is_pointed, kernel_basis,
    Fiber, IntMatrix, IntVec, LatticeError, DEFAULT_POINT_BUDGET,
};
pub use moves::{
    chi, conformal_leq, graver_ak, graver_ak_with_cap, graver_oracle, graver_oracle_with_budget,
    groebner_lex_ak, is_markov_basis, normalize_sign, Move, MoveKind, MoveSet, OracleReport,
    DEFAULT_MOVE_SET_CAP, DEFAULT_ORACLE_BUDGET,
};
