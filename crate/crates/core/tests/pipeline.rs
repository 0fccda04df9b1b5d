//! Consumer-style flows through the public API: parse → enumerate → moves →
//! graph → connectivity → walk, checking cross-module consistency rather
//! than frozen values.

use fiberwalk::{
    build_ak, build_fiber_graph, decompose_rhs, enumerate_fiber, fiber_graph_to_dot,
    fiber_to_csv, graver_ak, graver_oracle, level_size, matrix_from_json, matrix_to_json,
    metropolis_matrix, min_degree_formula, mixing_times, moves_from_csv, moves_to_csv,
    parse_matrix, total_size, ConnectivityReport, MoveKind, MoveSet,
};

#[test]
fn custom_matrix_pipeline_is_internally_consistent() {
    let matrix = parse_matrix("1 2 3\n0 1 1\n").expect("text matrix parses");
    let rejson = matrix_from_json(&matrix_to_json(&matrix)).expect("roundtrip");
    assert_eq!(matrix, rejson);

    let b = vec![8, 3];
    let fiber = enumerate_fiber(&matrix, &b).expect("enumerates");
    assert!(!fiber.is_empty());
    assert_eq!(fiber_to_csv(&fiber).lines().count(), fiber.len());

    let oracle = graver_oracle(&matrix, 4).expect("oracle runs");
    assert!(oracle.complete);
    let fg = build_fiber_graph(&matrix, &b, &oracle.set).expect("graph builds");
    assert_eq!(fg.vertex_count(), fiber.len());

    // Every edge is realized by the move it is labeled with.
    for (u, v) in fg.graph().edges() {
        let (index, sign) = fg.label(u, v).expect("labeled");
        let m = &fg.moves().moves()[index].vec;
        let stepped: Vec<i64> = fg
            .fiber()
            .point(u)
            .iter()
            .zip(m)
            .map(|(a, d)| a + i64::from(sign) * d)
            .collect();
        assert_eq!(stepped.as_slice(), fg.fiber().point(v));
    }

    let report = ConnectivityReport::compute(fg.graph()).expect("report");
    if report.is_connected {
        assert!(report.min_degree >= report.edge_connectivity);
        assert!(report.edge_connectivity >= report.vertex_connectivity);

        let p = metropolis_matrix(fg.graph()).expect("chain");
        let spectral = mixing_times(&p, &[0.25, 0.05]).expect("mixing");
        assert!(spectral.slem > 0.0 && spectral.slem < 1.0);
        let coarse = spectral.tv_mixing["0.25"];
        let fine = spectral.tv_mixing["0.05"];
        assert!(coarse <= fine);
    }

    let dot = fiber_graph_to_dot(&fg);
    assert_eq!(dot.matches(" -- ").count(), fg.edge_count());
}

#[test]
fn family_pipeline_ties_decomposition_graphs_and_formula_together() {
    let b = vec![1, -1, 0, 1, 2];
    let d = decompose_rhs(&b).expect("decomposes");
    assert!(!d.is_empty());

    let inst = build_ak(d.k);
    let fiber = enumerate_fiber(inst.matrix(), &b).expect("enumerates");
    let mut by_levels: i128 = 0;
    for s in d.lower..=d.upper {
        by_levels += level_size(s, &d).expect("level size");
    }
    assert_eq!(by_levels, fiber.len() as i128);
    assert_eq!(total_size(&d).expect("total"), fiber.len() as i128);

    let moves = graver_ak(d.k).expect("family moves");
    let fg = build_fiber_graph(inst.matrix(), &b, &moves).expect("graph");
    let report = ConnectivityReport::compute(fg.graph()).expect("report");
    assert!(report.is_connected);
    let delta = min_degree_formula(&d).expect("formula");
    assert_eq!(report.min_degree, delta);
    assert_eq!(report.edge_connectivity, delta);
}

#[test]
fn move_sets_survive_csv_roundtrip_and_rebuild_the_same_graph() {
    let matrix = parse_matrix("{\"rows\":1,\"cols\":3,\"entries\":[1,1,2]}").expect("json");
    let set = graver_oracle(&matrix, 3).expect("oracle").set;
    let csv = moves_to_csv(&set);
    let reread = moves_from_csv(&csv).expect("csv parses");
    let rebuilt = MoveSet::new(matrix.clone(), MoveKind::Custom, reread).expect("rebuilds");
    assert_eq!(set.signed_set(), rebuilt.signed_set());

    let first = build_fiber_graph(&matrix, &[3], &set).expect("graph");
    let second = build_fiber_graph(&matrix, &[3], &rebuilt).expect("graph");
    assert_eq!(first.graph(), second.graph());
}
