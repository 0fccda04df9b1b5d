//! Exact graph connectivity: min degree, edge and vertex connectivity with
//! witnesses, disjoint-path counts, and two sufficient-condition checkers.
//!
//! Edge connectivity is the minimum over `t` of max-flow from a fixed source
//! in the unit-capacity doubling of the graph. Vertex connectivity splits
//! every vertex into an in/out pair joined by a unit arc and runs the
//! standard pair schedule: a minimum-degree pivot against its non-neighbors,
//! plus all non-adjacent pairs of pivot neighbors. Both report a witness that
//! realizes the optimum (a cut edge set, a separating vertex set).

use crate::error::Error;
use crate::graph::Graph;
use serde::Serialize;

// ==== max-flow core ===================================================

/// Dinic max-flow over an explicit arc list. Arcs are added in pairs, so
/// `id ^ 1` is the reverse arc. Capacities can be restored with [`reset`]
/// to rerun flows on the same network.
pub(crate) struct FlowNet {
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    cap: Vec<i64>,
    orig: Vec<i64>,
}

impl FlowNet {
    pub(crate) fn new(n: usize) -> Self {
        FlowNet { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), orig: Vec::new() }
    }

    pub(crate) fn add_arc(&mut self, u: usize, v: usize, cap: i64, rcap: i64) {
        let id = self.to.len() as u32;
        self.adj[u].push(id);
        self.to.push(v as u32);
        self.cap.push(cap);
        self.adj[v].push(id + 1);
        self.to.push(u as u32);
        self.cap.push(rcap);
        self.orig.push(cap);
        self.orig.push(rcap);
    }

    pub(crate) fn reset(&mut self) {
        self.cap.copy_from_slice(&self.orig);
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        debug_assert_ne!(s, t);
        let n = self.adj.len();
        let mut flow = 0;
        let mut level = vec![-1i32; n];
        let mut iter = vec![0usize; n];
        loop {
            // BFS level graph.
            level.fill(-1);
            level[s] = 0;
            let mut queue = std::collections::VecDeque::from([s as u32]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u as usize] {
                    let v = self.to[a as usize] as usize;
                    if self.cap[a as usize] > 0 && level[v] < 0 {
                        level[v] = level[u as usize] + 1;
                        queue.push_back(v as u32);
                    }
                }
            }
            if level[t] < 0 {
                return flow;
            }
            iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64, level: &[i32], iter: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while iter[u] < self.adj[u].len() {
            let a = self.adj[u][iter[u]] as usize;
            let v = self.to[a] as usize;
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[a]), level, iter);
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Vertices reachable from `s` in the residual network.
    pub(crate) fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a as usize] as usize;
                if self.cap[a as usize] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// One unit-capacity arc pair per undirected edge.
fn edge_net(g: &Graph) -> FlowNet {
    let mut net = FlowNet::new(g.vertex_count());
    for (u, v) in g.edges() {
        net.add_arc(u, v, 1, 1);
    }
    net
}

/// Vertex-split network: unit arc `in(v) -> out(v)` per vertex, wide arcs
/// `out(u) -> in(v)` per edge direction, so any finite cut consists of
/// internal arcs only and reads off as a vertex set. `skip` suppresses the
/// direct arcs between one pair (used for adjacent endpoints).
fn split_net(g: &Graph, skip: Option<(usize, usize)>) -> FlowNet {
    let n = g.vertex_count();
    let wide = n as i64 + 1;
    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        net.add_arc(2 * v, 2 * v + 1, 1, 0);
    }
    for (u, v) in g.edges() {
        if skip == Some((u.min(v), u.max(v))) {
            continue;
        }
        net.add_arc(2 * u + 1, 2 * v, wide, 0);
        net.add_arc(2 * v + 1, 2 * u, wide, 0);
    }
    net
}

// ==== global connectivity ============================================

/// Exact edge connectivity with a realizing cut: the minimum number of edges
/// whose removal disconnects the graph, 0 for disconnected input, and by
/// convention 0 for a single vertex.
pub fn edge_connectivity(g: &Graph) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n == 1 || !g.is_connected() {
        return Ok((0, Vec::new()));
    }
    let mut net = edge_net(g);
    let (mut best, mut best_t) = (i64::MAX, 1usize);
    for t in 1..n {
        net.reset();
        let f = net.max_flow(0, t);
        if f < best {
            best = f;
            best_t = t;
        }
    }
    net.reset();
    net.max_flow(0, best_t);
    let side = net.residual_reachable(0);
    let witness: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| side[u] != side[v])
        .collect();
    debug_assert_eq!(witness.len(), best as usize);
    Ok((best as usize, witness))
}

/// Exact vertex connectivity with a realizing separator: the minimum number
/// of vertices whose removal disconnects the graph. Complete graphs return
/// `n - 1` with an empty witness (no separator exists); disconnected input
/// returns 0, as does a single vertex.
pub fn vertex_connectivity(g: &Graph) -> Result<(usize, Vec<usize>), Error> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n == 1 || !g.is_connected() {
        return Ok((0, Vec::new()));
    }
    if g.is_complete() {
        return Ok((n - 1, Vec::new()));
    }
    let (s, _) = g.min_degree_vertex()?;
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .filter(|&t| t != s && !g.has_edge(s, t))
        .map(|t| (s, t))
        .collect();
    let nbrs = g.neighbors(s);
    for (i, &u) in nbrs.iter().enumerate() {
        for &w in &nbrs[i + 1..] {
            if !g.has_edge(u as usize, w as usize) {
                pairs.push((u as usize, w as usize));
            }
        }
    }
    debug_assert!(!pairs.is_empty(), "non-complete graph has a non-adjacent pair");
    let mut net = split_net(g, None);
    let (mut best, mut best_pair) = (i64::MAX, pairs[0]);
    for &(a, b) in &pairs {
        net.reset();
        let f = net.max_flow(2 * a + 1, 2 * b);
        if f < best {
            best = f;
            best_pair = (a, b);
        }
    }
    net.reset();
    net.max_flow(2 * best_pair.0 + 1, 2 * best_pair.1);
    let reach = net.residual_reachable(2 * best_pair.0 + 1);
    let witness: Vec<usize> = (0..n).filter(|&v| reach[2 * v] && !reach[2 * v + 1]).collect();
    debug_assert_eq!(witness.len(), best as usize);
    Ok((best as usize, witness))
}

/// Number of edge-disjoint paths between two distinct vertices (max-flow
/// with unit edge capacities).
pub fn edge_disjoint_paths(g: &Graph, u: usize, v: usize) -> Result<usize, Error> {
    if u == v {
        return Err(Error::IdenticalEndpoints);
    }
    assert!(u < g.vertex_count() && v < g.vertex_count(), "endpoint out of range");
    let mut net = edge_net(g);
    Ok(net.max_flow(u, v) as usize)
}

/// Number of internally vertex-disjoint paths between two distinct vertices.
/// A direct edge counts as one path and the rest flow through the split
/// network with that edge removed.
pub fn internally_disjoint_paths(g: &Graph, u: usize, v: usize) -> Result<usize, Error> {
    if u == v {
        return Err(Error::IdenticalEndpoints);
    }
    assert!(u < g.vertex_count() && v < g.vertex_count(), "endpoint out of range");
    let adjacent = g.has_edge(u, v);
    let skip = adjacent.then(|| (u.min(v), u.max(v)));
    let mut net = split_net(g, skip);
    Ok(net.max_flow(2 * u + 1, 2 * v) as usize + adjacent as usize)
}

/// True iff every adjacent pair admits at least `k` edge-disjoint paths.
/// For a connected graph this is a sufficient condition for edge
/// connectivity at least `k`, which is cross-checked in debug builds.
pub fn check_edge_criterion(g: &Graph, k: usize) -> Result<bool, Error> {
    let mut net = edge_net(g);
    for (u, v) in g.edges() {
        net.reset();
        if (net.max_flow(u, v) as usize) < k {
            return Ok(false);
        }
    }
    debug_assert!(
        !g.is_connected() || g.vertex_count() < 2 || edge_connectivity(g)?.0 >= k,
        "criterion held but edge connectivity is below {k}"
    );
    Ok(true)
}

/// True iff every vertex pair with intersecting neighborhoods admits at
/// least `k` internally vertex-disjoint paths. For a connected graph this
/// is a sufficient condition for vertex connectivity at least `k`.
pub fn check_liu_pairs(g: &Graph, k: usize) -> Result<bool, Error> {
    let n = g.vertex_count();
    for u in 0..n {
        for w in u + 1..n {
            let shares = {
                // Sorted-list intersection test.
                let (mut a, mut b) = (g.neighbors(u).iter().peekable(), g.neighbors(w).iter().peekable());
                loop {
                    match (a.peek(), b.peek()) {
                        (Some(&&x), Some(&&y)) if x == y => break true,
                        (Some(&&x), Some(&&y)) => {
                            if x < y {
                                a.next();
                            } else {
                                b.next();
                            }
                        }
                        _ => break false,
                    }
                }
            };
            if shares && internally_disjoint_paths(g, u, w)? < k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ==== report ==========================================================

/// Full connectivity profile of a graph, with witnesses. Witnesses are empty
/// when no realizing certificate exists (disconnected or complete input).
#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    pub min_degree_vertex: usize,
    pub edge_connectivity: usize,
    pub vertex_connectivity: usize,
    pub components: usize,
    pub is_connected: bool,
    pub min_cut_witness: Vec<(usize, usize)>,
    pub separator_witness: Vec<usize>,
}

impl ConnectivityReport {
    pub fn compute(g: &Graph) -> Result<Self, Error> {
        let (min_degree_vertex, min_degree) = g.min_degree_vertex()?;
        let (components, _) = g.components();
        let (lambda, min_cut_witness) = edge_connectivity(g)?;
        let (kappa, separator_witness) = vertex_connectivity(g)?;
        let report = ConnectivityReport {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            min_degree,
            min_degree_vertex,
            edge_connectivity: lambda,
            vertex_connectivity: kappa,
            components,
            is_connected: components <= 1,
            min_cut_witness,
            separator_witness,
        };
        debug_assert!(
            !report.is_connected
                || (report.min_degree >= report.edge_connectivity
                    && report.edge_connectivity >= report.vertex_connectivity),
            "connectivity chain violated: {report:?}"
        );
        Ok(report)
    }
}
