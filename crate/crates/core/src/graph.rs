//! Simple undirected graphs over dense vertex ids.

use crate::error::Error;
use serde::Serialize;

/// Undirected simple graph with sorted adjacency lists. Vertices are
/// `0..vertex_count()`; self-loops and parallel edges are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph from an edge list, deduplicating as it goes.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u < n && v < n, "edge endpoint out of range");
                assert!(u != v, "self-loops are not allowed");
                (u.min(v) as u32, u.max(v) as u32)
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, edge_count: pairs.len() }
    }

    /// Inserts an edge, keeping adjacency sorted. No-op if already present.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.adj.len() && v < self.adj.len(), "endpoint out of range");
        assert!(u != v, "self-loops are not allowed");
        let (u32u, u32v) = (u as u32, v as u32);
        if let Err(pos) = self.adj[u].binary_search(&u32v) {
            self.adj[u].insert(pos, u32v);
            let pos = self.adj[v].binary_search(&u32u).unwrap_err();
            self.adj[v].insert(pos, u32u);
            self.edge_count += 1;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (v as usize) > u {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Smallest vertex degree.
    pub fn min_degree(&self) -> Result<usize, Error> {
        self.min_degree_vertex().map(|(_, d)| d)
    }

    /// A vertex of smallest degree together with that degree (first such
    /// vertex in id order, so the answer is deterministic).
    pub fn min_degree_vertex(&self) -> Result<(usize, usize), Error> {
        if self.adj.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let v = (0..self.adj.len())
            .min_by_key(|&v| self.adj[v].len())
            .expect("nonempty");
        Ok((v, self.adj[v].len()))
    }

    /// Component id per vertex (ids are dense, assigned in vertex order)
    /// and the number of components.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.adj.len();
        let mut id = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = Vec::new();
        for start in 0..n {
            if id[start] != u32::MAX {
                continue;
            }
            id[start] = count;
            queue.push(start as u32);
            while let Some(u) = queue.pop() {
                for &w in &self.adj[u as usize] {
                    if id[w as usize] == u32::MAX {
                        id[w as usize] = count;
                        queue.push(w);
                    }
                }
            }
            count += 1;
        }
        (count as usize, id)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }

    /// The subgraph induced by a set of vertices; new ids follow the order
    /// given (duplicates are rejected by the id remapping being injective).
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut remap = vec![u32::MAX; self.adj.len()];
        for (new, &old) in verts.iter().enumerate() {
            debug_assert!(remap[old] == u32::MAX, "duplicate vertex in induced set");
            remap[old] = new as u32;
        }
        let mut g = Graph::new(verts.len());
        for (new, &old) in verts.iter().enumerate() {
            for &w in &self.adj[old] {
                let wn = remap[w as usize];
                if wn != u32::MAX && (wn as usize) > new {
                    g.add_edge(new, wn as usize);
                }
            }
        }
        g
    }

    /// True iff every pair of distinct vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.adj.len();
        self.adj.iter().all(|list| list.len() == n - 1)
    }
}
