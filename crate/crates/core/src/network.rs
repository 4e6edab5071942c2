//! Transportation network and all-pairs shortest paths.
//!
//! Vertices are numbered from 1, matching the numbering used in scenario
//! files and reports. Edges are undirected and carry a nonnegative
//! transport cost. An optional capacity is kept on each edge but no
//! computation reads it.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Exact money amount. All costs, prices and payoffs are integers.
pub type Money = i64;

/// 1-based vertex identifier.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: Money,
    pub capacity: Option<u64>,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, cost: Money) -> Self {
        Edge {
            u,
            v,
            cost,
            capacity: None,
        }
    }

    pub fn with_capacity(mut self, capacity: u64) -> Self {
        self.capacity = Some(capacity);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("EmptyNetwork: a network needs at least one vertex")]
    EmptyNetwork,
    #[error("BadVertexId: edge ({u}, {v}) references a vertex outside 1..={vertex_count}")]
    BadVertexId {
        u: VertexId,
        v: VertexId,
        vertex_count: usize,
    },
    #[error("SelfLoop: edge ({vertex}, {vertex}) joins a vertex to itself")]
    SelfLoop { vertex: VertexId },
    #[error("NegativeCost: edge ({u}, {v}) has cost {cost}")]
    NegativeCost {
        u: VertexId,
        v: VertexId,
        cost: Money,
    },
    #[error("DuplicateEdge: more than one edge joins {u} and {v}")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("DisconnectedNetwork: vertices {a} and {b} lie in different components")]
    DisconnectedNetwork { a: VertexId, b: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

impl Network {
    /// Builds a network and validates it.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, NetworkError> {
        let net = Network {
            vertex_count,
            edges,
        };
        net.validate()?;
        Ok(net)
    }

    /// Checks every structural invariant and reports the first violation.
    ///
    /// Per-edge checks run in edge order, so a bad vertex id on edge 3 is
    /// reported before a negative cost on edge 5. Connectivity is checked
    /// last.
    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.vertex_count == 0 {
            return Err(NetworkError::EmptyNetwork);
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for e in &self.edges {
            if !self.contains(e.u) || !self.contains(e.v) {
                return Err(NetworkError::BadVertexId {
                    u: e.u,
                    v: e.v,
                    vertex_count: self.vertex_count,
                });
            }
            if e.u == e.v {
                return Err(NetworkError::SelfLoop { vertex: e.u });
            }
            if e.cost < 0 {
                return Err(NetworkError::NegativeCost {
                    u: e.u,
                    v: e.v,
                    cost: e.cost,
                });
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(NetworkError::DuplicateEdge { u: e.u, v: e.v });
            }
        }
        self.check_connected()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (1..=self.vertex_count).contains(&v)
    }

    /// Cost of the edge joining `u` and `v`, if there is one.
    pub fn edge_cost(&self, u: VertexId, v: VertexId) -> Option<Money> {
        self.edges
            .iter()
            .find(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .map(|e| e.cost)
    }

    pub fn has_capacities(&self) -> bool {
        self.edges.iter().any(|e| e.capacity.is_some())
    }

    fn check_connected(&self) -> Result<(), NetworkError> {
        let n = self.vertex_count;
        let mut adj = vec![Vec::new(); n + 1];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut reached = vec![false; n + 1];
        let mut stack = vec![1];
        reached[1] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !reached[y] {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        match (1..=n).find(|&v| !reached[v]) {
            Some(b) => Err(NetworkError::DisconnectedNetwork { a: 1, b }),
            None => Ok(()),
        }
    }
}

/// Closed distance matrix with next-hop table for path reconstruction.
///
/// Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceOracle {
    n: usize,
    dist: Vec<Money>,
    next_hop: Vec<VertexId>,
}

impl fmt::Debug for DistanceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistanceOracle")
            .field("n", &self.n)
            .field("dist", &self.matrix())
            .finish()
    }
}

impl DistanceOracle {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Shortest-path cost between two vertices.
    ///
    /// Panics if either id is outside `1..=vertex_count`.
    pub fn dist(&self, u: VertexId, v: VertexId) -> Money {
        self.dist[self.idx(u, v)]
    }

    /// The vertex following `u` on the stored shortest path to `v`.
    pub fn next_hop(&self, u: VertexId, v: VertexId) -> VertexId {
        self.next_hop[self.idx(u, v)]
    }

    /// Reconstructs one shortest path from `u` to `v`, both ends included.
    pub fn path(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![u];
        let mut cur = u;
        while cur != v {
            cur = self.next_hop(cur, v);
            out.push(cur);
        }
        out
    }

    /// Full matrix, row `u - 1` holding distances from vertex `u`.
    pub fn matrix(&self) -> Vec<Vec<Money>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    fn idx(&self, u: VertexId, v: VertexId) -> usize {
        assert!(
            (1..=self.n).contains(&u) && (1..=self.n).contains(&v),
            "vertex id out of range: ({u}, {v}) with {} vertices",
            self.n
        );
        (u - 1) * self.n + (v - 1)
    }
}

/// Floyd-Warshall closure over the validated network.
pub fn all_pairs_shortest_paths(net: &Network) -> Result<DistanceOracle, NetworkError> {
    net.validate()?;
    let n = net.vertex_count;
    // None means no path found yet.
    let mut dist: Vec<Option<Money>> = vec![None; n * n];
    let mut next: Vec<VertexId> = vec![0; n * n];

    for v in 0..n {
        dist[v * n + v] = Some(0);
        next[v * n + v] = v + 1;
    }
    for e in &net.edges {
        let (a, b) = (e.u - 1, e.v - 1);
        dist[a * n + b] = Some(e.cost);
        dist[b * n + a] = Some(e.cost);
        next[a * n + b] = e.v;
        next[b * n + a] = e.u;
    }

    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i * n + k] else { continue };
            for j in 0..n {
                let Some(kj) = dist[k * n + j] else { continue };
                let through = ik + kj;
                if dist[i * n + j].is_none_or(|cur| through < cur) {
                    dist[i * n + j] = Some(through);
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }

    let dist = dist
        .into_iter()
        .map(|d| d.expect("validated network is connected"))
        .collect();
    Ok(DistanceOracle {
        n,
        dist,
        next_hop: next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_network() -> Network {
        let edges = [
            (1, 2, 1),
            (2, 3, 2),
            (2, 4, 2),
            (2, 5, 2),
            (5, 6, 3),
            (6, 7, 3),
            (6, 8, 3),
        ]
        .into_iter()
        .map(|(u, v, c)| Edge::new(u, v, c))
        .collect();
        Network::new(8, edges).unwrap()
    }

    #[test]
    fn example_network_validates() {
        let net = example_network();
        assert_eq!(net.edges.len(), 7);
        assert!(net.validate().is_ok());
    }

    #[test]
    fn single_vertex_is_connected() {
        assert!(Network::new(1, vec![]).is_ok());
    }

    #[test]
    fn two_isolated_vertices_are_disconnected() {
        assert_eq!(
            Network::new(2, vec![]).unwrap_err(),
            NetworkError::DisconnectedNetwork { a: 1, b: 2 }
        );
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(
            Network::new(3, vec![Edge::new(1, 4, 1)]),
            Err(NetworkError::BadVertexId { .. })
        ));
        assert!(matches!(
            Network::new(3, vec![Edge::new(0, 1, 1)]),
            Err(NetworkError::BadVertexId { .. })
        ));
        assert!(matches!(
            Network::new(2, vec![Edge::new(1, 2, -1)]),
            Err(NetworkError::NegativeCost { cost: -1, .. })
        ));
        assert!(matches!(
            Network::new(2, vec![Edge::new(1, 2, 1), Edge::new(2, 1, 4)]),
            Err(NetworkError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Network::new(2, vec![Edge::new(1, 1, 0), Edge::new(1, 2, 1)]),
            Err(NetworkError::SelfLoop { vertex: 1 })
        ));
        assert_eq!(Network::new(0, vec![]), Err(NetworkError::EmptyNetwork));
    }

    #[test]
    fn example_distances() {
        let d = all_pairs_shortest_paths(&example_network()).unwrap();
        assert_eq!(d.dist(4, 2), 2);
        assert_eq!(d.dist(4, 6), 7);
        assert_eq!(d.dist(5, 2), 2);
        assert_eq!(d.dist(5, 6), 3);
        assert_eq!(d.dist(8, 2), 8);
        assert_eq!(d.dist(8, 6), 3);
        for v in 1..=8 {
            assert_eq!(d.dist(v, v), 0);
        }
    }

    #[test]
    fn example_path_one_to_seven() {
        let d = all_pairs_shortest_paths(&example_network()).unwrap();
        assert_eq!(d.path(1, 7), vec![1, 2, 5, 6, 7]);
        assert_eq!(d.dist(1, 7), 9);
        assert_eq!(d.path(3, 3), vec![3]);
    }

    #[test]
    fn zero_cost_edges() {
        let net = Network::new(3, vec![Edge::new(1, 2, 0), Edge::new(2, 3, 0)]).unwrap();
        let d = all_pairs_shortest_paths(&net).unwrap();
        assert_eq!(d.dist(1, 3), 0);
        assert_eq!(d.path(1, 3), vec![1, 2, 3]);
    }

    #[test]
    fn capacity_is_carried_but_unused() {
        let plain = Network::new(2, vec![Edge::new(1, 2, 5)]).unwrap();
        let capped = Network::new(2, vec![Edge::new(1, 2, 5).with_capacity(1)]).unwrap();
        assert!(capped.has_capacities());
        assert!(!plain.has_capacities());
        assert_eq!(
            all_pairs_shortest_paths(&plain).unwrap().matrix(),
            all_pairs_shortest_paths(&capped).unwrap().matrix()
        );
    }
}
