//! Tours, their costs, and the decomposition into 1-paths.

use std::collections::BTreeSet;

use crate::error::{Result, TourError};
use crate::instance::{Edge, Instance, Vertex};

/// A Hamiltonian cycle, stored as a vertex order read cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<Vertex>,
}

/// Checks that `order` is a permutation of `0..n`.
pub fn validate_order(n: usize, order: &[Vertex]) -> std::result::Result<(), TourError> {
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(TourError::OutOfRange { vertex: v, n });
        }
        if seen[v] {
            return Err(TourError::DuplicateVertex(v));
        }
        seen[v] = true;
    }
    if order.len() != n {
        return Err(TourError::WrongLength {
            expected: n,
            got: order.len(),
        });
    }
    match seen.iter().position(|&s| !s) {
        Some(v) => Err(TourError::MissingVertex(v)),
        None => Ok(()),
    }
}

/// Checks that `tour` visits every vertex of `instance` exactly once.
pub fn validate_tour(instance: &Instance, tour: &Tour) -> std::result::Result<(), TourError> {
    validate_order(instance.n(), tour.order())
}

impl Tour {
    /// Builds a tour on `n` vertices from a vertex order.
    pub fn new(n: usize, order: Vec<Vertex>) -> std::result::Result<Self, TourError> {
        validate_order(n, &order)?;
        Ok(Tour { order })
    }

    /// The order `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        Tour {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn into_order(self) -> Vec<Vertex> {
        self.order
    }

    /// `pos[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// The `i`-th tour edge `{order[i], order[i+1 mod n]}`.
    pub fn edge_at(&self, i: usize) -> Edge {
        let n = self.order.len();
        Edge::new(self.order[i], self.order[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.order.len()).map(|i| self.edge_at(i))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    /// Tour neighbors of every vertex as `(predecessor, successor)`.
    pub fn neighbors(&self) -> Vec<(Vertex, Vertex)> {
        let n = self.order.len();
        let mut nb = vec![(0, 0); n];
        for i in 0..n {
            nb[self.order[i]] = (self.order[(i + n - 1) % n], self.order[(i + 1) % n]);
        }
        nb
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut order = self.order.clone();
        let len = order.len().max(1);
        order.rotate_left(k % len);
        Tour { order }
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Tour { order }
    }

    /// Walks a set of edges that forms one Hamiltonian cycle on `0..n` and
    /// returns it as a tour starting at vertex 0 towards its smaller neighbor.
    pub fn from_cycle_edges(n: usize, edges: &[Edge]) -> Option<Self> {
        let adj = adjacency(n, edges)?;
        let start = 0;
        let first = adj[start][0].min(adj[start][1]);
        walk(&adj, start, first).map(|order| Tour { order })
    }
}

/// Two-neighbor adjacency lists, or `None` if some vertex does not have
/// degree exactly two.
pub(crate) fn adjacency(n: usize, edges: &[Edge]) -> Option<Vec<[Vertex; 2]>> {
    const NONE: Vertex = usize::MAX;
    let mut adj = vec![[NONE, NONE]; n];
    for e in edges {
        for (a, b) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            if a >= n || b >= n || a == b {
                return None;
            }
            let slot = &mut adj[a];
            if slot[0] == NONE {
                slot[0] = b;
            } else if slot[1] == NONE {
                slot[1] = b;
            } else {
                return None;
            }
        }
    }
    if adj.iter().any(|s| s[1] == NONE || s[0] == s[1]) {
        return None;
    }
    Some(adj)
}

/// Follows the adjacency from `start` via `first`; `None` unless the walk
/// visits all vertices before returning to `start`.
pub(crate) fn walk(adj: &[[Vertex; 2]], start: Vertex, first: Vertex) -> Option<Vec<Vertex>> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let (mut prev, mut cur) = (start, first);
    while cur != start {
        if order.len() == n {
            return None;
        }
        order.push(cur);
        let next = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        prev = cur;
        cur = next;
    }
    (order.len() == n).then_some(order)
}

/// Sum of edge costs around the tour.
pub fn tour_cost(instance: &Instance, tour: &Tour) -> Result<u64> {
    validate_tour(instance, tour)?;
    Ok(tour
        .edges()
        .map(|e| u64::from(instance.cost(e.lo(), e.hi())))
        .sum())
}

/// Counts of cost-1 and cost-2 edges on a tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCounts {
    pub cost1: usize,
    pub cost2: usize,
}

pub fn edge_counts(instance: &Instance, tour: &Tour) -> Result<EdgeCounts> {
    validate_tour(instance, tour)?;
    let cost1 = tour
        .edges()
        .filter(|e| instance.cost(e.lo(), e.hi()) == 1)
        .count();
    Ok(EdgeCounts {
        cost1,
        cost2: tour.len() - cost1,
    })
}

/// A maximal run of tour vertices joined by cost-1 tour edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnePath {
    vertices: Vec<Vertex>,
}

impl OnePath {
    /// Vertices in tour order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    /// First and last vertex; equal for a path of length 0.
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn is_endpoint(&self, v: Vertex) -> bool {
        let (a, b) = self.endpoints();
        v == a || v == b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub paths: Vec<OnePath>,
    /// Set when the tour has no cost-2 edge; `paths` is then empty.
    pub whole_cycle: bool,
}

impl PathDecomposition {
    /// `path_of[v]` is the index of the path containing `v`. Empty when the
    /// tour is a whole cost-1 cycle.
    pub fn path_index(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; n];
        for (i, p) in self.paths.iter().enumerate() {
            for &v in p.vertices() {
                idx[v] = i;
            }
        }
        idx
    }

    pub fn zero_paths(&self) -> usize {
        self.paths.iter().filter(|p| p.is_trivial()).count()
    }
}

/// Splits the tour at its cost-2 edges. Paths are listed in tour order
/// beginning with the first path that starts at or after position 0.
pub fn one_path_decomposition(instance: &Instance, tour: &Tour) -> Result<PathDecomposition> {
    validate_tour(instance, tour)?;
    let n = tour.len();
    let order = tour.order();
    let cut = |i: usize| instance.cost(order[(i + n - 1) % n], order[i]) == 2;
    let Some(first) = (0..n).find(|&i| cut(i)) else {
        return Ok(PathDecomposition {
            paths: Vec::new(),
            whole_cycle: true,
        });
    };
    let mut paths = Vec::new();
    let mut current = vec![order[first]];
    for step in 1..n {
        let i = (first + step) % n;
        if cut(i) {
            paths.push(OnePath {
                vertices: std::mem::take(&mut current),
            });
        }
        current.push(order[i]);
    }
    paths.push(OnePath { vertices: current });
    Ok(PathDecomposition {
        paths,
        whole_cycle: false,
    })
}

/// Number of vertices whose two tour edges both cost 2, i.e. 1-paths of
/// length 0.
pub fn count_zero_paths(instance: &Instance, tour: &Tour) -> Result<usize> {
    validate_tour(instance, tour)?;
    Ok(tour
        .neighbors()
        .iter()
        .enumerate()
        .filter(|&(v, &(a, b))| instance.cost(v, a) == 2 && instance.cost(v, b) == 2)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_instance(n: usize) -> Instance {
        Instance::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn validation_errors_are_distinct() {
        assert!(validate_order(4, &[0, 1, 2, 3]).is_ok());
        assert_eq!(
            validate_order(4, &[0, 1, 1, 3]),
            Err(TourError::DuplicateVertex(1))
        );
        assert_eq!(
            validate_order(4, &[0, 1, 2]),
            Err(TourError::WrongLength {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            validate_order(4, &[0, 1, 2, 7]),
            Err(TourError::OutOfRange { vertex: 7, n: 4 })
        );
        assert_eq!(
            validate_order(5, &[0, 1, 2, 3]),
            Err(TourError::WrongLength {
                expected: 5,
                got: 4
            })
        );
    }

    #[test]
    fn five_cycle_costs_five() {
        let inst = cycle_instance(5);
        assert_eq!(tour_cost(&inst, &Tour::identity(5)).unwrap(), 5);
        let d = one_path_decomposition(&inst, &Tour::identity(5)).unwrap();
        assert!(d.whole_cycle);
        assert!(d.paths.is_empty());
    }

    #[test]
    fn wrong_length_tour_is_rejected_by_cost() {
        let inst = cycle_instance(5);
        assert!(tour_cost(&inst, &Tour::identity(4)).is_err());
    }

    #[test]
    fn isolated_vertices_form_trivial_paths() {
        // 0-1-2 cost 1, everything else cost 2
        let inst = Instance::new(5, [(0, 1), (1, 2)]).unwrap();
        let d = one_path_decomposition(&inst, &Tour::identity(5)).unwrap();
        let sets: Vec<_> = d.paths.iter().map(|p| p.vertices().to_vec()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![3], vec![4]]);
        assert_eq!(d.zero_paths(), 2);
        assert_eq!(count_zero_paths(&inst, &Tour::identity(5)).unwrap(), 2);
    }

    #[test]
    fn path_can_wrap_around_position_zero() {
        // tour edges (4,0) and (0,1) cost 1, so the path 4-0-1 wraps
        let inst = Instance::new(5, [(4, 0), (0, 1)]).unwrap();
        let d = one_path_decomposition(&inst, &Tour::identity(5)).unwrap();
        let sets: Vec<_> = d.paths.iter().map(|p| p.vertices().to_vec()).collect();
        assert_eq!(sets, vec![vec![2], vec![3], vec![4, 0, 1]]);
    }

    #[test]
    fn cycle_edges_roundtrip() {
        let t = Tour::new(6, vec![0, 3, 1, 5, 2, 4]).unwrap();
        let edges: Vec<Edge> = t.edges().collect();
        let back = Tour::from_cycle_edges(6, &edges).unwrap();
        assert_eq!(back.edge_set(), t.edge_set());
        // two disjoint triangles are not a tour
        let two = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)].map(Edge::from);
        assert!(Tour::from_cycle_edges(6, &two).is_none());
    }
}
