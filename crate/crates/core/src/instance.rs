//! Instances of the (1,2)-TSP: a complete graph whose edges cost 1 or 2.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Result};

pub type Vertex = usize;

/// An undirected edge stored in canonical `(min, max)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint opposite `x`. `x` must be an endpoint.
    pub fn other(self, x: Vertex) -> Vertex {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((u, v): (Vertex, Vertex)) -> Self {
        Edge::new(u, v)
    }
}

/// A (1,2)-TSP instance, stored as its set of cost-1 edges.
///
/// A row-major bit matrix mirrors the set so that [`Instance::cost`] is a
/// single bit test; the certifier performs millions of lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    cost1: BTreeSet<Edge>,
    bits: Vec<u64>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("n", &self.n)
            .field("cost1", &self.cost1)
            .finish()
    }
}

impl Instance {
    /// Builds an instance, rejecting self-loops, out-of-range endpoints and
    /// duplicate pairs.
    pub fn new<I, E>(n: usize, cost1_edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut inst = Self::empty(n)?;
        for e in cost1_edges {
            let e = e.into();
            if e.lo() == e.hi() {
                return Err(invalid(format!("self-loop at vertex {}", e.lo())));
            }
            if e.hi() >= n {
                return Err(invalid(format!(
                    "edge {e} has an endpoint outside [0, {n})"
                )));
            }
            if !inst.insert(e) {
                return Err(invalid(format!("duplicate edge {e}")));
            }
        }
        Ok(inst)
    }

    /// Like [`Instance::new`] but silently merges duplicate pairs. Used by the
    /// generators, whose templates may coincide under modular wraparound.
    pub fn from_edge_set<I, E>(n: usize, cost1_edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut inst = Self::empty(n)?;
        for e in cost1_edges {
            let e = e.into();
            if e.lo() == e.hi() || e.hi() >= n {
                return Err(invalid(format!("bad edge {e} for n = {n}")));
            }
            inst.insert(e);
        }
        Ok(inst)
    }

    fn empty(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid(format!(
                "an instance needs at least 3 vertices, got {n}"
            )));
        }
        let words = (n * n).div_ceil(64);
        Ok(Instance {
            n,
            cost1: BTreeSet::new(),
            bits: vec![0; words],
        })
    }

    fn insert(&mut self, e: Edge) -> bool {
        if !self.cost1.insert(e) {
            return false;
        }
        for (a, b) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            let idx = a * self.n + b;
            self.bits[idx / 64] |= 1 << (idx % 64);
        }
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cost1_edges(&self) -> &BTreeSet<Edge> {
        &self.cost1
    }

    /// Cost of `{u, v}` without argument checks. Callers guarantee `u != v`
    /// and both in range.
    #[inline]
    pub fn cost(&self, u: Vertex, v: Vertex) -> u32 {
        let idx = u * self.n + v;
        if self.bits[idx / 64] >> (idx % 64) & 1 == 1 {
            1
        } else {
            2
        }
    }

    /// Checked cost lookup.
    pub fn cost_edge(&self, u: Vertex, v: Vertex) -> Result<u32> {
        if u >= self.n || v >= self.n {
            return Err(invalid(format!(
                "vertex pair ({u},{v}) out of range for n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(invalid(format!(
                "cost of the self-pair ({u},{u}) is undefined"
            )));
        }
        Ok(self.cost(u, v))
    }

    /// Returns a copy with every vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(invalid("relabeling must cover every vertex"));
        }
        Self::new(
            self.n,
            self.cost1.iter().map(|e| (perm[e.lo()], perm[e.hi()])),
        )
    }
}
