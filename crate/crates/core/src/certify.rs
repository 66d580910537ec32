//! Exhaustive local-optimality certificates and the structural checks that
//! every 3-optimal tour must pass.

use std::fmt;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::instance::{Instance, Vertex};
use crate::moves::{BlockOutcome, KMove, Predicate, Scanner};
use crate::tour::{one_path_decomposition, validate_tour, Tour};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Optimal,
    NonOptimal,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Optimal => "optimal",
            Verdict::NonOptimal => "non-optimal",
        }
    }
}

/// Outcome of scanning a tour's neighborhood.
///
/// `moves_examined` counts candidates up to and including the witness, so an
/// optimal verdict always reports the full neighborhood size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<KMove>,
    pub moves_examined: u64,
    pub predicate: Predicate,
    pub k: usize,
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        self.verdict == Verdict::Optimal
    }
}

impl fmt::Display for Certificate {
    /// `verdict=.. k=.. predicate=.. examined=..`, plus a `witness ...` line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verdict={} k={} predicate={} examined={}",
            self.verdict.name(),
            self.k,
            self.predicate.name(),
            self.moves_examined
        )?;
        if let Some(w) = &self.witness {
            write!(f, "\nwitness {w}")?;
        }
        Ok(())
    }
}

/// Scans the full (<= k)-move neighborhood. With `workers > 1` the removed
/// edge index space is split across a thread pool; the reported witness is
/// still the least one in enumeration order.
pub fn certify(
    instance: &Instance,
    tour: &Tour,
    k: usize,
    predicate: Predicate,
    workers: usize,
) -> Result<Certificate> {
    let scanner = Scanner::new(instance, tour, k, predicate)?;
    let blocks = scanner.blocks();
    let outcomes: Vec<BlockOutcome> = if workers <= 1 {
        let mut out = Vec::new();
        for i in 0..blocks {
            let o = scanner.scan_block(i);
            let stop = o.witness.is_some();
            out.push(o);
            if stop {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| invalid(format!("cannot start {workers} workers: {e}")))?;
        pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|i| scanner.scan_block(i))
                .collect()
        })
    };
    let mut examined = 0;
    for o in outcomes {
        examined += o.examined;
        if let Some(c) = o.witness {
            return Ok(Certificate {
                verdict: Verdict::NonOptimal,
                witness: Some(c.to_kmove(instance)),
                moves_examined: examined,
                predicate,
                k,
            });
        }
    }
    Ok(Certificate {
        verdict: Verdict::Optimal,
        witness: None,
        moves_examined: examined,
        predicate,
        k,
    })
}

/// Certifies that no move of at most `k` edges has gain >= 1.
pub fn certify_k_optimal(instance: &Instance, tour: &Tour, k: usize) -> Result<Certificate> {
    certify(instance, tour, k, Predicate::Plain, 1)
}

/// Certifies that no move of at most `k` edges is an improving k-Opt++ move.
pub fn certify_kpp_optimal(instance: &Instance, tour: &Tour, k: usize) -> Result<Certificate> {
    certify(instance, tour, k, Predicate::PlusPlus, 1)
}

/// Six vertices `(p, q, u, v, a, b)` such that `{p,u}`, `{q,v}` and `{a,b}`
/// are tour edges, `c(p,u) = c(q,v) = 2`, `c(a,u) = c(b,v) = 1`, and
/// `p, q, a, b` all lie on one of the two tour arcs between `u` and `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constellation {
    pub p: Vertex,
    pub q: Vertex,
    pub u: Vertex,
    pub v: Vertex,
    pub a: Vertex,
    pub b: Vertex,
}

impl Constellation {
    /// Checks the defining conditions directly against the tour.
    pub fn holds(&self, instance: &Instance, tour: &Tour) -> bool {
        let Constellation { p, q, u, v, a, b } = *self;
        let edges = tour.edge_set();
        let on_tour = |x, y| edges.contains(&(x, y).into());
        if u == v || !(on_tour(p, u) && on_tour(q, v) && on_tour(a, b)) {
            return false;
        }
        if instance.cost(p, u) != 2 || instance.cost(q, v) != 2 {
            return false;
        }
        if a == u || b == v || instance.cost(a, u) != 1 || instance.cost(b, v) != 1 {
            return false;
        }
        let pos = tour.positions();
        let n = tour.len();
        let arc = |x: Vertex| {
            // 0: strictly on the arc u -> v, 1: strictly on v -> u, 2: u or v
            let (pu, pv, px) = (pos[u], pos[v], pos[x]);
            if x == u || x == v {
                2
            } else if (px + n - pu) % n < (pv + n - pu) % n {
                0
            } else {
                1
            }
        };
        let side = arc(p);
        side != 2 && [q, a, b].iter().all(|&x| arc(x) == side)
    }
}

/// Searches for a [`Constellation`], returning the first in scan order
/// (ordered pairs of tour positions of `u` and `v`, then edge position).
pub fn find_forbidden_constellation(
    instance: &Instance,
    tour: &Tour,
) -> Result<Option<Constellation>> {
    validate_tour(instance, tour)?;
    let order = tour.order();
    let n = order.len();
    let c = |x: Vertex, y: Vertex| instance.cost(x, y);
    for x in 0..n {
        let u = order[x];
        let p = order[(x + 1) % n];
        if c(p, u) != 2 {
            continue;
        }
        // v sits at least three steps ahead so the arc holds an edge
        for dist in 3..n {
            let y = (x + dist) % n;
            let v = order[y];
            let q = order[(y + n - 1) % n];
            if c(q, v) != 2 {
                continue;
            }
            for step in 1..dist - 1 {
                let s = order[(x + step) % n];
                let t = order[(x + step + 1) % n];
                if c(s, u) == 1 && c(t, v) == 1 {
                    return Ok(Some(Constellation {
                        p,
                        q,
                        u,
                        v,
                        a: s,
                        b: t,
                    }));
                }
                if c(t, u) == 1 && c(s, v) == 1 {
                    return Ok(Some(Constellation {
                        p,
                        q,
                        u,
                        v,
                        a: t,
                        b: s,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Pairs of endpoints of different 1-paths joined by a cost-1 edge, each
/// reported once as `(min, max)`. A length-0 path's vertex is its endpoint.
pub fn endpoint_pair_violations(instance: &Instance, tour: &Tour) -> Result<Vec<(Vertex, Vertex)>> {
    let dec = one_path_decomposition(instance, tour)?;
    let mut ends: Vec<(Vertex, usize)> = Vec::new();
    for (i, path) in dec.paths.iter().enumerate() {
        let (a, b) = path.endpoints();
        ends.push((a, i));
        if b != a {
            ends.push((b, i));
        }
    }
    ends.sort_unstable();
    let mut out = Vec::new();
    for (x, &(p, pi)) in ends.iter().enumerate() {
        for &(q, qi) in &ends[x + 1..] {
            if pi != qi && instance.cost(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}
