//! k-moves for k in {2, 3}: enumeration, gains, application, and the
//! k-Opt / k-Opt++ local search drivers.
//!
//! The neighborhood of a tour `t` with vertex order `t[0..n]` is indexed by
//! tour-edge indices, edge `i` being `{t[i], t[i+1 mod n]}`. Moves are listed
//! in lexicographic order of their ascending removed-edge index tuple, a pair
//! `(i, j)` preceding every triple `(i, j, k)` that extends it, and by
//! reconnection pattern within a tuple. A reconnection that re-adds one of
//! its removed edges is not listed under that tuple: its normal form removes
//! fewer edges and is listed under the shorter tuple.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::instance::{Edge, Instance, Vertex};
use crate::tour::{self, tour_cost, validate_tour, Tour};

pub use crate::tour::count_zero_paths;

/// Which moves count as improvements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// Gain at least 1.
    Plain,
    /// Gain at least 1, or gain 0 with fewer 1-paths of length 0 afterwards.
    PlusPlus,
}

impl Predicate {
    pub fn from_plus_plus(plus_plus: bool) -> Self {
        if plus_plus {
            Predicate::PlusPlus
        } else {
            Predicate::Plain
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Plain => "plain",
            Predicate::PlusPlus => "pp",
        }
    }
}

/// A normalized k-move: disjoint sets of removed tour edges and added
/// edges, each sorted, with `gain = cost(removed) - cost(added)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KMove {
    removed: Vec<Edge>,
    added: Vec<Edge>,
    gain: i64,
}

impl KMove {
    /// Normalizes the edge lists (drops edges present in both) and computes
    /// the gain against `instance`.
    pub fn new(instance: &Instance, removed: Vec<Edge>, added: Vec<Edge>) -> Result<Self> {
        let removed: BTreeSet<Edge> = removed.into_iter().collect();
        let added: BTreeSet<Edge> = added.into_iter().collect();
        let (removed, added): (Vec<Edge>, Vec<Edge>) = (
            removed.difference(&added).copied().collect(),
            added.difference(&removed).copied().collect(),
        );
        let n = instance.n();
        for e in removed.iter().chain(&added) {
            if e.lo() == e.hi() || e.hi() >= n {
                return Err(Error::InvalidMove(format!(
                    "edge {e} is not a vertex pair of the instance"
                )));
            }
        }
        if removed.len() != added.len() {
            return Err(Error::InvalidMove(format!(
                "removes {} edges but adds {}",
                removed.len(),
                added.len()
            )));
        }
        let gain = edge_sum(instance, &removed) - edge_sum(instance, &added);
        Ok(KMove {
            removed,
            added,
            gain,
        })
    }

    pub fn removed(&self) -> &[Edge] {
        &self.removed
    }

    pub fn added(&self) -> &[Edge] {
        &self.added
    }

    pub fn gain(&self) -> i64 {
        self.gain
    }

    /// Number of exchanged edges.
    pub fn size(&self) -> usize {
        self.removed.len()
    }

    /// The move that undoes this one.
    pub fn inverse(&self) -> KMove {
        KMove {
            removed: self.added.clone(),
            added: self.removed.clone(),
            gain: -self.gain,
        }
    }
}

fn edge_sum(instance: &Instance, edges: &[Edge]) -> i64 {
    edges
        .iter()
        .map(|e| i64::from(instance.cost(e.lo(), e.hi())))
        .sum()
}

impl fmt::Display for KMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "remove")?;
        for e in &self.removed {
            write!(f, " {e}")?;
        }
        write!(f, " add")?;
        for e in &self.added {
            write!(f, " {e}")?;
        }
        write!(f, " gain {}", self.gain)
    }
}

/// A move as parsed from text, before it is checked against an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub removed: Vec<Edge>,
    pub added: Vec<Edge>,
    pub gain: i64,
}

impl MoveRecord {
    /// Rebuilds the move against `instance`, failing if the recorded gain
    /// does not match the instance costs.
    pub fn resolve(&self, instance: &Instance) -> Result<KMove> {
        let mv = KMove::new(instance, self.removed.clone(), self.added.clone())?;
        if mv.gain != self.gain {
            return Err(Error::InvalidMove(format!(
                "recorded gain {} but the instance gives {}",
                self.gain, mv.gain
            )));
        }
        Ok(mv)
    }
}

impl FromStr for MoveRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: format!("{msg} in move `{s}`"),
        };
        let mut tokens = s.split_whitespace();
        if tokens.next() != Some("remove") {
            return Err(bad("expected `remove`"));
        }
        let mut removed = Vec::new();
        let mut added = Vec::new();
        let mut target = &mut removed;
        let mut gain = None;
        while let Some(tok) = tokens.next() {
            match tok {
                "add" => target = &mut added,
                "gain" => {
                    let g = tokens.next().ok_or_else(|| bad("missing gain value"))?;
                    gain = Some(g.parse::<i64>().map_err(|_| bad("bad gain"))?);
                    if tokens.next().is_some() {
                        return Err(bad("trailing tokens"));
                    }
                }
                _ => {
                    let inner = tok
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| bad("expected `(u,v)`"))?;
                    let (u, v) = inner
                        .split_once(',')
                        .ok_or_else(|| bad("expected `(u,v)`"))?;
                    let u = u.trim().parse().map_err(|_| bad("bad vertex"))?;
                    let v = v.trim().parse().map_err(|_| bad("bad vertex"))?;
                    target.push(Edge::new(u, v));
                }
            }
        }
        let gain = gain.ok_or_else(|| bad("missing `gain`"))?;
        Ok(MoveRecord {
            removed,
            added,
            gain,
        })
    }
}

impl From<&KMove> for MoveRecord {
    fn from(m: &KMove) -> Self {
        MoveRecord {
            removed: m.removed.clone(),
            added: m.added.clone(),
            gain: m.gain,
        }
    }
}

/// Reconnections of three segments in which all three added edges are new.
/// Indices refer to `[a, b, c, d, e, f]` where the removed edges are
/// `{a,b}`, `{c,d}`, `{e,f}` in tour order.
const THREE_OPT_PATTERNS: [[(usize, usize); 3]; 4] = [
    [(0, 2), (1, 4), (3, 5)], // a-c..b-e..d-f
    [(0, 3), (4, 1), (2, 5)], // a-d..e-b..c-f
    [(0, 3), (4, 2), (1, 5)], // a-d..e-c..b-f
    [(0, 4), (3, 1), (2, 5)], // a-e..d-b..c-f
];

/// One element of the neighborhood before costs are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    /// Ascending removed-edge indices; only the first `arity` are used.
    pub edge_index: [usize; 3],
    pub arity: usize,
    /// Reconnection pattern id within the tuple (always 0 for 2-moves).
    pub pattern: u8,
    removed: [(Vertex, Vertex); 3],
    added: [(Vertex, Vertex); 3],
}

impl Candidate {
    pub fn removed(&self) -> &[(Vertex, Vertex)] {
        &self.removed[..self.arity]
    }

    pub fn added(&self) -> &[(Vertex, Vertex)] {
        &self.added[..self.arity]
    }

    pub fn gain(&self, instance: &Instance) -> i64 {
        let sum = |es: &[(Vertex, Vertex)]| -> i64 {
            es.iter()
                .map(|&(u, v)| i64::from(instance.cost(u, v)))
                .sum()
        };
        sum(self.removed()) - sum(self.added())
    }

    pub fn to_kmove(&self, instance: &Instance) -> KMove {
        let mut removed: Vec<Edge> = self.removed().iter().map(|&e| e.into()).collect();
        let mut added: Vec<Edge> = self.added().iter().map(|&e| e.into()).collect();
        removed.sort();
        added.sort();
        KMove {
            gain: self.gain(instance),
            removed,
            added,
        }
    }
}

pub(crate) fn check_size(n: usize, k: usize) -> Result<()> {
    match k {
        2 if n >= 4 => Ok(()),
        3 if n >= 5 => Ok(()),
        2 | 3 => Err(invalid(format!(
            "k = {k} needs at least {} vertices, got {n}",
            k + 2
        ))),
        _ => Err(invalid(format!("k must be 2 or 3, got {k}"))),
    }
}

/// Calls `visit` on every candidate whose first removed edge has index `i`,
/// in enumeration order, until it returns `true`. Returns whether it stopped.
pub(crate) fn visit_block<F>(order: &[Vertex], k: usize, i: usize, mut visit: F) -> bool
where
    F: FnMut(&Candidate) -> bool,
{
    let n = order.len();
    let at = |x: usize| order[x % n];
    for j in i + 1..n {
        let (a, b, c, d) = (at(i), at(i + 1), at(j), at(j + 1));
        // adjacent edges share a vertex and admit no 2-exchange
        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if !adjacent {
            let cand = Candidate {
                edge_index: [i, j, 0],
                arity: 2,
                pattern: 0,
                removed: [(a, b), (c, d), (0, 0)],
                added: [(a, c), (b, d), (0, 0)],
            };
            if visit(&cand) {
                return true;
            }
        }
        if k < 3 {
            continue;
        }
        for kk in j + 1..n {
            let v = [a, b, c, d, at(kk), at(kk + 1)];
            let removed = [(v[0], v[1]), (v[2], v[3]), (v[4], v[5])];
            let removed_edges = removed.map(Edge::from);
            let mut accepted: [[Edge; 3]; 4] = [[Edge::new(0, 0); 3]; 4];
            let mut n_accepted = 0;
            for (pid, pat) in THREE_OPT_PATTERNS.iter().enumerate() {
                let added = pat.map(|(x, y)| (v[x], v[y]));
                let mut key = added.map(Edge::from);
                if key.iter().any(|e| removed_edges.contains(e)) {
                    continue;
                }
                key.sort();
                if accepted[..n_accepted].contains(&key) {
                    continue;
                }
                accepted[n_accepted] = key;
                n_accepted += 1;
                let cand = Candidate {
                    edge_index: [i, j, kk],
                    arity: 3,
                    pattern: pid as u8,
                    removed,
                    added,
                };
                if visit(&cand) {
                    return true;
                }
            }
        }
    }
    false
}

/// Iterator over the full (<= k)-move neighborhood of a tour.
pub struct Neighborhood<'a> {
    order: &'a [Vertex],
    k: usize,
    next_block: usize,
    buffer: VecDeque<Candidate>,
}

impl Iterator for Neighborhood<'_> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        while self.buffer.is_empty() && self.next_block < self.order.len() {
            let buf = &mut self.buffer;
            visit_block(self.order, self.k, self.next_block, |c| {
                buf.push_back(*c);
                false
            });
            self.next_block += 1;
        }
        self.buffer.pop_front()
    }
}

/// Lists every move that removes 2..=k tour edges and reconnects the pieces
/// into a different Hamiltonian cycle, each exactly once.
pub fn enumerate_kmoves(tour: &Tour, k: usize) -> Result<Neighborhood<'_>> {
    check_size(tour.len(), k)?;
    Ok(Neighborhood {
        order: tour.order(),
        k,
        next_block: 0,
        buffer: VecDeque::new(),
    })
}

/// Size of the full (<= k)-move neighborhood of any tour on `n` vertices.
pub fn neighborhood_size(n: usize, k: usize) -> Result<u64> {
    let t = Tour::identity(n);
    Ok(enumerate_kmoves(&t, k)?.count() as u64)
}

fn check_removed_on_tour(tour: &Tour, mv: &KMove) -> Result<BTreeSet<Edge>> {
    let edges = tour.edge_set();
    if let Some(e) = mv.removed.iter().find(|e| !edges.contains(e)) {
        return Err(Error::InvalidMove(format!(
            "removed edge {e} is not on the tour"
        )));
    }
    Ok(edges)
}

/// `cost(removed) - cost(added)` after checking the removed edges lie on
/// the tour.
pub fn move_gain(instance: &Instance, tour: &Tour, mv: &KMove) -> Result<i64> {
    validate_tour(instance, tour)?;
    check_removed_on_tour(tour, mv)?;
    Ok(edge_sum(instance, &mv.removed) - edge_sum(instance, &mv.added))
}

/// Applies the exchange. The result starts at the same vertex as `tour` and
/// keeps its direction when the first tour edge survives.
pub fn apply_move(tour: &Tour, mv: &KMove) -> Result<Tour> {
    let mut edges = check_removed_on_tour(tour, mv)?;
    for e in &mv.removed {
        edges.remove(e);
    }
    for e in &mv.added {
        if !edges.insert(*e) {
            return Err(Error::InvalidMove(format!(
                "added edge {e} is already on the tour"
            )));
        }
    }
    let n = tour.len();
    let edges: Vec<Edge> = edges.into_iter().collect();
    let broken = || Error::Internal(format!("applying `{mv}` does not yield a single cycle"));
    let adj = tour::adjacency(n, &edges).ok_or_else(broken)?;
    let start = tour.order()[0];
    let succ = tour.order()[1 % n];
    let first = if adj[start].contains(&succ) {
        succ
    } else {
        adj[start][0].min(adj[start][1])
    };
    let order = tour::walk(&adj, start, first).ok_or_else(broken)?;
    Ok(Tour::new(n, order)?)
}

/// Change in the number of isolated tour vertices caused by a candidate,
/// computed from the touched vertices only.
fn zero_path_delta(
    instance: &Instance,
    neighbors: &[(Vertex, Vertex)],
    removed: &[(Vertex, Vertex)],
    added: &[(Vertex, Vertex)],
) -> i64 {
    let mut touched = [usize::MAX; 6];
    let mut t = 0;
    for &(x, y) in removed {
        for v in [x, y] {
            if !touched[..t].contains(&v) {
                touched[t] = v;
                t += 1;
            }
        }
    }
    let mut delta = 0;
    for &v in &touched[..t] {
        let (p, s) = neighbors[v];
        let before = instance.cost(v, p) == 2 && instance.cost(v, s) == 2;
        let mut nb = [p, s, usize::MAX, usize::MAX];
        for &(x, y) in removed {
            let partner = if x == v {
                y
            } else if y == v {
                x
            } else {
                continue;
            };
            if let Some(slot) = nb.iter_mut().find(|slot| **slot == partner) {
                *slot = usize::MAX;
            }
        }
        for &(x, y) in added {
            let partner = if x == v {
                y
            } else if y == v {
                x
            } else {
                continue;
            };
            if let Some(slot) = nb.iter_mut().find(|slot| **slot == usize::MAX) {
                *slot = partner;
            }
        }
        let after = nb
            .iter()
            .filter(|&&w| w != usize::MAX)
            .all(|&w| instance.cost(v, w) == 2);
        delta += i64::from(after) - i64::from(before);
    }
    delta
}

/// Shared state for scanning a tour's neighborhood.
pub(crate) struct Scanner<'a> {
    instance: &'a Instance,
    order: &'a [Vertex],
    neighbors: Vec<(Vertex, Vertex)>,
    k: usize,
    predicate: Predicate,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BlockOutcome {
    /// Candidates looked at, including the witness if there is one.
    pub examined: u64,
    pub witness: Option<Candidate>,
}

impl<'a> Scanner<'a> {
    pub fn new(
        instance: &'a Instance,
        tour: &'a Tour,
        k: usize,
        predicate: Predicate,
    ) -> Result<Self> {
        validate_tour(instance, tour)?;
        check_size(tour.len(), k)?;
        Ok(Scanner {
            instance,
            order: tour.order(),
            neighbors: tour.neighbors(),
            k,
            predicate,
        })
    }

    pub fn blocks(&self) -> usize {
        self.order.len()
    }

    fn accepts(&self, c: &Candidate) -> bool {
        let gain = c.gain(self.instance);
        match self.predicate {
            Predicate::Plain => gain >= 1,
            Predicate::PlusPlus => {
                gain >= 1
                    || (gain == 0
                        && zero_path_delta(self.instance, &self.neighbors, c.removed(), c.added())
                            < 0)
            }
        }
    }

    pub fn scan_block(&self, i: usize) -> BlockOutcome {
        let mut examined = 0;
        let mut witness = None;
        visit_block(self.order, self.k, i, |c| {
            examined += 1;
            if self.accepts(c) {
                witness = Some(*c);
                true
            } else {
                false
            }
        });
        BlockOutcome { examined, witness }
    }
}

/// Whether the move improves under the k-Opt++ rule: gain at least 1, or
/// gain 0 while reducing the number of 1-paths of length 0.
pub fn is_improving_pp(instance: &Instance, tour: &Tour, mv: &KMove) -> Result<bool> {
    let gain = move_gain(instance, tour, mv)?;
    if gain >= 1 {
        return Ok(true);
    }
    if gain < 0 {
        return Ok(false);
    }
    let after = apply_move(tour, mv)?;
    Ok(count_zero_paths(instance, &after)? < count_zero_paths(instance, tour)?)
}

/// The first move in enumeration order that improves under the chosen rule.
pub fn find_improving(
    instance: &Instance,
    tour: &Tour,
    k: usize,
    plus_plus: bool,
) -> Result<Option<KMove>> {
    let scanner = Scanner::new(instance, tour, k, Predicate::from_plus_plus(plus_plus))?;
    Ok((0..scanner.blocks())
        .find_map(|i| scanner.scan_block(i).witness)
        .map(|c| c.to_kmove(instance)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Neighborhood scans, including the final one that found nothing.
    pub iterations: u64,
    pub moves_applied: u64,
    pub final_cost: u64,
    pub final_zero_paths: usize,
}

/// Applies first-improvement moves until none is left.
pub fn local_search(
    instance: &Instance,
    start: &Tour,
    k: usize,
    plus_plus: bool,
) -> Result<(Tour, SearchStats)> {
    validate_tour(instance, start)?;
    check_size(start.len(), k)?;
    let mut tour = start.clone();
    let mut stats = SearchStats {
        iterations: 0,
        moves_applied: 0,
        final_cost: 0,
        final_zero_paths: 0,
    };
    loop {
        stats.iterations += 1;
        match find_improving(instance, &tour, k, plus_plus)? {
            Some(mv) => {
                tour = apply_move(&tour, &mv)?;
                stats.moves_applied += 1;
            }
            None => break,
        }
    }
    stats.final_cost = tour_cost(instance, &tour)?;
    stats.final_zero_paths = count_zero_paths(instance, &tour)?;
    Ok((tour, stats))
}
