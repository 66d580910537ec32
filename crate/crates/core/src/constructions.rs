//! Lower-bound instance families with their locally optimal tours, the
//! regularity check used to lift finite certificates to whole families, and
//! seeded random instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::instance::{Edge, Instance, Vertex};
use crate::tour::{tour_cost, Tour};

/// The parameterized constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// 2-optimal tours of cost `n + floor((n-2)/2)` against optimum `n`.
    TwoOptLb,
    /// 3-optimal tours of cost `11s` on `8s` vertices.
    ThreeOptLb,
    /// 3-Opt++-optimal tours of cost `8s` on `6s` vertices.
    ThreeOptPpLb,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TwoOptLb => "two-opt-lb",
            Family::ThreeOptLb => "three-opt-lb",
            Family::ThreeOptPpLb => "three-opt-pp-lb",
        }
    }

    /// Vertices per segment of the periodic families.
    pub fn period(self) -> Option<usize> {
        match self {
            Family::TwoOptLb => None,
            Family::ThreeOptLb => Some(8),
            Family::ThreeOptPpLb => Some(6),
        }
    }

    /// Builds the member with `param` = `n` for [`Family::TwoOptLb`] and
    /// `s` otherwise.
    pub fn generate(self, param: usize) -> Result<FamilyOutput> {
        match self {
            Family::TwoOptLb => gen_two_opt_lb(param),
            Family::ThreeOptLb => gen_three_opt_lb(param),
            Family::ThreeOptPpLb => gen_three_opt_pp_lb(param),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-opt-lb" => Ok(Family::TwoOptLb),
            "three-opt-lb" => Ok(Family::ThreeOptLb),
            "three-opt-pp-lb" => Ok(Family::ThreeOptPpLb),
            _ => Err(invalid(format!("unknown family `{s}`"))),
        }
    }
}

/// A generated instance with its locally optimal tour and a reference tour
/// (optimal or of bounded cost).
#[derive(Debug, Clone)]
pub struct FamilyOutput {
    pub instance: Instance,
    pub tour: Tour,
    pub reference_tour: Tour,
    pub claimed_tour_cost: u64,
    pub claimed_reference_bound: u64,
}

impl FamilyOutput {
    /// Fails unless the tour costs exactly what the construction claims and
    /// the reference tour stays within its bound.
    fn checked(self) -> Result<Self> {
        let cost = tour_cost(&self.instance, &self.tour)?;
        if cost != self.claimed_tour_cost {
            return Err(Error::Internal(format!(
                "constructed tour costs {cost}, expected {}",
                self.claimed_tour_cost
            )));
        }
        let reference = tour_cost(&self.instance, &self.reference_tour)?;
        if reference > self.claimed_reference_bound {
            return Err(Error::Internal(format!(
                "reference tour costs {reference}, above the bound {}",
                self.claimed_reference_bound
            )));
        }
        Ok(self)
    }
}

/// The 2-Opt family on `n >= 7` vertices (`v_1..v_n` mapped to `0..n-1`).
pub fn gen_two_opt_lb(n: usize) -> Result<FamilyOutput> {
    if n < 7 {
        return Err(invalid(format!("two-opt-lb needs n >= 7, got {n}")));
    }
    // 0-based: chords {i, i+2} for even i, path edges {i, i+1}, and {n-1, 0}
    let mut cost1: Vec<Edge> = (0..n - 2).step_by(2).map(|i| Edge::new(i, i + 2)).collect();
    cost1.extend((0..n - 1).map(|i| Edge::new(i, i + 1)));
    cost1.push(Edge::new(n - 1, 0));
    let instance = Instance::from_edge_set(n, cost1)?;

    // 0, 2, 4, ... up the even chain, then back down the odd chain
    let mut order: Vec<Vertex> = (0..n).step_by(2).collect();
    let top_odd = if n.is_multiple_of(2) { n - 1 } else { n - 2 };
    order.extend((1..=top_odd).rev().step_by(2));
    let tour = Tour::new(n, order)?;

    FamilyOutput {
        instance,
        tour,
        reference_tour: Tour::identity(n),
        claimed_tour_cost: (n + (n - 2) / 2) as u64,
        claimed_reference_bound: n as u64,
    }
    .checked()
}

/// Cost-1 edges of the 3-Opt family for one value of `h` (indices mod 8s),
/// grouped as the path edges followed by the four cycle classes.
fn three_opt_templates(s: usize, h: usize) -> ([Edge; 5], [[Edge; 2]; 4]) {
    let n = 8 * s;
    let v = |k: isize| -> Vertex { (8 * h as isize + k).rem_euclid(n as isize) as Vertex };
    let e = |a: isize, b: isize| Edge::new(v(a), v(b));
    let path = [e(0, 1), e(1, 2), e(2, 3), e(3, 4), e(4, 5)];
    let cycles = [
        [e(2, 5), e(2, 8 + 5)],
        [e(3, 0), e(3, -8)],
        [e(4, 6), e(4, 8 + 6)],
        [e(7, 8 + 1), e(7, 16 + 1)],
    ];
    (path, cycles)
}

/// The 3-Opt family on `8s` vertices, `s >= 3`, with the consecutive tour.
pub fn gen_three_opt_lb(s: usize) -> Result<FamilyOutput> {
    if s < 3 {
        return Err(invalid(format!("three-opt-lb needs s >= 3, got {s}")));
    }
    let n = 8 * s;
    let mut cost1 = Vec::with_capacity(13 * s);
    for h in 0..s {
        let (path, cycles) = three_opt_templates(s, h);
        cost1.extend(path);
        cost1.extend(cycles.iter().flatten());
    }
    let instance = Instance::from_edge_set(n, cost1)?;
    FamilyOutput {
        instance,
        tour: Tour::identity(n),
        reference_tour: build_three_opt_reference(s)?,
        claimed_tour_cost: 11 * s as u64,
        claimed_reference_bound: 8 * s as u64 + 4,
    }
    .checked()
}

/// Reference tour for the 3-Opt family: the four vertex-disjoint cost-1
/// cycles, each opened at its least edge and joined in listed order.
pub fn build_three_opt_reference(s: usize) -> Result<Tour> {
    if s < 3 {
        return Err(invalid(format!("three-opt-lb needs s >= 3, got {s}")));
    }
    let n = 8 * s;
    let mut order = Vec::with_capacity(n);
    for class in 0..4 {
        let mut edges: Vec<Edge> = (0..s)
            .flat_map(|h| three_opt_templates(s, h).1[class])
            .collect();
        edges.sort();
        edges.dedup();
        let cut = edges.remove(0);
        let path = walk_path(&edges, cut.lo(), cut.hi())
            .ok_or_else(|| Error::Internal(format!("cycle class {class} is not a single cycle")))?;
        order.extend(path);
    }
    Ok(Tour::new(n, order)?)
}

/// Follows `edges` from `from` to `to`, returning the vertex sequence if
/// they form one simple path between them.
fn walk_path(edges: &[Edge], from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
    let mut path = vec![from];
    let mut prev = usize::MAX;
    let mut cur = from;
    while cur != to {
        let next = edges
            .iter()
            .filter(|e| e.contains(cur))
            .map(|e| e.other(cur))
            .find(|&w| w != prev)?;
        if path.len() > edges.len() {
            return None;
        }
        prev = cur;
        cur = next;
        path.push(cur);
    }
    (path.len() == edges.len() + 1).then_some(path)
}

/// The 3-Opt++ family on `6s` vertices, `s >= 2`; the reference tour uses
/// only cost-1 edges.
pub fn gen_three_opt_pp_lb(s: usize) -> Result<FamilyOutput> {
    if s < 2 {
        return Err(invalid(format!("three-opt-pp-lb needs s >= 2, got {s}")));
    }
    let n = 6 * s;
    let m = |k: usize| k % n;
    let mut cost1 = Vec::with_capacity(7 * s);
    for h in 0..s {
        let b = 6 * h;
        cost1.extend([
            Edge::new(b, b + 1),
            Edge::new(b + 2, b + 3),
            Edge::new(b + 3, b + 4),
            Edge::new(b + 4, b + 5),
            Edge::new(b, b + 3),
            Edge::new(b + 2, b + 5),
            Edge::new(b + 4, m(b + 7)),
        ]);
    }
    let instance = Instance::from_edge_set(n, cost1)?;
    let optimal: Vec<Edge> = (0..n / 2)
        .flat_map(|h| [Edge::new(2 * h + 1, 2 * h), Edge::new(2 * h, m(2 * h + 3))])
        .collect();
    let reference_tour = Tour::from_cycle_edges(n, &optimal)
        .ok_or_else(|| Error::Internal("reference edges do not form a tour".into()))?;
    FamilyOutput {
        instance,
        tour: Tour::identity(n),
        reference_tour,
        claimed_tour_cost: 8 * s as u64,
        claimed_reference_bound: 6 * s as u64,
    }
    .checked()
}

/// Which regularity condition failed, with the offending cost-1 pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityViolation {
    /// `{i, j}` costs 1 but its shift by the segment length does not.
    NotShiftInvariant(Edge),
    /// `{i, j}` costs 1 but joins segments that are not neighbors.
    SpansSegments(Edge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub violation: Option<RegularityViolation>,
}

/// Checks the periodicity conditions on the member of `family` with
/// `segment_len * segments` vertices.
///
/// The vertex labeling condition holds by construction; the other two are
/// checked exhaustively over the cost-1 edges, which suffices because the
/// shift is a bijection on vertex pairs.
pub fn is_regular(family: Family, segments: usize, segment_len: usize) -> Result<RegularityReport> {
    let period = family
        .period()
        .ok_or_else(|| invalid(format!("{family} is not a periodic family")))?;
    if segments < 3 {
        return Err(invalid(format!("need at least 3 segments, got {segments}")));
    }
    if segment_len == 0 {
        return Err(invalid("segment length must be positive"));
    }
    let n = segment_len * segments;
    if !n.is_multiple_of(period) {
        return Err(invalid(format!(
            "{family} has {period}-vertex blocks, which do not divide {n} = {segment_len} x {segments}"
        )));
    }
    let instance = family.generate(n / period)?.instance;
    for &e in instance.cost1_edges() {
        let shifted = ((e.lo() + segment_len) % n, (e.hi() + segment_len) % n);
        if instance.cost(shifted.0, shifted.1) != 1 {
            return Ok(RegularityReport {
                regular: false,
                violation: Some(RegularityViolation::NotShiftInvariant(e)),
            });
        }
        let (a, b) = (e.lo() / segment_len, e.hi() / segment_len);
        let gap = (b + segments - a) % segments;
        if !(gap == 0 || gap == 1 || gap == segments - 1) {
            return Ok(RegularityReport {
                regular: false,
                violation: Some(RegularityViolation::SpansSegments(e)),
            });
        }
    }
    Ok(RegularityReport {
        regular: true,
        violation: None,
    })
}

/// Independent-edge random instance: every pair costs 1 with probability
/// `p`, drawn from ChaCha8 seeded with `seed`, pairs in lexicographic order.
pub fn random_instance(n: usize, p: f64, seed: u64) -> Result<Instance> {
    if n < 5 {
        return Err(invalid(format!("random instances need n >= 5, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cost1 = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                cost1.push(Edge::new(u, v));
            }
        }
    }
    Instance::new(n, cost1)
}

/// A uniformly shuffled tour drawn from ChaCha8 seeded with `seed`.
pub fn random_tour(n: usize, seed: u64) -> Tour {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    Tour::new(n, order).expect("a shuffle is a permutation")
}
