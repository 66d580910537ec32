//! Counter accounting for locally optimal tours.
//!
//! Counters are placed on the vertices of a tour `T` through the cost-1
//! edges of a fixed optimal tour `T*`: a length-0 1-path `{v}` puts two good
//! counters on each `T*`-neighbor `w` with `c(v,w) = 1`, and each endpoint
//! `v` of a longer 1-path puts one bad counter on each such `w`. On 3-optimal
//! tours these counters obey a handful of local rules, which bound their
//! number by `12/5` per cost-1 tour edge; that in turn bounds the ratio
//! `c(T) / c(T*)` by `1 + d/(4+d)` with `d = 12/5`. For 3-Opt++-optimal
//! tours the budget drops to `d = 2`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::instance::{Edge, Instance, Vertex};
use crate::tour::{
    edge_counts, one_path_decomposition, tour_cost, validate_tour, PathDecomposition, Tour,
};

pub type Rational = Ratio<i64>;

/// Formats a rational as `p/q`, also when `q = 1`.
pub fn fmt_ratio(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CounterKind {
    Good,
    Bad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Counter {
    pub kind: CounterKind,
    /// Vertex the counter sits on.
    pub at: Vertex,
    /// Index of the distributing 1-path in the decomposition of `T`.
    pub source_path: usize,
    /// The distributing endpoint.
    pub from: Vertex,
    /// The cost-1 `T*` edge `{from, at}`.
    pub via_edge: Edge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterLedger {
    pub counters: Vec<Counter>,
    /// Cost-1 edges of `T`.
    pub h: usize,
    /// Cost-2 edges of `T`.
    pub l: usize,
    /// Cost-2 edges of `T*`.
    pub f: usize,
    /// The optimal tour the counters were distributed through.
    pub optimal: Tour,
}

impl CounterLedger {
    pub fn total(&self) -> usize {
        self.counters.len()
    }

    pub fn good(&self) -> usize {
        self.counters
            .iter()
            .filter(|c| c.kind == CounterKind::Good)
            .count()
    }

    pub fn bad(&self) -> usize {
        self.total() - self.good()
    }

    /// `(good, bad)` counter totals on every vertex.
    pub fn per_vertex(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); n];
        for c in &self.counters {
            match c.kind {
                CounterKind::Good => out[c.at].0 += 1,
                CounterKind::Bad => out[c.at].1 += 1,
            }
        }
        out
    }
}

/// Distributes counters on `tour` through the cost-1 edges of `optimal`.
pub fn distribute_counters(
    instance: &Instance,
    tour: &Tour,
    optimal: &Tour,
) -> Result<CounterLedger> {
    validate_tour(instance, optimal)?;
    let dec = one_path_decomposition(instance, tour)?;
    let counts = edge_counts(instance, tour)?;
    let opt_counts = edge_counts(instance, optimal)?;
    let star = optimal.neighbors();
    let mut counters = Vec::new();
    for (pid, path) in dec.paths.iter().enumerate() {
        let (a, b) = path.endpoints();
        let (kind, copies, ends): (_, usize, &[Vertex]) = if path.is_trivial() {
            (CounterKind::Good, 2, &[a][..])
        } else {
            (CounterKind::Bad, 1, &[a, b][..])
        };
        for &v in ends {
            let (x, y) = star[v];
            for w in [x, y] {
                if instance.cost(v, w) == 1 {
                    for _ in 0..copies {
                        counters.push(Counter {
                            kind,
                            at: w,
                            source_path: pid,
                            from: v,
                            via_edge: Edge::new(v, w),
                        });
                    }
                }
            }
        }
    }
    Ok(CounterLedger {
        counters,
        h: counts.cost1,
        l: counts.cost2,
        f: opt_counts.cost2,
        optimal: optimal.clone(),
    })
}

/// Result of one counter rule, with the vertices of the first violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub passed: bool,
    pub witness: Vec<Vertex>,
}

impl PropertyCheck {
    fn pass() -> Self {
        PropertyCheck {
            passed: true,
            witness: Vec::new(),
        }
    }

    fn fail(witness: Vec<Vertex>) -> Self {
        PropertyCheck {
            passed: false,
            witness,
        }
    }

    fn from_first(witness: Option<Vec<Vertex>>) -> Self {
        witness.map_or_else(Self::pass, Self::fail)
    }
}

/// The five counter rules that hold on every 3-optimal tour:
///
/// 1. counters on a vertex group by `via_edge` into at most two slots, each
///    holding exactly two good counters or exactly one bad counter;
/// 2. no two vertices with good counters are tour neighbors, and a vertex
///    between two of them carries no counter;
/// 3. the vertex of a length-0 path carries no counter, and an endpoint of
///    a longer path carries at most one bad and no good counter;
/// 4. if a path endpoint `p` carries a counter, no cost-1 tour neighbor of
///    `p` carries a good counter;
/// 5. bad counters number at most four per path of length > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub properties: [PropertyCheck; 5],
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    /// Five characters, `p` for pass and `f` for fail, in rule order.
    pub fn summary(&self) -> String {
        self.properties
            .iter()
            .map(|p| if p.passed { 'p' } else { 'f' })
            .collect()
    }
}

pub fn check_counter_properties(
    instance: &Instance,
    tour: &Tour,
    ledger: &CounterLedger,
) -> Result<PropertyReport> {
    let n = instance.n();
    let dec = one_path_decomposition(instance, tour)?;
    let counts = ledger.per_vertex(n);
    let has_good = |v: Vertex| counts[v].0 > 0;
    let has_any = |v: Vertex| counts[v].0 + counts[v].1 > 0;

    let prop1 = {
        let mut slots: BTreeMap<(Vertex, Edge), (usize, usize)> = BTreeMap::new();
        for c in &ledger.counters {
            let slot = slots.entry((c.at, c.via_edge)).or_default();
            match c.kind {
                CounterKind::Good => slot.0 += 1,
                CounterKind::Bad => slot.1 += 1,
            }
        }
        let mut per_vertex = vec![0usize; n];
        let mut witness = None;
        for (&(v, _), &content) in &slots {
            per_vertex[v] += 1;
            if !(content == (2, 0) || content == (0, 1)) || per_vertex[v] > 2 {
                witness = Some(vec![v]);
                break;
            }
        }
        PropertyCheck::from_first(witness)
    };

    let order = tour.order();
    let prop2 = {
        let mut witness = None;
        for i in 0..n {
            let (a, b, c) = (order[i], order[(i + 1) % n], order[(i + 2) % n]);
            if has_good(a) && has_good(b) {
                witness = Some(vec![a, b]);
                break;
            }
            if has_good(a) && has_good(c) && has_any(b) {
                witness = Some(vec![a, b, c]);
                break;
            }
        }
        PropertyCheck::from_first(witness)
    };

    let prop3 = PropertyCheck::from_first(dec.paths.iter().find_map(|path| {
        let (a, b) = path.endpoints();
        if path.is_trivial() {
            has_any(a).then(|| vec![a])
        } else {
            [a, b]
                .into_iter()
                .find(|&p| counts[p].0 > 0 || counts[p].1 > 1)
                .map(|p| vec![p])
        }
    }));

    let prop4 = {
        let nb = tour.neighbors();
        let witness = dec.paths.iter().find_map(|path| {
            let (a, b) = path.endpoints();
            [a, b].into_iter().filter(|&p| has_any(p)).find_map(|p| {
                let (x, y) = nb[p];
                [x, y]
                    .into_iter()
                    .find(|&w| instance.cost(w, p) == 1 && has_good(w))
                    .map(|w| vec![p, w])
            })
        });
        PropertyCheck::from_first(witness)
    };

    let prop5 = {
        let long_paths = dec.paths.iter().filter(|p| !p.is_trivial()).count();
        if ledger.bad() <= 4 * long_paths {
            PropertyCheck::pass()
        } else {
            PropertyCheck::fail(Vec::new())
        }
    };

    Ok(PropertyReport {
        properties: [prop1, prop2, prop3, prop4, prop5],
    })
}

/// Whether the ledger stays within `12/5` counters per cost-1 tour edge.
pub fn count_bound_check(ledger: &CounterLedger) -> bool {
    5 * ledger.total() <= 12 * ledger.h
}

/// Whether the ledger stays within `2` counters per cost-1 tour edge.
pub fn pp_count_bound_check(ledger: &CounterLedger) -> bool {
    5 * ledger.total() <= 10 * ledger.h
}

/// Good and bad counter capacities of a 1-path with `i` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbPair {
    pub i: i64,
    pub g: i64,
    pub b: i64,
}

pub fn gb_values(i: i64) -> Result<GbPair> {
    if i < 0 {
        return Err(invalid(format!(
            "path length must be non-negative, got {i}"
        )));
    }
    let (g, b) = match (i, i % 3) {
        (0, _) => (0, 0),
        (_, 0) => (4 * i / 3, 4 * i / 3 - 2),
        (_, 1) => (4 * (i - 1) / 3, 4 * (i - 1) / 3 + 2),
        _ => (4 * (i + 1) / 3, 4 * (i - 2) / 3),
    };
    Ok(GbPair { i, g, b })
}

/// Dual multipliers `(12/5, 4/5, 1/5)` scaled by 15.
const DUAL_SCALE: i64 = 15;
const DUAL_Y: [i64; 3] = [36, 12, 3];

/// Minimum and maximum scaled slack of the dual constraints over one
/// residue class of `i mod 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueSlack {
    pub residue: i64,
    pub min_slack: i64,
    pub max_slack: i64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualReport {
    pub feasible: bool,
    pub max_i: i64,
    /// First `i` whose constraint fails, if any.
    pub first_violation: Option<i64>,
    pub slack: Vec<ResidueSlack>,
}

/// Scaled slack `15 (i y1 - b_i y2 - 4 y3 - g_i)` of the dual constraint
/// for paths with `i` edges.
pub fn dual_slack(i: i64) -> Result<i64> {
    let GbPair { g, b, .. } = gb_values(i)?;
    Ok(i * DUAL_Y[0] - b * DUAL_Y[1] - 4 * DUAL_Y[2] - DUAL_SCALE * g)
}

/// Verifies the dual solution `y = (12/5, 4/5, 1/5)` for all `1 <= i <= max_i`
/// in exact integer arithmetic.
pub fn dual_feasibility_check(max_i: i64) -> Result<DualReport> {
    if max_i < 1 {
        return Err(invalid(format!("max_i must be at least 1, got {max_i}")));
    }
    let side_ok = DUAL_Y[1] + DUAL_Y[2] >= DUAL_SCALE && DUAL_Y.iter().all(|&y| y >= 0);
    let mut first_violation = None;
    let mut slack: Vec<ResidueSlack> = (0..3)
        .map(|r| ResidueSlack {
            residue: r,
            min_slack: i64::MAX,
            max_slack: i64::MIN,
            count: 0,
        })
        .collect();
    for i in 1..=max_i {
        let s = dual_slack(i)?;
        if s < 0 && first_violation.is_none() {
            first_violation = Some(i);
        }
        let entry = &mut slack[(i % 3) as usize];
        entry.min_slack = entry.min_slack.min(s);
        entry.max_slack = entry.max_slack.max(s);
        entry.count += 1;
    }
    slack.retain(|r| r.count > 0);
    Ok(DualReport {
        feasible: side_ok && first_violation.is_none(),
        max_i,
        first_violation,
        slack,
    })
}

/// `1 + d / (4 + d)`.
pub fn ratio_upper_bound(d: Rational) -> Result<Rational> {
    if d < Rational::from_integer(0) {
        return Err(invalid(format!(
            "counter density must be non-negative, got {}",
            fmt_ratio(d)
        )));
    }
    Ok(Rational::from_integer(1) + d / (Rational::from_integer(4) + d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpReport {
    /// Every 1-path carrying a good counter has exactly two edges.
    pub good_paths_have_two_edges: PropertyCheck,
    /// Every 1-path with `x` edges carries at most `2x` counters.
    pub per_path_budget: PropertyCheck,
}

impl PpReport {
    pub fn all_pass(&self) -> bool {
        self.good_paths_have_two_edges.passed && self.per_path_budget.passed
    }
}

/// Per-path rules for 3-Opt++-optimal tours. Witnesses are path vertex
/// lists.
pub fn pp_path_checks(
    instance: &Instance,
    tour: &Tour,
    ledger: &CounterLedger,
) -> Result<PpReport> {
    let dec = one_path_decomposition(instance, tour)?;
    let counts = ledger.per_vertex(instance.n());
    let carried = |p: &[Vertex]| -> (usize, usize) {
        p.iter()
            .fold((0, 0), |(g, b), &v| (g + counts[v].0, b + counts[v].1))
    };
    let two_edges = dec
        .paths
        .iter()
        .find(|p| carried(p.vertices()).0 > 0 && p.edge_count() != 2)
        .map(|p| p.vertices().to_vec());
    let budget = dec
        .paths
        .iter()
        .find(|p| {
            let (g, b) = carried(p.vertices());
            g + b > 2 * p.edge_count()
        })
        .map(|p| p.vertices().to_vec());
    Ok(PpReport {
        good_paths_have_two_edges: PropertyCheck::from_first(two_edges),
        per_path_budget: PropertyCheck::from_first(budget),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub h: usize,
    pub l: usize,
    pub f: usize,
    pub cost_tour: u64,
    pub cost_reference: u64,
    pub ratio: Rational,
    /// `1 + d/(4+d)` at `d = 12/5`.
    pub bound_three_opt: Rational,
    /// `1 + d/(4+d)` at `d = 2`.
    pub bound_three_opt_pp: Rational,
}

pub fn ratio_report(instance: &Instance, tour: &Tour, reference: &Tour) -> Result<RatioReport> {
    let counts = edge_counts(instance, tour)?;
    let ref_counts = edge_counts(instance, reference)?;
    let cost_tour = tour_cost(instance, tour)?;
    let cost_reference = tour_cost(instance, reference)?;
    Ok(RatioReport {
        h: counts.cost1,
        l: counts.cost2,
        f: ref_counts.cost2,
        cost_tour,
        cost_reference,
        ratio: Rational::new(cost_tour as i64, cost_reference as i64),
        bound_three_opt: ratio_upper_bound(Rational::new(12, 5))?,
        bound_three_opt_pp: ratio_upper_bound(Rational::from_integer(2))?,
    })
}

/// Everything the analysis computes for one (tour, optimal tour) pair.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub ledger: CounterLedger,
    pub properties: PropertyReport,
    pub pp: PpReport,
    pub ratio: RatioReport,
    pub zero_paths: usize,
}

impl AnalysisReport {
    pub fn bound_ok(&self) -> bool {
        count_bound_check(&self.ledger)
    }
}

pub fn analyze(instance: &Instance, tour: &Tour, optimal: &Tour) -> Result<AnalysisReport> {
    let ledger = distribute_counters(instance, tour, optimal)?;
    let properties = check_counter_properties(instance, tour, &ledger)?;
    let pp = pp_path_checks(instance, tour, &ledger)?;
    let ratio = ratio_report(instance, tour, optimal)?;
    let dec: PathDecomposition = one_path_decomposition(instance, tour)?;
    Ok(AnalysisReport {
        ledger,
        properties,
        pp,
        ratio,
        zero_paths: dec.zero_paths(),
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pf = |ok: bool| if ok { "pass" } else { "fail" };
        writeln!(f, "h={}", self.ledger.h)?;
        writeln!(f, "l={}", self.ledger.l)?;
        writeln!(f, "f={}", self.ledger.f)?;
        writeln!(f, "zero_paths={}", self.zero_paths)?;
        writeln!(f, "counters_total={}", self.ledger.total())?;
        writeln!(f, "counters_good={}", self.ledger.good())?;
        writeln!(f, "counters_bad={}", self.ledger.bad())?;
        writeln!(f, "bound_ok={}", self.bound_ok())?;
        writeln!(f, "pp_bound_ok={}", pp_count_bound_check(&self.ledger))?;
        for (i, p) in self.properties.properties.iter().enumerate() {
            writeln!(f, "prop{}={}", i + 1, pf(p.passed))?;
            if !p.passed && !p.witness.is_empty() {
                let w: Vec<String> = p.witness.iter().map(|v| v.to_string()).collect();
                writeln!(f, "prop{}_witness={}", i + 1, w.join(","))?;
            }
        }
        writeln!(
            f,
            "pp_two_edges={}",
            pf(self.pp.good_paths_have_two_edges.passed)
        )?;
        writeln!(f, "pp_path_budget={}", pf(self.pp.per_path_budget.passed))?;
        writeln!(f, "cost_tour={}", self.ratio.cost_tour)?;
        writeln!(f, "cost_reference={}", self.ratio.cost_reference)?;
        writeln!(f, "ratio={}", fmt_ratio(self.ratio.ratio))?;
        writeln!(f, "bound_3opt={}", fmt_ratio(self.ratio.bound_three_opt))?;
        write!(
            f,
            "bound_3opt_pp={}",
            fmt_ratio(self.ratio.bound_three_opt_pp)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gb_closed_forms() {
        let gb = |i| {
            let p = gb_values(i).unwrap();
            (p.g, p.b)
        };
        assert_eq!(gb(0), (0, 0));
        assert_eq!(gb(1), (0, 2));
        assert_eq!(gb(2), (4, 0));
        assert_eq!(gb(3), (4, 2));
        assert_eq!(gb(4), (4, 6));
        assert_eq!(gb(5), (8, 4));
        assert!(gb_values(-1).is_err());
    }

    #[test]
    fn dual_slack_values() {
        assert_eq!(dual_slack(1).unwrap(), 0);
        assert_eq!(dual_slack(2).unwrap(), 0);
        assert_eq!(dual_slack(3).unwrap(), 12);
        assert!(dual_feasibility_check(0).is_err());
    }

    #[test]
    fn ratio_bounds() {
        assert_eq!(
            ratio_upper_bound(Rational::new(12, 5)).unwrap(),
            Rational::new(11, 8)
        );
        assert_eq!(
            ratio_upper_bound(Rational::from_integer(2)).unwrap(),
            Rational::new(4, 3)
        );
        assert_eq!(
            ratio_upper_bound(Rational::from_integer(0)).unwrap(),
            Rational::from_integer(1)
        );
        assert!(ratio_upper_bound(Rational::new(-1, 2)).is_err());
        assert_eq!(fmt_ratio(Rational::from_integer(1)), "1/1");
    }

    #[test]
    fn whole_cycle_tour_has_no_counters() {
        let inst = Instance::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let t = Tour::identity(5);
        let ledger = distribute_counters(&inst, &t, &t).unwrap();
        assert_eq!(ledger.total(), 0);
        assert!(count_bound_check(&ledger));
        assert!(check_counter_properties(&inst, &t, &ledger)
            .unwrap()
            .all_pass());
        assert!(pp_path_checks(&inst, &t, &ledger).unwrap().all_pass());
        assert_eq!(
            ratio_report(&inst, &t, &t).unwrap().ratio,
            Rational::from_integer(1)
        );
    }
}
