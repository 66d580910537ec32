//! Random-instance sweeps comparing certified local optima against exact
//! optima.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{
    analyze, count_bound_check, fmt_ratio, pp_count_bound_check, ratio_upper_bound, Rational,
};
use crate::certify::{certify, endpoint_pair_violations, find_forbidden_constellation};
use crate::constructions::{random_instance, random_tour};
use crate::error::{invalid, Error, Result};
use crate::exact::{held_karp, DEFAULT_HELD_KARP_LIMIT};
use crate::moves::{local_search, Predicate};
use crate::tour::Tour;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub per_n: usize,
    pub probabilities: Vec<f64>,
    pub seed: u64,
    pub workers: usize,
    /// Exact-solver cap.
    pub limit: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_min: 6,
            n_max: 12,
            per_n: 50,
            probabilities: vec![0.5],
            seed: 42,
            workers: 1,
            limit: DEFAULT_HELD_KARP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    ThreeOpt,
    ThreeOptPp,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ThreeOpt => "3opt",
            Algorithm::ThreeOptPp => "3opt_pp",
        }
    }

    fn predicate(self) -> Predicate {
        match self {
            Algorithm::ThreeOpt => Predicate::Plain,
            Algorithm::ThreeOptPp => Predicate::PlusPlus,
        }
    }

    /// Worst ratio the counter argument allows for this algorithm.
    pub fn ratio_bound(self) -> Rational {
        let d = match self {
            Algorithm::ThreeOpt => Rational::new(12, 5),
            Algorithm::ThreeOptPp => Rational::from_integer(2),
        };
        ratio_upper_bound(d).expect("non-negative density")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Identity,
    Random,
}

impl Start {
    pub fn name(self) -> &'static str {
        match self {
            Start::Identity => "identity",
            Start::Random => "random",
        }
    }
}

/// Which checks a single run failed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Violations {
    pub not_certified: bool,
    pub ratio: bool,
    pub properties: bool,
    pub endpoint_pairs: bool,
    pub constellation: bool,
    pub count_bound: bool,
    pub pp_paths: bool,
    pub pp_count_bound: bool,
}

impl Violations {
    pub fn any(&self) -> bool {
        self.not_certified
            || self.ratio
            || self.properties
            || self.endpoint_pairs
            || self.constellation
            || self.count_bound
            || self.pp_paths
            || self.pp_count_bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub instance: usize,
    pub n: usize,
    pub p: String,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub start: Start,
    pub cost: u64,
    pub optimum: u64,
    pub ratio: Rational,
    pub counters: usize,
    pub h: usize,
    pub properties: String,
    pub violations: Violations,
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "run instance={} n={} p={} seed={} algo={} start={} cost={} opt={} ratio={} counters={} h={} props={} ok={}",
            self.instance,
            self.n,
            self.p,
            self.seed,
            self.algorithm.name(),
            self.start.name(),
            self.cost,
            self.optimum,
            fmt_ratio(self.ratio),
            self.counters,
            self.h,
            self.properties,
            !self.violations.any()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub instances: usize,
    pub runs: Vec<RunRecord>,
}

impl SweepReport {
    pub fn max_ratio(&self, algorithm: Algorithm) -> Option<Rational> {
        self.runs
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| r.ratio)
            .max()
    }

    pub fn violating_runs(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter(|r| r.violations.any())
    }

    fn count(&self, pick: impl Fn(&Violations) -> bool) -> usize {
        self.runs.iter().filter(|r| pick(&r.violations)).count()
    }

    /// Aggregate `key=value` lines without the per-run records.
    pub fn summary(&self) -> String {
        let mut lines = vec![
            format!("instances={}", self.instances),
            format!("runs={}", self.runs.len()),
        ];
        for algo in [Algorithm::ThreeOpt, Algorithm::ThreeOptPp] {
            let max = self
                .max_ratio(algo)
                .map_or_else(|| "none".to_string(), fmt_ratio);
            lines.push(format!("max_ratio_{}={}", algo.name(), max));
            lines.push(format!(
                "bound_{}={}",
                algo.name(),
                fmt_ratio(algo.ratio_bound())
            ));
        }
        type Pick = fn(&Violations) -> bool;
        let counts: [(&str, Pick); 8] = [
            ("not_certified", |v| v.not_certified),
            ("ratio", |v| v.ratio),
            ("properties", |v| v.properties),
            ("endpoint_pairs", |v| v.endpoint_pairs),
            ("constellation", |v| v.constellation),
            ("count_bound", |v| v.count_bound),
            ("pp_paths", |v| v.pp_paths),
            ("pp_count_bound", |v| v.pp_count_bound),
        ];
        for (name, pick) in counts {
            lines.push(format!("violations_{name}={}", self.count(pick)));
        }
        lines.push(format!(
            "violations_total={}",
            self.violating_runs().count()
        ));
        lines.join("\n")
    }
}

impl fmt::Display for SweepReport {
    /// Per-run lines followed by the summary.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.runs {
            writeln!(f, "{r}")?;
        }
        write!(f, "{}", self.summary())
    }
}

struct Job {
    index: usize,
    n: usize,
    p: f64,
    seed: u64,
}

fn run_instance(job: &Job, limit: usize) -> Result<Vec<RunRecord>> {
    let instance = random_instance(job.n, job.p, job.seed)?;
    let exact = held_karp(&instance, limit)?;
    let starts = [
        (Start::Identity, Tour::identity(job.n)),
        (
            Start::Random,
            random_tour(job.n, job.seed ^ 0x9e37_79b9_7f4a_7c15),
        ),
    ];
    let mut out = Vec::new();
    for algorithm in [Algorithm::ThreeOpt, Algorithm::ThreeOptPp] {
        let pp = algorithm == Algorithm::ThreeOptPp;
        for (start, tour0) in &starts {
            let (tour, stats) = local_search(&instance, tour0, 3, pp)?;
            let cert = certify(&instance, &tour, 3, algorithm.predicate(), 1)?;
            let report = analyze(&instance, &tour, &exact.tour)?;
            let ratio = Rational::new(stats.final_cost as i64, exact.cost as i64);
            let mut v = Violations {
                not_certified: !cert.is_optimal(),
                ratio: ratio > algorithm.ratio_bound(),
                ..Violations::default()
            };
            if cert.is_optimal() {
                v.properties = !report.properties.all_pass();
                v.endpoint_pairs = !endpoint_pair_violations(&instance, &tour)?.is_empty();
                v.constellation = find_forbidden_constellation(&instance, &tour)?.is_some();
                v.count_bound = !count_bound_check(&report.ledger);
                if pp {
                    v.pp_paths = !report.pp.all_pass();
                    v.pp_count_bound = !pp_count_bound_check(&report.ledger);
                }
            }
            out.push(RunRecord {
                instance: job.index,
                n: job.n,
                p: job.p.to_string(),
                seed: job.seed,
                algorithm,
                start: *start,
                cost: stats.final_cost,
                optimum: exact.cost,
                ratio,
                counters: report.ledger.total(),
                h: report.ledger.h,
                properties: report.properties.summary(),
                violations: v,
            });
        }
    }
    Ok(out)
}

/// Runs 3-Opt and 3-Opt++ from the identity tour and from a seeded random
/// tour on every generated instance, certifies each output, and checks its
/// ratio and counter structure against the Held-Karp optimum.
///
/// Instance seeds are drawn in order from one generator seeded with
/// `config.seed`, so the report depends only on the configuration.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.n_min < 5 || config.n_min > config.n_max {
        return Err(invalid(format!(
            "n range {}..={} must be non-empty with n >= 5",
            config.n_min, config.n_max
        )));
    }
    let limit = config.limit.min(crate::exact::HELD_KARP_MAX);
    if config.n_max > limit {
        return Err(Error::SizeExceeded {
            n: config.n_max,
            limit,
        });
    }
    if config.probabilities.is_empty() {
        return Err(invalid("at least one edge probability is required"));
    }
    if let Some(p) = config
        .probabilities
        .iter()
        .find(|p| !(0.0..=1.0).contains(*p))
    {
        return Err(invalid(format!("probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut jobs = Vec::new();
    for n in config.n_min..=config.n_max {
        for &p in &config.probabilities {
            for _ in 0..config.per_n {
                jobs.push(Job {
                    index: jobs.len(),
                    n,
                    p,
                    seed: rng.gen(),
                });
            }
        }
    }
    let results: Vec<Result<Vec<RunRecord>>> = if config.workers <= 1 {
        jobs.iter().map(|j| run_instance(j, limit)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| invalid(format!("cannot start {} workers: {e}", config.workers)))?;
        pool.install(|| jobs.par_iter().map(|j| run_instance(j, limit)).collect())
    };
    let mut runs = Vec::new();
    for r in results {
        runs.extend(r?);
    }
    Ok(SweepReport {
        instances: jobs.len(),
        runs,
    })
}
