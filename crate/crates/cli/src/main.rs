use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use p12tsp::analysis::{
    analyze, dual_feasibility_check, fmt_ratio, gb_values, ratio_upper_bound, Rational,
};
use p12tsp::certify::{certify, Verdict};
use p12tsp::constructions::{random_instance, random_tour, Family};
use p12tsp::exact::{held_karp, DEFAULT_HELD_KARP_LIMIT};
use p12tsp::io::{parse_instance, parse_tour, write_instance, write_tour};
use p12tsp::moves::{local_search, Predicate};
use p12tsp::sweep::{sweep, SweepConfig};
use p12tsp::tour::{tour_cost, validate_tour};
use p12tsp::{Instance, Tour};

/// k-Opt and k-Opt++ local search, certification and analysis for the
/// (1,2)-TSP.
#[derive(Parser)]
#[command(name = "p12tsp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a lower-bound family member or a random instance.
    Gen(GenArgs),
    /// Run local search to a local optimum.
    Solve(SolveArgs),
    /// Certify that a tour admits no improving move.
    Certify(CertifyArgs),
    /// Compute an optimal tour with Held-Karp.
    Exact(ExactArgs),
    /// Distribute counters and check their properties.
    Analyze(AnalyzeArgs),
    /// Check the path capacities, the dual solution and the ratio bounds.
    VerifyLemmas(VerifyArgs),
    /// Compare certified local optima with exact optima on random instances.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    TwoOptLb,
    ThreeOptLb,
    ThreeOptPpLb,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Optimal,
    NonOptimal,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (two-opt-lb, random).
    #[arg(long)]
    n: Option<usize>,
    /// Segment count (three-opt-lb, three-opt-pp-lb).
    #[arg(long)]
    s: Option<usize>,
    /// Cost-1 edge probability for random instances.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact-solver cap for the reference tour of random instances.
    #[arg(long, default_value_t = DEFAULT_HELD_KARP_LIMIT)]
    limit: usize,
    #[arg(long)]
    out_instance: PathBuf,
    #[arg(long)]
    out_tour: PathBuf,
    #[arg(long)]
    out_reference: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Start tour; defaults to a seeded random tour, or the identity without --seed.
    #[arg(long)]
    tour: Option<PathBuf>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    k: u8,
    #[arg(long)]
    plus_plus: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_tour: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    tour: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    k: u8,
    #[arg(long)]
    plus_plus: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_HELD_KARP_LIMIT)]
    limit: usize,
    #[arg(long)]
    out_tour: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    tour: PathBuf,
    /// Fixed optimal tour; computed with Held-Karp when absent.
    #[arg(long)]
    optimal: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_HELD_KARP_LIMIT)]
    limit: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    max_i: i64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 6)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Instances per (n, p) pair.
    #[arg(long, default_value_t = 50)]
    per_n: usize,
    /// Edge probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_HELD_KARP_LIMIT)]
    limit: usize,
    /// Also write per-run records here.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Whether the run met its expectation; errors map to exit code 2.
type Outcome = anyhow::Result<bool>;

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("in instance file {}", path.display()))
}

fn read_tour(path: &Path, instance: &Instance) -> anyhow::Result<Tour> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let tour = parse_tour(&text).with_context(|| format!("in tour file {}", path.display()))?;
    validate_tour(instance, &tour)
        .with_context(|| format!("tour file {} does not match the instance", path.display()))?;
    Ok(tour)
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(report: &str, path: Option<&Path>) -> anyhow::Result<()> {
    println!("{report}");
    if let Some(path) = path {
        write(path, &format!("{report}\n"))?;
    }
    Ok(())
}

fn gen(args: GenArgs) -> Outcome {
    let need =
        |v: Option<usize>, flag: &str| v.with_context(|| format!("this family needs --{flag}"));
    let (instance, tour, reference) = match args.family {
        FamilyArg::Random => {
            let n = need(args.n, "n")?;
            let instance = random_instance(n, args.p, args.seed)?;
            let reference = match args.out_reference {
                Some(_) => Some(held_karp(&instance, args.limit)?.tour),
                None => None,
            };
            (instance, random_tour(n, args.seed), reference)
        }
        family => {
            let (family, param) = match family {
                FamilyArg::TwoOptLb => (Family::TwoOptLb, need(args.n, "n")?),
                FamilyArg::ThreeOptLb => (Family::ThreeOptLb, need(args.s, "s")?),
                _ => (Family::ThreeOptPpLb, need(args.s, "s")?),
            };
            let out = family.generate(param)?;
            (out.instance, out.tour, Some(out.reference_tour))
        }
    };
    write(&args.out_instance, &write_instance(&instance))?;
    write(&args.out_tour, &write_tour(&tour))?;
    let mut lines = vec![
        format!("n={}", instance.n()),
        format!("cost1_edges={}", instance.cost1_edges().len()),
        format!("tour_cost={}", tour_cost(&instance, &tour)?),
    ];
    if let (Some(path), Some(reference)) = (&args.out_reference, &reference) {
        write(path, &write_tour(reference))?;
        lines.push(format!(
            "reference_cost={}",
            tour_cost(&instance, reference)?
        ));
    }
    emit(&lines.join("\n"), None)?;
    Ok(true)
}

fn solve(args: SolveArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let n = instance.n();
    let start = match (&args.tour, args.seed) {
        (Some(path), _) => read_tour(path, &instance)?,
        (None, Some(seed)) => random_tour(n, seed),
        (None, None) => Tour::identity(n),
    };
    let k = usize::from(args.k);
    let (tour, stats) = local_search(&instance, &start, k, args.plus_plus)?;
    if let Some(path) = &args.out_tour {
        write(path, &write_tour(&tour))?;
    }
    let lines = [
        format!("start_cost={}", tour_cost(&instance, &start)?),
        format!("final_cost={}", stats.final_cost),
        format!("moves_applied={}", stats.moves_applied),
        format!("iterations={}", stats.iterations),
        format!("zero_paths={}", stats.final_zero_paths),
    ];
    emit(&lines.join("\n"), None)?;
    Ok(true)
}

fn run_certify(args: CertifyArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let tour = read_tour(&args.tour, &instance)?;
    let predicate = Predicate::from_plus_plus(args.plus_plus);
    let cert = certify(
        &instance,
        &tour,
        usize::from(args.k),
        predicate,
        args.workers,
    )?;
    emit(&cert.to_string(), args.report.as_deref())?;
    Ok(match args.expect {
        None => true,
        Some(Expect::Optimal) => cert.verdict == Verdict::Optimal,
        Some(Expect::NonOptimal) => cert.verdict == Verdict::NonOptimal,
    })
}

fn exact(args: ExactArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let result = held_karp(&instance, args.limit)?;
    if let Some(path) = &args.out_tour {
        write(path, &write_tour(&result.tour))?;
    }
    emit(&format!("cost={}", result.cost), None)?;
    Ok(true)
}

fn run_analyze(args: AnalyzeArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let tour = read_tour(&args.tour, &instance)?;
    let optimal = match &args.optimal {
        Some(path) => read_tour(path, &instance)?,
        None => held_karp(&instance, args.limit)?.tour,
    };
    let report = analyze(&instance, &tour, &optimal)?;
    emit(&report.to_string(), args.report.as_deref())?;
    Ok(true)
}

fn verify_lemmas(args: VerifyArgs) -> Outcome {
    let dual = dual_feasibility_check(args.max_i)?;
    let mut lines = vec![format!("max_i={}", dual.max_i)];
    for i in 0..=6 {
        let gb = gb_values(i)?;
        lines.push(format!("gb i={} g={} b={}", gb.i, gb.g, gb.b));
    }
    for r in &dual.slack {
        lines.push(format!(
            "slack residue={} min={} max={} count={}",
            r.residue, r.min_slack, r.max_slack, r.count
        ));
    }
    lines.push(format!("dual_feasible={}", dual.feasible));
    if let Some(i) = dual.first_violation {
        lines.push(format!("first_violation={i}"));
    }
    let b1 = ratio_upper_bound(Rational::new(12, 5))?;
    let b2 = ratio_upper_bound(Rational::from_integer(2))?;
    lines.push(format!("bound d=12/5 ratio={}", fmt_ratio(b1)));
    lines.push(format!("bound d=2/1 ratio={}", fmt_ratio(b2)));
    let bounds_ok = b1 == Rational::new(11, 8) && b2 == Rational::new(4, 3);
    lines.push(format!("bounds_ok={bounds_ok}"));
    emit(&lines.join("\n"), args.report.as_deref())?;
    Ok(dual.feasible && bounds_ok)
}

fn run_sweep(args: SweepArgs) -> Outcome {
    let cfg = SweepConfig {
        n_min: args.n_min,
        n_max: args.n_max,
        per_n: args.per_n,
        probabilities: args.p,
        seed: args.seed,
        workers: args.workers,
        limit: args.limit,
    };
    let report = sweep(&cfg)?;
    if let Some(path) = &args.report {
        write(path, &format!("{report}\n"))?;
    }
    emit(&report.summary(), None)?;
    let clean = report.violating_runs().next().is_none();
    Ok(clean)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Certify(a) => run_certify(a),
        Command::Exact(a) => exact(a),
        Command::Analyze(a) => run_analyze(a),
        Command::VerifyLemmas(a) => verify_lemmas(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("expectation not met");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
