//! k-Opt and k-Opt++ local search for the (1,2)-TSP, with exhaustive
//! local-optimality certificates, the known lower-bound families, exact
//! solvers for small instances and the counter accounting behind the
//! `11/8` and `4/3` upper bounds.

pub mod analysis;
pub mod certify;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod instance;
pub mod io;
pub mod moves;
pub mod sweep;
pub mod tour;

pub use analysis::{
    analyze, check_counter_properties, count_bound_check, distribute_counters,
    dual_feasibility_check, gb_values, pp_count_bound_check, pp_path_checks, ratio_report,
    ratio_upper_bound, AnalysisReport, CounterLedger, Rational,
};
pub use certify::{
    certify, certify_k_optimal, certify_kpp_optimal, endpoint_pair_violations,
    find_forbidden_constellation, Certificate, Verdict,
};
pub use constructions::{
    gen_three_opt_lb, gen_three_opt_pp_lb, gen_two_opt_lb, is_regular, random_instance,
    random_tour, Family, FamilyOutput,
};
pub use error::{Error, Result, TourError};
pub use exact::{brute_force, held_karp, ExactResult};
pub use instance::{Edge, Instance, Vertex};
pub use moves::{
    apply_move, enumerate_kmoves, find_improving, local_search, move_gain, KMove, Predicate,
};
pub use sweep::{sweep, SweepConfig, SweepReport};
pub use tour::{one_path_decomposition, tour_cost, Tour};
