//! Worked examples with hand-derived expectations.

use p12tsp::analysis::{
    check_counter_properties, count_bound_check, distribute_counters, pp_path_checks, ratio_report,
    CounterKind, Rational,
};
use p12tsp::certify::{
    certify_k_optimal, certify_kpp_optimal, endpoint_pair_violations, find_forbidden_constellation,
};
use p12tsp::constructions::{gen_three_opt_lb, gen_three_opt_pp_lb, gen_two_opt_lb};
use p12tsp::exact::{brute_force, held_karp};
use p12tsp::moves::{
    apply_move, count_zero_paths, find_improving, is_improving_pp, local_search, KMove,
};
use p12tsp::tour::{one_path_decomposition, tour_cost};
use p12tsp::{Edge, Instance, Tour};

fn hexa() -> (Instance, Tour, Tour) {
    let inst = Instance::new(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (0, 2)]).unwrap();
    (
        inst,
        Tour::identity(6),
        Tour::new(6, vec![0, 2, 3, 4, 5, 1]).unwrap(),
    )
}

/// Isolated `u` whose cost-1 neighbor `w` sits inside the path
/// `v1 x p w q r v2`; labels u=0 v1=1 x=2 p=3 w=4 q=5 r=6 v2=7.
fn isolated_vertex_fixture() -> Instance {
    Instance::new(8, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 4)]).unwrap()
}

fn edges(list: &[(usize, usize)]) -> Vec<Edge> {
    list.iter().map(|&e| e.into()).collect()
}

#[test]
fn hexa_ledger() {
    let (inst, t, t_star) = hexa();
    assert_eq!(tour_cost(&inst, &t).unwrap(), 8);
    assert_eq!(tour_cost(&inst, &t_star).unwrap(), 7);
    assert_eq!(brute_force(&inst).unwrap().cost, 7);

    let ledger = distribute_counters(&inst, &t, &t_star).unwrap();
    let mut seen: Vec<(CounterKind, usize, usize, Edge)> = ledger
        .counters
        .iter()
        .map(|c| (c.kind, c.at, c.from, c.via_edge))
        .collect();
    seen.sort();
    let mut want = vec![
        (CounterKind::Good, 2, 0, Edge::new(0, 2)),
        (CounterKind::Good, 2, 0, Edge::new(0, 2)),
        (CounterKind::Bad, 5, 1, Edge::new(1, 5)),
        (CounterKind::Bad, 4, 5, Edge::new(4, 5)),
        (CounterKind::Bad, 1, 5, Edge::new(1, 5)),
    ];
    want.sort();
    assert_eq!(seen, want);
    assert_eq!((ledger.h, ledger.l, ledger.f), (4, 2, 1));
    assert!(count_bound_check(&ledger));

    let props = check_counter_properties(&inst, &t, &ledger).unwrap();
    assert_eq!(props.summary(), "pppfp");
    assert_eq!(props.properties[3].witness, vec![1, 2]);
    assert!(endpoint_pair_violations(&inst, &t).unwrap().is_empty());

    let witness = find_improving(&inst, &t, 3, false)
        .unwrap()
        .expect("improving move");
    assert_eq!(witness.gain(), 1);
    let cert = certify_k_optimal(&inst, &t, 3).unwrap();
    assert_eq!(cert.witness, Some(witness));
}

#[test]
fn pp_family_ledgers() {
    let out = gen_three_opt_pp_lb(2).unwrap();
    let ledger = distribute_counters(&out.instance, &out.tour, &out.reference_tour).unwrap();
    assert_eq!((ledger.good(), ledger.bad()), (0, 16));
    assert_eq!(held_karp(&out.instance, 16).unwrap().cost, 12);

    let out = gen_three_opt_pp_lb(6).unwrap();
    let ledger = distribute_counters(&out.instance, &out.tour, &out.reference_tour).unwrap();
    assert_eq!(ledger.good(), 0);
    assert!(pp_path_checks(&out.instance, &out.tour, &ledger)
        .unwrap()
        .all_pass());
    assert_eq!(count_zero_paths(&out.instance, &out.tour).unwrap(), 0);
    let report = ratio_report(&out.instance, &out.tour, &out.reference_tour).unwrap();
    assert_eq!(report.ratio, Rational::new(4, 3));
    assert_eq!((report.cost_tour, report.cost_reference), (48, 36));
}

#[test]
fn three_opt_family_examples() {
    let small = gen_three_opt_lb(3).unwrap();
    assert_eq!(small.instance.n(), 24);
    assert_eq!(tour_cost(&small.instance, &small.tour).unwrap(), 33);
    assert!(tour_cost(&small.instance, &small.reference_tour).unwrap() <= 28);
    assert_eq!(count_zero_paths(&small.instance, &small.tour).unwrap(), 6);

    let out = gen_three_opt_lb(12).unwrap();
    assert!(tour_cost(&out.instance, &out.reference_tour).unwrap() <= 100);
    assert!(endpoint_pair_violations(&out.instance, &out.tour)
        .unwrap()
        .is_empty());
    assert_eq!(
        find_forbidden_constellation(&out.instance, &out.tour).unwrap(),
        None
    );
    let (after, stats) = local_search(&out.instance, &out.tour, 3, false).unwrap();
    assert_eq!(after, out.tour);
    assert_eq!(stats.moves_applied, 0);
    let report = ratio_report(&out.instance, &out.tour, &out.reference_tour).unwrap();
    assert!(report.ratio >= Rational::new(132, 100));
}

#[test]
fn larger_three_opt_members_stay_optimal() {
    for s in [12, 16, 20] {
        let out = gen_three_opt_lb(s).unwrap();
        assert!(
            certify_k_optimal(&out.instance, &out.tour, 3)
                .unwrap()
                .is_optimal(),
            "s = {s}"
        );
    }
}

#[test]
fn two_opt_family_examples() {
    let out = gen_two_opt_lb(8).unwrap();
    assert_eq!(out.instance.cost(0, 2), 1);
    assert_eq!(out.instance.cost(1, 3), 2);
    assert_eq!(tour_cost(&out.instance, &out.tour).unwrap(), 11);
    assert_eq!(tour_cost(&out.instance, &out.reference_tour).unwrap(), 8);

    let out = gen_two_opt_lb(7).unwrap();
    assert_eq!(tour_cost(&out.instance, &out.tour).unwrap(), 9);

    let out = gen_two_opt_lb(40).unwrap();
    let r = ratio_report(&out.instance, &out.tour, &out.reference_tour).unwrap();
    assert_eq!(r.ratio, Rational::new(59, 40));
    assert!(certify_k_optimal(&out.instance, &out.tour, 2)
        .unwrap()
        .is_optimal());
}

#[test]
fn isolated_vertex_needs_the_plus_plus_rule() {
    let inst = isolated_vertex_fixture();
    let t = Tour::identity(8);
    assert_eq!(tour_cost(&inst, &t).unwrap(), 10);
    assert_eq!(held_karp(&inst, 16).unwrap().cost, 10);
    assert!(certify_k_optimal(&inst, &t, 3).unwrap().is_optimal());

    let cert = certify_kpp_optimal(&inst, &t, 3).unwrap();
    let witness = cert.witness.expect("a zero-gain merge");
    assert_eq!(witness.gain(), 0);
    let after = apply_move(&t, &witness).unwrap();
    assert!(count_zero_paths(&inst, &after).unwrap() < count_zero_paths(&inst, &t).unwrap());

    let merge = KMove::new(&inst, edges(&[(0, 7), (3, 4)]), edges(&[(7, 3), (0, 4)])).unwrap();
    assert_eq!(merge.gain(), 0);
    assert!(is_improving_pp(&inst, &t, &merge).unwrap());
}

#[test]
fn zero_gain_without_merge_is_not_pp_improving() {
    // 5 isolated vertices; reversing any segment keeps every edge at cost 2
    let inst = Instance::new(5, Vec::<Edge>::new()).unwrap();
    let t = Tour::identity(5);
    let mv = KMove::new(&inst, edges(&[(0, 1), (2, 3)]), edges(&[(0, 2), (1, 3)])).unwrap();
    assert_eq!(mv.gain(), 0);
    assert!(!is_improving_pp(&inst, &t, &mv).unwrap());
    assert!(certify_kpp_optimal(&inst, &t, 3).unwrap().is_optimal());
}

#[test]
fn constellation_move_improves() {
    let inst = Instance::new(
        8,
        [
            (1, 2),
            (2, 3),
            (3, 4),
            (5, 6),
            (6, 7),
            (7, 0),
            (0, 2),
            (3, 5),
        ],
    )
    .unwrap();
    let t = Tour::identity(8);
    let c = find_forbidden_constellation(&inst, &t).unwrap().unwrap();
    let mv = KMove::new(
        &inst,
        edges(&[(c.p, c.u), (c.q, c.v), (c.a, c.b)]),
        edges(&[(c.p, c.q), (c.a, c.u), (c.b, c.v)]),
    )
    .unwrap();
    assert!(mv.gain() >= 1);
    let after = apply_move(&t, &mv).unwrap();
    assert_eq!(
        tour_cost(&inst, &after).unwrap() as i64,
        tour_cost(&inst, &t).unwrap() as i64 - mv.gain()
    );
}

#[test]
fn whole_cycle_and_small_exact_examples() {
    let five = Instance::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
    let t = Tour::identity(5);
    assert_eq!(tour_cost(&five, &t).unwrap(), 5);
    let dec = one_path_decomposition(&five, &t).unwrap();
    assert!(dec.whole_cycle);
    assert!(dec.paths.is_empty());
    assert!(distribute_counters(&five, &t, &t)
        .unwrap()
        .counters
        .is_empty());
    assert_eq!(held_karp(&five, 16).unwrap().cost, 5);

    let inst = p12tsp::random_instance(9, 0.4, 7).unwrap();
    assert_eq!(
        held_karp(&inst, 16).unwrap().cost,
        brute_force(&inst).unwrap().cost
    );
}
