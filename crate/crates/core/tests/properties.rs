use bisim_matrix::algebra::{solve_linear, ActionMatrix, ActionSet, RealMatrix, DEFAULT_ATOL};
use bisim_matrix::lts::{
    check_branching_lts, check_relational_strong, check_strong_lts, check_strong_lts_with,
    check_weak_lts, lump_strong_lts, lump_strong_lts_with, parse_lts, verify_branching_diagram,
    verify_closure_identities, verify_weak_diagram, write_lts, Lts,
};
use bisim_matrix::mrc::{
    adapt_diagonal, check_strong_mrc, check_strong_mrc_with, check_weak_mrc, default_tau_distributor,
    ergodic_projection, lump_strong_mrc, lump_strong_mrc_with, lump_weak_mrc, parse_mrc,
    tau_residuals, total_reward, transition_matrix, validate_generator, write_mrc, MrcFast, MrcSearch,
};
use bisim_matrix::partition::{
    coarsest_partition, collector_to_partition, parse_partition, partition_to_collector,
    verify_distributor, write_partition, Carrier, Collector, Distributor, Partition, Refinable,
};
use bisim_matrix::random::{
    planted_lumpable_mrc, planted_weak_fast_mrc, random_bool_distributor, random_fast_mrc,
    random_generator, random_lts, random_mrc, random_partition, random_real_distributor, seeded,
    LtsShape,
};
use bisim_matrix::BisimKind;
use proptest::prelude::*;
use rand::Rng;

fn action_matrix(seed: u64, rows: usize, cols: usize) -> ActionMatrix {
    let mut rng = seeded(seed);
    let u = ActionSet::first(3);
    ActionMatrix::from_fn(rows, cols, u, |_, _| ActionSet::from_bits(rng.random::<u128>()).intersect(u))
}

fn zero_one(seed: u64, n: usize) -> ActionMatrix {
    let mut rng = seeded(seed);
    ActionMatrix::from_bools(n, n, ActionSet::first(3), |_, _| rng.random_bool(0.25))
}

fn system(seed: u64, n: usize) -> (Lts, Partition) {
    let mut rng = seeded(seed);
    let shape = LtsShape { states: n, labels: 2, visible_density: 0.15, tau_density: 0.25, terminating: 0.4 };
    let lts = random_lts(&mut rng, &shape);
    let p = random_partition(&mut rng, n);
    (lts, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn semiring_laws(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let m = action_matrix(seed, a, b);
        let n = action_matrix(seed.wrapping_add(1), b, c);
        let n2 = action_matrix(seed.wrapping_add(2), b, c);
        let p = action_matrix(seed.wrapping_add(3), c, a);
        prop_assert_eq!(m.add(&m).unwrap(), m.clone());
        prop_assert_eq!(n.add(&n2).unwrap(), n2.add(&n).unwrap());
        prop_assert_eq!(
            n.add(&n2).unwrap().add(&n).unwrap(),
            n.add(&n2.add(&n).unwrap()).unwrap()
        );
        prop_assert_eq!(
            m.mul(&n.add(&n2).unwrap()).unwrap(),
            m.mul(&n).unwrap().add(&m.mul(&n2).unwrap()).unwrap()
        );
        prop_assert_eq!(
            m.mul(&n).unwrap().mul(&p).unwrap(),
            m.mul(&n.mul(&p).unwrap()).unwrap()
        );
    }

    #[test]
    fn order_is_partial(seed in any::<u64>(), r in 1usize..4, c in 1usize..4) {
        let m = action_matrix(seed, r, c);
        let n = m.add(&action_matrix(seed.wrapping_add(9), r, c)).unwrap();
        let o = n.add(&action_matrix(seed.wrapping_add(17), r, c)).unwrap();
        prop_assert!(m.leq(&m).unwrap());
        prop_assert!(m.leq(&n).unwrap() && n.leq(&o).unwrap() && m.leq(&o).unwrap());
        if n.leq(&m).unwrap() {
            prop_assert_eq!(&m, &n);
        }
    }

    #[test]
    fn closure_laws(seed in any::<u64>(), n in 1usize..7) {
        let s = zero_one(seed, n);
        let star = s.rt_closure().unwrap();
        let u = s.universe();
        prop_assert!(ActionMatrix::identity(n, u).leq(&star).unwrap());
        prop_assert!(s.mul(&star).unwrap().leq(&star).unwrap());
        prop_assert_eq!(star.mul(&star).unwrap(), star.clone());
        prop_assert_eq!(star.rt_closure().unwrap(), star);
    }

    #[test]
    fn solve_residual(seed in any::<u64>(), n in 1usize..8, k in 1usize..3) {
        let mut rng = seeded(seed);
        // Diagonally dominant, hence well conditioned.
        let a = RealMatrix::from_fn(n, n, |i, j| {
            let x: f64 = rng.random_range(-1.0..1.0);
            if i == j { x + 2.0 * n as f64 } else { x }
        });
        let b = RealMatrix::from_fn(n, k, |_, _| rng.random_range(-5.0..5.0));
        let x = solve_linear(&a, &b).unwrap();
        prop_assert!(a.mul(&x).unwrap().max_abs_diff(&b) <= 1e-9);
    }

    #[test]
    fn partition_round_trips(seed in any::<u64>(), n in 1usize..10) {
        let p = random_partition(&mut seeded(seed), n);
        let u = ActionSet::first(2);
        for carrier in [Carrier::Boolean, Carrier::Real] {
            let v = partition_to_collector(&p, carrier, u);
            prop_assert_eq!(collector_to_partition(&v).unwrap(), p.clone());
        }
        prop_assert_eq!(parse_partition(&write_partition(&p)).unwrap(), p);
    }

    #[test]
    fn canonical_distributors_are_left_inverses(seed in any::<u64>(), n in 1usize..10) {
        let p = random_partition(&mut seeded(seed), n);
        let u = ActionSet::first(2);
        verify_distributor(
            &Collector::Boolean(p.bool_collector(u)),
            &Distributor::Boolean(p.bool_collector(u).transpose()),
            0.0,
        ).unwrap();
        verify_distributor(&Collector::Real(p.real_collector()), &Distributor::Real(p.real_distributor()), 1e-12).unwrap();
    }

    #[test]
    fn identity_is_always_strong(seed in any::<u64>(), n in 1usize..7) {
        let (lts, _) = system(seed, n);
        prop_assert!(check_strong_lts(&lts, &Partition::discrete(n)).unwrap().pass());
        let m = random_mrc(&mut seeded(seed), n, 0.5);
        prop_assert!(check_strong_mrc(&m, &Partition::discrete(n), DEFAULT_ATOL).unwrap().pass());
    }

    #[test]
    fn lts_implications(seed in any::<u64>(), n in 1usize..8) {
        let (lts, p) = system(seed, n);
        let strong = check_strong_lts(&lts, &p).unwrap().pass();
        let weak = check_weak_lts(&lts, &p).unwrap().pass();
        let branching = check_branching_lts(&lts, &p).unwrap().pass();
        prop_assert!(!strong || weak);
        prop_assert!(!branching || weak);
        prop_assert_eq!(check_relational_strong(&lts, &p).unwrap().pass(), strong);
    }

    #[test]
    fn strong_lumping_ignores_the_distributor(seed in any::<u64>(), n in 1usize..7) {
        let (lts, _) = system(seed, n);
        let p = coarsest_partition(&lts, BisimKind::Strong);
        let u = random_bool_distributor(&mut seeded(seed ^ 5), &p, lts.universe());
        prop_assert!(check_strong_lts_with(&lts, &p, &u).unwrap().pass());
        prop_assert_eq!(lump_strong_lts_with(&lts, &p, &u).unwrap(), lump_strong_lts(&lts, &p).unwrap());
        // Verdicts agree on arbitrary partitions too.
        let (_, q) = system(seed ^ 7, n);
        let u = random_bool_distributor(&mut seeded(seed ^ 11), &q, lts.universe());
        prop_assert_eq!(
            check_strong_lts_with(&lts, &q, &u).unwrap().pass(),
            check_strong_lts(&lts, &q).unwrap().pass()
        );
    }

    #[test]
    fn closure_identities(seed in any::<u64>(), n in 1usize..8) {
        let (lts, p) = system(seed, n);
        let ids = verify_closure_identities(&lts, &p).unwrap();
        // Without the weak conditions only the inequality survives.
        let v = p.bool_collector(lts.universe());
        let vt = v.transpose();
        let lhs = vt.mul(&lts.tau_reach()).unwrap().mul(&v).unwrap();
        let rhs = vt.mul(lts.internal()).unwrap().mul(&v).unwrap().rt_closure().unwrap();
        prop_assert!(lhs.leq(&rhs).unwrap());
        if check_weak_lts(&lts, &p).unwrap().pass() {
            prop_assert!(ids.holds());
        }
    }

    #[test]
    fn diagrams_commute_for_coarsest(seed in any::<u64>(), n in 1usize..7) {
        let (lts, _) = system(seed, n);
        let weak = coarsest_partition(&lts, BisimKind::Weak);
        prop_assert!(verify_weak_diagram(&lts, &weak).unwrap());
        let branching = coarsest_partition(&lts, BisimKind::Branching);
        prop_assert!(verify_branching_diagram(&lts, &branching).unwrap());
    }

    #[test]
    fn text_formats_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let (lts, _) = system(seed, n);
        prop_assert_eq!(parse_lts(&write_lts(&lts)).unwrap(), lts.clone());
        let back = Lts::from_combined(lts.alphabet().clone(), lts.sigma().clone(), &lts.combined(), lts.rho().clone()).unwrap();
        prop_assert_eq!(back, lts);
        let m = random_fast_mrc(&mut seeded(seed), n, 0.4, 0.3);
        prop_assert_eq!(parse_mrc(&write_mrc(&m)).unwrap(), m);
    }

    #[test]
    fn coarsest_passes_its_own_check(seed in any::<u64>(), n in 1usize..7) {
        let (lts, _) = system(seed, n);
        let chain = random_fast_mrc(&mut seeded(seed), n.min(5), 0.4, 0.3);
        let search = MrcSearch { chain: &chain, atol: DEFAULT_ATOL };
        for kind in BisimKind::ALL {
            prop_assert!(lts.is_bisimulation(kind, &coarsest_partition(&lts, kind)));
            prop_assert!(search.is_bisimulation(kind, &coarsest_partition(&search, kind)));
        }
    }

    #[test]
    fn semigroup_and_stochasticity(seed in any::<u64>(), n in 1usize..6, s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let q = random_generator(&mut seeded(seed), n, 0.5, 3);
        let ps = transition_matrix(&q, s).unwrap();
        let pt = transition_matrix(&q, t).unwrap();
        let pst = transition_matrix(&q, s + t).unwrap();
        prop_assert!(ps.mul(&pt).unwrap().approx_eq(&pst, 10.0 * DEFAULT_ATOL));
        prop_assert!(pst.as_slice().iter().all(|&x| x >= 0.0));
        prop_assert!(pst.row_sums().iter().all(|r| (r - 1.0).abs() <= DEFAULT_ATOL));
    }

    #[test]
    fn projection_invariants(seed in any::<u64>(), n in 1usize..8) {
        let q = random_generator(&mut seeded(seed), n, 0.3, 3);
        let pi = ergodic_projection(&q).unwrap().pi;
        let zero = RealMatrix::zeros(n, n);
        prop_assert!(pi.as_slice().iter().all(|&x| x >= -1e-12));
        prop_assert!(pi.row_sums().iter().all(|r| (r - 1.0).abs() <= 1e-9));
        prop_assert!(pi.mul(&pi).unwrap().approx_eq(&pi, 1e-9));
        prop_assert!(pi.mul(&q).unwrap().approx_eq(&zero, 1e-9));
        prop_assert!(q.mul(&pi).unwrap().approx_eq(&zero, 1e-9));
    }

    #[test]
    fn ordinary_lumping_preserves_reward(seed in any::<u64>()) {
        let (m, p) = planted_lumpable_mrc(&mut seeded(seed), 3, 3);
        let lumped = lump_strong_mrc(&m, &p, DEFAULT_ATOL).unwrap();
        validate_generator(lumped.generator(), DEFAULT_ATOL).unwrap();
        prop_assert!((lumped.sigma().as_slice().iter().sum::<f64>() - 1.0).abs() <= DEFAULT_ATOL);
        for t in [0.0, 0.1, 1.0, 10.0] {
            let a = total_reward(&m, t).unwrap();
            let b = total_reward(&lumped, t).unwrap();
            prop_assert!((a - b).abs() <= 10.0 * DEFAULT_ATOL, "t = {}: {} vs {}", t, a, b);
        }
    }

    #[test]
    fn strong_mrc_ignores_the_distributor(seed in any::<u64>()) {
        let (m, p) = planted_lumpable_mrc(&mut seeded(seed), 3, 3);
        let u = random_real_distributor(&mut seeded(seed ^ 3), &p);
        prop_assert!(check_strong_mrc_with(&m, &p, &u, DEFAULT_ATOL).unwrap().pass());
        let a = lump_strong_mrc(&m, &p, DEFAULT_ATOL).unwrap();
        let b = lump_strong_mrc_with(&m, &p, &u, DEFAULT_ATOL).unwrap();
        prop_assert!(a.generator().approx_eq(b.generator(), DEFAULT_ATOL));
        prop_assert!(a.rho().approx_eq(b.rho(), DEFAULT_ATOL));
        let other = random_partition(&mut seeded(seed ^ 13), m.state_count());
        let u = random_real_distributor(&mut seeded(seed ^ 17), &other);
        prop_assert_eq!(
            check_strong_mrc_with(&m, &other, &u, DEFAULT_ATOL).unwrap().pass(),
            check_strong_mrc(&m, &other, DEFAULT_ATOL).unwrap().pass()
        );
    }

    #[test]
    fn weak_without_fast_part_is_strong(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = seeded(seed);
        let m = random_mrc(&mut rng, n, 0.5);
        let p = random_partition(&mut rng, n);
        prop_assert_eq!(
            check_weak_mrc(&MrcFast::from(m.clone()), &p, DEFAULT_ATOL).unwrap().pass(),
            check_strong_mrc(&m, &p, DEFAULT_ATOL).unwrap().pass()
        );
    }

    #[test]
    fn default_distributor_is_certified(seed in any::<u64>()) {
        let (m, p) = planted_weak_fast_mrc(&mut seeded(seed), 3, 3);
        let w = default_tau_distributor(&m, &p, DEFAULT_ATOL).unwrap();
        prop_assert!(tau_residuals(&m, &p, w.matrix(), DEFAULT_ATOL).unwrap().holds(DEFAULT_ATOL));
        let lumped = lump_weak_mrc(&m, &p, &w, DEFAULT_ATOL).unwrap();
        validate_generator(lumped.slow_generator(), DEFAULT_ATOL).unwrap();
        validate_generator(lumped.fast_generator(), DEFAULT_ATOL).unwrap();
        prop_assert!((lumped.sigma().as_slice().iter().sum::<f64>() - 1.0).abs() <= DEFAULT_ATOL);
    }

    #[test]
    fn adapted_fast_generator_is_a_generator(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = seeded(seed);
        let q = random_generator(&mut rng, n, 0.5, 3);
        let p = random_partition(&mut rng, n);
        validate_generator(&adapt_diagonal(&q, &p).unwrap(), DEFAULT_ATOL).unwrap();
    }
}
