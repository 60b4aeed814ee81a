use proptest::prelude::*;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use rb_core::encode::{bits_per_var, clause_census, cnf_satisfied, decode_assignment, encode_log};
use rb_core::rng::{rng_stream, Purpose, RngStream};
use rb_core::search::{
    brute_force_count, brute_force_solutions, restrict, solve_csp, DEFAULT_BUDGET,
};
use rb_core::{
    derive_params_with_domain, gen_instance, solve, Density, Instance, SolveMode, Status,
};

fn tiny_instance(n: usize, d: u32, k: usize, r: f64, seed: u64) -> Instance {
    let p = 0.5f64.min(1.0 - 1.0 / d as f64);
    let params = derive_params_with_domain(n, d, p, k, seed, Density::Explicit(r)).unwrap();
    gen_instance(&params, false).unwrap()
}

#[test]
fn xoshiro_matches_reference_implementation() {
    for seed in [0u64, 1, 42, u64::MAX, 0x0123_4567_89ab_cdef] {
        let ours = RngStream::from_splitmix(seed);
        let mut bytes = [0u8; 32];
        for (chunk, word) in bytes.chunks_mut(8).zip(ours.state()) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut reference = Xoshiro256StarStar::from_seed(bytes);
        let mut seeded = Xoshiro256StarStar::seed_from_u64(seed);
        let mut ours = ours;
        for _ in 0..1000 {
            let x = ours.next_u64();
            assert_eq!(x, reference.next_u64());
            assert_eq!(x, seeded.next_u64());
        }
    }
}

#[test]
fn purpose_streams_differ() {
    let mut a = rng_stream(7, Purpose::Scope, 0);
    let mut b = rng_stream(7, Purpose::Perm, 0);
    let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
    let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
    assert_ne!(xs, ys);
}

#[test]
fn bounded_draws_are_uniform_enough() {
    let mut rng = rng_stream(3, Purpose::Harness, 0);
    let mut hist = [0u32; 7];
    for _ in 0..70_000 {
        hist[rng.below(7) as usize] += 1;
    }
    // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
    let chi2: f64 = hist
        .iter()
        .map(|&h| (h as f64 - 10_000.0).powi(2) / 10_000.0)
        .sum();
    assert!(chi2 < 22.46, "{hist:?}");
}

#[test]
fn solver_matches_oracle_across_shapes() {
    let mut checked = 0;
    for seed in 0..120u64 {
        let n = 3 + (seed % 3) as usize;
        let d = 2 + (seed % 3) as u32;
        let k = if seed % 4 == 0 && n >= 3 { 3 } else { 2 };
        let inst = tiny_instance(n, d, k, 0.5 + (seed % 5) as f64 * 0.4, seed);
        let report = solve(&inst, SolveMode::Count, DEFAULT_BUDGET);
        assert_eq!(
            report.count.unwrap(),
            brute_force_count(&inst).unwrap(),
            "seed {seed}"
        );
        let all = solve(&inst, SolveMode::Enumerate(usize::MAX), DEFAULT_BUDGET);
        assert_eq!(all.solutions, brute_force_solutions(&inst).unwrap());
        assert!(all.solutions.windows(2).all(|w| w[0] < w[1]));
        let decide = solve(&inst, SolveMode::Decide, DEFAULT_BUDGET);
        assert!(decide.nodes <= report.nodes);
        checked += 1;
    }
    assert_eq!(checked, 120);
}

#[test]
fn restriction_identity_every_variable() {
    for seed in 0..40u64 {
        let k = if seed % 3 == 0 { 3 } else { 2 };
        let inst = tiny_instance(5, 3, k, 1.0, seed);
        let total = solve(&inst, SolveMode::Count, DEFAULT_BUDGET)
            .count
            .unwrap();
        for x in 0..inst.n() {
            let sum: u64 = (0..inst.d())
                .map(|v| {
                    solve_csp(&restrict(&inst, x, v), SolveMode::Count, DEFAULT_BUDGET)
                        .count
                        .unwrap()
                })
                .sum();
            assert_eq!(sum, total, "seed {seed}, x {x}");
        }
    }
}

#[test]
fn nested_restrictions_commute() {
    let inst = tiny_instance(5, 4, 2, 1.2, 9);
    // Removing variable 1 shifts variable 3 down to index 2.
    let a = restrict(&inst, 1, 2).restrict(2, 0);
    let b = restrict(&inst, 3, 0).restrict(1, 2);
    assert_eq!(a.canonical_json(), b.canonical_json());
    let count = solve_csp(&a, SolveMode::Count, DEFAULT_BUDGET)
        .count
        .unwrap();
    let brute = brute_force_solutions(&inst)
        .unwrap()
        .into_iter()
        .filter(|s| s[1] == 2 && s[3] == 0)
        .count() as u64;
    assert_eq!(count, brute);
}

/// Counts CNF models by enumerating every Boolean assignment.
fn cnf_model_count(inst: &Instance) -> (u64, Vec<Vec<u32>>) {
    let cnf = encode_log(inst);
    let vars = cnf.num_vars;
    let mut count = 0;
    let mut decoded = Vec::new();
    let mut model = vec![false; vars];
    for bits in 0u64..(1 << vars) {
        for (i, slot) in model.iter_mut().enumerate() {
            *slot = bits >> i & 1 == 1;
        }
        if cnf_satisfied(&cnf, &model) {
            count += 1;
            decoded.push(decode_assignment(&model, &inst.params).unwrap());
        }
    }
    decoded.sort();
    (count, decoded)
}

#[test]
fn encoding_is_a_bijection() {
    for seed in 0..30u64 {
        let d = [2, 3, 4, 5, 6][seed as usize % 5];
        let n = if bits_per_var(d) == 3 { 4 } else { 5 };
        let k = if seed % 4 == 3 { 3 } else { 2 };
        let inst = tiny_instance(n, d, k, 0.8, seed);
        let (count, decoded) = cnf_model_count(&inst);
        assert_eq!(decoded, brute_force_solutions(&inst).unwrap());
        assert_eq!(count, brute_force_count(&inst).unwrap());
        assert_eq!(
            encode_log(&inst).clauses.len() as u64,
            clause_census(&inst.params)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(n in 2usize..8, d in 2u32..7, seed in any::<u64>(), planted in any::<bool>()) {
        let params = derive_params_with_domain(n, d, 0.5, 2, seed, Density::Threshold).unwrap();
        let inst = gen_instance(&params, planted).unwrap();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json(), inst.to_json());
    }

    #[test]
    fn planted_instances_are_sat(n in 2usize..7, d in 2u32..6, r in 0.5f64..4.0, seed in any::<u64>()) {
        let params = derive_params_with_domain(n, d, 0.5, 2, seed, Density::Explicit(r)).unwrap();
        let inst = gen_instance(&params, true).unwrap();
        prop_assert!(inst.satisfies(inst.planted.as_ref().unwrap()));
        prop_assert_eq!(solve(&inst, SolveMode::Decide, DEFAULT_BUDGET).status, Status::Sat);
    }

    #[test]
    fn solutions_satisfy_every_constraint(seed in any::<u64>()) {
        let inst = tiny_instance(6, 4, 2, 1.0, seed);
        let report = solve(&inst, SolveMode::Enumerate(20), DEFAULT_BUDGET);
        for s in &report.solutions {
            prop_assert!(inst.violated_constraints(s).is_empty());
        }
    }
}
