//! Cross-checks against the independent enumeration oracle at desk scale,
//! plus spot checks of published worst-case collision values at q = 256.

mod common;

use qhash_core::{
    best_biased_set, epsilon_biased_bound, optimize_params, simulate_verification, tradeoff,
    worst_case_collision, DetectorModel, SearchConfig, Strategy,
};

#[test]
fn best_set_q16_d3_matches_independent_scan() {
    let config = SearchConfig { strategy: Strategy::Exhaustive, ..Default::default() };
    let set = best_biased_set(16, 3, &config).unwrap();
    assert!(set.certified);
    let (oracle_eps, _) = common::oracle_best_set(16, 3);
    assert!(
        (set.epsilon - oracle_eps).abs() < 1e-12,
        "epsilon {} vs oracle {oracle_eps}",
        set.epsilon
    );
    let bound = epsilon_biased_bound(16, 3, 1, &config).unwrap();
    assert!((bound - oracle_eps * oracle_eps).abs() < 1e-12);
}

#[test]
fn optimal_collision_is_monotone_in_qudit_count() {
    // Appending a qudit multiplies every per-x fidelity by a factor ≤ 1, so
    // the optimal worst case cannot grow with m. Checked on the oracle table.
    for d in [2usize, 3] {
        let mut previous = 1.0 + 1e-12;
        for m in 1..=3 {
            let (fid, _) = common::oracle_optimal_params(16, d, m);
            assert!(
                fid <= previous + 1e-12,
                "d={d}: optimum rose from {previous} to {fid} at m={m}"
            );
            previous = fid;
        }
    }
}

#[test]
fn tradeoff_matches_oracle_filter_at_desk_scale() {
    let (collision_limit, decoding_limit) = (0.6, 0.8);
    let m_max = 2;
    let config = SearchConfig { strategy: Strategy::Exhaustive, ..Default::default() };
    let entries = tradeoff(16, &[2, 3], m_max, collision_limit, decoding_limit, &config).unwrap();

    for entry in &entries {
        let expected: Vec<usize> = (1..=m_max)
            .filter(|&m| {
                let decoding = (entry.d as f64).powi(m as i32) / 16.0;
                let (fid, _) = common::oracle_optimal_params(16, entry.d, m);
                decoding <= decoding_limit && fid <= collision_limit
            })
            .collect();
        let got: Vec<usize> = entry.feasible.iter().map(|f| f.m).collect();
        assert_eq!(got, expected, "d = {}", entry.d);
    }
}

#[test]
fn stochastic_strategies_approach_the_oracle_optimum() {
    let (oracle_fid, _) = common::oracle_optimal_params(16, 2, 2);
    for strategy in [Strategy::RandomRestart, Strategy::Annealing] {
        let config = SearchConfig { strategy, budget: 50_000, seed: 7, symmetry_reduction: true };
        let report = optimize_params(16, 2, 2, &config).unwrap();
        assert!(
            report.worst_case_fidelity <= oracle_fid + 0.05,
            "{strategy}: found {} vs oracle {oracle_fid}",
            report.worst_case_fidelity
        );
        assert!(report.worst_case_fidelity >= oracle_fid - 1e-12, "cannot beat the optimum");
    }
}

/// The published qutrit-pair optimum: worst-case collision 0.5422 ± 0.0001.
#[test]
fn qutrit_pair_optimum_reaches_published_value() {
    let report = optimize_params(256, 3, 2, &SearchConfig::default()).unwrap();
    assert!(
        (report.worst_case_fidelity - 0.5422).abs() <= 1.5e-4,
        "found {}",
        report.worst_case_fidelity
    );
}

/// The published five-qubit optimum (0.2031): the ideal-detector protocol
/// reproduces it as an acceptance rate at the worst-case input pair.
#[test]
fn five_qubit_worst_case_acceptance_matches_published_rate() {
    let report = optimize_params(256, 2, 5, &SearchConfig::default()).unwrap();
    let published = 0.2031;
    assert!((report.worst_case_fidelity - published).abs() <= 1.5e-4);

    let shots = 100_000u64;
    let (x_star, fid) = worst_case_collision(&report.params);
    let run = simulate_verification(&report.params, x_star, 0, &DetectorModel::ideal(), shots, 2)
        .unwrap();
    let sigma = (fid * (1.0 - fid) / shots as f64).sqrt();
    assert!(
        (run.accept_rate - published).abs() <= 3.0 * sigma + 1.5e-4,
        "rate {} vs published {published} (σ = {sigma})",
        run.accept_rate
    );
}
