use dist_core::sampling::{random_joint, stream_rng};
use dist_core::{kl_divergence, JointDistribution, ProductSpace};
use info_measures::{phi_i, phi_si, project_si, SystemJoint};
use ips_projection::{
    ips_project, phi_g, phi_g_with, sample_clique_member, CliqueSystem, IpsConfig,
};

fn system(cards: &[usize], seed: u64) -> SystemJoint {
    let space = ProductSpace::system(cards).unwrap();
    let mut rng = stream_rng(seed, 0);
    SystemJoint::new(random_joint(&space, &mut rng)).unwrap()
}

#[test]
fn the_uniform_target_is_fitted_in_one_cycle() {
    let space = ProductSpace::system(&[2, 2]).unwrap();
    let target = JointDistribution::uniform(space);
    let sys = SystemJoint::new(target.clone()).unwrap();
    let cliques = CliqueSystem::diagonal_split(&sys);
    let run = ips_project(&target, &cliques, &IpsConfig::default()).unwrap();
    assert!(run.converged);
    assert_eq!(run.cycles, 1);
    assert!(kl_divergence(&target, &run.result).unwrap() < 1e-14);
}

#[test]
fn members_of_the_clique_model_are_recovered() {
    let sys = system(&[2, 3], 11);
    let cliques = CliqueSystem::diagonal_split(&sys);
    for s in 0..5u64 {
        let mut rng = stream_rng(12, s);
        let member = sample_clique_member(sys.dist().space(), &cliques, &mut rng).unwrap();
        let run = ips_project(&member, &cliques, &IpsConfig::default()).unwrap();
        assert!(run.converged);
        let d = kl_divergence(&member, &run.result).unwrap();
        assert!(d < 1e-9, "divergence {d} on seed {s}");
    }
}

#[test]
fn all_clique_marginals_match_the_target() {
    let sys = system(&[2, 2, 2], 7);
    let cliques = CliqueSystem::diagonal_split(&sys);
    let run = ips_project(sys.dist(), &cliques, &IpsConfig::default()).unwrap();
    assert!(run.converged);
    for clique in cliques.cliques() {
        let want = sys.dist().marginalize(clique).unwrap();
        let got = run.result.marginalize(clique).unwrap();
        assert!(want.max_abs_diff(&got).unwrap() < 1e-9);
    }
}

#[test]
fn no_sampled_member_beats_the_projection() {
    let sys = system(&[2, 2], 21);
    let cliques = CliqueSystem::diagonal_split(&sys);
    let run = ips_project(sys.dist(), &cliques, &IpsConfig::default()).unwrap();
    let best = kl_divergence(sys.dist(), &run.result).unwrap();
    let mut rng = stream_rng(22, 0);
    for _ in 0..10_000 {
        let member = sample_clique_member(sys.dist().space(), &cliques, &mut rng).unwrap();
        let d = kl_divergence(sys.dist(), &member).unwrap();
        assert!(best <= d + 1e-9);
    }
}

#[test]
fn divergence_never_increases_across_cycles() {
    for seed in [3u64, 4, 5] {
        let sys = system(&[2, 3], seed);
        let cliques = CliqueSystem::diagonal_split(&sys);
        let run = ips_project(sys.dist(), &cliques, &IpsConfig::default()).unwrap();
        for pair in run.divergences.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }
}

#[test]
fn the_limit_does_not_depend_on_clique_order() {
    let sys = system(&[2, 2], 31);
    let forward = CliqueSystem::diagonal_split(&sys);
    let mut reversed_list = forward.cliques().to_vec();
    reversed_list.reverse();
    let reversed = CliqueSystem::new(sys.dist().space(), reversed_list).unwrap();
    let a = ips_project(sys.dist(), &forward, &IpsConfig::default()).unwrap();
    let b = ips_project(sys.dist(), &reversed, &IpsConfig::default()).unwrap();
    assert!(a.converged && b.converged);
    assert!(a.result.max_abs_diff(&b.result).unwrap() < 1e-8);
}

#[test]
fn the_result_stays_strictly_positive() {
    let sys = system(&[2, 2, 2], 41);
    let cliques = CliqueSystem::diagonal_split(&sys);
    let run = ips_project(sys.dist(), &cliques, &IpsConfig::default()).unwrap();
    let min = run.result.probs().iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min > 0.0);
}

#[test]
fn a_single_node_system_is_always_inside_the_model() {
    let sys = system(&[3], 51);
    let report = phi_g(&sys).unwrap();
    assert!(report.value < 1e-9);
}

#[test]
fn the_split_projection_is_inside_the_clique_model() {
    let sys = system(&[2, 3], 61);
    let split = SystemJoint::new(project_si(&sys).unwrap()).unwrap();
    let report = phi_g(&split).unwrap();
    assert!(report.value < 1e-9);
}

#[test]
fn the_value_sits_between_zero_and_the_coarser_measures() {
    for seed in [71u64, 72, 73, 74, 75] {
        let sys = system(&[2, 2], seed);
        let g = phi_g(&sys).unwrap().value;
        let i = phi_i(&sys).unwrap().value;
        let si = phi_si(&sys).unwrap().value;
        assert!(g >= 0.0);
        assert!(g <= i + 1e-9);
        assert!(g <= si + 1e-9);
    }
}

#[test]
fn diagnostics_describe_the_run() {
    let sys = system(&[2, 2], 81);
    let report = phi_g(&sys).unwrap();
    assert_eq!(report.diagnostics["converged"], 1.0);
    assert!(report.diagnostics["cycles"] >= 1.0);
    assert!(report.diagnostics["marginal_gap"] < 1e-12);
    assert!(report.projection.is_some());
}

#[test]
fn an_exhausted_cycle_budget_is_reported_not_hidden() {
    let sys = system(&[2, 2], 91);
    let config = IpsConfig {
        tolerance: 1e-12,
        max_cycles: 1,
    };
    let report = phi_g_with(&sys, &config).unwrap();
    assert_eq!(report.diagnostics["converged"], 0.0);
    assert_eq!(report.diagnostics["cycles"], 1.0);
}
