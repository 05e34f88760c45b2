use dist_core::sampling::{random_joint, random_kernel, stream_rng, ChaCha8Rng};
use dist_core::{compose, kl_divergence, Factor, JointDistribution, ProductSpace};
use info_measures::{phi_i, phi_si, phi_t, project_si, Measure, MeasureReport, SystemJoint};

fn system_space(n_cards: &[usize]) -> ProductSpace {
    ProductSpace::system(n_cards).unwrap()
}

fn random_system(cards: &[usize], rng: &mut ChaCha8Rng) -> SystemJoint {
    SystemJoint::new(random_joint(&system_space(cards), rng)).unwrap()
}

/// Random member of the model that keeps only the per-node channels:
/// Q(x) * prod_i Q(y_i | x_i) with every factor drawn fresh.
fn random_split_member(cards: &[usize], rng: &mut ChaCha8Rng) -> JointDistribution {
    let sp = system_space(cards);
    let n = cards.len();
    let past: Vec<usize> = (0..n).collect();
    let x_space = sp.subspace(&past).unwrap();
    let mut factors = vec![Factor::Marginal(random_joint(&x_space, rng))];
    for i in 0..n {
        let k = random_kernel(
            vec![sp.axis(i).clone()],
            vec![sp.axis(n + i).clone()],
            rng,
        );
        factors.push(Factor::Kernel(k));
    }
    compose(&sp, &factors).unwrap()
}

#[test]
fn phi_i_vanishes_on_past_present_products() {
    let sp = system_space(&[2, 2]);
    let mut rng = stream_rng(41, 0);
    let mx = random_joint(&sp.subspace(&[0, 1]).unwrap(), &mut rng);
    let my = random_joint(&sp.subspace(&[2, 3]).unwrap(), &mut rng);
    let p = compose(&sp, &[Factor::Marginal(mx), Factor::Marginal(my)]).unwrap();
    let report = phi_i(&SystemJoint::new(p.clone()).unwrap()).unwrap();
    assert!(report.value < 1e-12);
    assert!(report.projection.unwrap().max_abs_diff(&p).unwrap() < 1e-13);
}

#[test]
fn phi_i_is_the_divergence_to_its_projection() {
    let mut rng = stream_rng(43, 0);
    for _ in 0..50 {
        let s = random_system(&[2, 2], &mut rng);
        let report = phi_i(&s).unwrap();
        let kl = kl_divergence(s.dist(), report.projection.as_ref().unwrap()).unwrap();
        assert!((report.value - kl).abs() < 1e-12);
    }
}

#[test]
fn phi_i_respects_the_log_cardinality_ceiling() {
    let mut rng = stream_rng(47, 0);
    for _ in 0..100 {
        let s = random_system(&[2, 3], &mut rng);
        let cap = (6.0f64).ln();
        assert!(phi_i(&s).unwrap().value <= cap + 1e-12);
    }
}

#[test]
fn project_si_is_idempotent_on_split_members() {
    let mut rng = stream_rng(53, 0);
    for _ in 0..20 {
        let member = random_split_member(&[2, 2], &mut rng);
        let s = SystemJoint::new(member.clone()).unwrap();
        let projected = project_si(&s).unwrap();
        assert!(projected.max_abs_diff(&member).unwrap() < 1e-13);
    }
}

#[test]
fn project_si_fixes_the_uniform_joint() {
    let sp = system_space(&[2, 2]);
    let u = JointDistribution::uniform(sp);
    let s = SystemJoint::new(u.clone()).unwrap();
    assert!(project_si(&s).unwrap().max_abs_diff(&u).unwrap() < 1e-14);
}

#[test]
fn project_si_beats_ten_thousand_random_candidates() {
    let mut rng = stream_rng(59, 0);
    let s = random_system(&[2, 2], &mut rng);
    let projected = project_si(&s).unwrap();
    let best = kl_divergence(s.dist(), &projected).unwrap();
    for _ in 0..10_000 {
        let candidate = random_split_member(&[2, 2], &mut rng);
        let d = kl_divergence(s.dist(), &candidate).unwrap();
        assert!(d >= best - 1e-12, "candidate beat the projection: {d} < {best}");
    }
}

#[test]
fn phi_si_closed_form_equals_divergence_to_projection() {
    let mut rng = stream_rng(61, 0);
    for cards in [vec![2usize, 2], vec![2, 3], vec![2, 2, 2]] {
        for _ in 0..20 {
            let s = random_system(&cards, &mut rng);
            let report = phi_si(&s).unwrap();
            let kl = kl_divergence(s.dist(), report.projection.as_ref().unwrap()).unwrap();
            assert!(
                (report.value - kl).abs() < 1e-10,
                "closed form {} vs divergence {kl}",
                report.value
            );
        }
    }
}

#[test]
fn phi_si_vanishes_exactly_on_split_members() {
    let mut rng = stream_rng(67, 0);
    for _ in 0..20 {
        let member = random_split_member(&[2, 2], &mut rng);
        let s = SystemJoint::new(member).unwrap();
        assert!(phi_si(&s).unwrap().value < 1e-12);
    }
}

#[test]
fn phi_si_of_a_single_node_system_is_zero() {
    let mut rng = stream_rng(71, 0);
    for _ in 0..20 {
        let s = random_system(&[3], &mut rng);
        assert!(phi_si(&s).unwrap().value < 1e-12);
    }
}

#[test]
fn measures_survive_state_relabeling() {
    let mut rng = stream_rng(73, 0);
    let s = random_system(&[2, 3], &mut rng);
    let i0 = phi_i(&s).unwrap().value;
    let si0 = phi_si(&s).unwrap().value;
    // Relabel the states of one past axis and one present axis.
    let relabeled = s
        .dist()
        .permute_axis_states(0, &[1, 0])
        .unwrap()
        .permute_axis_states(3, &[2, 0, 1])
        .unwrap();
    let r = SystemJoint::new(relabeled).unwrap();
    assert!((phi_i(&r).unwrap().value - i0).abs() < 1e-12);
    assert!((phi_si(&r).unwrap().value - si0).abs() < 1e-12);
}

/// Random extended joint whose present nodes each see only their own past
/// axis and the latent axis, i.e. a member of the latent split model.
fn random_latent_split_member(cards: &[usize], w: usize, rng: &mut ChaCha8Rng) -> JointDistribution {
    let sp = ProductSpace::extended(cards, w).unwrap();
    let n = cards.len();
    let w_axis = sp.axis(2 * n).clone();
    let past: Vec<usize> = (0..n).collect();
    let x_space = sp.subspace(&past).unwrap();
    let w_space = ProductSpace::new(vec![w_axis.clone()]).unwrap();
    let mut factors = vec![
        Factor::Marginal(random_joint(&x_space, rng)),
        Factor::Marginal(random_joint(&w_space, rng)),
    ];
    for i in 0..n {
        let k = random_kernel(
            vec![sp.axis(i).clone(), w_axis.clone()],
            vec![sp.axis(n + i).clone()],
            rng,
        );
        factors.push(Factor::Kernel(k));
    }
    compose(&sp, &factors).unwrap()
}

#[test]
fn phi_t_vanishes_on_latent_split_members() {
    let mut rng = stream_rng(79, 0);
    for _ in 0..10 {
        let p = random_latent_split_member(&[2, 2], 3, &mut rng);
        let report = phi_t(&p).unwrap();
        assert!(report.value < 1e-11, "got {}", report.value);
        let proj = report.projection.unwrap();
        assert!(kl_divergence(&p, &proj).unwrap() < 1e-10);
    }
}

#[test]
fn phi_t_with_unit_latent_reduces_to_the_visible_sum() {
    let mut rng = stream_rng(83, 0);
    let sp = ProductSpace::extended(&[2, 2], 1).unwrap();
    let p = random_joint(&sp, &mut rng);
    let report = phi_t(&p).unwrap();
    // With one latent state the conditioning on W is vacuous.
    let visible = p.marginalize(&[0, 1, 2, 3]).unwrap();
    let want = visible
        .conditional_mutual_information(&[2], &[1], &[0])
        .unwrap()
        + visible
            .conditional_mutual_information(&[3], &[0], &[1])
            .unwrap();
    assert!((report.value - want).abs() < 1e-12);
}

#[test]
fn phi_t_splits_into_visible_and_latent_parts_when_the_latent_is_independent() {
    // Full-parent extended joint with W independent of X: each present node
    // sees the whole past block and the latent axis.
    let mut rng = stream_rng(89, 0);
    let sp = ProductSpace::extended(&[2, 2], 2).unwrap();
    let w_axis = sp.axis(4).clone();
    let x_space = sp.subspace(&[0, 1]).unwrap();
    let w_space = ProductSpace::new(vec![w_axis.clone()]).unwrap();
    let mut factors = vec![
        Factor::Marginal(random_joint(&x_space, &mut rng)),
        Factor::Marginal(random_joint(&w_space, &mut rng)),
    ];
    for i in 0..2 {
        let k = random_kernel(
            vec![sp.axis(0).clone(), sp.axis(1).clone(), w_axis.clone()],
            vec![sp.axis(2 + i).clone()],
            &mut rng,
        );
        factors.push(Factor::Kernel(k));
    }
    let p = compose(&sp, &factors).unwrap();
    let got = phi_t(&p).unwrap().value;
    let mut want = 0.0;
    for i in 0..2 {
        let rest = [1 - i];
        want += p
            .conditional_mutual_information(&[2 + i], &rest, &[i])
            .unwrap();
        want += p
            .conditional_mutual_information(&[4], &rest, &[2 + i, i])
            .unwrap();
    }
    assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
}

#[test]
fn phi_t_requires_a_latent_axis() {
    let mut rng = stream_rng(97, 0);
    let p = random_joint(&system_space(&[2, 2]), &mut rng);
    assert!(phi_t(&p).is_err());
}

#[test]
fn reports_clamp_cancellation_noise_only() {
    let r = MeasureReport::new(Measure::PhiI, -5e-13);
    assert_eq!(r.value, 0.0);
    let r = MeasureReport::new(Measure::PhiSi, -1e-9);
    assert_eq!(r.value, -1e-9);
}

#[test]
fn measure_names_are_stable() {
    assert_eq!(Measure::PhiI.to_string(), "phi_I");
    assert_eq!(Measure::PhiSi.to_string(), "phi_SI");
    assert_eq!(Measure::PhiG.to_string(), "phi_G");
    assert_eq!(Measure::PhiCis.to_string(), "phi_CIS");
    assert_eq!(Measure::PhiCii { m: 2 }.to_string(), "phi_CII_m2");
    assert_eq!(Measure::PhiT.to_string(), "phi_T");
}

#[test]
fn system_joint_rejects_non_system_shapes() {
    let mut rng = stream_rng(101, 0);
    let ext = random_joint(&ProductSpace::extended(&[2], 2).unwrap(), &mut rng);
    assert!(SystemJoint::new(ext).is_err());
}
