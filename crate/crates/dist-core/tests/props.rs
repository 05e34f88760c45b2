use dist_core::{compose, kl_divergence, Axis, Factor, JointDistribution, ProductSpace, Role};
use proptest::prelude::*;

fn abc_space() -> ProductSpace {
    ProductSpace::new(vec![
        Axis::new("A", Role::Past, 2),
        Axis::new("B", Role::Past, 3),
        Axis::new("C", Role::Present, 2),
    ])
    .unwrap()
}

fn joint_on(space: ProductSpace) -> impl Strategy<Value = JointDistribution> {
    let n = space.len();
    prop::collection::vec(1e-3f64..1.0, n)
        .prop_map(move |v| JointDistribution::new_normalized(space.clone(), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// kl decomposes as marginal kl plus expected row kl.
    #[test]
    fn kl_chain_rule(
        p in joint_on(abc_space()),
        q in joint_on(abc_space()),
    ) {
        let total = kl_divergence(&p, &q).unwrap();
        let pa = p.marginalize(&[0]).unwrap();
        let qa = q.marginalize(&[0]).unwrap();
        let head = kl_divergence(&pa, &qa).unwrap();
        let pk = p.condition(&[1, 2], &[0]).unwrap();
        let qk = q.condition(&[1, 2], &[0]).unwrap();
        let mut tail = 0.0f64;
        for g in 0..pk.given_size() {
            let mut row = 0.0f64;
            for (pv, qv) in pk.row(g).iter().zip(qk.row(g)) {
                if *pv > 0.0 {
                    row += pv * (pv / qv).ln();
                }
            }
            tail += pa.prob(g) * row;
        }
        prop_assert!((total - (head + tail)).abs() < 1e-10);
    }

    /// Conditioning then recomposing with the given-marginal is the identity.
    #[test]
    fn condition_recompose_identity(p in joint_on(abc_space())) {
        let given = p.marginalize(&[0, 1]).unwrap();
        let k = p.condition(&[2], &[0, 1]).unwrap();
        let back = compose(p.space(), &[Factor::Marginal(given), Factor::Kernel(k)]).unwrap();
        prop_assert!(p.max_abs_diff(&back).unwrap() < 1e-13);
    }

    /// I(A;B) = H(A) + H(B) - H(A,B).
    #[test]
    fn mutual_information_entropy_identity(p in joint_on(abc_space())) {
        let mi = p.mutual_information(&[0, 1], &[2]).unwrap();
        let ha = p.subset_entropy(&[0, 1]).unwrap();
        let hb = p.subset_entropy(&[2]).unwrap();
        let hab = p.entropy();
        prop_assert!((mi - (ha + hb - hab)).abs() < 1e-10);
    }

    /// Information quantities do not depend on how states are labeled.
    #[test]
    fn relabeling_states_changes_nothing(
        p in joint_on(abc_space()),
        swap in prop::sample::select(vec![[1usize, 0, 2], [2usize, 1, 0], [0usize, 2, 1]]),
    ) {
        let q = p.permute_axis_states(1, &swap).unwrap();
        prop_assert!((p.entropy() - q.entropy()).abs() < 1e-12);
        let mi_p = p.mutual_information(&[0], &[1, 2]).unwrap();
        let mi_q = q.mutual_information(&[0], &[1, 2]).unwrap();
        prop_assert!((mi_p - mi_q).abs() < 1e-12);
        let cmi_p = p.conditional_mutual_information(&[0], &[2], &[1]).unwrap();
        let cmi_q = q.conditional_mutual_information(&[0], &[2], &[1]).unwrap();
        prop_assert!((cmi_p - cmi_q).abs() < 1e-12);
    }

    /// Marginalizing in two steps equals marginalizing in one.
    #[test]
    fn marginalization_composes(p in joint_on(abc_space())) {
        let two_step = p.marginalize(&[0, 2]).unwrap().marginalize(&[1]).unwrap();
        let one_step = p.marginalize(&[2]).unwrap();
        prop_assert!(two_step.max_abs_diff(&one_step).unwrap() < 1e-15);
    }

    /// Conditional mutual information is nonnegative.
    #[test]
    fn cmi_is_nonnegative(p in joint_on(abc_space())) {
        let cmi = p.conditional_mutual_information(&[0], &[1], &[2]).unwrap();
        prop_assert!(cmi >= 0.0);
    }
}
