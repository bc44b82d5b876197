use haarinv::groups::{GroupSampler, RotationGroup, SignFlipGroup, SymmetricGroup};
use haarinv::linalg::norm2;
use haarinv::lpball::{sample_lp_ball, Exponent, LpBallSpec};
use haarinv::special::{log_hypergeom_weight, normal_cdf, student_t_cdf};
use haarinv::stats::{lil_ratio, randomization_pvalue, two_sample_t, Reference, VarianceModel};
use haarinv::derive_stream;
use proptest::prelude::*;

proptest! {
    #[test]
    fn normal_cdf_reflection(t in -40.0f64..40.0) {
        prop_assert!((normal_cdf(t) + normal_cdf(-t) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn student_t_reflection(t in -50.0f64..50.0, df in 0.5f64..300.0) {
        let a = student_t_cdf(t, df).unwrap();
        let b = student_t_cdf(-t, df).unwrap();
        prop_assert!((a + b - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn hypergeometric_weights_sum_to_one(n in 1u64..150, m_frac in 0.0f64..1.0) {
        let m = ((n as f64) * m_frac).floor() as u64;
        let s: f64 = (0..=m).map(|j| log_hypergeom_weight::<f64>(j, n, m).unwrap().exp()).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_actions_are_unitary(seed in any::<u64>(), n in 1usize..12, kind in 0u8..3) {
        let mut s = derive_stream(seed, 0);
        let x: Vec<f64> = (0..n).map(|_| 5.0 * s.standard_normal()).collect();
        let g = match kind {
            0 => GroupSampler::<f64>::sample(&SignFlipGroup { n }, &mut s).unwrap(),
            1 => GroupSampler::<f64>::sample(&SymmetricGroup { n }, &mut s).unwrap(),
            _ => GroupSampler::<f64>::sample(&RotationGroup { n }, &mut s).unwrap(),
        };
        let y = g.apply(&x).unwrap();
        prop_assert!((norm2(&y) - norm2(&x)).abs() <= 1e-10);
    }

    #[test]
    fn lp_ball_membership(seed in any::<u64>(), n in 1usize..40, p in 1.0f64..12.0, r in 0.1f64..10.0) {
        let spec = LpBallSpec::new(n, Exponent::Finite(p), r).unwrap();
        let x = sample_lp_ball(&spec, &mut derive_stream(seed, 1));
        prop_assert_eq!(x.len(), n);
        prop_assert!(spec.gauge(&x) <= 1.0);
    }

    #[test]
    fn permutation_invariant_statistic_has_unit_pvalue(
        x in proptest::collection::vec(-1e3f64..1e3, 2..30),
        seed in any::<u64>(),
    ) {
        let g = SymmetricGroup { n: x.len() };
        let out = randomization_pvalue(
            &x,
            |v: &[f64]| Ok(v.iter().sum()),
            Reference::MonteCarlo { sampler: &g, replicates: 50 },
            Default::default(),
            &derive_stream(seed, 0),
        ).unwrap();
        prop_assert_eq!(out.p_value, 1.0);
    }

    #[test]
    fn lil_ratio_ignores_order(x in proptest::collection::vec(-1.0f64..1.0, 3..64), seed in any::<u64>()) {
        let mut s = derive_stream(seed, 0);
        let g = GroupSampler::<f64>::sample(&SymmetricGroup { n: x.len() }, &mut s).unwrap();
        let y = g.apply(&x).unwrap();
        let a = lil_ratio(&x, Exponent::Finite(2.0)).unwrap();
        let b = lil_ratio(&y, Exponent::Finite(2.0)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn welch_equals_pooled_for_equal_spread(
        base in proptest::collection::vec(-10.0f64..10.0, 2..20),
        shift in -5.0f64..5.0,
    ) {
        // group 2 is a translate of group 1: same size, same sample variance
        prop_assume!(base.iter().any(|&v| (v - base[0]).abs() > 1e-6));
        let n = base.len();
        let mut x = base.clone();
        x.extend(base.iter().map(|v| v + shift));
        let p = two_sample_t(&x, n, n, VarianceModel::Pooled).unwrap();
        let w = two_sample_t(&x, n, n, VarianceModel::Welch).unwrap();
        prop_assert!((p.statistic - w.statistic).abs() <= 1e-12 * (1.0 + p.statistic.abs()));
    }
}
