use pinchlab::curvature::{elem_sym_upto, CurvatureTuple, MaclaurinOutcome};
use proptest::prelude::*;

fn power_sum(kappa: &[f64], i: usize) -> f64 {
    kappa.iter().map(|x| x.powi(i as i32)).sum()
}

fn tuple_strategy(lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, 1..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn newton_identities(kappa in tuple_strategy(-2.0, 2.0)) {
        let n = kappa.len();
        let e = elem_sym_upto(&kappa, n);
        for k in 1..=n {
            let mut rhs = 0.0;
            let mut scale = (k as f64 * e[k]).abs();
            for i in 1..=k {
                let term = e[k - i] * power_sum(&kappa, i);
                rhs += if i % 2 == 1 { term } else { -term };
                scale += e[k - i].abs() * kappa.iter().map(|x| x.abs().powi(i as i32)).sum::<f64>();
            }
            prop_assert!((k as f64 * e[k] - rhs).abs() <= 1e-12 * scale.max(1.0), "k={} {:?}", k, kappa);
        }
    }

    #[test]
    fn permutation_invariance_is_exact(kappa in tuple_strategy(-3.0, 3.0), seed in any::<u64>()) {
        let mut shuffled = kappa.clone();
        let len = shuffled.len();
        let mut s = seed;
        for i in (1..len).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(elem_sym_upto(&kappa, len), elem_sym_upto(&shuffled, len));
    }

    #[test]
    fn homogeneity(kappa in tuple_strategy(-2.0, 2.0), c in 0.1f64..10.0) {
        let n = kappa.len();
        let scaled: Vec<f64> = kappa.iter().map(|x| c * x).collect();
        let e = elem_sym_upto(&kappa, n);
        let es = elem_sym_upto(&scaled, n);
        let abs: Vec<f64> = kappa.iter().map(|x| x.abs()).collect();
        let bound = elem_sym_upto(&abs, n);
        for k in 0..=n {
            let ck = c.powi(k as i32);
            prop_assert!((es[k] - ck * e[k]).abs() <= 1e-12 * ck * bound[k].max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn maclaurin_chain_for_positive_tuples(kappa in tuple_strategy(0.01, 5.0)) {
        let t = CurvatureTuple::new(kappa.clone()).unwrap();
        for k in 1..=t.dim() {
            match t.maclaurin_chain(k).unwrap() {
                MaclaurinOutcome::Chain { monotone, .. } => prop_assert!(monotone, "k={} {:?}", k, kappa),
                MaclaurinOutcome::HypothesisViolated { .. } => prop_assert!(false, "positive tuple flagged"),
            }
        }
    }

    #[test]
    fn normalized_hk_of_constant_tuple(x in -3.0f64..3.0, n in 1usize..=12) {
        let t = CurvatureTuple::new(vec![x; n]).unwrap();
        for k in 0..=n {
            let hk = t.normalized_hk(k).unwrap();
            prop_assert!((hk - x.powi(k as i32)).abs() <= 1e-12 * x.abs().powi(k as i32).max(1.0));
        }
        prop_assert_eq!(t.normalized_hk(n + 1).unwrap(), 0.0);
    }
}
