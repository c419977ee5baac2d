use num_bigint::BigUint;
use proptest::prelude::*;

use vlab::operators::{conditional_expectation, lp_norm, maximal_t, weak_lp, Martingale};
use vlab::rng::{random_function, SplitMix64};
use vlab::spectral::{dirichlet_dense, dirichlet_eval, vft_forward, vft_inverse, vft_naive};
use vlab::summability::{abel_identity, domination_bound, norlund_mean, t_mean};
use vlab::{Basis, GridFunction, WeightSequence, C64};

fn small_basis() -> impl Strategy<Value = Basis> {
    prop::collection::vec(2u32..=5, 1..=4)
        .prop_filter("at most 256 points", |m| m.iter().product::<u32>() <= 256)
        .prop_map(|m| Basis::from_radices(&m).unwrap())
}

fn weight() -> impl Strategy<Value = WeightSequence> {
    prop_oneof![
        Just("fejer".to_string()),
        (0.1f64..0.9).prop_map(|a| format!("cesaro({a})")),
        (0.1f64..0.9).prop_map(|a| format!("inverse_cesaro({a})")),
        (0.1f64..0.9).prop_map(|a| format!("power({a})")),
        Just("riesz".to_string()),
        Just("norlund_log".to_string()),
        Just("iterlog(1,1)".to_string()),
    ]
    .prop_map(|s| WeightSequence::parse(&s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn transform_matches_naive_and_inverts(basis in small_basis(), seed in any::<u64>()) {
        let f = random_function(&basis, &mut SplitMix64::new(seed)).unwrap();
        let fast = vft_forward(&f).unwrap();
        let naive = vft_naive(&f).unwrap();
        for (a, b) in fast.coeffs().iter().zip(naive.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert!(vft_inverse(&fast).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        let mass = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
        prop_assert!((fast.energy() - mass).abs() <= 1e-12 * mass);
    }

    #[test]
    fn dirichlet_closed_form_matches_dense(basis in small_basis(), n_frac in 0.0f64..1.0, t_frac in 0.0f64..1.0) {
        let len = basis.dense_len().unwrap();
        let n = (n_frac * len as f64) as usize;
        let t = (t_frac * len as f64) as usize;
        let dense = dirichlet_dense(&basis, n).unwrap();
        let x = basis.index_to_digits(t).unwrap();
        let closed = dirichlet_eval(&basis, &BigUint::from(n), &x).unwrap();
        prop_assert!((closed - dense.values()[t]).norm() < 1e-9);
    }

    #[test]
    fn means_reproduce_constants(basis in small_basis(), w in weight(), n in 3u64..600) {
        let c = C64::new(0.7, -1.2);
        let f = GridFunction::constant(&basis, c).unwrap();
        let t = t_mean(&f, &w, n).unwrap();
        // S_0 f = 0, every later partial sum equals f.
        let expect = c * ((w.cumulative(n) - w.term(0)) / w.cumulative(n));
        for v in t.values() {
            prop_assert!((v - expect).norm() < 1e-12);
        }
        let nm = norlund_mean(&f, &w, n).unwrap();
        for v in nm.values() {
            prop_assert!((v - c).norm() < 1e-12);
        }
    }

    #[test]
    fn abel_identity_holds(w in weight(), n in 3u64..2000) {
        let id = abel_identity(&w, n).unwrap();
        if id.mass > 0.0 {
            prop_assert!(id.relative_gap() < 1e-12);
        }
        prop_assert!((id.mass + id.q0 - id.normalizer).abs() <= 1e-12 * id.normalizer.max(1.0));
    }

    #[test]
    fn maximal_dominates_each_mean(basis in small_basis(), w in weight(), seed in any::<u64>(), n in 3u64..64) {
        let f = random_function(&basis, &mut SplitMix64::new(seed)).unwrap();
        let star = maximal_t(&f, &w).unwrap();
        if let Ok(t) = t_mean(&f, &w, n) {
            for (s, v) in star.values().iter().zip(t.values()) {
                prop_assert!(*s >= v.norm() - 1e-12);
            }
        }
        if w.monotonicity() != vlab::summability::Monotonicity::Neither && w.cumulative(n) > 0.0 {
            prop_assert!(domination_bound(&w, n).unwrap() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn weak_norm_below_strong_norm(basis in small_basis(), seed in any::<u64>(), p in 0.2f64..3.0) {
        let f = random_function(&basis, &mut SplitMix64::new(seed)).unwrap();
        prop_assert!(weak_lp(&f, p).unwrap() <= lp_norm(&f, p).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn martingale_levels_are_conditional_expectations(basis in small_basis(), seed in any::<u64>()) {
        let f = random_function(&basis, &mut SplitMix64::new(seed)).unwrap();
        let mart = Martingale::from_function(&f).unwrap();
        prop_assert!(mart.compatibility_gap().unwrap() < 1e-12);
        for n in 0..=basis.depth() {
            let e = conditional_expectation(&f, n).unwrap();
            prop_assert!(mart.level(n).unwrap().max_abs_diff(&e).unwrap() < 1e-12);
        }
    }
}
