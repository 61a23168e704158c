use hhl_core::{estimate_x, histogram_mae, l1_error, ShotHistogram};
use proptest::prelude::*;

fn probability_vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("all zero", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-9).then(|| v.iter().map(|x| x / s).collect())
    })
}

fn histogram(b_qubits: u32) -> impl Strategy<Value = ShotHistogram> {
    prop::collection::vec(0u64..5000, 1usize << (b_qubits + 1))
        .prop_filter("no shots", |c| c.iter().sum::<u64>() > 0)
        .prop_map(move |c| ShotHistogram::from_counts(b_qubits, c).unwrap())
}

proptest! {
    #[test]
    fn estimate_ignores_count_scaling(counts in prop::collection::vec(0u64..10_000, 8), k in 1u64..50) {
        prop_assume!(counts.iter().skip(1).step_by(2).any(|&c| c > 0));
        let h = ShotHistogram::from_counts(2, counts.clone()).unwrap();
        let hk = ShotHistogram::from_counts(2, counts.iter().map(|c| c * k).collect()).unwrap();
        let a = estimate_x::<f64>(&h).unwrap().x_hat;
        let b = estimate_x::<f64>(&hk).unwrap().x_hat;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-15);
        }
    }

    #[test]
    fn l1_is_a_metric(
        p in probability_vector(4),
        q in probability_vector(4),
        r in probability_vector(4),
    ) {
        prop_assert_eq!(l1_error(&p, &q), l1_error(&q, &p));
        prop_assert!(l1_error(&p, &r) <= l1_error(&p, &q) + l1_error(&q, &r) + 1e-15);
        prop_assert_eq!(l1_error(&p, &p), 0.0);
        prop_assert!(l1_error(&p, &q) <= 2.0 + 1e-15);
    }

    #[test]
    fn mae_bounds(h in histogram(2), g in histogram(2)) {
        prop_assert_eq!(histogram_mae(&h, &h), 0.0);
        let labels = h.num_outcomes() as f64;
        let l1 = l1_error(&h.frequencies(), &g.frequencies());
        let mae = histogram_mae(&h, &g);
        prop_assert!((mae - l1 / labels).abs() <= 1e-15);
        prop_assert!(mae <= 2.0 / labels + 1e-15);
        prop_assert_eq!(mae, histogram_mae(&g, &h));
    }
}
