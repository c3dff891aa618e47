use gmac_core::{capacity_fn, db_to_linear, gaussian_entropy, DbValue};
use proptest::prelude::*;

proptest! {
    #[test]
    fn capacity_is_increasing_and_concave(a in 0.0..1e6f64, b in 0.0..1e6f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(capacity_fn(lo).unwrap() <= capacity_fn(hi).unwrap());
        let mid = capacity_fn(0.5 * (lo + hi)).unwrap();
        prop_assert!(mid + 1e-12 >= 0.5 * (capacity_fn(lo).unwrap() + capacity_fn(hi).unwrap()));
    }

    #[test]
    fn decibels_add_as_products(a in -60.0..60.0f64, b in -60.0..60.0f64) {
        let sum = db_to_linear(DbValue(a + b)).unwrap();
        let prod = db_to_linear(DbValue(a)).unwrap() * db_to_linear(DbValue(b)).unwrap();
        prop_assert!((sum - prod).abs() <= 1e-12 * sum);
    }

    #[test]
    fn doubling_variance_adds_half_a_bit(v in 1e-9..1e9f64) {
        let d = gaussian_entropy(2.0 * v).unwrap() - gaussian_entropy(v).unwrap();
        prop_assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn capacity_is_entropy_difference(snr in 0.0..1e4f64, n in 1e-3..1e3f64) {
        let c = gaussian_entropy(n * (1.0 + snr)).unwrap() - gaussian_entropy(n).unwrap();
        prop_assert!((c - capacity_fn(snr).unwrap()).abs() < 1e-10);
    }
}
