mod common;

use hivecurve::asymptotics::{ronkin_value, RonkinSpec};
use hivecurve::form::TernaryForm;
use hivecurve::hive::{boundary, classify_hive, convolve, convolve_unchecked, merge_decreasing, Hive, HiveClass};
use hivecurve::hyperbolicity::{backward_inequalities, directional_derivative, shifted_hive_check, vinnikov_check, ProbeConfig, Verdict};
use hivecurve::pencil::{pencil_det, random_pencil};
use hivecurve::rational::q;
use hivecurve::tropical::{classify_subdivision, regular_subdivision, SubdivisionClass};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subdivision_matches_hive_class(seed in any::<u64>(), n in 1usize..=3, kind in 0u8..3) {
        let mut r = rng(seed);
        let h = match kind {
            0 => common::random_lifting(n, &mut r),
            1 => common::convolved_hive(n, &mut r),
            _ => common::perturbed_quadratic(n, &mut r),
        };
        let class = classify_hive(&h).class;
        let sub = classify_subdivision(&regular_subdivision(&h));
        prop_assert_eq!(class == HiveClass::StrictHive, sub == SubdivisionClass::Standard);
        prop_assert_eq!(class.is_hive(), sub != SubdivisionClass::Other);
    }

    #[test]
    fn convolution_merges_boundaries(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut r = rng(seed);
        let (h, h2) = (common::random_hive(n, &mut r), common::random_hive(m, &mut r));
        let c = convolve(&h, &h2).unwrap();
        prop_assert!(classify_hive(&c).class.is_hive());
        let (b, b1, b2) = (boundary(&c), boundary(&h), boundary(&h2));
        prop_assert_eq!(b.alpha, merge_decreasing(&b1.alpha, &b2.alpha));
        prop_assert_eq!(b.beta, merge_decreasing(&b1.beta, &b2.beta));
        prop_assert_eq!(b.gamma, merge_decreasing(&b1.gamma, &b2.gamma));
    }

    #[test]
    fn max_plus_identities(seed in any::<u64>(), n in 0usize..=2, m in 0usize..=2, l in 0usize..=2) {
        let mut r = rng(seed);
        let (a, b, c) = (common::random_lifting(n, &mut r), common::random_lifting(m, &mut r), common::random_lifting(l, &mut r));
        prop_assert_eq!(convolve_unchecked(&a, &b), convolve_unchecked(&b, &a));
        prop_assert_eq!(
            convolve_unchecked(&convolve_unchecked(&a, &b), &c),
            convolve_unchecked(&a, &convolve_unchecked(&b, &c))
        );
        // degree 0 is a constant shift
        let unit = Hive::constant(0, q(3));
        prop_assert_eq!(convolve_unchecked(&a, &unit), Hive::from_fn(n, |t| a.get(t) + q(3)));
    }

    #[test]
    fn shifted_hive_iff_backward(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let f = TernaryForm::from_fn(n, |_| f64::exp(r.random_range(-3.0..3.0)));
        let back = backward_inequalities(&f).unwrap().verdict;
        let shifted = shifted_hive_check(&f).unwrap().verdict;
        prop_assert_eq!(back, shifted);
    }

    #[test]
    fn derivatives_stay_hyperbolic(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let f = pencil_det(&random_pencil(n, &mut r)).unwrap();
        let dir = [r.random_range(0.1..2.0), r.random_range(0.1..2.0), r.random_range(0.1..2.0)];
        let d = directional_derivative(&f, &dir).unwrap();
        prop_assert!(d.coeffs().iter().all(|&c| c > 0.0));
        let cfg = ProbeConfig::with_counts(24, 8);
        prop_assert_eq!(vinnikov_check(&d, &cfg).unwrap().verdict, Verdict::Pass);
        prop_assert_eq!(backward_inequalities(&d).unwrap().verdict, Verdict::Pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ronkin_is_convex(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let f = pencil_det(&random_pencil(n, &mut r)).unwrap();
        let spec = RonkinSpec::with_resolution(128);
        let mut p = || [r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), 0.0];
        let (a, b) = (p(), p());
        let mid = [0, 1, 2].map(|i| 0.5 * (a[i] + b[i]));
        let n_at = |x| ronkin_value(&f, x, &spec).unwrap().value;
        prop_assert!(n_at(mid) <= 0.5 * (n_at(a) + n_at(b)) + 1e-6);
    }
}
