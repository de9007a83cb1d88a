mod common;

use common::*;
use ffprog::anatomy::{
    chain_step, chain_tv_to_stationary, coupling_check, dp_bound, eft_measure, eft_measure_indicator,
    entropy_increase_properties, entropy_update, ks_entropy_convergence, pd_from_sticks, pd_moments, pd_sample,
    pi_stationary, tail_sum_bound, trajectory_rng, tv_distance,
};
use ffprog::bounds::squarefree_moduli;
use ffprog::enumerate::units_mod;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::f64::consts::E;

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn stationary_law_from_the_formula() {
    let z = (4.0 + E) * (4.0 + E).exp();
    let mut total = 0.0;
    for n in 4..300u64 {
        let direct = ((n as f64).ln() + n as f64 - ln_factorial(n - 4)).exp() / z;
        let lib = pi_stationary(n).unwrap();
        assert!((lib - direct).abs() <= 1e-12 * direct.max(1e-300), "n={n}");
        total += direct;
    }
    assert!((total - 1.0).abs() < 1e-12);
    assert!(pi_stationary(3).is_err());
}

#[test]
fn stationary_tail_sums_are_bounded() {
    for c in 8..=20u64 {
        let tail: f64 = (c..c + 600).map(|n| pi_stationary(n).unwrap()).sum();
        let bound = tail_sum_bound(c).unwrap();
        let direct = (5.0 * (c as f64).ln() + c as f64 - ln_factorial(c)).exp() / ((4.0 + E) * (4.0 + E).exp());
        assert!((bound - direct).abs() <= 1e-12 * direct);
        assert!(tail <= bound, "C={c}: {tail} > {bound}");
    }
}

#[test]
fn tail_bound_formula() {
    for l in [7.5f64, 8.0, 10.0, 12.0, 20.0] {
        let direct = l.powf(4.5) * (2.0 * l).exp() / (l.powf(l) * (2.0 * std::f64::consts::PI).sqrt() * (4.0 + E) * (4.0 + E).exp());
        assert!((dp_bound(l).unwrap() - direct).abs() <= 1e-10 * direct);
    }
    assert!(dp_bound(7.0).is_err());
}

#[test]
fn entropy_inequalities_on_a_dense_grid() {
    let steps = 400;
    for i in 0..=steps {
        let h = 10.0 * i as f64 / steps as f64;
        for j in 0..=steps {
            let y = j as f64 / steps as f64;
            let c = entropy_increase_properties(h, y);
            assert!(c.all_hold(), "H={h} y={y}: {c:?}");
            assert!((c.h_new - entropy_update(h, y)).abs() < 1e-15);
            assert!(c.h_new >= -1e-15);
        }
    }
}

/// The third inequality with its hypothesis read as y >= 1 - 4 e^{-H}
/// fails at y = 1, where the entropy is unchanged.
#[test]
fn decrease_needs_y_below_the_threshold() {
    let h: f64 = 5.0;
    let y = 1.0;
    assert!(y >= 1.0 - 4.0 * (-h).exp());
    let hn = entropy_update(h, y);
    assert!((hn - h).abs() < 1e-15);
    assert!(hn.exp() > h.exp() - 1.0);
    assert_eq!(entropy_increase_properties(h, y).decrease, None);
}

#[test]
fn chain_moves_by_at_most_one() {
    let mut rng = trajectory_rng(7, 0);
    for n in 4..200u64 {
        for _ in 0..50 {
            let y: f64 = rand::Rng::random(&mut rng);
            let next = chain_step(n, y).unwrap();
            assert!(next.abs_diff(n) <= 1 && next >= 4);
        }
        assert_eq!(chain_step(n, 1.0).unwrap(), n + 1);
        assert_eq!(chain_step(n, 0.0).unwrap(), (n - 1).max(4));
    }
    assert!(chain_step(3, 0.5).is_err());
    assert!(chain_step(5, 1.5).is_err());
}

#[test]
fn chain_approaches_stationarity() {
    let tvs: Vec<f64> = [2u64, 8, 500].iter().map(|&s| chain_tv_to_stationary(s, 20_000, 3).unwrap()).collect();
    assert!(tvs[0] > tvs[1] && tvs[1] > tvs[2], "{tvs:?}");
    assert!(tvs[2] < 0.05);
}

#[test]
fn coupled_chain_dominates_entropy() {
    let r = coupling_check(5_000, 200, 11).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.max_ratio <= 1.0);
}

#[test]
fn pd_first_moments() {
    // H = h2(x) + x H' with x uniform gives E[H] = 1 and
    // E[H^2] = (3/2)(E[h2^2] + 2 E[x h2]) = 2 - pi^2 / 12
    let m = pd_moments(100_000, 5).unwrap();
    let var = 1.0 - std::f64::consts::PI.powi(2) / 12.0;
    let se = (var / m.trials as f64).sqrt();
    assert!((m.mean - 1.0).abs() < 5.0 * se + m.max_bracket, "{m:?}");
    assert!((m.variance - var).abs() < 0.005, "{m:?}");
}

#[test]
fn entropy_of_random_types_approaches_pd() {
    let f5 = field(5);
    let r = ks_entropy_convergence(&f5, &[30, 60], 6_000, 1).unwrap();
    assert!(r.decreasing, "{:?}", r.rows);
}

#[test]
fn measures_are_probabilities_and_tv_is_a_metric() {
    for q in [2u32, 3] {
        let f = field(q);
        for m in 1..=2usize {
            for g in squarefree_moduli(&f, m) {
                for n in m..=4usize {
                    let base = eft_measure(n, &g, None).unwrap();
                    assert_eq!(base.total(), BigRational::one());
                    assert_eq!(tv_distance(&base, &base).unwrap(), BigRational::zero());
                    for a in units_mod(&g) {
                        let mu = eft_measure(n, &g, Some(&a)).unwrap();
                        let via_indicator = eft_measure_indicator(n, &g, Some(&a)).unwrap();
                        assert_eq!(mu.masses, via_indicator.masses);
                        assert_eq!(mu.total(), BigRational::one());
                        assert!(mu.masses.values().all(|v| *v > BigRational::zero()));
                        let d1 = tv_distance(&base, &mu).unwrap();
                        let d2 = tv_distance(&mu, &base).unwrap();
                        assert_eq!(d1, d2);
                        assert!(d1 >= BigRational::zero() && d1 <= BigRational::one());
                        // the sum over types of |difference| is twice the distance
                        let mut abs = BigRational::zero();
                        for w in mu.masses.keys().chain(base.masses.keys()) {
                            let d = mu.mass(w) - base.mass(w);
                            abs += if d < BigRational::zero() { -d } else { d };
                        }
                        let dedup: std::collections::BTreeSet<_> = mu.masses.keys().chain(base.masses.keys()).collect();
                        let mut abs2 = BigRational::zero();
                        for w in dedup {
                            let d = mu.mass(w) - base.mass(w);
                            abs2 += if d < BigRational::zero() { -d } else { d };
                        }
                        assert!(abs >= abs2);
                        assert_eq!(abs2, d1.clone() * BigRational::from_integer(BigInt::from(2)));
                    }
                }
            }
        }
    }
    let f3 = field(3);
    let g = poly(&f3, "0,1");
    let a = eft_measure(3, &g, None).unwrap();
    let b = eft_measure(4, &g, None).unwrap();
    assert!(tv_distance(&a, &b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn stick_breaking_invariants(xs in prop::collection::vec(0.0f64..1.0, 1..40), eps in 1e-14f64..0.5) {
        let s = pd_from_sticks(&xs, eps);
        let total: f64 = s.pieces.iter().sum::<f64>() + s.remainder;
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
        prop_assert!(s.pieces.iter().all(|&p| p >= 0.0));
        prop_assert!(s.remainder >= 0.0);
        prop_assert!(s.entropy_lo >= 0.0);
        prop_assert!(s.entropy_lo <= s.entropy_hi + 1e-12);
        let plogp = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
        let direct: f64 = s.pieces.iter().map(|&p| plogp(p)).sum::<f64>() + plogp(s.remainder);
        prop_assert!((s.entropy_lo - direct).abs() < 1e-9);
    }

    #[test]
    fn samples_are_reproducible(seed in any::<u64>(), i in 0u64..1000) {
        let a = pd_sample(&mut trajectory_rng(seed, i), 1e-12).unwrap();
        let b = pd_sample(&mut trajectory_rng(seed, i), 1e-12).unwrap();
        prop_assert_eq!(&a.pieces, &b.pieces);
        prop_assert!(a.remainder < 1e-12 + 1e-15);
        let width = a.remainder * 1e12f64.ln();
        prop_assert!((a.entropy_hi - a.entropy_lo - width).abs() < 1e-15);
    }

    #[test]
    fn entropy_update_properties(h in 0.0f64..12.0, y in 0.0f64..=1.0) {
        let c = entropy_increase_properties(h, y);
        prop_assert!(c.all_hold(), "{c:?}");
        prop_assert!(c.h_new.exp() <= h.exp() + 1.0 + 1e-9 * h.exp());
    }
}
