use nalgebra::Matrix2;
use proptest::prelude::*;
use pspin_core::empirical::{
    alternating_max, brute_force_max, sample_tensor, Budget, MaxMethod, TensorInstance,
};
use pspin_core::SpinSet;

const ISING2: [SpinSet; 2] = [SpinSet::Ising, SpinSet::Ising];

/// Max over the column signs of `(1/n) sum_i |sum_j A_ij s_j|`.
fn row_sign_absorb(t: &TensorInstance) -> f64 {
    let n = t.n;
    (0..1u32 << n)
        .map(|mask| {
            let s = |j: usize| if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| t.entries[i * n + j] * s(j))
                        .sum::<f64>()
                        .abs()
                })
                .sum::<f64>()
                / n as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn two_by_two_examples() {
    let t = TensorInstance::from_entries(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let r = brute_force_max(&t, &ISING2, &Budget::default()).unwrap();
    assert!((r.value - 5.0).abs() < 1e-12);
    assert_eq!(r.method, MaxMethod::BruteForce);

    let sigma: f64 = Matrix2::new(1.0, 2.0, 3.0, 4.0).singular_values().max();
    let r = alternating_max(&t, &[SpinSet::Spherical; 2], 20, 1).unwrap();
    assert!((r.value - sigma).abs() < 1e-6, "{} vs {sigma}", r.value);
    assert!((r.value - 5.46499).abs() < 1e-5);
}

#[test]
fn brute_force_matches_row_oracle() {
    for n in 1..=4 {
        for seed in 0..25 {
            let t = sample_tensor(2, n, seed).unwrap();
            let r = brute_force_max(&t, &ISING2, &Budget::default()).unwrap();
            assert!(
                (r.value - row_sign_absorb(&t)).abs() < 1e-12,
                "n={n} seed={seed}"
            );
        }
    }
}

#[test]
fn alternating_matches_brute_force_for_small_ising() {
    for seed in 0..100 {
        let n = 1 + (seed % 4) as usize;
        let t = sample_tensor(2, n, 1000 + seed).unwrap();
        let exact = brute_force_max(&t, &ISING2, &Budget::default())
            .unwrap()
            .value;
        let heur = alternating_max(&t, &ISING2, 50, seed).unwrap();
        assert!((heur.value - exact).abs() < 1e-12, "seed={seed}");
    }
}

fn check_on_set(set: SpinSet, x: &[f64]) {
    let n = x.len() as f64;
    match set {
        SpinSet::Ising => assert!(x
            .iter()
            .all(|v| v * v * n == 1.0 || (v * v * n - 1.0).abs() < 1e-15)),
        SpinSet::Spherical => assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn argmax_is_feasible_and_attains_value(seed in any::<u64>(), p in 2u32..=3, n in 1usize..=3, sph in any::<bool>()) {
        let set = if sph { SpinSet::Spherical } else { SpinSet::Ising };
        let sets = vec![set; p as usize];
        let t = sample_tensor(p, n, seed).unwrap();
        let r = if sph {
            alternating_max(&t, &sets, 4, seed).unwrap()
        } else {
            brute_force_max(&t, &sets, &Budget::default()).unwrap()
        };
        prop_assert_eq!(r.argmax.len(), p as usize);
        for x in &r.argmax {
            check_on_set(set, x);
        }
        let xs: Vec<&[f64]> = r.argmax.iter().map(|x| x.as_slice()).collect();
        prop_assert!((t.value(&xs) - r.value).abs() <= 1e-10);
    }

    #[test]
    fn scaling_scales_value_and_keeps_argmax(seed in any::<u64>(), lambda in 0.01f64..100.0) {
        let t = sample_tensor(3, 2, seed).unwrap();
        let sets = [SpinSet::Ising; 3];
        let a = brute_force_max(&t, &sets, &Budget::default()).unwrap();
        let b = brute_force_max(&t.scaled(lambda), &sets, &Budget::default()).unwrap();
        prop_assert!((b.value - lambda * a.value).abs() <= 1e-10 * lambda.max(1.0));
        let xs: Vec<&[f64]> = a.argmax.iter().map(|x| x.as_slice()).collect();
        prop_assert!((t.scaled(lambda).value(&xs) - b.value).abs() <= 1e-10 * lambda.max(1.0));
    }
}
